#include "maxtrust/conventional.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "maxtrust/graph.hpp"

namespace maxtrust {

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

RealMatrix RealMatrix::identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix transpose(const RealMatrix& a) {
    RealMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

std::vector<double> mat_vec(const RealMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw ShapeError("mat_vec: length mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        out[i] = acc;
    }
    return out;
}

RealMatrix conventional_image(const TropicalMatrix& a) {
    RealMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = a(i, j).is_finite() ? a(i, j).value() : 0.0;
    return out;
}

TropicalMatrix tropical_image(const RealMatrix& a) {
    TropicalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0.0) out(i, j) = Tropical{a(i, j)};
    return out;
}

double l1_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("l1_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

bool is_row_stochastic(const RealMatrix& a, double tol) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (double v : a.row(i)) {
            if (v < 0.0) return false;
            s += v;
        }
        if (std::abs(s - 1.0) > tol) return false;
    }
    return true;
}

Classification classify_matrix(const RealMatrix& a) {
    if (!a.square()) throw ShapeError("classify_matrix: matrix is not square");
    Classification c;
    c.positive = true;
    c.nonnegative = true;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (double v : a.row(i)) {
            if (!(v > 0.0)) c.positive = false;
            if (!(v >= 0.0)) c.nonnegative = false;
        }
    }
    if (a.rows() == 0) c.positive = false;
    c.row_stochastic = is_row_stochastic(a);
    c.irreducible = is_irreducible(a);
    return c;
}

namespace {

Eigen::MatrixXd to_eigen(const RealMatrix& a) {
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

void normalize_l1(std::vector<double>& x) {
    const double s = l1_norm(x);
    for (double& v : x) v /= s;
}

// Newton on det(M - lambda I): the step is 1 / tr((M - lambda I)^-1).
double newton_refine(const RealMatrix& m, double lambda) {
    const Eigen::MatrixXd base = to_eigen(m);
    const auto n = base.rows();
    for (int it = 0; it < 20; ++it) {
        Eigen::MatrixXd shifted = base - lambda * Eigen::MatrixXd::Identity(n, n);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
        if (!lu.isInvertible()) break;
        const double tr = lu.inverse().trace();
        if (!std::isfinite(tr) || tr == 0.0) break;
        const double step = 1.0 / tr;
        lambda += step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(lambda))) break;
    }
    return lambda;
}

}  // namespace

std::pair<double, double> leading_moduli(const RealMatrix& m) {
    if (!m.square()) throw ShapeError("leading_moduli: matrix is not square");
    if (m.rows() == 0) return {0.0, 0.0};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m), false);
    std::vector<double> moduli;
    for (const auto& ev : solver.eigenvalues()) moduli.push_back(std::abs(ev));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    return {moduli[0], moduli.size() > 1 ? moduli[1] : 0.0};
}

ConventionalEigenPair dominant_eigenpair_conventional(const RealMatrix& a, const DominantEigenOptions& opts) {
    if (!a.square()) throw ShapeError("dominant_eigenpair_conventional: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) throw ShapeError("dominant_eigenpair_conventional: empty matrix");
    for (std::size_t i = 0; i < n; ++i)
        for (double v : a.row(i))
            if (v < 0.0) throw DomainError("dominant_eigenpair_conventional: negative entry");

    const RealMatrix at = transpose(a);
    const auto [l1, l2] = leading_moduli(at);
    if (l1 - l2 <= opts.dominance_gap) {
        throw DominanceFailure("no dominant eigenvalue: |lambda1| = " + std::to_string(l1) +
                                   ", |lambda2| = " + std::to_string(l2),
                               l1, l2);
    }

    ConventionalEigenPair out;
    out.second_modulus = l2;
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::deque<double> recent;  // update norms over the stall window
    double lambda = 0.0;
    for (std::size_t it = 1; it <= opts.max_iters; ++it) {
        std::vector<double> y = mat_vec(at, x);
        const double num = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
        const double den = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
        lambda = num / den;
        const double norm = l1_norm(y);
        if (norm == 0.0) throw DominanceFailure("power iteration collapsed to the zero vector", l1, l2);
        for (double& v : y) v /= norm;
        const double delta = l1_distance(x, y);
        x = std::move(y);
        out.iterations = it;
        if (delta < opts.tolerance) {
            out.lambda = opts.newton_refinement ? newton_refine(at, lambda) : lambda;
            normalize_l1(x);
            out.vector = std::move(x);
            return out;
        }
        recent.push_back(delta);
        if (recent.size() > opts.stall_window) {
            if (recent.back() >= recent.front()) {
                throw DominanceFailure("power iteration oscillates: update norm did not shrink over " +
                                           std::to_string(opts.stall_window) + " iterations",
                                       l1, l2);
            }
            recent.pop_front();
        }
    }
    throw NonConvergence("power iteration hit max_iters", {x});
}

std::vector<double> stationary_vector(const RealMatrix& c, double tol, std::size_t max_iters) {
    if (!c.square()) throw ShapeError("stationary_vector: matrix is not square");
    const std::size_t n = c.rows();
    const RealMatrix ct = transpose(c);
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    for (std::size_t it = 0; it < max_iters; ++it) {
        std::vector<double> y = mat_vec(ct, x);
        for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (x[i] + y[i]);
        normalize_l1(y);
        const double delta = l1_distance(x, y);
        x = std::move(y);
        if (delta < tol) return x;
    }
    throw NonConvergence("stationary_vector hit max_iters", {x});
}

}  // namespace maxtrust
