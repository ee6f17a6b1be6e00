#include "maxtrust/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "maxtrust/graph.hpp"

namespace maxtrust {

namespace {

constexpr double kPeriodTol = 1e-9;

// Shift-invariant fingerprint: sum of v - max(v) over finite entries.
double fingerprint(const TropicalVector& v) {
    const Tropical top = vec_max(v);
    if (top.is_eps()) return 0.0;
    double s = 0.0;
    for (auto x : v)
        if (x.is_finite()) s += x.value() - top.value();
    return s;
}

// Whether a - b is constant on finite entries with identical eps patterns;
// the constant goes to *c.
bool differ_by_constant(const TropicalVector& a, const TropicalVector& b, double* c) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_finite() != b[i].is_finite()) return false;
        if (a[i].is_eps()) continue;
        const double d = a[i].value() - b[i].value();
        if (!any) {
            lo = hi = d;
            any = true;
        } else {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        if (hi - lo > kPeriodTol) return false;
    }
    if (!any) return false;
    *c = 0.5 * (lo + hi);
    return true;
}

std::vector<double> to_doubles(const TropicalVector& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
    return out;
}

}  // namespace

MaxPlusEigenPair max_power(const TropicalMatrix& c, std::span<const Tropical> r) {
    if (!c.square()) throw ShapeError("max_power: matrix is not square");
    if (r.size() != c.rows()) throw ShapeError("max_power: start vector length differs from matrix order");
    if (!is_irreducible(c)) throw DomainError("max_power: matrix is reducible");
    if (!all_finite(r)) throw DomainError("max_power: start vector must be finite");

    const std::size_t n = c.rows();
    const TropicalMatrix ct = transpose(c);
    const std::size_t cap = n * n * n + 100;

    std::vector<TropicalVector> traj;
    traj.emplace_back(r.begin(), r.end());
    std::multimap<double, std::size_t> seen;
    seen.emplace(fingerprint(traj.back()), 0);
    const double key_tol = kPeriodTol * static_cast<double>(n);

    for (std::size_t p = 1; p <= cap; ++p) {
        traj.push_back(mat_vec(ct, traj.back()));
        const TropicalVector& vp = traj.back();
        const double key = fingerprint(vp);
        // Earliest q wins, which keeps the reported cycle minimal.
        std::size_t best_q = p;
        double best_c = 0.0;
        for (auto it = seen.lower_bound(key - key_tol); it != seen.end() && it->first <= key + key_tol; ++it) {
            double cst = 0.0;
            if (it->second < best_q && differ_by_constant(vp, traj[it->second], &cst)) {
                best_q = it->second;
                best_c = cst;
            }
        }
        if (best_q < p) {
            const std::size_t len = p - best_q;
            const double lambda = best_c / static_cast<double>(len);
            MaxPlusEigenPair out;
            out.lambda = Tropical{lambda};
            out.iterations = p;
            out.transient = best_q;
            out.cyclicity = len;
            out.vector.assign(n, eps);
            for (std::size_t i = 1; i <= len; ++i) {
                const Tropical scale = power(Tropical{lambda}, static_cast<long long>(len - i));
                out.vector = vec_oplus(out.vector, vec_shift(traj[best_q + i - 1], scale));
            }
            return out;
        }
        seen.emplace(key, p);
    }

    std::vector<std::vector<double>> dump;
    dump.reserve(traj.size());
    for (const auto& v : traj) dump.push_back(to_doubles(v));
    throw NonConvergence("max_power: no periodic regime within " + std::to_string(cap) + " iterations",
                         std::move(dump));
}

Tropical eigenvalue_by_traces(const TropicalMatrix& a) {
    if (!a.square()) throw ShapeError("eigenvalue_by_traces: matrix is not square");
    if (!is_irreducible(a)) throw DomainError("eigenvalue_by_traces: matrix is reducible");
    Tropical best = eps;
    TropicalMatrix pw = a;
    for (std::size_t i = 1; i <= a.rows(); ++i) {
        if (i > 1) pw = mat_mul(a, pw);
        const Tropical tr = trace(pw);
        if (tr.is_finite()) best = oplus(best, Tropical{tr.value() / static_cast<double>(i)});
    }
    return best;
}

TropicalVector star_solve(const TropicalMatrix& a, std::span<const Tropical> b, double tol) {
    if (!a.square()) throw ShapeError("star_solve: matrix is not square");
    if (b.size() != a.rows()) throw ShapeError("star_solve: right-hand side length mismatch");
    const std::size_t n = a.rows();
    TropicalVector x(b.begin(), b.end());
    for (std::size_t round = 0; round <= n + 1; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            Tropical best = x[i];
            for (std::size_t j = 0; j < n; ++j) {
                const Tropical cand = otimes(a(i, j), x[j]);
                if (cand.is_finite() && (best.is_eps() || cand.value() > best.value() + tol)) best = cand;
            }
            if (!(best == x[i])) {
                x[i] = best;
                changed = true;
            }
        }
        if (!changed) return x;
    }
    throw DomainError("star_solve: positive-weight cycle reachable, least solution is unbounded");
}

std::vector<std::size_t> critical_nodes(const TropicalMatrix& a, double lambda, double tol) {
    if (!a.square()) throw ShapeError("critical_nodes: matrix is not square");
    const std::size_t n = a.rows();
    TropicalMatrix w = shifted(a, -lambda);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const Tropical wik = w(i, k);
            if (wik.is_eps()) continue;
            for (std::size_t j = 0; j < n; ++j) w(i, j) = oplus(w(i, j), otimes(wik, w(k, j)));
        }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (w(i, i).is_finite() && w(i, i).value() >= -tol) out.push_back(i);
    return out;
}

}  // namespace maxtrust
