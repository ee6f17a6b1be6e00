#pragma once

// Conventional-algebra matrices and the eigen oracles used to judge
// Eigentrust: classification, dominant eigenpair by power iteration.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "maxtrust/tropical.hpp"

namespace maxtrust {

class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    RealMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static RealMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

RealMatrix transpose(const RealMatrix& a);
std::vector<double> mat_vec(const RealMatrix& a, std::span<const double> x);

// eps -> 0 (absent edge in the conventional reading).
RealMatrix conventional_image(const TropicalMatrix& a);
// 0 -> eps, every other value kept.
TropicalMatrix tropical_image(const RealMatrix& a);

double l1_norm(std::span<const double> x);
double l1_distance(std::span<const double> a, std::span<const double> b);

struct Classification {
    bool positive = false;
    bool nonnegative = false;
    bool row_stochastic = false;  // within 1e-9
    bool irreducible = false;
};

Classification classify_matrix(const RealMatrix& a);
bool is_row_stochastic(const RealMatrix& a, double tol = 1e-9);

struct ConventionalEigenPair {
    double lambda = 0.0;
    std::vector<double> vector;  // unit 1-norm, non-negative orientation
    std::size_t iterations = 0;
    double second_modulus = 0.0;  // |lambda_2| estimate from the dominance probe
};

struct DominantEigenOptions {
    double tolerance = 1e-13;     // on the 1-norm of the update
    std::size_t max_iters = 200000;
    std::size_t stall_window = 50;  // non-shrinking update norm over this many steps => oscillation
    double dominance_gap = 1e-9;  // |lambda1| - |lambda2| below this => no dominant eigenvalue
    bool newton_refinement = false;
};

// Dominant eigenvalue and right eigenvector of A^T (equivalently the left
// eigenvector of A), by power iteration with a Rayleigh-quotient estimate.
// Throws DominanceFailure when |lambda1| and |lambda2| cannot be separated or
// the iteration oscillates.
ConventionalEigenPair dominant_eigenpair_conventional(const RealMatrix& a,
                                                      const DominantEigenOptions& opts = {});

// Moduli of the two largest eigenvalues of M (largest first), from a dense
// eigenvalue decomposition. For n == 1 the second is 0.
std::pair<double, double> leading_moduli(const RealMatrix& m);

// Lim of the lazy chain (I + C^T)/2 from the uniform vector. For a
// row-stochastic C this is the Cesaro limit of Eigentrust started uniform,
// and coincides with the dominant eigenvector whenever one exists.
std::vector<double> stationary_vector(const RealMatrix& c, double tol = 1e-12,
                                      std::size_t max_iters = 1000000);

}  // namespace maxtrust
