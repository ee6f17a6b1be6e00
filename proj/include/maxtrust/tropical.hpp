#pragma once

/**
 * Max-plus (tropical) semiring.
 *
 *   x (+) y = max(x, y)     neutral element eps = -inf
 *   x (x) y = x + y         neutral element e   = 0
 *
 * eps is kept as an explicit state of Tropical and every operation branches
 * on it, so -inf never arises from finite arithmetic and (-inf) + (+inf)
 * cannot happen.
 */

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "maxtrust/errors.hpp"

namespace maxtrust {

class Tropical {
public:
    constexpr Tropical() = default;  // eps
    // IEEE -inf maps to eps so numeric inputs can carry it.
    constexpr Tropical(double v)  // NOLINT(google-explicit-constructor)
        : value_(v), finite_(v != -std::numeric_limits<double>::infinity()) {}

    static constexpr Tropical eps() { return Tropical{}; }
    static constexpr Tropical e() { return Tropical{0.0}; }

    constexpr bool is_eps() const { return !finite_; }
    constexpr bool is_finite() const { return finite_; }

    // Finite value; -inf for eps.
    constexpr double value() const {
        return finite_ ? value_ : -std::numeric_limits<double>::infinity();
    }

    friend constexpr bool operator==(Tropical a, Tropical b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }

    // Order of R_max: eps is the bottom element.
    friend constexpr bool operator<(Tropical a, Tropical b) {
        if (!b.finite_) return false;
        if (!a.finite_) return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator>(Tropical a, Tropical b) { return b < a; }
    friend constexpr bool operator<=(Tropical a, Tropical b) { return !(b < a); }
    friend constexpr bool operator>=(Tropical a, Tropical b) { return !(a < b); }

private:
    double value_ = 0.0;
    bool finite_ = false;
};

inline constexpr Tropical eps = Tropical::eps();

constexpr Tropical oplus(Tropical x, Tropical y) {
    if (x.is_eps()) return y;
    if (y.is_eps()) return x;
    return Tropical{x.value() < y.value() ? y.value() : x.value()};
}

constexpr Tropical otimes(Tropical x, Tropical y) {
    if (x.is_eps() || y.is_eps()) return eps;
    return Tropical{x.value() + y.value()};
}

// x^(k) = k * x; eps^0 is e by convention.
constexpr Tropical power(Tropical x, long long k) {
    if (k == 0) return Tropical::e();
    if (x.is_eps()) return eps;
    return Tropical{x.value() * static_cast<double>(k)};
}

// The ⊗-inverse of a finite scalar; eps has none.
Tropical inverse(Tropical x);

// Absolute tolerance on finite values, exact on eps.
bool approx_equal(Tropical a, Tropical b, double tol = 1e-9);

std::string to_string(Tropical x);
std::ostream& operator<<(std::ostream& os, Tropical x);

using TropicalVector = std::vector<Tropical>;

bool is_admissible_eigenvector(std::span<const Tropical> v);
bool all_finite(std::span<const Tropical> v);
TropicalVector vec_oplus(std::span<const Tropical> a, std::span<const Tropical> b);
TropicalVector vec_shift(std::span<const Tropical> v, Tropical a);
Tropical vec_max(std::span<const Tropical> v);

// Dense row-major max-plus matrix.
class TropicalMatrix {
public:
    TropicalMatrix() = default;
    TropicalMatrix(std::size_t rows, std::size_t cols, Tropical fill = eps);
    TropicalMatrix(std::initializer_list<std::initializer_list<Tropical>> rows);

    static TropicalMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static TropicalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Tropical& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Tropical operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Tropical> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    friend bool operator==(const TropicalMatrix&, const TropicalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Tropical> data_;
};

TropicalMatrix mat_mul(const TropicalMatrix& a, const TropicalMatrix& b);
TropicalVector mat_vec(const TropicalMatrix& a, std::span<const Tropical> x);
TropicalMatrix mat_oplus(const TropicalMatrix& a, const TropicalMatrix& b);
TropicalMatrix mat_pow(const TropicalMatrix& a, unsigned k);
TropicalMatrix transpose(const TropicalMatrix& a);
Tropical trace(const TropicalMatrix& a);
// Every finite entry shifted by s (i.e. s ⊗ A).
TropicalMatrix shifted(const TropicalMatrix& a, double s);
// Entries at the given row and column indices, in that order.
TropicalMatrix submatrix(const TropicalMatrix& a, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols);
bool approx_equal(const TropicalMatrix& a, const TropicalMatrix& b, double tol = 1e-9);

// Text format: "n m" on the first line, then n rows of m tokens; finite
// entries as decimal literals, eps as the token "eps". Blank lines and lines
// starting with '#' are skipped. Finite values are written with 17
// significant digits so they re-parse bit-exactly.
TropicalMatrix read_matrix(std::istream& in);
TropicalMatrix parse_matrix(const std::string& text);
void write_matrix(std::ostream& out, const TropicalMatrix& a);
std::string format_matrix(const TropicalMatrix& a);
TropicalMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const TropicalMatrix& a);

std::string format_scalar(Tropical x);
Tropical parse_scalar(const std::string& token);

}  // namespace maxtrust
