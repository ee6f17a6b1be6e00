#pragma once

// Max-plus spectral tools for irreducible matrices: the power method,
// the trace formula, and the Kleene-star solves used by MaxTrust.

#include <cstddef>
#include <span>
#include <vector>

#include "maxtrust/tropical.hpp"

namespace maxtrust {

struct MaxPlusEigenPair {
    Tropical lambda = eps;
    TropicalVector vector;
    std::size_t iterations = 0;  // p at detection
    std::size_t transient = 0;   // q
    std::size_t cyclicity = 0;   // p - q
};

// Power method on C^T: v_{p+1} = C^T (x) v_p from v_0 = r until some earlier
// iterate satisfies v_p = c (x) v_q. Then lambda = c / (p - q) and
// v = (+)_{i=1}^{p-q} lambda^(p-q-i) (x) v_{q+i-1}, so C^T (x) v = lambda (x) v.
// Iterates are compared with an absolute tolerance of 1e-9; the cap is
// n^3 + 100 iterations.
MaxPlusEigenPair max_power(const TropicalMatrix& c, std::span<const Tropical> r);

// max over i = 1..n of tr(A^i) / i.
Tropical eigenvalue_by_traces(const TropicalMatrix& a);

// Least solution of x = A (x) x (+) b, i.e. A* (x) b, by Bellman-Ford
// relaxation. Improvements of at most `tol` are ignored so zero-weight
// cycles do not loop on rounding noise; callers whose shift comes from a
// computed eigenvalue should pass a tolerance above its rounding error. A
// cycle of larger positive weight reachable from a finite entry of b throws
// DomainError.
TropicalVector star_solve(const TropicalMatrix& a, std::span<const Tropical> b, double tol = 1e-12);

// Nodes lying on a cycle of mean weight >= lambda - tol.
std::vector<std::size_t> critical_nodes(const TropicalMatrix& a, double lambda, double tol = 1e-9);

}  // namespace maxtrust
