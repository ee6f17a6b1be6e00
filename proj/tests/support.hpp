#pragma once

// Random matrix families and brute-force oracles shared by the unit tests
// and the acceptance binary. Nothing here calls into the code under test
// except for the matrix containers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "maxtrust/conventional.hpp"
#include "maxtrust/tropical.hpp"

namespace maxtrust::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline TropicalVector random_finite_vector(Rng& rng, std::size_t n, double lo = -5, double hi = 5) {
    TropicalVector v(n);
    for (auto& x : v) x = uniform(rng, lo, hi);
    return v;
}

// Strongly connected: a random Hamiltonian cycle plus extra finite entries
// with density p. n == 1 gets a self-loop.
inline TropicalMatrix random_irreducible(Rng& rng, std::size_t n, double lo = -5, double hi = 5) {
    TropicalMatrix a(n, n);
    const double p = uniform(rng, 0.05, 0.6);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (coin(rng, p)) a(i, j) = uniform(rng, lo, hi);
    const auto cyc = random_permutation(rng, n);
    for (std::size_t k = 0; k < n; ++k) a(cyc[k], cyc[(k + 1) % n]) = uniform(rng, lo, hi);
    return a;
}

// Reducible matrix on 2..max_blocks strongly connected groups of agents,
// with edges between groups only from an earlier group to a later one, then
// relabelled by a random permutation. Singleton groups keep a self-loop when
// `regular` is set, so no row or column is all eps; otherwise a singleton
// may be a bare eps node.
struct Reducible {
    TropicalMatrix a;
    std::vector<std::vector<std::size_t>> groups;  // agent ids after relabelling
};

inline Reducible random_reducible(Rng& rng, std::size_t n, std::size_t max_blocks, bool regular, double lo,
                                  double hi) {
    const std::size_t q = pick(rng, 2, std::min(max_blocks, n));
    // sizes: every group at least 1
    std::vector<std::size_t> sizes(q, 1);
    for (std::size_t extra = n - q; extra > 0; --extra) ++sizes[pick(rng, 0, q - 1)];
    std::vector<std::size_t> owner;
    for (std::size_t g = 0; g < q; ++g) owner.insert(owner.end(), sizes[g], g);

    TropicalMatrix b(n, n);
    std::size_t offset = 0;
    for (std::size_t g = 0; g < q; ++g) {
        const std::size_t m = sizes[g];
        if (m == 1) {
            if (regular || coin(rng, 0.5)) b(offset, offset) = uniform(rng, lo, hi);
        } else {
            auto blk = random_irreducible(rng, m, lo, hi);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) b(offset + i, offset + j) = blk(i, j);
        }
        offset += m;
    }
    const double pc = uniform(rng, 0.05, 0.4);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (owner[i] < owner[j] && coin(rng, pc)) b(i, j) = uniform(rng, lo, hi);

    const auto perm = random_permutation(rng, n);  // position k -> agent perm[k]
    Reducible out{TropicalMatrix(n, n), std::vector<std::vector<std::size_t>>(q)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.a(perm[i], perm[j]) = b(i, j);
    for (std::size_t k = 0; k < n; ++k) out.groups[owner[k]].push_back(perm[k]);
    for (auto& g : out.groups) std::sort(g.begin(), g.end());
    return out;
}

// Maximum cycle mean by enumerating every elementary cycle (each cycle is
// rooted at its smallest node). eps when the graph is acyclic.
inline Tropical brute_force_max_cycle_mean(const TropicalMatrix& a) {
    const std::size_t n = a.rows();
    Tropical best = eps;
    std::vector<char> on_path(n, 0);
    auto dfs = [&](auto& self, std::size_t root, std::size_t u, double weight, std::size_t len) -> void {
        for (std::size_t v = root; v < n; ++v) {
            if (a(u, v).is_eps()) continue;
            const double w = weight + a(u, v).value();
            if (v == root) {
                best = oplus(best, Tropical{w / static_cast<double>(len + 1)});
            } else if (!on_path[v]) {
                on_path[v] = 1;
                self(self, root, v, w, len + 1);
                on_path[v] = 0;
            }
        }
    };
    for (std::size_t r = 0; r < n; ++r) {
        on_path[r] = 1;
        dfs(dfs, r, r, 0.0, 0);
        on_path[r] = 0;
    }
    return best;
}

// Reducible in the permutation sense: some P puts A into [[A11, A12], [eps, A22]]
// with both diagonal blocks non-empty. Only meaningful for n >= 2.
inline bool brute_force_reducible(const TropicalMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        for (std::size_t k = 1; k < n; ++k) {
            bool lower_eps = true;
            for (std::size_t i = k; i < n && lower_eps; ++i)
                for (std::size_t j = 0; j < k && lower_eps; ++j)
                    if (a(p[i], p[j]).is_finite()) lower_eps = false;
            if (lower_eps) return true;
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

// Nodes reachable from each node, by repeated DFS.
inline std::vector<std::vector<char>> reachability(const TropicalMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (a(u, v).is_finite() && !r[s][v]) {
                    r[s][v] = 1;
                    stack.push_back(v);
                }
        }
    }
    return r;
}

// pi C = pi, sum pi = 1 by a dense linear solve.
inline std::vector<double> stationary_by_linear_solve(const RealMatrix& c) {
    const auto n = static_cast<Eigen::Index>(c.rows());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = c(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) - (i == j ? 1.0 : 0.0);
    m.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    const Eigen::VectorXd pi = m.fullPivLu().solve(rhs);
    return {pi.data(), pi.data() + n};
}

inline RealMatrix random_positive_stochastic(Rng& rng, std::size_t n) {
    RealMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < n; ++j) sum += c(i, j) = uniform(rng, 0.01, 1.0);
        for (std::size_t j = 0; j < n; ++j) c(i, j) /= sum;
    }
    return c;
}

inline std::vector<double> random_probability(Rng& rng, std::size_t n) {
    std::vector<double> r(n);
    double sum = 0;
    for (auto& x : r) sum += x = uniform(rng, 0.01, 1.0);
    for (auto& x : r) x /= sum;
    return r;
}

inline std::vector<double> values(const TropicalVector& v) {
    std::vector<double> out;
    for (auto x : v) out.push_back(x.value());
    return out;
}

// Descending order, ties to the lower index; independent of ranking().
inline std::vector<std::size_t> argsort_desc(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] > v[b]; });
    return idx;
}

inline bool has_near_tie(const std::vector<double>& v, double tol) {
    auto s = v;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] <= tol) return true;
    return false;
}

}  // namespace maxtrust::testing
