#include "maxtrust/trust.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "maxtrust/spectral.hpp"

namespace maxtrust {

void InteractionLedger::set(std::size_t i, std::size_t j, long long value) {
    if (i >= n_ || j >= n_) throw ShapeError("ledger index out of range");
    s_[i * n_ + j] = value;
    known_[i * n_ + j] = 1;
}

void InteractionLedger::record(std::size_t i, std::size_t j, bool satisfactory) {
    if (i >= n_ || j >= n_) throw ShapeError("ledger index out of range");
    s_[i * n_ + j] += satisfactory ? 1 : -1;
    known_[i * n_ + j] = 1;
}

void InteractionLedger::forget(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_) throw ShapeError("ledger index out of range");
    s_[i * n_ + j] = 0;
    known_[i * n_ + j] = 0;
}

namespace {

template <typename T>
T parse_int(const std::string& tok, std::size_t line, std::size_t col) {
    T v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("expected an integer, got '" + tok + "'", line, col);
    return v;
}

std::vector<std::pair<std::string, std::size_t>> split_columns(const std::string& line) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.emplace_back(line.substr(start, i - start), start + 1);
    }
    return out;
}

}  // namespace

InteractionLedger read_ledger(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_n = false;
    InteractionLedger ledger;
    while (std::getline(in, line)) {
        ++line_no;
        const auto toks = split_columns(line);
        if (toks.empty() || toks.front().first[0] == '#') continue;
        if (!have_n) {
            if (toks.size() != 1) throw ParseError("first line must hold the agent count", line_no, 1);
            ledger = InteractionLedger(parse_int<std::size_t>(toks[0].first, line_no, toks[0].second));
            have_n = true;
            continue;
        }
        if (toks.size() != 3) throw ParseError("expected 'i j s'", line_no, toks.front().second);
        const auto i = parse_int<std::size_t>(toks[0].first, line_no, toks[0].second);
        const auto j = parse_int<std::size_t>(toks[1].first, line_no, toks[1].second);
        const auto s = parse_int<long long>(toks[2].first, line_no, toks[2].second);
        if (i >= ledger.size()) throw ParseError("agent index out of range", line_no, toks[0].second);
        if (j >= ledger.size()) throw ParseError("agent index out of range", line_no, toks[1].second);
        if (ledger.known(i, j)) throw ParseError("pair listed twice", line_no, toks[0].second);
        ledger.set(i, j, s);
    }
    if (!have_n) throw ParseError("empty ledger input", 1, 1);
    return ledger;
}

InteractionLedger parse_ledger(const std::string& text) {
    std::istringstream in(text);
    return read_ledger(in);
}

void write_ledger(std::ostream& out, const InteractionLedger& ledger) {
    out << ledger.size() << '\n';
    for (std::size_t i = 0; i < ledger.size(); ++i)
        for (std::size_t j = 0; j < ledger.size(); ++j)
            if (ledger.known(i, j)) out << i << ' ' << j << ' ' << ledger.s(i, j) << '\n';
}

InteractionLedger load_ledger(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ledger file '" + path + "'");
    return read_ledger(in);
}

LocalScores::LocalScores(const InteractionLedger& ledger) : LocalScores(ledger.size()) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (ledger.known(i, j)) {
                at(i, j) = static_cast<double>(ledger.s(i, j));
                known[i * n + j] = 1;
            }
}

TrustMatrix normalize_local_trust(const LocalScores& scores) {
    const std::size_t n = scores.n;
    if (n == 0) throw ShapeError("normalize_local_trust: empty ledger");
    TrustMatrix out{RealMatrix(n, n), TropicalMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (scores.is_known(i, j)) total += std::max(scores.at(i, j), 0.0);
        if (total <= 0.0) {
            for (std::size_t j = 0; j < n; ++j) out.conventional(i, j) = 1.0 / static_cast<double>(n);
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!scores.is_known(i, j)) continue;
            const double c = std::max(scores.at(i, j), 0.0) / total;
            out.conventional(i, j) = c;
            out.tropical(i, j) = Tropical{c};
        }
    }
    return out;
}

TrustMatrix normalize_local_trust(const InteractionLedger& ledger) {
    return normalize_local_trust(LocalScores(ledger));
}

EigentrustResult eigentrust(const RealMatrix& c, std::span<const double> r, const EigentrustOptions& opts) {
    if (!c.square()) throw ShapeError("eigentrust: matrix is not square");
    const std::size_t n = c.rows();
    if (r.size() != n) throw ShapeError("eigentrust: start vector length differs from matrix order");
    if (!is_row_stochastic(c)) throw DomainError("eigentrust: matrix is not row-stochastic");
    if (!(opts.epsilon > 0.0)) throw DomainError("eigentrust: epsilon must be positive");
    double mass = 0.0;
    for (double x : r) {
        if (x < 0.0) throw DomainError("eigentrust: start vector has a negative entry");
        mass += x;
    }
    if (std::abs(mass - 1.0) > 1e-9) throw DomainError("eigentrust: start vector is not a probability vector");

    EigentrustResult res;
    const auto g = precedence_graph(c);
    const auto closed = closed_classes(g);
    res.closed_class_count = closed.size();
    if (closed.size() == 1) res.period = class_period(g, closed.front());
    res.dominant = closed.size() == 1 && res.period == 1;

    const RealMatrix ct = transpose(c);
    std::vector<double> t(r.begin(), r.end());
    for (std::size_t k = 1; k <= opts.max_iters; ++k) {
        std::vector<double> next = mat_vec(ct, t);
        const double norm = l1_norm(next);
        for (double& x : next) x /= norm;
        const double delta = l1_distance(next, t);
        res.iterations = k;
        if (delta < opts.epsilon) {
            res.t = std::move(next);
            return res;
        }
        if (k == opts.max_iters) {
            throw NonConvergence("eigentrust: no convergence within " + std::to_string(opts.max_iters) +
                                     " iterations",
                                 {t, next});
        }
        t = std::move(next);
    }
    throw NonConvergence("eigentrust: max_iters is zero", {t});
}

TropicalVector recurrence_oracle(const TropicalMatrix& d, std::span<const Tropical> w, unsigned k) {
    if (!d.square() || d.rows() != w.size()) throw ShapeError("recurrence_oracle: shape mismatch");
    TropicalVector t(w.begin(), w.end());
    for (unsigned i = 0; i < k; ++i) t = mat_vec(d, t);
    return t;
}

namespace {

// Later blocks l > j whose coupling block (j, l) is not all eps.
std::vector<std::size_t> coupling_set(const NormalForm& nf, std::size_t j) {
    std::vector<std::size_t> h;
    for (std::size_t l = j + 1; l < nf.block_count(); ++l)
        if (!nf.block_is_zero(j, l)) h.push_back(l);
    return h;
}

}  // namespace

std::vector<double> growth_rates(const NormalForm& nf, std::span<const Tropical> block_lambdas) {
    const std::size_t q = nf.block_count();
    if (block_lambdas.size() != q) throw ShapeError("growth_rates: one lambda per block required");
    if (q == 0) return {};
    std::vector<double> xi(q, 0.0);
    for (std::size_t jj = q; jj-- > 0;) {
        Tropical acc = block_lambdas[jj];
        for (auto l : coupling_set(nf, jj)) acc = oplus(acc, Tropical{xi[l]});
        if (acc.is_eps()) {
            throw DomainError("growth_rates: block " + std::to_string(jj) +
                              " has no cycle and no downstream coupling");
        }
        xi[jj] = acc.value();
    }
    return xi;
}

std::string to_string(VectorRule rule) {
    switch (rule) {
        case VectorRule::Asymptotic: return "asymptotic";
        case VectorRule::AsWritten: return "as-written";
        case VectorRule::AsWrittenNoExponent: return "as-written-no-exponent";
    }
    return "unknown";
}

VectorRule parse_vector_rule(const std::string& name) {
    if (name == "asymptotic") return VectorRule::Asymptotic;
    if (name == "as-written") return VectorRule::AsWritten;
    if (name == "as-written-no-exponent") return VectorRule::AsWrittenNoExponent;
    throw DomainError("unknown vector rule '" + name + "'");
}

std::vector<std::size_t> irregular_agents(const TropicalMatrix& c) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        bool row = false, col = false;
        for (std::size_t j = 0; j < c.cols(); ++j) {
            row = row || c(i, j).is_finite();
            col = col || c(j, i).is_finite();
        }
        if (!row || !col) bad.push_back(i);
    }
    return bad;
}

namespace {

TropicalVector slice(std::span<const Tropical> v, const BlockRange& r) {
    return {v.begin() + static_cast<std::ptrdiff_t>(r.begin), v.begin() + static_cast<std::ptrdiff_t>(r.end)};
}

// Positions of the permuted matrix reachable from block r, ascending.
std::vector<std::size_t> reachable_from(const NormalForm& nf, const BlockRange& r) {
    const std::size_t n = nf.permutation.size();
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t k = r.begin; k < r.end; ++k) {
        seen[k] = 1;
        stack.push_back(k);
    }
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (std::size_t u = r.begin; u < n; ++u)
            if (!seen[u] && nf.permuted(v, u).is_finite()) {
                seen[u] = 1;
                stack.push_back(u);
            }
    }
    std::vector<std::size_t> out;
    for (std::size_t k = r.begin; k < n; ++k)
        if (seen[k]) out.push_back(k);
    return out;
}

// Asymptotic profile of block j: least solution of
//   v_j = (D_jj - xi) (x) v_j (+) rhs,
// where rhs collects downstream blocks growing at the same rate and, when
// the block's own cycles reach xi, the limits at its critical nodes.
TropicalVector asymptotic_block(const NormalForm& nf, std::size_t j, double xi_j, Tropical lambda_j,
                                const std::vector<double>& xi, const TropicalVector& v_perm,
                                const TropicalVector& w_perm, double tol) {
    const BlockRange& r = nf.blocks[j];
    const std::size_t m = r.size();
    TropicalVector rhs(m, eps);
    for (auto l : coupling_set(nf, j)) {
        if (std::abs(xi[l] - xi_j) > tol) continue;
        const auto& rl = nf.blocks[l];
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = rl.begin; b < rl.end; ++b) {
                const Tropical term = otimes(nf.permuted(r.begin + a, b), v_perm[b]);
                rhs[a] = oplus(rhs[a], otimes(term, Tropical{-xi_j}));
            }
    }

    const TropicalMatrix djj = nf.diagonal_block(j);
    if (lambda_j.is_finite() && lambda_j.value() >= xi_j - tol) {
        // Positions reachable from block j grow no faster than xi_j, so the
        // shifted star over them is finite. Block j comes first in `reach`.
        const auto reach = reachable_from(nf, r);
        const TropicalMatrix d_reach = shifted(submatrix(nf.permuted, reach, reach), -xi_j);
        TropicalVector w_reach(reach.size());
        for (std::size_t k = 0; k < reach.size(); ++k) w_reach[k] = w_perm[reach[k]];
        const TropicalVector y = star_solve(d_reach, w_reach, tol);
        for (auto c : critical_nodes(djj, xi_j, tol)) rhs[c] = oplus(rhs[c], y[c]);
    }
    return star_solve(shifted(djj, -xi_j), rhs, tol);
}

}  // namespace

MaxTrustSolution maxtrust(const TropicalMatrix& c, std::span<const Tropical> w, unsigned T,
                          const MaxTrustOptions& opts) {
    if (!c.square()) throw ShapeError("maxtrust: matrix is not square");
    const std::size_t n = c.rows();
    if (n == 0) throw ShapeError("maxtrust: empty matrix");
    if (w.size() != n) throw ShapeError("maxtrust: start vector length differs from matrix order");
    if (!all_finite(w)) throw DomainError("maxtrust: start vector must be finite");
    const auto bad = irregular_agents(c);
    if (!bad.empty()) {
        std::string names;
        for (auto i : bad) names += (names.empty() ? "" : ", ") + std::to_string(i);
        throw DomainError("maxtrust: matrix is not regular; all-eps row or column at agents " + names);
    }

    MaxTrustSolution sol;
    sol.T = T;
    sol.nf = normal_form(transpose(c));
    const NormalForm& nf = sol.nf;
    const std::size_t q = nf.block_count();

    TropicalVector w_perm(n);
    for (std::size_t k = 0; k < n; ++k) w_perm[k] = w[nf.permutation[k]];

    std::vector<Tropical> lambdas(q, eps);
    std::vector<MaxPlusEigenPair> pairs(q);
    sol.blocks.resize(q);
    for (std::size_t j = 0; j < q; ++j) {
        auto& diag = sol.blocks[j];
        diag.range = nf.blocks[j];
        for (std::size_t k = diag.range.begin; k < diag.range.end; ++k) diag.agents.push_back(nf.permutation[k]);
        const TropicalMatrix djj = nf.diagonal_block(j);
        if (djj.rows() == 1 && djj(0, 0).is_eps()) continue;
        try {
            // max_power iterates the transpose of its argument.
            pairs[j] = max_power(transpose(djj), slice(w_perm, nf.blocks[j]));
        } catch (const NonConvergence& e) {
            throw NonConvergence("maxtrust: block " + std::to_string(j) + ": " + e.what(), e.trajectory());
        }
        lambdas[j] = pairs[j].lambda;
        diag.power_iterations = pairs[j].iterations;
        diag.cyclicity = pairs[j].cyclicity;
    }
    sol.xi = growth_rates(nf, lambdas);

    TropicalVector v_perm(n, eps);
    auto place = [&](std::size_t j, const TropicalVector& vj) {
        for (std::size_t a = 0; a < vj.size(); ++a) v_perm[nf.blocks[j].begin + a] = vj[a];
    };

    if (opts.rule == VectorRule::Asymptotic) {
        for (std::size_t j = q; j-- > 0;) {
            place(j, asymptotic_block(nf, j, sol.xi[j], lambdas[j], sol.xi, v_perm, w_perm, opts.tie_tol));
        }
    } else {
        const TropicalVector dw = mat_vec(nf.permuted, w_perm);
        place(q - 1, pairs[q - 1].vector);
        for (std::size_t j = q - 1; j-- > 0;) {
            TropicalVector vj = slice(dw, nf.blocks[j]);
            if (opts.rule == VectorRule::AsWritten) vj = vec_shift(vj, power(lambdas[j], static_cast<long long>(j)));
            const bool own = lambdas[j] > Tropical{sol.xi[j + 1]};
            if (!own) vj = vec_shift(vj, Tropical{-sol.xi[j]});
            place(j, vj);
        }
    }

    sol.v.assign(n, eps);
    sol.agent_xi.assign(n, 0.0);
    sol.t.assign(n, eps);
    for (std::size_t j = 0; j < q; ++j) {
        auto& diag = sol.blocks[j];
        diag.lambda = lambdas[j];
        diag.xi = sol.xi[j];
        diag.own_rate = lambdas[j].is_finite() && lambdas[j].value() >= sol.xi[j] - opts.tie_tol;
        for (std::size_t k = diag.range.begin; k < diag.range.end; ++k) {
            const std::size_t agent = nf.permutation[k];
            sol.v[agent] = v_perm[k];
            sol.agent_xi[agent] = sol.xi[j];
            sol.t[agent] = otimes(v_perm[k], power(Tropical{sol.xi[j]}, static_cast<long long>(T)));
        }
    }
    return sol;
}

std::vector<std::size_t> ranking(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::size_t> rank(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k + 1;
    return rank;
}

std::vector<std::size_t> ranking(std::span<const Tropical> values) {
    std::vector<double> raw(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) raw[i] = values[i].value();
    return ranking(raw);
}

void write_trust_csv(std::ostream& out, std::span<const double> values) {
    const auto rank = ranking(values);
    out << "agent_id,value,rank\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i << ',' << format_scalar(Tropical{values[i]}) << ',' << rank[i] << '\n';
}

void write_trust_csv(std::ostream& out, std::span<const Tropical> values) {
    const auto rank = ranking(values);
    out << "agent_id,value,rank\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i << ',' << format_scalar(values[i]) << ',' << rank[i] << '\n';
}

}  // namespace maxtrust
