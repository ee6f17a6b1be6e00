#include "maxtrust/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace maxtrust {

std::string to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::Tree: return "tree";
        case TopologyKind::Torus: return "torus";
        case TopologyKind::Random: return "random";
    }
    return "unknown";
}

std::string to_string(Algorithm algorithm) {
    return algorithm == Algorithm::Eigentrust ? "eigentrust" : "maxtrust";
}

TopologyKind parse_topology(const std::string& name) {
    if (name == "tree") return TopologyKind::Tree;
    if (name == "torus") return TopologyKind::Torus;
    if (name == "random") return TopologyKind::Random;
    throw DomainError("unknown topology '" + name + "'");
}

std::size_t Network::directed_links() const {
    std::size_t m = 0;
    for (const auto& a : adj) m += a.size();
    return m;
}

bool Network::linked(std::size_t a, std::size_t b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

namespace {

void link(Network& net, std::size_t a, std::size_t b) {
    if (a == b || net.linked(a, b)) return;
    net.adj[a].insert(std::upper_bound(net.adj[a].begin(), net.adj[a].end(), b), b);
    net.adj[b].insert(std::upper_bound(net.adj[b].begin(), net.adj[b].end(), a), a);
}

void rebuild_torus(Network& net) {
    for (auto id : net.grid) net.adj[id].clear();
    const std::size_t R = net.rows, C = net.cols;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            const std::size_t id = net.grid[r * C + c];
            link(net, id, net.grid[((r + 1) % R) * C + c]);
            link(net, id, net.grid[r * C + (c + 1) % C]);
        }
}

bool torus_feasible(std::size_t n, std::size_t* rows, std::size_t* cols) {
    for (std::size_t k = 2; k * k <= n; ++k) {
        if (k * k == n) {
            *rows = *cols = k;
            return true;
        }
        if ((k + 1) * k == n) {
            *rows = k + 1;
            *cols = k;
            return true;
        }
    }
    return false;
}

std::size_t nearest_torus(std::size_t n) {
    std::size_t best = 4;
    for (std::size_t k = 2; k * k <= 4 * n + 16; ++k)
        for (std::size_t size : {k * k, (k + 1) * k}) {
            const auto dist = [n](std::size_t s) { return s > n ? s - n : n - s; };
            if (dist(size) < dist(best)) best = size;
        }
    return best;
}

bool connected(const Network& net, std::size_t wired) {
    if (wired == 0) return true;
    std::vector<char> seen(net.size(), 0);
    std::queue<std::size_t> bfs;
    bfs.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!bfs.empty()) {
        const auto v = bfs.front();
        bfs.pop();
        for (auto w : net.adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                bfs.push(w);
            }
    }
    return count == wired;
}

}  // namespace

Network build_topology(TopologyKind kind, std::size_t n, Rng& rng) {
    Network net;
    net.kind = kind;
    if (n < 2) throw DomainError("build_topology: need at least 2 routers");
    switch (kind) {
        case TopologyKind::Tree:
            net.adj.resize(n);
            for (std::size_t k = 1; k < n; ++k) link(net, k, (k - 1) / 2);
            break;
        case TopologyKind::Torus: {
            std::size_t R = 0, C = 0;
            if (!torus_feasible(n, &R, &C)) {
                throw DomainError("build_topology: no torus layout for " + std::to_string(n) +
                                  " routers; nearest feasible size is " + std::to_string(nearest_torus(n)));
            }
            net.adj.resize(n);
            net.rows = R;
            net.cols = C;
            net.grid.resize(n);
            std::iota(net.grid.begin(), net.grid.end(), 0);
            rebuild_torus(net);
            break;
        }
        case TopologyKind::Random: {
            const std::size_t seed_nodes = std::min<std::size_t>(n, 4);
            net.adj.resize(seed_nodes);
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t a = 0; a < seed_nodes; ++a)
                for (std::size_t b = a + 1; b < seed_nodes; ++b) pairs.emplace_back(a, b);
            std::shuffle(pairs.begin(), pairs.end(), rng);
            const std::size_t take = std::min<std::size_t>(pairs.size(), seed_nodes);
            for (std::size_t e = 0; e < take; ++e) link(net, pairs[e].first, pairs[e].second);
            while (net.size() < n) add_router(net, rng);
            break;
        }
    }
    return net;
}

std::vector<std::size_t> add_router(Network& net, Rng& rng) {
    const std::size_t id = net.adj.size();
    net.adj.emplace_back();
    switch (net.kind) {
        case TopologyKind::Tree:
            link(net, id, (id - 1) / 2);
            return {id};
        case TopologyKind::Random: {
            std::vector<std::size_t> existing(id);
            std::iota(existing.begin(), existing.end(), 0);
            std::shuffle(existing.begin(), existing.end(), rng);
            for (std::size_t k = 0; k < std::min<std::size_t>(2, existing.size()); ++k) link(net, id, existing[k]);
            return {id};
        }
        case TopologyKind::Torus: {
            net.pending.push_back(id);
            const bool add_row = net.rows <= net.cols;
            const std::size_t need = add_row ? net.cols : net.rows;
            if (net.pending.size() < need) return {};
            std::vector<std::size_t> placed(net.pending.begin(), net.pending.begin() + static_cast<std::ptrdiff_t>(need));
            net.pending.erase(net.pending.begin(), net.pending.begin() + static_cast<std::ptrdiff_t>(need));
            if (add_row) {
                net.grid.insert(net.grid.end(), placed.begin(), placed.end());
                ++net.rows;
            } else {
                std::vector<std::size_t> grid;
                grid.reserve(net.rows * (net.cols + 1));
                for (std::size_t r = 0; r < net.rows; ++r) {
                    for (std::size_t c = 0; c < net.cols; ++c) grid.push_back(net.grid[r * net.cols + c]);
                    grid.push_back(placed[r]);
                }
                net.grid = std::move(grid);
                ++net.cols;
            }
            rebuild_torus(net);
            return placed;
        }
    }
    return {};
}

std::string validate_topology(const Network& net) {
    const std::size_t n = net.size();
    std::size_t wired = n - net.pending.size();
    for (std::size_t v = 0; v < n; ++v) {
        const auto& a = net.adj[v];
        if (!std::is_sorted(a.begin(), a.end())) return "adjacency of " + std::to_string(v) + " not sorted";
        if (std::adjacent_find(a.begin(), a.end()) != a.end()) return "duplicate link at " + std::to_string(v);
        for (auto w : a) {
            if (w == v) return "self-loop at " + std::to_string(v);
            if (w >= n || !net.linked(w, v)) return "asymmetric link " + std::to_string(v) + "-" + std::to_string(w);
        }
    }
    for (auto p : net.pending) {
        if (p < wired) return "pending router " + std::to_string(p) + " is not a trailing id";
        if (!net.adj[p].empty()) return "pending router " + std::to_string(p) + " is linked";
    }
    if (!connected(net, wired)) return "network is not connected";

    switch (net.kind) {
        case TopologyKind::Tree: {
            if (net.directed_links() != 2 * (n - 1)) return "tree edge count is not n - 1";
            for (std::size_t v = 0; v < n; ++v) {
                const std::size_t children = net.adj[v].size() - (v == 0 ? 0 : 1);
                if (children > 2) return "router " + std::to_string(v) + " has more than 2 children";
            }
            break;
        }
        case TopologyKind::Torus: {
            if (net.grid.size() != net.rows * net.cols || net.grid.size() != wired)
                return "torus grid does not cover the wired routers";
            Network expect = net;
            rebuild_torus(expect);
            if (expect.adj != net.adj) return "torus adjacency differs from the grid";
            const std::size_t degree = (net.rows > 2 ? 2 : 1) + (net.cols > 2 ? 2 : 1);
            for (auto id : net.grid)
                if (net.adj[id].size() != degree) return "torus degree is not regular";
            break;
        }
        case TopologyKind::Random:
            break;
    }
    return "";
}

namespace {

void resize_scores(LocalScores& s, std::size_t n) {
    LocalScores out(n);
    for (std::size_t i = 0; i < std::min(n, s.n); ++i)
        for (std::size_t j = 0; j < std::min(n, s.n); ++j) {
            out.at(i, j) = s.at(i, j);
            out.known[i * n + j] = s.known[i * s.n + j];
        }
    s = std::move(out);
}

void impute_neighbours(World& w, std::size_t id) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto nb : w.net.adj[id]) {
        if (w.trust.is_known(id, nb)) continue;
        w.trust.at(id, nb) = unit(w.rng);
        w.trust.known[id * w.trust.n + nb] = 1;
    }
}

std::size_t wired_count(const World& w) { return w.net.size() - w.net.pending.size(); }

// Direct update of i's trust in j after one exchange.
void update_trust(World& w, std::size_t i, std::size_t j, const ScenarioConfig& cfg) {
    std::bernoulli_distribution flip(cfg.miscategorisation);
    double delta = w.routers[j].malicious ? -cfg.trust_delta : cfg.trust_delta;
    if (delta > 0.0 && flip(w.rng)) delta = -delta;
    double& t = w.trust.at(i, j);
    t = std::clamp(t + delta, 0.0, 1.0);
    ++w.routers[i].interactions;
}

}  // namespace

World make_world(const ScenarioConfig& cfg, Rng rng) {
    World w;
    w.rng = std::move(rng);
    w.net = build_topology(cfg.topology, cfg.initial_routers, w.rng);
    w.routers.resize(w.net.size());
    w.trust = LocalScores(w.net.size());
    for (std::size_t id = 0; id < w.net.size(); ++id) impute_neighbours(w, id);
    return w;
}

double broadcast_value(const World& world, std::size_t id, std::size_t peer, const ScenarioConfig& cfg) {
    const Router& r = world.routers[id];
    if (!r.malicious) return world.trust.at(id, peer);
    if (r.mode == MaliciousMode::AlwaysZero) return 0.0;
    return cfg.decay_start * std::pow(cfg.decay_rate, static_cast<double>(r.interactions));
}

TrustMatrix broadcast_trust(const World& world, const ScenarioConfig& cfg) {
    const std::size_t m = wired_count(world);
    LocalScores s(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (world.trust.is_known(i, j)) {
                s.at(i, j) = broadcast_value(world, i, j, cfg);
                s.known[i * m + j] = 1;
            }
    return normalize_local_trust(s);
}

void step(World& w, const ScenarioConfig& cfg) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t m = wired_count(w);
    for (unsigned round = 0; round < cfg.interactions; ++round) {
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t best = m;
            for (auto nb : w.net.adj[i]) {
                if (!w.trust.is_known(i, nb)) continue;
                if (best == m || w.trust.at(i, nb) > w.trust.at(i, best)) best = nb;
            }
            if (best == m) continue;
            update_trust(w, i, best, cfg);
            if (!w.trust.is_known(best, i)) {
                w.trust.at(best, i) = unit(w.rng);
                w.trust.known[best * w.trust.n + i] = 1;
            }
            update_trust(w, best, i, cfg);
        }
    }
    ++w.timestep;
}

void grow(World& w, const ScenarioConfig& cfg) {
    if (cfg.scenario != 2 && cfg.scenario != 3) throw std::logic_error("grow: scenario 1 never changes topology");
    std::uniform_int_distribution<unsigned> batch(cfg.growth_min, cfg.growth_max);
    const unsigned count = batch(w.rng);
    std::vector<char> malicious(count, 0);
    if (cfg.scenario == 2) {
        const auto k = static_cast<std::size_t>(std::floor(count * cfg.malicious_fraction));
        std::vector<std::size_t> idx(count);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), w.rng);
        for (std::size_t a = 0; a < k; ++a) malicious[idx[a]] = 1;
    } else {
        std::bernoulli_distribution bad(cfg.malicious_probability);
        for (auto& m : malicious) m = bad(w.rng) ? 1 : 0;
    }
    std::bernoulli_distribution zero_mode(cfg.zero_mode_probability);
    for (unsigned a = 0; a < count; ++a) {
        Router r;
        r.malicious = malicious[a] != 0;
        if (r.malicious) r.mode = zero_mode(w.rng) ? MaliciousMode::AlwaysZero : MaliciousMode::Decay;
        w.routers.push_back(r);
        resize_scores(w.trust, w.routers.size());
        for (auto id : add_router(w.net, w.rng)) impute_neighbours(w, id);
    }
}

std::vector<double> probability_from_tropical(std::span<const Tropical> t) {
    std::vector<double> p(t.size(), 0.0);
    const Tropical top = vec_max(t);
    if (top.is_eps()) return p;
    double total = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i].is_eps()) continue;
        p[i] = std::exp(t[i].value() - top.value());
        total += p[i];
    }
    for (double& x : p) x /= total;
    return p;
}

double convergence_distance(std::span<const double> v, std::span<const double> reference) {
    if (v.size() > reference.size()) throw ShapeError("convergence_distance: vector longer than reference");
    double s = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = (i < v.size() ? v[i] : 0.0) - reference[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::vector<double> eigentrust_probabilities(const TrustMatrix& tm, const ScenarioConfig& cfg, bool* fell_back) {
    const std::size_t n = tm.conventional.rows();
    std::vector<double> r(n, 1.0 / static_cast<double>(n));
    if (fell_back) *fell_back = false;
    try {
        return eigentrust(tm.conventional, r, {cfg.eigentrust_epsilon, cfg.eigentrust_max_iters}).t;
    } catch (const NonConvergence& e) {
        if (fell_back) *fell_back = true;
        return e.trajectory().back();
    }
}

std::vector<double> maxtrust_probabilities(const TrustMatrix& tm, const ScenarioConfig& cfg, Rng& rng,
                                           bool* fell_back) {
    if (fell_back) *fell_back = false;
    const std::size_t n = tm.tropical.rows();
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);
    TropicalMatrix sub = tm.tropical;
    for (;;) {
        const auto bad = irregular_agents(sub);
        if (bad.empty()) break;
        std::vector<std::size_t> keep;
        std::vector<std::size_t> keep_local;
        for (std::size_t k = 0; k < active.size(); ++k)
            if (!std::binary_search(bad.begin(), bad.end(), k)) {
                keep.push_back(active[k]);
                keep_local.push_back(k);
            }
        sub = submatrix(sub, keep_local, keep_local);
        active = std::move(keep);
        if (active.empty()) break;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TropicalVector w(active.size());
    for (auto& x : w) x = Tropical{unit(rng)};

    std::vector<double> p(n, 0.0);
    if (active.empty()) return p;
    TropicalVector t;
    try {
        t = maxtrust::maxtrust(sub, w, cfg.maxtrust_T, {cfg.vector_rule}).t;
    } catch (const NonConvergence&) {
        if (fell_back) *fell_back = true;
        t = recurrence_oracle(transpose(sub), w, cfg.maxtrust_T);
    }
    const auto local = probability_from_tropical(t);
    for (std::size_t k = 0; k < active.size(); ++k) p[active[k]] = local[k];
    return p;
}

Rng run_rng(std::uint64_t master_seed, int scenario, TopologyKind topology, std::size_t run_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(scenario), static_cast<std::uint32_t>(topology),
                      static_cast<std::uint32_t>(run_id)};
    return Rng(seq);
}

RunRecord run_experiment(const ScenarioConfig& cfg, std::size_t run_id) {
    const auto start = std::chrono::steady_clock::now();
    RunRecord rec;
    rec.scenario = cfg.scenario;
    rec.topology = cfg.topology;
    rec.run_id = run_id;
    rec.seed = cfg.seed;
    try {
        World w = make_world(cfg, run_rng(cfg.seed, cfg.scenario, cfg.topology, run_id));
        std::vector<std::vector<double>> et, mt;
        for (unsigned t = 1; t <= cfg.timesteps; ++t) {
            step(w, cfg);
            rec.final_matrix = broadcast_trust(w, cfg);
            bool et_fb = false, mt_fb = false;
            et.push_back(eigentrust_probabilities(rec.final_matrix, cfg, &et_fb));
            mt.push_back(maxtrust_probabilities(rec.final_matrix, cfg, w.rng, &mt_fb));
            rec.eigentrust_fallbacks += et_fb;
            rec.maxtrust_fallbacks += mt_fb;
            if (cfg.scenario != 1 && t % cfg.growth_every == 0 && t < cfg.timesteps) grow(w, cfg);
        }
        const auto reference = stationary_vector(rec.final_matrix.conventional);
        for (std::size_t k = 0; k < et.size(); ++k) {
            rec.eigentrust_distance.push_back(convergence_distance(et[k], reference));
            rec.maxtrust_distance.push_back(convergence_distance(mt[k], reference));
        }
        rec.final_routers = rec.final_matrix.conventional.rows();
        rec.malicious_routers = static_cast<std::size_t>(
            std::count_if(w.routers.begin(), w.routers.begin() + static_cast<std::ptrdiff_t>(rec.final_routers),
                          [](const Router& r) { return r.malicious; }));
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.eigentrust_distance.clear();
        rec.maxtrust_distance.clear();
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

namespace {

double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

SummaryRow aggregate(std::span<const RunRecord> records, Algorithm algorithm) {
    SummaryRow row;
    row.algorithm = algorithm;
    if (!records.empty()) {
        row.scenario = records.front().scenario;
        row.topology = records.front().topology;
    }
    std::vector<double> pooled;
    for (const auto& r : records) {
        if (!r.error.empty()) {
            ++row.failed_runs;
            continue;
        }
        ++row.runs;
        const auto& d = algorithm == Algorithm::Eigentrust ? r.eigentrust_distance : r.maxtrust_distance;
        pooled.insert(pooled.end(), d.begin(), d.end());
    }
    if (pooled.empty()) return row;
    const double n = static_cast<double>(pooled.size());
    row.mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) / n;
    if (pooled.size() > 1) {
        double ss = 0.0;
        for (double x : pooled) ss += (x - row.mean) * (x - row.mean);
        row.std = std::sqrt(ss / (n - 1.0));
    }
    std::sort(pooled.begin(), pooled.end());
    row.lo95 = percentile(pooled, 0.025);
    row.hi95 = percentile(pooled, 0.975);
    return row;
}

void write_condition_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "run_id,timestep,algorithm,distance\n";
    for (const auto& r : records) {
        if (!r.error.empty()) continue;
        for (std::size_t k = 0; k < r.eigentrust_distance.size(); ++k)
            out << r.run_id << ',' << k + 1 << ",eigentrust," << format_scalar(r.eigentrust_distance[k]) << '\n';
        for (std::size_t k = 0; k < r.maxtrust_distance.size(); ++k)
            out << r.run_id << ',' << k + 1 << ",maxtrust," << format_scalar(r.maxtrust_distance[k]) << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "scenario,topology,algorithm,mean,std,lo95,hi95,runs,failed_runs\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << to_string(r.topology) << ',' << to_string(r.algorithm) << ','
            << format_scalar(r.mean) << ',' << format_scalar(r.std) << ',' << format_scalar(r.lo95) << ','
            << format_scalar(r.hi95) << ',' << r.runs << ',' << r.failed_runs << '\n';
    }
}

}  // namespace maxtrust
