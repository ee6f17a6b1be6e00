#pragma once

// Router-network evaluation: topologies, trust exchange with malicious
// routers, and per-timestep convergence distances for Eigentrust and MaxTrust.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "maxtrust/trust.hpp"

namespace maxtrust {

enum class TopologyKind { Tree, Torus, Random };
enum class Algorithm { Eigentrust, MaxTrust };
enum class MaliciousMode { AlwaysZero, Decay };

std::string to_string(TopologyKind kind);
std::string to_string(Algorithm algorithm);
TopologyKind parse_topology(const std::string& name);

using Rng = std::mt19937_64;

// Undirected simple graph over router ids. Routers waiting for a torus row
// or column to fill are not part of the network yet.
struct Network {
    TopologyKind kind = TopologyKind::Tree;
    std::vector<std::vector<std::size_t>> adj;  // ascending neighbour ids
    // torus layout: grid[r * cols + c] is a router id
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> grid;
    std::vector<std::size_t> pending;

    std::size_t size() const { return adj.size(); }
    std::size_t directed_links() const;
    bool linked(std::size_t a, std::size_t b) const;
};

// Tree: breadth-first complete binary tree. Torus: n must be k*k or
// (k+1)*k with k >= 2; otherwise a DomainError names the nearest feasible
// size. Random: the 4-router start takes 4 distinct edges uniformly, and
// every later router links to 2 distinct existing routers.
Network build_topology(TopologyKind kind, std::size_t n, Rng& rng);

// Append router `id` (== current id count). Returns the ids actually wired
// in: one id for tree and random, a whole row or column (possibly none yet)
// for the torus.
std::vector<std::size_t> add_router(Network& net, Rng& rng);

// Structural checks per kind; the first violation is returned, or "".
std::string validate_topology(const Network& net);

struct ScenarioConfig {
    int scenario = 1;
    TopologyKind topology = TopologyKind::Tree;
    unsigned timesteps = 100;
    unsigned interactions = 10;
    double trust_delta = 0.0001;
    double miscategorisation = 0.0025;
    unsigned growth_every = 5;
    unsigned growth_min = 2;
    unsigned growth_max = 6;
    double malicious_fraction = 0.5;     // scenario 2, per batch, floor
    double malicious_probability = 1.0 / 3.0;  // scenario 3
    double zero_mode_probability = 0.5;
    double decay_start = 0.5;
    double decay_rate = 0.99;
    unsigned initial_routers = 4;
    unsigned maxtrust_T = 100;
    VectorRule vector_rule = VectorRule::Asymptotic;
    double eigentrust_epsilon = 1e-6;
    std::size_t eigentrust_max_iters = 10000;
    std::uint64_t seed = 1;
};

struct Router {
    bool malicious = false;
    MaliciousMode mode = MaliciousMode::AlwaysZero;
    std::uint64_t interactions = 0;
};

struct World {
    Network net;
    std::vector<Router> routers;  // indexed by id, includes pending routers
    LocalScores trust;            // direct trust, sized to routers.size()
    unsigned timestep = 0;
    Rng rng;
};

World make_world(const ScenarioConfig& cfg, Rng rng);

// Value router `id` reports about a known peer.
double broadcast_value(const World& world, std::size_t id, std::size_t peer, const ScenarioConfig& cfg);

// Trust matrix built from every wired router's broadcast row.
TrustMatrix broadcast_trust(const World& world, const ScenarioConfig& cfg);

// One timestep: `interactions` rounds in which every wired router contacts
// its most trusted known neighbour (ties to the lowest id).
void step(World& world, const ScenarioConfig& cfg);

// Adds 2..6 routers (scenarios 2 and 3 only).
void grow(World& world, const ScenarioConfig& cfg);

// Eigentrust vector as-is; MaxTrust vector through exp(t - max t) then
// 1-norm normalisation, eps -> 0. Both padded with zeros to the reference.
std::vector<double> probability_from_tropical(std::span<const Tropical> t);
double convergence_distance(std::span<const double> v, std::span<const double> reference);

// Global trust of the current world under each algorithm, as probability
// vectors over all wired routers. When the iteration cap is hit, Eigentrust
// falls back to its last iterate and MaxTrust to the direct iterate
// D^T (x) w of the pruned system; `fell_back` reports it.
std::vector<double> eigentrust_probabilities(const TrustMatrix& tm, const ScenarioConfig& cfg,
                                             bool* fell_back = nullptr);
std::vector<double> maxtrust_probabilities(const TrustMatrix& tm, const ScenarioConfig& cfg, Rng& rng,
                                           bool* fell_back = nullptr);

struct RunRecord {
    int scenario = 1;
    TopologyKind topology = TopologyKind::Tree;
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::vector<double> eigentrust_distance;  // one per timestep
    std::vector<double> maxtrust_distance;
    TrustMatrix final_matrix;
    std::size_t final_routers = 0;
    std::size_t malicious_routers = 0;
    std::size_t eigentrust_fallbacks = 0;  // timesteps that hit the iteration cap
    std::size_t maxtrust_fallbacks = 0;
    double wall_seconds = 0.0;
    std::string error;  // non-empty when the run aborted
};

// Per-run rng stream from (master seed, scenario, topology, run id).
Rng run_rng(std::uint64_t master_seed, int scenario, TopologyKind topology, std::size_t run_id);

RunRecord run_experiment(const ScenarioConfig& cfg, std::size_t run_id);

struct SummaryRow {
    int scenario = 1;
    TopologyKind topology = TopologyKind::Tree;
    Algorithm algorithm = Algorithm::Eigentrust;
    std::size_t runs = 0;
    std::size_t failed_runs = 0;
    double mean = 0.0;
    double std = 0.0;
    double lo95 = 0.0;
    double hi95 = 0.0;
};

// Pooled per-timestep distances across the successful runs of one
// condition; std is the sample standard deviation (0 for one sample) and
// the interval is the 2.5/97.5 percentile pair.
SummaryRow aggregate(std::span<const RunRecord> records, Algorithm algorithm);

void write_condition_csv(std::ostream& out, std::span<const RunRecord> records);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

}  // namespace maxtrust
