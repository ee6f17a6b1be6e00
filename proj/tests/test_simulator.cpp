#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "maxtrust/simulator.hpp"
#include "support.hpp"

using namespace maxtrust;
using Catch::Approx;

namespace {

ScenarioConfig config(int scenario, TopologyKind kind) {
    ScenarioConfig cfg;
    cfg.scenario = scenario;
    cfg.topology = kind;
    return cfg;
}

}  // namespace

TEST_CASE("initial topologies", "[simulator]") {
    Rng rng(1);
    const auto tree = build_topology(TopologyKind::Tree, 7, rng);
    CHECK(validate_topology(tree).empty());
    CHECK(tree.adj[0] == std::vector<std::size_t>{1, 2});
    CHECK(tree.adj[2] == std::vector<std::size_t>{0, 5, 6});
    for (const auto& a : tree.adj) CHECK(a.size() <= 3);

    const auto torus = build_topology(TopologyKind::Torus, 4, rng);
    CHECK(validate_topology(torus).empty());
    CHECK(torus.directed_links() == 8);
    for (const auto& a : torus.adj) CHECK(a.size() == 2);

    const auto big = build_topology(TopologyKind::Torus, 12, rng);
    CHECK(big.rows * big.cols == 12);
    CHECK(validate_topology(big).empty());
    CHECK_THROWS_WITH(build_topology(TopologyKind::Torus, 7, rng), Catch::Matchers::ContainsSubstring("nearest feasible size is 6"));

    Rng a(9), b(9);
    const auto r1 = build_topology(TopologyKind::Random, 4, a);
    const auto r2 = build_topology(TopologyKind::Random, 4, b);
    CHECK(r1.adj == r2.adj);
    CHECK(r1.directed_links() == 8);
    CHECK(validate_topology(r1).empty());
}

TEST_CASE("growth keeps every topology valid", "[simulator][property]") {
    for (auto kind : {TopologyKind::Tree, TopologyKind::Torus, TopologyKind::Random}) {
        Rng rng(static_cast<unsigned>(kind) + 100);
        auto net = build_topology(kind, 4, rng);
        for (int k = 0; k < 120; ++k) {
            add_router(net, rng);
            INFO(to_string(kind) << " after " << k + 1 << " additions");
            REQUIRE(validate_topology(net).empty());
        }
        if (kind == TopologyKind::Torus) {
            CHECK(net.rows * net.cols + net.pending.size() == net.size());
            CHECK(net.pending.size() < std::max(net.rows, net.cols));
        }
    }
}

TEST_CASE("validator catches broken networks", "[simulator]") {
    Rng rng(2);
    auto tree = build_topology(TopologyKind::Tree, 7, rng);
    tree.adj[3].push_back(4);
    tree.adj[4].insert(tree.adj[4].begin(), 3);
    CHECK_FALSE(validate_topology(tree).empty());

    auto torus = build_topology(TopologyKind::Torus, 9, rng);
    torus.adj[0].pop_back();
    CHECK_FALSE(validate_topology(torus).empty());
}

TEST_CASE("malicious broadcasts", "[simulator]") {
    auto cfg = config(2, TopologyKind::Tree);
    World w = make_world(cfg, Rng(3));
    w.routers[1].malicious = true;
    w.routers[1].mode = MaliciousMode::AlwaysZero;
    CHECK(broadcast_value(w, 1, 0, cfg) == 0.0);
    w.routers[1].mode = MaliciousMode::Decay;
    double last = 1.0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        w.routers[1].interactions = k;
        const double v = broadcast_value(w, 1, 0, cfg);
        CHECK(v > 0.0);
        CHECK(v <= 0.5);
        CHECK(v <= last);
        CHECK(v == Approx(0.5 * std::pow(0.99, static_cast<double>(k))));
        last = v;
    }
    CHECK(broadcast_value(w, 0, 1, cfg) == w.trust.at(0, 1));
}

TEST_CASE("trust toward an always-zero malicious neighbour falls", "[simulator]") {
    auto cfg = config(1, TopologyKind::Tree);
    World w = make_world(cfg, Rng(4));
    // router 3 hangs off router 1 only; make it malicious and router 1's favourite
    w.routers[3].malicious = true;
    w.trust.at(3, 1) = 0.5;
    w.trust.at(1, 3) = 0.99;
    w.trust.at(1, 0) = 0.01;
    const double before = w.trust.at(1, 3);
    step(w, cfg);
    CHECK(w.trust.at(1, 3) < before);
}

TEST_CASE("honest worlds keep trust in range and move by at most the delta", "[simulator]") {
    auto cfg = config(1, TopologyKind::Random);
    World w = make_world(cfg, Rng(5));
    const auto initial = w.trust;
    std::vector<std::uint64_t> before(w.routers.size());
    for (int t = 0; t < 20; ++t) step(w, cfg);
    for (std::size_t i = 0; i < w.trust.n; ++i)
        for (std::size_t j = 0; j < w.trust.n; ++j) {
            if (!w.trust.is_known(i, j)) continue;
            const double v = w.trust.at(i, j);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
            if (initial.is_known(i, j))
                REQUIRE(std::abs(v - initial.at(i, j)) <= w.routers[i].interactions * cfg.trust_delta + 1e-12);
        }
    CHECK(w.timestep == 20);
}

TEST_CASE("step is reproducible under a fixed seed", "[simulator]") {
    auto cfg = config(3, TopologyKind::Torus);
    World a = make_world(cfg, Rng(6)), b = make_world(cfg, Rng(6));
    for (int t = 0; t < 3; ++t) {
        step(a, cfg);
        step(b, cfg);
        grow(a, cfg);
        grow(b, cfg);
    }
    CHECK(a.trust.s == b.trust.s);
    CHECK(a.trust.known == b.trust.known);
    CHECK(a.net.adj == b.net.adj);
}

TEST_CASE("growth assigns malicious routers per scenario", "[simulator]") {
    auto cfg = config(2, TopologyKind::Random);
    World w = make_world(cfg, Rng(7));
    for (int k = 0; k < 30; ++k) {
        const auto before = w.routers.size();
        grow(w, cfg);
        const auto added = w.routers.size() - before;
        REQUIRE(added >= 2);
        REQUIRE(added <= 6);
        std::size_t bad = 0;
        for (auto i = before; i < w.routers.size(); ++i) bad += w.routers[i].malicious;
        REQUIRE(bad == added / 2);
        REQUIRE(validate_topology(w.net).empty());
    }
    CHECK_THROWS_AS(grow(w, config(1, TopologyKind::Random)), std::logic_error);

    auto cfg3 = config(3, TopologyKind::Tree);
    World w3 = make_world(cfg3, Rng(8));
    for (const auto& r : w3.routers) CHECK_FALSE(r.malicious);
    std::size_t added = 0, bad = 0;
    for (int k = 0; k < 200; ++k) {
        const auto before = w3.routers.size();
        grow(w3, cfg3);
        added += w3.routers.size() - before;
        for (auto i = before; i < w3.routers.size(); ++i) bad += w3.routers[i].malicious;
    }
    const double frac = static_cast<double>(bad) / static_cast<double>(added);
    CHECK(frac == Approx(1.0 / 3.0).margin(0.05));
}

TEST_CASE("distance metric", "[simulator]") {
    CHECK(convergence_distance(std::vector<double>{0.2, 0.8}, std::vector<double>{0.2, 0.8}) == 0.0);
    CHECK(convergence_distance(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}) == Approx(std::sqrt(2.0)));
    CHECK(convergence_distance(std::vector<double>{1}, std::vector<double>{0, 1}) == Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(convergence_distance(std::vector<double>{1, 0}, std::vector<double>{1}), ShapeError);

    const auto p = probability_from_tropical(TropicalVector{4.2, 4.2, 4.2});
    for (double x : p) CHECK(x == Approx(1.0 / 3.0));
    const auto q = probability_from_tropical(TropicalVector{0, eps, std::log(3.0)});
    CHECK(q[0] == Approx(0.25));
    CHECK(q[1] == 0.0);
    CHECK(q[2] == Approx(0.75));
}

TEST_CASE("both algorithms return probability vectors over the wired routers", "[simulator]") {
    auto cfg = config(2, TopologyKind::Torus);
    World w = make_world(cfg, Rng(10));
    for (int t = 0; t < 4; ++t) {
        step(w, cfg);
        grow(w, cfg);
    }
    const auto tm = broadcast_trust(w, cfg);
    CHECK(tm.conventional.rows() == w.net.size() - w.net.pending.size());
    Rng rng(11);
    for (const auto& p : {eigentrust_probabilities(tm, cfg), maxtrust_probabilities(tm, cfg, rng)}) {
        REQUIRE(p.size() == tm.conventional.rows());
        double s = 0;
        for (double x : p) {
            CHECK(x >= 0.0);
            s += x;
        }
        CHECK(s == Approx(1.0));
    }
}

TEST_CASE("runs are deterministic and aggregate as documented", "[simulator]") {
    auto cfg = config(3, TopologyKind::Random);
    cfg.timesteps = 12;
    cfg.seed = 99;
    const auto a = run_experiment(cfg, 4);
    const auto b = run_experiment(cfg, 4);
    REQUIRE(a.error.empty());
    CHECK(a.eigentrust_distance == b.eigentrust_distance);
    CHECK(a.maxtrust_distance == b.maxtrust_distance);
    CHECK(a.final_matrix.conventional == b.final_matrix.conventional);
    CHECK(a.eigentrust_distance.size() == 12);
    for (double d : a.maxtrust_distance) CHECK(d >= 0.0);
    CHECK(run_experiment(cfg, 5).maxtrust_distance != a.maxtrust_distance);

    cfg.timesteps = 1;
    const auto one = run_experiment(cfg, 0);
    const std::vector<RunRecord> recs{one};
    const auto row = aggregate(recs, Algorithm::MaxTrust);
    CHECK(row.mean == one.maxtrust_distance[0]);
    CHECK(row.std == 0.0);
    CHECK(row.runs == 1);

    RunRecord failed;
    failed.error = "boom";
    const std::vector<RunRecord> mixed{one, failed};
    CHECK(aggregate(mixed, Algorithm::Eigentrust).failed_runs == 1);
}

TEST_CASE("aggregate statistics", "[simulator]") {
    RunRecord r1, r2;
    r1.eigentrust_distance = {1, 2, 3};
    r2.eigentrust_distance = {4, 5};
    const std::vector<RunRecord> recs{r1, r2};
    const auto row = aggregate(recs, Algorithm::Eigentrust);
    CHECK(row.mean == Approx(3.0));
    CHECK(row.std == Approx(std::sqrt(2.5)));
    CHECK(row.lo95 == Approx(1.1));
    CHECK(row.hi95 == Approx(4.9));
}

TEST_CASE("csv output", "[simulator][io]") {
    RunRecord r;
    r.run_id = 2;
    r.eigentrust_distance = {0.5};
    r.maxtrust_distance = {0.25};
    std::ostringstream out;
    write_condition_csv(out, std::vector<RunRecord>{r});
    CHECK(out.str() == "run_id,timestep,algorithm,distance\n2,1,eigentrust,0.5\n2,1,maxtrust,0.25\n");
    std::ostringstream sum;
    SummaryRow row;
    row.scenario = 3;
    row.topology = TopologyKind::Torus;
    row.algorithm = Algorithm::MaxTrust;
    row.runs = 1;
    write_summary_csv(sum, std::vector<SummaryRow>{row});
    CHECK(sum.str() == "scenario,topology,algorithm,mean,std,lo95,hi95,runs,failed_runs\n3,torus,maxtrust,0,0,0,0,1,0\n");
}
