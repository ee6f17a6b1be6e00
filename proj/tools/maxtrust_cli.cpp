// maxtrust: compute Eigentrust / MaxTrust on a matrix, classify it, run the
// router experiments, or self-test against the shipped fixtures.
//
// Exit codes: 0 ok, 1 usage or parse error, 2 domain or shape error,
// 3 non-convergence or no dominant eigenvalue, 4 I/O error, 5 internal error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "experiment.hpp"
#include "maxtrust/conventional.hpp"
#include "maxtrust/graph.hpp"
#include "maxtrust/spectral.hpp"
#include "maxtrust/trust.hpp"

#ifndef MAXTRUST_FIXTURE_DIR
#define MAXTRUST_FIXTURE_DIR "fixtures"
#endif

namespace {

using namespace maxtrust;

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kNoConvergence = 3, kIo = 4, kInternal = 5 };

struct Options {
    std::string mode;
    std::string matrix;
    std::string ledger;
    std::string config;
    std::string out;
    std::uint64_t seed = 1;
    std::size_t runs = 100;
    unsigned steps = 100;
    unsigned jobs = 0;
    std::string scenarios;
    std::string topologies;
    bool fixtures = false;
    std::string fixture_dir = MAXTRUST_FIXTURE_DIR;
    double epsilon = 1e-6;
    std::size_t max_iters = 10000;
    unsigned T = 100;
    std::string rule = "asymptotic";
    std::int64_t w_seed = -1;
};

const char* yes_no(bool b) { return b ? "yes" : "no"; }

TrustMatrix load_input(const Options& o) {
    if (!o.ledger.empty()) return normalize_local_trust(load_ledger(o.ledger));
    const TropicalMatrix m = load_matrix(o.matrix);
    return {conventional_image(m), m};
}

void print_classification(std::ostream& out, const RealMatrix& c) {
    const auto cls = classify_matrix(c);
    out << "# positive: " << yes_no(cls.positive) << "\n# nonnegative: " << yes_no(cls.nonnegative)
        << "\n# row_stochastic: " << yes_no(cls.row_stochastic) << "\n# irreducible: " << yes_no(cls.irreducible)
        << '\n';
}

void emit_csv(const Options& o, const auto& values) {
    write_trust_csv(std::cout, values);
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw IoError("cannot write '" + o.out + "'");
        write_trust_csv(f, values);
    }
}

int cmd_classify(const Options& o) {
    const TrustMatrix tm = load_input(o);
    if (!tm.conventional.square()) throw ShapeError("matrix is not square");
    print_classification(std::cout, tm.conventional);
    std::cout << format_normal_form(normal_form(tm.tropical));
    return kOk;
}

int cmd_eigentrust(const Options& o) {
    const TrustMatrix tm = load_input(o);
    if (!tm.conventional.square()) throw ShapeError("matrix is not square");
    print_classification(std::cout, tm.conventional);
    const std::size_t n = tm.conventional.rows();
    std::vector<double> r(n, 1.0 / static_cast<double>(n));
    const auto res = eigentrust(tm.conventional, r, {o.epsilon, o.max_iters});
    std::cout << "# closed_classes: " << res.closed_class_count << "\n# iterations: " << res.iterations
              << "\n# dominant: " << yes_no(res.dominant) << '\n';
    emit_csv(o, res.t);
    if (!res.dominant) {
        const auto [l1, l2] = leading_moduli(transpose(tm.conventional));
        std::cerr << "no dominant eigenvalue: " << res.closed_class_count << " closed classes";
        if (res.closed_class_count == 1) std::cerr << " of period " << res.period;
        std::cerr << "; |lambda1| = " << l1 << ", |lambda2| = " << l2
                  << "; the vector above depends on the start vector\n";
        return kNoConvergence;
    }
    return kOk;
}

int cmd_maxtrust(const Options& o) {
    const TrustMatrix tm = load_input(o);
    const std::size_t n = tm.tropical.rows();
    TropicalVector w(n, Tropical::e());
    if (o.w_seed >= 0) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(o.w_seed));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (auto& x : w) x = Tropical{unit(rng)};
    }
    const auto sol = maxtrust::maxtrust(tm.tropical, w, o.T, {parse_vector_rule(o.rule)});
    std::cout << "# blocks: " << sol.blocks.size() << "\n# T: " << sol.T << "\n# rule: " << o.rule << '\n';
    for (std::size_t j = 0; j < sol.blocks.size(); ++j) {
        const auto& b = sol.blocks[j];
        std::cout << "# block " << j << ": agents";
        for (auto a : b.agents) std::cout << ' ' << a;
        std::cout << "; lambda " << format_scalar(b.lambda) << "; xi " << format_scalar(b.xi) << "; "
                  << (b.own_rate ? "own" : "downstream") << "; iterations " << b.power_iterations << "; cyclicity "
                  << b.cyclicity << '\n';
    }
    emit_csv(o, sol.t);
    return kOk;
}

int cmd_experiment(const Options& o, const CLI::App& app) {
    cli::ExperimentPlan plan = o.config.empty() ? cli::default_plan() : cli::load_plan(o.config);
    if (app.count("--seed")) plan.base.seed = o.seed;
    if (app.count("--runs")) plan.runs = o.runs;
    if (app.count("--steps")) plan.base.timesteps = o.steps;
    if (app.count("--jobs")) plan.jobs = o.jobs;
    if (app.count("--out")) plan.out_dir = o.out;
    if (app.count("--scenarios")) {
        plan.scenarios.clear();
        std::stringstream ss(o.scenarios);
        for (std::string item; std::getline(ss, item, ',');) {
            const int sc = std::stoi(item);
            if (sc < 1 || sc > 3) throw DomainError("scenario must be 1, 2 or 3");
            plan.scenarios.push_back(sc);
        }
    }
    if (app.count("--topologies")) {
        plan.topologies.clear();
        std::stringstream ss(o.topologies);
        for (std::string item; std::getline(ss, item, ',');) plan.topologies.push_back(parse_topology(item));
    }
    const auto results = cli::run_plan(plan);
    const auto rows = cli::write_outputs(plan.out_dir, results);
    write_summary_csv(std::cout, rows);
    for (const auto& r : rows)
        if (r.failed_runs) {
            std::cerr << "scenario " << r.scenario << " " << to_string(r.topology) << ": " << r.failed_runs
                      << " failed runs (see failures.csv)\n";
        }
    return kOk;
}

int cmd_fixtures(const Options& o) {
    namespace fs = std::filesystem;
    const fs::path dir(o.fixture_dir);
    const auto a = conventional_image(load_matrix((dir / "example1.txt").string()));
    const auto b = conventional_image(load_matrix((dir / "example2.txt").string()));
    const auto c = conventional_image(load_matrix((dir / "example3.txt").string()));
    const std::vector<double> uniform(3, 1.0 / 3.0);
    int failures = 0;
    auto report = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
        if (!ok) ++failures;
    };

    {
        const auto r = eigentrust(b, uniform, {1e-10, 10000});
        double err = std::max({std::abs(r.t[0]), std::abs(r.t[1]), std::abs(r.t[2] - 1.0)});
        report(err <= 1e-6, "example2 eigentrust = (0,0,1) within 1e-6 (err " + std::to_string(err) + ")");
    }
    {
        const auto r = eigentrust(c, uniform, {1e-10, 10000});
        const auto pair = dominant_eigenpair_conventional(c);
        const double err = l1_distance(r.t, pair.vector);
        report(err <= 1e-6, "example3 eigentrust matches the dominant eigenvector (l1 " + std::to_string(err) + ")");
        const std::vector<double> rounded{0.3, 0.6, 0.1};
        double dev = 0.0;
        for (int i = 0; i < 3; ++i) dev = std::max(dev, std::abs(r.t[i] - rounded[i]));
        std::cout << "INFO example3 max deviation from (0.3,0.6,0.1): " << dev << '\n';
    }
    {
        bool failed = false;
        try {
            dominant_eigenpair_conventional(a);
        } catch (const DominanceFailure&) {
            failed = true;
        }
        const auto r = eigentrust(a, uniform);
        report(failed && !r.dominant, "example1 reports no dominant eigenvalue");
        const auto sol = maxtrust::maxtrust(tropical_image(a), TropicalVector(3, Tropical::e()), 5);
        report(all_finite(sol.t), "example1 maxtrust gives finite trust to every agent");
    }
    return failures == 0 ? kOk : kDomain;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigentrust and MaxTrust trust computation"};
    Options o;
    app.add_option("--mode", o.mode, "eigentrust | maxtrust | classify | experiment")
        ->check(CLI::IsMember({"eigentrust", "maxtrust", "classify", "experiment"}));
    app.add_option("--matrix", o.matrix, "matrix file (\"n m\" header, eps for -inf)");
    app.add_option("--ledger", o.ledger, "interaction ledger file (\"n\" then \"i j s\" lines)");
    app.add_option("--config", o.config, "experiment INI file");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--runs", o.runs, "runs per condition");
    app.add_option("--steps", o.steps, "timesteps per run");
    app.add_option("--out", o.out, "output CSV (compute modes) or directory (experiment)");
    app.add_option("--jobs", o.jobs, "parallel run workers, 0 = all cores");
    app.add_option("--scenarios", o.scenarios, "comma list of scenarios, e.g. 1,3");
    app.add_option("--topologies", o.topologies, "comma list of tree,torus,random");
    app.add_flag("--fixtures", o.fixtures, "self-test against the shipped example matrices");
    app.add_option("--fixture-dir", o.fixture_dir, "directory holding example1..3.txt");
    app.add_option("--epsilon", o.epsilon, "Eigentrust stopping threshold");
    app.add_option("--max-iters", o.max_iters, "Eigentrust iteration cap");
    app.add_option("-T,--T", o.T, "MaxTrust terminal time");
    app.add_option("--rule", o.rule, "MaxTrust vector rule")
        ->check(CLI::IsMember({"asymptotic", "as-written", "as-written-no-exponent"}));
    app.add_option("--w-seed", o.w_seed, "random MaxTrust start vector from this seed (default: zeros)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (o.fixtures) return cmd_fixtures(o);
        if (o.mode.empty()) {
            std::cerr << "--mode or --fixtures is required\n";
            return kUsage;
        }
        if (o.mode == "experiment") return cmd_experiment(o, app);
        if (o.matrix.empty() == o.ledger.empty()) {
            std::cerr << "exactly one of --matrix or --ledger is required\n";
            return kUsage;
        }
        if (o.mode == "classify") return cmd_classify(o);
        if (o.mode == "eigentrust") return cmd_eigentrust(o);
        return cmd_maxtrust(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const DominanceFailure& e) {
        std::cerr << "no dominant eigenvalue: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << '\n';
        const auto& traj = e.trajectory();
        for (std::size_t k = traj.size() > 2 ? traj.size() - 2 : 0; k < traj.size(); ++k) {
            const auto& v = traj[k];
            std::cerr << "  iterate:";
            for (double x : v) std::cerr << ' ' << format_scalar(x);
            std::cerr << '\n';
        }
        return kNoConvergence;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const ShapeError& e) {
        std::cerr << "shape error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: bad number in a list option\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
