#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "maxtrust/conventional.hpp"
#include "maxtrust/graph.hpp"
#include "maxtrust/simulator.hpp"
#include "maxtrust/spectral.hpp"
#include "maxtrust/trust.hpp"

namespace py = pybind11;
namespace mt = maxtrust;

// Python sees max-plus values as floats with -inf standing for eps.
using Grid = std::vector<std::vector<double>>;

namespace {

mt::TropicalMatrix tropical_from(const Grid& g) {
    const std::size_t n = g.size();
    const std::size_t m = n ? g.front().size() : 0;
    mt::TropicalMatrix a(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (g[i].size() != m) throw mt::ShapeError("ragged matrix");
        for (std::size_t j = 0; j < m; ++j) {
            if (std::isnan(g[i][j]) || g[i][j] == std::numeric_limits<double>::infinity())
                throw mt::DomainError("matrix entries must be finite or -inf");
            a(i, j) = mt::Tropical{g[i][j]};
        }
    }
    return a;
}

Grid grid_from(const mt::TropicalMatrix& a) {
    Grid g(a.rows(), std::vector<double>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) g[i][j] = a(i, j).value();
    return g;
}

mt::RealMatrix real_from(const Grid& g) {
    const std::size_t n = g.size();
    const std::size_t m = n ? g.front().size() : 0;
    mt::RealMatrix a(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (g[i].size() != m) throw mt::ShapeError("ragged matrix");
        for (std::size_t j = 0; j < m; ++j) a(i, j) = g[i][j];
    }
    return a;
}

Grid grid_from(const mt::RealMatrix& a) {
    Grid g(a.rows(), std::vector<double>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) g[i][j] = a(i, j);
    return g;
}

mt::TropicalVector tvec(const std::vector<double>& v) { return {v.begin(), v.end()}; }

std::vector<double> dvec(const mt::TropicalVector& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
    return out;
}

py::dict normal_form_dict(const mt::NormalForm& nf) {
    py::dict d;
    d["permutation"] = nf.permutation;
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    for (const auto& b : nf.blocks) blocks.emplace_back(b.begin, b.end);
    d["blocks"] = blocks;
    d["permuted"] = grid_from(nf.permuted);
    return d;
}

mt::TopologyKind topology_from(const std::string& s) { return mt::parse_topology(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Max-plus trust computation: Eigentrust, MaxTrust and the router simulator.";

    auto base = py::register_exception<mt::Error>(m, "MaxTrustError");
    py::register_exception<mt::ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<mt::DomainError>(m, "DomainError", base.ptr());
    py::register_exception<mt::NonConvergence>(m, "NonConvergence", base.ptr());
    py::register_exception<mt::DominanceFailure>(m, "DominanceFailure", base.ptr());
    py::register_exception<mt::ParseError>(m, "ParseError", base.ptr());
    py::register_exception<mt::IoError>(m, "IoError", base.ptr());

    m.def("oplus", [](double x, double y) { return mt::oplus(x, y).value(); });
    m.def("otimes", [](double x, double y) { return mt::otimes(x, y).value(); });
    m.def("mat_mul", [](const Grid& a, const Grid& b) { return grid_from(mt::mat_mul(tropical_from(a), tropical_from(b))); });
    m.def("mat_pow", [](const Grid& a, unsigned k) { return grid_from(mt::mat_pow(tropical_from(a), k)); });
    m.def("trace", [](const Grid& a) { return mt::trace(tropical_from(a)).value(); });
    m.def("parse_matrix", [](const std::string& text) { return grid_from(mt::parse_matrix(text)); });
    m.def("format_matrix", [](const Grid& a) { return mt::format_matrix(tropical_from(a)); });

    m.def("is_irreducible", [](const Grid& a) { return mt::is_irreducible(tropical_from(a)); },
          "Strong connectivity of the graph of finite entries.");
    m.def("normal_form", [](const Grid& a) { return normal_form_dict(mt::normal_form(tropical_from(a))); });
    m.def(
        "max_power",
        [](const Grid& c, const std::vector<double>& r) {
            const auto p = mt::max_power(tropical_from(c), tvec(r));
            return py::make_tuple(p.lambda.value(), dvec(p.vector));
        },
        "Max-plus power method on C^T; returns (lambda, v).");
    m.def("eigenvalue_by_traces", [](const Grid& a) { return mt::eigenvalue_by_traces(tropical_from(a)).value(); });

    m.def("classify_matrix", [](const Grid& a) {
        const auto c = mt::classify_matrix(real_from(a));
        py::dict d;
        d["positive"] = c.positive;
        d["nonnegative"] = c.nonnegative;
        d["row_stochastic"] = c.row_stochastic;
        d["irreducible"] = c.irreducible;
        return d;
    });
    m.def(
        "dominant_eigenpair_conventional",
        [](const Grid& a, bool newton) {
            mt::DominantEigenOptions o;
            o.newton_refinement = newton;
            const auto p = mt::dominant_eigenpair_conventional(real_from(a), o);
            return py::make_tuple(p.lambda, p.vector);
        },
        py::arg("a"), py::arg("newton") = false);
    m.def("stationary_vector", [](const Grid& c) { return mt::stationary_vector(real_from(c)); });

    m.def(
        "normalize_local_trust",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, long long>>& triples) {
            mt::InteractionLedger ledger(n);
            for (const auto& [i, j, s] : triples) ledger.set(i, j, s);
            const auto tm = mt::normalize_local_trust(ledger);
            return py::make_tuple(grid_from(tm.conventional), grid_from(tm.tropical));
        },
        py::arg("n"), py::arg("triples"), "Returns (conventional, tropical) grids from (i, j, s) triples.");

    m.def(
        "eigentrust",
        [](const Grid& c, const std::vector<double>& r, double epsilon, std::size_t max_iters) {
            const auto res = mt::eigentrust(real_from(c), r, {epsilon, max_iters});
            py::dict d;
            d["t"] = res.t;
            d["iterations"] = res.iterations;
            d["dominant"] = res.dominant;
            return d;
        },
        py::arg("c"), py::arg("r"), py::arg("epsilon") = 1e-6, py::arg("max_iters") = 10000);

    m.def(
        "maxtrust",
        [](const Grid& c, const std::vector<double>& w, unsigned T, const std::string& rule) {
            const auto sol = mt::maxtrust(tropical_from(c), tvec(w), T, {mt::parse_vector_rule(rule)});
            py::dict d;
            d["t"] = dvec(sol.t);
            d["v"] = dvec(sol.v);
            d["xi"] = sol.xi;
            d["agent_xi"] = sol.agent_xi;
            d["normal_form"] = normal_form_dict(sol.nf);
            std::vector<double> lambdas;
            for (const auto& b : sol.blocks) lambdas.push_back(b.lambda.value());
            d["block_lambdas"] = lambdas;
            return d;
        },
        py::arg("c"), py::arg("w"), py::arg("T") = 100, py::arg("rule") = "asymptotic");
    m.def("recurrence_oracle", [](const Grid& d, const std::vector<double>& w, unsigned k) {
        return dvec(mt::recurrence_oracle(tropical_from(d), tvec(w), k));
    });
    m.def("ranking", [](const std::vector<double>& v) { return mt::ranking(v); });

    m.def(
        "run_experiment",
        [](int scenario, const std::string& topology, std::size_t run_id, std::uint64_t seed, unsigned timesteps) {
            mt::ScenarioConfig cfg;
            cfg.scenario = scenario;
            cfg.topology = topology_from(topology);
            cfg.seed = seed;
            cfg.timesteps = timesteps;
            mt::RunRecord rec;
            {
                py::gil_scoped_release release;
                rec = mt::run_experiment(cfg, run_id);
            }
            py::dict d;
            d["eigentrust"] = rec.eigentrust_distance;
            d["maxtrust"] = rec.maxtrust_distance;
            d["final_routers"] = rec.final_routers;
            d["error"] = rec.error;
            return d;
        },
        py::arg("scenario"), py::arg("topology"), py::arg("run_id") = 0, py::arg("seed") = 1,
        py::arg("timesteps") = 100);
}
