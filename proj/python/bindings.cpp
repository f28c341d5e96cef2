// Python module adukf._core: scenario simulation, single-filter estimation,
// the benchmark sweep and a few numerical building blocks.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adukf/bench/commands.hpp"
#include "adukf/errors.hpp"
#include "adukf/evaluation.hpp"
#include "adukf/psd_linalg.hpp"

namespace py = pybind11;
using namespace adukf;

namespace {

bench::RunConfig config_from(const std::optional<std::string>& json) {
    return json ? bench::parse_config(*json) : bench::RunConfig{};
}

Matrix stack(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    Matrix m(static_cast<Index>(rows.size()), rows.front().size());
    for (std::size_t k = 0; k < rows.size(); ++k) m.row(static_cast<Index>(k)) = rows[k].transpose();
    return m;
}

std::vector<Vector> unstack(const Matrix& m) {
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Index k = 0; k < m.rows(); ++k) out.emplace_back(m.row(k).transpose());
    return out;
}

py::dict simulate(std::uint64_t seed, const std::optional<std::string>& config) {
    const bench::RunConfig cfg = config_from(config);
    const bench::Simulation sim = bench::simulate(cfg.scenario, seed);
    py::dict d;
    d["t"] = sim.truth.times;
    d["u"] = sim.truth.feed;
    d["x"] = stack(sim.truth.states);
    d["y_clean"] = stack(sim.truth.outputs);
    d["y"] = stack(sim.measurements);
    return d;
}

py::dict estimate(const std::string& variant, const std::vector<double>& t, const std::vector<double>& u,
                  const Matrix& y, std::optional<double> gamma, const std::optional<std::string>& config) {
    const bench::RunConfig cfg = config_from(config);
    if (static_cast<std::size_t>(y.rows()) != t.size()) {
        throw std::invalid_argument("estimate: y must have one row per time sample");
    }
    const bench::MeasurementSeries data{t, u, unstack(y)};
    const FilterRun run = bench::estimate(cfg, bench::require_variant(variant), data, gamma);
    std::vector<Vector> means, diags;
    for (const auto& s : run.trajectory) {
        means.push_back(s.mean);
        diags.emplace_back(s.cov.diagonal());
    }
    std::vector<int> evals, iters;
    for (const auto& s : run.solve_stats) {
        evals.push_back(s.cost_evaluations);
        iters.push_back(s.iterations);
    }
    py::dict d;
    d["xhat"] = stack(means);
    d["P_diag"] = stack(diags);
    d["wall_time"] = run.wall_time;
    d["cost_evaluations"] = evals;
    d["iterations"] = iters;
    return d;
}

py::list benchmark(const std::vector<std::uint64_t>& seeds, const std::vector<std::string>& variants,
                   std::optional<double> gamma, const std::optional<std::string>& config) {
    bench::RunConfig cfg = config_from(config);
    if (!seeds.empty()) cfg.benchmark.seeds = seeds;
    bench::BenchmarkOptions opts;
    opts.variant_filter = variants;
    opts.gamma = gamma;
    py::list out;
    for (const auto& r : bench::run_benchmark(cfg, opts)) {
        py::dict d;
        d["seed"] = r.seed;
        d["variant"] = r.variant;
        d["gamma"] = r.gamma;
        d["nrmse_x"] = r.nrmse_x;
        d["nrmse_y"] = r.nrmse_y;
        d["wall_time_s"] = r.wall_time;
        d["median_cost_evals"] = r.median_cost_evals;
        d["median_iters"] = r.median_iters;
        d["error"] = r.error;
        out.append(std::move(d));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Unscented Kalman filter variants on the six-state anaerobic digestion model";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("variant_names", [] {
        std::vector<std::string> names;
        for (const auto& v : bench::registered_variants()) names.push_back(v.name);
        return names;
    });
    m.def("simulate", &simulate, py::arg("seed") = 1, py::arg("config") = std::nullopt,
          "Truth trajectory and noisy measurements; config is an optional JSON string.");
    m.def("estimate", &estimate, py::arg("variant"), py::arg("t"), py::arg("u"), py::arg("y"),
          py::arg("gamma") = std::nullopt, py::arg("config") = std::nullopt);
    m.def("benchmark", &benchmark, py::arg("seeds") = std::vector<std::uint64_t>{},
          py::arg("variants") = std::vector<std::string>{}, py::arg("gamma") = std::nullopt,
          py::arg("config") = std::nullopt, "Summary rows as dicts, same fields as summary.csv.");

    m.def("nrmse", [](const std::vector<double>& est, const std::vector<double>& truth) {
        return eval::nrmse(est, truth);
    });
    m.def("group_nrmse", [](const Matrix& est, const Matrix& truth, const std::vector<Index>& idx) {
        return eval::group_nrmse(unstack(est), unstack(truth), idx);
    });
    m.def("psd_cholesky", [](const Matrix& a) {
        const auto f = linalg::psd_cholesky(a);
        return py::make_tuple(f.lower, f.definite);
    });
    m.def("solve_qp", [](const Matrix& h, const Vector& g, const Matrix& a, const Vector& b, const Vector& x0) {
        const opt::QpResult r = opt::solve_qp(h, g, opt::LinearConstraints(a, b, x0), x0);
        return py::make_tuple(r.x, r.multipliers, r.stats.iterations);
    });
}
