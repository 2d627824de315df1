#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pacesync/analysis.hpp"
#include "pacesync/config.hpp"
#include "pacesync/dynamics.hpp"
#include "pacesync/harness.hpp"
#include "pacesync/network.hpp"

namespace py = pybind11;
using namespace pacesync;

namespace {

Mat mat_from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    Mat m(n, n == 0 ? 0 : rows.front().size());
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m.cols()) throw std::invalid_argument("rows must have equal length");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> mat_to_rows(const Mat& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

ModelParams make_params(const std::vector<std::vector<double>>& coupling, const Vec& g, double w0,
                        const std::optional<Vec>& w, double phi0_init) {
    CouplingGraph graph = CouplingGraph::from_matrix(mat_from_rows(coupling));
    Vec freqs = w ? *w : Vec(graph.n, w0);
    return ModelParams(std::move(graph), PacemakerCoupling::from_vector(g), w0, std::move(freqs),
                       phi0_init);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kuramoto oscillator networks driven by a pacemaker: integration, "
              "spectral rate bounds, condition checks and sweep experiments";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

    py::class_<CouplingGraph>(m, "CouplingGraph")
        .def_static(
            "from_matrix",
            [](const std::vector<std::vector<double>>& rows) {
                return CouplingGraph::from_matrix(mat_from_rows(rows));
            },
            py::arg("a"))
        .def_readonly("n", &CouplingGraph::n)
        .def_property_readonly("a", [](const CouplingGraph& g) { return mat_to_rows(g.a); });

    py::class_<IncidenceRepresentation>(m, "IncidenceRepresentation")
        .def_readonly("n", &IncidenceRepresentation::n)
        .def_readonly("m", &IncidenceRepresentation::m)
        .def_property_readonly("b",
                               [](const IncidenceRepresentation& inc) { return mat_to_rows(inc.b); })
        .def_readonly("w", &IncidenceRepresentation::w)
        .def_property_readonly("edges", [](const IncidenceRepresentation& inc) {
            std::vector<std::pair<std::size_t, std::size_t>> out;
            out.reserve(inc.edges.size());
            for (const Edge& e : inc.edges) out.emplace_back(e.i, e.j);
            return out;
        });

    m.def(
        "build_incidence", [](const CouplingGraph& g) { return build_incidence(g); },
        py::arg("graph"));
    m.def(
        "laplacian",
        [](const IncidenceRepresentation& inc) { return mat_to_rows(laplacian(inc)); },
        py::arg("incidence"));
    m.def(
        "is_connected", [](const CouplingGraph& g) { return is_connected(g); }, py::arg("graph"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init(&make_params), py::arg("coupling"), py::arg("g"), py::arg("w0"),
             py::arg("w") = std::nullopt, py::arg("phi0_init") = 0.0)
        .def_property_readonly("n", &ModelParams::size)
        .def_readonly("w0", &ModelParams::w0)
        .def_readonly("w", &ModelParams::w)
        .def_readonly("omega", &ModelParams::omega)
        .def("identical_frequencies", &ModelParams::identical_frequencies);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init([](double dt, double t_max, std::size_t record_every) {
                 IntegratorConfig cfg{dt, t_max, record_every};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("dt") = 0.01, py::arg("t_max") = 500.0, py::arg("record_every") = 1)
        .def_readwrite("dt", &IntegratorConfig::dt)
        .def_readwrite("t_max", &IntegratorConfig::t_max)
        .def_readwrite("record_every", &IntegratorConfig::record_every);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("xi_samples", &Trajectory::xi_samples)
        .def_readonly("zeta_samples", &Trajectory::zeta_samples)
        .def_readonly("r_samples", &Trajectory::r_samples)
        .def("__len__", &Trajectory::size)
        .def("to_csv", [](const Trajectory& traj) {
            std::ostringstream os;
            write_trajectory_csv(os, traj);
            return os.str();
        });

    m.def("relative_phase_rhs", &relative_phase_rhs, py::arg("xi"), py::arg("params"));
    m.def("full_phase_rhs", &full_phase_rhs, py::arg("phi0"), py::arg("phi"), py::arg("params"));
    m.def("wrap_phase", &wrap_phase, py::arg("x"));
    m.def(
        "integrate",
        [](const ModelParams& params, const Vec& xi0, const IntegratorConfig& cfg) {
            return integrate(params, xi0, cfg);
        },
        py::arg("params"), py::arg("xi0"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

    m.def("sinc", &sinc, py::arg("x"));
    py::class_<SincConstants>(m, "SincConstants")
        .def_readonly("epsilon0", &SincConstants::epsilon0)
        .def_readonly("sinc_2eps0", &SincConstants::sinc_2eps0);
    m.def("solve_epsilon0", &solve_epsilon0);
    m.def("sigma_pair_sync", &sigma_pair_sync, py::arg("epsilon"));
    m.def(
        "symmetric_eigen_extremes",
        [](const std::vector<std::vector<double>>& rows) {
            return symmetric_eigen_extremes(mat_from_rows(rows));
        },
        py::arg("mat"));

    py::enum_<RateKind>(m, "RateKind")
        .value("alpha1", RateKind::alpha1)
        .value("alpha2", RateKind::alpha2)
        .value("alpha3", RateKind::alpha3)
        .value("alpha4", RateKind::alpha4);

    py::class_<RateBound>(m, "RateBound")
        .def_readonly("kind", &RateBound::kind)
        .def_readonly("value", &RateBound::value)
        .def_readonly("epsilon", &RateBound::epsilon)
        .def_readonly("valid", &RateBound::valid)
        .def("__repr__", [](const RateBound& rb) {
            std::ostringstream os;
            os << "RateBound(" << to_string(rb.kind) << ", value=" << rb.value
               << ", epsilon=" << rb.epsilon << ", valid=" << (rb.valid ? "True" : "False") << ")";
            return os.str();
        });

    m.def("alpha1", &alpha1, py::arg("params"), py::arg("epsilon"));
    m.def("alpha2", &alpha2, py::arg("params"), py::arg("epsilon"));
    m.def("alpha3", &alpha3, py::arg("params"), py::arg("epsilon"));
    m.def("alpha4", &alpha4, py::arg("params"), py::arg("epsilon"));

    py::class_<ConditionVerdict>(m, "ConditionVerdict")
        .def_readonly("condition", &ConditionVerdict::condition)
        .def_readonly("holds", &ConditionVerdict::holds)
        .def_readonly("margin", &ConditionVerdict::margin)
        .def_readonly("binding_term", &ConditionVerdict::binding_term)
        .def("__repr__", [](const ConditionVerdict& v) {
            std::ostringstream os;
            os << "ConditionVerdict(" << v.condition << ", holds=" << (v.holds ? "True" : "False")
               << ", margin=" << v.margin << ", binding=" << v.binding_term << ")";
            return os.str();
        });

    m.def("check_sync_condition", &check_sync_condition, py::arg("params"), py::arg("epsilon"));
    m.def("check_locking_condition", &check_locking_condition, py::arg("params"),
          py::arg("epsilon"));
    m.def("check_trapping_condition", &check_trapping_condition, py::arg("params"),
          py::arg("epsilon"), py::arg("delta"));

    m.def("order_parameter", &order_parameter, py::arg("phi0"), py::arg("phi"));
    m.def("lyapunov_diagnostics", &lyapunov_diagnostics, py::arg("xi"), py::arg("params"));
    m.def(
        "fit_decay_rate",
        [](const Trajectory& traj, double t_start, double t_end) {
            const DecayFit fit = fit_decay_rate(traj, t_start, t_end);
            return std::make_pair(fit.alpha_hat, fit.intercept);
        },
        py::arg("trajectory"), py::arg("t_start"), py::arg("t_end"));

    py::enum_<ExperimentKind>(m, "ExperimentKind")
        .value("sync_sweep", ExperimentKind::sync_sweep)
        .value("locking_sweep", ExperimentKind::locking_sweep)
        .value("trapping", ExperimentKind::trapping);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def_readonly("kind", &ExperimentSpec::kind)
        .def_readonly("n", &ExperimentSpec::n)
        .def_readonly("runs", &ExperimentSpec::runs)
        .def_readonly("seed", &ExperimentSpec::seed)
        .def_readonly("multipliers", &ExperimentSpec::multipliers)
        .def_readwrite("integrator", &ExperimentSpec::integrator);

    m.def("load_experiment", &load_experiment_json, py::arg("json_text"));
    m.def("load_experiment_file", &load_experiment_file, py::arg("path"));

    py::class_<MultiplierStats>(m, "MultiplierStats")
        .def_readonly("multiplier", &MultiplierStats::multiplier)
        .def_readonly("mean_time", &MultiplierStats::mean_time)
        .def_readonly("std_time", &MultiplierStats::std_time)
        .def_readonly("timeout_count", &MultiplierStats::timeout_count)
        .def_readonly("blowup_count", &MultiplierStats::blowup_count);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("per_multiplier", &SweepResult::per_multiplier)
        .def("to_csv", [](const SweepResult& result) {
            std::ostringstream os;
            write_sweep_csv(os, result);
            return os.str();
        });

    py::class_<TrappingPoint>(m, "TrappingPoint")
        .def_readonly("multiplier", &TrappingPoint::multiplier)
        .def_readonly("max_final_relative_phase", &TrappingPoint::max_final_relative_phase)
        .def_readonly("blowup_count", &TrappingPoint::blowup_count);

    py::class_<TrappingResult>(m, "TrappingResult")
        .def_readonly("per_multiplier", &TrappingResult::per_multiplier)
        .def("to_csv", [](const TrappingResult& result) {
            std::ostringstream os;
            write_trapping_csv(os, result);
            return os.str();
        });

    m.def(
        "run_sweep", [](const ExperimentSpec& spec) { return run_sweep(spec); }, py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_trapping", [](const ExperimentSpec& spec) { return run_trapping(spec); },
        py::arg("spec"), py::call_guard<py::gil_scoped_release>());
    m.def("time_to_sync", &time_to_sync, py::arg("trajectory"), py::arg("threshold") = 0.99);
    m.def("time_to_lock", &time_to_lock, py::arg("trajectory"), py::arg("tol") = 1e-3);
}
