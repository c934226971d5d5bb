#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pftg/experiments.hpp"

namespace py = pybind11;
using namespace pftg;

namespace {

py::array_t<double> field_to_numpy(const Field& f) {
    return py::array_t<double>(py::ssize_t(f.size()), f.values.data());
}

Field numpy_to_field(const Grid& g, const py::array_t<double>& a) {
    if (std::size_t(a.size()) != g.total_cells())
        throw GridMismatch("array length does not match the grid cell count");
    Field f(g);
    auto buf = a.unchecked<1>();
    for (py::ssize_t i = 0; i < a.size(); ++i) f.values[std::size_t(i)] = buf(i);
    return f;
}

} // namespace

PYBIND11_MODULE(pftg, m) {
    m.doc() = "Viscous Cahn-Hilliard tumor-growth solver";

    py::enum_<PotentialKind>(m, "PotentialKind")
        .value("Quartic", PotentialKind::Quartic)
        .value("Logarithmic", PotentialKind::Logarithmic)
        .value("DoubleObstacle", PotentialKind::DoubleObstacle);

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def(py::init([](PotentialKind kind, double eps, double kappa) {
                 PotentialSpec s{kind, eps, kappa};
                 s.validate();
                 return s;
             }),
             py::arg("kind"), py::arg("eps"), py::arg("kappa") = 0.0)
        .def_readonly("kind", &PotentialSpec::kind)
        .def_readonly("eps", &PotentialSpec::eps)
        .def_readonly("kappa", &PotentialSpec::kappa);

    m.def("w_value", &w_value);
    m.def("w_eps_value", &w_eps_value);
    m.def("beta_eps", &beta_eps);
    m.def("beta_eps_moreau", &beta_eps_moreau);
    m.def("beta_hat", &beta_hat);
    m.def("lambda_prime", &lambda_prime);
    m.def("resolvent", &resolvent);
    m.def("w_prime_smooth", &w_prime_smooth);

    py::class_<ProliferationSpec> prolif(m, "ProliferationSpec");
    py::enum_<ProliferationSpec::Kind>(prolif, "Kind")
        .value("Constant", ProliferationSpec::Kind::Constant)
        .value("SqrtW", ProliferationSpec::Kind::SqrtW);
    prolif
        .def(py::init([](ProliferationSpec::Kind kind, double value, double p0) {
                 ProliferationSpec s{kind, value, p0};
                 s.validate();
                 return s;
             }),
             py::arg("kind"), py::arg("value") = 0.0, py::arg("p0") = 1.0)
        .def_readonly("kind", &ProliferationSpec::kind);
    m.def("p_value", &p_value);

    py::class_<Grid>(m, "Grid")
        .def(py::init([](int dim, std::vector<int> n, std::vector<double> length) {
                 std::array<int, 3> na{1, 1, 1};
                 std::array<double, 3> la{1, 1, 1};
                 for (std::size_t a = 0; a < n.size() && a < 3; ++a) na[a] = n[a];
                 for (std::size_t a = 0; a < length.size() && a < 3; ++a) la[a] = length[a];
                 return Grid::make(dim, na, la);
             }),
             py::arg("dim"), py::arg("n"), py::arg("length"))
        .def_readonly("dim", &Grid::dim)
        .def_property_readonly("n", [](const Grid& g) {
            return std::vector<int>(g.n.begin(), g.n.begin() + g.dim);
        })
        .def_property_readonly("h", [](const Grid& g) {
            return std::vector<double>(g.h.begin(), g.h.begin() + g.dim);
        })
        .def("total_cells", &Grid::total_cells)
        .def("cell_volume", &Grid::cell_volume);

    m.def("laplacian_neumann", [](const Grid& g, const py::array_t<double>& a) {
        return field_to_numpy(laplacian_neumann(numpy_to_field(g, a)));
    });
    m.def("integrate", [](const Grid& g, const py::array_t<double>& a) {
        return integrate(numpy_to_field(g, a));
    });
    m.def("grad_sq_integral", [](const Grid& g, const py::array_t<double>& a) {
        return grad_sq_integral(numpy_to_field(g, a));
    });
    m.def("neumann_eigenvalues", &neumann_eigenvalues);
    m.def(
        "solve_helmholtz",
        [](const Grid& g, double a, double b, const py::array_t<double>& rhs, double tol,
           const std::string& method) {
            HelmholtzOptions opts;
            opts.tol_lin = tol;
            opts.method = method == "cosine_transform" ? LinearMethod::CosineTransform
                                                       : LinearMethod::CG;
            return field_to_numpy(solve_helmholtz(g, a, b, numpy_to_field(g, rhs), opts));
        },
        py::arg("grid"), py::arg("a"), py::arg("b"), py::arg("rhs"), py::arg("tol") = 1e-11,
        py::arg("method") = "cg");

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("alpha", &SolverConfig::alpha)
        .def_readwrite("gamma", &SolverConfig::gamma)
        .def_readwrite("potential", &SolverConfig::potential)
        .def_readwrite("proliferation", &SolverConfig::proliferation)
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("tol_newton", &SolverConfig::tol_newton)
        .def_readwrite("tol_lin", &SolverConfig::tol_lin)
        .def_readwrite("max_newton", &SolverConfig::max_newton)
        .def("validate", &SolverConfig::validate);

    py::class_<State>(m, "State")
        .def(py::init([](const Grid& g) { return State(g); }))
        .def_readwrite("t", &State::t)
        .def_property(
            "mu", [](const State& s) { return field_to_numpy(s.mu); },
            [](State& s, const py::array_t<double>& a) { s.mu = numpy_to_field(s.grid(), a); })
        .def_property(
            "u", [](const State& s) { return field_to_numpy(s.u); },
            [](State& s, const py::array_t<double>& a) { s.u = numpy_to_field(s.grid(), a); })
        .def_property(
            "sigma", [](const State& s) { return field_to_numpy(s.sigma); },
            [](State& s, const py::array_t<double>& a) {
                s.sigma = numpy_to_field(s.grid(), a);
            });

    py::class_<StepStats>(m, "StepStats")
        .def_readonly("newton_iters", &StepStats::newton_iters)
        .def_readonly("final_residual", &StepStats::final_residual)
        .def_readonly("linear_iters", &StepStats::linear_iters);

    m.def("step_viscous", [](const State& s, const SolverConfig& cfg) {
        auto [next, stats] = step_viscous(s, cfg);
        return py::make_tuple(next, stats);
    });
    m.def("step_limit", [](const State& s, const SolverConfig& cfg) {
        auto [next, stats] = step_limit(s, cfg);
        return py::make_tuple(next, stats);
    });

    m.def("mass", &mass);
    m.def("energy_intro", &energy_intro);
    m.def("energy_gamma", &energy_gamma);

    py::class_<SteadyIndicators>(m, "SteadyIndicators")
        .def_readonly("grad_mu_l2", &SteadyIndicators::grad_mu_l2)
        .def_readonly("grad_sigma_l2", &SteadyIndicators::grad_sigma_l2)
        .def_readonly("reaction_l2", &SteadyIndicators::reaction_l2)
        .def_readonly("steady_residual_u", &SteadyIndicators::steady_residual_u);
    m.def("steady_indicators", &steady_indicators);

    m.def(
        "solve_stationary",
        [](double mu_s, const PotentialSpec& pot, const Grid& g, const py::array_t<double>& guess,
           double tol) {
            StationaryProblem prob;
            prob.mu_s = mu_s;
            prob.potential = pot;
            prob.grid = g;
            prob.initial_guess = numpy_to_field(g, guess);
            return field_to_numpy(solve_stationary(prob, tol));
        },
        py::arg("mu_s"), py::arg("potential"), py::arg("grid"), py::arg("guess"),
        py::arg("tol") = 1e-10);

    py::enum_<OmegaBranch>(m, "OmegaBranch")
        .value("Mixed", OmegaBranch::Mixed)
        .value("PurePlus", OmegaBranch::PurePlus)
        .value("PureMinus", OmegaBranch::PureMinus)
        .value("NotSteady", OmegaBranch::NotSteady);
    py::class_<OmegaClassification>(m, "OmegaClassification")
        .def_readonly("branch", &OmegaClassification::branch)
        .def_readonly("mixed_defect", &OmegaClassification::mixed_defect);
    m.def("classify_omega", &classify_omega);

    m.def("sweep_eps",
          [](const PotentialSpec& base, const std::vector<double>& eps,
             const std::vector<double>& points) {
              auto rep = sweep_eps(base, eps, points);
              py::dict out;
              out["eps"] = rep.eps;
              out["points"] = rep.points;
              out["moreau"] = rep.moreau;
              out["beta_hat"] = rep.beta_hat_values;
              out["monotone"] = rep.monotone;
              out["bounded"] = rep.bounded;
              return out;
          });

    m.def("parse_config", &parse_config);
    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("solver", &RunConfig::solver)
        .def_readwrite("t_end", &RunConfig::t_end)
        .def_readwrite("output_dir", &RunConfig::output_dir)
        .def("make_grid", &RunConfig::make_grid);
    m.def("run_relaxation", [](const RunConfig& cfg) {
        auto res = run_relaxation(cfg);
        py::dict out;
        out["steps"] = res.steps_taken;
        out["steady_detected"] = res.steady_detected;
        out["t_detected"] = res.t_detected;
        out["energy_violations"] = res.energy_violations;
        out["final_state"] = res.final_state;
        out["mass"] = res.final_record.mass;
        out["energy_gamma"] = res.final_record.energy_gamma;
        return out;
    });
}
