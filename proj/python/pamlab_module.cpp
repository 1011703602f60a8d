#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pam/chaos.hpp"
#include "pam/errors.hpp"
#include "pam/feynman_kac.hpp"
#include "pam/model.hpp"
#include "pam/variational.hpp"

namespace py = pybind11;
using namespace pam;

namespace {

CovarianceModel make_model(double alpha0, double alpha, int d, double lam,
                           const std::string& kernel) {
    return CovarianceModel(alpha0, alpha, d, lam, spatial_kernel_from_string(kernel));
}

VariationalResult solve_variational(const CovarianceModel& model, int M, int N, double L,
                                    double step, double tol, int max_iter) {
    TrialOptimum trial = best_trial(model, M, N, L);
    GridFunction init = gaussian_profile(M, N, model.d, L, trial.sigma);
    return ascend(init, model, AscendConfig{step, max_iter, tol});
}

SecondMoment chaos_second_moment(const CovarianceModel& model, int Mt, int N, double L,
                                 double t, int K, int workers) {
    SpaceTimeGrid grid = SpaceTimeGrid::make(Mt, N, model.d, L, t);
    NoiseField noise = build_noise(grid, model);
    ChaosSolution sol = build_kernels(grid, model, K);
    return second_moment_exact(sol, noise, workers);
}

LpEstimate chaos_lp(const CovarianceModel& model, int Mt, int N, double L, double t,
                    int K, double p, long samples, std::uint64_t seed, int workers) {
    SpaceTimeGrid grid = SpaceTimeGrid::make(Mt, N, model.d, L, t);
    NoiseField noise = build_noise(grid, model);
    ChaosSolution sol = build_kernels(grid, model, K);
    return estimate_Lp(sol, noise, p, samples, seed, workers);
}

// Largest relative difference between the Ornstein-Uhlenbeck action on the
// lambda build and a direct build at e^{-2 tau} lambda.
double mehler_coefficient_drift(const CovarianceModel& model, int Mt, int N, double L,
                                double t, double tau) {
    SpaceTimeGrid grid = SpaceTimeGrid::make(Mt, N, model.d, L, t);
    ChaosSolution sol = build_kernels(grid, model, 3);
    ChaosSolution acted = mehler_action(sol, tau);
    ChaosSolution direct =
        build_kernels(grid, model.with_lambda(std::exp(-2.0 * tau) * model.lambda), 3);
    return max_level_coefficient_rel_diff(acted, direct);
}

HyperComparison hyper(const CovarianceModel& model, int Mt, int N, double L, double t,
                      double p, double q, long samples, std::uint64_t seed, int workers) {
    SpaceTimeGrid grid = SpaceTimeGrid::make(Mt, N, model.d, L, t);
    return hypercontractivity_test(grid, model, p, q, samples, seed, workers);
}

} // namespace

PYBIND11_MODULE(pamlab, m) {
    m.doc() = "moment growth laboratory for the parabolic Anderson model with "
              "fractional-in-time, scale-invariant-in-space Gaussian noise";

    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<resource_cap_error>(m, "ResourceCapError", PyExc_RuntimeError);
    py::register_exception<singularity_error>(m, "SingularityError", PyExc_ValueError);

    py::class_<CovarianceModel>(m, "CovarianceModel")
        .def(py::init(&make_model), py::arg("alpha0"), py::arg("alpha"), py::arg("d"),
             py::arg("lam"), py::arg("kernel") = "riesz")
        .def_readonly("alpha0", &CovarianceModel::alpha0)
        .def_readonly("alpha", &CovarianceModel::alpha)
        .def_readonly("d", &CovarianceModel::d)
        .def_readonly("lam", &CovarianceModel::lambda)
        .def("with_lam", &CovarianceModel::with_lambda);

    py::class_<RatePrediction>(m, "RatePrediction")
        .def_readonly("time_exponent", &RatePrediction::time_exponent)
        .def_readonly("coefficient", &RatePrediction::coefficient)
        .def_readonly("order", &RatePrediction::order);

    m.def("gamma_temporal", &gamma_temporal);
    m.def("gamma_spatial",
          [](const CovarianceModel& model, const std::vector<double>& x) {
              return gamma_spatial(model, x);
          });
    m.def("ball_average", &ball_average);
    m.def("time_rate_exponent", &time_rate_exponent);
    m.def("lyapunov_prediction", &lyapunov_prediction, py::arg("model"), py::arg("p"),
          py::arg("E1"));
    m.def("scaled_variational_constant", &scaled_variational_constant);
    m.def("white_noise_rate", &white_noise_rate);
    m.def("hypercontract_map", [](double p, double q) {
        HyperMap h = hypercontract_map(p, q);
        return py::make_tuple(h.tau, h.lambda_factor);
    });

    py::class_<VariationalResult>(m, "VariationalResult")
        .def_readonly("value", &VariationalResult::value)
        .def_readonly("history", &VariationalResult::history)
        .def_readonly("converged", &VariationalResult::converged)
        .def_readonly("iterations", &VariationalResult::iterations)
        .def_readonly("mass_in_box", &VariationalResult::mass_in_box);

    m.def("solve_variational", &solve_variational, py::arg("model"), py::arg("M"),
          py::arg("N"), py::arg("L"), py::arg("step") = 0.05, py::arg("tol") = 1e-9,
          py::arg("max_iter") = 2000,
          py::call_guard<py::gil_scoped_release>());
    m.def("trial_bound", &trial_bound, py::arg("model"), py::arg("sigma"), py::arg("M"),
          py::arg("N"), py::arg("L"));
    m.def(
        "scaling_residuals",
        [](const CovarianceModel& model, const std::vector<double>& lambdas, int M,
           int N, double L) {
            ScalingCheckResult sc =
                scaling_check(model, lambdas, M, N, L, AscendConfig{});
            return sc.residuals;
        },
        py::arg("model"), py::arg("lambdas"), py::arg("M"), py::arg("N"), py::arg("L"),
        py::call_guard<py::gil_scoped_release>());

    py::class_<MomentEstimate>(m, "MomentEstimate")
        .def_readonly("value", &MomentEstimate::value)
        .def_readonly("log_value", &MomentEstimate::log_value)
        .def_readonly("stderr", &MomentEstimate::stderr_of_mean)
        .def_readonly("log_stderr", &MomentEstimate::log_stderr)
        .def_readonly("samples", &MomentEstimate::samples)
        .def_readonly("heavy_tail", &MomentEstimate::heavy_tail)
        .def_readonly("engine", &MomentEstimate::engine);

    m.def(
        "estimate_moment",
        [](int n, double t, const CovarianceModel& model, long samples, int steps,
           std::uint64_t seed, int workers) {
            FkOptions opts;
            opts.workers = workers;
            return estimate_moment(n, t, model, samples, steps, seed, opts);
        },
        py::arg("n"), py::arg("t"), py::arg("model"), py::arg("samples"),
        py::arg("steps"), py::arg("seed") = 12345, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "normalized_log_moment",
        [](int n, double t, const CovarianceModel& model, long samples, int steps,
           std::uint64_t seed, int workers) {
            FkOptions opts;
            opts.workers = workers;
            NormalizedLogMoment nlm =
                normalized_log_moment(n, t, model, samples, steps, seed, opts);
            return py::make_tuple(nlm.value, nlm.lo, nlm.hi);
        },
        py::arg("n"), py::arg("t"), py::arg("model"), py::arg("samples"),
        py::arg("steps"), py::arg("seed") = 12345, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "estimate_moment_local_time",
        [](int n, double t, double lam, double eps, long samples, int steps,
           std::uint64_t seed, int workers) {
            FkOptions opts;
            opts.workers = workers;
            return estimate_moment_local_time(n, t, lam, eps, samples, steps, seed, opts);
        },
        py::arg("n"), py::arg("t"), py::arg("lam"), py::arg("eps"), py::arg("samples"),
        py::arg("steps"), py::arg("seed") = 12345, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());

    py::class_<SecondMoment>(m, "SecondMoment")
        .def_readonly("total", &SecondMoment::total)
        .def_readonly("level_terms", &SecondMoment::level_terms)
        .def_readonly("tail_proxy", &SecondMoment::tail_proxy);

    py::class_<LpEstimate>(m, "LpEstimate")
        .def_readonly("norm", &LpEstimate::norm)
        .def_readonly("mean_abs_p", &LpEstimate::mean_abs_p)
        .def_readonly("norm_stderr", &LpEstimate::norm_stderr)
        .def_readonly("samples", &LpEstimate::samples);

    py::class_<HyperComparison>(m, "HyperComparison")
        .def_readonly("lhs", &HyperComparison::lhs)
        .def_readonly("rhs", &HyperComparison::rhs)
        .def_readonly("lhs_stderr", &HyperComparison::lhs_stderr)
        .def_readonly("rhs_stderr", &HyperComparison::rhs_stderr)
        .def_readonly("combined_stderr", &HyperComparison::combined_stderr)
        .def_readonly("passed", &HyperComparison::pass);

    m.def("chaos_second_moment", &chaos_second_moment, py::arg("model"), py::arg("Mt"),
          py::arg("N"), py::arg("L"), py::arg("t"), py::arg("K") = 3,
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("chaos_estimate_Lp", &chaos_lp, py::arg("model"), py::arg("Mt"), py::arg("N"),
          py::arg("L"), py::arg("t"), py::arg("K"), py::arg("p"), py::arg("samples"),
          py::arg("seed") = 12345, py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("mehler_coefficient_drift", &mehler_coefficient_drift, py::arg("model"),
          py::arg("Mt"), py::arg("N"), py::arg("L"), py::arg("t"), py::arg("tau"),
          py::call_guard<py::gil_scoped_release>());
    m.def("hypercontractivity_test", &hyper, py::arg("model"), py::arg("Mt"),
          py::arg("N"), py::arg("L"), py::arg("t"), py::arg("p"), py::arg("q"),
          py::arg("samples"), py::arg("seed") = 12345, py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());
}
