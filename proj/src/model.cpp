#include "pam/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pam {

SpatialKernel spatial_kernel_from_string(const std::string& name) {
    if (name == "riesz") return SpatialKernel::Riesz;
    throw config_error("unknown spatial kernel: " + name);
}

std::string to_string(SpatialKernel k) {
    switch (k) {
        case SpatialKernel::Riesz: return "riesz";
    }
    return "riesz";
}

CovarianceModel::CovarianceModel(double alpha0_, double alpha_, int d_, double lambda_,
                                 SpatialKernel kernel_)
    : alpha0(alpha0_), alpha(alpha_), d(d_), lambda(lambda_), kernel(kernel_) {
    std::ostringstream err;
    if (!(alpha0 > 0.0 && alpha0 < 1.0)) {
        err << "alpha0 must lie in the open interval (0,1), got " << alpha0;
        throw config_error(err.str());
    }
    if (!(alpha > 0.0 && alpha < 2.0)) {
        err << "alpha must lie in the open interval (0,2), got " << alpha;
        throw config_error(err.str());
    }
    if (d < 1) {
        err << "dimension must be >= 1, got " << d;
        throw config_error(err.str());
    }
    if (!(lambda >= 0.0)) {
        err << "lambda must be >= 0, got " << lambda;
        throw config_error(err.str());
    }
    if (alpha > static_cast<double>(d)) {
        err << "Riesz kernel with alpha > d is not locally integrable (alpha=" << alpha
            << ", d=" << d << ")";
        throw config_error(err.str());
    }
}

double gamma_temporal(const CovarianceModel& model, double t) {
    if (t == 0.0)
        throw singularity_error("gamma_temporal evaluated at t = 0; use cell averages");
    return std::pow(std::fabs(t), -model.alpha0);
}

double gamma_spatial_radial(const CovarianceModel& model, double r) {
    if (r == 0.0)
        throw singularity_error("gamma_spatial evaluated at x = 0; use cell averages");
    return std::pow(r, -model.alpha);
}

double gamma_spatial(const CovarianceModel& model, std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return gamma_spatial_radial(model, std::sqrt(r2));
}

double temporal_antiderivative2(double alpha0, double u) {
    return std::pow(std::fabs(u), 2.0 - alpha0) / ((1.0 - alpha0) * (2.0 - alpha0));
}

double temporal_cell_integral(const CovarianceModel& model, double a1, double a2,
                              double b1, double b2) {
    const double a0 = model.alpha0;
    return temporal_antiderivative2(a0, a2 - b1) + temporal_antiderivative2(a0, a1 - b2) -
           temporal_antiderivative2(a0, a1 - b1) - temporal_antiderivative2(a0, a2 - b2);
}

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double ball_average(const CovarianceModel& model, double r) {
    if (!(r > 0.0)) throw config_error("ball_average requires r > 0");
    const double dd = static_cast<double>(model.d);
    if (model.alpha < dd) return dd / (dd - model.alpha) * std::pow(r, -model.alpha);
    // Borderline alpha == d: the volume average diverges, take gamma at r.
    return std::pow(r, -model.alpha);
}

namespace {

// First antiderivative of |u|^{-alpha} in one dimension, alpha < 1.
double riesz_antiderivative_1d(double alpha, double u) {
    double s = u >= 0.0 ? 1.0 : -1.0;
    return s * std::pow(std::fabs(u), 1.0 - alpha) / (1.0 - alpha);
}

} // namespace

double spatial_cell_average(const CovarianceModel& model, std::span<const double> c,
                            double h) {
    if (!(h > 0.0)) throw config_error("spatial_cell_average requires h > 0");
    if (static_cast<int>(c.size()) != model.d)
        throw config_error("displacement dimension does not match model");

    if (model.d == 1) {
        const double lo = c[0] - 0.5 * h;
        const double hi = c[0] + 0.5 * h;
        const bool crosses_zero = lo < 0.0 && hi > 0.0;
        if (model.alpha < 1.0) {
            return (riesz_antiderivative_1d(model.alpha, hi) -
                    riesz_antiderivative_1d(model.alpha, lo)) /
                   h;
        }
        // alpha == 1 (borderline): exact log integral away from the origin,
        // equal-volume-ball rule for the cell containing it.
        if (crosses_zero || lo == 0.0 || hi == 0.0) return ball_average(model, 0.5 * h);
        return std::fabs(std::log(std::fabs(hi)) - std::log(std::fabs(lo))) / h;
    }

    double r2 = 0.0;
    for (double ci : c) r2 += ci * ci;
    if (r2 == 0.0) {
        // Equal-volume ball: V_d r^d = h^d.
        const double r_eq = h * std::pow(unit_ball_volume(model.d), -1.0 / model.d);
        return ball_average(model, r_eq);
    }
    return gamma_spatial_radial(model, std::sqrt(r2));
}

double time_rate_exponent(const CovarianceModel& model) {
    return (4.0 - model.alpha - 2.0 * model.alpha0) / (2.0 - model.alpha);
}

RatePrediction lyapunov_prediction(const CovarianceModel& model, double p, double E1) {
    if (!(p >= 1.0)) throw config_error("lyapunov_prediction requires p >= 1");
    const double ex = 2.0 / (2.0 - model.alpha);
    const double coeff =
        p * std::pow(0.5 * (p - 1.0), ex) * std::pow(model.lambda, ex) * E1;
    return RatePrediction{time_rate_exponent(model), coeff, p};
}

double scaled_variational_constant(const CovarianceModel& model, double E1, double lam) {
    if (!(lam > 0.0)) throw config_error("scaling identity requires lambda > 0");
    return std::pow(lam, 2.0 / (2.0 - model.alpha)) * E1;
}

double white_noise_rate(int n, double lam) {
    if (n < 1) throw config_error("white_noise_rate requires n >= 1");
    const double nn = static_cast<double>(n);
    return nn * (nn * nn - 1.0) * lam * lam / 24.0;
}

HyperMap hypercontract_map(double p, double q) {
    if (!(p > 1.0)) throw config_error("hypercontract_map requires p > 1");
    if (!(q >= p)) throw config_error("hypercontract_map requires q >= p");
    const double factor = (p - 1.0) / (q - 1.0);
    return HyperMap{-0.5 * std::log(factor), factor};
}

} // namespace pam
