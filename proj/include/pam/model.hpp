#pragma once

#include <span>
#include <string>

#include "pam/errors.hpp"

namespace pam {

// Spatial kernel tag. Riesz is the concrete kernel |x|^{-alpha}; anything
// satisfying gamma(c x) = c^{-alpha} gamma(x) can be added here together
// with its evaluation and cell-average rules below.
enum class SpatialKernel { Riesz };

SpatialKernel spatial_kernel_from_string(const std::string& name);
std::string to_string(SpatialKernel k);

// Noise model: covariance density gamma0(t - s) * gamma(x - y) with
// gamma0(t) = |t|^{-alpha0} and gamma homogeneous of degree -alpha.
// lambda is the noise intensity.
//
// Validity: alpha0 in (0,1), alpha in (0,2), d >= 1, lambda >= 0, and for
// the Riesz kernel alpha <= d. alpha > d is rejected (|x|^{-alpha} is not
// locally integrable); the borderline alpha == d is admitted with the
// regularized zero-cell rule documented at spatial_cell_average().
struct CovarianceModel {
    double alpha0;
    double alpha;
    int d;
    double lambda;
    SpatialKernel kernel;

    CovarianceModel(double alpha0_, double alpha_, int d_, double lambda_,
                    SpatialKernel kernel_ = SpatialKernel::Riesz);

    CovarianceModel with_lambda(double lam) const {
        return CovarianceModel(alpha0, alpha, d, lam, kernel);
    }
    bool borderline() const { return alpha == static_cast<double>(d); }
};

// Predicted growth of log E u^p: log E u^p ~ coefficient * t^{time_exponent}.
struct RatePrediction {
    double time_exponent;
    double coefficient;
    double order;
};

// Pointwise kernel evaluations. Both throw singularity_error at the origin;
// integrating callers must use the cell-average rules instead.
double gamma_temporal(const CovarianceModel& model, double t);
double gamma_spatial(const CovarianceModel& model, std::span<const double> x);
double gamma_spatial_radial(const CovarianceModel& model, double r);

// Second antiderivative of |u|^{-alpha0}: |u|^{2-alpha0}/((1-alpha0)(2-alpha0)).
double temporal_antiderivative2(double alpha0, double u);

// Exact double integral of |s-r|^{-alpha0} over [a1,a2] x [b1,b2].
double temporal_cell_integral(const CovarianceModel& model, double a1, double a2,
                              double b1, double b2);

// Average of gamma over the ball of radius r centered at the origin:
// (d/(d-alpha)) r^{-alpha} for alpha < d. At the borderline alpha == d the
// volume average diverges; the kernel value at radius r is used instead,
// which keeps the rule finite, positive and exactly homogeneous.
double ball_average(const CovarianceModel& model, double r);

// Average of gamma over the displacement cell of width h centered at c
// (axis-aligned cube in d dimensions). d == 1 uses the exact antiderivative
// of |u|^{-alpha}; d >= 2 uses the midpoint value away from the origin. The
// zero-displacement cell is averaged over the ball of equal volume.
double spatial_cell_average(const CovarianceModel& model, std::span<const double> c,
                            double h);

// (4 - alpha - 2 alpha0) / (2 - alpha), the power of t normalizing log E u^p.
double time_rate_exponent(const CovarianceModel& model);

// Coefficient p ((p-1)/2)^{2/(2-alpha)} lambda^{2/(2-alpha)} E1 paired with
// the time exponent above. E1 is an externally supplied estimate of the
// variational constant at unit intensity.
RatePrediction lyapunov_prediction(const CovarianceModel& model, double p, double E1);

// lambda^{2/(2-alpha)} * E1 (the scaling identity for the variational constant).
double scaled_variational_constant(const CovarianceModel& model, double E1, double lam);

// n (n^2 - 1) lambda^2 / 24, the space-time white noise moment rate.
double white_noise_rate(int n, double lam);

// Ornstein-Uhlenbeck time tau and intensity factor (p-1)/(q-1) such that
// q(tau) = 1 + e^{2 tau}(p - 1) equals q.
struct HyperMap {
    double tau;
    double lambda_factor;
};
HyperMap hypercontract_map(double p, double q);

// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

} // namespace pam
