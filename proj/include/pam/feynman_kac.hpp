#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pam/model.hpp"
#include "pam/rng.hpp"

namespace pam {

// n independent discretized d-dimensional Brownian paths on [0, t]. Paths
// start at `origin` (default 0); moment estimates are origin-independent
// because only path differences enter the pair energy.
struct BrownianEnsemble {
    int n = 0;
    int steps = 0;
    int d = 1;
    double t = 0.0;
    std::vector<double> pos; // n x (steps+1) x d

    double dt() const { return t / steps; }
    double& at(int path, int step, int axis) {
        return pos[(static_cast<std::size_t>(path) * (steps + 1) + step) * d + axis];
    }
    double at(int path, int step, int axis) const {
        return pos[(static_cast<std::size_t>(path) * (steps + 1) + step) * d + axis];
    }
};

// Draws one ensemble from the (seed, stream) Philox substream. Increments are
// consumed path-major then step-major then axis-major, so a longer horizon at
// the same dt extends the same paths.
BrownianEnsemble sample_ensemble(int n, double t, int steps, int d, std::uint64_t seed,
                                 std::uint64_t stream, const std::vector<double>& origin = {});

// sum over pairs j < k of the double Riemann sum with exact temporal cell
// integrals and the spatial kernel at midpoint displacements; displacements
// below floor_radius(dt) use the equal-volume-ball average. The lambda factor
// is applied by callers.
double pair_energy(const BrownianEnsemble& ens, const CovarianceModel& model);

// Spatial regularization floor: sqrt(dt)/8 (the in-step diffusive scale).
double pair_energy_floor(double dt);

// Mutual intersection local time approximation in d = 1: sum over pairs of
// (1/2eps) * occupation time of |B_j - B_k| <= eps on the same-time diagonal.
double local_time_energy(const BrownianEnsemble& ens, double eps);

struct MomentEstimate {
    double value = 1.0;      // estimated E u^n (may overflow to inf; see log_value)
    double log_value = 0.0;  // log of the estimate, computed in log-sum-exp form
    double stderr_of_mean = 0.0;
    double log_stderr = 0.0;
    long samples = 0;
    bool heavy_tail = false; // top 1% of weights carry > 50% of the mean
    std::string engine = "fk";
    double order = 1.0;
    double t = 0.0;
    double lambda = 0.0;
};

struct FkOptions {
    int workers = 1;
    std::vector<double> origin; // empty = start at 0
};

// Monte Carlo moment E u^n(t, x) = E exp(lambda * pair_energy) via the
// pairwise-interaction representation of integer moments.
MomentEstimate estimate_moment(int n, double t, const CovarianceModel& model,
                               long samples, int steps, std::uint64_t seed,
                               const FkOptions& opts = {});

// log E u^n / t^{time_rate_exponent} with the 1-sigma band propagated from
// the Monte Carlo standard error.
struct NormalizedLogMoment {
    double value;
    double lo;
    double hi;
    MomentEstimate estimate;
};
NormalizedLogMoment normalized_log_moment(int n, double t, const CovarianceModel& model,
                                          long samples, int steps, std::uint64_t seed,
                                          const FkOptions& opts = {});

// White-noise variant of estimate_moment built on local_time_energy (d = 1).
MomentEstimate estimate_moment_local_time(int n, double t, double lambda, double eps,
                                          long samples, int steps, std::uint64_t seed,
                                          const FkOptions& opts = {});

} // namespace pam
