#include "pam/feynman_kac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/parallel.hpp"

namespace pam {

BrownianEnsemble sample_ensemble(int n, double t, int steps, int d, std::uint64_t seed,
                                 std::uint64_t stream, const std::vector<double>& origin) {
    if (n < 1 || steps < 1) throw config_error("sample_ensemble requires n >= 1, steps >= 1");
    if (!(t > 0.0)) throw config_error("sample_ensemble requires t > 0");
    if (!origin.empty() && static_cast<int>(origin.size()) != d)
        throw config_error("origin dimension mismatch");

    if (n > 256) throw config_error("sample_ensemble supports at most 256 paths");

    BrownianEnsemble ens;
    ens.n = n;
    ens.steps = steps;
    ens.d = d;
    ens.t = t;
    ens.pos.resize(static_cast<std::size_t>(n) * (steps + 1) * d);

    // One substream per path: (sample stream << 8) | path index. Extending
    // the horizon at fixed dt, or adding paths, reuses the existing draws.
    const double sdt = std::sqrt(ens.dt());
    for (int j = 0; j < n; ++j) {
        CounterRng rng(seed, (stream << 8) | static_cast<std::uint64_t>(j));
        for (int c = 0; c < d; ++c) ens.at(j, 0, c) = origin.empty() ? 0.0 : origin[c];
        for (int i = 1; i <= steps; ++i)
            for (int c = 0; c < d; ++c)
                ens.at(j, i, c) = ens.at(j, i - 1, c) + sdt * rng.normal();
    }
    return ens;
}

double pair_energy_floor(double dt) { return std::sqrt(dt) / 8.0; }

double pair_energy(const BrownianEnsemble& ens, const CovarianceModel& model) {
    if (ens.d != model.d) throw config_error("ensemble dimension does not match model");
    if (ens.n < 2) return 0.0;

    const int steps = ens.steps;
    const double dt = ens.dt();
    const double floor_r = pair_energy_floor(dt);
    const double floor_value = ball_average(model, floor_r);

    // Exact integrals of |s-r|^{-alpha0} over cell pairs, by gap.
    std::vector<double> temporal(steps);
    for (int k = 0; k < steps; ++k)
        temporal[k] = temporal_cell_integral(model, k * dt, (k + 1) * dt, 0.0, dt);

    // Midpoint positions per cell.
    const int d = ens.d;
    std::vector<double> mid(static_cast<std::size_t>(ens.n) * steps * d);
    for (int j = 0; j < ens.n; ++j)
        for (int a = 0; a < steps; ++a)
            for (int c = 0; c < d; ++c)
                mid[(static_cast<std::size_t>(j) * steps + a) * d + c] =
                    0.5 * (ens.at(j, a, c) + ens.at(j, a + 1, c));

    const double neg_alpha = -model.alpha;
    double total = 0.0;
    for (int j = 0; j < ens.n; ++j)
        for (int k = j + 1; k < ens.n; ++k) {
            double pair = 0.0;
            const double* mj = mid.data() + static_cast<std::size_t>(j) * steps * d;
            const double* mk = mid.data() + static_cast<std::size_t>(k) * steps * d;
            for (int a = 0; a < steps; ++a)
                for (int b = 0; b < steps; ++b) {
                    double r2 = 0.0;
                    for (int c = 0; c < d; ++c) {
                        double u = mj[a * d + c] - mk[b * d + c];
                        r2 += u * u;
                    }
                    double r = std::sqrt(r2);
                    double gamma = r < floor_r ? floor_value : std::pow(r, neg_alpha);
                    pair += temporal[std::abs(a - b)] * gamma;
                }
            total += pair;
        }
    if (!std::isfinite(total)) {
        std::ostringstream err;
        err << "pair_energy accumulated a non-finite value (n=" << ens.n
            << ", steps=" << steps << ")";
        throw engine_error(err.str());
    }
    return total;
}

double local_time_energy(const BrownianEnsemble& ens, double eps) {
    if (ens.d != 1) throw config_error("local_time_energy is defined for d = 1 only");
    if (!(eps > 0.0)) throw config_error("local_time_energy requires eps > 0");
    if (ens.n < 2) return 0.0;
    const double dt = ens.dt();
    double total = 0.0;
    for (int j = 0; j < ens.n; ++j)
        for (int k = j + 1; k < ens.n; ++k) {
            double occ = 0.0;
            for (int a = 0; a < ens.steps; ++a) {
                double u = 0.5 * (ens.at(j, a, 0) + ens.at(j, a + 1, 0)) -
                           0.5 * (ens.at(k, a, 0) + ens.at(k, a + 1, 0));
                if (std::fabs(u) <= eps) occ += dt;
            }
            total += occ / (2.0 * eps);
        }
    return total;
}

namespace {

MomentEstimate summarize_exponential(std::vector<double>& weights, double order,
                                     double t, double lambda) {
    const long n = static_cast<long>(weights.size());
    double m = *std::max_element(weights.begin(), weights.end());
    double mean_y = 0.0;
    for (double w : weights) mean_y += std::exp(w - m);
    mean_y /= n;
    double var_y = 0.0;
    for (double w : weights) {
        double dyi = std::exp(w - m) - mean_y;
        var_y += dyi * dyi;
    }
    var_y = n > 1 ? var_y / (n - 1) : 0.0;
    const double sd_y = std::sqrt(var_y);

    MomentEstimate est;
    est.samples = n;
    est.order = order;
    est.t = t;
    est.lambda = lambda;
    est.log_value = m + std::log(mean_y);
    est.value = std::exp(est.log_value);
    est.stderr_of_mean = std::exp(m) * sd_y / std::sqrt(static_cast<double>(n));
    est.log_stderr = sd_y / (mean_y * std::sqrt(static_cast<double>(n)));

    // Heavy-tail diagnostic: share of the top 1% of weights in the mean.
    long top = std::max<long>(1, n / 100);
    std::vector<double> y(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) y[i] = std::exp(weights[i] - m);
    std::nth_element(y.begin(), y.begin() + (n - top), y.end());
    double top_sum = std::accumulate(y.begin() + (n - top), y.end(), 0.0);
    double all_sum = mean_y * n;
    est.heavy_tail = all_sum > 0.0 && top_sum > 0.5 * all_sum;
    return est;
}

} // namespace

MomentEstimate estimate_moment(int n, double t, const CovarianceModel& model,
                               long samples, int steps, std::uint64_t seed,
                               const FkOptions& opts) {
    if (n < 1) throw config_error("estimate_moment requires n >= 1");
    if (samples < 2) throw config_error("estimate_moment requires samples >= 2");

    std::vector<double> weights(samples, 0.0);
    if (n == 1 || model.lambda == 0.0) {
        // E u^1 = 1 exactly; lambda = 0 likewise. Paths need not be drawn.
        MomentEstimate est = summarize_exponential(weights, n, t, model.lambda);
        est.heavy_tail = false;
        return est;
    }

    parallel_for_blocks(samples, opts.workers, 256, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            BrownianEnsemble ens = sample_ensemble(n, t, steps, model.d, seed,
                                                   static_cast<std::uint64_t>(i), opts.origin);
            weights[i] = model.lambda * pair_energy(ens, model);
        }
    });
    return summarize_exponential(weights, n, t, model.lambda);
}

NormalizedLogMoment normalized_log_moment(int n, double t, const CovarianceModel& model,
                                          long samples, int steps, std::uint64_t seed,
                                          const FkOptions& opts) {
    MomentEstimate est = estimate_moment(n, t, model, samples, steps, seed, opts);
    const double scale = std::pow(t, time_rate_exponent(model));
    NormalizedLogMoment out;
    out.value = est.log_value / scale;
    out.lo = (est.log_value - est.log_stderr) / scale;
    out.hi = (est.log_value + est.log_stderr) / scale;
    out.estimate = est;
    return out;
}

MomentEstimate estimate_moment_local_time(int n, double t, double lambda, double eps,
                                          long samples, int steps, std::uint64_t seed,
                                          const FkOptions& opts) {
    if (n < 1) throw config_error("estimate_moment_local_time requires n >= 1");
    if (samples < 2) throw config_error("estimate_moment_local_time requires samples >= 2");
    std::vector<double> weights(samples, 0.0);
    if (n > 1 && lambda != 0.0) {
        parallel_for_blocks(samples, opts.workers, 256, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t i = lo; i < hi; ++i) {
                BrownianEnsemble ens = sample_ensemble(n, t, steps, 1, seed,
                                                       static_cast<std::uint64_t>(i), opts.origin);
                weights[i] = lambda * local_time_energy(ens, eps);
            }
        });
    }
    MomentEstimate est = summarize_exponential(weights, n, t, lambda);
    est.engine = "fk_local_time";
    return est;
}

} // namespace pam
