#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "pam/feynman_kac.hpp" // MomentEstimate
#include "pam/model.hpp"

namespace pam {

// Discretization of the mild equation on [0, t] x [-L, L]^d: `time_slices`
// uniform slices, `cells_per_dim`^d spatial cells, solution evaluated at the
// center of `target_cell`.
struct SpaceTimeGrid {
    int time_slices = 1;
    int cells_per_dim = 2;
    int dim = 1;
    double box_halfwidth = 1.0;
    double horizon = 1.0;
    int target_cell = 0;

    static SpaceTimeGrid make(int time_slices, int cells_per_dim, int dim,
                              double box_halfwidth, double horizon);

    double dt() const { return horizon / time_slices; }
    double dx() const { return 2.0 * box_halfwidth / cells_per_dim; }
    int cell_count() const {
        int n = 1;
        for (int k = 0; k < dim; ++k) n *= cells_per_dim;
        return n;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int k = 0; k < dim; ++k) v *= dx();
        return v;
    }
    double slice_center(int m) const { return (m + 0.5) * dt(); }
    double cell_center(int flat, int axis) const;
};

// Covariance of the noise cell integrals W(cell) in Kronecker form
// temporal (x) spatial. Matrices are the floored reconstructions
// U max(Lambda,0) U^T of the assembled cell-pair integrals, and `factor_*`
// are square roots used for sampling, so sampled covariance, Wick
// corrections and pairing sums are mutually consistent by construction.
struct NoiseField {
    Eigen::MatrixXd temporal;         // time_slices x time_slices
    Eigen::MatrixXd spatial;          // cell_count x cell_count
    Eigen::MatrixXd temporal_factor;  // F_T with F_T F_T^T = temporal
    Eigen::MatrixXd spatial_factor;   // F_S with F_S F_S^T = spatial
    double min_eig_ratio_temporal = 0.0; // most negative raw eigenvalue / largest
    double min_eig_ratio_spatial = 0.0;

    double cov(int m, int i, int mp, int j) const {
        return temporal(m, mp) * spatial(i, j);
    }
};

NoiseField build_noise(const SpaceTimeGrid& grid, const CovarianceModel& model);

// Truncated Wiener-chaos representation of u_lambda(t, x). Level-k kernels
// are chain products of cell-integrated heat kernels over strictly
// increasing slice tuples; `level_scale` carries the Ornstein-Uhlenbeck
// multipliers applied by mehler_action (all ones on a fresh build).
struct ChaosSolution {
    SpaceTimeGrid grid;
    double lambda = 0.0;
    int truncation = 0;                  // K
    std::vector<double> level_scale;     // K+1 entries
    Eigen::MatrixXd source;              // time_slices x cells: p-bar(t - s_m; x -> cell)
    std::vector<Eigen::MatrixXd> step;   // step[g-1]: p-bar(g dt; cell center -> cell)

    // lambda^{k/2} * level_scale[k]; the scalar weight of chaos level k.
    double level_coefficient(int k) const;
};

// Storage cap for materialized kernel tensors (bytes).
inline constexpr std::size_t kChaosTensorCapBytes = 1u << 28;

ChaosSolution build_kernels(const SpaceTimeGrid& grid, const CovarianceModel& model,
                            int truncation);

// One noise draw: matrix of cell integrals (cells x time_slices), sampled
// through the Kronecker factors from the (seed, stream) substream.
Eigen::MatrixXd sample_noise(const NoiseField& noise, std::uint64_t seed,
                             std::uint64_t stream);

// Gaussian normal-ordered (Wick) product of the sampled cell values at the
// given (slice, cell) indices: sum over partial pairings with covariance
// from ctx. Tuple length <= 5.
struct WickContext {
    const NoiseField* noise = nullptr;
};
double wick_product(const std::vector<std::pair<int, int>>& cells,
                    const std::vector<double>& values, const WickContext& ctx);

// Evaluates sampled solutions u = sum_k coeff_k A_k. Precomputes the Wick
// correction contractions once per (solution, noise) pair; evaluation per
// noise draw costs O(#tuples * cells^2). Requires truncation <= 3.
class ChaosEvaluator {
public:
    ChaosEvaluator(const ChaosSolution& sol, const NoiseField& noise);

    // Per-level normal-ordered sums A_k (A_0 = 1), before coefficients.
    std::vector<double> level_values(const Eigen::MatrixXd& noise_draw) const;
    double value(const Eigen::MatrixXd& noise_draw) const;

    const ChaosSolution& solution() const { return *sol_; }

private:
    const ChaosSolution* sol_;
    const NoiseField* noise_;
    std::vector<Eigen::MatrixXd> bg_;             // step[g] * spatial, per gap
    std::vector<Eigen::VectorXd> wg_;             // diag(bg_), per gap
    struct PairData {                             // per 2-tuple (m1 < m2)
        int m1, m2, gap;
        double corr; // T(m1,m2) * <v_m2, w_gap>
    };
    struct TripleData {                           // per 3-tuple (m1 < m2 < m3)
        int m1, m2, m3, g2, g3;
        double t12, t13, t23;
        Eigen::VectorXd a;  // P_g3 * w_g2
        Eigen::VectorXd z;  // pairing (1,3) weight against xi_m2
        Eigen::VectorXd c;  // pairing (2,3) weight against P_g2 xi_m1
    };
    std::vector<PairData> pairs_;
    std::vector<TripleData> triples_;
};

double sample_solution(const ChaosSolution& sol, const NoiseField& noise,
                       const Eigen::MatrixXd& noise_draw);

// Exact E u^2 of the truncated solution via complete cross-pairings between
// equal chaos levels (cross-level terms vanish by normal ordering).
// Requires truncation <= 3.
struct SecondMoment {
    std::vector<double> level_terms; // coeff_k^2 * m_k, k = 0..K
    double total = 0.0;
    double tail_proxy = 0.0;         // geometric estimate of the k > K remainder
};
SecondMoment second_moment_exact(const ChaosSolution& sol, const NoiseField& noise,
                                 int workers = 1);

struct LpEstimate {
    double mean_abs_p = 1.0;   // sample mean of |u|^p
    double norm = 1.0;         // mean^{1/p}
    double mean_stderr = 0.0;
    double norm_stderr = 0.0;  // delta method
    long samples = 0;
    double p = 1.0;
    double lambda = 0.0;
};
LpEstimate estimate_Lp(const ChaosSolution& sol, const NoiseField& noise, double p,
                       long samples, std::uint64_t seed, int workers = 1);

// Ornstein-Uhlenbeck semigroup action: level k scaled by e^{-k tau}.
// Coefficient-identical to a fresh build at intensity e^{-2 tau} lambda.
ChaosSolution mehler_action(const ChaosSolution& sol, double tau);

// Largest relative difference of level coefficients between two solutions
// on the same grid.
double max_level_coefficient_rel_diff(const ChaosSolution& a, const ChaosSolution& b);

struct HyperComparison {
    double lhs = 1.0;      // || u_{(p-1)lambda/(q-1)} ||_q
    double rhs = 1.0;      // || u_lambda ||_p
    double lhs_stderr = 0.0;
    double rhs_stderr = 0.0;
    double combined_stderr = 0.0;
    bool pass = true;      // lhs <= rhs + 2 * combined_stderr
    double p = 2.0, q = 2.0, lambda = 0.0, lambda_reduced = 0.0;
};
HyperComparison hypercontractivity_test(const SpaceTimeGrid& grid,
                                        const CovarianceModel& model, double p, double q,
                                        long samples, std::uint64_t seed,
                                        int workers = 1);

// Materialized level-k kernel tensor, ordered by (time combination, cell
// tuple) in lexicographic order. Refuses above the storage cap.
std::vector<double> materialize_level(const ChaosSolution& sol, int level,
                                      std::size_t cap_bytes = kChaosTensorCapBytes);

} // namespace pam
