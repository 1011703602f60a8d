#pragma once

#include <vector>

#include "pam/model.hpp"

namespace pam {

// Candidate profile g(s, x) on a uniform grid: `time_slices` cells over the
// unit time interval and `cells_per_dim`^d cells over the box [-L, L]^d.
// The admissible set is one unit of L^2 mass per time slice:
// sum_cells g^2 * cell_volume == 1 for every slice.
struct GridFunction {
    int time_slices = 0;
    int cells_per_dim = 0;
    int dim = 1;
    double box_halfwidth = 1.0;
    std::vector<double> values; // time_slices x cells_per_dim^dim, cell-major in space

    double dt() const { return 1.0 / time_slices; }
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
    // Center coordinate of cell index i along `axis` (row-major mixed radix).
    double cell_center(int flat, int axis) const;

    double& at(int slice, int cell) { return values[static_cast<std::size_t>(slice) * cell_count() + cell]; }
    double at(int slice, int cell) const { return values[static_cast<std::size_t>(slice) * cell_count() + cell]; }
};

GridFunction make_grid_function(int time_slices, int cells_per_dim, int dim,
                                double box_halfwidth);

// Time-constant Gaussian profile of width sigma, slice-normalized.
GridFunction gaussian_profile(int time_slices, int cells_per_dim, int dim,
                              double box_halfwidth, double sigma);

// Rescale every slice to unit L^2 mass. Throws engine_error on a zero slice.
void project_inplace(GridFunction& g);
GridFunction project(GridFunction g);

// lambda * sum over (slice,cell) pairs of exact-temporal x cell-averaged-spatial
// kernel weights against g^2 g^2. Nonnegative; linear in lambda.
double interaction_term(const GridFunction& g, const CovarianceModel& model);

// Central-difference gradient energy (1/2) int |grad_x g|^2 with zero
// extension outside the box.
double kinetic_term(const GridFunction& g);

struct AscendConfig {
    double step = 0.05;
    int max_iter = 2000;
    double tol = 1e-9;
};

struct VariationalResult {
    double value = 0.0;
    GridFunction maximizer;
    std::vector<double> history; // accepted functional values, nondecreasing
    bool converged = false;
    int iterations = 0;
    double mass_in_box = 1.0; // diagnostic: fraction of g^2 mass away from the border cells
    bool box_warning = false;
};

// Projected gradient ascent on interaction - kinetic with backtracking.
VariationalResult ascend(const GridFunction& g0, const CovarianceModel& model,
                         const AscendConfig& config);

// Value of the functional at the time-constant Gaussian profile of width
// sigma on the given grid. Certified lower bound for the grid optimum when
// used as the ascent initializer.
double trial_bound(const CovarianceModel& model, double sigma, int time_slices,
                   int cells_per_dim, double box_halfwidth);

// Golden-section maximization of trial_bound over sigma.
struct TrialOptimum {
    double sigma;
    double value;
};
TrialOptimum best_trial(const CovarianceModel& model, int time_slices,
                        int cells_per_dim, double box_halfwidth);

// Solves at lambda = 1 and at every requested lambda from trial-Gaussian
// initializations on the same grid, and reports the relative residual of
// E(lambda)/E(1) against lambda^{2/(2-alpha)}.
struct ScalingCheckResult {
    std::vector<double> lambdas;
    std::vector<double> values;
    std::vector<int> iterations;
    std::vector<double> residuals;
    std::vector<int> box_warnings; // maximizer mass within the box fell below 0.999
    double value_at_unit = 0.0;
};
ScalingCheckResult scaling_check(const CovarianceModel& model,
                                 const std::vector<double>& lambdas, int time_slices,
                                 int cells_per_dim, double box_halfwidth,
                                 const AscendConfig& config);

} // namespace pam
