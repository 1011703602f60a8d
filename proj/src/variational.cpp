#include "pam/variational.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pam/errors.hpp"

namespace pam {

double GridFunction::cell_center(int flat, int axis) const {
    int idx = flat;
    for (int k = dim - 1; k > axis; --k) idx /= cells_per_dim;
    idx %= cells_per_dim;
    return -box_halfwidth + (idx + 0.5) * dx();
}

GridFunction make_grid_function(int time_slices, int cells_per_dim, int dim,
                                double box_halfwidth) {
    if (time_slices < 1 || cells_per_dim < 2)
        throw config_error("grid needs at least 1 time slice and 2 cells per dimension");
    if (dim < 1 || dim > 2)
        throw config_error("the variational solver supports d = 1 and d = 2 only");
    if (!(box_halfwidth > 0.0)) throw config_error("box halfwidth must be positive");
    if (dim == 2 && cells_per_dim > 96)
        throw resource_cap_error("d=2 grids are capped at N = 96 cells per dimension");
    GridFunction g;
    g.time_slices = time_slices;
    g.cells_per_dim = cells_per_dim;
    g.dim = dim;
    g.box_halfwidth = box_halfwidth;
    g.values.assign(static_cast<std::size_t>(time_slices) * g.cell_count(), 0.0);
    return g;
}

GridFunction gaussian_profile(int time_slices, int cells_per_dim, int dim,
                              double box_halfwidth, double sigma) {
    if (!(sigma > 0.0)) throw config_error("gaussian_profile requires sigma > 0");
    GridFunction g = make_grid_function(time_slices, cells_per_dim, dim, box_halfwidth);
    const int nc = g.cell_count();
    for (int i = 0; i < nc; ++i) {
        double r2 = 0.0;
        for (int ax = 0; ax < dim; ++ax) {
            double x = g.cell_center(i, ax);
            r2 += x * x;
        }
        double v = std::exp(-r2 / (4.0 * sigma * sigma));
        for (int m = 0; m < time_slices; ++m) g.at(m, i) = v;
    }
    project_inplace(g);
    return g;
}

void project_inplace(GridFunction& g) {
    const int nc = g.cell_count();
    const double vol = g.cell_volume();
    for (int m = 0; m < g.time_slices; ++m) {
        double mass = 0.0;
        for (int i = 0; i < nc; ++i) mass += g.at(m, i) * g.at(m, i);
        mass *= vol;
        if (!(mass > 0.0)) {
            std::ostringstream err;
            err << "degenerate input: slice " << m << " has zero L2 mass";
            throw engine_error(err.str());
        }
        const double scale = 1.0 / std::sqrt(mass);
        for (int i = 0; i < nc; ++i) g.at(m, i) *= scale;
    }
}

GridFunction project(GridFunction g) {
    project_inplace(g);
    return g;
}

namespace {

// Precomputed kernel tables for one (model, grid) pair. The temporal table
// holds exact cell-pair integrals of |s-r|^{-alpha0}; the spatial table holds
// cell-averaged gamma times the (dx dy) measure, indexed by displacement.
struct Workspace {
    int M, N, dim, nc;
    double lambda;
    std::vector<double> temporal;   // gap 0..M-1
    std::vector<double> spatial;    // displacement table, see index_spatial()
    std::vector<double> q, r, u;    // scratch: M x nc each

    Workspace(const CovarianceModel& model, const GridFunction& g) {
        M = g.time_slices;
        N = g.cells_per_dim;
        dim = g.dim;
        nc = g.cell_count();
        lambda = model.lambda;
        const double dt = g.dt();
        const double h = g.dx();
        const double measure2 = g.cell_volume() * g.cell_volume();

        temporal.resize(M);
        for (int k = 0; k < M; ++k)
            temporal[k] = temporal_cell_integral(model, k * dt, (k + 1) * dt, 0.0, dt);

        if (dim == 1) {
            spatial.resize(2 * N - 1);
            for (int k = -(N - 1); k <= N - 1; ++k) {
                double c = k * h;
                spatial[k + N - 1] =
                    measure2 * spatial_cell_average(model, std::span(&c, 1), h);
            }
        } else {
            int w = 2 * N - 1;
            spatial.resize(static_cast<std::size_t>(w) * w);
            for (int kx = -(N - 1); kx <= N - 1; ++kx)
                for (int ky = -(N - 1); ky <= N - 1; ++ky) {
                    double c[2] = {kx * h, ky * h};
                    spatial[static_cast<std::size_t>(kx + N - 1) * w + (ky + N - 1)] =
                        measure2 * spatial_cell_average(model, std::span(c, 2), h);
                }
        }
        q.resize(static_cast<std::size_t>(M) * nc);
        r.resize(q.size());
        u.resize(q.size());
    }

    // u_m = S r_m via the displacement table.
    void apply_spatial(const double* rm, double* um) const {
        if (dim == 1) {
            for (int i = 0; i < N; ++i) {
                double acc = 0.0;
                const double* row = spatial.data() + (i + N - 1);
                for (int j = 0; j < N; ++j) acc += row[-j] * rm[j];
                um[i] = acc;
            }
        } else {
            const int w = 2 * N - 1;
            for (int ix = 0; ix < N; ++ix)
                for (int iy = 0; iy < N; ++iy) {
                    double acc = 0.0;
                    for (int jx = 0; jx < N; ++jx) {
                        const double* row =
                            spatial.data() + static_cast<std::size_t>(ix - jx + N - 1) * w +
                            (iy + N - 1);
                        const double* qrow = rm + static_cast<std::size_t>(jx) * N;
                        for (int jy = 0; jy < N; ++jy) acc += row[-jy] * qrow[jy];
                    }
                    um[static_cast<std::size_t>(ix) * N + iy] = acc;
                }
        }
    }

    // Fills q = g^2, r_m = sum_m' T(|m-m'|) q_m', u_m = S r_m and returns the
    // interaction value lambda * sum_m <q_m, u_m>.
    double interaction(const GridFunction& g) {
        for (std::size_t k = 0; k < q.size(); ++k) q[k] = g.values[k] * g.values[k];
        for (int m = 0; m < M; ++m) {
            double* rm = r.data() + static_cast<std::size_t>(m) * nc;
            std::fill(rm, rm + nc, 0.0);
            for (int mp = 0; mp < M; ++mp) {
                const double tw = temporal[std::abs(m - mp)];
                const double* qm = q.data() + static_cast<std::size_t>(mp) * nc;
                for (int i = 0; i < nc; ++i) rm[i] += tw * qm[i];
            }
        }
        double total = 0.0;
        for (int m = 0; m < M; ++m) {
            const double* rm = r.data() + static_cast<std::size_t>(m) * nc;
            double* um = u.data() + static_cast<std::size_t>(m) * nc;
            apply_spatial(rm, um);
            const double* qm = q.data() + static_cast<std::size_t>(m) * nc;
            for (int i = 0; i < nc; ++i) total += qm[i] * um[i];
        }
        return lambda * total;
    }
};

double kinetic_axis(const GridFunction& g, int slice, int axis) {
    const int N = g.cells_per_dim;
    const double inv2h = 1.0 / (2.0 * g.dx());
    double acc = 0.0;
    if (g.dim == 1) {
        for (int i = 0; i < N; ++i) {
            double lo = i > 0 ? g.at(slice, i - 1) : 0.0;
            double hi = i < N - 1 ? g.at(slice, i + 1) : 0.0;
            double dgi = (hi - lo) * inv2h;
            acc += dgi * dgi;
        }
        return acc;
    }
    const int stride = axis == 0 ? N : 1;
    for (int ix = 0; ix < N; ++ix)
        for (int iy = 0; iy < N; ++iy) {
            int i = ix * N + iy;
            int along = axis == 0 ? ix : iy;
            double lo = along > 0 ? g.at(slice, i - stride) : 0.0;
            double hi = along < N - 1 ? g.at(slice, i + stride) : 0.0;
            double dgi = (hi - lo) * inv2h;
            acc += dgi * dgi;
        }
    return acc;
}

// d/dg of the kinetic term, accumulated into grad with the given sign.
void kinetic_gradient(const GridFunction& g, std::vector<double>& grad, double sign) {
    const int N = g.cells_per_dim;
    const int nc = g.cell_count();
    const double inv2h = 1.0 / (2.0 * g.dx());
    const double w = g.dt() * g.cell_volume();
    auto diff = [&](int slice, int i, int along, int stride) {
        double lo = along > 0 ? g.at(slice, i - stride) : 0.0;
        double hi = along < N - 1 ? g.at(slice, i + stride) : 0.0;
        return (hi - lo) * inv2h;
    };
    for (int m = 0; m < g.time_slices; ++m) {
        for (int i = 0; i < nc; ++i) {
            double acc = 0.0;
            for (int axis = 0; axis < g.dim; ++axis) {
                const int stride = g.dim == 1 ? 1 : (axis == 0 ? N : 1);
                const int along = g.dim == 1 ? i : (axis == 0 ? i / N : i % N);
                // Stencils centered at the two neighbors touch g(m, i).
                if (along > 0) acc += diff(m, i - stride, along - 1, stride) * inv2h;
                if (along < N - 1) acc -= diff(m, i + stride, along + 1, stride) * inv2h;
            }
            grad[static_cast<std::size_t>(m) * nc + i] += sign * w * acc;
        }
    }
}

} // namespace

double interaction_term(const GridFunction& g, const CovarianceModel& model) {
    Workspace ws(model, g);
    return ws.interaction(g);
}

double kinetic_term(const GridFunction& g) {
    double acc = 0.0;
    for (int m = 0; m < g.time_slices; ++m)
        for (int axis = 0; axis < g.dim; ++axis) acc += kinetic_axis(g, m, axis);
    return 0.5 * g.dt() * g.cell_volume() * acc;
}

double trial_bound(const CovarianceModel& model, double sigma, int time_slices,
                   int cells_per_dim, double box_halfwidth) {
    GridFunction g =
        gaussian_profile(time_slices, cells_per_dim, model.d, box_halfwidth, sigma);
    return interaction_term(g, model) - kinetic_term(g);
}

TrialOptimum best_trial(const CovarianceModel& model, int time_slices,
                        int cells_per_dim, double box_halfwidth) {
    const double h = 2.0 * box_halfwidth / cells_per_dim;
    double lo = 1.5 * h;
    double hi = box_halfwidth;
    if (lo >= hi) lo = 0.25 * hi;
    auto f = [&](double s) {
        return trial_bound(model, s, time_slices, cells_per_dim, box_halfwidth);
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    double s = 0.5 * (a + b);
    return TrialOptimum{s, f(s)};
}

VariationalResult ascend(const GridFunction& g0, const CovarianceModel& model,
                         const AscendConfig& config) {
    GridFunction g = project(g0);
    Workspace ws(model, g);

    auto evaluate = [&](const GridFunction& cand) {
        double value = ws.interaction(cand) - kinetic_term(cand);
        if (!std::isfinite(value)) {
            std::ostringstream err;
            err << "ascent aborted: non-finite functional value " << value << " at M="
                << cand.time_slices << " N=" << cand.cells_per_dim;
            throw engine_error(err.str());
        }
        return value;
    };

    const int nc = g.cell_count();
    const std::size_t total = g.values.size();
    std::vector<double> grad(total);

    double value = evaluate(g);
    VariationalResult res;
    res.history.push_back(value);

    double step = config.step;
    GridFunction cand = g;
    int it = 0;
    for (; it < config.max_iter; ++it) {
        // Gradient of lambda*I - K at the current iterate. ws caches u from
        // the last interaction() call, which evaluate() ran on `g`.
        ws.interaction(g);
        const double w_int = 4.0 * model.lambda;
        for (int m = 0; m < g.time_slices; ++m)
            for (int i = 0; i < nc; ++i) {
                std::size_t k = static_cast<std::size_t>(m) * nc + i;
                grad[k] = w_int * g.values[k] * ws.u[k];
            }
        kinetic_gradient(g, grad, -1.0);

        bool improved = false;
        double rel = 0.0;
        for (int half = 0; half < 45; ++half) {
            for (std::size_t k = 0; k < total; ++k)
                cand.values[k] = g.values[k] + step * grad[k];
            project_inplace(cand);
            double cv = evaluate(cand);
            if (cv > value) {
                rel = (cv - value) / std::max(1.0, std::fabs(cv));
                g.values = cand.values;
                value = cv;
                res.history.push_back(value);
                improved = true;
                step *= 1.25;
                break;
            }
            step *= 0.5;
        }
        if (!improved) {
            res.converged = true;
            break;
        }
        if (rel < config.tol) {
            res.converged = true;
            ++it;
            break;
        }
    }

    res.value = value;
    res.iterations = it;
    res.maximizer = std::move(g);

    // Mass near the box border; warn when the maximizer presses against it.
    const GridFunction& m = res.maximizer;
    double border = 0.0, all = 0.0;
    for (int s = 0; s < m.time_slices; ++s)
        for (int i = 0; i < nc; ++i) {
            double q = m.at(s, i) * m.at(s, i);
            all += q;
            for (int axis = 0; axis < m.dim; ++axis) {
                int along = m.dim == 1 ? i : (axis == 0 ? i / m.cells_per_dim : i % m.cells_per_dim);
                if (along == 0 || along == m.cells_per_dim - 1) {
                    border += q;
                    break;
                }
            }
        }
    res.mass_in_box = all > 0.0 ? 1.0 - border / all : 0.0;
    res.box_warning = res.mass_in_box < 0.999;
    return res;
}

ScalingCheckResult scaling_check(const CovarianceModel& model,
                                 const std::vector<double>& lambdas, int time_slices,
                                 int cells_per_dim, double box_halfwidth,
                                 const AscendConfig& config) {
    if (lambdas.empty()) throw config_error("scaling_check requires at least one lambda");
    for (double lam : lambdas)
        if (!(lam > 0.0)) throw config_error("scaling_check lambdas must be positive");

    auto solve = [&](double lam) {
        CovarianceModel m = model.with_lambda(lam);
        TrialOptimum trial = best_trial(m, time_slices, cells_per_dim, box_halfwidth);
        GridFunction init = gaussian_profile(time_slices, cells_per_dim, m.d,
                                             box_halfwidth, trial.sigma);
        return ascend(init, m, config);
    };

    ScalingCheckResult out;
    VariationalResult unit = solve(1.0);
    out.value_at_unit = unit.value;
    for (double lam : lambdas) {
        VariationalResult r = lam == 1.0 ? unit : solve(lam);
        double predicted = std::pow(lam, 2.0 / (2.0 - model.alpha));
        double residual = std::fabs(r.value / unit.value - predicted) / predicted;
        out.lambdas.push_back(lam);
        out.values.push_back(r.value);
        out.iterations.push_back(r.iterations);
        out.residuals.push_back(residual);
        out.box_warnings.push_back(r.box_warning ? 1 : 0);
    }
    return out;
}

} // namespace pam
