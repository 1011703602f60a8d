#include "pam/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pam/errors.hpp"
#include "pam/parallel.hpp"
#include "pam/rng.hpp"

namespace pam {

namespace {

// Exact mass of the heat kernel started at x0 over the interval [a, b]
// after time tau (generator Laplacian/2, so variance tau per axis).
double heat_axis_mass(double x0, double a, double b, double tau) {
    const double s = std::sqrt(2.0 * tau);
    return 0.5 * (std::erf((b - x0) / s) - std::erf((a - x0) / s));
}

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

} // namespace

SpaceTimeGrid SpaceTimeGrid::make(int time_slices, int cells_per_dim, int dim,
                                  double box_halfwidth, double horizon) {
    if (time_slices < 1 || cells_per_dim < 2)
        throw config_error("chaos grid needs time_slices >= 1, cells_per_dim >= 2");
    if (dim < 1 || dim > 2) throw config_error("the chaos engine supports d = 1 and d = 2 only");
    if (!(box_halfwidth > 0.0) || !(horizon > 0.0))
        throw config_error("chaos grid needs positive box halfwidth and horizon");
    SpaceTimeGrid g;
    g.time_slices = time_slices;
    g.cells_per_dim = cells_per_dim;
    g.dim = dim;
    g.box_halfwidth = box_halfwidth;
    g.horizon = horizon;
    // Target: the cell whose center is closest to the origin.
    int mid = cells_per_dim / 2;
    g.target_cell = dim == 1 ? mid : mid * cells_per_dim + mid;
    return g;
}

double SpaceTimeGrid::cell_center(int flat, int axis) const {
    int idx = flat;
    for (int k = dim - 1; k > axis; --k) idx /= cells_per_dim;
    idx %= cells_per_dim;
    return -box_halfwidth + (idx + 0.5) * dx();
}

namespace {

// Eigendecompose, floor negative eigenvalues to zero, reconstruct the matrix
// and a square-root factor. Returns the most negative raw eigenvalue over
// the largest one.
double floor_and_factor(Eigen::MatrixXd& mat, Eigen::MatrixXd& factor,
                        const char* label) {
    const double asym = (mat - mat.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * mat.cwiseAbs().maxCoeff()) {
        std::ostringstream err;
        err << label << " cell covariance is not symmetric (max asymmetry " << asym << ")";
        throw engine_error(err.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat);
    if (es.info() != Eigen::Success)
        throw engine_error(std::string("eigendecomposition failed for the ") + label +
                           " cell covariance");
    Eigen::VectorXd ev = es.eigenvalues();
    const double emax = ev.maxCoeff();
    const double emin = ev.minCoeff();
    const double ratio = emax > 0.0 ? emin / emax : 0.0;
    if (ratio < -0.05) {
        std::ostringstream err;
        err << label << " cell covariance is strongly indefinite: min eigenvalue "
            << emin << ", max eigenvalue " << emax << " (ratio " << ratio << ")";
        throw engine_error(err.str());
    }
    Eigen::VectorXd floored = ev.cwiseMax(0.0);
    factor = es.eigenvectors() * floored.cwiseSqrt().asDiagonal();
    mat = factor * factor.transpose();
    mat = 0.5 * (mat + mat.transpose()).eval();
    return ratio;
}

} // namespace

NoiseField build_noise(const SpaceTimeGrid& grid, const CovarianceModel& model) {
    if (grid.dim != model.d) throw config_error("grid dimension does not match model");
    const int Mt = grid.time_slices;
    const int nc = grid.cell_count();
    const double dt = grid.dt();
    const double h = grid.dx();

    NoiseField nf;
    nf.temporal.resize(Mt, Mt);
    for (int m = 0; m < Mt; ++m)
        for (int mp = 0; mp < Mt; ++mp)
            nf.temporal(m, mp) =
                temporal_cell_integral(model, m * dt, (m + 1) * dt, mp * dt, (mp + 1) * dt);

    const double measure2 = grid.cell_volume() * grid.cell_volume();
    nf.spatial.resize(nc, nc);
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            double c[2] = {0.0, 0.0};
            for (int ax = 0; ax < grid.dim; ++ax)
                c[ax] = grid.cell_center(i, ax) - grid.cell_center(j, ax);
            nf.spatial(i, j) =
                measure2 * spatial_cell_average(model, std::span(c, grid.dim), h);
        }

    nf.min_eig_ratio_temporal = floor_and_factor(nf.temporal, nf.temporal_factor, "temporal");
    nf.min_eig_ratio_spatial = floor_and_factor(nf.spatial, nf.spatial_factor, "spatial");
    return nf;
}

double ChaosSolution::level_coefficient(int k) const {
    return std::pow(lambda, 0.5 * k) * level_scale[k];
}

ChaosSolution build_kernels(const SpaceTimeGrid& grid, const CovarianceModel& model,
                            int truncation) {
    if (truncation < 0 || truncation > 5)
        throw config_error("chaos truncation K must lie in 0..5");
    if (grid.dim != model.d) throw config_error("grid dimension does not match model");

    ChaosSolution sol;
    sol.grid = grid;
    sol.lambda = model.lambda;
    sol.truncation = truncation;
    sol.level_scale.assign(truncation + 1, 1.0);

    const int Mt = grid.time_slices;
    const int nc = grid.cell_count();
    const int N = grid.cells_per_dim;
    const double h = grid.dx();
    const double inv_vol = 1.0 / grid.cell_volume();

    // Cell-averaged heat kernel density from point x0 (per axis) to every cell.
    auto axis_row = [&](double x0, double tau, Eigen::VectorXd& row) {
        row.resize(N);
        for (int j = 0; j < N; ++j) {
            double a = -grid.box_halfwidth + j * h;
            row(j) = heat_axis_mass(x0, a, a + h, tau);
        }
    };

    sol.source.resize(Mt, nc);
    for (int m = 0; m < Mt; ++m) {
        const double tau = grid.horizon - grid.slice_center(m);
        if (grid.dim == 1) {
            Eigen::VectorXd row;
            axis_row(grid.cell_center(grid.target_cell, 0), tau, row);
            sol.source.row(m) = row.transpose() * inv_vol;
        } else {
            Eigen::VectorXd rx, ry;
            axis_row(grid.cell_center(grid.target_cell, 0), tau, rx);
            axis_row(grid.cell_center(grid.target_cell, 1), tau, ry);
            for (int jx = 0; jx < N; ++jx)
                for (int jy = 0; jy < N; ++jy)
                    sol.source(m, jx * N + jy) = rx(jx) * ry(jy) * inv_vol;
        }
    }

    sol.step.resize(std::max(0, Mt - 1));
    for (int g = 1; g < Mt; ++g) {
        const double tau = g * grid.dt();
        Eigen::MatrixXd& P = sol.step[g - 1];
        P.resize(nc, nc);
        if (grid.dim == 1) {
            Eigen::VectorXd row;
            for (int i = 0; i < N; ++i) {
                axis_row(grid.cell_center(i, 0), tau, row);
                P.row(i) = row.transpose() * inv_vol;
            }
        } else {
            Eigen::MatrixXd ax(N, N);
            Eigen::VectorXd row;
            for (int i = 0; i < N; ++i) {
                axis_row(-grid.box_halfwidth + (i + 0.5) * h, tau, row);
                ax.row(i) = row.transpose();
            }
            for (int ix = 0; ix < N; ++ix)
                for (int iy = 0; iy < N; ++iy)
                    for (int jx = 0; jx < N; ++jx)
                        for (int jy = 0; jy < N; ++jy)
                            P(ix * N + iy, jx * N + jy) = ax(ix, jx) * ax(iy, jy) * inv_vol;
        }
    }
    return sol;
}

Eigen::MatrixXd sample_noise(const NoiseField& noise, std::uint64_t seed,
                             std::uint64_t stream) {
    const int nc = static_cast<int>(noise.spatial.rows());
    const int Mt = static_cast<int>(noise.temporal.rows());
    CounterRng rng(seed, stream);
    Eigen::MatrixXd Z(nc, Mt);
    for (int m = 0; m < Mt; ++m)
        for (int i = 0; i < nc; ++i) Z(i, m) = rng.normal();
    return noise.spatial_factor * Z * noise.temporal_factor.transpose();
}

double wick_product(const std::vector<std::pair<int, int>>& cells,
                    const std::vector<double>& values, const WickContext& ctx) {
    if (cells.size() != values.size())
        throw config_error("wick_product: cells and values must have equal length");
    if (cells.size() > 5) throw config_error("wick_product supports tuples up to length 5");
    if (!ctx.noise) throw config_error("wick_product needs a noise field for covariances");

    // W(v1..vk) = v1 W(rest) - sum_j cov(1, j) W(rest minus j).
    std::vector<int> idx(cells.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    auto cov = [&](int a, int b) {
        return ctx.noise->cov(cells[a].first, cells[a].second, cells[b].first,
                              cells[b].second);
    };
    auto rec = [&](auto&& self, const std::vector<int>& s) -> double {
        if (s.empty()) return 1.0;
        std::vector<int> rest(s.begin() + 1, s.end());
        double out = values[s[0]] * self(self, rest);
        for (std::size_t j = 0; j < rest.size(); ++j) {
            std::vector<int> rest2;
            for (std::size_t l = 0; l < rest.size(); ++l)
                if (l != j) rest2.push_back(rest[l]);
            out -= cov(s[0], rest[j]) * self(self, rest2);
        }
        return out;
    };
    return rec(rec, idx);
}

ChaosEvaluator::ChaosEvaluator(const ChaosSolution& sol, const NoiseField& noise)
    : sol_(&sol), noise_(&noise) {
    if (sol.truncation > 3)
        throw resource_cap_error(
            "sampling and exact moments support K <= 3; higher levels are "
            "available through materialize_level/wick_product on small grids");
    const int Mt = sol.grid.time_slices;

    bg_.resize(sol.step.size());
    wg_.resize(sol.step.size());
    for (std::size_t g = 0; g < sol.step.size(); ++g) {
        bg_[g].noalias() = sol.step[g] * noise.spatial;
        wg_[g] = bg_[g].diagonal();
    }

    if (sol.truncation >= 2) {
        for (int m1 = 0; m1 < Mt; ++m1)
            for (int m2 = m1 + 1; m2 < Mt; ++m2) {
                PairData pd;
                pd.m1 = m1;
                pd.m2 = m2;
                pd.gap = m2 - m1;
                pd.corr = noise.temporal(m1, m2) *
                          sol.source.row(m2).dot(wg_[pd.gap - 1].transpose());
                pairs_.push_back(pd);
            }
    }
    if (sol.truncation >= 3) {
        for (int m1 = 0; m1 < Mt; ++m1)
            for (int m2 = m1 + 1; m2 < Mt; ++m2)
                for (int m3 = m2 + 1; m3 < Mt; ++m3) {
                    TripleData td;
                    td.m1 = m1;
                    td.m2 = m2;
                    td.m3 = m3;
                    td.g2 = m2 - m1;
                    td.g3 = m3 - m2;
                    td.t12 = noise.temporal(m1, m2);
                    td.t13 = noise.temporal(m1, m3);
                    td.t23 = noise.temporal(m2, m3);
                    const auto v = sol.source.row(m3);
                    td.a.noalias() = sol.step[td.g3 - 1] * wg_[td.g2 - 1];
                    Eigen::MatrixXd Q = sol.step[td.g3 - 1].transpose();
                    Eigen::ArrayXXd Qv = Q.array().rowwise() * v.array();
                    td.z = (Qv * bg_[td.g2 - 1].array()).rowwise().sum();
                    td.c = (Qv * noise.spatial.array()).rowwise().sum();
                    triples_.push_back(td);
                }
    }
}

std::vector<double> ChaosEvaluator::level_values(const Eigen::MatrixXd& X) const {
    const ChaosSolution& sol = *sol_;
    const int Mt = sol.grid.time_slices;
    std::vector<double> levels(sol.truncation + 1, 0.0);
    levels[0] = 1.0;

    if (sol.truncation >= 1) {
        double a1 = 0.0;
        for (int m = 0; m < Mt; ++m) a1 += sol.source.row(m) * X.col(m);
        levels[1] = a1;
    }
    if (sol.truncation >= 2) {
        double a2 = 0.0;
        Eigen::VectorXd y1;
        for (const PairData& pd : pairs_) {
            y1.noalias() = sol.step[pd.gap - 1] * X.col(pd.m1);
            double main = (sol.source.row(pd.m2).transpose().array() *
                           X.col(pd.m2).array() * y1.array())
                              .sum();
            a2 += main - pd.corr;
        }
        levels[2] = a2;
    }
    if (sol.truncation >= 3) {
        double a3 = 0.0;
        Eigen::VectorXd y1, y3, vxi3;
        for (const TripleData& td : triples_) {
            y1.noalias() = sol.step[td.g2 - 1] * X.col(td.m1);
            y3.noalias() = sol.step[td.g3 - 1] *
                           (X.col(td.m2).array() * y1.array()).matrix();
            vxi3 = (sol.source.row(td.m3).transpose().array() * X.col(td.m3).array())
                       .matrix();
            double main = vxi3.dot(y3);
            a3 += main - td.t12 * vxi3.dot(td.a) - td.t13 * X.col(td.m2).dot(td.z) -
                  td.t23 * td.c.dot(y1);
        }
        levels[3] = a3;
    }
    return levels;
}

double ChaosEvaluator::value(const Eigen::MatrixXd& X) const {
    std::vector<double> lv = level_values(X);
    double u = 0.0;
    for (int k = 0; k <= sol_->truncation; ++k) u += sol_->level_coefficient(k) * lv[k];
    return u;
}

namespace {

// Slow generic sampler for K in {4, 5}: explicit tuples + wick_product.
double sample_solution_slow(const ChaosSolution& sol, const NoiseField& noise,
                            const Eigen::MatrixXd& X) {
    const int Mt = sol.grid.time_slices;
    const int nc = sol.grid.cell_count();
    WickContext ctx{&noise};
    double u = sol.level_coefficient(0);
    for (int k = 1; k <= sol.truncation; ++k) {
        if (k > Mt) break; // no strictly increasing slice tuples of this length
        double tuples = static_cast<double>(binomial(Mt, k)) * std::pow(nc, k);
        if (tuples > 2e7)
            throw resource_cap_error("chaos level enumeration too large: ~" +
                                     std::to_string(tuples) + " tuples");
        std::vector<int> mt(k);
        for (int i = 0; i < k; ++i) mt[i] = i;
        double ak = 0.0;
        std::vector<std::pair<int, int>> cells(k);
        std::vector<double> values(k);
        std::vector<int> ct(k, 0);
        for (;;) { // time combinations
            for (;;) { // cell tuples (odometer)
                double kernel = sol.source(mt[k - 1], ct[k - 1]);
                for (int j = k - 1; j > 0; --j)
                    kernel *= sol.step[mt[j] - mt[j - 1] - 1](ct[j], ct[j - 1]);
                if (kernel != 0.0) {
                    for (int j = 0; j < k; ++j) {
                        cells[j] = {mt[j], ct[j]};
                        values[j] = X(ct[j], mt[j]);
                    }
                    ak += kernel * wick_product(cells, values, ctx);
                }
                int pos = 0;
                while (pos < k && ++ct[pos] == nc) ct[pos++] = 0;
                if (pos == k) break;
            }
            int pos = k - 1;
            while (pos >= 0 && mt[pos] == Mt - k + pos) --pos;
            if (pos < 0) break;
            ++mt[pos];
            for (int j = pos + 1; j < k; ++j) mt[j] = mt[j - 1] + 1;
        }
        u += sol.level_coefficient(k) * ak;
    }
    return u;
}

} // namespace

double sample_solution(const ChaosSolution& sol, const NoiseField& noise,
                       const Eigen::MatrixXd& noise_draw) {
    if (sol.truncation <= 3) {
        ChaosEvaluator ev(sol, noise);
        return ev.value(noise_draw);
    }
    return sample_solution_slow(sol, noise, noise_draw);
}

SecondMoment second_moment_exact(const ChaosSolution& sol, const NoiseField& noise,
                                 int workers) {
    if (sol.truncation > 3)
        throw resource_cap_error("second_moment_exact supports K <= 3 (k! pairings)");
    const int Mt = sol.grid.time_slices;
    const int nc = sol.grid.cell_count();
    const Eigen::MatrixXd& S = noise.spatial;
    const Eigen::MatrixXd& T = noise.temporal;
    const int K = sol.truncation;

    SecondMoment out;
    out.level_terms.assign(K + 1, 0.0);
    out.level_terms[0] = sol.level_coefficient(0) * sol.level_coefficient(0);

    std::vector<double> m(K + 1, 0.0);
    m[0] = 1.0;

    if (K >= 1) {
        Eigen::MatrixXd SV = S * sol.source.transpose(); // nc x Mt
        double m1 = 0.0;
        for (int a = 0; a < Mt; ++a)
            for (int b = 0; b < Mt; ++b) m1 += T(a, b) * (sol.source.row(a) * SV.col(b))(0, 0);
        m[1] = m1;
    }

    const int gaps = Mt - 1;
    std::vector<Eigen::MatrixXd> B(gaps); // step[g] * S
    for (int g = 0; g < gaps; ++g) B[g].noalias() = sol.step[g] * S;

    if (K >= 2) {
        // Cache M(g,g') = B_g * step[g']^T.
        std::vector<Eigen::MatrixXd> cross(static_cast<std::size_t>(gaps) * gaps);
        for (int g = 0; g < gaps; ++g)
            for (int gp = 0; gp < gaps; ++gp)
                cross[static_cast<std::size_t>(g) * gaps + gp].noalias() =
                    B[g] * sol.step[gp].transpose();

        double m2 = 0.0;
        for (int a1 = 0; a1 < Mt; ++a1)
            for (int a2 = a1 + 1; a2 < Mt; ++a2)
                for (int b1 = 0; b1 < Mt; ++b1)
                    for (int b2 = b1 + 1; b2 < Mt; ++b2) {
                        const int g = a2 - a1 - 1, gp = b2 - b1 - 1;
                        const auto va = sol.source.row(a2);
                        const auto vb = sol.source.row(b2);
                        const Eigen::MatrixXd& M = cross[static_cast<std::size_t>(g) * gaps + gp];
                        double gid = va * (M.cwiseProduct(S)) * vb.transpose();
                        double gsw = va * (B[g].cwiseProduct(B[gp].transpose())) * vb.transpose();
                        m2 += T(a1, b1) * T(a2, b2) * gid + T(a1, b2) * T(a2, b1) * gsw;
                    }
        m[2] = m2;

        if (K >= 3) {
            // E(g, m) = step[g]^T diag(v_m) S, shared by the (23) pairing.
            std::vector<Eigen::MatrixXd> esd(static_cast<std::size_t>(gaps) * Mt);
            for (int g = 0; g < gaps; ++g)
                for (int mm = 0; mm < Mt; ++mm)
                    esd[static_cast<std::size_t>(g) * Mt + mm].noalias() =
                        sol.step[g].transpose() *
                        sol.source.row(mm).transpose().asDiagonal() * S;

            struct Triple {
                int m1, m2, m3, g2, g3;
            };
            std::vector<Triple> tuples;
            for (int m1 = 0; m1 < Mt; ++m1)
                for (int m2 = m1 + 1; m2 < Mt; ++m2)
                    for (int m3 = m2 + 1; m3 < Mt; ++m3)
                        tuples.push_back({m1, m2, m3, m2 - m1 - 1, m3 - m2 - 1});

            const std::int64_t npairs =
                static_cast<std::int64_t>(tuples.size()) * tuples.size();
            std::vector<double> partial(npairs, 0.0);
            parallel_for_blocks(npairs, workers, 1, [&](std::int64_t lo, std::int64_t hi) {
                Eigen::MatrixXd tmp, tmp2, H, Hb;
                for (std::int64_t idx = lo; idx < hi; ++idx) {
                    const Triple& ta = tuples[idx / tuples.size()];
                    const Triple& tb = tuples[idx % tuples.size()];
                    const Eigen::VectorXd va = sol.source.row(ta.m3).transpose();
                    const Eigen::VectorXd vb = sol.source.row(tb.m3).transpose();
                    const Eigen::MatrixXd& By = B[ta.g2];
                    const Eigen::MatrixXd& Bz = B[tb.g2];
                    const Eigen::MatrixXd& Py3 = sol.step[ta.g3];
                    const Eigen::MatrixXd& Pz3 = sol.step[tb.g3];
                    const Eigen::MatrixXd& Ma =
                        cross[static_cast<std::size_t>(ta.g2) * gaps + tb.g2];
                    double acc = 0.0;

                    // sigma = id
                    tmp.noalias() = Py3 * Ma.cwiseProduct(S);
                    tmp2.noalias() = tmp * Pz3.transpose();
                    double gid = va.transpose() * tmp2.cwiseProduct(S) * vb;
                    acc += T(ta.m1, tb.m1) * T(ta.m2, tb.m2) * T(ta.m3, tb.m3) * gid;

                    // sigma = (12)
                    tmp.noalias() = Py3 * By.cwiseProduct(Bz.transpose());
                    tmp2.noalias() = tmp * Pz3.transpose();
                    double g12 = va.transpose() * tmp2.cwiseProduct(S) * vb;
                    acc += T(ta.m1, tb.m2) * T(ta.m2, tb.m1) * T(ta.m3, tb.m3) * g12;

                    // sigma = (23)
                    const Eigen::MatrixXd& Ey =
                        esd[static_cast<std::size_t>(ta.g3) * Mt + ta.m3];
                    const Eigen::MatrixXd& Ez =
                        esd[static_cast<std::size_t>(tb.g3) * Mt + tb.m3];
                    double g23 = Ma.cwiseProduct(Ey).cwiseProduct(Ez.transpose()).sum();
                    acc += T(ta.m1, tb.m1) * T(ta.m2, tb.m3) * T(ta.m3, tb.m2) * g23;

                    // sigma = (13): one dense pass per y3 row.
                    double g13 = 0.0;
                    for (int y3 = 0; y3 < nc; ++y3) {
                        H.noalias() = S * sol.step[ta.g3].row(y3).transpose().asDiagonal() * By;
                        Hb = H.array().colwise() * Bz.col(y3).array();
                        Eigen::VectorXd irow =
                            (Pz3.array() * Hb.transpose().array()).rowwise().sum();
                        g13 += va(y3) * irow.dot(vb);
                    }
                    acc += T(ta.m1, tb.m3) * T(ta.m2, tb.m2) * T(ta.m3, tb.m1) * g13;

                    // sigma = (123): loop over z2.
                    double g123 = 0.0;
                    for (int z2 = 0; z2 < nc; ++z2) {
                        Eigen::VectorXd bvec = Bz.row(z2).transpose().cwiseProduct(va);
                        Eigen::VectorXd cvec = Pz3.col(z2).cwiseProduct(vb);
                        Eigen::VectorXd e = S * cvec;
                        Eigen::VectorXd f = Py3.transpose() * bvec;
                        g123 += (By.col(z2).array() * e.array() * f.array()).sum();
                    }
                    acc += T(ta.m1, tb.m2) * T(ta.m2, tb.m3) * T(ta.m3, tb.m1) * g123;

                    // sigma = (132): loop over y2.
                    double g132 = 0.0;
                    for (int y2 = 0; y2 < nc; ++y2) {
                        Eigen::VectorXd cvec = Py3.col(y2).cwiseProduct(va);
                        Eigen::VectorXd f = S * cvec;
                        Eigen::VectorXd gv =
                            Pz3.transpose() * vb.cwiseProduct(By.row(y2).transpose());
                        g132 += (f.array() * Bz.col(y2).array() * gv.array()).sum();
                    }
                    acc += T(ta.m1, tb.m3) * T(ta.m2, tb.m1) * T(ta.m3, tb.m2) * g132;

                    partial[idx] = acc;
                }
            });
            m[3] = reduce_fixed_order(partial);
        }
    }

    for (int k = 0; k <= K; ++k) {
        double coeff = sol.level_coefficient(k);
        out.level_terms[k] = coeff * coeff * m[k];
    }
    out.total = 0.0;
    for (double term : out.level_terms) out.total += term;

    if (K >= 1) {
        const double last = std::fabs(out.level_terms[K]);
        const double prev = std::fabs(out.level_terms[K - 1]);
        out.tail_proxy = last == 0.0 ? 0.0 : (prev > 0.0 ? last * (last / prev) : last);
    }
    return out;
}

LpEstimate estimate_Lp(const ChaosSolution& sol, const NoiseField& noise, double p,
                       long samples, std::uint64_t seed, int workers) {
    if (!(p >= 1.0)) throw config_error("estimate_Lp requires p >= 1");
    if (samples < 2) throw config_error("estimate_Lp requires samples >= 2");
    ChaosEvaluator ev(sol, noise);

    std::vector<double> us(samples);
    parallel_for_blocks(samples, workers, 64, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            Eigen::MatrixXd X = sample_noise(noise, seed, static_cast<std::uint64_t>(i));
            us[i] = ev.value(X);
        }
    });

    double mean = 0.0;
    for (double u : us) mean += std::pow(std::fabs(u), p);
    mean /= samples;
    double var = 0.0;
    for (double u : us) {
        double dy = std::pow(std::fabs(u), p) - mean;
        var += dy * dy;
    }
    var = samples > 1 ? var / (samples - 1) : 0.0;

    LpEstimate est;
    est.mean_abs_p = mean;
    est.norm = std::pow(mean, 1.0 / p);
    est.mean_stderr = std::sqrt(var / samples);
    est.norm_stderr =
        mean > 0.0 ? est.mean_stderr * est.norm / (p * mean) : est.mean_stderr;
    est.samples = samples;
    est.p = p;
    est.lambda = sol.lambda;
    return est;
}

ChaosSolution mehler_action(const ChaosSolution& sol, double tau) {
    if (!(tau >= 0.0)) throw config_error("mehler_action requires tau >= 0");
    ChaosSolution out = sol;
    for (int k = 0; k <= out.truncation; ++k)
        out.level_scale[k] *= std::exp(-static_cast<double>(k) * tau);
    return out;
}

double max_level_coefficient_rel_diff(const ChaosSolution& a, const ChaosSolution& b) {
    if (a.truncation != b.truncation)
        throw config_error("solutions have different truncation levels");
    double worst = 0.0;
    for (int k = 0; k <= a.truncation; ++k) {
        double ca = a.level_coefficient(k);
        double cb = b.level_coefficient(k);
        double denom = std::max({std::fabs(ca), std::fabs(cb), 1e-300});
        worst = std::max(worst, std::fabs(ca - cb) / denom);
    }
    return worst;
}

HyperComparison hypercontractivity_test(const SpaceTimeGrid& grid,
                                        const CovarianceModel& model, double p, double q,
                                        long samples, std::uint64_t seed, int workers) {
    HyperMap map = hypercontract_map(p, q);
    NoiseField noise = build_noise(grid, model);
    ChaosSolution full = build_kernels(grid, model, 3);
    ChaosSolution reduced =
        build_kernels(grid, model.with_lambda(map.lambda_factor * model.lambda), 3);
    ChaosEvaluator ev_full(full, noise);
    ChaosEvaluator ev_reduced(reduced, noise);

    // Shared noise draws for both intensities.
    std::vector<double> uf(samples), ur(samples);
    parallel_for_blocks(samples, workers, 64, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            Eigen::MatrixXd X = sample_noise(noise, seed, static_cast<std::uint64_t>(i));
            uf[i] = ev_full.value(X);
            ur[i] = ev_reduced.value(X);
        }
    });

    auto norm_of = [&](const std::vector<double>& us, double order, double& se) {
        double mean = 0.0;
        for (double u : us) mean += std::pow(std::fabs(u), order);
        mean /= samples;
        double var = 0.0;
        for (double u : us) {
            double dy = std::pow(std::fabs(u), order) - mean;
            var += dy * dy;
        }
        var = samples > 1 ? var / (samples - 1) : 0.0;
        double mean_se = std::sqrt(var / samples);
        double norm = std::pow(mean, 1.0 / order);
        se = mean > 0.0 ? mean_se * norm / (order * mean) : mean_se;
        return norm;
    };

    HyperComparison out;
    out.p = p;
    out.q = q;
    out.lambda = model.lambda;
    out.lambda_reduced = map.lambda_factor * model.lambda;
    out.lhs = norm_of(ur, q, out.lhs_stderr);
    out.rhs = norm_of(uf, p, out.rhs_stderr);
    out.combined_stderr =
        std::sqrt(out.lhs_stderr * out.lhs_stderr + out.rhs_stderr * out.rhs_stderr);
    out.pass = out.lhs <= out.rhs + 2.0 * out.combined_stderr;
    return out;
}

std::vector<double> materialize_level(const ChaosSolution& sol, int level,
                                      std::size_t cap_bytes) {
    if (level < 0 || level > sol.truncation)
        throw config_error("materialize_level: level outside 0..K");
    const int Mt = sol.grid.time_slices;
    const int nc = sol.grid.cell_count();
    if (level == 0) return {1.0};
    if (level > Mt) return {}; // no strictly increasing slice tuples

    double entries = static_cast<double>(binomial(Mt, level)) * std::pow(nc, level);
    if (entries * sizeof(double) > static_cast<double>(cap_bytes)) {
        std::ostringstream err;
        err << "level-" << level << " kernel tensor needs ~"
            << entries * sizeof(double) / (1024.0 * 1024.0) << " MiB, above the cap of "
            << cap_bytes / (1024.0 * 1024.0) << " MiB";
        throw resource_cap_error(err.str());
    }

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(entries));
    std::vector<int> mt(level);
    for (int i = 0; i < level; ++i) mt[i] = i;
    std::vector<int> ct(level, 0);
    for (;;) {
        std::fill(ct.begin(), ct.end(), 0);
        for (;;) {
            double kernel = sol.source(mt[level - 1], ct[level - 1]);
            for (int j = level - 1; j > 0; --j)
                kernel *= sol.step[mt[j] - mt[j - 1] - 1](ct[j], ct[j - 1]);
            out.push_back(kernel);
            int pos = level - 1;
            while (pos >= 0 && ++ct[pos] == nc) ct[pos--] = 0;
            if (pos < 0) break;
        }
        int pos = level - 1;
        while (pos >= 0 && mt[pos] == Mt - level + pos) --pos;
        if (pos < 0) break;
        ++mt[pos];
        for (int j = pos + 1; j < level; ++j) mt[j] = mt[j - 1] + 1;
    }
    return out;
}

} // namespace pam
