#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pam/errors.hpp"
#include "pam/model.hpp"

using namespace pam;

namespace {

// Integral of f over [eps, b] with log-spaced midpoint panels (f smooth away
// from 0).
template <typename F>
double log_quadrature(F&& f, double eps, double b, int panels = 60000) {
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        double t0 = b * std::pow(eps / b, 1.0 - static_cast<double>(k) / panels);
        double t1 = b * std::pow(eps / b, 1.0 - static_cast<double>(k + 1) / panels);
        double lo = std::min(t0, t1), hi = std::max(t0, t1);
        total += f(0.5 * (lo + hi)) * (hi - lo);
    }
    return total;
}

// Singularity-excised quadrature with the |u|^{1-exponent} tail eliminated by
// a two-point rule: only the scaling of the tail is assumed, never its
// coefficient, so the oracle stays independent of the antiderivative formula.
template <typename F>
double tail_eliminated_quadrature(F&& f, double exponent, double lo, double hi) {
    auto integrate_excised = [&](double eps) {
        double total = 0.0;
        if (lo < 0.0) total += log_quadrature([&](double u) { return f(-u); }, eps, -lo);
        if (hi > 0.0) total += log_quadrature(f, eps, hi);
        return total;
    };
    if (lo > 0.0 || hi < 0.0) { // 0 outside: plain log-refined quadrature
        if (hi < 0.0) return log_quadrature([&](double u) { return f(-u); }, -hi, -lo);
        return log_quadrature(f, lo, hi);
    }
    const double edge = std::max(-lo, hi);
    const double e2 = 1e-7 * edge, e1 = 2.0 * e2, r = 2.0;
    double i1 = integrate_excised(e1), i2 = integrate_excised(e2);
    return i2 + (i2 - i1) / (std::pow(r, 1.0 - exponent) - 1.0);
}

// Oracle for the double integral of |s-r|^{-a0} over cell pairs via the
// displacement variable with the triangular overlap weight.
double temporal_pair_oracle(double a0, double a1, double a2, double b1, double b2) {
    auto overlap = [&](double u) {
        double lo = std::max(a1, b1 + u), hi = std::min(a2, b2 + u);
        return std::max(0.0, hi - lo);
    };
    auto f = [&](double u) { return std::pow(std::fabs(u), -a0) * overlap(u); };
    auto f_signed = [&](double u) { return f(u); };
    // split positive and negative displacement ranges
    double total = 0.0;
    if (a2 - b1 > 0.0)
        total += tail_eliminated_quadrature(f_signed, a0, 0.0, a2 - b1);
    if (a1 - b2 < 0.0)
        total += tail_eliminated_quadrature(f_signed, a0, a1 - b2, 0.0);
    return total;
}

// Oracle for the 1-d displacement-cell average of |u|^{-alpha}.
double cell_average_oracle_1d(double alpha, double c, double h) {
    auto f = [&](double u) { return std::pow(std::fabs(u), -alpha); };
    return tail_eliminated_quadrature(f, alpha, c - 0.5 * h, c + 0.5 * h) / h;
}

} // namespace

TEST_CASE("model validation") {
    CHECK_NOTHROW(CovarianceModel(0.5, 1.0, 1, 1.0));
    CHECK_THROWS_AS(CovarianceModel(0.0, 1.0, 1, 1.0), config_error);
    CHECK_THROWS_AS(CovarianceModel(1.0, 1.0, 1, 1.0), config_error);
    CHECK_THROWS_AS(CovarianceModel(0.5, 0.0, 1, 1.0), config_error);
    CHECK_THROWS_AS(CovarianceModel(0.5, 2.0, 1, 1.0), config_error);
    CHECK_THROWS_AS(CovarianceModel(0.5, 1.0, 0, 1.0), config_error);
    CHECK_THROWS_AS(CovarianceModel(0.5, 1.0, 1, -1.0), config_error);
    // alpha > d is not locally integrable; the borderline alpha == d passes
    // with the regularized zero-cell rule.
    CHECK_THROWS_AS(CovarianceModel(0.5, 1.5, 1, 1.0), config_error);
    CHECK_NOTHROW(CovarianceModel(0.5, 1.0, 2, 1.0));
    CHECK_NOTHROW(CovarianceModel(0.5, 1.5, 2, 1.0));
}

TEST_CASE("gamma_temporal point values") {
    CovarianceModel m(0.5, 0.5, 1, 1.0);
    CHECK(gamma_temporal(m, 4.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gamma_temporal(m, -4.0) == doctest::Approx(0.5).epsilon(1e-14));
    CovarianceModel m3(0.3, 0.5, 1, 1.0);
    CHECK(gamma_temporal(m3, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_temporal(m, 0.0), singularity_error);
}

TEST_CASE("gamma_spatial point values and scaling") {
    CovarianceModel m(0.5, 1.0, 1, 1.0);
    double x = 2.0;
    CHECK(gamma_spatial(m, std::span(&x, 1)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_spatial_radial(m, 0.0), singularity_error);

    CovarianceModel m2(0.5, 0.5, 2, 1.0);
    double v[2] = {3.0, 4.0};
    CHECK(gamma_spatial(m2, std::span(v, 2)) ==
          doctest::Approx(std::pow(5.0, -0.5)).epsilon(1e-14));

    // Homogeneity gamma(c x) = c^{-alpha} gamma(x) to machine precision.
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> U(0.2, 3.0);
    for (double alpha : {0.3, 0.5, 1.0}) {
        CovarianceModel mm(0.5, alpha, 2, 1.0);
        for (int rep = 0; rep < 20; ++rep) {
            double w[2] = {U(gen), U(gen)};
            double base = gamma_spatial(mm, std::span(w, 2));
            for (double c : {0.5, 2.0, 10.0}) {
                double wc[2] = {c * w[0], c * w[1]};
                double lhs = gamma_spatial(mm, std::span(wc, 2));
                CHECK(lhs == doctest::Approx(std::pow(c, -alpha) * base).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("temporal cell integrals are exact") {
    CovarianceModel m(0.5, 0.5, 1, 1.0);
    // Whole square [0,1]^2: 2/((1-a0)(2-a0)) = 8/3.
    CHECK(temporal_cell_integral(m, 0.0, 1.0, 0.0, 1.0) ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    // Diagonal cell of width h.
    double h = 0.125;
    CHECK(temporal_cell_integral(m, 0.0, h, 0.0, h) ==
          doctest::Approx(2.0 * std::pow(h, 1.5) / (0.5 * 1.5)).epsilon(1e-13));
    // Off-diagonal and diagonal cells against the quadrature oracle.
    for (double a0 : {0.25, 0.5, 0.75}) {
        CovarianceModel mm(a0, 0.5, 1, 1.0);
        CHECK(temporal_cell_integral(mm, 0.25, 0.375, 0.0, 0.125) ==
              doctest::Approx(temporal_pair_oracle(a0, 0.25, 0.375, 0.0, 0.125))
                  .epsilon(1e-6));
        CHECK(temporal_cell_integral(mm, 0.0, 0.125, 0.0, 0.125) ==
              doctest::Approx(temporal_pair_oracle(a0, 0.0, 0.125, 0.0, 0.125))
                  .epsilon(1e-4));
    }
}

TEST_CASE("spatial cell averages in d = 1") {
    const double h = 0.1;
    for (double alpha : {0.3, 0.6, 0.9}) {
        CovarianceModel m(0.5, alpha, 1, 1.0);
        for (double c : {0.0, h, 3.0 * h}) {
            double got = spatial_cell_average(m, std::span(&c, 1), h);
            double want = cell_average_oracle_1d(alpha, c, h);
            CHECK(got == doctest::Approx(want).epsilon(c == 0.0 ? 2e-3 : 1e-9));
        }
    }
    // Borderline alpha == d == 1: off-diagonal cells integrate the log
    // antiderivative exactly; the zero cell takes gamma at the equal-volume
    // radius h/2.
    CovarianceModel b(0.5, 1.0, 1, 1.0);
    double c1 = 2.0 * h;
    double got = spatial_cell_average(b, std::span(&c1, 1), h);
    CHECK(got == doctest::Approx((std::log(2.5 * h) - std::log(1.5 * h)) / h).epsilon(1e-13));
    // even in the displacement
    double c1n = -2.0 * h;
    CHECK(spatial_cell_average(b, std::span(&c1n, 1), h) ==
          doctest::Approx(got).epsilon(1e-13));
    double c0 = 0.0;
    CHECK(spatial_cell_average(b, std::span(&c0, 1), h) ==
          doctest::Approx(2.0 / h).epsilon(1e-13));
}

TEST_CASE("ball averages") {
    // alpha < d: (d/(d-alpha)) r^{-alpha}, checked in d=2 by polar quadrature.
    CovarianceModel m(0.5, 1.0, 2, 1.0);
    double r = 0.3;
    double want = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double rho = r * (i + 0.5) / n;
        want += std::pow(rho, -1.0) * rho * (r / n); // 2 pi rho drho / (pi r^2)
    }
    want *= 2.0 / (r * r);
    CHECK(ball_average(m, r) == doctest::Approx(want).epsilon(1e-6));
    CHECK(ball_average(m, r) == doctest::Approx(2.0 / r).epsilon(1e-13));

    // Borderline alpha == d.
    CovarianceModel b(0.5, 1.0, 1, 1.0);
    CHECK(ball_average(b, 0.25) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("spatial cell average homogeneity (all rules)") {
    // gamma(c x) = c^{-alpha} gamma(x) must survive cell averaging: scaling
    // displacement and width together multiplies the average by c^{-alpha}.
    for (int d : {1, 2}) {
        for (double alpha : {0.5, 1.0}) {
            CovarianceModel m(0.5, alpha, d, 1.0);
            double h = 0.2;
            std::vector<double> disp(d, 0.0);
            disp[0] = 3.0 * h;
            for (double c : {0.5, 2.0, 10.0}) {
                std::vector<double> disp_c(disp);
                for (double& x : disp_c) x *= c;
                double base = spatial_cell_average(m, disp, h);
                double scaled = spatial_cell_average(m, disp_c, c * h);
                CHECK(scaled == doctest::Approx(std::pow(c, -alpha) * base).epsilon(1e-12));
                // zero cell too
                std::vector<double> zero(d, 0.0);
                double base0 = spatial_cell_average(m, zero, h);
                double scaled0 = spatial_cell_average(m, zero, c * h);
                CHECK(scaled0 == doctest::Approx(std::pow(c, -alpha) * base0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("time rate exponent") {
    CHECK(time_rate_exponent(CovarianceModel(0.5, 1.0, 1, 1.0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(time_rate_exponent(CovarianceModel(0.25, 0.5, 1, 1.0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
    // Boundary limit: alpha -> 0+, alpha0 -> 1- gives exponent -> 1+.
    CHECK(time_rate_exponent(CovarianceModel(1.0 - 1e-9, 1e-9, 1, 1.0)) ==
          doctest::Approx(1.0).epsilon(1e-6));
    // Always above 1 inside the admissible square.
    for (double a0 : {0.1, 0.5, 0.9})
        for (double a : {0.1, 0.9, 1.9})
            CHECK(time_rate_exponent(CovarianceModel(a0, a, 2, 1.0)) > 1.0);
}

TEST_CASE("lyapunov prediction") {
    CovarianceModel m(0.5, 1.0, 1, 2.0);
    const double E1 = 3.7;
    CHECK(lyapunov_prediction(m, 1.0, E1).coefficient == doctest::Approx(0.0));
    // p=3, alpha=1: coefficient = 3 * 1 * lambda^2 * E1.
    CHECK(lyapunov_prediction(m, 3.0, E1).coefficient ==
          doctest::Approx(3.0 * 4.0 * E1).epsilon(1e-14));
    // p=2, alpha=1, lambda=1: E1/2.
    CovarianceModel m1(0.5, 1.0, 1, 1.0);
    CHECK(lyapunov_prediction(m1, 2.0, E1).coefficient ==
          doctest::Approx(E1 / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(lyapunov_prediction(m, 0.5, E1), config_error);

    // Strictly increasing in p for p > 1 and homogeneous in lambda.
    double prev = 0.0;
    for (double p = 1.2; p < 6.0; p += 0.2) {
        double c = lyapunov_prediction(m1, p, E1).coefficient;
        CHECK(c > prev);
        prev = c;
    }
    for (double lam : {0.5, 2.0, 7.0}) {
        CovarianceModel ml(0.5, 1.0, 1, lam);
        CHECK(lyapunov_prediction(ml, 2.5, E1).coefficient ==
              doctest::Approx(std::pow(lam, 2.0) *
                              lyapunov_prediction(m1, 2.5, E1).coefficient)
                  .epsilon(1e-12));
    }
}

TEST_CASE("scaling identity calculator") {
    CovarianceModel m(0.5, 1.0, 1, 1.0);
    const double e = std::exp(1.0);
    CHECK(scaled_variational_constant(m, e, 4.0) == doctest::Approx(16.0 * e).epsilon(1e-14));
    CHECK(scaled_variational_constant(m, e, 1.0) == doctest::Approx(e).epsilon(1e-14));
    CHECK_THROWS_AS(scaled_variational_constant(m, e, 0.0), config_error);
    CHECK_THROWS_AS(scaled_variational_constant(m, e, -2.0), config_error);
}

TEST_CASE("white noise rate") {
    CHECK(white_noise_rate(1, 123.0) == doctest::Approx(0.0));
    CHECK(white_noise_rate(2, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(white_noise_rate(3, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
    for (int n = 1; n <= 10; ++n) {
        double nn = n;
        CHECK(white_noise_rate(n, 3.0) / 9.0 ==
              doctest::Approx((nn * nn * nn - nn) / 24.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(white_noise_rate(0, 1.0), config_error);
}

TEST_CASE("hypercontractive map") {
    HyperMap id = hypercontract_map(2.0, 2.0);
    CHECK(id.tau == doctest::Approx(0.0));
    CHECK(id.lambda_factor == doctest::Approx(1.0));

    CHECK(hypercontract_map(2.0, 4.0).lambda_factor == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    HyperMap h35 = hypercontract_map(3.0, 5.0);
    CHECK(h35.lambda_factor == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(h35.tau == doctest::Approx(std::log(std::sqrt(2.0))).epsilon(1e-14));

    CHECK_THROWS_AS(hypercontract_map(1.0, 2.0), config_error);
    CHECK_THROWS_AS(hypercontract_map(3.0, 2.0), config_error);

    // Round trip: q(tau) = 1 + e^{2 tau}(p-1) recovers q.
    for (double p : {1.5, 2.0, 3.0, 4.5})
        for (double dq : {0.0, 0.5, 2.0, 10.0}) {
            double q = p + dq;
            HyperMap hm = hypercontract_map(p, q);
            double q_back = 1.0 + std::exp(2.0 * hm.tau) * (p - 1.0);
            CHECK(q_back == doctest::Approx(q).epsilon(1e-12));
        }
}
