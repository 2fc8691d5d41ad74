#include <doctest.h>

#include <cmath>

#include "confdfs/degree_model.hpp"
#include "confdfs/errors.hpp"
#include "confdfs/genfun.hpp"
#include "oracles.hpp"

using namespace confdfs;

namespace {

// independently verified fixed points, frozen to full precision
constexpr double kRhoPoisson2 = 0.79681213002002005;
constexpr double kRhoGeometric04 = 0.79076044108967141;
constexpr double kAlphaCGeometric04 = 0.30663872564936527;
constexpr double kHmaxDirac5 = 0.81906529644523185;

}  // namespace

TEST_CASE("two-regular law is critical, not supercritical") {
    auto gf = GenFun::of(DegreeDistribution::dirac(2));
    CHECK_FALSE(gf.supercritical());
    CHECK_THROWS_AS(solve_rho(gf), SubcriticalError);
    CHECK_THROWS_AS(alpha_critical(gf), SubcriticalError);
}

TEST_CASE("poisson survival fixed point matches a scalar bisection oracle") {
    double oracle = oracles::bisect_scalar(
        [](double r) { return (1.0 - r) - std::exp(-2.0 * r); }, 1e-9, 1.0);
    CHECK(oracle == doctest::Approx(kRhoPoisson2).epsilon(1e-12));
    for (auto gf : {GenFun::of(DegreeDistribution::poisson(2.0)),
                    GenFun::series(DegreeDistribution::poisson(2.0))})
        CHECK(solve_rho(gf) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("geometric survival matches its closed form") {
    double p = 0.4;
    double cf = 0.5 * ((1.0 - 3.0 * p) / (1.0 - p) +
                       std::sqrt((1.0 + 3.0 * p) / (1.0 - p)));
    CHECK(cf == doctest::Approx(kRhoGeometric04).epsilon(1e-15));
    CHECK(solve_rho(GenFun::of(DegreeDistribution::geometric(p))) ==
          doctest::Approx(cf).epsilon(1e-9));
    CHECK(solve_rho(GenFun::series(DegreeDistribution::geometric(p))) ==
          doctest::Approx(cf).epsilon(1e-9));
    CHECK(closedform::geometric_rho(p) == doctest::Approx(cf).epsilon(1e-15));
}

TEST_CASE("xi composes the survival fixed point with f") {
    for (int d : {3, 5}) {
        auto gf = GenFun::of(DegreeDistribution::dirac(d));
        double rho = solve_rho(gf);
        CHECK(survival_fraction(gf) ==
              doctest::Approx(1.0 - std::pow(1.0 - rho, d)).epsilon(1e-12));
    }
    // poisson: f = fhat, so xi = rho
    auto gp = GenFun::of(DegreeDistribution::poisson(2.0));
    CHECK(survival_fraction(gp) == doctest::Approx(solve_rho(gp)).epsilon(1e-10));
    // geometric vs an independent scalar solve of 1-x = f(1-rho(x))...
    auto gg = GenFun::of(DegreeDistribution::geometric(0.4));
    double rho = oracles::bisect_scalar(
        [](double r) {
            double f = 0.4 / (1.0 - 0.6 * (1.0 - r));
            return (1.0 - r) - f * f;
        },
        1e-9, 1.0);
    double xi_oracle = 1.0 - 0.4 / (1.0 - 0.6 * (1.0 - rho));
    CHECK(survival_fraction(gg) == doctest::Approx(xi_oracle).epsilon(1e-9));
}

TEST_CASE("alpha_c closed forms") {
    CHECK(alpha_critical(GenFun::of(DegreeDistribution::dirac(3))) ==
          doctest::Approx(7.0 / 8.0).epsilon(1e-10));
    for (double c : {2.0, 3.0})
        CHECK(alpha_critical(GenFun::of(DegreeDistribution::poisson(c))) ==
              doctest::Approx(1.0 - 1.0 / c).epsilon(1e-9));
    auto gg = GenFun::of(DegreeDistribution::geometric(0.4));
    double ac = alpha_critical(gg);
    CHECK(ac == doctest::Approx(kAlphaCGeometric04).epsilon(1e-9));
    // the remaining law at alpha_c is exactly critical
    double slope = (g_hat_alpha(gg, ac, 1.0) - g_hat_alpha(gg, ac, 1.0 - 1e-6)) / 1e-6;
    CHECK(slope == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(gg.deriv2(gg.inverse(1.0 - ac)) / gg.mean() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("g(0,s) = f(s) and ghat(0,s) is the size-biased pgf") {
    auto gf = GenFun::of(DegreeDistribution::binomial(5, 0.6));
    for (int j = 0; j <= 16; ++j) {
        double s = double(j) / 16.0;
        CHECK(g_alpha(gf, 0.0, s) == doctest::Approx(gf.eval(s)).epsilon(1e-12));
        CHECK(g_hat_alpha(gf, 0.0, s) ==
              doctest::Approx(gf.deriv(s) / gf.mean()).epsilon(1e-12));
    }
}

TEST_CASE("remaining-law pgf closed forms on an (alpha, s) grid") {
    auto gp = GenFun::series(DegreeDistribution::poisson(3.0));
    auto gd = GenFun::series(DegreeDistribution::dirac(5));
    auto gg = GenFun::series(DegreeDistribution::geometric(0.4));
    for (int a = 0; a <= 8; ++a) {
        double alpha = 0.6 * double(a) / 8.0;
        for (int j = 0; j <= 8; ++j) {
            double s = double(j) / 8.0;
            CHECK(g_alpha(gp, alpha, s) ==
                  doctest::Approx(closedform::poisson_g(3.0, alpha, s)).epsilon(1e-10));
            if (alpha <= 0.3) {
                CHECK(g_alpha(gg, alpha, s) ==
                      doctest::Approx(closedform::geometric_g(0.4, alpha, s)).epsilon(1e-9));
                CHECK(g_hat_alpha(gg, alpha, s) ==
                      doctest::Approx(closedform::geometric_g_hat(0.4, alpha, s)).epsilon(1e-9));
            }
            CHECK(g_alpha(gd, alpha, s) ==
                  doctest::Approx(closedform::regular_g(5, alpha, s)).epsilon(1e-9));
            CHECK(g_hat_alpha(gd, alpha, s) ==
                  doctest::Approx(closedform::regular_g_hat(5, alpha, s)).epsilon(1e-9));
        }
    }
}

TEST_CASE("alpha(rho) endpoints and closed forms") {
    auto gd = GenFun::of(DegreeDistribution::dirac(5));
    double rho_pi = solve_rho(gd);
    double ac = alpha_critical(gd);
    CHECK(alpha_of_rho(gd, rho_pi, ac, rho_pi) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(alpha_of_rho(gd, 0.0, ac, rho_pi) == doctest::Approx(ac).epsilon(1e-12));
    for (int j = 1; j < 16; ++j) {
        double rho = rho_pi * double(j) / 16.0;
        CHECK(alpha_of_rho(gd, rho, ac, rho_pi) ==
              doctest::Approx(closedform::regular_alpha_of_rho(5, rho)).epsilon(1e-8));
    }
    auto gg = GenFun::of(DegreeDistribution::geometric(0.4));
    double rp = solve_rho(gg), acg = alpha_critical(gg);
    for (int j = 1; j < 16; ++j) {
        double rho = rp * double(j) / 16.0;
        CHECK(alpha_of_rho(gg, rho, acg, rp) ==
              doctest::Approx(closedform::geometric_alpha_of_rho(0.4, rho)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(alpha_of_rho(gg, rp + 0.05, acg, rp), DomainError);
}

TEST_CASE("alpha(rho) is decreasing") {
    auto gf = GenFun::of(DegreeDistribution::poisson(3.0));
    double rp = solve_rho(gf), ac = alpha_critical(gf);
    double prev = 1.0;
    for (int j = 0; j <= 32; ++j) {
        double a = alpha_of_rho(gf, rp * double(j) / 32.0, ac, rp);
        CHECK(a <= prev + 1e-9);
        prev = a;
    }
}

TEST_CASE("limit profile endpoints, peak and giant width") {
    auto gf = GenFun::of(DegreeDistribution::dirac(5));
    ProfileCurve pc = limit_profile(gf, 128);
    // curve starts at the origin (rho = rho_pi end of the grid)
    long last = pc.rho.size() - 1;
    CHECK(pc.x_up[last] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pc.y_up[last] == doctest::Approx(0.0).epsilon(1e-9));
    // peak height is h_max
    CHECK(pc.y_up[0] == doctest::Approx(pc.h_max).epsilon(1e-12));
    // y_down == y_up by construction
    CHECK((pc.y_down - pc.y_up).abs().maxCoeff() == 0.0);
    // the decreasing branch ends where the giant excursion does
    CHECK(pc.x_down[last] == doctest::Approx(2.0 * pc.xi_pi).epsilon(1e-6));
    CHECK(pc.height(2.0 * pc.xi_pi + 1e-9) == 0.0);
    CHECK(pc.height(1.99) == 0.0);

    // quadrature stability: grid 64 vs 256
    ProfileCurve c64 = limit_profile(gf, 64);
    ProfileCurve c256 = limit_profile(gf, 256);
    CHECK(std::abs(c64.h_max - c256.h_max) < 1e-6);
    CHECK(c256.h_max == doctest::Approx(kHmaxDirac5).epsilon(1e-8));
    CHECK(closedform::regular_hmax(5) == doctest::Approx(kHmaxDirac5).epsilon(1e-8));
    // independent quadrature of the tail-integral oracle
    double hq = 1.0 - oracles::simpson(
                          [](double th) {
                              double x = (1.0 - std::cos(th)) / 2.0;
                              return closedform::regular_hmax_integrand(5, x) *
                                     std::sin(th) / 2.0;
                          },
                          0.0, M_PI, 2048);
    CHECK(pc.h_max == doctest::Approx(hq).epsilon(1e-7));
}

TEST_CASE("profile branches are monotone and h is continuous at the peak") {
    for (auto dist : {DegreeDistribution::poisson(3.0), DegreeDistribution::geometric(0.4)}) {
        ProfileCurve pc = limit_profile(GenFun::of(dist), 128);
        for (long m = 1; m < pc.rho.size(); ++m) {
            CHECK(pc.x_up[m] <= pc.x_up[m - 1] + 1e-9);   // increasing as rho falls
            CHECK(pc.x_down[m] >= pc.x_down[m - 1] - 1e-9);
        }
        // continuity at the junction: adjacent polyline heights
        double gap = 0.0;
        for (long j = 1; j < pc.h_y.size(); ++j)
            gap = std::max(gap, std::abs(pc.h_y[j] - pc.h_y[j - 1]));
        CHECK(gap < 2.0 / 128.0);
    }
}

TEST_CASE("geometric h_max closed form agrees with the profile quadrature") {
    ProfileCurve pc = limit_profile(GenFun::of(DegreeDistribution::geometric(0.4)), 256);
    CHECK(pc.h_max == doctest::Approx(closedform::geometric_hmax(0.4)).epsilon(1e-7));
}

TEST_CASE("factorial moments of the remaining law") {
    auto gf = GenFun::of(DegreeDistribution::poisson(3.0));
    CHECK(factorial_moment(gf, 0.2, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(factorial_moment(gf, 0.0, 1) == doctest::Approx(gf.mean()).epsilon(1e-12));

    // heavy tail: finite third factorial moment, against an n-th difference
    auto pl = GenFun::series(DegreeDistribution::power_law(2.5));
    double m3 = factorial_moment(pl, 0.1, 3);
    CHECK(std::isfinite(m3));
    double fd = oracles::fd_derivative(
        [&](double s) { return g_alpha(pl, 0.1, s); }, 1.0, 3, 2e-3);
    CHECK(m3 == doctest::Approx(fd).epsilon(1e-4));
}

TEST_CASE("remaining-law coefficients form a pmf") {
    auto gf = GenFun::series(DegreeDistribution::geometric(0.4));
    for (double alpha : {0.0, 0.1, 0.2, 0.3}) {
        Eigen::ArrayXd c = pi_alpha_coefficients(gf, alpha, gf.dist().max_degree());
        CHECK(c.minCoeff() >= -1e-9);
        CHECK(c.sum() == doctest::Approx(1.0).epsilon(1e-9));
        // g(alpha, 1) = 1
        CHECK(g_alpha(gf, alpha, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
        // spot degrees against finite differences at s=0 (low orders only)
        for (int i = 0; i <= 4; ++i) {
            double fd = oracles::fd_derivative(
                [&](double s) { return g_alpha(gf, alpha, s); }, 0.05, i, 1e-2);
            double horner = 0.0;  // evaluate sum_k c_k k!/(k-i)! s^{k-i} at 0.05
            for (long k = c.size() - 1; k >= i; --k) {
                double fall = 1.0;
                for (int j = 0; j < i; ++j) fall *= double(k - j);
                horner = horner * 0.05 + c[k] * fall;
            }
            CHECK(horner == doctest::Approx(fd).epsilon(5e-3));
        }
    }
}

TEST_CASE("binomial remaining law is binomial with the shrunk parameter") {
    auto gf = GenFun::series(DegreeDistribution::binomial(5, 0.6));
    for (double alpha : {0.1, 0.3, 0.5}) {
        double q = closedform::binomial_pi_alpha_param(5, 0.6, alpha);
        Eigen::ArrayXd c = pi_alpha_coefficients(gf, alpha, 5);
        for (int k = 0; k <= 5; ++k)
            CHECK(c[k] == doctest::Approx(oracles::binomial_pmf(5, q, k)).epsilon(1e-9));
    }
}

TEST_CASE("generating function basics hold for every family") {
    std::vector<DegreeDistribution> dists = {
        DegreeDistribution::poisson(2.0), DegreeDistribution::dirac(5),
        DegreeDistribution::binomial(5, 0.6), DegreeDistribution::geometric(0.3),
        DegreeDistribution::power_law(2.5)};
    for (const auto& d : dists) {
        for (auto gf : {GenFun::of(d), GenFun::series(d)}) {
            CHECK(gf.eval(1.0) == doctest::Approx(1.0).epsilon(1e-12));
            for (double y : {0.3, 0.6, 0.9})
                if (y >= gf.eval(0.0))
                    CHECK(gf.eval(gf.inverse(y)) == doctest::Approx(y).epsilon(1e-10));
        }
    }
}
