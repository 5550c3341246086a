#include <cmath>
#include <functional>
#include <random>

#include "arks/oracles.hpp"
#include "doctest.h"

using namespace arks;

namespace {

// Adaptive Simpson quadrature, the test-side oracle for 1D time integrals.
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(m), f(b), tol, 40);
}

}  // namespace

TEST_CASE("power-sum inequality: equality case, degenerate case, random sweep") {
    CHECK(check_power_sum_inequality(1.0, 1.0, 2.0));  // 4 <= 4
    CHECK(check_power_sum_inequality(3.0, 0.0, 5.0));
    CHECK_THROWS_AS(check_power_sum_inequality(-1.0, 0.0, 2.0), DomainError);
    CHECK_THROWS_AS(check_power_sum_inequality(1.0, 1.0, 0.5), DomainError);

    std::mt19937 rng(41);
    std::uniform_real_distribution<double> ab(0.0, 1e3), pd(1.0, 10.0);
    int violations = 0;
    for (int i = 0; i < 100000; ++i)
        if (!check_power_sum_inequality(ab(rng), ab(rng), pd(rng))) ++violations;
    CHECK(violations == 0);
}

TEST_CASE("young splitting: trivial cases and random sweep") {
    CHECK(check_young_splitting(0.0, 1.0, -2.0, 2.0, 1.0, 1.0, 1.0, 1.0));
    CHECK(check_young_splitting(3.0, 0.0, 0.0, 2.0, 1.0, 1.0, 1.0, 1.0));
    CHECK_THROWS_AS(check_young_splitting(-1.0, 0.0, 0.0, 2.0, 1.0, 1.0, 1.0, 1.0),
                    DomainError);
    CHECK_THROWS_AS(check_young_splitting(1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0),
                    DomainError);

    std::mt19937 rng(43);
    std::uniform_real_distribution<double> uv(0.0, 1e3), wt(-1e3, 1e3), pd(1.0 + 1e-6, 6.0),
        ld(0.1, 3.0), logxi(-3.0, 3.0), logc(-2.0, 2.0);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const bool ok = check_young_splitting(
            uv(rng), uv(rng), wt(rng), pd(rng), ld(rng), std::pow(10.0, logc(rng)),
            std::pow(10.0, logc(rng)), std::pow(10.0, logxi(rng)));
        if (!ok) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("lower-order absorption constants are valid and tight") {
    const double c_hat = 1.0, p = 2.0, k = 0.5, l = 1.0, eps = 1.0;
    const auto [c1, c2] = check_lower_order_absorption(c_hat, p, k, l, eps);

    // Tightness at the closed-form maximizers, recomputed here.
    const double s1 = std::pow(2.0 * p * c_hat / (eps * (p + l)), 1.0 / l);
    const double gap1 = c_hat * std::pow(s1, p) - 0.5 * eps * std::pow(s1, p + l);
    CHECK(c1 == doctest::Approx(gap1).epsilon(1e-12));
    const double s2 = std::pow(2.0 * (p + k) * c_hat / (eps * (p + l)), 1.0 / (l - k));
    const double gap2 = c_hat * std::pow(s2, p + k) - 0.5 * eps * std::pow(s2, p + l);
    CHECK(c2 == doctest::Approx(gap2).epsilon(1e-12));

    // Dense scan near the maximizers: nothing exceeds the returned constants.
    for (double s = 0.25 * s1; s <= 4.0 * s1; s += s1 * 1e-3)
        CHECK(c_hat * std::pow(s, p) - 0.5 * eps * std::pow(s, p + l) <= c1 * (1 + 1e-12));
    for (double s = 0.25 * s2; s <= 4.0 * s2; s += s2 * 1e-3)
        CHECK(c_hat * std::pow(s, p + k) - 0.5 * eps * std::pow(s, p + l) <=
              c2 * (1 + 1e-12));

    // Large eps makes absorption free.
    const auto [d1, d2] = check_lower_order_absorption(1.0, 2.0, 0.5, 1.0, 1e9);
    CHECK(d1 <= 1e-15);
    CHECK(d2 <= 1e-15);

    CHECK_THROWS_AS(check_lower_order_absorption(1.0, 2.0, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(check_lower_order_absorption(1.0, 2.0, 1.5, 1.0, 1.0), DomainError);
}

TEST_CASE("regularity estimator matches the closed-form uniform sample") {
    const double rho = 0.7, q = 3.0, horizon = 1.0;
    const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
    const RegularityEstimate est = estimate_c_rho(rho, q, g, horizon, 1, 7, 4096);
    REQUIRE(est.records.size() == 1);
    const RegularitySample& s = est.records[0];
    CHECK(s.id == "uniform");

    // psi(t) = (1/rho)(1 - e^{-rho t}), psi_t = e^{-rho t}, Lap psi = 0.
    const double measure = g.measure();
    const auto integrand = [&](double t) {
        const double psi = (1.0 - std::exp(-rho * t)) / rho;
        const double psi_t = std::exp(-rho * t);
        return std::exp(t) * measure *
               (std::pow(psi, q) + std::pow(std::abs(psi_t + psi / q), q));
    };
    const double lhs_exact = integrate(integrand, 0.0, horizon);
    const double rhs_exact = std::expm1(horizon) * measure;
    CHECK(s.lhs == doctest::Approx(lhs_exact).epsilon(1e-6));
    CHECK(s.rhs_bracket == doctest::Approx(rhs_exact).epsilon(1e-6));
    const double ratio_exact =
        std::pow(lhs_exact / (std::pow(2.0, q - 1.0) * rhs_exact), 1.0 / q);
    CHECK(est.c_lower == doctest::Approx(ratio_exact).epsilon(1e-6));
}

TEST_CASE("regularity estimator is reproducible and monotone in the sample count") {
    const Grid g = Grid::make_2d(6, 6, 1.0, 1.0);
    const RegularityEstimate a = estimate_c_rho(1.0, 2.0, g, 0.5, 4, 1234, 64);
    const RegularityEstimate b = estimate_c_rho(1.0, 2.0, g, 0.5, 4, 1234, 64);
    CHECK(a.c_lower == b.c_lower);
    CHECK(a.worst_source_id == b.worst_source_id);

    const RegularityEstimate c = estimate_c_rho(1.0, 2.0, g, 0.5, 8, 1234, 64);
    CHECK(c.c_lower >= a.c_lower);  // running supremum over a superset

    // The inequality with C_rho replaced by c_lower holds for every sample
    // and is tight for the maximizer.
    double max_ratio = 0.0;
    for (const auto& rec : c.records) {
        CHECK(rec.ratio <= c.c_lower * (1 + 1e-12));
        max_ratio = std::max(max_ratio, rec.ratio);
    }
    CHECK(max_ratio == doctest::Approx(c.c_lower).epsilon(1e-12));
}

TEST_CASE("uniform-sample ratio stays bounded as the horizon grows") {
    const Grid g = Grid::make_2d(4, 4, 1.0, 1.0);
    const double r1 = estimate_c_rho(1.0, 2.0, g, 1.0, 1, 1, 512).c_lower;
    const double r3 = estimate_c_rho(1.0, 2.0, g, 3.0, 1, 1, 1536).c_lower;
    const double r8 = estimate_c_rho(1.0, 2.0, g, 8.0, 1, 1, 4096).c_lower;
    CHECK(r3 > 0.0);
    CHECK(r3 <= 3.0 * r1 + 1.0);
    CHECK(r8 <= 1.5 * r3 + 0.1);  // both sides share the e^t growth factor
}

TEST_CASE("regularity estimator input validation") {
    const Grid g = Grid::make_2d(4, 4, 1.0, 1.0);
    CHECK_THROWS_AS(estimate_c_rho(0.5, 1.5, g, 1.0, 1, 0, 16), DomainError);  // q <= 1/rho
    CHECK_THROWS_AS(estimate_c_rho(1.0, 0.9, g, 1.0, 1, 0, 16), DomainError);  // q <= 1
    CHECK_THROWS_AS(estimate_c_rho(1.0, 2.0, g, 1.0, 0, 0, 16), DomainError);  // no samples
}

TEST_CASE("manufactured solutions converge at second order in 1D") {
    const MmsReport rep = mms_convergence("cos1d");
    REQUIRE(rep.errors[0].size() == 3);
    for (int f = 0; f < 3; ++f) {
        CHECK(rep.observed_order[f] >= 1.7);
        // halving h quarters the error
        const double ratio = rep.errors[f][1] / rep.errors[f][2];
        CHECK(ratio >= 3.2);
        CHECK(ratio <= 4.8);
    }
    CHECK(rep.passed());
    CHECK_THROWS_AS(mms_convergence("nope"), DomainError);
}
