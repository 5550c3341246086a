#ifndef ARKS_ORACLES_HPP_
#define ARKS_ORACLES_HPP_

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "arks/grid.hpp"

namespace arks {

// (A+B)^p <= 2^{p-1}(A^p + B^p) for A, B >= 0, p >= 1, within 4 ulps.
bool check_power_sum_inequality(double A, double B, double p);

// Pointwise integrand form of the two Young-splitting estimates with
// q = (p+l)/l:
//   (p-1) xi u^p |wt| <= (p-1) xi Xi |wt + w/q|^q
//                        + [xi p (p-1)/(p+l) (Xi q)^{-l/p} (1 + l/(p+l))] u^{p+l}
//                        + l xi Xi (p-1)/(p+l) w^q
//   (p-1) xi delta u^p w <= (p-1) xi delta Xi w^q
//                           + xi p delta (p-1)/(p+l) (Xi q)^{-l/p} u^{p+l}
// Requires u_val, w_val >= 0, p > 1, l, xi, delta, Xi > 0.
bool check_young_splitting(double u_val, double w_val, double wt_val, double p,
                           double l, double xi, double delta, double Xi);

// Explicit constants (c1, c2) with
//   c_hat s^p     <= (eps/2) s^{p+l} + c1   and
//   c_hat s^{p+k} <= (eps/2) s^{p+l} + c2   for all s >= 0,
// from the closed-form maximizer of the gap. Requires k < l. Self-checks
// on a log grid of s up to 1e9.
std::pair<double, double> check_lower_order_absorption(double c_hat, double p,
                                                       double k, double l, double eps);

struct RegularitySample {
    std::string id;
    double lhs = 0.0;          // weighted space-time integral of the solution terms
    double rhs_bracket = 0.0;  // ||psi0||^q proxy + weighted source integral
    double ratio = 0.0;        // (lhs / (2^{q-1} rhs_bracket))^{1/q}
};

struct RegularityEstimate {
    double rho = 0.0;
    double q = 0.0;
    int samples = 0;
    unsigned long long seed = 0;  // recorded so runs are reproducible
    double c_lower = 0.0;         // running supremum of the sample ratios
    std::string worst_source_id;
    std::vector<RegularitySample> records;
};

// Empirical lower bound for the maximal-regularity constant C_rho: sample
// 0 is the closed-form spatially uniform pair (psi0 = 0, h = 1); samples
// 1..n-1 draw band-limited cosine series (8 modes per axis, coefficients
// uniform in [-1,1]) for psi0 and h. Each pair is integrated with a
// Crank-Nicolson theta-scheme over `time_steps` steps and both sides of
// the regularity inequality are evaluated at t = horizon. The initial-
// data norm uses the proxy ||psi0||_Lq + ||Lap(psi0)||_Lq for the
// interpolation-space norm.
RegularityEstimate estimate_c_rho(double rho, double q, const Grid& grid,
                                  double horizon, int n_samples,
                                  unsigned long long seed, int time_steps = 512);

struct MmsReport {
    std::string case_id;
    int dim = 0;
    std::vector<int> resolutions;
    std::array<std::vector<double>, 3> errors;  // L2 errors for u, v, w per level
    std::array<double, 3> observed_order{};     // least-squares slope over levels
    bool passed(double min_order = 1.7) const {
        for (double o : observed_order)
            if (!(o >= min_order)) return false;
        return true;
    }
};

// Manufactured-solution convergence study for the coupled system. Cases:
// "cos1d" (32/64/128 cells) and "cos2d" (16^2/32^2/64^2), cosine-mode
// exact fields with zero normal derivative, dt proportional to h^2.
MmsReport mms_convergence(const std::string& case_id);

std::string mms_report_to_kv(const MmsReport& r);
std::string estimate_to_kv(const RegularityEstimate& e);
std::string estimate_csv_header();
std::string estimate_to_csv_row(const RegularityEstimate& e);

}  // namespace arks

#endif  // ARKS_ORACLES_HPP_
