#ifndef ARKS_CRITERIA_HPP_
#define ARKS_CRITERIA_HPP_

#include <iosfwd>
#include <string>

#include "arks/model.hpp"

namespace arks {

// Which published sufficient condition for global boundedness a parameter
// point satisfies. The classifier applies conditions, it proves nothing:
// Unknown means "no listed criterion fired", not blow-up.
enum class Regime {
    BoundedI,           // both k, l in (0, 1/n]
    BoundedII,          // exactly one of k, l in (1/n, 1/n + 2/(n^2+4)), other in (0, 1/n]
    BoundedIII,         // both in (1/n, 1/n + 2/(n^2+4))
    BoundedTwoOverN,    // both k, l in (0, 2/n)
    BoundedNewTheorem,  // k < l, C < A and gamma0 > A^{-1} C gamma1
    Unknown,
};

const char* regime_name(Regime r);

struct RegimeReport {
    Regime regime = Regime::Unknown;
    double p_bar = 0.0;             // monitor exponent, > n/2
    double A_const = 0.0;           // structural constant A, in (0,1)
    double xi_const = 0.0;          // Young-splitting weight Xi
    double gamma0_threshold = 0.0;  // A^{-1} C gamma1
    double c_reg = 0.0;             // maximal-regularity constant used (input)
    double bracket_value = 0.0;     // decisive bracket at `epsilon`
    double epsilon = 0.0;           // slack used in the bracket check
    std::string notes;
};

// p_bar = max{n/2, k(1/beta - 1), l(1/delta - 1)} + 1. Negative branch
// values (beta > 1 or delta > 1) participate in the max as-is.
double compute_p_bar(int n, double k, double l, double beta, double delta);

// A = 2^{-(l(p+l-1)+p)/(p+l)} * (p+l)/(p+2l+delta(p+l)), always in (0,1).
double compute_A(double p_bar, double l, double delta);

// Xi = (l/(p+l)) * (C gamma1)^{-p/l} * 2^{-p(p+(p+l-1)l)/(l(p+l))}.
double compute_xi_const(double p_bar, double l, double c_reg, double gamma1);

// The largeness threshold on gamma0: A^{-1} C gamma1. A consistent
// (gamma0, gamma1) pair with gamma0 <= gamma1 exists iff C < A.
double gamma0_threshold(double A_const, double c_reg, double gamma1);

// Value of the decisive bracket
//   (1 + delta + l/(p+l)) * ( Xi C^{(p+l)/l} gamma1^{(p+l)/l} 2^{p/l+p+l-1}
//                             + (p/(p+l)) ((p+l)/l)^{-l/p} Xi^{-l/p} )
//   + eps - gamma0.
// Boundedness via the largeness condition requires this <= 0 with Xi from
// compute_xi_const.
double bracket_coefficient(double p_bar, double l, double delta, double xi_const,
                           double c_reg, double gamma1, double gamma0, double epsilon);

// Classifies validated parameters against all criteria, precedence
// BoundedI > II > III > TwoOverN > NewTheorem > Unknown. Interval
// endpoints are compared strictly in floating point, no fattening.
// The bracket is evaluated at eps_default first; when positive it is
// rescanned downward through {1e-7, 1e-8} and the largest passing slack
// is recorded.
RegimeReport classify_regime(const ModelParams& p, double c_reg,
                             double eps_default = 1e-6);

// Flat `key = value` block, one field per line.
std::string report_to_kv(const RegimeReport& r);

// One CSV row; header is "regime,p_bar,A,Xi,gamma0_threshold,bracket,epsilon".
std::string report_csv_header();
std::string report_to_csv_row(const RegimeReport& r);

}  // namespace arks

#endif  // ARKS_CRITERIA_HPP_
