#include "arks/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arks {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be > 0");
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::BoundedI: return "BoundedI";
        case Regime::BoundedII: return "BoundedII";
        case Regime::BoundedIII: return "BoundedIII";
        case Regime::BoundedTwoOverN: return "BoundedTwoOverN";
        case Regime::BoundedNewTheorem: return "BoundedNewTheorem";
        case Regime::Unknown: return "Unknown";
    }
    return "Unknown";
}

double compute_p_bar(int n, double k, double l, double beta, double delta) {
    if (n < 1) throw DomainError("n must be >= 1");
    require_positive(k, "k");
    require_positive(l, "l");
    require_positive(beta, "beta");
    require_positive(delta, "delta");
    const double branch_k = k * (1.0 / beta - 1.0);
    const double branch_l = l * (1.0 / delta - 1.0);
    return std::max({0.5 * n, branch_k, branch_l}) + 1.0;
}

double compute_A(double p_bar, double l, double delta) {
    if (!(p_bar > 1.0)) throw DomainError("p_bar must be > 1");
    require_positive(l, "l");
    require_positive(delta, "delta");
    const double expo = (l * (p_bar + l - 1.0) + p_bar) / (p_bar + l);
    const double factor = (p_bar + l) / (p_bar + 2.0 * l + delta * (p_bar + l));
    return std::pow(2.0, -expo) * factor;
}

double compute_xi_const(double p_bar, double l, double c_reg, double gamma1) {
    if (!(p_bar > 1.0)) throw DomainError("p_bar must be > 1");
    require_positive(l, "l");
    require_positive(c_reg, "c_reg");
    require_positive(gamma1, "gamma1");
    const double expo = p_bar * (p_bar + (p_bar + l - 1.0) * l) / (l * (p_bar + l));
    return (l / (p_bar + l)) * std::pow(c_reg, -p_bar / l) *
           std::pow(gamma1, -p_bar / l) * std::pow(2.0, -expo);
}

double gamma0_threshold(double A_const, double c_reg, double gamma1) {
    require_positive(A_const, "A");
    require_positive(c_reg, "c_reg");
    require_positive(gamma1, "gamma1");
    return c_reg * gamma1 / A_const;
}

double bracket_coefficient(double p_bar, double l, double delta, double xi_const,
                           double c_reg, double gamma1, double gamma0, double epsilon) {
    if (!(p_bar > 1.0)) throw DomainError("p_bar must be > 1");
    require_positive(l, "l");
    require_positive(delta, "delta");
    require_positive(xi_const, "Xi");
    require_positive(c_reg, "c_reg");
    require_positive(gamma1, "gamma1");
    require_positive(gamma0, "gamma0");
    require_positive(epsilon, "epsilon");
    const double q = (p_bar + l) / l;
    const double reg_term = xi_const * std::pow(c_reg * gamma1, q) *
                            std::pow(2.0, p_bar / l + p_bar + l - 1.0);
    const double young_term =
        (p_bar / (p_bar + l)) * std::pow(q, -l / p_bar) * std::pow(xi_const, -l / p_bar);
    return (1.0 + delta + l / (p_bar + l)) * (reg_term + young_term) + epsilon - gamma0;
}

RegimeReport classify_regime(const ModelParams& p, double c_reg, double eps_default) {
    require_positive(c_reg, "c_reg");
    require_positive(eps_default, "epsilon");

    RegimeReport rep;
    rep.c_reg = c_reg;
    rep.p_bar = compute_p_bar(p.dim, p.k, p.l, p.beta, p.delta);
    rep.A_const = compute_A(rep.p_bar, p.l, p.delta);
    rep.xi_const = compute_xi_const(rep.p_bar, p.l, c_reg, p.gamma1);
    rep.gamma0_threshold = gamma0_threshold(rep.A_const, c_reg, p.gamma1);

    rep.epsilon = eps_default;
    rep.bracket_value = bracket_coefficient(rep.p_bar, p.l, p.delta, rep.xi_const,
                                            c_reg, p.gamma1, p.gamma0, rep.epsilon);
    if (rep.bracket_value > 0.0) {
        // Marginal failure: the proof only needs some small eps > 0.
        for (double eps : {1e-7, 1e-8}) {
            if (eps >= eps_default) continue;
            const double b = bracket_coefficient(rep.p_bar, p.l, p.delta, rep.xi_const,
                                                 c_reg, p.gamma1, p.gamma0, eps);
            if (b <= 0.0) {
                rep.epsilon = eps;
                rep.bracket_value = b;
                break;
            }
        }
    }

    const double inv_n = 1.0 / p.dim;
    const double upper = inv_n + 2.0 / (p.dim * p.dim + 4.0);
    const auto in_low = [&](double e) { return e > 0.0 && e <= inv_n; };
    const auto in_mid = [&](double e) { return e > inv_n && e < upper; };

    if (in_low(p.k) && in_low(p.l)) {
        rep.regime = Regime::BoundedI;
    } else if ((in_mid(p.k) && in_low(p.l)) || (in_mid(p.l) && in_low(p.k))) {
        rep.regime = Regime::BoundedII;
    } else if (in_mid(p.k) && in_mid(p.l)) {
        rep.regime = Regime::BoundedIII;
    } else if (p.k < 2.0 * inv_n && p.l < 2.0 * inv_n) {
        rep.regime = Regime::BoundedTwoOverN;
    } else if (p.k < p.l && c_reg < rep.A_const && p.gamma0 > rep.gamma0_threshold) {
        rep.regime = Regime::BoundedNewTheorem;
        rep.notes = "largeness condition on gamma0 holds";
    } else {
        rep.regime = Regime::Unknown;
        if (p.k >= p.l)
            rep.notes = "largeness criterion needs k < l";
        else if (!(c_reg < rep.A_const))
            rep.notes = "condition falsified at C = " + std::to_string(c_reg) +
                        " (requires C < A)";
        else
            rep.notes = "gamma0 below threshold";
    }
    return rep;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

}  // namespace

std::string report_to_kv(const RegimeReport& r) {
    std::ostringstream os;
    os << "regime = " << regime_name(r.regime) << '\n'
       << "p_bar = " << fmt(r.p_bar) << '\n'
       << "A = " << fmt(r.A_const) << '\n'
       << "Xi = " << fmt(r.xi_const) << '\n'
       << "gamma0_threshold = " << fmt(r.gamma0_threshold) << '\n'
       << "c_reg = " << fmt(r.c_reg) << '\n'
       << "bracket = " << fmt(r.bracket_value) << '\n'
       << "epsilon = " << fmt(r.epsilon) << '\n';
    if (!r.notes.empty()) os << "notes = " << r.notes << '\n';
    return os.str();
}

std::string report_csv_header() {
    return "regime,p_bar,A,Xi,gamma0_threshold,bracket,epsilon";
}

std::string report_to_csv_row(const RegimeReport& r) {
    std::ostringstream os;
    os.precision(15);
    os << regime_name(r.regime) << ',' << r.p_bar << ',' << r.A_const << ','
       << r.xi_const << ',' << r.gamma0_threshold << ',' << r.bracket_value << ','
       << r.epsilon;
    return os.str();
}

}  // namespace arks
