#include "arks/model.hpp"

#include <cmath>

namespace arks {

ModelParams validate_params(const ModelParams& p) {
    struct Named {
        const char* name;
        double value;
    };
    const Named coeffs[] = {
        {"chi", p.chi},     {"xi", p.xi},         {"beta", p.beta},
        {"delta", p.delta}, {"alpha", p.alpha},   {"gamma0", p.gamma0},
        {"gamma1", p.gamma1}, {"k", p.k},         {"l", p.l},
    };
    for (const auto& c : coeffs) {
        if (!(c.value > 0.0) || !std::isfinite(c.value))
            throw NonPositiveCoefficient(c.name);
    }
    if (p.dim < 1) throw NonPositiveCoefficient("dim");
    if (p.gamma0 > p.gamma1) throw GammaOrderViolation();
    return p;
}

double eval_production(const ProductionLaw& law, double s) {
    if (s < 0.0) throw DomainError("production law evaluated at s < 0");
    switch (law.kind) {
        case ProductionKind::AttractionF:
            // 0^k = 0 for k > 0 (continuous extension at the origin).
            if (s == 0.0) return 0.0;
            return law.coefficient * std::pow(s, law.exponent);
        case ProductionKind::RepulsionG:
            return law.coefficient * std::pow(1.0 + s, law.exponent);
    }
    throw DomainError("unreachable production kind");
}

ProductionLaw attraction_law(const ModelParams& p) {
    return {ProductionKind::AttractionF, p.alpha, p.k};
}

ProductionLaw repulsion_law(const ModelParams& p) {
    return repulsion_law(p, 0.5 * (p.gamma0 + p.gamma1));
}

ProductionLaw repulsion_law(const ModelParams& p, double gamma_g) {
    if (gamma_g < p.gamma0 || gamma_g > p.gamma1)
        throw DomainError("gamma_g outside [gamma0, gamma1]");
    return {ProductionKind::RepulsionG, gamma_g, p.l};
}

}  // namespace arks
