#ifndef ARKS_MODEL_HPP_
#define ARKS_MODEL_HPP_

#include <string>

#include "arks/errors.hpp"

namespace arks {

// Coefficients of the attraction-repulsion chemotaxis system
//
//   u_t = Lap(u) - chi div(u grad v) + xi div(u grad w)
//   v_t = Lap(v) - beta v + f(u),   f(s) <= alpha s^k
//   w_t = Lap(w) - delta w + g(u),  gamma0 (1+s)^l <= g(s) <= gamma1 (1+s)^l
//
// together with the spatial dimension of the configured grid.
struct ModelParams {
    double chi = 1.0;     // attraction sensitivity
    double xi = 1.0;      // repulsion sensitivity
    double beta = 1.0;    // decay of v
    double delta = 1.0;   // decay of w
    double alpha = 1.0;   // growth bound of f
    double gamma0 = 1.0;  // lower production bound of g
    double gamma1 = 1.0;  // upper production bound of g
    double k = 0.5;       // attraction production exponent
    double l = 0.5;       // repulsion production exponent
    int dim = 2;          // spatial dimension n >= 1
};

enum class ProductionKind { AttractionF, RepulsionG };

// One concrete production law. The model constrains f and g only by
// envelopes; simulation needs a representative, and the canonical choice
// is the equality form f(s) = alpha s^k resp. g(s) = gamma_g (1+s)^l.
struct ProductionLaw {
    ProductionKind kind = ProductionKind::AttractionF;
    double coefficient = 1.0;  // alpha for f; gamma_g in [gamma0, gamma1] for g
    double exponent = 0.5;     // k or l
};

// Checks the structural hypotheses: strict positivity of every
// coefficient and gamma1 >= gamma0. Returns the parameters unchanged on
// success; throws NonPositiveCoefficient or GammaOrderViolation.
ModelParams validate_params(const ModelParams& p);

// f(s) or g(s) at s >= 0. Throws DomainError for s < 0. s = 0 with
// fractional exponent returns the continuous extension (0 for f,
// coefficient for g).
double eval_production(const ProductionLaw& law, double s);

// Canonical laws derived from validated parameters. gamma_g defaults to
// the envelope midpoint (gamma0 + gamma1) / 2.
ProductionLaw attraction_law(const ModelParams& p);
ProductionLaw repulsion_law(const ModelParams& p);
ProductionLaw repulsion_law(const ModelParams& p, double gamma_g);

}  // namespace arks

#endif  // ARKS_MODEL_HPP_
