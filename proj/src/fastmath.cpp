// Compiled with relaxed FP rules (see CMakeLists) so the pow calls can
// vectorize; the arguments here are finite and nonnegative by contract.

#include "arks/fastmath.hpp"

#include <cmath>

namespace arks {

void batch_pow(const double* s, double* out, std::size_t n, double coeff, double expo) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(s[i], expo);
    for (std::size_t i = 0; i < n; ++i) out[i] = s[i] > 0.0 ? coeff * out[i] : 0.0;
}

void batch_pow1p(const double* s, double* out, std::size_t n, double coeff, double expo) {
    for (std::size_t i = 0; i < n; ++i) out[i] = coeff * std::pow(1.0 + s[i], expo);
}

}  // namespace arks
