#ifndef ARKS_FASTMATH_HPP_
#define ARKS_FASTMATH_HPP_

#include <cstddef>

namespace arks {

// Batched production-law kernels for the stepper's inner loop, compiled
// in their own translation unit so the compiler may use the vector math
// library. Inputs must be nonnegative.

// out[i] = coeff * s[i]^expo, with 0^expo = 0.
void batch_pow(const double* s, double* out, std::size_t n, double coeff, double expo);

// out[i] = coeff * (1 + s[i])^expo.
void batch_pow1p(const double* s, double* out, std::size_t n, double coeff, double expo);

}  // namespace arks

#endif  // ARKS_FASTMATH_HPP_
