#pragma once

#include "npsl/linalg.hpp"
#include "npsl/parallel.hpp"

namespace npsl {

/// Re C(iωI − A)⁻¹B for a single-input single-output triple.
double frequency_response_real(const Matrix& a, const Matrix& b, const Matrix& c, double omega);

/// Grid version; each ω is independent, so the parallel variant gives
/// bit-identical results to the serial one.
Vector frequency_response_real(const Matrix& a, const Matrix& b, const Matrix& c, const Vector& omegas,
                               Execution exec = Execution::serial);

/// ω = 0 followed by `points` log-spaced values on [lo, hi].
Vector frequency_grid(int points, double lo = 1e-6, double hi = 1e6);

}  // namespace npsl
