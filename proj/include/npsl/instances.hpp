#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "npsl/lure.hpp"
#include "npsl/slemma.hpp"

namespace npsl {

using Rng = std::mt19937_64;

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
double uniform(double lo, double hi, Rng& rng);
int uniform_int(int lo, int hi, Rng& rng);

/// Gaussian forms; each ρ_i is set so a random unit vector satisfies the
/// constraint with slack in (0, 1).
FormFamily random_family(double p, Eigen::Index n, Eigen::Index s, Rng& rng, bool conic = false);

/// P₀ Metzler, −P_i Metzler, conic ℓ1, ρ chosen so a random interior point
/// of the simplex is strictly feasible.
FormFamily random_metzler_family(Eigen::Index n, Eigen::Index s, Rng& rng);

/// ℓ2, s = 1, with a Slater point.
FormFamily random_yakubovich_family(Eigen::Index n, Rng& rng);

/// Single-channel system with A Hurwitz (shifted Gaussian), sector [0, ϰ].
LureSystem random_scalar_lure(Eigen::Index d, Rng& rng);

/// Named fixed instances: "example1", "example2a", "example2b" (conic ℓ1 families).
FormFamily named_family(const std::string& name);

/// A = [[−2, 1], [0, −3]], B = (0, 1)ᵀ, C = (1, 0), sector [0, ϰ].
LureSystem positive_example(double kappa);

/// A = −1, B = C = 1, sector [0, ϰ].
LureSystem scalar_example(double kappa);

}  // namespace npsl
