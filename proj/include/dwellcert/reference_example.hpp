/*
 Copyright 2026 The dwellcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef DWELLCERT_REFERENCE_EXAMPLE_HPP
#define DWELLCERT_REFERENCE_EXAMPLE_HPP

#include "family.hpp"
#include "matrix.hpp"

namespace dwellcert::reference {

// Two-mode planar benchmark: A1 alone is far from contractive (||A1|| > 1, ||A1^2|| > 1)
// and the pair fails the arbitrary-switching commutator test, yet it certifies at delta = 2.

inline SubsystemFamily nominal_family() {
    return SubsystemFamily({SquareMatrix{{0.02, 0.93}, {-0.53, -0.92}}, SquareMatrix{{0.04, 0.09}, {0.08, -0.11}}});
}

/// nominal + [[0.03, 0.02], [-0.07, 0]] and + [[0, 0], [0.02, 0]].
inline SubsystemFamily perturbed_family() {
    return SubsystemFamily({SquareMatrix{{0.05, 0.95}, {-0.6, -0.92}}, SquareMatrix{{0.04, 0.09}, {0.1, -0.11}}});
}

/// nominal plus A3 = 0.5 I, used for three-letter word rewrites.
inline SubsystemFamily extended_family() {
    return SubsystemFamily({SquareMatrix{{0.02, 0.93}, {-0.53, -0.92}}, SquareMatrix{{0.04, 0.09}, {0.08, -0.11}},
                            SquareMatrix{{0.5, 0.0}, {0.0, 0.5}}});
}

/// Published (4-decimal) values for one family.
struct PublishedValues {
    unsigned delta;
    double lambda;
    unsigned m;
    double rho;
    double a1_sq_norm;   ///< ||A1^2||
    double a1_cube_norm; ///< ||A1^3||
    double a2_sq_norm;   ///< ||A2^2||
    double a2_cube_norm; ///< ||A2^3||
    double rho_growth;   ///< rho e^{lambda m}
    double big_m;
    unsigned k1, k2, k3;
    double eps_delta_delta, eps_delta_one, eps_one_delta, eps_one_one;
    double theorem_lhs;
    double corollary_lhs; ///< arbitrary switching, printed exponent; 0 when not published
};

inline constexpr PublishedValues kNominal{2,      0.01,   3,      0.5404, 1.1204, 0.5404, 0.0220, 0.0033, 0.5569,
                                          1.3683, 1,      1,      0,      0.0133, 0.1897, 0.1897, 0.2108, 0.9664,
                                          6.9513};

inline constexpr PublishedValues kPerturbed{2,      0.0001, 3,      0.5180, 1.1384, 0.5180, 0.0243, 0.0038, 0.5182,
                                            1.4043, 1,      1,      0,      0.0157, 0.2244, 0.2244, 0.2579, 0.9830,
                                            0.0};

/// Absolute tolerance for 4-decimal published intermediates.
inline constexpr double kValueTolerance = 1e-3;
/// Relative tolerance for the recombined inequality values.
inline constexpr double kLhsRelativeTolerance = 2e-2;

} // namespace dwellcert::reference

#endif // DWELLCERT_REFERENCE_EXAMPLE_HPP
