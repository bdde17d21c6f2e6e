#pragma once

// Fixed linear stencils shared by the metric, flux and constrained-transport
// code. Keeping them in one place matters: free-stream preservation relies on
// every consumer using exactly the same coefficients.

#include <array>
#include <type_traits>

namespace fsmhd::stencil {

/// Sixth-order central first derivative on nodes i-3..i+3 (divide by spacing).
inline constexpr std::array<double, 7> kD6 = {-1.0 / 60.0, 9.0 / 60.0,  -45.0 / 60.0, 0.0,
                                              45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};

/// Six-point midpoint interpolation onto i+1/2 from nodes i-2..i+3.
inline constexpr std::array<double, 6> kMid6 = {3.0 / 256.0,   -25.0 / 256.0, 150.0 / 256.0,
                                                150.0 / 256.0, -25.0 / 256.0, 3.0 / 256.0};

/// Spacing^2 times the second derivative at i+1/2 from nodes i-2..i+3.
inline constexpr std::array<double, 6> kSecond = {-5.0 / 48.0,  39.0 / 48.0, -34.0 / 48.0,
                                                  -34.0 / 48.0, 39.0 / 48.0, -5.0 / 48.0};

/// Spacing^4 times the fourth derivative at i+1/2 from nodes i-2..i+3.
inline constexpr std::array<double, 6> kFourth = {0.5, -1.5, 1.0, 1.0, -1.5, 0.5};

inline constexpr double kSecondWeight = -1.0 / 24.0;
inline constexpr double kFourthWeight = 7.0 / 5760.0;

/// Applies a 7-point centred stencil along a strided line. `at(l)` returns the
/// sample at offset l in [-3, 3].
template <class Sample>
auto central7(const std::array<double, 7>& c, Sample&& at) {
  using R = std::decay_t<decltype(at(0))>;
  R acc = c[0] * at(-3);
  for (int l = 1; l < 7; ++l) acc += c[l] * at(l - 3);
  return acc;
}

/// Applies a 6-point half-point stencil; `at(l)` for l in [-2, 3].
template <class Sample>
auto half6(const std::array<double, 6>& c, Sample&& at) {
  using R = std::decay_t<decltype(at(0))>;
  R acc = c[0] * at(-2);
  for (int l = 1; l < 6; ++l) acc += c[l] * at(l - 2);
  return acc;
}

}  // namespace fsmhd::stencil
