#pragma once

// Fifth-order WENO building blocks: scalar and characteristic-wise
// interpolation of point values to half points, and the one-sided
// Hamilton-Jacobi derivative with its effective linear coefficients.

#include "fsmhd/core.hpp"

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace fsmhd::weno {

inline constexpr double kEpsilon = 1e-6;

/// minus: value at i+1/2 biased to the left (upwind for rightgoing waves),
/// or for H-J the backward derivative phi^-. plus is the mirror image.
enum class Side { minus, plus };

struct Interpolation {
  double value = 0.0;
  std::array<double, 3> weights{};
  std::array<double, 3> indicators{};
};

namespace detail {

// Left-biased interpolation at i+1/2 from q_{i-2..i+2}. Sub-stencils are
// ordered {i..i+2}, {i-1..i+1}, {i-2..i}.
inline Interpolation interpolate_left(double a, double b, double c, double d, double e,
                                      double eps) {
  Interpolation r;
  const double p0 = 0.375 * c + 0.75 * d - 0.125 * e;
  const double p1 = -0.125 * b + 0.75 * c + 0.375 * d;
  const double p2 = 0.375 * a - 1.25 * b + 1.875 * c;
  auto sq = [](double z) { return z * z; };
  r.indicators[0] = 13.0 / 12.0 * sq(c - 2.0 * d + e) + 0.25 * sq(3.0 * c - 4.0 * d + e);
  r.indicators[1] = 13.0 / 12.0 * sq(b - 2.0 * c + d) + 0.25 * sq(b - d);
  r.indicators[2] = 13.0 / 12.0 * sq(a - 2.0 * b + c) + 0.25 * sq(a - 4.0 * b + 3.0 * c);
  constexpr std::array<double, 3> lin = {5.0 / 16.0, 5.0 / 8.0, 1.0 / 16.0};
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    r.weights[k] = lin[k] / sq(r.indicators[k] + eps);
    sum += r.weights[k];
  }
  for (auto& w : r.weights) w /= sum;
  r.value = r.weights[0] * p0 + r.weights[1] * p1 + r.weights[2] * p2;
  return r;
}

}  // namespace detail

/// Interpolates to x_{i+1/2} from v = (q_{i-2}, ..., q_{i+3}).
inline Interpolation weno5_interpolate(std::span<const double, 6> v, Side side,
                                       double eps = kEpsilon) {
  if (side == Side::minus) return detail::interpolate_left(v[0], v[1], v[2], v[3], v[4], eps);
  return detail::interpolate_left(v[5], v[4], v[3], v[2], v[1], eps);
}

/// Effective linear operator behind one WENO H-J derivative: the nonlinear
/// weights frozen into seven coefficients on offsets -3..3. Applying it to the
/// node coordinates yields metric derivatives consistent with the derivative
/// of phi, which is what makes the scheme exact for linear data.
struct WenoOperator {
  Side side = Side::plus;
  double spacing = 1.0;
  std::array<double, 7> coeffs{};  // offsets -3..3, not divided by spacing
  std::array<double, 3> weights{};
  std::array<double, 3> indicators{};
};

struct HjDerivative {
  double value = 0.0;
  WenoOperator op;
};

namespace detail {

// Sub-stencils of the forward-biased derivative at i: {i-2..i+1},
// {i-1..i+2}, {i..i+3}, each stored on offsets -3..3.
inline constexpr std::array<std::array<double, 7>, 3> kHjStencils = {{
    {0.0, 1.0 / 6.0, -1.0, 0.5, 1.0 / 3.0, 0.0, 0.0},
    {0.0, 0.0, -1.0 / 3.0, -0.5, 1.0, -1.0 / 6.0, 0.0},
    {0.0, 0.0, 0.0, -11.0 / 6.0, 3.0, -1.5, 1.0 / 3.0},
}};

inline WenoOperator hj_plus_operator(const std::array<double, 7>& f, double spacing,
                                     double eps) {
  WenoOperator op;
  op.side = Side::plus;
  op.spacing = spacing;
  // Undivided second differences at i-1, i, i+1, i+2, scaled by 1/spacing.
  auto dd = [&](int k) { return (f[k + 4] - 2.0 * f[k + 3] + f[k + 2]) / spacing; };
  const double a = dd(-1);
  const double b = dd(0);
  const double c = dd(1);
  const double d = dd(2);
  auto sq = [](double z) { return z * z; };
  op.indicators[0] = 13.0 * sq(b - a) + 3.0 * sq(3.0 * b - a);
  op.indicators[1] = 13.0 * sq(c - b) + 3.0 * sq(c + b);
  op.indicators[2] = 13.0 * sq(d - c) + 3.0 * sq(d - 3.0 * c);
  constexpr std::array<double, 3> lin = {0.3, 0.6, 0.1};
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    op.weights[k] = lin[k] / sq(op.indicators[k] + eps);
    sum += op.weights[k];
  }
  for (auto& w : op.weights) w /= sum;
  for (int l = 0; l < 7; ++l) {
    op.coeffs[l] = op.weights[0] * kHjStencils[0][l] + op.weights[1] * kHjStencils[1][l] +
                   op.weights[2] * kHjStencils[2][l];
  }
  return op;
}

}  // namespace detail

/// One-sided WENO derivative at the centre of phi = (phi_{i-3}, ..., phi_{i+3}).
/// plus uses offsets -2..3, minus is its mirror image on -3..2.
inline HjDerivative weno5_hj_derivative(std::span<const double, 7> phi, double spacing,
                                        Side side, double eps = kEpsilon) {
  if (!(spacing > 0.0)) throw std::invalid_argument("H-J derivative needs a positive spacing");
  std::array<double, 7> f;
  if (side == Side::plus) {
    for (int l = 0; l < 7; ++l) f[l] = phi[l];
  } else {
    for (int l = 0; l < 7; ++l) f[l] = phi[6 - l];
  }
  HjDerivative r;
  r.op = detail::hj_plus_operator(f, spacing, eps);
  if (side == Side::minus) {
    // d/dx of phi(x) equals -d/dx of phi(-x) evaluated on the reversed line.
    std::array<double, 7> c;
    for (int l = 0; l < 7; ++l) c[l] = -r.op.coeffs[6 - l];
    r.op.coeffs = c;
    r.op.side = Side::minus;
  }
  double acc = 0.0;
  for (int l = 0; l < 7; ++l) acc += r.op.coeffs[l] * phi[l];
  r.value = acc / spacing;
  return r;
}

/// Applies a frozen WENO operator to other samples on the same 7-point stencil.
inline double apply_operator(const WenoOperator& op, std::span<const double> samples) {
  if (samples.size() != 7)
    throw std::invalid_argument("WENO operator footprint is 7 samples");
  double acc = 0.0;
  for (int l = 0; l < 7; ++l) acc += op.coeffs[l] * samples[static_cast<std::size_t>(l)];
  return acc / op.spacing;
}

struct SystemInterpolation {
  Vec8 minus;
  Vec8 plus;
  // Smoothness indicators per characteristic field, for both biases.
  std::array<std::array<double, 3>, 8> is_minus{};
  std::array<std::array<double, 3>, 8> is_plus{};
};

/// Characteristic-wise interpolation of six states q_{i-2..i+3} to i+1/2 using
/// the left/right eigenvector matrices of one interface.
inline SystemInterpolation weno5_interpolate_system(std::span<const Vec8, 6> q, const Mat8& left,
                                                    const Mat8& right,
                                                    double eps = kEpsilon) {
  std::array<Vec8, 6> w;
  for (int k = 0; k < 6; ++k) w[k] = left * q[k];
  SystemInterpolation out;
  Vec8 wm;
  Vec8 wp;
  std::array<double, 6> line;
  for (int c = 0; c < 8; ++c) {
    for (int k = 0; k < 6; ++k) line[k] = w[k](c);
    const auto m = weno5_interpolate(std::span<const double, 6>(line), Side::minus, eps);
    const auto p = weno5_interpolate(std::span<const double, 6>(line), Side::plus, eps);
    wm(c) = m.value;
    wp(c) = p.value;
    out.is_minus[c] = m.indicators;
    out.is_plus[c] = p.indicators;
  }
  out.minus = right * wm;
  out.plus = right * wp;
  return out;
}

}  // namespace fsmhd::weno
