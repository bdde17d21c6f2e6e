#pragma once

// Shared storage and error types for the curvilinear MHD solver.

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fsmhd {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

// Conserved variable slots.
inline constexpr int kRho = 0;
inline constexpr int kMx = 1;
inline constexpr int kMy = 2;
inline constexpr int kMz = 3;
inline constexpr int kEnergy = 4;
inline constexpr int kBx = 5;
inline constexpr int kBy = 6;
inline constexpr int kBz = 7;

// Every padded field carries this many ghost layers on each side. Six is what
// the half-point metric operator needs: a sixth-order nodal derivative
// (3 layers) feeding a six-point half-point interpolation (3 more layers).
inline constexpr int kGhost = 6;

/// Node-centred 2D array with a ghost frame. Valid indices are
/// i in [-ng, ni + ng), j in [-ng, nj + ng); i is the fastest index.
template <class T>
class Field2D {
 public:
  Field2D() = default;
  Field2D(int ni, int nj, int ng = kGhost, const T& fill = T{})
      : ni_(ni), nj_(nj), ng_(ng), stride_(ni + 2 * ng),
        data_(static_cast<std::size_t>((ni + 2 * ng) * (nj + 2 * ng)), fill) {}

  int ni() const { return ni_; }
  int nj() const { return nj_; }
  int ng() const { return ng_; }
  bool empty() const { return data_.empty(); }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  std::vector<T>& raw() { return data_; }
  const std::vector<T>& raw() const { return data_; }

  bool same_shape(const Field2D& other) const {
    return ni_ == other.ni_ && nj_ == other.nj_ && ng_ == other.ng_;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>((j + ng_) * stride_ + (i + ng_));
  }

  int ni_ = 0;
  int nj_ = 0;
  int ng_ = 0;
  int stride_ = 0;
  std::vector<T> data_;
};

using ScalarField = Field2D<double>;
using StateField = Field2D<Vec8>;

/// Elementwise a*x + b*y over the whole padded array.
template <class T>
Field2D<T> lincomb(double a, const Field2D<T>& x, double b, const Field2D<T>& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("lincomb of fields with different shapes");
  Field2D<T> out = x;
  auto& o = out.raw();
  const auto& yr = y.raw();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = a * o[k] + b * yr[k];
  return out;
}

/// Applies fn(i, j) over the interior nodes.
template <class Fn>
void for_interior(int ni, int nj, Fn&& fn) {
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) fn(i, j);
}

/// Invalid user configuration (bad flags, unknown case ids, inconsistent
/// grid parameters).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mesh that cannot carry the discretisation (non-positive Jacobian,
/// reflex angular sector).
class GridError : public std::runtime_error {
 public:
  GridError(const std::string& what, int i, int j)
      : std::runtime_error(what + " at node (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")"),
        i_(i), j_(j) {}
  int i() const { return i_; }
  int j() const { return j_; }

 private:
  int i_;
  int j_;
};

/// Loss of physical validity (rho <= 0 or p <= 0). Location fields are filled
/// in progressively as the exception travels up through the solver.
class PhysicalStateError : public std::runtime_error {
 public:
  explicit PhysicalStateError(std::string reason)
      : std::runtime_error(reason), reason_(std::move(reason)) {}

  const std::string& reason() const { return reason_; }

  int i = -1;
  int j = -1;
  int step = -1;
  int stage = -1;
  double time = -1.0;
  std::string case_id;

  std::string describe() const {
    std::string s = reason_;
    if (!case_id.empty()) s += " case=" + case_id;
    if (step >= 0) s += " step=" + std::to_string(step);
    if (stage >= 0) s += " stage=" + std::to_string(stage);
    if (time >= 0.0) s += " time=" + std::to_string(time);
    if (i >= 0) s += " node=(" + std::to_string(i) + "," + std::to_string(j) + ")";
    return s;
  }

 private:
  std::string reason_;
};

}  // namespace fsmhd
