#pragma once

// Exact operator algebra on truncated tensor-Hermite expansions
//   f = sum_alpha c_alpha Psi_alpha,  Psi_alpha(v) = prod_j psi_{alpha_j}(v_j),
// with psi_n the Hermite functions built on e^{-x^2/4}.
//
// Ladder structure: a+ = x/2 - d/dx, a- = x/2 + d/dx,
//   a+ psi_n = sqrt(n+1) psi_{n+1},  a- psi_n = sqrt(n) psi_{n-1},
// so multiplication by v_j is a+_j + a-_j and d/dv_j is (a-_j - a+_j) / 2.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "kinspec/errors.hpp"

namespace kinspec {

template <std::size_t D>
using MultiIndex = std::array<int, D>;

template <std::size_t D>
constexpr int total_degree(const MultiIndex<D>& alpha) noexcept {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}

template <std::size_t D>
constexpr MultiIndex<D> unit_index(std::size_t j, int times = 1) noexcept {
  MultiIndex<D> e{};
  e[j] = times;
  return e;
}

/// Finite Hermite expansion with degree cutoff K. Absent entries are zero.
template <std::size_t D>
class HermiteCoefficients {
  static_assert(D >= 1 && D <= 3, "Hermite algebra supports dimensions 1, 2 and 3");

 public:
  using Index = MultiIndex<D>;
  using Storage = std::map<Index, double>;

  explicit HermiteCoefficients(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 0) throw std::domain_error("HermiteCoefficients: negative cutoff");
  }

  static HermiteCoefficients basis(int cutoff, const Index& alpha, double value = 1.0) {
    HermiteCoefficients c(cutoff);
    c.add(alpha, value);
    return c;
  }

  static constexpr std::size_t dimension() noexcept { return D; }
  int cutoff() const noexcept { return cutoff_; }
  const Storage& terms() const noexcept { return terms_; }

  double operator[](const Index& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
  }

  void add(const Index& alpha, double value) {
    for (int a : alpha) {
      if (a < 0) throw std::domain_error("HermiteCoefficients: negative multi-index entry");
    }
    if (total_degree(alpha) > cutoff_) {
      throw TruncationError("HermiteCoefficients: mode of degree " + std::to_string(total_degree(alpha)) +
                            " exceeds cutoff " + std::to_string(cutoff_));
    }
    if (value == 0.0) return;
    terms_[alpha] += value;
  }

  /// Largest |alpha| carrying a nonzero coefficient, -1 when empty.
  int max_degree() const noexcept {
    int m = -1;
    for (const auto& [alpha, c] : terms_) {
      if (c != 0.0) m = std::max(m, total_degree(alpha));
    }
    return m;
  }

  double norm() const noexcept {
    double s = 0.0;
    for (const auto& [alpha, c] : terms_) s += c * c;
    return std::sqrt(s);
  }

  HermiteCoefficients& operator+=(const HermiteCoefficients& o) {
    for (const auto& [alpha, c] : o.terms_) add(alpha, c);
    return *this;
  }
  HermiteCoefficients& operator*=(double s) {
    for (auto& [alpha, c] : terms_) c *= s;
    return *this;
  }
  friend HermiteCoefficients operator+(HermiteCoefficients a, const HermiteCoefficients& b) { return a += b; }
  friend HermiteCoefficients operator-(HermiteCoefficients a, const HermiteCoefficients& b) {
    for (const auto& [alpha, c] : b.terms_) a.add(alpha, -c);
    return a;
  }
  friend HermiteCoefficients operator*(double s, HermiteCoefficients a) { return a *= s; }

 private:
  int cutoff_;
  Storage terms_;
};

namespace detail {

template <std::size_t D>
void require_axis(std::size_t j) {
  if (j >= D) throw std::out_of_range("Hermite algebra: axis index out of range");
}

template <std::size_t D>
HermiteCoefficients<D> raise(const HermiteCoefficients<D>& c, std::size_t j) {
  HermiteCoefficients<D> out(c.cutoff());
  for (const auto& [alpha, v] : c.terms()) {
    auto beta = alpha;
    beta[j] += 1;
    out.add(beta, std::sqrt(static_cast<double>(alpha[j] + 1)) * v);
  }
  return out;
}

template <std::size_t D>
HermiteCoefficients<D> lower(const HermiteCoefficients<D>& c, std::size_t j) {
  HermiteCoefficients<D> out(c.cutoff());
  for (const auto& [alpha, v] : c.terms()) {
    if (alpha[j] == 0) continue;
    auto beta = alpha;
    beta[j] -= 1;
    out.add(beta, std::sqrt(static_cast<double>(alpha[j])) * v);
  }
  return out;
}

template <std::size_t D>
void require_headroom(const HermiteCoefficients<D>& c, const char* who) {
  if (c.max_degree() >= c.cutoff()) {
    throw TruncationError(std::string(who) + ": input reaches the degree cutoff " + std::to_string(c.cutoff()) +
                          "; raising the degree would drop modes");
  }
}

// Rotation generator v_j d_k - v_k d_j written in ladder form,
//   a+_j a-_k - a+_k a-_j,
// which preserves the total degree exactly.
template <std::size_t D>
HermiteCoefficients<D> rotation(const HermiteCoefficients<D>& c, std::size_t j, std::size_t k) {
  return raise(lower(c, k), j) - raise(lower(c, j), k);
}

}  // namespace detail

/// Multiplication by v_j.
template <std::size_t D>
HermiteCoefficients<D> apply_position(const HermiteCoefficients<D>& c, std::size_t j) {
  detail::require_axis<D>(j);
  detail::require_headroom(c, "apply_position");
  return detail::raise(c, j) + detail::lower(c, j);
}

/// Partial derivative d/dv_j.
template <std::size_t D>
HermiteCoefficients<D> apply_derivative(const HermiteCoefficients<D>& c, std::size_t j) {
  detail::require_axis<D>(j);
  detail::require_headroom(c, "apply_derivative");
  return 0.5 * (detail::lower(c, j) - detail::raise(c, j));
}

/// Harmonic oscillator -Delta + |v|^2/4: Psi_alpha -> (D/2 + |alpha|) Psi_alpha.
template <std::size_t D>
HermiteCoefficients<D> apply_harmonic_oscillator(const HermiteCoefficients<D>& c) {
  HermiteCoefficients<D> out(c.cutoff());
  for (const auto& [alpha, v] : c.terms()) out.add(alpha, (0.5 * D + total_degree(alpha)) * v);
  return out;
}

/// Laplace-Beltrami operator on the unit sphere as the sum of squared
/// rotation generators, sum_{j<k} (v_j d_k - v_k d_j)^2.
template <std::size_t D>
HermiteCoefficients<D> apply_laplace_beltrami(const HermiteCoefficients<D>& c) {
  HermiteCoefficients<D> out(c.cutoff());
  for (std::size_t j = 0; j < D; ++j) {
    for (std::size_t k = j + 1; k < D; ++k) {
      out += detail::rotation(detail::rotation(c, j, k), j, k);
    }
  }
  return out;
}

/// Orthogonal projection onto E_k = span{Psi_alpha : |alpha| = k}.
template <std::size_t D>
HermiteCoefficients<D> project_degree(const HermiteCoefficients<D>& c, int k) {
  if (k < 0 || k > c.cutoff()) throw std::domain_error("project_degree: degree outside [0, cutoff]");
  HermiteCoefficients<D> out(c.cutoff());
  for (const auto& [alpha, v] : c.terms()) {
    if (total_degree(alpha) == k) out.add(alpha, v);
  }
  return out;
}

/// Linearized Landau operator for Maxwellian molecules,
///   L = (d-1)(H - d/2) - Lap_S
///       + [Lap_S - (d-1)(H - d/2)] P_1
///       + [-Lap_S - (d-1)(H - d/2)] P_2,
/// assembled from the oscillator, the sphere Laplacian and degree projections.
template <std::size_t D>
HermiteCoefficients<D> apply_linearized_landau(const HermiteCoefficients<D>& c) {
  static_assert(D == 2 || D == 3, "linearized Landau operator is provided for d = 2 and d = 3");
  constexpr double dm1 = D - 1.0;
  auto shifted_oscillator = [](const HermiteCoefficients<D>& x) {
    HermiteCoefficients<D> h = apply_harmonic_oscillator(x);
    for (const auto& [alpha, v] : x.terms()) h.add(alpha, -0.5 * D * v);
    return h;
  };

  HermiteCoefficients<D> out = dm1 * shifted_oscillator(c) - apply_laplace_beltrami(c);
  if (c.cutoff() >= 1) {
    const auto p1 = project_degree(c, 1);
    out += apply_laplace_beltrami(p1) - dm1 * shifted_oscillator(p1);
  }
  if (c.cutoff() >= 2) {
    const auto p2 = project_degree(c, 2);
    out += -1.0 * apply_laplace_beltrami(p2) - dm1 * shifted_oscillator(p2);
  }
  return out;
}

/// All multi-indices with |alpha| <= K, ordered by degree then lexicographically.
template <std::size_t D>
std::vector<MultiIndex<D>> enumerate_multi_indices(int cutoff) {
  std::vector<MultiIndex<D>> out;
  MultiIndex<D> alpha{};
  auto recurse = [&](auto&& self, std::size_t axis, int remaining, int degree) -> void {
    if (axis + 1 == D) {
      alpha[axis] = remaining;
      out.push_back(alpha);
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      alpha[axis] = a;
      self(self, axis + 1, remaining - a, degree);
    }
  };
  for (int k = 0; k <= cutoff; ++k) recurse(recurse, 0, k, k);
  return out;
}

/// Dense matrix of a coefficient-space operator on all modes with |alpha| <= K.
template <std::size_t D, class Op>
Eigen::MatrixXd assemble_matrix(Op&& op, int cutoff) {
  const auto indices = enumerate_multi_indices<D>(cutoff);
  std::map<MultiIndex<D>, Eigen::Index> position;
  for (std::size_t i = 0; i < indices.size(); ++i) position[indices[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const auto image = op(HermiteCoefficients<D>::basis(cutoff, indices[col]));
    for (const auto& [alpha, v] : image.terms()) m(position.at(alpha), col) = v;
  }
  return m;
}

}  // namespace kinspec
