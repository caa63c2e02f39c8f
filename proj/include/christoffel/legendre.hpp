#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "christoffel/error.hpp"

namespace christoffel {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// q-point Gauss-Legendre rule on [-1, 1], exact for degree 2q - 1.
/// Newton iteration on the three-term recurrence from Chebyshev-like guesses.
inline GaussRule gauss_legendre(int q) {
  if (q < 1) fail(ErrorKind::InvalidArgument, "gauss_legendre needs q >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(q));
  rule.weights.resize(static_cast<std::size_t>(q));
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(q - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (q % 2 == 1) rule.nodes[static_cast<std::size_t>(q / 2)] = 0.0;
  return rule;
}

/// Same rule mapped to [0, 1].
inline GaussRule gauss_legendre_unit(int q) {
  GaussRule rule = gauss_legendre(q);
  for (auto& x : rule.nodes) x = 0.5 * (x + 1.0);
  for (auto& w : rule.weights) w *= 0.5;
  return rule;
}

/// Values of the L2([-1,1])-orthonormal Legendre polynomials
/// sqrt(k + 1/2) P_k(u) for k = 0..out.size()-1.
inline void legendre_orthonormal(double u, std::span<double> out) {
  if (out.empty()) return;
  double p0 = 1.0;
  out[0] = std::sqrt(0.5);
  if (out.size() == 1) return;
  double p1 = u;
  out[1] = std::sqrt(1.5) * u;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double p2 = ((2.0 * kk + 1.0) * u * p1 - kk * p0) / (kk + 1.0);
    p0 = p1;
    p1 = p2;
    out[k + 1] = std::sqrt(kk + 1.5) * p2;
  }
}

/// Monomial coefficients of the orthonormal Legendre polynomials:
/// result[k][a] is the coefficient of u^a in sqrt(k + 1/2) P_k(u).
inline std::vector<std::vector<double>> legendre_orthonormal_coefficients(int nmax) {
  std::vector<std::vector<double>> p(static_cast<std::size_t>(nmax + 1));
  p[0] = {1.0};
  if (nmax >= 1) p[1] = {0.0, 1.0};
  for (int k = 1; k < nmax; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k + 2), 0.0);
    const auto& a = p[static_cast<std::size_t>(k)];
    const auto& b = p[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i < a.size(); ++i) next[i + 1] += (2.0 * k + 1.0) * a[i] / (k + 1.0);
    for (std::size_t i = 0; i < b.size(); ++i) next[i] -= k * b[i] / (k + 1.0);
    p[static_cast<std::size_t>(k + 1)] = std::move(next);
  }
  for (int k = 0; k <= nmax; ++k) {
    for (auto& c : p[static_cast<std::size_t>(k)]) c *= std::sqrt(k + 0.5);
  }
  return p;
}

}  // namespace christoffel
