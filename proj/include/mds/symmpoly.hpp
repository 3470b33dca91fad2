#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mds {

using cdouble = std::complex<double>;

// Evaluation point set x_1..x_t for the symmetric-polynomial identities.
struct SymmetricContext {
  std::vector<cdouble> values;

  int t() const { return static_cast<int>(values.size()); }
};

// All of e_0..e_t as the coefficients of prod_j (1 + x_j y), built by the
// O(t^2) incremental product recurrence. Stable at the |x_j| <= 2, t <= 8
// scales this library verifies identities at.
inline std::vector<cdouble> elementary_symmetric_all(std::span<const cdouble> xs) {
  std::vector<cdouble> e(xs.size() + 1, cdouble{0.0, 0.0});
  e[0] = 1.0;
  std::size_t n = 0;
  for (const cdouble& x : xs) {
    ++n;
    for (std::size_t j = n; j >= 1; --j) e[j] += x * e[j - 1];
  }
  return e;
}

inline cdouble elementary_symmetric(const SymmetricContext& ctx, int j) {
  if (j < 0 || j > ctx.t())
    throw std::domain_error("elementary_symmetric: degree out of range");
  return elementary_symmetric_all(ctx.values)[static_cast<std::size_t>(j)];
}

// prod_j (x - x_j), evaluated directly.
inline cdouble poly_eval(const SymmetricContext& ctx, cdouble x) {
  cdouble acc = 1.0;
  for (const cdouble& root : ctx.values) acc *= (x - root);
  return acc;
}

// Same polynomial through its coefficient expansion
//   x^t + sum_j (-1)^j e_j x^{t-j}.
inline cdouble poly_eval_from_coeffs(const SymmetricContext& ctx, cdouble x) {
  const int t = ctx.t();
  const auto e = elementary_symmetric_all(ctx.values);
  cdouble acc = 0.0;
  double sign = 1.0;
  // Horner over descending powers: coefficient of x^{t-j} is (-1)^j e_j.
  for (int j = 0; j <= t; ++j) {
    acc = acc * x + sign * e[static_cast<std::size_t>(j)];
    sign = -sign;
  }
  return acc;
}

// Derivative as the sum over j of prod_{k != j} (x - x_k).
inline cdouble poly_derivative(const SymmetricContext& ctx, cdouble x) {
  const int t = ctx.t();
  cdouble acc = 0.0;
  for (int j = 0; j < t; ++j) {
    cdouble term = 1.0;
    for (int k = 0; k < t; ++k) {
      if (k == j) continue;
      term *= (x - ctx.values[static_cast<std::size_t>(k)]);
    }
    acc += term;
  }
  return acc;
}

// Derivative through the differentiated coefficient form
//   t x^{t-1} + sum_{j=1}^{t-1} (-1)^j (t-j) e_j x^{t-j-1}.
inline cdouble poly_derivative_from_coeffs(const SymmetricContext& ctx, cdouble x) {
  const int t = ctx.t();
  if (t == 0) return 0.0;
  const auto e = elementary_symmetric_all(ctx.values);
  cdouble acc = 0.0;
  double sign = 1.0;
  for (int j = 0; j <= t - 1; ++j) {
    acc = acc * x + sign * static_cast<double>(t - j) * e[static_cast<std::size_t>(j)];
    sign = -sign;
  }
  return acc;
}

// Both routes through the identity
//   (1-t) prod_j (1-x_j) + sum_j prod_{k!=j} (1-x_k)
//     = 1 + sum_{j>=2} (-1)^{j-1} (j-1) e_j.
// Returned as (direct, symmetric-expansion); callers assert closeness.
inline std::pair<cdouble, cdouble> one_minus_roots_identity(const SymmetricContext& ctx) {
  const int t = ctx.t();
  if (t < 1) throw std::domain_error("one_minus_roots_identity: need t >= 1");
  const cdouble one{1.0, 0.0};
  cdouble lhs = (1.0 - static_cast<double>(t)) * poly_eval(ctx, one) +
                poly_derivative(ctx, one);
  const auto e = elementary_symmetric_all(ctx.values);
  cdouble rhs = 1.0;
  double sign = -1.0;  // (-1)^{j-1} starting at j = 2
  for (int j = 2; j <= t; ++j) {
    rhs += sign * static_cast<double>(j - 1) * e[static_cast<std::size_t>(j)];
    sign = -sign;
  }
  return {lhs, rhs};
}

}  // namespace mds
