#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bonacci/algebra.hpp"
#include "bonacci/levels.hpp"
#include "bonacci/matrix.hpp"

namespace bonacci {

/// c[i] = μ_p([0, d_i]) for 0 <= i <= m, with c[0] = μ_p([0,1]) = 1.
struct PrefixMeasures {
  std::vector<Rational> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Rational& operator[](std::size_t i) const { return c.at(i); }
};

/// Closed form c_i = 1 - p2^(m+1-i) / (1 - p1 p2^(m-1)), from the linear
/// system 1 - c_i = p2 (1 - c_{i+1}) and c_m = p1 c_1.
inline PrefixMeasures prefix_measures(int m, const ProbabilityPair& p) {
  if (m < 2) throw InvalidDegree("degree m must be at least 2");
  PrefixMeasures pm;
  pm.c.resize(static_cast<std::size_t>(m) + 1);
  pm.c[0] = 1;
  const Rational den = 1 - p.p1() * pow_rational(p.p2(), m - 1);
  for (int i = 1; i <= m; ++i) pm.c[static_cast<std::size_t>(i)] = 1 - pow_rational(p.p2(), m + 1 - i) / den;
  return pm;
}

/// μ_p([a_j, a_{j+1}]) = W(a_{j-1}) (1 - c_s) + W(a_j) c_t, where d_s, d_t
/// are the labels of a_{j-1}, a_j (first term absent for j = 0).
inline Rational basic_interval_measure(const Level& level, std::size_t j, const PrefixMeasures& pm) {
  if (j + 1 >= level.size()) throw Error("basic_interval_measure: index " + std::to_string(j) + " out of range");
  Rational mu = level.weight(j) * pm[level.labels[j].index];
  if (j > 0) mu += level.weight(j - 1) * (1 - pm[level.labels[j - 1].index]);
  return mu;
}

inline std::vector<Rational> basic_interval_measures(const Level& level, const PrefixMeasures& pm) {
  std::vector<Rational> out;
  out.reserve(level.size() - 1);
  for (std::size_t j = 0; j + 1 < level.size(); ++j) out.push_back(basic_interval_measure(level, j, pm));
  return out;
}

struct RatioScan {
  Rational max_ratio;
  std::size_t argmax_index = 0;
};

/// max over 0 <= j <= #X_n - 3 of max(ρ_j, 1/ρ_j), ρ_j = μ(I_j) / μ(I_{j+1}).
inline RatioScan interval_ratio_scan(const Level& level, const PrefixMeasures& pm) {
  if (level.size() < 3) throw LevelTooSmall("interval ratio scan needs at least 3 points");
  const auto mu = basic_interval_measures(level, pm);
  RatioScan best{0, 0};
  for (std::size_t j = 0; j + 1 < mu.size(); ++j) {
    Rational r = mu[j] / mu[j + 1];
    if (r < 1) r = 1 / r;
    if (j == 0 || r > best.max_ratio) best = {r, j};
  }
  return best;
}

/// min(c_m, 1 - c_1): the uniform lower constant in
/// C' (w_j + w_{j+1}) <= μ([a_{j+1}, a_{j+2}]) <= w_j + w_{j+1}.
inline Rational sandwich_constant(const PrefixMeasures& pm) {
  const Rational a = pm[static_cast<std::size_t>(pm.degree())];
  const Rational b = 1 - pm[1];
  return a < b ? a : b;
}

inline CheckResult check_sandwich(const Level& level, const PrefixMeasures& pm) {
  const Rational lower = sandwich_constant(pm);
  for (std::size_t j = 0; j + 3 < level.size(); ++j) {
    const Rational s = level.weight(j) + level.weight(j + 1);
    const Rational mu = basic_interval_measure(level, j + 1, pm);
    if (mu > s || mu < lower * s)
      return CheckResult::fail(j, "rank " + std::to_string(level.n) + ": measure sandwich fails at triple " + std::to_string(j));
  }
  return CheckResult::pass();
}

/// value / denominator with denominator > 0; lets the oracle take rational
/// multiples of field elements as interval endpoints.
struct Endpoint {
  FieldElement value;
  Integer denominator = 1;

  static Endpoint of(FieldElement v) { return {std::move(v), 1}; }

  friend Endpoint operator+(const Endpoint& a, const Endpoint& b) {
    return {a.value * b.denominator + b.value * a.denominator, a.denominator * b.denominator};
  }
  friend Endpoint operator-(const Endpoint& a, const Endpoint& b) {
    return {a.value * b.denominator - b.value * a.denominator, a.denominator * b.denominator};
  }
};

inline std::strong_ordering compare(const PisotField& field, const FieldElement& x, const Endpoint& e) {
  return compare(field, x * e.denominator, e.value);
}

inline std::strong_ordering compare(const PisotField& field, const Endpoint& a, const Endpoint& b) {
  return compare(field, a.value * b.denominator, b.value * a.denominator);
}

struct MeasureBracket {
  Rational lower;
  Rational upper;
  int depth = 0;

  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  Rational width() const { return upper - lower; }
};

inline constexpr int kMaxOracleDepth = 48;

namespace detail {

struct CylinderWalk {
  const PisotField& field;
  const ProbabilityPair& p;
  const Endpoint& a;
  const Endpoint& b;
  int depth;
  FieldElement d1;
  Integer q, n1, n2;
  Integer lower = 0, upper = 0;  // numerators over q^depth
  std::vector<Integer> qpow;

  // Cylinder [left, left + β^-k] with mass numerator `mass` over q^k.
  void visit(const FieldElement& left, int k, const Integer& mass) {
    const FieldElement right = left + FieldElement::integer(left.degree(), 1).divided_by_beta(static_cast<unsigned>(k));
    if (compare(field, right, a) < 0 || compare(field, left, b) > 0) return;
    const Integer scaled = mass * qpow[static_cast<std::size_t>(depth - k)];
    if (compare(field, left, a) >= 0 && compare(field, right, b) <= 0) {
      lower += scaled;
      upper += scaled;
      return;
    }
    if (k == depth) {
      upper += scaled;
      return;
    }
    const unsigned kk = static_cast<unsigned>(k) + 1;
    visit(left.rescaled(std::max(left.scale(), kk)), k + 1, mass * n1);
    visit(left + d1.divided_by_beta(kk), k + 1, mass * n2);
  }
};

}  // namespace detail

/// Lower and upper bounds on μ_p([a, b]) from the cylinders of depth N:
/// lower sums p_I over S_I([0,1]) ⊆ [a,b], upper over S_I([0,1]) ∩ [a,b] ≠ ∅.
/// Subtrees fully inside or outside are not expanded.
inline MeasureBracket cylinder_bounds(const PisotField& field, const ProbabilityPair& p, const Endpoint& a,
                                      const Endpoint& b, int depth) {
  if (depth < 1) throw Error("cylinder_bounds: depth must be at least 1");
  if (depth > kMaxOracleDepth)
    throw ResourceCapExceeded("cylinder_bounds: depth " + std::to_string(depth) + " above cap " +
                              std::to_string(kMaxOracleDepth));
  if (a.denominator <= 0 || b.denominator <= 0) throw Error("cylinder_bounds: endpoint denominators must be positive");
  const int m = field.degree();
  const FieldElement zero = FieldElement::zero(m);
  const FieldElement one = FieldElement::integer(m, 1);
  if (compare(field, zero, a) > 0 || compare(field, a, b) >= 0 || compare(field, one, b) < 0)
    throw Error("cylinder_bounds: need 0 <= a < b <= 1");

  detail::CylinderWalk walk{field, p, a, b, depth,
                            FieldElement::beta_power(m, 1) - one, p.denom(), p.num1(), p.num2(), 0, 0, {}};
  walk.qpow.resize(static_cast<std::size_t>(depth) + 1);
  walk.qpow[0] = 1;
  for (std::size_t i = 1; i < walk.qpow.size(); ++i) walk.qpow[i] = walk.qpow[i - 1] * walk.q;
  walk.visit(zero, 0, Integer(1));
  const Integer den = walk.qpow.back();
  return {make_rational(walk.lower, den), make_rational(walk.upper, den), depth};
}

inline MeasureBracket cylinder_bounds(const PisotField& field, const ProbabilityPair& p, const FieldElement& a,
                                      const FieldElement& b, int depth) {
  return cylinder_bounds(field, p, Endpoint::of(a), Endpoint::of(b), depth);
}

/// Bracket on μ(B(x,2r)) / μ(B(x,r)); `upper` is empty when the inner ball
/// has zero certified mass at this depth.
struct RatioBracket {
  Rational lower;
  std::optional<Rational> upper;
};

inline RatioBracket ball_ratio_probe(const PisotField& field, const ProbabilityPair& p, const Endpoint& center,
                                     const Endpoint& radius, int depth) {
  const int m = field.degree();
  const Endpoint zero = Endpoint::of(FieldElement::zero(m));
  const Endpoint one = Endpoint::of(FieldElement::integer(m, 1));
  if (compare(field, center, zero) < 0 || compare(field, center, one) > 0)
    throw Error("ball_ratio_probe: center outside [0,1]");
  if (compare(field, radius, zero) <= 0) throw Error("ball_ratio_probe: radius must be positive");

  auto clipped = [&](const Endpoint& r) {
    Endpoint lo = center - r, hi = center + r;
    if (compare(field, lo, zero) < 0) lo = zero;
    if (compare(field, hi, one) > 0) hi = one;
    return cylinder_bounds(field, p, lo, hi, depth);
  };
  const MeasureBracket inner = clipped(radius);
  const MeasureBracket outer = clipped(radius + radius);
  RatioBracket r;
  r.lower = outer.lower / inner.upper;
  if (inner.lower > 0) r.upper = outer.upper / inner.lower;
  return r;
}

}  // namespace bonacci
