#pragma once

/*
 * Non-doubling witness for m >= 3.
 *
 * Follow the address path I_n = 1 1 2^(n-2): z_{n,1} = S_{I_n}(0) starts a
 * triple in X_n whose labels repeat with period m and whose weights evolve
 * by the split transition, except every m-th step (m | n-1) which uses the
 * merge transition.  After k full periods the triple's sum ratio is R_k,
 * which diverges for every p.
 */

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "bonacci/algebra.hpp"
#include "bonacci/levels.hpp"
#include "bonacci/matrix.hpp"
#include "bonacci/substitution.hpp"

namespace bonacci {

struct WitnessState {
  int n = 2;
  int m = 3;
  ProbabilityPair p{Rational(1, 2)};
  std::array<Letter, 3> labels{};
  WeightTriple weights{};
  /// z_{n,1} = S_{I_n}(0).
  FieldElement location;
};

inline void require_witness_degree(int m) {
  if (m < 3) throw InvalidDegree("the witness path needs m >= 3 (use the golden-ratio analysis for m = 2)");
}

inline WitnessState initial_witness(int m, const ProbabilityPair& p) {
  require_witness_degree(m);
  WitnessState s;
  s.n = 2;
  s.m = m;
  s.p = p;
  s.labels = {letter(1), letter(2), letter(1)};
  s.weights = {p.p1() * p.p1(), p.p1() * p.p2(), p.p1() * p.p2()};
  s.location = FieldElement::zero(m).rescaled(2);
  return s;
}

/// Closed-form label triple at z_{n,1}: with n' in {2..m+1}, n' ≡ n (mod m),
/// d1 d2 d1 for n' = 2, d2 d1 d3 for n' = 3, else d_{n'-1} d1 d2.
inline std::array<Letter, 3> witness_labels(int n, int m) {
  require_witness_degree(m);
  if (n < 2) throw Error("witness_labels: n must be at least 2");
  int np = ((n - 2) % m) + 2;
  if (np == 2) return {letter(1), letter(2), letter(1)};
  if (np == 3) return {letter(2), letter(1), letter(3)};
  return {letter(np - 1), letter(1), letter(2)};
}

/// Q_n: merge transition when m | (n - 1), split transition otherwise.
inline TransitionMatrix witness_transition(int n, int m, const ProbabilityPair& p) {
  return (n - 1) % m == 0 ? merge_transition(p) : split_transition(p);
}

/// Advances the state from rank n to n + 1.  Labels are derived from σ
/// (positions 2..4 of the image of the current triple).
inline WitnessState step(const WitnessState& s) {
  WitnessState t = s;
  t.n = s.n + 1;
  t.weights = witness_transition(s.n, s.m, s.p) * s.weights;
  const LabelWord image = apply_sigma(LabelWord(s.labels.begin(), s.labels.end()), s.m);
  t.labels = {image.at(1), image.at(2), image.at(3)};
  const FieldElement d1 = FieldElement::beta_power(s.m, 1) - FieldElement::integer(s.m, 1);
  t.location = s.location.rescaled(static_cast<unsigned>(t.n)) + d1.divided_by_beta(static_cast<unsigned>(t.n));
  return t;
}

/// State after k full periods (rank k m + 2).
inline WitnessState witness_after_periods(int m, const ProbabilityPair& p, int k) {
  WitnessState s = initial_witness(m, p);
  for (int i = 0; i < k * m; ++i) s = step(s);
  return s;
}

/// (M_merge M_split^(m-1))^k by explicit multiplication.
inline TransitionMatrix cycle_product(int m, const ProbabilityPair& p, int k) {
  require_witness_degree(m);
  const TransitionMatrix period = merge_transition(p) * split_transition(p).pow(static_cast<unsigned>(m - 1));
  return period.pow(static_cast<unsigned>(k));
}

/// Closed form of (M_merge M_split^(m-1))^k.
inline TransitionMatrix cycle_power(int m, const ProbabilityPair& p, int k) {
  require_witness_degree(m);
  if (k < 1) throw Error("cycle_power: k must be at least 1");
  const Rational& p1 = p.p1();
  const Rational& p2 = p.p2();
  Rational top = 0;
  for (int i = 0; i < k; ++i) top += pow_rational(p1, m + (m - 1) * i) * pow_rational(p2, k * m - m - (m - 1) * i);
  const Rational mid = pow_rational(p1, k * m - k) * pow_rational(p2, k);
  const Rational z = 0;
  return make_matrix({{{pow_rational(p2, k * m), top, z}, {z, mid, z}, {z, mid, z}}});
}

/// R_k = 1 / (2 ρ^(k(m-1)-1)) + Σ_{i<k} ρ^((m-1)i) / (2 ρ^(k(m-1)-m)) + 1/2, ρ = p1/p2.
inline Rational witness_ratio(int m, const ProbabilityPair& p, int k) {
  require_witness_degree(m);
  if (k < 1) throw Error("witness_ratio: k must be at least 1");
  const Rational rho = p.p1() / p.p2();
  Rational sum = 0;
  for (int i = 0; i < k; ++i) sum += pow_rational(rho, (m - 1) * i);
  return 1 / (2 * pow_rational(rho, k * (m - 1) - 1)) + sum / (2 * pow_rational(rho, k * (m - 1) - m)) + Rational(1, 2);
}

struct WitnessCertificate {
  int k = 0;
  Rational ratio;
  Rational threshold;
  /// p1 > p2 was reflected to (p2, p1) before the search.
  bool reflected = false;
  ProbabilityPair analysed{Rational(1, 2)};
};

inline constexpr int kDefaultMaxPeriods = 100'000;

/// Smallest k with R_k > threshold on (p1 <= p2)-normalised weights.
inline WitnessCertificate divergence_certificate(int m, const ProbabilityPair& p, const Rational& threshold,
                                                 int max_k = kDefaultMaxPeriods) {
  require_witness_degree(m);
  WitnessCertificate cert;
  cert.threshold = threshold;
  cert.reflected = p.p1() > p.p2();
  cert.analysed = cert.reflected ? p.reflected() : p;
  const Rational rho = cert.analysed.p1() / cert.analysed.p2();
  const Rational rho_period = pow_rational(rho, m - 1);
  Rational sum = 0, term = 1;
  for (int k = 1; k <= max_k; ++k) {
    sum += term;
    term *= rho_period;
    const Rational r = 1 / (2 * pow_rational(rho, k * (m - 1) - 1)) + sum / (2 * pow_rational(rho, k * (m - 1) - m)) +
                       Rational(1, 2);
    if (r > threshold) {
      cert.k = k;
      cert.ratio = r;
      return cert;
    }
  }
  throw ResourceCapExceeded("no witness period up to k=" + std::to_string(max_k) + " exceeds the threshold");
}

/// Position of `x` among the points of `level` (binary search by exact comparison).
inline std::optional<std::size_t> locate_point(const PisotField& field, const Level& level, const FieldElement& x) {
  std::size_t lo = 0, hi = level.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto ord = compare(field, level.points[mid], x);
    if (ord == std::strong_ordering::equal) return mid;
    if (ord < 0) lo = mid + 1;
    else hi = mid;
  }
  return std::nullopt;
}

/// Compares the matrix-path state at rank k m + 2 with the full level.
inline CheckResult cross_validate(const PisotField& field, const Level& level, int k) {
  const int m = level.m;
  require_witness_degree(m);
  const int n = k * m + 2;
  if (level.n != n)
    return CheckResult::fail(0, "level has rank " + std::to_string(level.n) + ", expected " + std::to_string(n));
  const WitnessState s = witness_after_periods(m, level.p, k);
  const auto pos = locate_point(field, level, s.location);
  if (!pos) return CheckResult::fail(0, "witness location " + s.location.to_string() + " not found at rank " + std::to_string(n));
  const std::size_t j = *pos;
  if (j + 3 >= level.size()) return CheckResult::fail(j, "witness triple runs past the last weighted point");
  if (level.triple(j) != s.weights)
    return CheckResult::fail(j, "weight triple at the witness location differs from the matrix path");
  const auto expected = witness_labels(n, m);
  for (std::size_t i = 0; i < 3; ++i)
    if (level.labels[j + i] != expected[i] || s.labels[i] != expected[i])
      return CheckResult::fail(j, "labels at the witness location differ from the period-m label pattern");
  return CheckResult::pass();
}

}  // namespace bonacci
