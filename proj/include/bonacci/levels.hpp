#pragma once

/*
 * Partition levels X_n = {S_I(0) : |I| = n} ∪ {1} for the IFS
 * S_1(x) = x/β, S_2(x) = x/β + (1 - 1/β), together with the gap labels and
 * the address weights W_n(x) = Σ_{S_I(0) = x} p_I.
 *
 * Levels are built iteratively: X_{n+1} = X_n ∪ (X_n + d_1/β^(n+1)), where
 * the shifted copy of a point with label d_m coincides with its right
 * neighbour.  Weights are kept as integer numerators over the common
 * denominator q^n (p1 = a/q, p2 = b/q), so refinement and ratio scans are
 * integer-only.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bonacci/algebra.hpp"
#include "bonacci/matrix.hpp"
#include "bonacci/substitution.hpp"

namespace bonacci {

struct LevelOptions {
  /// Recompute every merge decision by exact point comparison.
  bool audit = false;
  std::size_t max_points = 20'000'000;
};

struct Level {
  int n = 0;
  int m = 0;
  ProbabilityPair p{Rational(1, 2)};
  /// a_{n,0} = 0 < ... < a_{n,#X_n-1} = 1, all at scale n.
  std::vector<FieldElement> points;
  /// labels[j] = β^n (a_{j+1} - a_j).
  LabelWord labels;
  /// W_n(a_j) * q^n for 0 <= j <= #X_n - 2.
  std::vector<Integer> weight_numerators;
  Integer weight_denominator;

  std::size_t size() const { return points.size(); }

  Rational weight(std::size_t j) const { return make_rational(weight_numerators.at(j), weight_denominator); }

  WeightTriple triple(std::size_t j) const { return {weight(j), weight(j + 1), weight(j + 2)}; }

  /// Number of triples with three weighted points.
  std::size_t triple_count() const { return size() >= 4 ? size() - 3 : 0; }
};

inline Level initial_level(const PisotField& field, const ProbabilityPair& p) {
  const int m = field.degree();
  Level lv;
  lv.n = 1;
  lv.m = m;
  lv.p = p;
  const FieldElement d1 = FieldElement::beta_power(m, 1) - FieldElement::integer(m, 1);
  lv.points = {FieldElement::zero(m).rescaled(1), d1.divided_by_beta(1), FieldElement::integer(m, 1).rescaled(1)};
  lv.labels = {letter(1), letter(0)};
  lv.weight_numerators = {p.num1(), p.num2()};
  lv.weight_denominator = p.denom();
  return lv;
}

/// Index of each point of `parent` inside its refinement.
inline std::vector<std::size_t> child_index_map(const Level& parent) {
  std::vector<std::size_t> idx(parent.size());
  std::size_t k = 0;
  for (std::size_t j = 0; j < parent.size(); ++j) {
    idx[j] = k;
    if (j + 1 < parent.size()) k += parent.labels[j].index == parent.m ? 1 : 2;
  }
  return idx;
}

/// Rank n+1 from rank n.
inline Level refine(const PisotField& field, const Level& level, const LevelOptions& opts = {}) {
  const int m = level.m;
  const std::size_t count = level.size();
  std::size_t next_count = 1;
  for (Letter l : level.labels) next_count += l.index == m ? 1 : 2;
  if (next_count > opts.max_points)
    throw ResourceCapExceeded("level " + std::to_string(level.n + 1) + " would have " + std::to_string(next_count) +
                              " points (cap " + std::to_string(opts.max_points) + ")");

  const Integer a = level.p.num1();
  const Integer b = level.p.num2();
  const unsigned scale = static_cast<unsigned>(level.n) + 1;
  // d_1 = β - 1 as a numerator at any scale.
  const FieldElement d1 = (FieldElement::beta_power(m, 1) - FieldElement::integer(m, 1)).divided_by_beta(scale);

  Level out;
  out.n = level.n + 1;
  out.m = m;
  out.p = level.p;
  out.weight_denominator = level.weight_denominator * level.p.denom();
  out.points.reserve(next_count);
  out.weight_numerators.reserve(next_count - 1);
  out.labels = apply_sigma(level.labels, m);

  for (std::size_t j = 0; j + 1 < count; ++j) {
    const FieldElement x = level.points[j].rescaled(scale);
    Integer w = a * level.weight_numerators[j];
    if (j > 0 && level.labels[j - 1].index == m) w += b * level.weight_numerators[j - 1];
    const bool merges = level.labels[j].index == m;
    FieldElement shifted = x + d1;
    if (opts.audit) {
      const auto next = level.points[j + 1].rescaled(scale);
      const auto ord = compare(field, shifted, next);
      if (merges != (ord == std::strong_ordering::equal) || ord == std::strong_ordering::greater)
        throw AuditFailure("merge decision at rank " + std::to_string(level.n) + ", index " + std::to_string(j) +
                           " disagrees with exact comparison");
    }
    out.points.push_back(x);
    out.weight_numerators.push_back(std::move(w));
    if (!merges) {
      out.points.push_back(std::move(shifted));
      out.weight_numerators.push_back(b * level.weight_numerators[j]);
    }
  }
  out.points.push_back(level.points.back().rescaled(scale));
  return out;
}

/// Level of rank n (>= 1) built from the initial level.
inline Level build_level(const PisotField& field, const ProbabilityPair& p, int n, const LevelOptions& opts = {}) {
  if (n < 1) throw Error("build_level: rank must be at least 1");
  Level lv = initial_level(field, p);
  while (lv.n < n) lv = refine(field, lv, opts);
  return lv;
}

struct ImbalanceReport {
  int n = 0;
  std::size_t num_points = 0;
  /// max over 0 <= j <= #X_n - 4 of max(r_j, 1/r_j).
  Rational max_ratio;
  std::size_t argmax_index = 0;
};

/// Largest imbalance of consecutive weight sums (w_j + w_{j+1}) / (w_{j+1} + w_{j+2}).
inline ImbalanceReport max_imbalance(const Level& level) {
  if (level.n < 2 || level.size() < 4)
    throw LevelTooSmall("imbalance scan needs rank >= 2 and at least 4 points");
  const auto& w = level.weight_numerators;
  Integer best_hi = 1, best_lo = 1;
  std::size_t best_j = 0;
  bool have = false;
  Integer left, right;
  for (std::size_t j = 0; j + 3 < level.size(); ++j) {
    left = w[j] + w[j + 1];
    right = w[j + 1] + w[j + 2];
    const bool left_big = left >= right;
    const Integer& hi = left_big ? left : right;
    const Integer& lo = left_big ? right : left;
    if (!have || hi * best_lo > best_hi * lo) {
      best_hi = hi;
      best_lo = lo;
      best_j = j;
      have = true;
    }
  }
  return {level.n, level.size(), make_rational(best_hi, best_lo), best_j};
}

struct CheckResult {
  bool passed = true;
  std::optional<std::size_t> index;
  std::string detail;

  explicit operator bool() const { return passed; }

  static CheckResult pass() { return {}; }
  static CheckResult fail(std::size_t j, std::string why) { return {false, j, std::move(why)}; }
};

/// β^n (a_k - a_j) as an element.
inline FieldElement scaled_difference(const Level& level, std::size_t j, std::size_t k) {
  const FieldElement diff = level.points[k] - level.points[j];
  const unsigned n = static_cast<unsigned>(level.n);
  if (diff.scale() >= n) return FieldElement::from_coeffs(level.m, diff.coeffs(), diff.scale() - n);
  return FieldElement::from_coeffs(level.m, diff.coeffs()) * FieldElement::beta_power(level.m, static_cast<int>(n - diff.scale()));
}

/// Label read off the exact gap a_{j+1} - a_j, scaled by β^n.
inline std::optional<int> gap_label(const GapAlphabet& alphabet, const Level& level, std::size_t j) {
  return alphabet.index_of(scaled_difference(level, j, j + 1));
}

/// Every scaled gap β^n (a_{j+1} - a_j) is a letter of the gap alphabet.
inline CheckResult check_gap_lemma(const GapAlphabet& alphabet, const Level& level) {
  for (std::size_t j = 0; j + 1 < level.size(); ++j)
    if (!gap_label(alphabet, level, j))
      return CheckResult::fail(j, "rank " + std::to_string(level.n) + ": scaled gap at index " + std::to_string(j) +
                                      " is not in the gap alphabet");
  return CheckResult::pass();
}

/// Stored labels agree with the exact gaps and with σ^n(d_0).
inline CheckResult check_label_correspondence(const GapAlphabet& alphabet, const Level& level) {
  const LabelWord expected = iterate(level.n, level.m);
  if (expected.size() != level.labels.size() || level.labels.size() + 1 != level.size())
    return CheckResult::fail(0, "rank " + std::to_string(level.n) + ": label word length " +
                                    std::to_string(level.labels.size()) + " vs σ^n(d0) length " +
                                    std::to_string(expected.size()));
  for (std::size_t j = 0; j < expected.size(); ++j) {
    const auto g = gap_label(alphabet, level, j);
    if (!g || *g != level.labels[j].index || level.labels[j] != expected[j])
      return CheckResult::fail(j, "rank " + std::to_string(level.n) + ": label mismatch at index " + std::to_string(j));
  }
  return CheckResult::pass();
}

/// For every j <= #X_n - 3: [a_j, a_{j+1}] ⊆ [a_j, a_j + β^-n] ⊆ [a_j, a_{j+2}].
inline CheckResult check_cover_lemma(const PisotField& field, const Level& level) {
  const FieldElement one = FieldElement::integer(level.m, 1);
  for (std::size_t j = 0; j + 2 < level.size(); ++j) {
    // In units of β^-n the cylinder has length 1.
    const FieldElement g1 = scaled_difference(level, j, j + 1);
    const FieldElement g2 = scaled_difference(level, j, j + 2);
    if (compare(field, g1, one) > 0 || compare(field, one, g2) > 0)
      return CheckResult::fail(j, "rank " + std::to_string(level.n) + ": cylinder at index " + std::to_string(j) +
                                      " is not sandwiched by its two basic intervals");
  }
  return CheckResult::pass();
}

/// Σ W_n = 1 exactly and every weight is positive.
inline CheckResult check_weight_conservation(const Level& level) {
  Integer total = 0;
  for (std::size_t j = 0; j < level.weight_numerators.size(); ++j) {
    if (level.weight_numerators[j] <= 0)
      return CheckResult::fail(j, "rank " + std::to_string(level.n) + ": non-positive weight at index " + std::to_string(j));
    total += level.weight_numerators[j];
  }
  if (total != level.weight_denominator)
    return CheckResult::fail(0, "rank " + std::to_string(level.n) + ": weights sum to " +
                                    make_rational(total, level.weight_denominator).get_str());
  return CheckResult::pass();
}

struct MatrixConsistency {
  CheckResult result;
  std::size_t split = 0;
  std::size_t merge = 0;
  std::size_t tail_merge = 0;
};

/// Applying the label-determined transition to every triple of `parent`
/// reproduces the child triple read from `child` (its refinement).
inline MatrixConsistency check_matrix_consistency(const Level& parent, const Level& child) {
  MatrixConsistency out;
  const auto idx = child_index_map(parent);
  const int m = parent.m;
  for (std::size_t j = 0; j + 3 < parent.size(); ++j) {
    const Letter w1 = parent.labels[j], w2 = parent.labels[j + 1];
    const TransitionMatrix t = child_transition(w1, w2, m, parent.p);
    if (w1.index == m) ++out.merge;
    else if (w2.index == m) ++out.tail_merge;
    else ++out.split;
    const std::size_t c = idx[j] + 1;
    if (c + 2 >= child.weight_numerators.size()) {
      out.result = CheckResult::fail(j, "rank " + std::to_string(parent.n) + ": child triple out of range");
      return out;
    }
    if (t * parent.triple(j) != child.triple(c)) {
      out.result = CheckResult::fail(j, "rank " + std::to_string(parent.n) + ": transition mismatch at index " +
                                            std::to_string(j) + " (labels d" + std::to_string(w1.index) + "d" +
                                            std::to_string(w2.index) + ")");
      return out;
    }
  }
  return out;
}

/// Weight sequences of `a` and `b` are reverses of each other.
inline bool weights_mirrored(const Level& a, const Level& b) {
  const auto& x = a.weight_numerators;
  const auto& y = b.weight_numerators;
  if (x.size() != y.size() || a.weight_denominator != b.weight_denominator) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != y[x.size() - 1 - j]) return false;
  return true;
}

}  // namespace bonacci
