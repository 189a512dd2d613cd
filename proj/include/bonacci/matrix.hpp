#pragma once

#include <array>
#include <string>
#include <string_view>

#include "bonacci/algebra.hpp"
#include "bonacci/substitution.hpp"

namespace bonacci {

/// Probability weight (p1, p2) with p1 + p2 = 1, both rational and positive.
class ProbabilityPair {
 public:
  explicit ProbabilityPair(Rational p1) : p1_(std::move(p1)) {
    p1_.canonicalize();
    if (p1_ <= 0 || p1_ >= 1) throw InvalidProbability("p1 must lie strictly between 0 and 1, got " + p1_.get_str());
    p2_ = 1 - p1_;
  }

  /// Parses "num/den" (or an integer string, which is always rejected as
  /// out of range).  Decimal notation is not accepted.
  static ProbabilityPair parse(std::string_view text) {
    Rational q;
    const std::string s(text);
    if (s.empty() || s.find_first_not_of("0123456789/") != std::string::npos || q.set_str(s, 10) != 0 ||
        q.get_den() == 0)
      throw InvalidProbability("probability must be an exact rational like 1/3, got '" + s + "'");
    return ProbabilityPair(q);
  }

  const Rational& p1() const { return p1_; }
  const Rational& p2() const { return p2_; }

  /// p1 = num1 / denom, p2 = num2 / denom.
  Integer num1() const { return p1_.get_num(); }
  Integer num2() const { return p1_.get_den() - p1_.get_num(); }
  Integer denom() const { return p1_.get_den(); }

  ProbabilityPair reflected() const { return ProbabilityPair(p2_); }
  bool is_uniform() const { return p1_ == Rational(1, 2); }

  friend bool operator==(const ProbabilityPair& a, const ProbabilityPair& b) { return a.p1_ == b.p1_; }

 private:
  Rational p1_, p2_;
};

/// Weights at three consecutive points.
using WeightTriple = std::array<Rational, 3>;

/// (w0 + w1) / (w1 + w2).
inline Rational sum_ratio(const WeightTriple& t) { return (t[0] + t[1]) / (t[1] + t[2]); }

struct TransitionMatrix {
  std::array<std::array<Rational, 3>, 3> e{};

  static TransitionMatrix identity() {
    TransitionMatrix r;
    for (int i = 0; i < 3; ++i) r.e[i][i] = 1;
    return r;
  }

  bool nonnegative() const {
    for (const auto& row : e)
      for (const auto& x : row)
        if (x < 0) return false;
    return true;
  }

  TransitionMatrix operator*(const TransitionMatrix& o) const {
    TransitionMatrix r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.e[i][j] += e[i][k] * o.e[k][j];
    return r;
  }

  WeightTriple operator*(const WeightTriple& w) const {
    WeightTriple r{};
    for (int i = 0; i < 3; ++i) r[i] = e[i][0] * w[0] + e[i][1] * w[1] + e[i][2] * w[2];
    return r;
  }

  TransitionMatrix pow(unsigned k) const {
    TransitionMatrix r = identity(), b = *this;
    for (; k; k >>= 1) {
      if (k & 1) r = r * b;
      b = b * b;
    }
    return r;
  }

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < 3; ++i) {
      s += i ? "; " : "";
      for (int j = 0; j < 3; ++j) s += (j ? " " : "") + e[i][j].get_str();
    }
    return s + "]";
  }
};

inline TransitionMatrix make_matrix(std::array<std::array<Rational, 3>, 3> e) { return TransitionMatrix{std::move(e)}; }

// Child-triple maps for a triple (x0, x1, x2) with labels w1 = t(x0),
// w2 = t(x1), onto the next three points (z1, z2, z3) after x0 one rank
// deeper.

/// w1 != d_m and w2 != d_m: both gaps split.
inline TransitionMatrix split_transition(const ProbabilityPair& p) {
  const Rational z = 0;
  return make_matrix({{{p.p2(), z, z}, {z, p.p1(), z}, {z, p.p2(), z}}});
}

/// w1 w2 = d_m d_1: the new point of x0 lands on x1.
inline TransitionMatrix merge_transition(const ProbabilityPair& p) {
  const Rational z = 0;
  return make_matrix({{{p.p2(), p.p1(), z}, {z, p.p2(), z}, {z, z, p.p1()}}});
}

/// w1 != d_m, w2 = d_m: the new point of x1 lands on x2.
inline TransitionMatrix tail_merge_transition(const ProbabilityPair& p) {
  const Rational z = 0;
  return make_matrix({{{p.p2(), z, z}, {z, p.p1(), z}, {z, p.p2(), p.p1()}}});
}

/// Transition for an arbitrary label pair; d_m is always followed by d_1,
/// so the three cases above are exhaustive for words σ^n(d_0).
inline TransitionMatrix child_transition(Letter w1, Letter w2, int m, const ProbabilityPair& p) {
  check_letter(w1, m);
  check_letter(w2, m);
  const bool m1 = w1.index == m, m2 = w2.index == m;
  if (!m1 && !m2) return split_transition(p);
  if (m1 && w2.index == 1) return merge_transition(p);
  if (!m1 && m2) return tail_merge_transition(p);
  throw InvalidLetter("label pair d" + std::to_string(w1.index) + "d" + std::to_string(w2.index) +
                      " cannot occur in σ^n(d0)");
}

}  // namespace bonacci
