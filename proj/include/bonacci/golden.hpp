#pragma once

/*
 * The m = 2 (golden ratio) case as a finite state machine on labelled
 * triples.
 *
 * Labels are written over {a0, a, b, D}: a = d_1, b = d_2, D = d_0, and a0
 * marks the first gap of each level.  The modified substitution
 *
 *     a0 -> a0 b,   a -> a b,   b -> a,   D -> a D
 *
 * generates the labels of X_n as σ^(n-1)(a0 D).  Every triple of X_n carries
 * one of six label words, its offsprings in X_{n+1} are read off the image
 * of those three letters, and each (state, offspring) pair carries a fixed
 * 3x3 weight transition.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bonacci/algebra.hpp"
#include "bonacci/levels.hpp"
#include "bonacci/matrix.hpp"
#include "bonacci/substitution.hpp"

namespace bonacci::golden {

enum class Symbol : std::uint8_t { a0, a, b, D };

using Word = std::vector<Symbol>;

inline Word parse_word(std::string_view s) {
  Word w;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 'a' && i + 1 < s.size() && s[i + 1] == '0') {
      w.push_back(Symbol::a0);
      ++i;
    } else if (s[i] == 'a') {
      w.push_back(Symbol::a);
    } else if (s[i] == 'b') {
      w.push_back(Symbol::b);
    } else if (s[i] == 'D') {
      w.push_back(Symbol::D);
    } else {
      throw InvalidLetter(std::string("invalid golden-ratio label '") + s[i] + "'");
    }
  }
  return w;
}

inline std::string to_string(const Word& w) {
  std::string s;
  for (Symbol x : w) {
    switch (x) {
      case Symbol::a0: s += "a0"; break;
      case Symbol::a: s += "a"; break;
      case Symbol::b: s += "b"; break;
      case Symbol::D: s += "D"; break;
    }
  }
  return s;
}

inline Word modified_substitution(const Word& w) {
  Word out;
  out.reserve(w.size() * 2);
  for (Symbol x : w) {
    switch (x) {
      case Symbol::a0: out.insert(out.end(), {Symbol::a0, Symbol::b}); break;
      case Symbol::a: out.insert(out.end(), {Symbol::a, Symbol::b}); break;
      case Symbol::b: out.push_back(Symbol::a); break;
      case Symbol::D: out.insert(out.end(), {Symbol::a, Symbol::D}); break;
      default: throw InvalidLetter("invalid golden-ratio symbol");
    }
  }
  return out;
}

/// σ^(n-1)(a0 D), the labels of X_n (n >= 1).
inline Word level_word(int n) {
  if (n < 1) throw Error("level_word: n must be at least 1");
  Word w{Symbol::a0, Symbol::D};
  for (int i = 1; i < n; ++i) w = modified_substitution(w);
  return w;
}

/// Rewrites a d-label word of an m = 2 level, marking the first gap a0.
inline Word from_labels(const LabelWord& labels) {
  Word w;
  w.reserve(labels.size());
  for (Letter l : labels) {
    if (l.index > 2) throw InvalidLetter("label d" + std::to_string(l.index) + " outside the m=2 alphabet");
    w.push_back(l.index == 0 ? Symbol::D : l.index == 1 ? Symbol::a : Symbol::b);
  }
  if (!w.empty() && w.front() == Symbol::a) w.front() = Symbol::a0;
  return w;
}

enum class TripleState : std::uint8_t { S0, S1, S2, S3, H1, H2 };

inline constexpr std::array<TripleState, 6> kAllStates{TripleState::S0, TripleState::S1, TripleState::S2,
                                                       TripleState::S3, TripleState::H1, TripleState::H2};

inline std::string_view name(TripleState s) {
  switch (s) {
    case TripleState::S0: return "S0";
    case TripleState::S1: return "S1";
    case TripleState::S2: return "S2";
    case TripleState::S3: return "S3";
    case TripleState::H1: return "H1";
    case TripleState::H2: return "H2";
  }
  return "?";
}

inline Word label_word(TripleState s) {
  switch (s) {
    case TripleState::S0: return {Symbol::a0, Symbol::b, Symbol::a};
    case TripleState::S1: return {Symbol::a, Symbol::b, Symbol::a};
    case TripleState::S2: return {Symbol::b, Symbol::a, Symbol::a};
    case TripleState::S3: return {Symbol::b, Symbol::a, Symbol::D};
    case TripleState::H1: return {Symbol::a, Symbol::a, Symbol::b};
    case TripleState::H2: return {Symbol::b, Symbol::a, Symbol::b};
  }
  return {};
}

inline std::optional<TripleState> state_of(const Word& w, std::size_t start = 0) {
  if (start + 3 > w.size()) return std::nullopt;
  const Word window(w.begin() + static_cast<std::ptrdiff_t>(start), w.begin() + static_cast<std::ptrdiff_t>(start) + 3);
  for (TripleState s : kAllStates)
    if (label_word(s) == window) return s;
  return std::nullopt;
}

/// Offset (from z_0 = x_0) of the first offspring window and the number of
/// offsprings, by the label of the parent triple.
inline std::pair<std::size_t, std::size_t> offspring_windows(TripleState s) {
  switch (s) {
    case TripleState::S0: return {0, 3};
    case TripleState::S1:
    case TripleState::H1:
    case TripleState::S3: return {1, 2};
    case TripleState::S2:
    case TripleState::H2: return {1, 1};
  }
  return {0, 0};
}

/// Offspring states read from the image of the triple's labels.
inline std::vector<TripleState> offspring_states(TripleState s) {
  const Word image = modified_substitution(label_word(s));
  const auto [first, count] = offspring_windows(s);
  std::vector<TripleState> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto t = state_of(image, first + i);
    if (!t) throw Error("offspring window of " + std::string(name(s)) + " has no triple state");
    out.push_back(*t);
  }
  return out;
}

struct OffspringEdge {
  TripleState from;
  TripleState to;
  friend bool operator==(const OffspringEdge&, const OffspringEdge&) = default;
};

/// Edges for which a weight transition is tabulated.
inline std::vector<OffspringEdge> tabulated_edges() {
  using enum TripleState;
  return {{S0, S0}, {S0, S2}, {S1, S2}, {S0, H1}, {S1, H1}, {H1, H2},
          {H1, S1}, {S2, S1}, {H2, S1}, {S3, S1}, {S3, S3}};
}

/// Edges derived from the modified substitution.
inline std::vector<OffspringEdge> derived_edges() {
  std::vector<OffspringEdge> out;
  for (TripleState s : kAllStates)
    for (TripleState t : offspring_states(s)) out.push_back({s, t});
  return out;
}

inline TransitionMatrix transition_matrix(TripleState from, TripleState to, const ProbabilityPair& p) {
  using enum TripleState;
  const Rational& p1 = p.p1();
  const Rational& p2 = p.p2();
  const Rational z = 0;
  if (from == S0 && to == S0) return make_matrix({{{p1, z, z}, {p2, z, z}, {z, p1, z}}});
  if ((from == S0 || from == S1) && to == S2) return make_matrix({{{p2, z, z}, {z, p1, z}, {z, p2, p1}}});
  if ((from == S0 || from == S1) && to == H1) return make_matrix({{{z, p1, z}, {z, p2, p1}, {z, z, p2}}});
  if (from == H1 && to == H2) return make_matrix({{{p2, z, z}, {z, p1, z}, {z, p2, z}}});
  // x2 of an H1 triple is not preceded by a b-gap, so it keeps p1 W(x2).
  if (from == H1 && to == S1) return make_matrix({{{z, p1, z}, {z, p2, z}, {z, z, p1}}});
  if ((from == S2 || from == H2 || from == S3) && to == S1)
    return make_matrix({{{p2, p1, z}, {z, p2, z}, {z, z, p1}}});
  if (from == S3 && to == S3) return make_matrix({{{z, p2, z}, {z, z, p1}, {z, z, p2}}});
  throw NoEdge("no offspring edge " + std::string(name(from)) + " -> " + std::string(name(to)));
}

/// Plain-text adjacency list, one "FROM TO" edge per line.
inline std::string export_graph(const std::vector<OffspringEdge>& edges) {
  std::string s;
  for (const auto& e : edges) s += std::string(name(e.from)) + " " + std::string(name(e.to)) + "\n";
  return s;
}

inline constexpr int kMaxPathDepth = 40;

struct Path {
  std::vector<TripleState> states;    // u_2 .. u_n
  std::vector<WeightTriple> weights;  // W(Z_2) .. W(Z_n)
  /// Index of Z_n's first point in X_n.
  std::size_t position = 0;
};

namespace detail {

struct Node {
  TripleState state;
  WeightTriple weights;
  std::size_t position;
  std::size_t parent;  // index into the previous frontier
};

/// Breadth-first walk of the offspring tree from the triples of X_2.  Root
/// weights come from the m = 2 level of rank 2; later weights come from the
/// transition table alone.  `visit(rank, frontier)` sees the nodes of each
/// rank in order of position.
template <typename Visit>
void walk(const PisotField& field, const ProbabilityPair& p, int depth, Visit&& visit) {
  if (field.degree() != 2) throw InvalidDegree("golden-ratio paths need m = 2");
  if (depth < 2) throw Error("path depth must be at least 2");
  if (depth > kMaxPathDepth) throw ResourceCapExceeded("path depth above cap " + std::to_string(kMaxPathDepth));
  const Level root = build_level(field, p, 2);
  Word word = from_labels(root.labels);
  std::vector<Node> frontier;
  for (std::size_t j = 0; j < root.triple_count(); ++j) {
    const auto s = state_of(word, j);
    if (!s) throw Error("rank-2 triple without a state");
    frontier.push_back({*s, root.triple(j), j, 0});
  }
  visit(2, frontier);
  for (int k = 2; k < depth; ++k) {
    // Index in X_{k+1} of each point of X_k: points labelled b have one child.
    std::vector<std::size_t> idx(word.size() + 1);
    for (std::size_t j = 0, pos = 0; j < idx.size(); ++j) {
      idx[j] = pos;
      if (j < word.size()) pos += word[j] == Symbol::b ? 1 : 2;
    }
    std::vector<Node> next;
    next.reserve(frontier.size() * 2);
    for (std::size_t f = 0; f < frontier.size(); ++f) {
      const Node& node = frontier[f];
      const auto [first, count] = offspring_windows(node.state);
      const auto kids = offspring_states(node.state);
      for (std::size_t i = 0; i < count; ++i)
        next.push_back({kids[i], transition_matrix(node.state, kids[i], p) * node.weights,
                        idx[node.position] + first + i, f});
    }
    frontier = std::move(next);
    word = modified_substitution(word);
    visit(k + 1, frontier);
  }
}

}  // namespace detail

/// All paths (Z_k)_{k=2}^n, ordered by the position of Z_n in X_n.
inline std::vector<Path> enumerate_paths(const PisotField& field, const ProbabilityPair& p, int depth) {
  std::vector<std::vector<detail::Node>> ranks;
  detail::walk(field, p, depth, [&](int, const std::vector<detail::Node>& nodes) { ranks.push_back(nodes); });
  std::vector<Path> out;
  out.reserve(ranks.back().size());
  for (std::size_t leaf = 0; leaf < ranks.back().size(); ++leaf) {
    Path path;
    path.position = ranks.back()[leaf].position;
    std::size_t at = leaf;
    for (std::size_t r = ranks.size(); r-- > 0;) {
      const detail::Node& node = ranks[r][at];
      path.states.push_back(node.state);
      path.weights.push_back(node.weights);
      at = node.parent;
    }
    std::reverse(path.states.begin(), path.states.end());
    std::reverse(path.weights.begin(), path.weights.end());
    out.push_back(std::move(path));
  }
  return out;
}

/// (w1 + w2) / (w2 + w3) ∈ [1/2, 2].
inline bool two_balanced(const WeightTriple& t) {
  const Rational r = sum_ratio(t);
  return r >= Rational(1, 2) && r <= 2;
}

/// At p = (1/2, 1/2): H1 triples satisfy w2 = w1 + w3 and H2 triples w2 = w3.
inline bool shape_check(TripleState s, const WeightTriple& t) {
  if (s == TripleState::H1) return t[1] == t[0] + t[2];
  if (s == TripleState::H2) return t[1] == t[2];
  return true;
}

/// The two-step cycle M = M_{S2S1} M_{S1S2}.
inline TransitionMatrix cycle_matrix(const ProbabilityPair& p) {
  return transition_matrix(TripleState::S2, TripleState::S1, p) * transition_matrix(TripleState::S1, TripleState::S2, p);
}

/// Closed form of M^k.
inline TransitionMatrix cycle_power_golden(const ProbabilityPair& p, int k) {
  if (k < 1) throw Error("cycle_power_golden: k must be at least 1");
  const Rational& p1 = p.p1();
  const Rational& p2 = p.p2();
  Rational top = 0, bottom = 0;
  for (int i = 2; i <= k + 1; ++i) top += pow_rational(p1, i) * pow_rational(p2, 2 * k - i);
  for (int i = k; i <= 2 * k - 1; ++i) bottom += pow_rational(p1, i) * pow_rational(p2, 2 * k - i);
  const Rational z = 0;
  return make_matrix({{{pow_rational(p2, 2 * k), top, z},
                       {z, pow_rational(p1, k) * pow_rational(p2, k), z},
                       {z, bottom, pow_rational(p1, 2 * k)}}});
}

/// States u_2 .. u_{2ℓ+2} = (S0 S2)(S1 S2)^(ℓ-1) S1.
inline std::vector<TripleState> divergent_path(int ell) {
  using enum TripleState;
  std::vector<TripleState> s{S0, S2};
  for (int i = 1; i < ell; ++i) s.insert(s.end(), {S1, S2});
  s.push_back(S1);
  return s;
}

/// Sum ratio of W(Z_{2ℓ+2}) = M^ℓ (p1², p1 p2, p1 p2).
inline Rational golden_ratio_R(const ProbabilityPair& p, int ell) {
  if (ell < 1) throw Error("golden_ratio_R: ell must be at least 1");
  const WeightTriple root{p.p1() * p.p1(), p.p1() * p.p2(), p.p1() * p.p2()};
  return sum_ratio(cycle_power_golden(p, ell) * root);
}

/// (1 / (ℓ + 2)) (p2 / p1)^(ℓ - 1).
inline Rational golden_lower_bound(const ProbabilityPair& p, int ell) {
  return pow_rational(p.p2() / p.p1(), ell - 1) / (ell + 2);
}

struct GoldenCertificate {
  int ell = 0;
  Rational ratio;
  Rational lower_bound;
  Rational threshold;
  bool reflected = false;
  ProbabilityPair analysed{Rational(1, 2)};
};

inline constexpr int kDefaultMaxEll = 100'000;

/// First ℓ whose lower bound exceeds the threshold, with R_ℓ checked
/// against that bound exactly.  Requires p ≠ (1/2, 1/2).
inline GoldenCertificate golden_certificate(const ProbabilityPair& p, const Rational& threshold,
                                            int max_ell = kDefaultMaxEll) {
  if (p.is_uniform()) throw Error("no divergence certificate exists for p = (1/2, 1/2)");
  GoldenCertificate c;
  c.threshold = threshold;
  c.reflected = p.p1() > p.p2();
  c.analysed = c.reflected ? p.reflected() : p;
  const Rational ratio = c.analysed.p2() / c.analysed.p1();
  Rational power = 1;  // ratio^(ℓ-1)
  for (int ell = 1; ell <= max_ell; ++ell, power *= ratio) {
    const Rational bound = power / (ell + 2);
    if (bound > threshold) {
      c.ell = ell;
      c.lower_bound = bound;
      c.ratio = golden_ratio_R(c.analysed, ell);
      if (c.ratio < bound) throw Error("R_ell fell below its lower bound at ell=" + std::to_string(ell));
      return c;
    }
  }
  throw ResourceCapExceeded("no ell up to " + std::to_string(max_ell) + " exceeds the threshold");
}

struct BalanceReport {
  int depth = 0;
  std::size_t triples_checked = 0;
  std::size_t unbalanced = 0;
  std::size_t shape_failures = 0;
  Rational max_ratio = 1;  // max of r and 1/r over all checked triples

  bool all_balanced() const { return unbalanced == 0 && shape_failures == 0; }
};

/// Checks every triple of every rank 2..depth, as reached through the
/// offspring tree, for two_balanced and, at p = (1/2, 1/2), the H1/H2 shapes.
inline BalanceReport verify_balanced(const PisotField& field, const ProbabilityPair& p, int depth) {
  BalanceReport rep;
  rep.depth = depth;
  detail::walk(field, p, depth, [&](int, const std::vector<detail::Node>& nodes) {
    for (const auto& node : nodes) {
      ++rep.triples_checked;
      Rational r = sum_ratio(node.weights);
      if (r < 1) r = 1 / r;
      if (r > rep.max_ratio) rep.max_ratio = r;
      if (!two_balanced(node.weights)) ++rep.unbalanced;
      if (p.is_uniform() && !shape_check(node.state, node.weights)) ++rep.shape_failures;
    }
  });
  return rep;
}

}  // namespace bonacci::golden
