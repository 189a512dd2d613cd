#pragma once

// Orchestration behind the command-line tool: the doubling analysis with
// its verdict rule, the witness report, the verification suites and the
// oracle endpoint grammar.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bonacci/algebra.hpp"
#include "bonacci/golden.hpp"
#include "bonacci/levels.hpp"
#include "bonacci/measure.hpp"
#include "bonacci/witness.hpp"

namespace bonacci {

enum class VerdictTag { NonDoublingCertified, DoublingConsistentToDepth, Inconclusive };

inline std::string_view to_string(VerdictTag t) {
  switch (t) {
    case VerdictTag::NonDoublingCertified: return "non-doubling-certified";
    case VerdictTag::DoublingConsistentToDepth: return "doubling-consistent-to-depth";
    case VerdictTag::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct Certificate {
  std::string kind;  // "R_k" (witness path, m >= 3) or "R_ell" (golden ratio)
  int index = 0;
  Rational value;
  Rational threshold;
  std::optional<Rational> lower_bound;
};

inline const Rational kDefaultThreshold{1000};

struct RunConfig {
  int m = 3;
  ProbabilityPair p{Rational(1, 2)};
  int depth = 12;
  Rational threshold = kDefaultThreshold;
  bool audit = false;
  std::size_t max_points = 20'000'000;

  void validate() const {
    if (m < 2) throw InvalidDegree("m must be at least 2");
    if (depth < 2) throw Error("depth must be at least 2");
    if (threshold < 1) throw Error("threshold must be at least 1");
  }
};

struct Verdict {
  int m = 0;
  ProbabilityPair p{Rational(1, 2)};
  int depth_requested = 0;
  int depth_completed = 0;
  std::vector<ImbalanceReport> series;
  VerdictTag tag = VerdictTag::Inconclusive;
  std::optional<Certificate> certificate;
  bool reflected = false;
  bool truncated = false;
  std::string note;
};

/// Builds levels 2..depth, records the per-level imbalance and attaches the
/// exact divergence certificate where one exists.
///
/// Decision rule: non-doubling-certified iff a certificate beats the
/// threshold; doubling-consistent-to-depth iff m = 2, p = (1/2, 1/2) and the
/// complete scan stays <= 2; inconclusive otherwise, including any run cut
/// short by the point cap.
inline Verdict analyze(const RunConfig& cfg) {
  cfg.validate();
  Verdict v;
  v.m = cfg.m;
  v.p = cfg.p;
  v.depth_requested = cfg.depth;
  const PisotField field = PisotField::make(cfg.m);
  const LevelOptions opts{cfg.audit, cfg.max_points};
  Level level = initial_level(field, cfg.p);
  v.depth_completed = 1;
  while (level.n < cfg.depth) {
    try {
      level = refine(field, level, opts);
    } catch (const ResourceCapExceeded& e) {
      v.truncated = true;
      v.note = e.what();
      break;
    }
    v.series.push_back(max_imbalance(level));
    v.depth_completed = level.n;
  }

  if (cfg.m >= 3) {
    const auto c = divergence_certificate(cfg.m, cfg.p, cfg.threshold);
    v.certificate = Certificate{"R_k", c.k, c.ratio, c.threshold, std::nullopt};
    v.reflected = c.reflected;
  } else if (!cfg.p.is_uniform()) {
    const auto c = golden::golden_certificate(cfg.p, cfg.threshold);
    v.certificate = Certificate{"R_ell", c.ell, c.ratio, c.threshold, c.lower_bound};
    v.reflected = c.reflected;
  }

  if (v.truncated) {
    v.tag = VerdictTag::Inconclusive;
  } else if (v.certificate) {
    v.tag = VerdictTag::NonDoublingCertified;
  } else {
    const bool bounded = std::all_of(v.series.begin(), v.series.end(),
                                     [](const ImbalanceReport& r) { return r.max_ratio <= 2; });
    v.tag = bounded ? VerdictTag::DoublingConsistentToDepth : VerdictTag::Inconclusive;
  }
  return v;
}

struct WitnessReport {
  int m = 0;
  ProbabilityPair p{Rational(1, 2)};
  ProbabilityPair analysed{Rational(1, 2)};
  bool reflected = false;
  int k = 0;
  Rational ratio;               // closed form
  Rational matrix_path_ratio;   // sum ratio after k m steps of the matrix path
  std::optional<Rational> threshold;
  std::optional<CheckResult> cross_validation;  // only when k m + 2 <= cross_max_rank
};

inline constexpr int kDefaultCrossMaxRank = 16;

/// Exact R_k for a given k, or the minimal k beating `threshold`.
inline WitnessReport witness_report(int m, const ProbabilityPair& p, std::optional<int> k,
                                    std::optional<Rational> threshold,
                                    int cross_max_rank = kDefaultCrossMaxRank) {
  require_witness_degree(m);
  WitnessReport r;
  r.m = m;
  r.p = p;
  r.reflected = p.p1() > p.p2();
  r.analysed = r.reflected ? p.reflected() : p;
  if (k) {
    if (*k < 1) throw Error("k must be at least 1");
    r.k = *k;
  } else if (threshold) {
    r.threshold = threshold;
    r.k = divergence_certificate(m, p, *threshold).k;
  } else {
    throw Error("witness_report: give either k or a threshold");
  }
  r.ratio = witness_ratio(m, r.analysed, r.k);
  r.matrix_path_ratio = sum_ratio(witness_after_periods(m, r.analysed, r.k).weights);
  const int n = r.k * m + 2;
  if (n <= cross_max_rank) {
    const PisotField field = PisotField::make(m);
    r.cross_validation = cross_validate(field, build_level(field, r.analysed, n), r.k);
  }
  return r;
}

enum class Fault { None, Label, Gap, Weight };

inline Fault parse_fault(std::string_view s) {
  if (s == "none") return Fault::None;
  if (s == "label") return Fault::Label;
  if (s == "gap") return Fault::Gap;
  if (s == "weight") return Fault::Weight;
  throw ParseError("unknown fault kind '" + std::string(s) + "' (expected none, label, gap or weight)");
}

/// Corrupts a copy of the level for the verification harness.
inline Level inject_fault(const Level& level, Fault fault) {
  Level bad = level;
  switch (fault) {
    case Fault::None: break;
    case Fault::Label:
      for (std::size_t j = 0; j + 1 < bad.labels.size(); ++j)
        if (bad.labels[j] != bad.labels[j + 1]) {
          std::swap(bad.labels[j], bad.labels[j + 1]);
          break;
        }
      break;
    case Fault::Gap: {
      // Move a_1 so that the first gap becomes (d_1 + d_2) / β^n.
      const auto a = gap_alphabet(bad.m);
      bad.points[1] = bad.points[0] + (a[1] + a[2]).divided_by_beta(static_cast<unsigned>(bad.n));
      break;
    }
    case Fault::Weight: bad.weight_numerators[0] += 1; break;
  }
  return bad;
}

struct SuiteResult {
  std::string name;
  CheckResult result;
};

struct VerifyOptions {
  ProbabilityPair p{Rational(1, 2)};
  Fault fault = Fault::None;
  int oracle_rank = 4;    // levels checked against the cylinder oracle
  int oracle_depth = 12;  // cylinder depth
};

namespace detail {

template <typename Check>
CheckResult over_levels(const std::vector<Level>& levels, Check&& check) {
  for (const auto& lv : levels)
    if (CheckResult r = check(lv); !r) return r;
  return CheckResult::pass();
}

inline CheckResult golden_consistency(const PisotField& field, const std::vector<Level>& levels,
                                      const ProbabilityPair& p) {
  auto derived = golden::derived_edges();
  auto table = golden::tabulated_edges();
  auto key = [](const golden::OffspringEdge& e) { return std::pair(int(e.from), int(e.to)); };
  auto by_key = [&](const auto& x, const auto& y) { return key(x) < key(y); };
  std::sort(derived.begin(), derived.end(), by_key);
  std::sort(table.begin(), table.end(), by_key);
  if (derived != table) return CheckResult::fail(0, "offspring edges derived from the substitution differ from the table");
  const int depth = std::min<int>(levels.back().n, 14);
  if (depth < 2) return CheckResult::pass();
  const auto paths = golden::enumerate_paths(field, p, depth);
  const Level& lv = levels[static_cast<std::size_t>(depth - 1)];
  const golden::Word word = golden::from_labels(lv.labels);
  if (paths.size() != lv.triple_count())
    return CheckResult::fail(0, "rank " + std::to_string(depth) + ": " + std::to_string(paths.size()) +
                                    " paths for " + std::to_string(lv.triple_count()) + " triples");
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& path = paths[i];
    if (path.position != i || golden::state_of(word, i) != path.states.back() || lv.triple(i) != path.weights.back())
      return CheckResult::fail(i, "rank " + std::to_string(depth) + ": path to triple " + std::to_string(i) +
                                      " disagrees with the level");
  }
  return CheckResult::pass();
}

}  // namespace detail

/// Runs the verification suites over levels 1..depth.  With a fault
/// injected, the top level is corrupted before the checks run.
inline std::vector<SuiteResult> verify(int m, int depth, const VerifyOptions& opts = {}) {
  if (depth < 2) throw Error("verify: depth must be at least 2");
  const PisotField field = PisotField::make(m);
  const GapAlphabet alphabet = gap_alphabet(field);
  std::vector<Level> levels{initial_level(field, opts.p)};
  while (levels.back().n < depth) levels.push_back(refine(field, levels.back()));
  levels.back() = inject_fault(levels.back(), opts.fault);

  std::vector<SuiteResult> out;
  out.push_back({"gap-lemma", detail::over_levels(levels, [&](const Level& lv) { return check_gap_lemma(alphabet, lv); })});
  out.push_back({"label-correspondence",
                 detail::over_levels(levels, [&](const Level& lv) { return check_label_correspondence(alphabet, lv); })});
  out.push_back({"cover-lemma", detail::over_levels(levels, [&](const Level& lv) { return check_cover_lemma(field, lv); })});
  out.push_back({"weight-conservation", detail::over_levels(levels, [](const Level& lv) { return check_weight_conservation(lv); })});

  CheckResult matrix = CheckResult::pass();
  for (std::size_t i = 0; i + 1 < levels.size() && matrix; ++i)
    matrix = check_matrix_consistency(levels[i], levels[i + 1]).result;
  out.push_back({"matrix-consistency", matrix});

  CheckResult oracle = CheckResult::pass();
  const PrefixMeasures pm = prefix_measures(m, opts.p);
  const FieldElement zero = FieldElement::zero(m);
  for (int i = 1; i <= m && oracle; ++i) {
    const auto br = cylinder_bounds(field, opts.p, zero, alphabet[static_cast<std::size_t>(i)], opts.oracle_depth);
    if (!br.contains(pm[static_cast<std::size_t>(i)]))
      oracle = CheckResult::fail(static_cast<std::size_t>(i), "c_" + std::to_string(i) + " outside its oracle bracket");
  }
  for (const auto& lv : levels) {
    if (!oracle || lv.n > opts.oracle_rank) break;
    const auto mu = basic_interval_measures(lv, pm);
    for (std::size_t j = 0; j < mu.size() && oracle; ++j) {
      const auto br = cylinder_bounds(field, opts.p, lv.points[j], lv.points[j + 1], opts.oracle_depth);
      if (!br.contains(mu[j]))
        oracle = CheckResult::fail(j, "rank " + std::to_string(lv.n) + ": basic interval " + std::to_string(j) +
                                          " measure outside its oracle bracket");
    }
    if (oracle && lv.n >= 2) oracle = check_sandwich(lv, pm);
  }
  out.push_back({"oracle-containment", oracle});

  if (m == 2) out.push_back({"golden-consistency", detail::golden_consistency(field, levels, opts.p)});
  return out;
}

/// Oracle interval endpoint: "0", "1", a β-digit string "0.1011", a gap
/// letter "d<j>", or a rational multiple "N/D*d<j>", "N*d<j>", "N/D".
inline Endpoint parse_endpoint(int m, std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw ParseError("empty interval endpoint");
  if (s.rfind("0.", 0) == 0) return Endpoint::of(FieldElement::from_beta_digits(m, s));
  Rational factor = 1;
  std::string letter_part = s;
  if (const auto star = s.find('*'); star != std::string::npos) {
    if (factor.set_str(s.substr(0, star), 10) != 0 || factor.get_den() == 0)
      throw ParseError("malformed factor in endpoint '" + s + "'");
    factor.canonicalize();
    letter_part = s.substr(star + 1);
  } else if (s[0] != 'd') {
    if (s.find_first_not_of("0123456789/") != std::string::npos || factor.set_str(s, 10) != 0 ||
        factor.get_den() == 0)
      throw ParseError("malformed endpoint '" + s + "'");
    factor.canonicalize();
    letter_part = "d0";
  }
  if (letter_part.size() < 2 || letter_part[0] != 'd' ||
      letter_part.find_first_not_of("0123456789", 1) != std::string::npos)
    throw ParseError("malformed gap letter in endpoint '" + s + "'");
  const int j = std::stoi(letter_part.substr(1));
  if (j > m) throw ParseError("gap letter d" + std::to_string(j) + " not defined for m=" + std::to_string(m));
  if (factor < 0) throw ParseError("negative endpoint '" + s + "'");
  const GapAlphabet a = gap_alphabet(m);
  return {a[static_cast<std::size_t>(j)] * factor.get_num(), factor.get_den()};
}

}  // namespace bonacci
