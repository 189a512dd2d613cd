#pragma once

// CSV and JSON rendering of analysis results.

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "bonacci/analysis.hpp"

namespace bonacci {

inline constexpr int kDecimalDigits = 12;

inline std::string exact(const Rational& q) { return q.get_str(); }

inline std::string csv_header() { return "n,num_points,max_ratio_exact,max_ratio_decimal,argmax_index"; }

inline std::string to_csv(const Verdict& v) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : v.series)
    os << r.n << ',' << r.num_points << ',' << exact(r.max_ratio) << ',' << format_decimal(r.max_ratio, kDecimalDigits)
       << ',' << r.argmax_index << '\n';
  return os.str();
}

inline nlohmann::ordered_json to_json(const ProbabilityPair& p) {
  return {{"p1", exact(p.p1())}, {"p2", exact(p.p2())}};
}

inline nlohmann::ordered_json to_json(const Certificate& c) {
  nlohmann::ordered_json j{{"kind", c.kind},
                   {"index", c.index},
                   {"value", exact(c.value)},
                   {"value_decimal", format_decimal(c.value, kDecimalDigits)},
                   {"threshold", exact(c.threshold)}};
  if (c.lower_bound) {
    j["lower_bound"] = exact(*c.lower_bound);
    j["lower_bound_decimal"] = format_decimal(*c.lower_bound, kDecimalDigits);
  }
  return j;
}

inline nlohmann::ordered_json to_json(const Verdict& v) {
  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  for (const auto& r : v.series)
    series.push_back({{"n", r.n},
                      {"num_points", r.num_points},
                      {"max_ratio", exact(r.max_ratio)},
                      {"max_ratio_decimal", format_decimal(r.max_ratio, kDecimalDigits)},
                      {"argmax_index", r.argmax_index}});
  nlohmann::ordered_json j{{"m", v.m},
                   {"p", to_json(v.p)},
                   {"depth", v.depth_requested},
                   {"depth_completed", v.depth_completed},
                   {"verdict", std::string(to_string(v.tag))},
                   {"reflected", v.reflected},
                   {"truncated", v.truncated},
                   {"series", series},
                   {"certificate", v.certificate ? to_json(*v.certificate) : nlohmann::ordered_json(nullptr)}};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

/// One-line summary for stderr in CSV mode.
inline std::string verdict_line(const Verdict& v) {
  std::ostringstream os;
  os << "verdict: " << to_string(v.tag) << " (m=" << v.m << ", p1=" << exact(v.p.p1()) << ", depth "
     << v.depth_completed << "/" << v.depth_requested << ")";
  if (v.certificate)
    os << "; " << v.certificate->kind << " at index " << v.certificate->index << " = "
       << format_decimal(v.certificate->value, kDecimalDigits) << " > " << exact(v.certificate->threshold);
  if (v.reflected) os << "; p reflected to p1 <= p2";
  if (v.truncated) os << "; truncated: " << v.note;
  return os.str();
}

inline nlohmann::ordered_json to_json(const WitnessReport& r) {
  nlohmann::ordered_json j{{"m", r.m},
                   {"p", to_json(r.p)},
                   {"reflected", r.reflected},
                   {"k", r.k},
                   {"rank", r.k * r.m + 2},
                   {"ratio", exact(r.ratio)},
                   {"ratio_decimal", format_decimal(r.ratio, kDecimalDigits)},
                   {"matrix_path_ratio", exact(r.matrix_path_ratio)},
                   {"closed_form_matches_matrix_path", r.ratio == r.matrix_path_ratio}};
  if (r.threshold) j["threshold"] = exact(*r.threshold);
  if (r.cross_validation) {
    j["cross_validation"] = {{"passed", r.cross_validation->passed}, {"detail", r.cross_validation->detail}};
  } else {
    j["cross_validation"] = nullptr;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const MeasureBracket& b) {
  return {{"lower", exact(b.lower)},
          {"upper", exact(b.upper)},
          {"lower_decimal", format_decimal(b.lower, kDecimalDigits)},
          {"upper_decimal", format_decimal(b.upper, kDecimalDigits)},
          {"width", exact(b.width())},
          {"depth", b.depth}};
}

inline nlohmann::ordered_json to_json(const std::vector<SuiteResult>& results) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : results) {
    nlohmann::ordered_json j{{"suite", s.name}, {"passed", s.result.passed}};
    if (!s.result.passed) {
      j["detail"] = s.result.detail;
      j["index"] = s.result.index ? nlohmann::ordered_json(*s.result.index) : nlohmann::ordered_json(nullptr);
    }
    arr.push_back(j);
  }
  return arr;
}

}  // namespace bonacci
