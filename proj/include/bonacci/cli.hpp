#pragma once

// Command-line front end.  `run_cli` parses arguments, runs one subcommand
// and returns the process exit code.
//
// Exit codes: 0 completed, 1 error, 2 usage error, 3 resource cap hit
// (partial report written), 4 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bonacci/analysis.hpp"
#include "bonacci/golden.hpp"
#include "bonacci/report.hpp"

namespace bonacci::cli {

enum ExitCode : int { kOk = 0, kError = 1, kUsage = 2, kCapped = 3, kVerifyFailed = 4 };

/// Positive exact rational such as "1000" or "201/2".
inline Rational parse_positive_rational(const std::string& s, const char* what) {
  Rational q;
  if (s.empty() || s.find_first_not_of("0123456789/") != std::string::npos || q.set_str(s, 10) != 0 ||
      q.get_den() == 0)
    throw ParseError(std::string(what) + " must be an exact rational like 1000 or 201/2, got '" + s + "'");
  q.canonicalize();
  if (q <= 0) throw ParseError(std::string(what) + " must be positive");
  return q;
}

struct Options {
  int m = 3;
  std::string p1 = "1/2";
  int depth = 12;
  std::string threshold = "1000";
  std::string format;
  std::string out;
  bool audit = false;
  std::size_t max_points = 20'000'000;
  std::optional<int> k;
  std::optional<int> ell;
  bool graph = false;
  std::optional<int> balance_depth;
  std::string fault = "none";
  std::vector<std::string> interval;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Exact analysis of the doubling property of m-bonacci self-similar measures", "bonacci_cli"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* sub) {
      sub->add_option("--m", o.m, "Degree m >= 2 of the m-bonacci number")->required();
      sub->add_option("--p1", o.p1, "Probability p1 as an exact rational, e.g. 1/3");
      sub->add_option("--out", o.out, "Write the report to FILE instead of stdout");
    };

    auto* analyze = app.add_subcommand("analyze", "Scan levels 2..depth and certify (non-)doubling");
    add_common(analyze);
    analyze->add_option("--depth", o.depth, "Highest rank n to build")->check(CLI::Range(2, 64));
    analyze->add_option("--threshold", o.threshold, "Certificate threshold (exact rational)");
    analyze->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    analyze->add_flag("--audit", o.audit, "Check every merge of coinciding points exactly");
    analyze->add_option("--max-points", o.max_points, "Cap on the number of points of a level");

    auto* witness = app.add_subcommand("witness", "Exact R_k along the witness path (m >= 3)");
    add_common(witness);
    auto* k_opt = witness->add_option("--k", o.k, "Number of periods")->check(CLI::PositiveNumber);
    witness->add_option("--threshold", o.threshold, "Find the smallest k with R_k above this")->excludes(k_opt);
    witness->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* golden_cmd = app.add_subcommand("golden", "Golden-ratio case (m = 2): offspring graph and R_ell");
    golden_cmd->add_option("--m", o.m, "Must be 2")->default_val(2);
    golden_cmd->add_option("--p1", o.p1, "Probability p1 as an exact rational");
    golden_cmd->add_option("--out", o.out, "Write the report to FILE instead of stdout");
    golden_cmd->add_flag("--graph", o.graph, "Print the offspring graph as FROM TO lines");
    auto* ell_opt = golden_cmd->add_option("--ell", o.ell, "Evaluate R_ell for this ell")->check(CLI::PositiveNumber);
    golden_cmd->add_option("--threshold", o.threshold, "Certificate threshold")->excludes(ell_opt);
    golden_cmd->add_option("--balance", o.balance_depth, "Check 2-balance of all triples up to this rank")
        ->check(CLI::Range(2, golden::kMaxPathDepth));

    auto* verify_cmd = app.add_subcommand("verify", "Run the exact verification suites");
    add_common(verify_cmd);
    verify_cmd->add_option("--depth", o.depth, "Highest rank n to check")->check(CLI::Range(2, 24));
    verify_cmd->add_option("--inject-fault", o.fault, "Corrupt the top level: none, label, gap or weight")
        ->check(CLI::IsMember({"none", "label", "gap", "weight"}));
    verify_cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* oracle = app.add_subcommand("oracle", "Cylinder bracket on the measure of an interval");
    add_common(oracle);
    oracle->add_option("--interval", o.interval, "Endpoints A B: 0, 1, 0.0101, dJ, N/D*dJ, N/D")
        ->expected(2)
        ->required();
    oracle->add_option("--depth", o.depth, "Cylinder depth")->check(CLI::Range(1, kMaxOracleDepth));

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out_, err_) == 0 ? kOk : kUsage;
    }

    try {
      if (*analyze) return cmd_analyze(o);
      if (*witness) return cmd_witness(o, k_opt->count() > 0);
      if (*golden_cmd) return cmd_golden(o, ell_opt->count() > 0);
      if (*verify_cmd) return cmd_verify(o);
      if (*oracle) return cmd_oracle(o);
    } catch (const ResourceCapExceeded& e) {
      err_ << "error: " << e.what() << '\n';
      return kCapped;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kError;
    }
    return kUsage;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;

  void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(o.out);
    if (!f) throw Error("cannot open output file '" + o.out + "'");
    f << text;
  }

  int cmd_analyze(const Options& o) {
    RunConfig cfg;
    cfg.m = o.m;
    cfg.p = ProbabilityPair::parse(o.p1);
    cfg.depth = o.depth;
    cfg.threshold = parse_positive_rational(o.threshold, "threshold");
    cfg.audit = o.audit;
    cfg.max_points = o.max_points;
    const Verdict v = analyze(cfg);
    if (o.format == "json") {
      emit(o, to_json(v).dump(2) + "\n");
    } else {
      emit(o, to_csv(v));
      err_ << verdict_line(v) << '\n';
    }
    return v.truncated ? kCapped : kOk;
  }

  int cmd_witness(const Options& o, bool has_k) {
    if (o.m < 3)
      throw InvalidDegree("the witness path needs m >= 3; for m = 2 use the 'golden' subcommand");
    const ProbabilityPair p = ProbabilityPair::parse(o.p1);
    std::optional<int> k;
    std::optional<Rational> threshold;
    if (has_k) k = o.k;
    else threshold = parse_positive_rational(o.threshold, "threshold");
    const WitnessReport r = witness_report(o.m, p, k, threshold);
    if (o.format == "json") {
      emit(o, to_json(r).dump(2) + "\n");
      return kOk;
    }
    std::ostringstream os;
    os << "m = " << r.m << ", p = (" << exact(r.p.p1()) << ", " << exact(r.p.p2()) << ")";
    if (r.reflected) os << ", reflected to (" << exact(r.analysed.p1()) << ", " << exact(r.analysed.p2()) << ")";
    os << '\n';
    if (r.threshold) os << "smallest k with R_k > " << exact(*r.threshold) << ": " << r.k << '\n';
    os << "R_" << r.k << " = " << exact(r.ratio) << " ≈ " << format_decimal(r.ratio, kDecimalDigits) << '\n';
    os << "matrix path ratio at rank " << r.k * r.m + 2 << ": " << exact(r.matrix_path_ratio)
       << (r.matrix_path_ratio == r.ratio ? " (matches)" : " (MISMATCH)") << '\n';
    if (r.cross_validation)
      os << "cross-validation against the full level: "
         << (r.cross_validation->passed ? "PASS" : "FAIL: " + r.cross_validation->detail) << '\n';
    else
      os << "cross-validation against the full level: skipped (rank above " << kDefaultCrossMaxRank << ")\n";
    emit(o, os.str());
    const bool ok = r.matrix_path_ratio == r.ratio && (!r.cross_validation || r.cross_validation->passed);
    return ok ? kOk : kVerifyFailed;
  }

  int cmd_golden(const Options& o, bool has_ell) {
    if (o.m != 2) throw InvalidDegree("the golden subcommand is for m = 2; use 'witness' for m >= 3");
    std::ostringstream os;
    if (o.graph) os << golden::export_graph(golden::derived_edges());
    const ProbabilityPair p = ProbabilityPair::parse(o.p1);
    if (o.balance_depth) {
      const PisotField field = PisotField::make(2);
      const auto rep = golden::verify_balanced(field, p, *o.balance_depth);
      os << "balance to rank " << rep.depth << ": " << rep.triples_checked << " triples, " << rep.unbalanced
         << " outside [1/2, 2], " << rep.shape_failures << " shape failures, max ratio " << exact(rep.max_ratio)
         << '\n';
    }
    if (has_ell) {
      const ProbabilityPair q = p.p1() > p.p2() ? p.reflected() : p;
      const Rational r = golden::golden_ratio_R(q, *o.ell);
      const Rational lb = golden::golden_lower_bound(q, *o.ell);
      os << "R_" << *o.ell << " = " << exact(r) << " ≈ " << format_decimal(r, kDecimalDigits) << "; lower bound "
         << exact(lb) << " ≈ " << format_decimal(lb, kDecimalDigits) << '\n';
    } else if (!p.is_uniform()) {
      const auto c = golden::golden_certificate(p, parse_positive_rational(o.threshold, "threshold"));
      os << "certificate: ell = " << c.ell << ", R_ell = " << exact(c.ratio) << " ≈ "
         << format_decimal(c.ratio, kDecimalDigits) << ", lower bound " << exact(c.lower_bound) << " ≈ "
         << format_decimal(c.lower_bound, kDecimalDigits) << " > " << exact(c.threshold)
         << (c.reflected ? " (p reflected)" : "") << '\n';
    } else if (!o.graph && !o.balance_depth) {
      os << "p = (1/2, 1/2): no divergence certificate; run with --balance DEPTH to check 2-balance\n";
    }
    emit(o, os.str());
    return kOk;
  }

  int cmd_verify(const Options& o) {
    VerifyOptions vo;
    vo.p = ProbabilityPair::parse(o.p1);
    vo.fault = parse_fault(o.fault);
    const auto results = verify(o.m, o.depth, vo);
    bool all = true;
    for (const auto& s : results) all = all && s.result.passed;
    if (o.format == "json") {
      emit(o, nlohmann::ordered_json{{"m", o.m}, {"depth", o.depth}, {"passed", all}, {"suites", to_json(results)}}.dump(2) + "\n");
    } else {
      std::ostringstream os;
      for (const auto& s : results) {
        os << (s.result.passed ? "PASS " : "FAIL ") << s.name;
        if (!s.result.passed) {
          os << ": " << s.result.detail;
          if (s.result.index) os << " (index " << *s.result.index << ")";
        }
        os << '\n';
      }
      emit(o, os.str());
    }
    return all ? kOk : kVerifyFailed;
  }

  int cmd_oracle(const Options& o) {
    const ProbabilityPair p = ProbabilityPair::parse(o.p1);
    const PisotField field = PisotField::make(o.m);
    const Endpoint a = parse_endpoint(o.m, o.interval.at(0));
    const Endpoint b = parse_endpoint(o.m, o.interval.at(1));
    const MeasureBracket br = cylinder_bounds(field, p, a, b, o.depth);
    nlohmann::ordered_json j = to_json(br);
    j["m"] = o.m;
    j["p"] = to_json(p);
    j["interval"] = o.interval;
    emit(o, j.dump(2) + "\n");
    return kOk;
  }
};

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(argc, argv);
}

}  // namespace bonacci::cli
