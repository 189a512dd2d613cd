#include <gtest/gtest.h>

#include "bonacci/analysis.hpp"
#include "bonacci/report.hpp"

using namespace bonacci;

namespace {

const ProbabilityPair kHalf{Rational(1, 2)};
const ProbabilityPair kThird{Rational(1, 3)};

RunConfig config(int m, const ProbabilityPair& p, int depth) {
  RunConfig c;
  c.m = m;
  c.p = p;
  c.depth = depth;
  return c;
}

}  // namespace

TEST(Analyze, TribonacciUniformIsCertified) {
  const auto v = analyze(config(3, kHalf, 14));
  EXPECT_EQ(v.tag, VerdictTag::NonDoublingCertified);
  ASSERT_TRUE(v.certificate.has_value());
  EXPECT_EQ(v.certificate->kind, "R_k");
  EXPECT_EQ(v.certificate->index, 1999);
  EXPECT_EQ(v.certificate->value, Rational(2001, 2));
  ASSERT_EQ(v.series.size(), 13u);
  for (const auto& r : v.series)
    if (r.n > 2 && (r.n - 2) % 3 == 0) EXPECT_GE(r.max_ratio, make_rational((r.n - 2) / 3 + 2, 2)) << r.n;
  EXPECT_FALSE(v.truncated);
  EXPECT_FALSE(v.reflected);
}

TEST(Analyze, GoldenUniformIsConsistent) {
  const auto v = analyze(config(2, kHalf, 14));
  EXPECT_EQ(v.tag, VerdictTag::DoublingConsistentToDepth);
  EXPECT_FALSE(v.certificate.has_value());
  EXPECT_EQ(v.depth_completed, 14);
  for (const auto& r : v.series) EXPECT_LE(r.max_ratio, 2);
}

TEST(Analyze, GoldenNonUniformIsCertified) {
  const auto v = analyze(config(2, kThird, 14));
  EXPECT_EQ(v.tag, VerdictTag::NonDoublingCertified);
  ASSERT_TRUE(v.certificate.has_value());
  EXPECT_EQ(v.certificate->kind, "R_ell");
  EXPECT_EQ(v.certificate->index, golden::golden_certificate(kThird, kDefaultThreshold).ell);
  EXPECT_EQ(v.certificate->value, golden::golden_ratio_R(kThird, v.certificate->index));
  ASSERT_TRUE(v.certificate->lower_bound.has_value());
  EXPECT_GT(*v.certificate->lower_bound, kDefaultThreshold);
}

TEST(Analyze, ReflectionIsReported) {
  const auto v = analyze(config(3, ProbabilityPair(Rational(3, 4)), 6));
  EXPECT_TRUE(v.reflected);
  EXPECT_EQ(v.tag, VerdictTag::NonDoublingCertified);
  const auto w = analyze(config(3, ProbabilityPair(Rational(1, 4)), 6));
  EXPECT_EQ(v.certificate->index, w.certificate->index);
  for (std::size_t i = 0; i < v.series.size(); ++i) EXPECT_EQ(v.series[i].max_ratio, w.series[i].max_ratio);
}

TEST(Analyze, CapGivesInconclusivePartialReport) {
  auto c = config(3, kHalf, 14);
  c.max_points = 500;
  const auto v = analyze(c);
  EXPECT_EQ(v.tag, VerdictTag::Inconclusive);
  EXPECT_TRUE(v.truncated);
  EXPECT_LT(v.depth_completed, 14);
  EXPECT_EQ(v.series.size(), static_cast<std::size_t>(v.depth_completed - 1));
  EXPECT_FALSE(v.note.empty());
}

TEST(Analyze, CertifiedVerdictIsMonotoneInDepth) {
  for (int m : {2, 3})
    for (int d = 4; d <= 10; ++d)
      EXPECT_EQ(analyze(config(m, kThird, d)).tag, VerdictTag::NonDoublingCertified) << m << " " << d;
}

TEST(Analyze, InvalidConfig) {
  EXPECT_THROW(analyze(config(3, kHalf, 1)), Error);
  EXPECT_THROW(analyze(config(1, kHalf, 5)), InvalidDegree);
  auto c = config(3, kHalf, 5);
  c.threshold = Rational(1, 2);
  EXPECT_THROW(analyze(c), Error);
}

TEST(Report, CsvIsDeterministicAndWellFormed) {
  const auto v = analyze(config(3, kThird, 8));
  const std::string csv = to_csv(v);
  EXPECT_EQ(csv, to_csv(analyze(config(3, kThird, 8))));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,num_points,max_ratio_exact,max_ratio_decimal,argmax_index");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8);
  EXPECT_NE(csv.find("\n2,5,"), std::string::npos);
}

TEST(Report, JsonMirrorsVerdict) {
  const auto v = analyze(config(2, kThird, 6));
  const auto j = to_json(v);
  EXPECT_EQ(j["m"], 2);
  EXPECT_EQ(j["p"]["p1"], "1/3");
  EXPECT_EQ(j["verdict"], "non-doubling-certified");
  EXPECT_EQ(j["series"].size(), 5u);
  EXPECT_EQ(j["certificate"]["kind"], "R_ell");
  EXPECT_FALSE(j["truncated"].get<bool>());
}

TEST(WitnessReport, KAndThreshold) {
  const auto r = witness_report(3, kHalf, 4, std::nullopt);
  EXPECT_EQ(r.ratio, 3);
  EXPECT_EQ(r.matrix_path_ratio, 3);
  ASSERT_TRUE(r.cross_validation.has_value());
  EXPECT_TRUE(r.cross_validation->passed);
  const auto t = witness_report(3, kHalf, std::nullopt, Rational(10));
  EXPECT_EQ(t.k, 19);
  EXPECT_FALSE(t.cross_validation.has_value());
  EXPECT_THROW(witness_report(2, kHalf, 1, std::nullopt), InvalidDegree);
  EXPECT_THROW(witness_report(3, kHalf, std::nullopt, std::nullopt), Error);
}

TEST(Verify, AllSuitesPass) {
  const auto r3 = verify(3, 10);
  ASSERT_EQ(r3.size(), 6u);
  for (const auto& s : r3) EXPECT_TRUE(s.result) << s.name << ": " << s.result.detail;
  const auto r2 = verify(2, 12);
  ASSERT_EQ(r2.size(), 7u);
  EXPECT_EQ(r2.back().name, "golden-consistency");
  for (const auto& s : r2) EXPECT_TRUE(s.result) << s.name << ": " << s.result.detail;
}

TEST(Verify, NonUniformProbabilities) {
  VerifyOptions o;
  o.p = kThird;
  for (int m : {2, 3, 4})
    for (const auto& s : verify(m, 8, o)) EXPECT_TRUE(s.result) << m << " " << s.name << ": " << s.result.detail;
}

TEST(Verify, FaultsAreLocated) {
  auto failed = [](const std::vector<SuiteResult>& rs, const std::string& name) {
    for (const auto& s : rs)
      if (s.name == name) return !s.result.passed && s.result.index.has_value();
    return false;
  };
  VerifyOptions o;
  o.fault = Fault::Gap;
  EXPECT_TRUE(failed(verify(3, 7, o), "gap-lemma"));
  o.fault = Fault::Label;
  EXPECT_TRUE(failed(verify(3, 7, o), "label-correspondence"));
  o.fault = Fault::Weight;
  EXPECT_TRUE(failed(verify(3, 7, o), "weight-conservation"));
  EXPECT_EQ(parse_fault("gap"), Fault::Gap);
  EXPECT_THROW(parse_fault("bogus"), ParseError);
}

TEST(Endpoints, Grammar) {
  const int m = 3;
  const auto d = gap_alphabet(m);
  const auto f = PisotField::make(m);
  auto eq = [&](const Endpoint& a, const Endpoint& b) { return compare(f, a, b) == std::strong_ordering::equal; };
  EXPECT_TRUE(eq(parse_endpoint(m, "0"), Endpoint::of(FieldElement::zero(m))));
  EXPECT_TRUE(eq(parse_endpoint(m, "1"), Endpoint::of(d[0])));
  EXPECT_TRUE(eq(parse_endpoint(m, "0.101"), Endpoint::of(d[2])));
  EXPECT_TRUE(eq(parse_endpoint(m, "d3"), Endpoint::of(d[3])));
  EXPECT_TRUE(eq(parse_endpoint(m, "1/2*d1"), Endpoint{d[1], 2}));
  EXPECT_TRUE(eq(parse_endpoint(m, "2/4*d1"), Endpoint{d[1], 2}));
  EXPECT_TRUE(eq(parse_endpoint(m, "3*d2"), Endpoint{d[2] * Integer(3), 1}));
  EXPECT_TRUE(eq(parse_endpoint(m, "1/3"), Endpoint{d[0], 3}));
  for (const char* bad : {"", "d4", "x", "1/0", "-1/2", "0.12", "d", "1/2*x1", "1/2*", "0.5"})
    EXPECT_THROW(parse_endpoint(m, bad), ParseError) << bad;
}

TEST(Oracle, Additivity) {
  const auto f = PisotField::make(2);
  const auto whole = cylinder_bounds(f, kHalf, parse_endpoint(2, "0"), parse_endpoint(2, "d1"), 16);
  const auto part = cylinder_bounds(f, kHalf, parse_endpoint(2, "0"), parse_endpoint(2, "d2"), 16);
  const auto diff = cylinder_bounds(f, kHalf, parse_endpoint(2, "d2"), parse_endpoint(2, "d1"), 16);
  EXPECT_TRUE(whole.contains(Rational(2, 3)));
  EXPECT_LE(diff.lower, whole.upper - part.lower);
  EXPECT_GE(diff.upper, whole.lower - part.upper);
  EXPECT_TRUE(diff.contains(Rational(1, 3)));
}
