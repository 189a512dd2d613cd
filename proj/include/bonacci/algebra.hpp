#pragma once

/*
 * Exact arithmetic in Z[β] for the m-bonacci Pisot number β, the real root
 * in (1,2) of
 *
 *     P(x) = x^m - x^(m-1) - ... - x - 1.
 *
 * An element is stored as an integer numerator c_0 + c_1 β + ... + c_{m-1} β^(m-1)
 * together with a scale n, denoting numerator / β^n.  Numerators are kept
 * reduced modulo the relation β^m = 1 + β + ... + β^(m-1), so an element is
 * zero exactly when its numerator vector is zero.
 *
 * Signs are certified with a dyadic enclosure [lo, hi] / 2^K of β: the
 * numerator is evaluated in interval arithmetic (all integer, scaled by
 * 2^(K(m-1))) and the enclosure is bisected further until the interval
 * excludes zero.
 */

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bonacci/errors.hpp"

namespace bonacci {

using Integer = mpz_class;
using Rational = mpq_class;

/// Closed rational interval [lo, hi].
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool disjoint_from(const RationalInterval& o) const { return hi < o.lo || o.hi < lo; }
};

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer pow_integer(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow_rational(const Rational& base, long e) {
  if (e < 0) {
    if (base == 0) throw Error("pow_rational: zero to a negative power");
    return pow_rational(Rational(1) / base, -e);
  }
  Rational r(pow_integer(base.get_num(), static_cast<unsigned long>(e)),
             pow_integer(base.get_den(), static_cast<unsigned long>(e)));
  r.canonicalize();
  return r;
}

/// Rewrites an integer polynomial in β to degree < m using β^m = Σ_{j<m} β^j.
inline std::vector<Integer> reduce(std::vector<Integer> coeffs, int m) {
  const auto mm = static_cast<std::size_t>(m);
  for (std::size_t k = coeffs.size(); k-- > mm;) {
    if (coeffs[k] == 0) continue;
    const Integer t = coeffs[k];
    for (std::size_t j = 0; j < mm; ++j) coeffs[k - mm + j] += t;
  }
  coeffs.resize(mm);
  return coeffs;
}

class FieldElement;

/// Number-field data for β: degree, minimal polynomial and a certified
/// isolating enclosure.  Values are immutable; refinement returns a copy.
class PisotField {
 public:
  static constexpr unsigned kDefaultBits = 128;
  static constexpr unsigned kMaxBits = 1u << 14;

  static PisotField make(int m, unsigned bits = kDefaultBits) {
    if (m < 2) throw InvalidDegree("degree m must be at least 2, got " + std::to_string(m));
    if (m > 200) throw InvalidDegree("degree m above 200 is not supported");
    PisotField f;
    f.m_ = m;
    f.poly_.assign(static_cast<std::size_t>(m) + 1, Integer(-1));
    f.poly_.back() = 1;
    f.bits_ = 0;
    f.lo_ = 1;
    f.hi_ = 2;
    f.bisect_to(std::max<unsigned>(bits, static_cast<unsigned>(m) + 16));
    return f;
  }

  int degree() const { return m_; }

  /// Coefficients of P, lowest degree first (length m + 1).
  const std::vector<Integer>& min_poly() const { return poly_; }

  unsigned bits() const { return bits_; }

  RationalInterval enclosure() const {
    const Integer den = pow_integer(Integer(2), bits_);
    return {make_rational(lo_, den), make_rational(hi_, den)};
  }

  PisotField refined(unsigned bits) const {
    PisotField f = *this;
    f.bisect_to(bits);
    return f;
  }

  /// A copy whose enclosure is narrower than `width` (> 0).
  PisotField refined_below(const Rational& width) const {
    if (width <= 0) throw Error("refined_below: width must be positive");
    PisotField f = *this;
    while (f.enclosure().width() >= width) f.bisect_to(f.bits_ + 8);
    return f;
  }

  /// Evaluates P at a rational point exactly.
  Rational eval_poly(const Rational& x) const {
    Rational acc = 0;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) acc = acc * x + Rational(*it);
    return acc;
  }

  /// Interval enclosure of Σ c_i β^i over the current β enclosure.
  RationalInterval evaluate(std::span<const Integer> coeffs) const {
    auto [lo, hi] = scaled_bounds(coeffs);
    const Integer den = pow_integer(Integer(2), static_cast<unsigned long>(bits_) * (m_ - 1));
    return {make_rational(lo, den), make_rational(hi, den)};
  }

  /// Sign of Σ c_i β^i if the current enclosure decides it.
  std::optional<int> try_sign(std::span<const Integer> coeffs) const {
    if (std::all_of(coeffs.begin(), coeffs.end(), [](const Integer& c) { return c == 0; }))
      return 0;
    auto [lo, hi] = scaled_bounds(coeffs);
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    return std::nullopt;
  }

  /// Certified sign of Σ c_i β^i.  A zero vector is zero; a nonzero vector
  /// is refined until its enclosure excludes zero.
  int sign(std::span<const Integer> coeffs) const {
    if (auto s = try_sign(coeffs)) return *s;
    PisotField f = *this;
    while (f.bits_ < kMaxBits) {
      f.bisect_to(std::min(kMaxBits, f.bits_ * 2));
      if (auto s = f.try_sign(coeffs)) return *s;
    }
    throw CertificationError(
        "nonzero reduced vector not separated from zero at " + std::to_string(kMaxBits) +
        " bits; the power basis of β may be dependent");
  }

 private:
  PisotField() = default;

  void bisect_to(unsigned bits) {
    while (bits_ < bits) {
      const Integer mid = lo_ + hi_;
      lo_ *= 2;
      hi_ *= 2;
      ++bits_;
      const int s = sgn(poly_scaled(mid));
      if (s == 0) throw Error("rational root of the m-bonacci polynomial");
      (s < 0 ? lo_ : hi_) = mid;
    }
    rebuild_powers();
  }

  // P(x / 2^K) * 2^(K m) for the current K.
  Integer poly_scaled(const Integer& x) const {
    Integer acc = 0;
    const Integer two_k = pow_integer(Integer(2), bits_);
    // Horner in x with each step shifted by 2^K: Σ P_i x^i (2^K)^(m-i).
    Integer shift = 1;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) {
      acc = acc * x + *it * shift;
      shift *= two_k;
    }
    return acc;
  }

  void rebuild_powers() {
    const auto mm = static_cast<std::size_t>(m_);
    lo_pow_.assign(mm, Integer(0));
    hi_pow_.assign(mm, Integer(0));
    for (std::size_t i = 0; i < mm; ++i) {
      const Integer pad = pow_integer(Integer(2), static_cast<unsigned long>(bits_) * (mm - 1 - i));
      lo_pow_[i] = pow_integer(lo_, i) * pad;
      hi_pow_[i] = pow_integer(hi_, i) * pad;
    }
  }

  std::pair<Integer, Integer> scaled_bounds(std::span<const Integer> coeffs) const {
    Integer lo = 0, hi = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0) continue;
      if (coeffs[i] > 0) {
        lo += coeffs[i] * lo_pow_[i];
        hi += coeffs[i] * hi_pow_[i];
      } else {
        lo += coeffs[i] * hi_pow_[i];
        hi += coeffs[i] * lo_pow_[i];
      }
    }
    return {lo, hi};
  }

  int m_ = 0;
  unsigned bits_ = 0;
  Integer lo_, hi_;
  std::vector<Integer> poly_;
  std::vector<Integer> lo_pow_, hi_pow_;
};

/// Element (c_0 + c_1 β + ... + c_{m-1} β^(m-1)) / β^scale of Z[β].
class FieldElement {
 public:
  FieldElement() = default;

  static FieldElement zero(int m) { return FieldElement(std::vector<Integer>(static_cast<std::size_t>(m)), 0); }

  static FieldElement integer(int m, const Integer& v) {
    auto e = zero(m);
    e.coeffs_[0] = v;
    return e;
  }

  /// β^k; negative k gives 1 / β^|k|.
  static FieldElement beta_power(int m, int k) {
    if (k < 0) return integer(m, 1).divided_by_beta(static_cast<unsigned>(-k));
    std::vector<Integer> raw(static_cast<std::size_t>(k) + 1);
    raw.back() = 1;
    return from_coeffs(m, std::move(raw));
  }

  static FieldElement from_coeffs(int m, std::vector<Integer> raw, unsigned scale = 0) {
    if (m < 2) throw InvalidDegree("degree m must be at least 2");
    return FieldElement(reduce(std::move(raw), m), scale);
  }

  /// Parses a β-adic string "0.a_1a_2...a_n" with digits 0/1, the value
  /// Σ a_j / β^j.  Plain "0" and "1" are accepted too.
  static FieldElement from_beta_digits(int m, std::string_view s) {
    if (s == "0") return zero(m);
    if (s == "1") return integer(m, 1);
    if (s.size() < 2 || s.substr(0, 2) != "0.") throw ParseError("expected β-digit string 0.xxx, got '" + std::string(s) + "'");
    const auto digits = s.substr(2);
    if (digits.empty()) throw ParseError("empty β-digit string");
    std::vector<Integer> raw(digits.size());
    for (std::size_t j = 0; j < digits.size(); ++j) {
      if (digits[j] != '0' && digits[j] != '1') throw ParseError("β-digits must be 0 or 1 in '" + std::string(s) + "'");
      // a_{j+1} / β^(j+1) = a_{j+1} β^(n-j-1) / β^n
      raw[digits.size() - 1 - j] = digits[j] - '0';
    }
    return from_coeffs(m, std::move(raw), static_cast<unsigned>(digits.size()));
  }

  int degree() const { return static_cast<int>(coeffs_.size()); }
  unsigned scale() const { return scale_; }
  const std::vector<Integer>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
  }

  /// Value multiplied by β (numerator multiplied, scale unchanged).
  FieldElement times_beta() const {
    FieldElement r = *this;
    r.numerator_times_beta();
    return r;
  }

  FieldElement divided_by_beta(unsigned k = 1) const {
    FieldElement r = *this;
    r.scale_ += k;
    return r;
  }

  /// Same value expressed at a larger scale.
  FieldElement rescaled(unsigned scale) const {
    if (scale < scale_) throw Error("rescaled: target scale below current scale");
    FieldElement r = *this;
    for (unsigned i = scale_; i < scale; ++i) r.numerator_times_beta();
    r.scale_ = scale;
    return r;
  }

  FieldElement operator-() const {
    FieldElement r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return combine(a, b, [](Integer& x, const Integer& y) { x += y; });
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return combine(a, b, [](Integer& x, const Integer& y) { x -= y; });
  }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same_degree(a, b);
    std::vector<Integer> raw(a.coeffs_.size() * 2 - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) raw[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return FieldElement(reduce(std::move(raw), a.degree()), a.scale_ + b.scale_);
  }

  friend FieldElement operator*(const FieldElement& a, const Integer& k) {
    FieldElement r = a;
    for (auto& c : r.coeffs_) c *= k;
    return r;
  }
  friend FieldElement operator*(const Integer& k, const FieldElement& a) { return a * k; }

  /// Exact equality of values (scales are aligned first).
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    if (a.scale_ == b.scale_) return a.coeffs_ == b.coeffs_;
    return (a - b).is_zero();
  }

  std::string to_string() const {
    std::string s = "(";
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      if (!first) s += coeffs_[i] > 0 ? " + " : " - ";
      else if (coeffs_[i] < 0) s += "-";
      first = false;
      const Integer mag = abs(coeffs_[i]);
      if (i == 0) {
        s += mag.get_str();
        continue;
      }
      if (mag != 1) s += mag.get_str() + "*";
      s += "b";
      if (i > 1) s += "^" + std::to_string(i);
    }
    if (first) s += "0";
    s += ")";
    if (scale_ > 0) s += "/b^" + std::to_string(scale_);
    return s;
  }

 private:
  FieldElement(std::vector<Integer> coeffs, unsigned scale) : coeffs_(std::move(coeffs)), scale_(scale) {}

  static void check_same_degree(const FieldElement& a, const FieldElement& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) throw Error("field elements over different degrees");
  }

  template <typename Op>
  static FieldElement combine(const FieldElement& a, const FieldElement& b, Op op) {
    check_same_degree(a, b);
    const unsigned s = std::max(a.scale_, b.scale_);
    FieldElement r = a.rescaled(s);
    const FieldElement bb = b.scale_ == s ? b : b.rescaled(s);
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) op(r.coeffs_[i], bb.coeffs_[i]);
    return r;
  }

  void numerator_times_beta() {
    const Integer top = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i > 0; --i) coeffs_[i] = coeffs_[i - 1];
    coeffs_[0] = 0;
    if (top != 0)
      for (auto& c : coeffs_) c += top;
  }

  std::vector<Integer> coeffs_;
  unsigned scale_ = 0;
};

/// Certified sign of an element.
inline int sign(const PisotField& field, const FieldElement& x) { return field.sign(x.coeffs()); }

/// Exact total order on elements of the same field.
inline std::strong_ordering compare(const PisotField& field, const FieldElement& a, const FieldElement& b) {
  if (a.degree() != field.degree() || b.degree() != field.degree())
    throw Error("compare: elements do not belong to this field");
  const int s = sign(field, a - b);
  return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

/// Rational enclosure of x of width at most 10^-digits.
inline RationalInterval to_decimal(const PisotField& field, const FieldElement& x, int digits) {
  if (digits < 1) throw Error("to_decimal: digits must be at least 1");
  const Rational target(1, pow_integer(Integer(10), static_cast<unsigned long>(digits)));
  PisotField f = field;
  for (;;) {
    const RationalInterval num = f.evaluate(x.coeffs());
    const RationalInterval b = f.enclosure();
    const unsigned long n = x.scale();
    const Rational dlo = pow_rational(b.lo, static_cast<long>(n));
    const Rational dhi = pow_rational(b.hi, static_cast<long>(n));
    RationalInterval r;
    if (num.lo >= 0) r = {num.lo / dhi, num.hi / dlo};
    else if (num.hi <= 0) r = {num.lo / dlo, num.hi / dhi};
    else r = {num.lo / dlo, num.hi / dlo};
    if (r.width() <= target) return r;
    if (f.bits() >= PisotField::kMaxBits) throw CertificationError("to_decimal: precision limit reached");
    f = f.refined(f.bits() * 2);
  }
}

/// Fixed-point rendering of a rational, rounded half away from zero.
inline std::string format_decimal(const Rational& q, int digits) {
  const Integer scale = pow_integer(Integer(10), static_cast<unsigned long>(std::max(digits, 0)));
  const Integer num = abs(q.get_num()) * scale * 2 + q.get_den();
  const Integer den = q.get_den() * 2;
  Integer scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (q < 0 && scaled != 0) s.insert(0, "-");
  return s;
}

/// Decimal rendering of a field element via its certified enclosure midpoint.
inline std::string format_decimal(const PisotField& field, const FieldElement& x, int digits) {
  const RationalInterval r = to_decimal(field, x, digits + 2);
  return format_decimal((r.lo + r.hi) / 2, digits);
}

/// The gap alphabet d_0 > d_1 > ... > d_m (all at scale 0):
/// d_0 = 1, d_1 = β - 1, d_{j+1} = β d_j - d_1.
struct GapAlphabet {
  std::vector<FieldElement> d;

  int degree() const { return static_cast<int>(d.size()) - 1; }
  const FieldElement& operator[](std::size_t j) const { return d[j]; }

  /// Index j with d_j == x exactly.
  std::optional<int> index_of(const FieldElement& x) const {
    for (std::size_t j = 0; j < d.size(); ++j)
      if (d[j] == x) return static_cast<int>(j);
    return std::nullopt;
  }
};

inline GapAlphabet gap_alphabet(int m) {
  if (m < 2) throw InvalidDegree("degree m must be at least 2");
  GapAlphabet a;
  a.d.push_back(FieldElement::integer(m, 1));
  const FieldElement d1 = FieldElement::beta_power(m, 1) - FieldElement::integer(m, 1);
  a.d.push_back(d1);
  for (int j = 1; j < m; ++j) a.d.push_back(a.d.back().times_beta() - d1);
  return a;
}

inline GapAlphabet gap_alphabet(const PisotField& field) { return gap_alphabet(field.degree()); }

}  // namespace bonacci
