#include "fsl/angles.hpp"

#include <map>
#include <numeric>

#include "fsl/error.hpp"

namespace fsl {

namespace {

BigInt floor_div(const BigInt& n, const BigInt& d) {
  // d > 0
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigInt floor_of(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r),
                   boost::multiprecision::denominator(r));
}

Rational frac(const Rational& r) { return r - Rational(floor_of(r)); }

BigInt pow_big(int base, int exp) {
  BigInt r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

}  // namespace

Angle::Angle(BigInt num, BigInt den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "angle denominator is zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  num = num - floor_div(num, den) * den;
  const BigInt g = boost::multiprecision::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  num_ = std::move(num);
  den_ = std::move(den);
}

Angle::Angle(const Rational& value)
    : Angle(boost::multiprecision::numerator(value), boost::multiprecision::denominator(value)) {}

double Angle::to_double() const {
  return Rational(num_, den_).convert_to<double>();
}

std::string Angle::str() const { return num_.str() + "/" + den_.str(); }

Angle Angle::parse(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Angle(BigInt(text), BigInt(1));
    return Angle(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "malformed angle '" + text + "'");
  }
}

std::strong_ordering operator<=>(const Angle& a, const Angle& b) {
  const BigInt lhs = a.num_ * b.den_;
  const BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Angle times_d(const Angle& theta, int d) { return Angle(theta.num() * d, theta.den()); }

AngleClass classify_angle(const Angle& theta, int d) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "degree must be >= 2");
  std::map<Angle, int> seen;
  Angle t = theta;
  for (int k = 0;; ++k) {
    auto [it, inserted] = seen.emplace(t, k);
    if (!inserted) return {it->second, k - it->second};
    t = times_d(t, d);
  }
}

CircleAffine::CircleAffine(Rational slope, Rational offset)
    : a_(std::move(slope)), b_(frac(offset)) {
  if (a_ == 0) throw Error(ErrorCode::InvalidArgument, "circle map slope must be nonzero");
}

Angle apply(const CircleAffine& s, const Angle& theta) {
  return Angle(s.slope() * theta.value() + s.offset());
}

CircleAffine compose_cm(const CircleAffine& s1, const CircleAffine& s2) {
  return CircleAffine(s1.slope() * s2.slope(), s1.slope() * s2.offset() + s1.offset());
}

CircleAffine invert_cm(const CircleAffine& s, const Angle& anchor) {
  const BigInt m = floor_of(s.slope() * anchor.value() + s.offset());
  return CircleAffine(Rational(1) / s.slope(), (Rational(m) - s.offset()) / s.slope());
}

Angle apply_inverse_branch(const CircleAffine& s, const Angle& anchor, const Angle& t) {
  const BigInt m = floor_of(s.slope() * anchor.value() + s.offset());
  return Angle((t.value() + Rational(m) - s.offset()) / s.slope());
}

std::optional<SlopeFactors> slope_normal_factors(const Rational& slope, int d) {
  if (slope == 0) return std::nullopt;
  BigInt num = boost::multiprecision::numerator(slope);
  const BigInt den = boost::multiprecision::denominator(slope);
  const BigInt dd = d;
  if (boost::multiprecision::gcd(den, dd) != 1) return std::nullopt;
  // Split num into its d-smooth part l and the cofactor u.
  BigInt l = 1;
  BigInt u = num;
  for (BigInt g = boost::multiprecision::gcd(u, dd); g > 1;
       g = boost::multiprecision::gcd(u, dd)) {
    u /= g;
    l *= g;
  }
  if (dd % l != 0) return std::nullopt;
  return SlopeFactors{u, den, l};
}

namespace {

// Branch of m_d^{-1} sending x to its predecessor on x's cycle.
CircleAffine cycle_predecessor_branch(const Angle& x, int d) {
  const AngleClass cls = classify_angle(x, d);
  Angle prev = x;
  for (int k = 1; k < cls.period; ++k) prev = times_d(prev, d);
  const Rational k = Rational(d) * prev.value() - x.value();  // integer in [0, d)
  return CircleAffine(Rational(1, d), k / d);
}

}  // namespace

NormalForm normal_form(const CircleAffine& s, int d, const std::optional<Angle>& test_angle,
                       int bound) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "degree must be >= 2");
  const Angle x = test_angle.value_or(Angle(1, d + 1));
  if (!classify_angle(x, d).periodic())
    throw Error(ErrorCode::InvalidArgument, "normal form test angle must be periodic");

  // Inverse-branch chain along the test cycle: chain[j] = branch^j, exact lifts.
  std::vector<CircleAffine> chain{CircleAffine::identity()};
  {
    Angle cur = x;
    for (int j = 1; j <= bound; ++j) {
      const CircleAffine br = cycle_predecessor_branch(cur, d);
      chain.push_back(compose_cm(br, chain.back()));
      cur = apply(br, cur);
    }
  }

  for (int total = 0; total <= 2 * bound; ++total) {
    for (int post = std::max(0, total - bound); post <= std::min(total, bound); ++post) {
      const int pre = total - post;
      CircleAffine cand = compose_cm(s, chain[std::size_t(pre)]);
      for (int k = 0; k < post; ++k) cand = compose_cm(CircleAffine::times(d), cand);
      const auto factors = slope_normal_factors(cand.slope(), d);
      if (!factors) continue;
      if (!classify_angle(apply(cand, x), d).periodic()) continue;
      return {cand, pre, post, *factors};
    }
  }
  throw Error(ErrorCode::NoNormalForm,
              "no normal form within " + std::to_string(bound) + " compositions");
}

CircleAffine commutator(const CircleAffine& s, int d, int q, const Angle& anchor) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "commutator needs q >= 1");
  const AngleClass cls = classify_angle(anchor, d);
  if (!cls.periodic() || q % cls.period != 0)
    throw Error(ErrorCode::BranchUndefined,
                "anchor " + anchor.str() + " is not periodic with period dividing q");

  const BigInt dq = pow_big(d, q);
  Angle y = apply(s, anchor);
  y = Angle(y.num() * dq, y.den());
  y = apply_inverse_branch(s, anchor, y);
  // m_d^{-q} branch fixing the anchor: t -> (t + k)/d^q, k = (d^q - 1) anchor.
  const Rational k = Rational(dq - 1) * anchor.value();
  const Rational back = (y.value() + k) / Rational(dq);
  return CircleAffine(Rational(1), back - anchor.value());
}

std::vector<Angle> periodic_angles(int d, int count) {
  std::vector<Angle> out;
  for (int q = 1; int(out.size()) < count; ++q) {
    if (std::gcd(q, d) != 1) continue;
    for (int p = 0; p < q && int(out.size()) < count; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  }
  return out;
}

bool check_ratder_conclusion(const CircleAffine& s, int d, int samples) {
  for (const Angle& x : periodic_angles(d, samples)) {
    const AngleClass cls = classify_angle(apply(s, x), d);
    if (cls.period < 1) return false;
  }
  return true;
}

}  // namespace fsl
