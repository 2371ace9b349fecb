#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace fsl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Point of R/Z as an exact reduced fraction num/den with 0 <= num < den.
class Angle {
 public:
  Angle() : num_(0), den_(1) {}
  Angle(BigInt num, BigInt den);
  explicit Angle(const Rational& value);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  Rational value() const { return Rational(num_, den_); }
  double to_double() const;
  std::string str() const;  // "p/q"

  static Angle parse(const std::string& text);

  friend bool operator==(const Angle& a, const Angle& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Angle& a, const Angle& b);

 private:
  BigInt num_;
  BigInt den_;
};

/// d * theta mod 1.
Angle times_d(const Angle& theta, int d);

struct AngleClass {
  int preperiod = 0;  // 0 means periodic
  int period = 1;
  bool periodic() const { return preperiod == 0; }
};

/// Exact preperiod and period of theta under t -> d t mod 1.
AngleClass classify_angle(const Angle& theta, int d);

/// Exact affine circle map t -> a t + b, acting on representatives in [0, 1).
/// Offsets are kept reduced mod 1. For |a| != 1 the map is not injective on
/// the circle; inverses are branches chosen through an anchor.
class CircleAffine {
 public:
  CircleAffine() : a_(1), b_(0) {}
  CircleAffine(Rational slope, Rational offset);

  const Rational& slope() const { return a_; }
  const Rational& offset() const { return b_; }

  static CircleAffine identity() { return {}; }
  static CircleAffine times(int d) { return CircleAffine(Rational(d), Rational(0)); }

  friend bool operator==(const CircleAffine&, const CircleAffine&) = default;

 private:
  Rational a_;
  Rational b_;
};

Angle apply(const CircleAffine& s, const Angle& theta);

/// s1 o s2 as lift maps, offset reduced mod 1.
CircleAffine compose_cm(const CircleAffine& s1, const CircleAffine& s2);

/// Inverse branch t -> (t + m - b)/a that sends s(anchor) back to anchor, where
/// m = floor(a * anchor + b). The default anchor 0 gives t -> t/a - b/a.
CircleAffine invert_cm(const CircleAffine& s, const Angle& anchor = Angle());

/// Exact value of the inverse branch on a representative in [0, 1).
Angle apply_inverse_branch(const CircleAffine& s, const Angle& anchor, const Angle& t);

struct SlopeFactors {
  BigInt u;  // coprime to d (sign carried here)
  BigInt v;  // coprime to d
  BigInt l;  // divides d
};

/// Factor a slope as u*l/v with gcd(u,d) = gcd(v,d) = 1 and l | d, if possible.
std::optional<SlopeFactors> slope_normal_factors(const Rational& slope, int d);

struct NormalForm {
  CircleAffine map;    // m_d^post o s o (m_d^{-1})^pre
  int pre = 0;         // inverse branches of m_d applied first
  int post = 0;        // forward m_d applied last
  SlopeFactors factors;
};

inline constexpr int kNormalFormSearchBound = 64;

/// Minimal (pre + post, then post) composition counts putting s into normal
/// form and sending the periodic test angle to a periodic angle. Inverse
/// branches of m_d follow the test angle's cycle. Throws NoNormalForm.
NormalForm normal_form(const CircleAffine& s, int d,
                       const std::optional<Angle>& test_angle = std::nullopt,
                       int bound = kNormalFormSearchBound);

/// phi = m_d^{-q} o s^{-1} o m_d^q o s with s^{-1} the branch through the
/// anchor and m_d^{-q} the branch fixing the anchor. Slope is exactly 1.
/// Throws BranchUndefined unless the anchor is periodic with period | q.
CircleAffine commutator(const CircleAffine& s, int d, int q, const Angle& anchor);

/// The first `count` m_d-periodic angles, ordered by denominator then numerator.
std::vector<Angle> periodic_angles(int d, int count);

/// True iff s maps each of `samples` periodic angles to a (pre)periodic angle.
bool check_ratder_conclusion(const CircleAffine& s, int d, int samples);

}  // namespace fsl
