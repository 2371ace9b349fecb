#include "fsl/symmetry.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "fsl/error.hpp"

namespace fsl {

namespace {

bool is_monic_centered(const Polynomial& f) {
  const std::size_t d = f.degree();
  return std::abs(f.leading() - 1.0) <= kSupportZeroTol &&
         std::abs(f[d - 1]) <= kSupportZeroTol;
}

SymmetryGroup make_group(int n, int s) {
  return {n, s, std::polar(1.0, 2 * std::numbers::pi / n)};
}

}  // namespace

SymmetryGroup linear_symmetry_group(const Polynomial& f) {
  if (f.degree() < 2) throw Error(ErrorCode::DegreeTooLow, "degree must be >= 2");
  if (!is_monic_centered(f))
    throw Error(ErrorCode::NotNormalized, "polynomial is not monic and centered");

  const int d = int(f.degree());
  std::vector<int> support;
  for (int k = 0; k <= d; ++k)
    if (std::abs(f[std::size_t(k)]) > kSupportZeroTol) support.push_back(k);

  int n0 = 0;
  for (int e : support) n0 = std::gcd(n0, d - e);
  if (n0 == 0) n0 = d - 1;  // monomial
  if (n0 <= 1) return make_group(1, 0);

  for (int n = n0; n > 1; --n) {
    if (n0 % n != 0) continue;
    const int s = d % n;
    if (std::gcd(s, n) == 1) return make_group(n, s);
  }
  return make_group(1, 0);
}

std::optional<int> commutes_with_iterate(const Polynomial& g, const Polynomial& f,
                                         int n_max, std::size_t cap) {
  Polynomial fn = f;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) fn = compose(f, fn, cap);
    const Polynomial lhs = compose(g, fn, cap);
    const Polynomial rhs = compose(fn, g, cap);
    if (equal_relative(lhs, rhs, kIdentityRelTol)) return n;
  }
  return std::nullopt;
}

ExceptionalClass recognize_exceptional(const Polynomial& f) {
  const std::size_t d = f.degree();
  if (d < 2) throw Error(ErrorCode::DegreeTooLow, "degree must be >= 2");
  const auto [q, A] = normalize_monic_centered(f);

  const Polynomial mono = Polynomial::monomial(d);
  const Polynomial cheb = chebyshev_monic(int(d));
  const Polynomial cheb_neg = normalize_monic_centered(-cheb).first;

  // Monic centered representatives of one conjugacy class differ by a
  // rotation through a (d-1)-th root of unity.
  // For even d, -P_d is itself conjugate to P_d, so +1 is tried on every
  // rotation before -1.
  constexpr double tol = 1e-10;
  for (int sign : {+1, -1}) {
    for (std::size_t k = 0; k + 1 < d; ++k) {
      const AffineMap R(std::polar(1.0, 2 * std::numbers::pi * double(k) / double(d - 1)), 0.0);
      const Polynomial r = conjugate(q, R);
      const AffineMap total = compose(A, R);
      if (sign > 0 && equal_upto(r, mono, tol)) return {ExceptionalKind::Monomial, 0, total};
      if (equal_upto(r, sign > 0 ? cheb : cheb_neg, tol))
        return {ExceptionalKind::Chebyshev, sign, total};
    }
  }
  return {};
}

bool verify_intertwining(const Polynomial& S, const Polynomial& f1,
                         const Polynomial& f2, int p, std::size_t cap) {
  const Polynomial lhs = compose(S, iterate(f1, p, cap), cap);
  const Polynomial rhs = compose(iterate(f2, p, cap), S, cap);
  return equal_relative(lhs, rhs, kIdentityRelTol);
}

bool verify_decomposition_pair(const Polynomial& P, const Polynomial& Q,
                               const Polynomial& f1, const Polynomial& f2) {
  const std::size_t d = P.degree() * Q.degree();
  if (d != f1.degree() || d != f2.degree())
    throw Error(ErrorCode::DegreeMismatch, "deg(P) deg(Q) must equal deg(f1) = deg(f2)");
  return equal_relative(compose(Q, P), f1, kIdentityRelTol) &&
         equal_relative(compose(P, Q), f2, kIdentityRelTol);
}

}  // namespace fsl
