#pragma once

#include <optional>

#include "fsl/poly.hpp"

namespace fsl {

/// Rotations z -> zeta z (zeta an order-th root of unity) commuting with an
/// iterate of a monic centered polynomial f(z) = z^s R(z^order).
struct SymmetryGroup {
  int order = 1;
  int residue = 0;
  cplx generator{1.0};

  bool trivial() const { return order == 1; }
};

/// Maximal n such that every exponent in the support of f is congruent to a
/// common residue s mod n with gcd(s, n) = 1. f must be monic and centered.
///
/// A pure monomial z^d has unbounded support gaps; it is reported with
/// order d-1, the largest rotation group commuting with z^d itself.
SymmetryGroup linear_symmetry_group(const Polynomial& f);

/// Smallest n <= n_max with g o f^n = f^n o g (relative tolerance 1e-8).
std::optional<int> commutes_with_iterate(const Polynomial& g, const Polynomial& f,
                                         int n_max,
                                         std::size_t cap = kDefaultDegreeCap);

enum class ExceptionalKind { Monomial, Chebyshev, Neither };

struct ExceptionalClass {
  ExceptionalKind kind = ExceptionalKind::Neither;
  int sign = 0;  // +1 / -1 for Chebyshev, 0 otherwise
  AffineMap conjugacy;  // template = conjugacy^{-1} o f o conjugacy
};

/// Recognize conjugates of z^d and of +-P_d (P_d = chebyshev_monic(d)).
ExceptionalClass recognize_exceptional(const Polynomial& f);

/// S o f1^p == f2^p o S within relative 1e-8.
bool verify_intertwining(const Polynomial& S, const Polynomial& f1,
                         const Polynomial& f2, int p,
                         std::size_t cap = kDefaultDegreeCap);

/// f1 == Q o P and f2 == P o Q within relative 1e-8. Throws DegreeMismatch
/// unless deg(P) deg(Q) = deg(f1) = deg(f2).
bool verify_decomposition_pair(const Polynomial& P, const Polynomial& Q,
                               const Polynomial& f1, const Polynomial& f2);

inline constexpr double kIdentityRelTol = 1e-8;
inline constexpr double kSupportZeroTol = 1e-12;

}  // namespace fsl
