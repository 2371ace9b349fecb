#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace fsl {

using cplx = std::complex<double>;

/// Default bound on the degree of any composed or iterated polynomial.
inline constexpr std::size_t kDefaultDegreeCap = 4096;

/// Coefficients below this modulus are treated as zero when trimming.
inline constexpr double kTrimThreshold = 1e-14;

/// Complex polynomial with coefficients stored by ascending power.
///
/// Immutable after construction: trailing coefficients with modulus below
/// kTrimThreshold are stripped so that degree() is the index of the leading
/// nonzero coefficient. The zero polynomial has degree 0 and a single
/// zero coefficient.
class Polynomial {
 public:
  Polynomial();
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs);

  static Polynomial identity();
  static Polynomial constant(cplx value);
  static Polynomial monomial(std::size_t degree, cplx coeff = 1.0);

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx operator[](std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : cplx{};
  }
  cplx leading() const { return coeffs_.back(); }
  bool is_zero() const;
  double max_coeff_modulus() const;

  cplx operator()(cplx z) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& a);
  friend Polynomial operator-(const Polynomial& a);

 private:
  std::vector<cplx> coeffs_;
};

/// z -> a z + b with a != 0.
struct AffineMap {
  cplx a{1.0};
  cplx b{0.0};

  AffineMap() = default;
  AffineMap(cplx scale, cplx shift);

  cplx operator()(cplx z) const { return a * z + b; }
  AffineMap inverse() const;
  Polynomial as_polynomial() const { return Polynomial{b, a}; }

  static AffineMap identity() { return {}; }
};

/// (f o g)(z) = f(g(z)).
AffineMap compose(const AffineMap& f, const AffineMap& g);

cplx eval(const Polynomial& p, cplx z);
Polynomial derivative(const Polynomial& p);

/// Coefficients of p o q. Throws DegreeCap when deg(p)*deg(q) exceeds cap.
Polynomial compose(const Polynomial& p, const Polynomial& q,
                   std::size_t cap = kDefaultDegreeCap);

/// n-fold composition p o ... o p (n >= 1).
Polynomial iterate(const Polynomial& p, int n,
                   std::size_t cap = kDefaultDegreeCap);

struct Orbit {
  std::vector<cplx> points;  // z0, p(z0), ..., p^n(z0)
  bool overflow = false;     // some |z| exceeded the escape bound
};

/// Forward orbit of length n+1. Stops early (flagging overflow) once a point
/// exceeds escape_bound in modulus.
Orbit orbit(const Polynomial& p, cplx z0, int n, double escape_bound = 1e150);

/// A^{-1} o p o A.
Polynomial conjugate(const Polynomial& p, const AffineMap& A);

/// Conjugate p to a monic centered polynomial q = A^{-1} o p o A.
///
/// Among the deg-1 admissible scales (roots of a^{d-1} = 1/leading), picks the
/// one with argument in [0, 2*pi/(d-1)).
std::pair<Polynomial, AffineMap> normalize_monic_centered(const Polynomial& p);

/// Monic degree-d Chebyshev polynomial, P_d(z + 1/z) = z^d + z^{-d}.
Polynomial chebyshev_monic(int d);

/// Same degree and every coefficient difference has modulus <= tol.
bool equal_upto(const Polynomial& p, const Polynomial& q, double tol);

/// Same degree and every coefficient difference has modulus at most
/// rel_tol * max(1, largest coefficient modulus of p and q). False when a
/// coefficient is not finite.
bool equal_relative(const Polynomial& p, const Polynomial& q, double rel_tol);

}  // namespace fsl
