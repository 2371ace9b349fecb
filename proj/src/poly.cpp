#include "fsl/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fsl/error.hpp"

namespace fsl {

namespace {

void trim(std::vector<cplx>& c) {
  while (c.size() > 1 && std::abs(c.back()) < kTrimThreshold) c.pop_back();
  if (c.empty()) c.push_back(0.0);
}

void check_cap(std::size_t degree, std::size_t cap) {
  if (degree > cap) {
    throw Error(ErrorCode::DegreeCap, "composition degree " +
                                          std::to_string(degree) +
                                          " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

Polynomial::Polynomial() : coeffs_{0.0} {}

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  trim(coeffs_);
}

Polynomial::Polynomial(std::initializer_list<cplx> coeffs)
    : Polynomial(std::vector<cplx>(coeffs)) {}

Polynomial Polynomial::identity() { return Polynomial{0.0, 1.0}; }

Polynomial Polynomial::constant(cplx value) { return Polynomial{value}; }

Polynomial Polynomial::monomial(std::size_t degree, cplx coeff) {
  std::vector<cplx> c(degree + 1, 0.0);
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

bool Polynomial::is_zero() const {
  return coeffs_.size() == 1 && std::abs(coeffs_[0]) < kTrimThreshold;
}

double Polynomial::max_coeff_modulus() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a) { return cplx{-1.0} * a; }

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(cplx s, const Polynomial& a) {
  std::vector<cplx> c(a.coeffs_);
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

AffineMap::AffineMap(cplx scale, cplx shift) : a(scale), b(shift) {
  if (scale == 0.0) throw Error(ErrorCode::InvalidArgument, "affine scale must be nonzero");
}

AffineMap AffineMap::inverse() const { return AffineMap(1.0 / a, -b / a); }

AffineMap compose(const AffineMap& f, const AffineMap& g) {
  return AffineMap(f.a * g.a, f.a * g.b + f.b);
}

cplx eval(const Polynomial& p, cplx z) { return p(z); }

Polynomial derivative(const Polynomial& p) {
  if (p.degree() == 0) return Polynomial{};
  std::vector<cplx> c(p.degree());
  for (std::size_t k = 1; k <= p.degree(); ++k) c[k - 1] = double(k) * p[k];
  return Polynomial(std::move(c));
}

Polynomial compose(const Polynomial& p, const Polynomial& q, std::size_t cap) {
  check_cap(p.degree() * q.degree(), cap);
  // Horner in the polynomial ring: ((p_n q + p_{n-1}) q + ...) + p_0.
  Polynomial acc = Polynomial::constant(p.leading());
  for (std::size_t k = p.degree(); k-- > 0;) acc = acc * q + Polynomial::constant(p[k]);
  return acc;
}

Polynomial iterate(const Polynomial& p, int n, std::size_t cap) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "iterate requires n >= 1");
  double total = std::pow(double(p.degree()), n);
  if (total > double(cap)) check_cap(std::size_t(-1), cap);
  Polynomial acc = p;
  for (int k = 1; k < n; ++k) acc = compose(p, acc, cap);
  return acc;
}

Orbit orbit(const Polynomial& p, cplx z0, int n, double escape_bound) {
  Orbit out;
  out.points.reserve(std::size_t(n) + 1);
  cplx z = z0;
  out.points.push_back(z);
  for (int k = 0; k < n; ++k) {
    z = p(z);
    out.points.push_back(z);
    if (!(std::abs(z) <= escape_bound)) {
      out.overflow = true;
      break;
    }
  }
  return out;
}

Polynomial conjugate(const Polynomial& p, const AffineMap& A) {
  // (p(a z + b) - b) / a
  Polynomial inner = compose(p, A.as_polynomial(), std::size_t(-1));
  return cplx{1.0} / A.a * (inner - Polynomial::constant(A.b));
}

std::pair<Polynomial, AffineMap> normalize_monic_centered(const Polynomial& p) {
  const std::size_t d = p.degree();
  if (d < 2) throw Error(ErrorCode::DegreeTooLow, "normalization needs degree >= 2");
  const cplx lead = p.leading();
  // a^{d-1} = 1/lead, arg(a) in [0, 2pi/(d-1)).
  const cplx target = 1.0 / lead;
  double arg = std::arg(target);
  if (arg < 0) arg += 2 * std::numbers::pi;
  const double m = double(d - 1);
  double scale_arg = arg / m;
  if (scale_arg >= 2 * std::numbers::pi / m) scale_arg = 0.0;
  const cplx a = std::polar(std::pow(std::abs(target), 1.0 / m), scale_arg);
  const cplx b = -p[d - 1] / (double(d) * lead);
  AffineMap A(a, b);
  Polynomial q = conjugate(p, A);
  // Clean the two normalized coefficients exactly.
  std::vector<cplx> c(q.coeffs().begin(), q.coeffs().end());
  c.resize(d + 1, 0.0);
  c[d] = 1.0;
  c[d - 1] = 0.0;
  return {Polynomial(std::move(c)), A};
}

Polynomial chebyshev_monic(int d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "chebyshev degree must be >= 1");
  Polynomial prev = Polynomial::constant(2.0);
  Polynomial cur = Polynomial::identity();
  for (int k = 1; k < d; ++k) {
    Polynomial next = Polynomial::identity() * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

bool equal_upto(const Polynomial& p, const Polynomial& q, double tol) {
  if (p.degree() != q.degree()) return false;
  for (std::size_t k = 0; k <= p.degree(); ++k)
    if (std::abs(p[k] - q[k]) > tol) return false;
  return true;
}

bool equal_relative(const Polynomial& p, const Polynomial& q, double rel_tol) {
  // Overflowed coefficients would make the tolerance infinite.
  for (const Polynomial* r : {&p, &q})
    for (cplx a : r->coeffs())
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
  const double scale = std::max({1.0, p.max_coeff_modulus(), q.max_coeff_modulus()});
  return equal_upto(p, q, rel_tol * scale);
}

}  // namespace fsl
