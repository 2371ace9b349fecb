#pragma once

#include <complex>
#include <random>
#include <vector>

#include "fsl/poly.hpp"

namespace testing {

using cplx = std::complex<double>;

inline cplx random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double re = u(rng);
  return {re, u(rng)};
}

inline fsl::Polynomial random_poly(std::mt19937_64& rng, std::size_t degree) {
  std::vector<cplx> c(degree + 1);
  for (auto& x : c) x = random_complex(rng);
  if (std::abs(c.back()) < 0.1) c.back() = 1.0;
  return fsl::Polynomial(c);
}

inline double max_coeff_diff(const fsl::Polynomial& p, const fsl::Polynomial& q) {
  const std::size_t n = std::max(p.degree(), q.degree());
  double m = 0.0;
  for (std::size_t k = 0; k <= n; ++k) m = std::max(m, std::abs(p[k] - q[k]));
  return m;
}

}  // namespace testing
