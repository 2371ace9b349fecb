#include "fsl/misiurewicz.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fsl/error.hpp"

namespace fsl {

namespace {

// f_c^k(c) for k = 0..n (index k holds f_c^k(c)).
std::vector<cplx> critical_value_orbit(cplx c, int n) {
  std::vector<cplx> z(std::size_t(n) + 1);
  z[0] = c;
  for (int k = 1; k <= n; ++k) z[std::size_t(k)] = z[std::size_t(k) - 1] * z[std::size_t(k) - 1] + c;
  return z;
}

struct GValue {
  cplx g;
  cplx dg;
};

GValue misiurewicz_equation(cplx c, int l, int p) {
  cplx z = c;
  cplx dz = 1.0;
  cplx zl{}, dzl{};
  for (int k = 0; k <= l + p; ++k) {
    if (k == l) {
      zl = z;
      dzl = dz;
    }
    if (k == l + p) break;
    dz = 2.0 * z * dz + 1.0;
    z = z * z + c;
  }
  return {z - zl, dz - dzl};
}

cplx derivative_along(cplx c, cplx z, int n) {
  cplx d = 1.0;
  for (int k = 0; k < n; ++k) {
    d *= 2.0 * z;
    z = z * z + c;
  }
  return d;
}

}  // namespace

cplx transversality(cplx c, int l, int p) {
  // d/dc of f_c^l(c), with z_0 = c.
  cplx z = c, dz{1.0, 0.0};
  for (int k = 0; k < l; ++k) {
    dz = 2.0 * z * dz + 1.0;
    z = z * z + c;
  }
  // x(c) solves f_c^p(x) = x, so x' = -(d/dc f_c^p)(x) / (rho - 1).
  cplx w = z, dw{0.0, 0.0}, rho{1.0, 0.0};
  for (int k = 0; k < p; ++k) {
    rho *= 2.0 * w;
    dw = 2.0 * w * dw + 1.0;
    w = w * w + c;
  }
  return dz + dw / (rho - 1.0);
}

MisiurewiczPoint find_misiurewicz(int l, int p, cplx seed, const NewtonOptions& opts) {
  if (l < 1 || p < 1 || l + p > 60)
    throw Error(ErrorCode::InvalidArgument, "need l >= 1, p >= 1, l + p <= 60");

  cplx c = seed;
  bool converged = false;
  for (int step = 0; step < opts.max_steps; ++step) {
    const GValue v = misiurewicz_equation(c, l, p);
    if (!std::isfinite(std::abs(v.g)) || !std::isfinite(std::abs(v.dg)) || v.dg == 0.0) break;
    if (std::abs(v.g) < opts.residual_tol) {
      // Two polishing steps tighten a simple root to rounding level; at a
      // multiple root the steps stay large and the iteration goes on.
      cplx last{};
      for (int k = 0; k < 2; ++k) {
        const GValue w = misiurewicz_equation(c, l, p);
        last = w.dg != 0.0 ? w.g / w.dg : cplx{};
        c -= last;
      }
      if (std::abs(last) <= 1e-9 * std::max(1.0, std::abs(c))) {
        converged = true;
        break;
      }
      continue;
    }
    c -= v.g / v.dg;
    if (!std::isfinite(std::abs(c)) || std::abs(c) > 4.0) break;
  }
  if (!converged)
    throw Error(ErrorCode::NewtonDiverged, "Newton did not converge for (l, p) = (" +
                                               std::to_string(l) + ", " + std::to_string(p) + ")");

  // Periodic critical point: some f_c^k(0) returns to 0.
  const std::vector<cplx> orbit = critical_value_orbit(c, l + p);
  {
    cplx z = 0.0;
    for (int k = 1; k <= l + p; ++k) {
      z = z * z + c;
      if (std::abs(z) < opts.critical_tol)
        throw Error(ErrorCode::PeriodicNotPreperiodic,
                    "critical point is periodic (superattracting parameter)");
    }
  }

  // Minimality: no smaller preperiod and no proper divisor period.
  for (int lp = 1; lp <= l; ++lp) {
    for (int pp = 1; pp <= p; ++pp) {
      if (p % pp != 0 || (lp == l && pp == p)) continue;
      const double gap = std::abs(orbit[std::size_t(lp + pp)] - orbit[std::size_t(lp)]);
      if (gap < opts.minimality_tol)
        throw NotMinimalError(lp, pp, "equation holds for smaller (l, p) = (" +
                                          std::to_string(lp) + ", " + std::to_string(pp) + ")");
    }
  }

  MisiurewiczPoint m;
  m.c = c;
  m.preperiod = l;
  m.period = p;
  m.x_c = orbit[std::size_t(l)];
  m.multiplier = derivative_along(c, m.x_c, p);
  m.scale_derivative = derivative_along(c, c, l);
  // A Misiurewicz cycle repels; an attracting or neutral one means the
  // critical orbit converges to it without landing on it.
  if (std::abs(m.multiplier) <= 1.0)
    throw Error(ErrorCode::PeriodicNotPreperiodic,
                "cycle multiplier has modulus " + std::to_string(std::abs(m.multiplier)) +
                    "; the critical orbit is attracted, not preperiodic");
  m.residual = std::abs(orbit[std::size_t(l + p)] - orbit[std::size_t(l)]);
  m.transversality = transversality(c, l, p);
  return m;
}

OrbitClass classify_critical_orbit(cplx c, int max_iter, double tol) {
  std::vector<cplx> orbit{0.0};
  orbit.reserve(std::size_t(max_iter) + 1);
  cplx z = 0.0;
  for (int n = 1; n <= max_iter; ++n) {
    z = z * z + c;
    if (std::abs(z) > 2.0) {
      OrbitClass out;
      out.kind = OrbitKind::Escaping;
      out.escape_iteration = n;
      return out;
    }
    double best = std::numeric_limits<double>::infinity();
    int match = -1;
    for (int m = 0; m < n; ++m) {
      const double dist = std::abs(z - orbit[std::size_t(m)]);
      if (dist < best) {
        best = dist;
        match = m;
      }
    }
    if (best < tol) {
      OrbitClass out;
      out.period = n - match;
      out.preperiod_point = match;
      out.preperiod_value = std::max(0, match - 1);
      out.kind = match == 0 ? OrbitKind::Superattracting : OrbitKind::Misiurewicz;
      return out;
    }
    if (best < kCycleGuard) return {};
    orbit.push_back(z);
  }
  return {};
}

cplx multiplier(cplx c, cplx x, int p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
  cplx z = x;
  cplx d = 1.0;
  for (int k = 0; k < p; ++k) {
    d *= 2.0 * z;
    z = z * z + c;
  }
  if (!(std::abs(z - x) < 1e-8))
    throw Error(ErrorCode::NotPeriodic, "point is not periodic with the given period");
  return d;
}

}  // namespace fsl
