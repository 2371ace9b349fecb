#pragma once

#include "fsl/cloud.hpp"

namespace fsl {

/// Certified Misiurewicz parameter. Indices follow the critical-value
/// convention: f_c^p(f_c^l(c)) = f_c^l(c) with l, p minimal. The orbit of
/// the critical point 0 has preperiod l + 1.
struct MisiurewiczPoint {
  cplx c{};
  int preperiod = 1;          // l, counted from the critical value c
  int period = 1;             // p
  cplx x_c{};                 // f_c^l(c)
  cplx multiplier{};          // rho = (f_c^p)'(x_c)
  cplx scale_derivative{};    // (f_c^l)'(c)
  double residual = 0.0;      // |f_c^p(x_c) - x_c|
  /// B = d/dc [f_c^l(c) - x(c)], x(c) the continuation of the cycle point.
  /// Near c, M - c is asymptotic to (1/B) times the limit model at x_c.
  cplx transversality{};

  int preperiod_from_critical_point() const { return preperiod + 1; }
};

struct NewtonOptions {
  double residual_tol = 1e-12;
  int max_steps = 200;
  double minimality_tol = 1e-8;
  double critical_tol = 1e-6;  // |f_c^k(0)| below this means a periodic critical point
};

/// Newton on G(c) = f_c^{l+p}(c) - f_c^l(c) from `seed`, followed by
/// certification. Throws NewtonDiverged, PeriodicNotPreperiodic, or
/// NotMinimal (carrying the smaller pair found).
MisiurewiczPoint find_misiurewicz(int l, int p, cplx seed, const NewtonOptions& opts = {});

enum class OrbitKind { Escaping, Superattracting, Misiurewicz, Undecided };

struct OrbitClass {
  OrbitKind kind = OrbitKind::Undecided;
  int period = 0;
  int preperiod_point = 0;  // from the critical point 0
  int preperiod_value = 0;  // from the critical value c (= preperiod_point - 1)
  int escape_iteration = 0;
};

inline constexpr double kCycleTol = 1e-9;
inline constexpr double kCycleGuard = 1e-6;

/// Examines 0, c, f_c(c), ... for escape (|z| > 2) or a repeat within tol.
/// A near-repeat between tol and the 1e-6 guard band yields Undecided.
OrbitClass classify_critical_orbit(cplx c, int max_iter = 1000, double tol = kCycleTol);

/// B = d/dc [f_c^l(c) - x(c)] evaluated at c.
cplx transversality(cplx c, int l, int p);

/// (f_c^p)'(x) = prod 2 z over the cycle. Throws NotPeriodic when
/// |f_c^p(x) - x| >= 1e-8.
cplx multiplier(cplx c, cplx x, int p);

}  // namespace fsl
