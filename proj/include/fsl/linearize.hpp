#pragma once

#include <cstdint>
#include <vector>

#include "fsl/cloud.hpp"
#include "fsl/misiurewicz.hpp"

namespace fsl {

/// Koenigs linearizing coordinate phi at a repelling cycle of f_c:
/// phi(x) = 0, phi'(x) = 1, phi(f_c^p(z)) = rho phi(z).
///
/// phi(z) = lim rho^n (g^n(z) - x), with g the inverse branch of f_c^p fixing
/// x. Preimages are tracked as deviations from the cycle points so that the
/// limit does not lose precision to cancellation.
class KoenigsChart {
 public:
  KoenigsChart(cplx c, std::vector<cplx> cycle, cplx rho, double radius);

  cplx c() const { return c_; }
  cplx base() const { return cycle_.front(); }
  int period() const { return int(cycle_.size()); }
  cplx rho() const { return rho_; }
  double radius() const { return radius_; }
  const std::vector<cplx>& cycle() const { return cycle_; }

  /// phi(z). Throws BranchLost if successive pullbacks stop contracting.
  cplx operator()(cplx z) const { return evaluate(z, nullptr); }

  /// phi(z), reporting the number of pullbacks used.
  cplx evaluate(cplx z, int* depth) const;

  /// g(z): the inverse branch of f_c^p near the base point.
  cplx inverse_branch(cplx z) const;

  /// f_c^p(z).
  cplx forward(cplx z) const;

  /// |g'(z)|.
  double inverse_contraction(cplx z) const;

 private:
  cplx pull_deviation(cplx u) const;

  cplx c_;
  std::vector<cplx> cycle_;
  cplx rho_;
  double radius_;
};

inline constexpr double kChartContraction = 1.5;
inline constexpr int kKoenigsMaxDepth = 400;

/// Builds the chart at the repelling p-cycle through x. The base point is
/// polished by Newton, and the radius halves until the inverse branch
/// contracts by at least 1.5 on the chart circle. Throws NotPeriodic,
/// NotRepelling.
KoenigsChart koenigs(cplx c, cplx x, int p, double radius);

struct LimitModelOptions {
  std::uint64_t seed = 7;
  int threads = 1;
  double chart_radius = 0.25;
  std::size_t julia_samples = 0;  // 0 -> 40 * n_points
  double inner_scale = 1e-3;      // innermost saturation ring, relative to r
};

/// L_c in the chart coordinate, sampled inside the closed disk D_r.
///
/// Julia points in the chart are mapped by phi and folded by powers of rho
/// into the annulus r/|rho| < |w| <= r, then the annulus sample is replicated
/// inward by rho^{-k}; L = rho L makes every copy exact. Contains 0.
PointCloud limit_model(const MisiurewiczPoint& m, double r, std::size_t n_points,
                       const LimitModelOptions& opts = {});

/// Same construction from an explicit chart.
PointCloud limit_model(const KoenigsChart& chart, double r, std::size_t n_points,
                       const LimitModelOptions& opts = {});

/// Julia points near the chart base. Level k is a fresh inverse-iteration
/// sample of the chart disk, of size seed_points * growth^k, pulled back by
/// g^k. Every point is an exact preimage, and deeper scales receive more
/// samples, so rescalings by rho^n see a density that grows with n.
PointCloud julia_near_base(const KoenigsChart& chart, std::size_t seed_points, int levels,
                           double growth = 1.0, std::uint64_t seed = 11, int threads = 1);

/// (alpha^n (B - center)) ∩ D_r with 256 samples of the circle |w| = r appended.
PointCloud rescaled_truncation(const PointCloud& B, cplx center, cplx alpha, int n, double r,
                               std::size_t boundary_samples = 256);

}  // namespace fsl
