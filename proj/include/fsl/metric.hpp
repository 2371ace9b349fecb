#pragma once

#include <vector>

#include "fsl/cloud.hpp"

namespace fsl {

inline constexpr std::size_t kDefaultBoundarySamples = 256;
inline constexpr std::size_t kMinBoundarySamples = 64;

/// A_r = (A ∩ D_r) ∪ ∂D_r, with the circle represented by equispaced samples.
struct TruncatedSet {
  PointCloud interior_points;
  std::size_t boundary_samples = kDefaultBoundarySamples;
  double r = 1.0;

  std::vector<cplx> boundary() const;
  /// Interior points followed by the circle samples.
  std::vector<cplx> all_points() const;
};

/// Throws InvalidArgument for r <= 0 or fewer than 64 circle samples.
TruncatedSet truncate(const PointCloud& A, double r,
                      std::size_t boundary_samples = kDefaultBoundarySamples);

/// sup over a in A of the distance to B (discrete, via a kd-tree).
double directed_hausdorff(const std::vector<cplx>& A, const std::vector<cplx>& B);

/// Hausdorff distance between truncations of equal radius. Equal to the
/// brute-force double loop over dist2 bit-for-bit. Throws RadiusMismatch.
double hausdorff(const TruncatedSet& A, const TruncatedSet& B);

/// Largest nearest-neighbour distance among the points of a cloud.
double resolution_floor(const std::vector<cplx>& points);

/// Resolution floor of the interior points of a truncation, measured
/// against the full truncated set.
double resolution_floor(const TruncatedSet& T);

/// d((alpha^n (B - center))_r, model_r) for n in [n_first, n_last].
/// Throws EmptyWindow when a rescaled cloud misses D_r but the model does not.
std::vector<double> selfsim_profile(const PointCloud& B, cplx center, cplx alpha,
                                    const PointCloud& model, double r, int n_first, int n_last,
                                    int threads = 1,
                                    std::size_t boundary_samples = kDefaultBoundarySamples);

struct SimilarityOptions {
  int modulus_steps = 32;
  int arg_steps = 64;
  int refine_rounds = 3;
  int refine_steps = 9;  // per axis in each refinement round
  int threads = 1;
};

struct SimilarityResult {
  cplx lambda_star{1.0, 0.0};
  double dist_star = 0.0;
  double resolution_floor = 0.0;
};

/// Objective d((lambda A)_r, B_r), with ∂D_r treated as the exact circle.
double similarity_objective(const PointCloud& A, const PointCloud& B, cplx lambda, double r);

/// Grid search of lambda over 1 <= |lambda| < |rho_B| (log spaced) and
/// arg in [0, 2 pi), then local refinement around the incumbent. The argmin
/// is reduced in a fixed order, so results do not depend on threads.
SimilarityResult best_similarity(const PointCloud& A, const PointCloud& B, cplx rho_B, double r,
                                 const SimilarityOptions& opts = {});

}  // namespace fsl
