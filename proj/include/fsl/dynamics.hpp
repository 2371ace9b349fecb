#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fsl/angles.hpp"
#include "fsl/cloud.hpp"

namespace fsl {

// Quadratic family f_c(z) = z^2 + c.

struct EscapeResult {
  int iterations = 0;     // first n with |f_c^n(z)| > radius, or the budget
  bool interior = false;  // budget exhausted without escaping
  double final_modulus = 0.0;
  double potential = 0.0;  // Green's function, 0 when interior

  bool escaped() const { return !interior; }
};

/// Escape-time iteration of z under f_c. The potential is computed by
/// continuing the orbit far past the radius so it is accurate to rounding.
EscapeResult escape_time(cplx c, cplx z, int max_iter, double radius);

inline constexpr int kPotentialMaxIter = 100000;

/// G_c(z) = lim log|f_c^n(z)| / 2^n; 0 on the filled Julia set (up to the
/// iteration budget).
double green_potential(cplx c, cplx z, int max_iter = kPotentialMaxIter);

/// Exterior distance estimate |w| log|w| / |dw/dz| (dynamic plane) or
/// |w| log|w| / |dw/dc| (parameter plane); nullopt when the point does not
/// escape within max_iter.
std::optional<double> distance_estimate_dynamic(cplx c, cplx z, int max_iter);
std::optional<double> distance_estimate_parameter(cplx c, int max_iter);

struct RayTrace {
  std::vector<cplx> vertices;
  std::vector<double> potentials;  // strictly decreasing
  Angle theta;
  bool landed = false;
  cplx landing_estimate{};
};

struct RayOptions {
  double escape_radius = 1000.0;
  int substeps = 8;          // vertices per halving of the potential
  int newton_max_iter = 64;
  double landing_increment = 1e-9;
  double reject_factor = 4.0;  // step rejected if |dz| > factor * previous
  int max_refinements = 24;    // successive halvings of a rejected step
};

inline constexpr double kLandingPotential = 1e-12;

/// External ray R^theta of f_c traced inward by Newton's method on
/// f_c^n(z) = exp(2^n (G + 2 pi i theta)). `levels` bounds the number of
/// potential halvings. Throws RayBroken when Newton fails to converge.
RayTrace trace_dynamic_ray(cplx c, const Angle& theta,
                           double target_potential = kLandingPotential,
                           int levels = 200, const RayOptions& opts = {});

/// Parameter-plane ray of the Mandelbrot set, using Phi_M(c) = Phi_c(c).
RayTrace trace_parameter_ray(const Angle& theta,
                             double target_potential = kLandingPotential,
                             int levels = 200, const RayOptions& opts = {});

enum class JuliaMethod { InverseIteration, BoundaryScan };

struct JuliaSampleOptions {
  JuliaMethod method = JuliaMethod::InverseIteration;
  std::optional<Window> window;
  std::uint64_t seed = 1;
  int threads = 1;
  int chains = 64;          // independent inverse-iteration chains
  int burn_in = 100;
  int resolution = 0;       // boundary scan grid side; 0 derives from n_points
  int max_iter = 1000;      // boundary scan escape budget
};

/// Point sample of J_c. Inverse iteration picks a random square-root branch
/// per step (fixed seed per chain, burn-in discarded); with a window, only
/// points inside it are kept. Boundary scan finds grid edges where the
/// thickened membership test flips and bisects them.
PointCloud sample_julia(cplx c, std::size_t n_points, const JuliaSampleOptions& opts = {});

struct BoundaryOptions {
  int max_iter = 1000;
  double bisection_tol = 1e-6;
  /// Points with exterior distance estimate below thickness * cell count as
  /// members, so thin filaments straddle grid edges.
  double thickness = 1.0;
  int threads = 1;
};

/// Points of the Mandelbrot-set boundary inside the window: grid edges whose
/// endpoints disagree on membership, bisected to opts.bisection_tol.
PointCloud sample_mandelbrot_boundary(const Window& window, int resolution,
                                      const BoundaryOptions& opts = {});

enum class PlaneKind { Dynamic, Parameter };

struct Plane {
  PlaneKind kind = PlaneKind::Parameter;
  cplx c{};  // used for the dynamic plane

  static Plane parameter() { return {PlaneKind::Parameter, {}}; }
  static Plane dynamic(cplx c) { return {PlaneKind::Dynamic, c}; }
};

enum class Coloring { Grayscale, Bands };

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel, top row first
};

inline constexpr int kMaxRenderResolution = 16384;

/// Escape-time rendering; `resolution` is the pixel width and the height
/// follows the window aspect ratio. Rows are computed independently so the
/// buffer is identical for any thread count.
Image render_grid(const Plane& plane, const Window& window, int resolution,
                  Coloring coloring = Coloring::Grayscale, int max_iter = 500,
                  int threads = 1);

}  // namespace fsl
