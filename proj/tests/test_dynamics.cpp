#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fsl/dynamics.hpp"
#include "fsl/error.hpp"
#include "fsl/kdtree.hpp"

using fsl::Angle;
using fsl::cplx;
using fsl::Window;

namespace {

const cplx I{0.0, 1.0};

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

bool bounded(cplx c, cplx z, int n) {
  for (int k = 0; k < n; ++k) {
    if (std::abs(z) > 2.0) return false;
    z = z * z + c;
  }
  return true;
}

}  // namespace

TEST_CASE("escape_time") {
  const auto e = fsl::escape_time(0.0, 3.0, 100, 2.0);
  CHECK(e.escaped());
  CHECK(e.iterations == 0);
  CHECK(e.potential == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fsl::escape_time(0.0, 0.5, 100, 2.0).interior);
  CHECK(fsl::escape_time(-2.0, 2.0, 100, 2.0).interior);
  CHECK(fsl::escape_time(0.0, 0.5, 100, 2.0).potential == 0.0);
}

TEST_CASE("green potential") {
  CHECK(fsl::green_potential(0.0, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(fsl::green_potential(0.0, cplx(1.0, 1.0)) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
  CHECK(fsl::green_potential(I, 0.0) == 0.0);
  CHECK(fsl::green_potential(-2.0, 1.3) == 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int k = 0; k < 200; ++k) {
    const cplx c{u(rng) * 0.4, u(rng) * 0.4};
    const cplx z{u(rng), u(rng)};
    const double g = fsl::green_potential(c, z);
    if (g < 1e-6) continue;
    CHECK(std::abs(fsl::green_potential(c, z * z + c) - 2.0 * g) <= 1e-8);
  }
}

TEST_CASE("dynamic rays land") {
  auto r = fsl::trace_dynamic_ray(-2.0, Angle());
  CHECK(r.landed);
  CHECK(std::abs(r.landing_estimate - 2.0) < 1e-6);

  r = fsl::trace_dynamic_ray(0.0, Angle(1, 3));
  CHECK(r.landed);
  CHECK(std::abs(r.landing_estimate - std::polar(1.0, 2 * std::numbers::pi / 3)) < 1e-6);

  r = fsl::trace_dynamic_ray(0.0, Angle());
  CHECK(std::abs(r.landing_estimate - 1.0) < 1e-6);

  for (std::size_t k = 1; k < r.potentials.size(); ++k)
    CHECK(r.potentials[k] < r.potentials[k - 1]);
}

TEST_CASE("parameter rays land") {
  // The cusp is parabolic: the ray closes in only like 1/n^2 after n levels.
  auto r = fsl::trace_parameter_ray(Angle());
  CHECK(std::abs(r.landing_estimate - 0.25) < 1e-3);
  r = fsl::trace_parameter_ray(Angle(1, 2));
  CHECK(std::abs(r.landing_estimate + 2.0) < 1e-4);
  r = fsl::trace_parameter_ray(Angle(1, 6));
  CHECK(std::abs(r.landing_estimate - I) < 1e-3);
}

TEST_CASE("rays are permuted by the dynamics") {
  // theta and 2 theta at c = i: f maps the landing point of one to the other.
  for (auto [p, q] : {std::pair{1, 6}, {1, 12}, {5, 12}, {1, 24}}) {
    const Angle t(p, q);
    const auto a = fsl::trace_dynamic_ray(I, t);
    const auto b = fsl::trace_dynamic_ray(I, fsl::times_d(t, 2));
    const cplx fa = a.landing_estimate * a.landing_estimate + I;
    CHECK(std::abs(fa - b.landing_estimate) < 1e-5);
  }
}

TEST_CASE("julia samples") {
  fsl::JuliaSampleOptions o;
  o.seed = 4;
  const auto circle = fsl::sample_julia(0.0, 5000, o);
  CHECK(circle.size() == 5000);
  for (const cplx& z : circle.points) REQUIRE(std::abs(std::abs(z) - 1.0) < 1e-4);

  const auto segment = fsl::sample_julia(-2.0, 5000, o);
  for (const cplx& z : segment.points) {
    REQUIRE(std::abs(z.imag()) < 1e-4);
    REQUIRE(std::abs(z.real()) <= 2.0 + 1e-4);
  }

  o.window = Window::around(I - 1.0, 0.1);
  const auto local = fsl::sample_julia(I, 500, o);
  CHECK_FALSE(local.empty());
  for (const cplx& z : local.points) {
    CHECK(o.window->contains(z));
    // Rounding is amplified along the orbit, so only a short one is followed.
    CHECK(bounded(I, z, 30));
  }
}

TEST_CASE("julia sampling is deterministic and thread independent") {
  fsl::JuliaSampleOptions o;
  o.seed = 99;
  const auto a = fsl::sample_julia(I, 20000, o);
  o.threads = 4;
  const auto b = fsl::sample_julia(I, 20000, o);
  CHECK(a.points == b.points);
}

TEST_CASE("julia clouds are forward invariant") {
  // Each kept point maps to its predecessor in the chain, so only the first
  // point of every chain lacks an image in the cloud.
  fsl::JuliaSampleOptions o;
  o.seed = 8;
  const auto cloud = fsl::sample_julia(I, 20000, o);
  const fsl::KdTree tree(cloud.points);
  int missing = 0;
  for (const cplx& z : cloud.points) missing += tree.nearest2(z * z + I) > 1e-20;
  CHECK(missing <= o.chains);
}

TEST_CASE("boundary scan of the Julia set") {
  fsl::JuliaSampleOptions o;
  o.method = fsl::JuliaMethod::BoundaryScan;
  o.resolution = 200;
  const auto circle = fsl::sample_julia(0.0, 1, o);
  CHECK(circle.size() > 100);
  for (const cplx& z : circle.points) CHECK(std::abs(std::abs(z) - 1.0) < 0.03);
}

TEST_CASE("Mandelbrot boundary sampling") {
  CHECK(fsl::sample_mandelbrot_boundary(Window::around(0.0, 0.2), 64).empty());

  // Thickening would fill the narrow exterior cusp, so use exact membership.
  fsl::BoundaryOptions exact;
  exact.thickness = 0.0;
  const auto cusp = fsl::sample_mandelbrot_boundary(Window::around(0.25, 0.05), 64, exact);
  REQUIRE_FALSE(cusp.empty());
  double nearest = 1.0;
  for (const cplx& c : cusp.points) nearest = std::min(nearest, std::abs(c - 0.25));
  CHECK(nearest < 0.01);

  const auto sym = fsl::sample_mandelbrot_boundary(Window{-1.0, 0.5, -1.0, 1.0}, 101);
  const fsl::KdTree tree(sym.points);
  const double cell = 2.0 / 100.0;
  for (const cplx& c : sym.points) CHECK(std::sqrt(tree.nearest2(std::conj(c))) <= cell);
}

TEST_CASE("boundary points straddle the dichotomy") {
  // Each point is the midpoint of a final bisection bracket along one grid
  // axis; rebuild the bracket half-width and check that its ends disagree.
  fsl::BoundaryOptions o;
  o.thickness = 0.0;
  const Window w = Window::around(-0.75, 0.3);
  const int res = 80;
  const auto pts = fsl::sample_mandelbrot_boundary(w, res, o);
  REQUIRE_FALSE(pts.empty());
  double half = 0.6 / double(res - 1);
  while (half > o.bisection_tol) half *= 0.5;
  half *= 0.5;
  const auto in = [](cplx c) { return fsl::escape_time(c, 0.0, 1000, 2.0).interior; };
  int straddle = 0;
  for (const cplx& c : pts.points)
    straddle += in(c - half) != in(c + half) || in(c - cplx(0.0, half)) != in(c + cplx(0.0, half));
  CHECK(straddle == int(pts.size()));
}

TEST_CASE("render_grid") {
  const Window w{-2.0, 0.5, -1.25, 1.25};
  const auto img = fsl::render_grid(fsl::Plane::parameter(), w, 120, fsl::Coloring::Grayscale, 200);
  CHECK(img.width == 120);
  CHECK(img.height == 120);
  const auto again =
      fsl::render_grid(fsl::Plane::parameter(), w, 120, fsl::Coloring::Grayscale, 200, 4);
  CHECK(img.rgb == again.rgb);
  CHECK(fnv1a(img.rgb) == 0x17f95327afa0bfb3ull);

  // z^2 on a centered square: invariant under a quarter turn.
  const auto disk = fsl::render_grid(fsl::Plane::dynamic(0.0), Window::around(0.0, 1.5), 64,
                                     fsl::Coloring::Bands, 100);
  int mismatches = 0;
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) {
      const auto at = [&](int row, int col) { return disk.rgb[std::size_t(row * 64 + col) * 3]; };
      mismatches += std::abs(int(at(r, c)) - int(at(c, 63 - r))) > 1;
    }
  CHECK(mismatches == 0);

  CHECK_THROWS_AS(fsl::render_grid(fsl::Plane::parameter(), Window{0.0, 0.0, 0.0, 1.0}, 10),
                  fsl::Error);
}
