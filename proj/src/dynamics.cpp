#include "fsl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fsl/error.hpp"
#include "fsl/parallel.hpp"

namespace fsl {

namespace {

constexpr double kPotentialRadius = 1e50;

double norm2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Continue iterating an escaped orbit until |z| is huge, then read off G.
double potential_from(cplx c, cplx z, int n) {
  double scale = std::ldexp(1.0, -n);
  while (norm2(z) < kPotentialRadius * kPotentialRadius) {
    z = z * z + c;
    scale *= 0.5;
  }
  return std::log(std::abs(z)) * scale;
}

}  // namespace

EscapeResult escape_time(cplx c, cplx z, int max_iter, double radius) {
  const double r2 = radius * radius;
  for (int n = 0; n <= max_iter; ++n) {
    if (norm2(z) > r2) return {n, false, std::abs(z), potential_from(c, z, n)};
    if (n == max_iter) break;
    z = z * z + c;
  }
  return {max_iter, true, std::abs(z), 0.0};
}

double green_potential(cplx c, cplx z, int max_iter) {
  return escape_time(c, z, max_iter, 1e6).potential;
}

std::optional<double> distance_estimate_dynamic(cplx c, cplx z, int max_iter) {
  cplx dz = 1.0;
  for (int n = 0; n < max_iter; ++n) {
    if (norm2(z) > 1e20) {
      const double r = std::abs(z);
      return r * std::log(r) / std::abs(dz);
    }
    dz = 2.0 * z * dz;
    z = z * z + c;
  }
  return std::nullopt;
}

std::optional<double> distance_estimate_parameter(cplx c, int max_iter) {
  cplx z = 0.0;
  cplx dz = 0.0;
  for (int n = 0; n < max_iter; ++n) {
    if (norm2(z) > 1e20) {
      const double r = std::abs(z);
      return r * std::log(r) / std::abs(dz);
    }
    dz = 2.0 * z * dz + 1.0;
    z = z * z + c;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// External rays

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct RayTracer {
  bool parameter;
  cplx c;
  Angle theta;
  RayOptions opts;
  std::vector<double> doubled;  // frac(2^n theta) as doubles

  double angle_at(int n) {
    while (int(doubled.size()) <= n) {
      Angle a = theta;
      for (std::size_t k = 0; k < doubled.size(); ++k) a = times_d(a, 2);
      doubled.push_back(a.to_double());
    }
    return doubled[std::size_t(n)];
  }

  struct Solved {
    cplx z;
    double noise;  // attainable accuracy of z
  };

  // Solves w_n(z) = target by Newton from z, where w_n = f_c^n(z) in the
  // dynamic plane and f_z^n(z) (critical value orbit) in the parameter plane.
  // A running bound on the rounding error of w_n, divided by |w_n'|, is the
  // accuracy the solve can reach; it is returned as `noise`.
  std::optional<Solved> newton(cplx z, int n, cplx target) const {
    for (int it = 0; it < opts.newton_max_iter; ++it) {
      cplx w = z, dw = 1.0;
      double err = kEps * std::abs(z);
      for (int k = 0; k < n; ++k) {
        const double mod = std::abs(w);
        if (parameter) {
          dw = 2.0 * w * dw + 1.0;
          w = w * w + z;
          err = 2.0 * mod * err + kEps * (std::abs(w) + std::abs(z));
        } else {
          dw = 2.0 * w * dw;
          w = w * w + c;
          err = 2.0 * mod * err + kEps * std::abs(w);
        }
      }
      if (!std::isfinite(norm2(w)) || !std::isfinite(norm2(dw)) || dw == 0.0)
        return std::nullopt;
      const cplx step = (w - target) / dw;
      z -= step;
      if (!std::isfinite(norm2(z))) return std::nullopt;
      const double noise = err / std::abs(dw);
      if (std::abs(step) <= std::max(1e-15 * (1.0 + std::abs(z)), 4.0 * noise))
        return Solved{z, noise};
    }
    return std::nullopt;
  }

  RayTrace run(double target_potential, int levels) {
    RayTrace out;
    out.theta = theta;
    const double g0 = std::log(opts.escape_radius);
    cplx z = std::polar(opts.escape_radius, 2 * std::numbers::pi * theta.to_double());
    out.vertices.push_back(z);
    out.potentials.push_back(g0);

    const double base_h = 1.0 / opts.substeps;
    double s = 0.0;
    double h = base_h;
    double prev_step = 0.0;
    int refinements = 0;
    int stalled = 0;  // consecutive steps at the rounding floor of z
    while (s + 1e-12 < double(levels)) {
      const double s_try = s + h;
      const int n = std::max(1, int(std::ceil(s_try - 1e-12)));
      const double g = g0 * std::exp2(-s_try);
      const double log_mod = std::ldexp(g, n);
      const cplx target = std::polar(std::exp(log_mod), 2 * std::numbers::pi * angle_at(n));
      const auto solved = newton(z, n, target);
      const std::optional<cplx> next = solved ? std::optional<cplx>(solved->z) : std::nullopt;
      const double step = next ? std::abs(*next - z) : 0.0;
      const double floor = 64 * kEps * (1.0 + std::abs(z));
      const bool ok = next && (prev_step == 0.0 || step <= floor ||
                               step <= opts.reject_factor * prev_step);
      if (!ok) {
        if (++refinements > opts.max_refinements)
          throw RayBrokenError(z, "ray " + theta.str() + " broke at potential " +
                                      std::to_string(out.potentials.back()));
        h *= 0.5;
        continue;
      }
      refinements = 0;
      z = *next;
      s = s_try;
      prev_step = step;
      h = std::min(base_h, 2 * h);
      out.vertices.push_back(z);
      out.potentials.push_back(g);
      stalled = step <= floor ? stalled + 1 : 0;
      // Resolution limit: the solve is no sharper than the step it produced.
      const bool resolved_out = solved->noise > 0.1 * step;
      if ((g < target_potential && step < opts.landing_increment) || stalled >= opts.substeps ||
          resolved_out) {
        out.landed = true;
        break;
      }
    }
    out.landing_estimate = out.vertices.back();
    return out;
  }
};

}  // namespace

RayTrace trace_dynamic_ray(cplx c, const Angle& theta, double target_potential, int levels,
                           const RayOptions& opts) {
  RayTracer tracer{false, c, theta, opts, {}};
  return tracer.run(target_potential, levels);
}

RayTrace trace_parameter_ray(const Angle& theta, double target_potential, int levels,
                             const RayOptions& opts) {
  RayTracer tracer{true, 0.0, theta, opts, {}};
  return tracer.run(target_potential, levels);
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                    std::uint32_t(stream >> 32)};
  std::uint64_t out[1];
  std::uint32_t parts[2];
  seq.generate(parts, parts + 2);
  out[0] = (std::uint64_t(parts[0]) << 32) | parts[1];
  return out[0];
}

// Membership with a thickening: non-escaping points, and escaping points
// closer than `eps` by the distance estimate, count as inside.
template <class DE>
bool thick_member(DE&& de, double eps) {
  const auto d = de();
  return !d || *d < eps;
}

struct EdgeScan {
  const Window& window;
  int nx;
  int ny;
  double tol;
  int threads;

  cplx at(int i, int j) const {
    return {window.re_min + window.width() * double(i) / double(nx - 1),
            window.im_min + window.height() * double(j) / double(ny - 1)};
  }

  template <class Member>
  std::vector<cplx> run(Member&& member) const {
    std::vector<std::uint8_t> grid(std::size_t(nx) * std::size_t(ny));
    parallel_for(std::size_t(ny), threads, [&](std::size_t j) {
      for (int i = 0; i < nx; ++i)
        grid[j * std::size_t(nx) + std::size_t(i)] = member(at(i, int(j))) ? 1 : 0;
    });
    // Row j owns its horizontal edges and the vertical edges to row j+1.
    std::vector<std::vector<cplx>> rows(static_cast<std::size_t>(ny));
    parallel_for(std::size_t(ny), threads, [&](std::size_t j) {
      auto bisect = [&](cplx a, bool ma, cplx b) {
        while (std::abs(b - a) > tol) {
          const cplx mid = 0.5 * (a + b);
          if (member(mid) == ma)
            a = mid;
          else
            b = mid;
        }
        rows[j].push_back(0.5 * (a + b));
      };
      const auto g = [&](int i, std::size_t jj) {
        return grid[jj * std::size_t(nx) + std::size_t(i)] != 0;
      };
      for (int i = 0; i < nx; ++i) {
        const bool m = g(i, j);
        if (i + 1 < nx && g(i + 1, j) != m) bisect(at(i, int(j)), m, at(i + 1, int(j)));
        if (int(j) + 1 < ny && g(i, j + 1) != m) bisect(at(i, int(j)), m, at(i, int(j) + 1));
      }
    });
    std::vector<cplx> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
  }
};

PointCloud inverse_iteration(cplx c, std::size_t n_points, const JuliaSampleOptions& opts) {
  const std::size_t chains = std::size_t(std::max(1, opts.chains));
  std::vector<std::vector<cplx>> per_chain(chains);
  parallel_for(chains, opts.threads, [&](std::size_t k) {
    const std::size_t quota = n_points * (k + 1) / chains - n_points * k / chains;
    std::mt19937_64 rng(mix_seed(opts.seed, k));
    std::bernoulli_distribution coin(0.5);
    auto& out = per_chain[k];
    out.reserve(quota);
    cplx z{0.5, 0.5};
    for (int b = 0; b < opts.burn_in; ++b) {
      z = std::sqrt(z - c);
      if (coin(rng)) z = -z;
    }
    // With a window most steps are rejected; cap the work.
    const std::size_t budget = opts.window ? quota * 20000 + 100000 : quota;
    for (std::size_t step = 0; out.size() < quota && step < budget; ++step) {
      z = std::sqrt(z - c);
      if (coin(rng)) z = -z;
      if (!opts.window || opts.window->contains(z)) out.push_back(z);
    }
  });
  PointCloud cloud;
  for (auto& v : per_chain) cloud.points.insert(cloud.points.end(), v.begin(), v.end());
  return cloud;
}

}  // namespace

PointCloud sample_julia(cplx c, std::size_t n_points, const JuliaSampleOptions& opts) {
  if (n_points < 1) throw Error(ErrorCode::InvalidArgument, "n_points must be >= 1");
  if (opts.window) opts.window->validate();
  PointCloud cloud;
  if (opts.method == JuliaMethod::InverseIteration) {
    cloud = inverse_iteration(c, n_points, opts);
    cloud.meta = "julia inverse_iteration";
  } else {
    const Window w = opts.window.value_or(Window{-2.0, 2.0, -2.0, 2.0});
    const int side = opts.resolution > 0
                         ? opts.resolution
                         : std::max(2, int(std::ceil(std::sqrt(double(n_points)))) * 2);
    const double cell = std::max(w.width(), w.height()) / double(side - 1);
    EdgeScan scan{w, side, side, std::min(1e-6, cell / 16), opts.threads};
    const int max_iter = opts.max_iter;
    cloud.points = scan.run([&](cplx z) {
      return thick_member([&] { return distance_estimate_dynamic(c, z, max_iter); }, cell);
    });
    cloud.meta = "julia boundary_scan";
  }
  cloud.meta += " c=" + std::to_string(c.real()) + "," + std::to_string(c.imag());
  return cloud;
}

PointCloud sample_mandelbrot_boundary(const Window& window, int resolution,
                                      const BoundaryOptions& opts) {
  window.validate();
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 2");
  const double cell = std::max(window.width(), window.height()) / double(resolution - 1);
  const double eps = opts.thickness * cell;
  EdgeScan scan{window, resolution, resolution, std::min(opts.bisection_tol, cell / 16),
                opts.threads};
  const int max_iter = opts.max_iter;
  PointCloud cloud;
  cloud.points = scan.run([&](cplx c) {
    if (eps <= 0.0) return escape_time(c, 0.0, max_iter, 2.0).interior;
    return thick_member([&] { return distance_estimate_parameter(c, max_iter); }, eps);
  });
  cloud.meta = "mandelbrot boundary";
  return cloud;
}

// ---------------------------------------------------------------------------
// Rendering

Image render_grid(const Plane& plane, const Window& window, int resolution, Coloring coloring,
                  int max_iter, int threads) {
  window.validate();
  if (resolution < 1 || resolution > kMaxRenderResolution)
    throw Error(ErrorCode::InvalidArgument, "render resolution out of range");
  Image img;
  img.width = resolution;
  img.height = std::clamp(int(std::lround(resolution * window.height() / window.width())), 1,
                          kMaxRenderResolution);
  img.rgb.assign(std::size_t(img.width) * std::size_t(img.height) * 3, 0);
  parallel_for(std::size_t(img.height), threads, [&](std::size_t row) {
    const double im = window.im_max - window.height() * (double(row) + 0.5) / img.height;
    for (int col = 0; col < img.width; ++col) {
      const double re = window.re_min + window.width() * (double(col) + 0.5) / img.width;
      const cplx p{re, im};
      const EscapeResult e = plane.kind == PlaneKind::Parameter
                                 ? escape_time(p, 0.0, max_iter, 2.0)
                                 : escape_time(plane.c, p, max_iter, 2.0);
      std::uint8_t r = 0, g = 0, b = 0;
      if (e.escaped()) {
        // Continuous escape count from the potential.
        const double nu = std::max(0.0, -std::log2(std::max(e.potential, 1e-300)));
        if (coloring == Coloring::Grayscale) {
          const double t = std::clamp(nu / 40.0, 0.0, 1.0);
          r = g = b = std::uint8_t(std::lround(255.0 * (1.0 - t)));
        } else {
          const double t = nu * 0.35;
          r = std::uint8_t(std::lround(127.5 * (1 + std::cos(t))));
          g = std::uint8_t(std::lround(127.5 * (1 + std::cos(t + 2.1))));
          b = std::uint8_t(std::lround(127.5 * (1 + std::cos(t + 4.2))));
        }
      }
      const std::size_t idx = (row * std::size_t(img.width) + std::size_t(col)) * 3;
      img.rgb[idx] = r;
      img.rgb[idx + 1] = g;
      img.rgb[idx + 2] = b;
    }
  });
  return img;
}

}  // namespace fsl
