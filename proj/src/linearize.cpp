#include "fsl/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fsl/dynamics.hpp"
#include "fsl/error.hpp"
#include "fsl/parallel.hpp"

namespace fsl {

KoenigsChart::KoenigsChart(cplx c, std::vector<cplx> cycle, cplx rho, double radius)
    : c_(c), cycle_(std::move(cycle)), rho_(rho), radius_(radius) {}

cplx KoenigsChart::pull_deviation(cplx u) const {
  // Deviation v at x_{k+1} pulls back to u at x_k with 2 x_k u + u^2 = v.
  for (int k = period() - 1; k >= 0; --k) {
    const cplx xk = cycle_[std::size_t(k)];
    const cplx v = u;
    cplx s = std::sqrt(xk * xk + v);
    if ((s * std::conj(xk)).real() < 0.0) s = -s;
    u = v / (xk + s);
  }
  return u;
}

cplx KoenigsChart::inverse_branch(cplx z) const { return base() + pull_deviation(z - base()); }

cplx KoenigsChart::forward(cplx z) const {
  for (int k = 0; k < period(); ++k) z = z * z + c_;
  return z;
}

double KoenigsChart::inverse_contraction(cplx z) const {
  cplx w = inverse_branch(z);
  cplx d{1.0, 0.0};
  for (int k = 0; k < period(); ++k) {
    d *= 2.0 * w;
    w = w * w + c_;
  }
  return 1.0 / std::abs(d);
}

cplx KoenigsChart::evaluate(cplx z, int* depth) const {
  cplx u = z - base();
  cplx scale{1.0, 0.0};
  cplx phi = u;
  int n = 0;
  while (n < kKoenigsMaxDepth) {
    const cplx next_u = pull_deviation(u);
    if (std::abs(next_u) > std::abs(u) + 0.5 * radius_)
      throw Error(ErrorCode::BranchLost, "inverse branch left the chart");
    u = next_u;
    scale *= rho_;
    ++n;
    const cplx next = scale * u;
    const double step = std::abs(next - phi);
    phi = next;
    if (step == 0.0 || step <= 1e-14 * std::abs(phi)) break;
    if (!std::isfinite(phi.real()) || !std::isfinite(phi.imag()))
      throw Error(ErrorCode::BranchLost, "non-finite chart value");
  }
  if (depth) *depth = n;
  return phi;
}

KoenigsChart koenigs(cplx c, cplx x, int p, double radius) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "chart radius must be positive");
  multiplier(c, x, p);  // NotPeriodic check
  for (int it = 0; it < 8; ++it) {
    cplx z = x, d{1.0, 0.0};
    for (int k = 0; k < p; ++k) {
      d *= 2.0 * z;
      z = z * z + c;
    }
    const cplx den = d - 1.0;
    if (std::abs(den) < 1e-300) break;
    const cplx step = (z - x) / den;
    x -= step;
    if (std::abs(step) < 1e-17) break;
  }
  std::vector<cplx> cycle;
  cplx z = x;
  for (int k = 0; k < p; ++k) {
    cycle.push_back(z);
    z = z * z + c;
  }
  const cplx rho = multiplier(c, x, p);
  if (std::abs(rho) <= 1.0)
    throw Error(ErrorCode::NotRepelling, "cycle multiplier has modulus " +
                                             std::to_string(std::abs(rho)));
  constexpr int kCircle = 64;
  for (int halvings = 0; halvings < 60; ++halvings, radius *= 0.5) {
    KoenigsChart chart(c, cycle, rho, radius);
    bool ok = true;
    for (int j = 0; j < kCircle && ok; ++j) {
      const cplx w = x + std::polar(radius, 2.0 * std::numbers::pi * j / kCircle);
      ok = chart.inverse_contraction(w) <= 1.0 / kChartContraction &&
           std::abs(chart.inverse_branch(w) - x) < radius;
    }
    if (ok) return chart;
  }
  throw Error(ErrorCode::BranchLost, "no contracting chart radius found");
}

namespace {

std::vector<cplx> julia_in_chart(const KoenigsChart& chart, std::size_t count, std::uint64_t seed,
                                 int threads) {
  JuliaSampleOptions o;
  o.seed = seed;
  o.threads = threads;
  o.window = Window::around(chart.base(), chart.radius());
  const PointCloud raw = sample_julia(chart.c(), count, o);
  std::vector<cplx> out;
  out.reserve(raw.size());
  for (cplx z : raw.points)
    if (std::abs(z - chart.base()) <= chart.radius()) out.push_back(z);
  return out;
}

// Round-robin over grid cells: each pass takes the next point of every
// occupied cell, so thin parts of the set are kept before dense ones repeat.
std::vector<cplx> spread_subsample(const std::vector<cplx>& pts, std::size_t n, double r) {
  if (pts.size() <= n) return pts;
  const int side = std::max(1, int(std::ceil(std::sqrt(double(n)))));
  const double cell = 2.0 * r / side;
  auto key = [&](cplx w) {
    const int i = std::clamp(int(std::floor((w.real() + r) / cell)), 0, side - 1);
    const int j = std::clamp(int(std::floor((w.imag() + r) / cell)), 0, side - 1);
    return i * side + j;
  };
  std::vector<std::uint32_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return key(pts[a]) < key(pts[b]); });
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // [begin, end) in order
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    const int k = key(pts[order[i]]);
    while (j < order.size() && key(pts[order[j]]) == k) ++j;
    cells.emplace_back(i, j);
    i = j;
  }
  std::vector<std::uint32_t> picked;
  picked.reserve(n);
  for (std::size_t pass = 0; picked.size() < n; ++pass)
    for (const auto& [b, e] : cells) {
      if (picked.size() == n) break;
      if (b + pass < e) picked.push_back(order[b + pass]);
    }
  std::sort(picked.begin(), picked.end());
  std::vector<cplx> out;
  out.reserve(n);
  for (std::uint32_t i : picked) out.push_back(pts[i]);
  return out;
}

}  // namespace

PointCloud limit_model(const MisiurewiczPoint& m, double r, std::size_t n_points,
                       const LimitModelOptions& opts) {
  return limit_model(koenigs(m.c, m.x_c, m.period, opts.chart_radius), r, n_points, opts);
}

PointCloud limit_model(const KoenigsChart& chart, double r, std::size_t n_points,
                       const LimitModelOptions& opts) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (n_points < 2) throw Error(ErrorCode::InvalidArgument, "n_points must be >= 2");
  const std::size_t want = opts.julia_samples ? opts.julia_samples : 40 * n_points;
  const auto zs = julia_in_chart(chart, want, opts.seed, opts.threads);

  const cplx rho = chart.rho();
  const double lr = std::log(std::abs(rho));
  std::vector<cplx> ws(zs.size());
  parallel_for(zs.size(), opts.threads, [&](std::size_t i) { ws[i] = chart(zs[i]); });

  // Fold into r/|rho| < |w| <= r.
  std::vector<cplx> annulus;
  annulus.reserve(ws.size());
  for (cplx w : ws) {
    if (std::abs(w) == 0.0) continue;
    int k = int(std::ceil(std::log(std::abs(w) / r) / lr));
    cplx f = w * std::pow(rho, -k);
    while (std::abs(f) > r) f /= rho;
    while (std::abs(f) * std::abs(rho) <= r) f *= rho;
    annulus.push_back(f);
  }

  const int rings = std::max(1, int(std::ceil(std::log(1.0 / opts.inner_scale) / lr)) + 1);
  const std::size_t per_ring = std::max<std::size_t>(1, (n_points - 1) / std::size_t(rings));
  const std::vector<cplx> base = spread_subsample(annulus, per_ring, r);

  PointCloud out;
  out.points.reserve(base.size() * std::size_t(rings) + 1);
  out.points.push_back(0.0);
  cplx s{1.0, 0.0};
  for (int j = 0; j < rings; ++j, s /= rho)
    for (cplx w : base) out.points.push_back(w * s);
  out.meta = "limit model";
  return out;
}

PointCloud julia_near_base(const KoenigsChart& chart, std::size_t seed_points, int levels,
                           double growth, std::uint64_t seed, int threads) {
  if (levels < 0 || !(growth >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "levels must be >= 0 and growth >= 1");
  PointCloud out;
  double size = double(seed_points);
  for (int k = 0; k <= levels; ++k, size *= growth) {
    auto level = julia_in_chart(chart, std::size_t(size), seed + std::uint64_t(k) * 7919, threads);
    parallel_for(level.size(), threads, [&](std::size_t i) {
      for (int j = 0; j < k; ++j) level[i] = chart.inverse_branch(level[i]);
    });
    out.points.insert(out.points.end(), level.begin(), level.end());
  }
  out.points.push_back(chart.base());
  out.meta = "julia near base";
  return out;
}

PointCloud rescaled_truncation(const PointCloud& B, cplx center, cplx alpha, int n, double r,
                               std::size_t boundary_samples) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const cplx a = std::pow(alpha, n);
  PointCloud out;
  for (cplx b : B.points) {
    const cplx w = a * (b - center);
    if (std::abs(w) <= r) out.points.push_back(w);
  }
  for (std::size_t j = 0; j < boundary_samples; ++j)
    out.points.push_back(std::polar(r, 2.0 * std::numbers::pi * double(j) / double(boundary_samples)));
  out.meta = "rescaled truncation";
  return out;
}

}  // namespace fsl
