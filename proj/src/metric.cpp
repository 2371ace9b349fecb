#include "fsl/metric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "fsl/error.hpp"
#include "fsl/kdtree.hpp"
#include "fsl/parallel.hpp"

namespace fsl {

std::vector<cplx> TruncatedSet::boundary() const {
  std::vector<cplx> out(boundary_samples);
  for (std::size_t j = 0; j < boundary_samples; ++j)
    out[j] = std::polar(r, 2.0 * std::numbers::pi * double(j) / double(boundary_samples));
  return out;
}

std::vector<cplx> TruncatedSet::all_points() const {
  std::vector<cplx> out = interior_points.points;
  const auto circle = boundary();
  out.insert(out.end(), circle.begin(), circle.end());
  return out;
}

TruncatedSet truncate(const PointCloud& A, double r, std::size_t boundary_samples) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation radius must be positive");
  if (boundary_samples < kMinBoundarySamples)
    throw Error(ErrorCode::InvalidArgument, "at least 64 boundary samples are required");
  TruncatedSet t;
  t.r = r;
  t.boundary_samples = boundary_samples;
  t.interior_points.meta = A.meta;
  for (cplx z : A.points)
    if (std::abs(z) <= r) t.interior_points.points.push_back(z);
  return t;
}

namespace {

double directed2(const std::vector<cplx>& A, const KdTree& tree, int threads) {
  std::vector<double> d(A.size());
  parallel_for(A.size(), threads, [&](std::size_t i) { d[i] = tree.nearest2(A[i]); });
  double worst = 0.0;
  for (double v : d) worst = std::max(worst, v);
  return worst;
}

double hausdorff_points(const std::vector<cplx>& a, const std::vector<cplx>& b, int threads) {
  const KdTree ta(a), tb(b);
  return std::sqrt(std::max(directed2(a, tb, threads), directed2(b, ta, threads)));
}

}  // namespace

double directed_hausdorff(const std::vector<cplx>& A, const std::vector<cplx>& B) {
  if (A.empty()) return 0.0;
  return std::sqrt(directed2(A, KdTree(B), 1));
}

double hausdorff(const TruncatedSet& A, const TruncatedSet& B) {
  if (A.r != B.r)
    throw Error(ErrorCode::RadiusMismatch, "truncations have radii " + std::to_string(A.r) +
                                               " and " + std::to_string(B.r));
  return hausdorff_points(A.all_points(), B.all_points(), 1);
}

double resolution_floor(const std::vector<cplx>& points) {
  if (points.size() < 2) return 0.0;
  const KdTree tree(points);
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) worst = std::max(worst, tree.nearest2(points[i], i));
  return std::sqrt(worst);
}

double resolution_floor(const TruncatedSet& T) {
  const auto all = T.all_points();
  const KdTree tree(all);
  double worst = 0.0;
  for (std::size_t i = 0; i < T.interior_points.size(); ++i)
    worst = std::max(worst, tree.nearest2(all[i], i));
  return std::sqrt(worst);
}

std::vector<double> selfsim_profile(const PointCloud& B, cplx center, cplx alpha,
                                    const PointCloud& model, double r, int n_first, int n_last,
                                    int threads, std::size_t boundary_samples) {
  if (n_last < n_first) throw Error(ErrorCode::InvalidArgument, "empty n range");
  const TruncatedSet mt = truncate(model, r, boundary_samples);
  const auto m_all = mt.all_points();
  const KdTree m_tree(m_all);
  std::vector<double> out;
  for (int n = n_first; n <= n_last; ++n) {
    const cplx a = std::pow(alpha, n);
    PointCloud scaled;
    scaled.points.reserve(B.size());
    for (cplx b : B.points) scaled.points.push_back(a * (b - center));
    const TruncatedSet st = truncate(scaled, r, boundary_samples);
    if (st.interior_points.empty() && !mt.interior_points.empty())
      throw Error(ErrorCode::EmptyWindow,
                  "rescaled cloud has no points in the disk at n = " + std::to_string(n));
    const auto s_all = st.all_points();
    const KdTree s_tree(s_all);
    out.push_back(std::sqrt(std::max(directed2(s_all, m_tree, threads),
                                     directed2(m_all, s_tree, threads))));
  }
  return out;
}

namespace {

// A restricted to |a| <= r / m, indexed, for every lambda of modulus m.
struct ScaledSource {
  double m = 1.0;
  std::vector<cplx> pts;
  KdTree tree;
};

ScaledSource make_source(const PointCloud& A, double m, double r) {
  ScaledSource s;
  s.m = m;
  for (cplx a : A.points)
    if (m * std::abs(a) <= r) s.pts.push_back(a);
  s.tree = KdTree(s.pts);
  return s;
}

// The circle is exact here: a point's distance to ∂D_r is r - |z|, and the
// circle itself is matched by the other set's circle at distance 0.
// Returns +inf as soon as the value is known to exceed `abort_above`.
double objective(const ScaledSource& S, const std::vector<cplx>& Br, const KdTree& Btree,
                 cplx lambda, double r,
                 double abort_above = std::numeric_limits<double>::infinity()) {
  const double m = S.m;
  double worst = 0.0;
  // A query only matters if it can raise `worst`, so the kd search is
  // bounded by it; points that beat the bound get an exact query.
  auto consider = [&](double rim, const KdTree& tree, cplx q, double scale) {
    if (rim <= worst) return;
    double d = rim;
    if (!tree.empty()) {
      const double w2 = (worst / scale) * (worst / scale);
      if (tree.any_within(q, w2)) return;
      d = std::min(d, scale * std::sqrt(tree.nearest2(q)));
    }
    worst = std::max(worst, d);
  };
  for (cplx a : S.pts) {
    const cplx w = lambda * a;
    consider(r - std::abs(w), Btree, w, 1.0);
    if (worst > abort_above) return std::numeric_limits<double>::infinity();
  }
  const cplx inv = 1.0 / lambda;
  for (cplx b : Br) {
    consider(r - std::abs(b), S.tree, b * inv, m);
    if (worst > abort_above) return std::numeric_limits<double>::infinity();
  }
  return worst;
}

std::vector<cplx> restrict_disk(const PointCloud& B, double r) {
  std::vector<cplx> out;
  for (cplx b : B.points)
    if (std::abs(b) <= r) out.push_back(b);
  return out;
}

}  // namespace

double similarity_objective(const PointCloud& A, const PointCloud& B, cplx lambda, double r) {
  if (std::abs(lambda) == 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonzero");
  const auto Br = restrict_disk(B, r);
  const KdTree Btree(Br);
  return objective(make_source(A, std::abs(lambda), r), Br, Btree, lambda, r);
}

SimilarityResult best_similarity(const PointCloud& A, const PointCloud& B, cplx rho_B, double r,
                                 const SimilarityOptions& opts) {
  if (A.empty() || B.empty()) throw Error(ErrorCode::InvalidArgument, "clouds must be nonempty");
  if (!(std::abs(rho_B) > 1.0)) throw Error(ErrorCode::InvalidArgument, "|rho_B| must exceed 1");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const auto Br = restrict_disk(B, r);
  const KdTree Btree(Br);
  const double log_rho = std::log(std::abs(rho_B));

  struct Candidate {
    double log_m, arg;
  };
  // Evaluates candidates, building one index per distinct modulus.
  // Thinned copies give a cheap estimate used only to order the exact pass.
  const auto thin = [](const std::vector<cplx>& v) {
    const std::size_t stride = std::max<std::size_t>(1, v.size() / 1500);
    std::vector<cplx> out;
    for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
    return out;
  };
  PointCloud A_thin;
  A_thin.points = thin(A.points);
  const auto Br_thin = thin(Br);
  const KdTree Btree_thin(Br_thin);

  double incumbent = std::numeric_limits<double>::infinity();
  auto evaluate = [&](const std::vector<Candidate>& cands) {
    std::map<double, std::size_t> slot;
    for (const auto& c : cands) slot.emplace(c.log_m, 0);
    std::vector<double> mods;
    for (auto& [lm, idx] : slot) {
      idx = mods.size();
      mods.push_back(lm);
    }
    std::vector<ScaledSource> sources(mods.size()), thin_sources(mods.size());
    parallel_for(mods.size(), opts.threads, [&](std::size_t i) {
      sources[i] = make_source(A, std::exp(mods[i]), r);
      thin_sources[i] = make_source(A_thin, std::exp(mods[i]), r);
    });
    std::vector<double> rough(cands.size());
    parallel_for(cands.size(), opts.threads, [&](std::size_t i) {
      const auto& c = cands[i];
      const auto& src = thin_sources[slot.at(c.log_m)];
      rough[i] = objective(src, Br_thin, Btree_thin, std::polar(src.m, c.arg), r);
    });
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return rough[x] < rough[y]; });

    // Candidates that provably lose are cut short. A candidate whose value is
    // at most the final minimum is never cut, so the argmin is exact and
    // independent of scheduling.
    std::vector<double> vals(cands.size());
    std::atomic<double> bound{incumbent};
    parallel_for(order.size(), opts.threads, [&](std::size_t k) {
      const std::size_t i = order[k];
      const auto& c = cands[i];
      const auto& src = sources[slot.at(c.log_m)];
      vals[i] = objective(src, Br, Btree, std::polar(src.m, c.arg), r, bound.load());
      double cur = bound.load();
      while (vals[i] < cur && !bound.compare_exchange_weak(cur, vals[i])) {
      }
    });
    return vals;
  };

  std::vector<Candidate> grid;
  const int nm = std::max(1, opts.modulus_steps), na = std::max(1, opts.arg_steps);
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < na; ++j)
      grid.push_back({log_rho * i / nm, 2.0 * std::numbers::pi * j / na});
  auto vals = evaluate(grid);
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;
  Candidate inc = grid[best];
  double inc_val = vals[best];
  incumbent = inc_val;

  double step_m = log_rho / nm, step_a = 2.0 * std::numbers::pi / na;
  const int half = std::max(1, opts.refine_steps / 2);
  for (int round = 0; round < opts.refine_rounds; ++round) {
    step_m /= 4.0;
    step_a /= 4.0;
    std::vector<Candidate> local;
    for (int i = -half; i <= half; ++i)
      for (int j = -half; j <= half; ++j)
        local.push_back({inc.log_m + i * step_m, inc.arg + j * step_a});
    const auto lv = evaluate(local);
    for (std::size_t i = 0; i < lv.size(); ++i)
      if (lv[i] < inc_val) {
        inc_val = lv[i];
        inc = local[i];
      }
    incumbent = inc_val;
  }

  SimilarityResult res;
  res.lambda_star = std::polar(std::exp(inc.log_m), std::remainder(inc.arg, 2.0 * std::numbers::pi));
  res.dist_star = inc_val;
  PointCloud scaled;
  for (cplx a : A.points) scaled.points.push_back(res.lambda_star * a);
  res.resolution_floor = std::max(resolution_floor(truncate(scaled, r)), resolution_floor(truncate(B, r)));
  return res;
}

}  // namespace fsl
