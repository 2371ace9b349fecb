#include "fsl/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "fsl/error.hpp"

namespace fsl {

Leaf::Leaf(Angle x, Angle y) {
  if (y < x) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
}

namespace {

// Strictly inside the open arc (a, b), a < b.
bool inside(const Angle& t, const Angle& a, const Angle& b) { return a < t && t < b; }

}  // namespace

bool unlinked(const Leaf& l1, const Leaf& l2) {
  if (l1.degenerate() || l2.degenerate()) return true;
  const Angle* e[2] = {&l2.a, &l2.b};
  int in = 0, out = 0;
  for (const Angle* t : e) {
    if (*t == l1.a || *t == l1.b) return true;
    if (inside(*t, l1.a, l1.b))
      ++in;
    else
      ++out;
  }
  return !(in == 1 && out == 1);
}

Leaf image(const Leaf& l, int d) { return Leaf(times_d(l.a, d), times_d(l.b, d)); }

std::size_t Lamination::frontier_count() const {
  return std::size_t(std::count(frontier.begin(), frontier.end(), true));
}

bool pairwise_unlinked(const std::vector<Leaf>& leaves) {
  std::vector<const Leaf*> v;
  for (const auto& l : leaves)
    if (!l.degenerate()) v.push_back(&l);
  std::sort(v.begin(), v.end(), [](const Leaf* x, const Leaf* y) {
    if (x->a != y->a) return x->a < y->a;
    return y->b < x->b;
  });
  std::vector<const Leaf*> stack;
  for (const Leaf* l : v) {
    while (!stack.empty() && stack.back()->b <= l->a) stack.pop_back();
    if (!stack.empty() && stack.back()->b < l->b) return false;
    stack.push_back(l);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

Angle preimage(const Angle& t, int j, int d) {
  return Angle(Rational(t.value() + j) / d);
}

bool unlinked_with_all(const Leaf& l, const std::vector<Leaf>& leaves) {
  for (const auto& m : leaves)
    if (!unlinked(l, m)) return false;
  return true;
}

}  // namespace

Lamination build_quadratic_lamination(const Angle& theta, int depth) {
  if (depth < 0 || depth > kMaxLaminationDepth)
    throw Error(ErrorCode::InvalidArgument, "depth must be in 0..24");
  Lamination L;
  L.degree = 2;
  L.depth = depth;
  if (theta == Angle()) return L;

  const Leaf major(preimage(theta, 0, 2), preimage(theta, 1, 2));
  std::vector<int> generation{0};
  L.leaves.push_back(major);
  std::set<Leaf> seen{major};
  std::size_t gen_begin = 0, gen_end = 1;
  for (int g = 1; g <= depth; ++g) {
    for (std::size_t i = gen_begin; i < gen_end; ++i) {
      const Leaf cur = L.leaves[i];
      if (cur.degenerate()) continue;
      const Angle x0 = preimage(cur.a, 0, 2), x1 = preimage(cur.a, 1, 2);
      const Angle y0 = preimage(cur.b, 0, 2), y1 = preimage(cur.b, 1, 2);
      const std::pair<Leaf, Leaf> options[2] = {{Leaf(x0, y0), Leaf(x1, y1)},
                                                {Leaf(x0, y1), Leaf(x1, y0)}};
      // The major diameter decides the pairing unless an endpoint touches it.
      bool ok[2];
      for (int k = 0; k < 2; ++k)
        ok[k] = unlinked(options[k].first, major) && unlinked(options[k].second, major) &&
                unlinked(options[k].first, options[k].second);
      if (ok[0] && ok[1]) {
        for (int k = 0; k < 2; ++k)
          ok[k] = unlinked_with_all(options[k].first, L.leaves) &&
                  unlinked_with_all(options[k].second, L.leaves);
      }
      int pick = -1;
      if (ok[0] && ok[1]) {
        const Angle m0 = std::min(options[0].first.a, options[0].second.a);
        const Angle m1 = std::min(options[1].first.a, options[1].second.a);
        pick = (m1 < m0 || (m1 == m0 && options[1] < options[0])) ? 1 : 0;
      } else if (ok[0]) {
        pick = 0;
      } else if (ok[1]) {
        pick = 1;
      } else {
        throw Error(ErrorCode::LinkedConflict,
                    "no unlinked pullback of leaf {" + cur.a.str() + ", " + cur.b.str() + "}");
      }
      for (const Leaf& l : {options[pick].first, options[pick].second}) {
        if (!seen.insert(l).second) continue;
        L.leaves.push_back(l);
        generation.push_back(g);
      }
    }
    gen_begin = gen_end;
    gen_end = L.leaves.size();
  }
  if (!pairwise_unlinked(L.leaves))
    throw Error(ErrorCode::LinkedConflict, "pullback produced linked leaves");
  for (int g : generation) L.frontier.push_back(g == depth);
  return L;
}

Lamination chebyshev_lamination(int d, int denominator_cap, int k) {
  if (d < 2) throw Error(ErrorCode::DegreeTooLow, "degree must be >= 2");
  if (denominator_cap < 1) throw Error(ErrorCode::InvalidArgument, "denominator cap must be >= 1");
  if (k < 0 || k > d - 2) throw Error(ErrorCode::InvalidArgument, "family index out of range");
  Lamination L;
  L.degree = d;
  const Rational shift(k, d - 1);
  std::set<Leaf> leaves;
  for (int q = 1; q <= denominator_cap; ++q)
    for (int p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Angle t(p, q);
      Leaf l(t, Angle(shift - t.value()));
      if (!l.degenerate() && l.a.den() <= denominator_cap && l.b.den() <= denominator_cap)
        leaves.insert(l);
    }
  const auto fits = [&](const Angle& t) {
    for (int j = 0; j < d; ++j)
      if (preimage(t, j, d).den() > denominator_cap) return false;
    return true;
  };
  for (const auto& l : leaves) {
    L.leaves.push_back(l);
    L.frontier.push_back(!(fits(l.a) && fits(l.b)));
  }
  return L;
}

std::vector<Lamination> chebyshev_families(int d, int denominator_cap) {
  std::vector<Lamination> out;
  for (int k = 0; k <= d - 2; ++k) out.push_back(chebyshev_lamination(d, denominator_cap, k));
  return out;
}

// ---------------------------------------------------------------------------
// Regions

namespace {

cplx on_circle(double turns) { return std::polar(1.0, 2.0 * std::numbers::pi * turns); }

// Laminar tree of chord intervals: node i is chord i, node n the root.
struct ChordTree {
  std::vector<Leaf> chords;
  std::vector<std::size_t> source;            // index in the lamination
  std::vector<std::vector<std::size_t>> kids; // size chords + 1
  std::size_t root() const { return chords.size(); }
};

ChordTree chord_tree(const Lamination& L) {
  ChordTree t;
  std::set<Leaf> seen;
  for (std::size_t i = 0; i < L.leaves.size(); ++i) {
    const Leaf& l = L.leaves[i];
    if (l.degenerate() || !seen.insert(l).second) continue;
    t.chords.push_back(l);
    t.source.push_back(i);
  }
  std::vector<std::size_t> order(t.chords.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const Leaf &p = t.chords[x], &q = t.chords[y];
    if (p.a != q.a) return p.a < q.a;
    return q.b < p.b;
  });
  t.kids.assign(t.chords.size() + 1, {});
  std::vector<std::size_t> stack;
  for (std::size_t i : order) {
    const Leaf& l = t.chords[i];
    while (!stack.empty() && t.chords[stack.back()].b <= l.a) stack.pop_back();
    if (!stack.empty() && t.chords[stack.back()].b < l.b)
      throw Error(ErrorCode::LinkedConflict, "regions need pairwise unlinked leaves");
    t.kids[stack.empty() ? t.root() : stack.back()].push_back(i);
    stack.push_back(i);
  }
  return t;
}

// Boundary piece of a region: a chord or the ccw circle arc from u to v.
struct Piece {
  bool chord;
  double u, v;
};

struct Region {
  Gap gap;
  std::vector<Piece> pieces;
};

Region region_of(const ChordTree& t, std::size_t node) {
  Region r;
  const bool is_root = node == t.root();
  std::vector<std::pair<Angle, bool>> walk;  // vertex, and whether a chord leaves it
  if (!is_root) {
    r.gap.leaves.push_back(t.source[node]);
    walk.push_back({t.chords[node].a, false});
  }
  for (std::size_t k : t.kids[node]) {
    r.gap.leaves.push_back(t.source[k]);
    walk.push_back({t.chords[k].a, true});
    walk.push_back({t.chords[k].b, false});
  }
  if (!is_root) walk.push_back({t.chords[node].b, true});  // closing chord back to a
  if (walk.empty()) return r;

  const std::size_t n = walk.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [v, chord_next] = walk[i];
    if (r.gap.vertices.empty() || !(r.gap.vertices.back() == v)) r.gap.vertices.push_back(v);
    const Angle& w = walk[(i + 1) % n].first;
    if (v == w) continue;
    r.pieces.push_back({chord_next, v.to_double(), w.to_double()});
  }
  if (r.gap.vertices.size() > 1 && r.gap.vertices.front() == r.gap.vertices.back())
    r.gap.vertices.pop_back();
  return r;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double s = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

double arc_distance(cplx p, double u, double v) {
  double span = v - u;
  if (span <= 0.0) span += 1.0;
  double phi = std::arg(p) / (2.0 * std::numbers::pi) - u;
  phi -= std::floor(phi);
  if (phi <= span) return std::abs(1.0 - std::abs(p));
  return std::min(std::abs(p - on_circle(u)), std::abs(p - on_circle(v)));
}

double distance_to(const Region& r, cplx p) {
  if (r.pieces.empty()) return 0.0;  // the whole disk
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pc : r.pieces)
    best = std::min(best, pc.chord ? segment_distance(p, on_circle(pc.u), on_circle(pc.v))
                                   : arc_distance(p, pc.u, pc.v));
  return best;
}

// Orders angles by a double key and falls back to exact comparison when the
// keys are too close to trust.
struct KeyedAngle {
  double key;
  const Angle* angle;
};

bool keyed_less(const KeyedAngle& x, const KeyedAngle& y) {
  if (std::abs(x.key - y.key) > 1e-12) return x.key < y.key;
  return *x.angle < *y.angle;
}

// Whether some chord of `a` links some chord of `b`. Endpoints are replaced
// by exact ranks; chord (p, q) links (x, y) iff x < p < y < q or p < x < q < y,
// and both patterns are counted offline with a Fenwick tree.
bool any_crossing(const std::vector<Leaf>& a, const std::vector<Leaf>& b) {
  if (a.empty() || b.empty()) return false;
  std::vector<KeyedAngle> all;
  all.reserve(2 * (a.size() + b.size()));
  for (const auto* set : {&a, &b})
    for (const Leaf& l : *set) {
      all.push_back({l.a.to_double(), &l.a});
      all.push_back({l.b.to_double(), &l.b});
    }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return keyed_less(all[i], all[j]); });
  std::vector<int> rank(all.size());
  int r = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && !(*all[order[k]].angle == *all[order[k - 1]].angle)) ++r;
    rank[order[k]] = r;
  }
  const int n_ranks = r + 1;

  std::vector<std::pair<int, int>> pts;  // chords of a
  for (std::size_t i = 0; i < a.size(); ++i) pts.emplace_back(rank[2 * i], rank[2 * i + 1]);
  std::sort(pts.begin(), pts.end());

  // Chords of `a` with first endpoint < amax and lo < second < hi.
  struct Query {
    int amax, lo, hi;
    long long sign;
  };
  std::vector<Query> qs;
  const std::size_t off = 2 * a.size();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int x = rank[off + 2 * i], y = rank[off + 2 * i + 1];
    qs.push_back({y, y, n_ranks, 1});  // x < p < y < q
    qs.push_back({x + 1, y, n_ranks, -1});
    qs.push_back({x, x, y, 1});  // p < x < q < y
  }
  std::sort(qs.begin(), qs.end(), [](const Query& u, const Query& v) { return u.amax < v.amax; });

  std::vector<long long> tree(std::size_t(n_ranks) + 1, 0);
  const auto add = [&](int i) {
    for (++i; i <= n_ranks; i += i & -i) tree[std::size_t(i)] += 1;
  };
  const auto below = [&](int i) {  // entries with rank < i
    long long s = 0;
    for (; i > 0; i -= i & -i) s += tree[std::size_t(i)];
    return s;
  };
  long long total = 0;
  std::size_t next = 0;
  for (const Query& q : qs) {
    while (next < pts.size() && pts[next].first < q.amax) add(pts[next++].second);
    if (q.hi - q.lo > 1) total += q.sign * (below(q.hi) - below(q.lo + 1));
  }
  return total != 0;
}

// Chord endpoints on the unit circle, for point location.
struct ChordGeometry {
  std::vector<cplx> A, B;
  std::vector<double> span;

  explicit ChordGeometry(const ChordTree& t) {
    for (const Leaf& l : t.chords) {
      const double a = l.a.to_double(), b = l.b.to_double();
      A.push_back(on_circle(a));
      B.push_back(on_circle(b));
      span.push_back(b - a);
    }
  }

  // Innermost chord whose arc side holds p, or `root`.
  std::size_t locate(cplx p, std::size_t root) const {
    std::size_t best = root;
    double best_span = 2.0;
    for (std::size_t i = 0; i < A.size(); ++i)
      if (span[i] < best_span && cross(B[i] - A[i], p - A[i]) < 0.0) {
        best_span = span[i];
        best = i;
      }
    return best;
  }
};

}  // namespace

std::vector<Gap> gaps(const Lamination& L) {
  const ChordTree t = chord_tree(L);
  std::vector<Gap> out;
  out.reserve(t.chords.size() + 1);
  out.push_back(region_of(t, t.root()).gap);
  for (std::size_t i = 0; i < t.chords.size(); ++i) out.push_back(region_of(t, i).gap);
  return out;
}

double gap_density(const Lamination& L, int grid) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must be >= 2");
  const ChordTree t = chord_tree(L);
  std::vector<Region> regions;
  for (std::size_t i = 0; i <= t.chords.size(); ++i) regions.push_back(region_of(t, i));
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (!regions[i].gap.strip()) open.push_back(i);
  const ChordGeometry geom(t);
  double worst = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const cplx p{-1.0 + (i + 0.5) * 2.0 / grid, -1.0 + (j + 0.5) * 2.0 / grid};
      if (std::abs(p) >= 1.0) continue;
      const std::size_t home = geom.locate(p, t.root());
      if (!regions[home].gap.strip()) continue;
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t k : open) d = std::min(d, distance_to(regions[k], p));
      worst = std::max(worst, d);
    }
  return worst;
}

std::vector<double> gap_density_probe(const Angle& theta, const std::vector<int>& depths,
                                      int grid) {
  std::vector<double> out;
  for (int depth : depths) out.push_back(gap_density(build_quadratic_lamination(theta, depth), grid));
  return out;
}

// ---------------------------------------------------------------------------
// Invariance

InvarianceReport check_invariance(const Lamination& L) {
  InvarianceReport rep;
  const int d = L.degree;
  rep.gl1 = pairwise_unlinked(L.leaves);
  rep.gl2_note =
      "closedness is not decidable on a finite leaf set; the checked set is a truncation";
  const std::set<Leaf> present(L.leaves.begin(), L.leaves.end());
  const auto frontier = [&](std::size_t i) { return i < L.frontier.size() && L.frontier[i]; };

  rep.gl3 = true;
  for (const auto& l : L.leaves) {
    const Leaf im = image(l, d);
    if (!im.degenerate() && !present.count(im)) {
      rep.gl3 = false;
      break;
    }
  }

  rep.gl4 = true;
  for (std::size_t i = 0; i < L.leaves.size() && rep.gl4; ++i) {
    const Leaf& l = L.leaves[i];
    if (l.degenerate()) continue;
    if (frontier(i)) {
      ++rep.gl4_exempt;
      continue;
    }
    std::vector<Leaf> cands;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        Leaf c(preimage(l.a, x, d), preimage(l.b, y, d));
        if (present.count(c)) cands.push_back(c);
      }
    // Look for d pairwise disjoint candidates.
    std::vector<const Leaf*> chosen;
    std::function<bool(std::size_t)> pick = [&](std::size_t from) {
      if (int(chosen.size()) == d) return true;
      for (std::size_t k = from; k < cands.size(); ++k) {
        const Leaf& c = cands[k];
        bool ok = true;
        for (const Leaf* o : chosen)
          ok = ok && unlinked(c, *o) && c.a != o->a && c.a != o->b && c.b != o->a && c.b != o->b;
        if (!ok) continue;
        chosen.push_back(&c);
        if (pick(k + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    rep.gl4 = pick(0);
  }

  // Gaps are only defined for unlinked chords.
  rep.gl5 = rep.gl1;
  if (!rep.gl5) return rep;
  std::vector<Leaf> solid;
  for (std::size_t i = 0; i < L.leaves.size(); ++i)
    if (!frontier(i) && !L.leaves[i].degenerate()) solid.push_back(L.leaves[i]);
  const std::set<Leaf> solid_set(solid.begin(), solid.end());
  std::set<Leaf> edges;
  for (const Gap& g : gaps(L)) {
    if (g.vertices.size() < 3) continue;
    ++rep.gaps_checked;
    std::set<Angle> img;
    for (const auto& v : g.vertices) img.insert(times_d(v, d));
    if (img.size() < 2) continue;
    const std::vector<Angle> hull(img.begin(), img.end());
    const std::size_t m = hull.size();
    for (std::size_t k = 0; k < m; ++k) {
      if (m == 2 && k == 1) break;
      edges.emplace(hull[k], hull[(k + 1) % m]);
    }
    if (m <= 3) continue;
    // A leaf joining two non-adjacent hull vertices would cut the image gap.
    if (m * m <= solid.size()) {
      for (std::size_t i = 0; i < m && rep.gl5; ++i)
        for (std::size_t j = i + 2; j < m && rep.gl5; ++j)
          if (!(i == 0 && j == m - 1) && solid_set.count(Leaf(hull[i], hull[j]))) rep.gl5 = false;
    } else {
      for (const Leaf& l : solid) {
        const auto ia = std::lower_bound(hull.begin(), hull.end(), l.a);
        const auto ib = std::lower_bound(hull.begin(), hull.end(), l.b);
        if (ia == hull.end() || ib == hull.end() || !(*ia == l.a) || !(*ib == l.b)) continue;
        const auto gap_k = std::size_t(ib - ia);
        if (gap_k != 1 && gap_k != m - 1) rep.gl5 = false;
      }
    }
    if (!rep.gl5) break;
  }
  if (rep.gl5) rep.gl5 = !any_crossing(solid, std::vector<Leaf>(edges.begin(), edges.end()));
  return rep;
}

// ---------------------------------------------------------------------------
// SVG

std::string to_svg(const Lamination& L, int size) {
  const double h = size / 2.0, R = h * 0.95;
  auto px = [&](cplx z) { return cplx(h + R * z.real(), h - R * z.imag()); };
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                size, size, size, size);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"none\" stroke=\"black\"/>\n", h,
                h, R);
  os << buf;
  for (const Leaf& l : L.leaves) {
    if (l.degenerate()) continue;
    const double a = l.a.to_double(), b = l.b.to_double();
    const cplx A = px(on_circle(a)), B = px(on_circle(b));
    // Geodesic: arc of the circle orthogonal to the unit circle through both
    // endpoints, radius tan(half the angular separation).
    double sep = (b - a) * 2.0 * std::numbers::pi;
    if (sep > std::numbers::pi) sep = 2.0 * std::numbers::pi - sep;
    const double half = sep / 2.0;
    if (std::abs(half - std::numbers::pi / 2) < 1e-9) {
      std::snprintf(buf, sizeof buf,
                    "<path d=\"M %.6f %.6f L %.6f %.6f\" fill=\"none\" stroke=\"navy\"/>\n",
                    A.real(), A.imag(), B.real(), B.imag());
    } else {
      // Going a -> b counterclockwise in the disk is clockwise on screen; the
      // geodesic bows toward the center, so its sweep is opposite the short arc.
      const bool short_ccw = (b - a) <= 0.5;
      std::snprintf(buf, sizeof buf,
                    "<path d=\"M %.6f %.6f A %.6f %.6f 0 0 %d %.6f %.6f\" fill=\"none\" "
                    "stroke=\"navy\"/>\n",
                    A.real(), A.imag(), R * std::tan(half), R * std::tan(half), short_ccw ? 1 : 0,
                    B.real(), B.imag());
    }
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fsl
