#include "fsl/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace fsl {

namespace {
constexpr std::uint32_t kLeafSize = 12;

double coord(cplx z, int axis) { return axis == 0 ? z.real() : z.imag(); }
}  // namespace

KdTree::KdTree(std::vector<cplx> points) : pts_(std::move(points)), ids_(pts_.size()) {
  std::iota(ids_.begin(), ids_.end(), std::size_t{0});
  if (!pts_.empty()) {
    nodes_.reserve(2 * pts_.size() / kLeafSize + 2);
    build(0, std::uint32_t(pts_.size()), 0);
  }
}

int KdTree::build(std::uint32_t begin, std::uint32_t end, int depth) {
  const int id = int(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  double lo[2] = {coord(pts_[begin], 0), coord(pts_[begin], 1)};
  double hi[2] = {lo[0], lo[1]};
  for (std::uint32_t i = begin; i < end; ++i)
    for (int a = 0; a < 2; ++a) {
      lo[a] = std::min(lo[a], coord(pts_[i], a));
      hi[a] = std::max(hi[a], coord(pts_[i], a));
    }
  const int axis = (hi[0] - lo[0] >= hi[1] - lo[1]) ? 0 : 1;
  (void)depth;

  // Sort a permutation so points and ids move together.
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::vector<std::uint32_t> perm(end - begin);
  std::iota(perm.begin(), perm.end(), begin);
  std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = coord(pts_[a], axis), cb = coord(pts_[b], axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  std::vector<cplx> p(perm.size());
  std::vector<std::size_t> ids(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    p[k] = pts_[perm[k]];
    ids[k] = ids_[perm[k]];
  }
  std::copy(p.begin(), p.end(), pts_.begin() + begin);
  std::copy(ids.begin(), ids.end(), ids_.begin() + begin);

  nodes_[std::size_t(id)].axis = std::uint8_t(axis);
  nodes_[std::size_t(id)].split = coord(pts_[mid], axis);
  const int l = build(begin, mid, depth + 1);
  const int r = build(mid, end, depth + 1);
  nodes_[std::size_t(id)].left = l;
  nodes_[std::size_t(id)].right = r;
  return id;
}

void KdTree::search(int node, cplx q, std::size_t skip, double& best) const {
  const Node& n = nodes_[std::size_t(node)];
  if (n.left < 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i) {
      if (ids_[i] == skip) continue;
      best = std::min(best, dist2(q, pts_[i]));
    }
    return;
  }
  // Left holds coords <= split, right holds coords >= split.
  const double diff = coord(q, n.axis) - n.split;
  const int near = diff <= 0.0 ? n.left : n.right;
  const int far = diff <= 0.0 ? n.right : n.left;
  search(near, q, skip, best);
  // The rounded |q - p| along the axis is never below the rounded |q - split|
  // for points across the plane, and dist2 never undercuts one axis term.
  if (diff * diff <= best) search(far, q, skip, best);
}

double KdTree::nearest2(cplx q, std::size_t skip_index) const {
  double best = std::numeric_limits<double>::infinity();
  if (!nodes_.empty()) search(0, q, skip_index, best);
  return best;
}

bool KdTree::probe(int node, cplx q, double bound2) const {
  const Node& n = nodes_[std::size_t(node)];
  if (n.left < 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i)
      if (dist2(q, pts_[i]) < bound2) return true;
    return false;
  }
  const double diff = coord(q, n.axis) - n.split;
  const int near = diff <= 0.0 ? n.left : n.right;
  const int far = diff <= 0.0 ? n.right : n.left;
  if (probe(near, q, bound2)) return true;
  return diff * diff < bound2 && probe(far, q, bound2);
}

bool KdTree::any_within(cplx q, double bound2) const {
  return !nodes_.empty() && probe(0, q, bound2);
}

double KdTree::nearest2_within(cplx q, double bound2) const {
  double best = bound2;
  if (!nodes_.empty()) search(0, q, npos, best);
  return best;
}

}  // namespace fsl
