#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fsl/cloud.hpp"

namespace fsl {

/// Squared distance with the same rounding everywhere it is used, so that
/// indexed queries agree bit-for-bit with a linear scan.
inline double dist2(cplx a, cplx b) {
  const double dx = a.real() - b.real();
  const double dy = a.imag() - b.imag();
  return dx * dx + dy * dy;
}

/// Static 2-d tree over a point set.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::vector<cplx> points);

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }

  /// Smallest dist2 from q to a stored point; +inf when empty. With
  /// `skip_index`, the stored point at that original index is ignored.
  double nearest2(cplx q, std::size_t skip_index = npos) const;

  /// min(bound2, nearest2(q)): subtrees farther than bound2 are skipped.
  double nearest2_within(cplx q, double bound2) const;

  /// Whether some point has dist2 < bound2; stops at the first hit.
  bool any_within(cplx q, double bound2) const;

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  struct Node {
    std::uint32_t begin, end;   // range in pts_
    std::int32_t left = -1, right = -1;
    std::uint8_t axis = 0;
    double split = 0.0;
  };

  int build(std::uint32_t begin, std::uint32_t end, int depth);
  void search(int node, cplx q, std::size_t skip, double& best) const;
  bool probe(int node, cplx q, double bound2) const;

  std::vector<cplx> pts_;
  std::vector<std::size_t> ids_;
  std::vector<Node> nodes_;
};

}  // namespace fsl
