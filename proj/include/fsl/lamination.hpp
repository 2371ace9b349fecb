#pragma once

#include <string>
#include <vector>

#include "fsl/angles.hpp"
#include "fsl/cloud.hpp"

namespace fsl {

/// Chord of the unit disk between two angles, stored with a <= b.
/// a == b is a degenerate leaf (a point).
struct Leaf {
  Angle a;
  Angle b;

  Leaf() = default;
  Leaf(Angle x, Angle y);

  bool degenerate() const { return a == b; }
  friend bool operator==(const Leaf&, const Leaf&) = default;
  friend auto operator<=>(const Leaf& l, const Leaf& r) {
    if (auto c = l.a <=> r.a; c != 0) return c;
    return l.b <=> r.b;
  }
};

/// True iff the endpoint pairs do not separate each other on the circle.
/// Shared endpoints and degenerate leaves never link.
bool unlinked(const Leaf& l1, const Leaf& l2);

/// Image leaf {d a, d b}; degenerate when the endpoints collide.
Leaf image(const Leaf& l, int d);

/// Finite chord system. Frontier leaves sit at the last generated depth (or
/// beyond a denominator cap) and are exempt from backward invariance.
struct Lamination {
  std::vector<Leaf> leaves;
  std::vector<bool> frontier;
  int degree = 2;
  int depth = 0;

  std::size_t size() const { return leaves.size(); }
  std::size_t frontier_count() const;
};

inline constexpr int kMaxLaminationDepth = 24;

/// Pulls the major leaf {theta/2, (theta+1)/2} back `depth` generations.
/// Each leaf's preimage pairing is the one unlinked with the leaves already
/// present; when both pairings qualify, the one whose first leaf has the
/// smaller endpoint wins. theta = 0 gives the empty lamination. Throws
/// LinkedConflict, InvalidArgument (depth outside 0..24).
Lamination build_quadratic_lamination(const Angle& theta, int depth);

/// Leaves {t, k/(d-1) - t} over reduced t with denominator <= cap. The
/// families for different k are each invariant but link one another, so each
/// is a separate lamination.
Lamination chebyshev_lamination(int d, int denominator_cap, int k = 0);

/// All d-1 families, one lamination each.
std::vector<Lamination> chebyshev_families(int d, int denominator_cap);

/// GL1 by an interval sweep: the chords are pairwise unlinked iff their
/// [a, b] intervals form a laminar family.
bool pairwise_unlinked(const std::vector<Leaf>& leaves);

struct InvarianceReport {
  bool gl1 = false;
  bool gl3 = false;
  bool gl4 = false;
  bool gl5 = false;
  std::size_t gl4_exempt = 0;   // frontier leaves not checked for preimages
  std::size_t gaps_checked = 0;
  std::string gl2_note;
};

/// GL1: pairwise unlinked. GL3: every image is a leaf or a point. GL4: each
/// non-frontier leaf has d pairwise disjoint preimage leaves. GL5: for every
/// gap, the hull of the image vertices is crossed by no non-frontier leaf and
/// has no such leaf as a diagonal; it is false whenever GL1 fails, since gaps
/// need unlinked chords. GL2 (closedness) is not decidable on a finite set
/// and is only noted.
InvarianceReport check_invariance(const Lamination& L);

/// Closure of a complementary region: its boundary angles in circle order and
/// the leaves on its boundary.
struct Gap {
  std::vector<Angle> vertices;
  std::vector<std::size_t> leaves;

  /// A region between exactly two leaves.
  bool strip() const { return leaves.size() == 2; }
};

/// Complementary regions of a pairwise unlinked chord system (degenerate
/// leaves ignored); there are (#distinct chords + 1) of them.
std::vector<Gap> gaps(const Lamination& L);

/// For each depth, the largest distance from a point of a grid x grid lattice
/// in the open disk to the nearest region that is not a strip. Chords are
/// straight segments.
std::vector<double> gap_density_probe(const Angle& theta, const std::vector<int>& depths,
                                      int grid = 32);
double gap_density(const Lamination& L, int grid = 32);

/// Disk picture with leaves drawn as hyperbolic geodesics.
std::string to_svg(const Lamination& L, int size = 512);

}  // namespace fsl
