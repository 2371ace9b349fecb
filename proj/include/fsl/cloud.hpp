#pragma once

#include <complex>
#include <string>
#include <vector>

namespace fsl {

using cplx = std::complex<double>;

/// Finite sample of a planar compact set.
struct PointCloud {
  std::vector<cplx> points;
  std::string meta;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Axis-aligned rectangle in the complex plane.
struct Window {
  double re_min = -2.0;
  double re_max = 2.0;
  double im_min = -2.0;
  double im_max = 2.0;

  static Window around(cplx center, double half_width);
  static Window around(cplx center, double half_width, double half_height);

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
           z.imag() <= im_max;
  }

  /// Throws InvalidWindow for non-finite or narrower than 1e-12 extents.
  void validate() const;
};

inline constexpr double kMinWindowExtent = 1e-12;

}  // namespace fsl
