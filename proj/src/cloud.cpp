#include "fsl/cloud.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "fsl/error.hpp"
#include "fsl/parallel.hpp"

namespace fsl {

Window Window::around(cplx center, double half_width) {
  return around(center, half_width, half_width);
}

Window Window::around(cplx center, double half_width, double half_height) {
  return {center.real() - half_width, center.real() + half_width,
          center.imag() - half_height, center.imag() + half_height};
}

void Window::validate() const {
  const bool finite = std::isfinite(re_min) && std::isfinite(re_max) &&
                      std::isfinite(im_min) && std::isfinite(im_max);
  if (!finite || !(width() >= kMinWindowExtent) || !(height() >= kMinWindowExtent))
    throw Error(ErrorCode::InvalidWindow, "window must be finite and at least 1e-12 wide");
}

int default_threads() {
  if (const char* env = std::getenv("FSL_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace fsl
