#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "fsl/error.hpp"
#include "fsl/linearize.hpp"
#include "fsl/metric.hpp"

using fsl::cplx;
using fsl::KoenigsChart;

namespace {

const cplx I{0.0, 1.0};

std::vector<cplx> disk_samples(cplx center, double radius, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k)
    out.push_back(center + std::polar(radius * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)));
  return out;
}

double functional_equation_error(const KoenigsChart& chart, cplx z) {
  const cplx lhs = chart(chart.forward(z));
  const cplx rhs = chart.rho() * chart(z);
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

}  // namespace

TEST_CASE("the chart of z^2 at 1 is the logarithm") {
  const KoenigsChart chart = fsl::koenigs(0.0, 1.0, 1, 0.25);
  CHECK(chart.rho() == cplx(2.0));
  CHECK(std::abs(chart(1.1 * 1.1) / chart(1.1) - 2.0) < 1e-9);
  for (cplx z : disk_samples(1.0, chart.radius(), 200, 1))
    CHECK(std::abs(chart(z) - std::log(z)) < 1e-9);
}

TEST_CASE("functional equation at c = -2") {
  const KoenigsChart chart = fsl::koenigs(-2.0, 2.0, 1, 0.25);
  CHECK(chart.rho() == cplx(4.0));
  for (cplx z : disk_samples(2.0, 0.05, 300, 2)) {
    if (std::abs(z - 2.0) < 1e-12) continue;
    CHECK(functional_equation_error(chart, z) <= 1e-8);
  }
}

TEST_CASE("functional equation on the c = i chart") {
  const KoenigsChart chart = fsl::koenigs(I, I - 1.0, 2, 0.25);
  CHECK(std::abs(chart.rho() - 4.0 * (1.0 + I)) < 1e-12);
  CHECK(chart.period() == 2);
  double worst = 0.0;
  for (cplx z : disk_samples(chart.base(), chart.radius(), 1000, 3))
    worst = std::max(worst, functional_equation_error(chart, z));
  CHECK(worst <= 1e-8);
}

TEST_CASE("chart normalization") {
  struct Case {
    cplx c, x;
    int p;
  };
  for (const auto& [c, x, p] : {Case{0.0, 1.0, 1}, Case{-2.0, 2.0, 1}, Case{I, I - 1.0, 2}}) {
    const KoenigsChart chart = fsl::koenigs(c, x, p, 0.25);
    CHECK(std::abs(chart(chart.base())) == 0.0);
    const double h = 1e-5;
    const cplx deriv = (chart(chart.base() + h) - chart(chart.base() - h)) / (2.0 * h);
    CHECK(std::abs(deriv - 1.0) < 1e-6);
    // The inverse branch contracts on the chart circle.
    for (int j = 0; j < 32; ++j) {
      const cplx w = chart.base() + std::polar(chart.radius(), 2 * std::numbers::pi * j / 32);
      CHECK(chart.inverse_contraction(w) <= 1.0 / fsl::kChartContraction);
      CHECK(std::abs(chart.forward(chart.inverse_branch(w)) - w) < 1e-12);
    }
  }
}

TEST_CASE("koenigs rejects non-repelling and non-periodic points") {
  CHECK_THROWS_AS(fsl::koenigs(0.0, 0.0, 1, 0.25), fsl::Error);
  try {
    fsl::koenigs(0.0, 0.0, 1, 0.25);
  } catch (const fsl::Error& e) {
    CHECK(e.code() == fsl::ErrorCode::NotRepelling);
  }
  try {
    fsl::koenigs(I, 0.3, 2, 0.25);
    FAIL("expected NotPeriodic");
  } catch (const fsl::Error& e) {
    CHECK(e.code() == fsl::ErrorCode::NotPeriodic);
  }
}

TEST_CASE("limit model at c = -2 is a half-line") {
  const auto m = fsl::find_misiurewicz(1, 1, -2.1);
  fsl::LimitModelOptions o;
  o.julia_samples = 200000;
  const auto L = fsl::limit_model(m, 1.0, 5000, o);
  REQUIRE(L.size() > 100);
  double arg0 = 0.0;
  bool first = true;
  for (const cplx& w : L.points) {
    CHECK(std::abs(w) <= 1.0 + 1e-12);
    if (std::abs(w) == 0.0) continue;
    if (first) {
      arg0 = std::arg(w);
      first = false;
    }
    CHECK(std::abs(std::remainder(std::arg(w) - arg0, 2 * std::numbers::pi)) < 1e-6);
  }
}

TEST_CASE("limit models are rho-invariant") {
  struct Case {
    int l, p;
    cplx seed;
  };
  for (const auto& [l, p, seed] : {Case{1, 1, -2.1}, Case{1, 2, {0.2, 1.1}}}) {
    const auto m = fsl::find_misiurewicz(l, p, seed);
    fsl::LimitModelOptions o;
    o.julia_samples = 100000;
    const auto L = fsl::limit_model(m, 1.0, 4000, o);
    fsl::PointCloud scaled;
    for (const cplx& w : L.points) scaled.points.push_back(m.multiplier * w);
    const auto A = fsl::truncate(scaled, 1.0);
    const auto B = fsl::truncate(L, 1.0);
    const double floor = fsl::resolution_floor(B);
    CHECK(fsl::hausdorff(A, B) <= 2.0 * floor);
  }
}

TEST_CASE("limit model at c = i spreads over many directions") {
  const auto m = fsl::find_misiurewicz(1, 2, cplx(0.2, 1.1));
  fsl::LimitModelOptions o;
  o.julia_samples = 100000;
  const auto L = fsl::limit_model(m, 1.0, 4000, o);
  std::set<int> sectors;
  for (const cplx& w : L.points)
    if (std::abs(w) > 0.0)
      sectors.insert(int(std::floor((std::arg(w) + std::numbers::pi) / (2 * std::numbers::pi) * 8)));
  CHECK(sectors.size() >= 3);
}

TEST_CASE("limit models are deterministic and thread independent") {
  const KoenigsChart chart = fsl::koenigs(I, I - 1.0, 2, 0.25);
  fsl::LimitModelOptions o;
  o.julia_samples = 50000;
  const auto a = fsl::limit_model(chart, 1.0, 2000, o);
  o.threads = 3;
  const auto b = fsl::limit_model(chart, 1.0, 2000, o);
  CHECK(a.points == b.points);
}

TEST_CASE("julia_near_base stays on the Julia set near the base") {
  const KoenigsChart chart = fsl::koenigs(I, I - 1.0, 2, 0.25);
  const auto B = fsl::julia_near_base(chart, 500, 4, 1.5);
  CHECK(B.size() > 1000);
  for (const cplx& z : B.points) {
    CHECK(std::abs(z - chart.base()) <= chart.radius() + 1e-12);
    cplx w = z;
    bool escaped = false;
    for (int k = 0; k < 30 && !escaped; ++k) {
      w = w * w + I;
      escaped = std::abs(w) > 2.0;
    }
    CHECK_FALSE(escaped);
  }
}

TEST_CASE("rescaled_truncation") {
  const auto only_circle = fsl::rescaled_truncation(fsl::PointCloud{{I}, ""}, I, 4.0, 3, 1.0);
  CHECK(only_circle.size() == 257);
  CHECK(only_circle.points.front() == cplx(0.0));

  const fsl::PointCloud B{{cplx(0.2, 0.1), cplx(2.0, 0.0), cplx(-0.5, 0.5)}, ""};
  const auto t = fsl::rescaled_truncation(B, 0.0, 1.0, 5, 1.0, 64);
  CHECK(t.size() == 2 + 64);
  CHECK(t.points[0] == cplx(0.2, 0.1));
  CHECK(t.points[1] == cplx(-0.5, 0.5));

  // Unit circle about 1, doubled once: the arc of |w + 2| = 2 inside D_1.
  fsl::PointCloud circle;
  for (int k = 0; k < 720; ++k) circle.points.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 720));
  const auto arc = fsl::rescaled_truncation(circle, 1.0, 2.0, 1, 1.0, 64);
  std::size_t inside = 0;
  for (std::size_t k = 0; k + 64 < arc.size(); ++k) {
    CHECK(std::abs(std::abs(arc.points[k] + 2.0) - 2.0) < 1e-12);
    ++inside;
  }
  std::size_t expected = 0;
  for (const cplx& z : circle.points) expected += std::abs(2.0 * (z - 1.0)) <= 1.0;
  CHECK(inside == expected);
}
