// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
//
//   acceptance [--out-dir DIR] [--jobs DIR]
//
// Experiments that go through the command line are the job files in jobs/;
// they run once at 1 thread and once at 8, and the two output trees must match.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsl/cli.hpp"
#include "fsl/error.hpp"
#include "fsl/io.hpp"
#include "fsl/kdtree.hpp"
#include "fsl/linearize.hpp"
#include "fsl/metric.hpp"
#include "fsl/poly.hpp"
#include "fsl/symmetry.hpp"

namespace fs = std::filesystem;
using fsl::cplx;
using fsl::Json;

namespace {

const cplx I{0.0, 1.0};
const std::vector<std::string> kJobs{"misiurewicz", "julia_selfsim", "mandelbrot_selfsim",
                                     "model_comparison", "symmetry", "lamination", "rays"};

fs::path g_out = "acceptance_out";
fs::path g_jobs = "jobs";

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path job_dir(const std::string& job, int threads) {
  return g_out / ("threads" + std::to_string(threads)) / job;
}

// Runs a job file through the command-line front end; returns wall seconds.
double run_job(const std::string& job, int threads) {
  const fs::path dir = job_dir(job, threads);
  fs::remove_all(dir);
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  const int code = fsl::cli::run({"fsl", "--threads", std::to_string(threads), "--out-dir",
                                  dir.string(), "--job", (g_jobs / (job + ".json")).string()},
                                 out, err);
  if (code != 0) throw std::runtime_error("job " + job + " exited " + std::to_string(code) + ": " + err.str());
  return seconds_since(t0);
}

Json load(const std::string& job, const std::string& file) {
  return fsl::read_json_file((job_dir(job, 1) / file).string());
}

cplx cx(const Json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

std::vector<double> doubles(const Json& j) { return j.get<std::vector<double>>(); }

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[k - 1]) return false;
  return true;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  return os.str() + "]";
}

std::vector<cplx> random_cloud(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 0.6);
  std::vector<cplx> out(n);
  for (cplx& z : out) z = {g(rng), g(rng)};
  return out;
}

double brute_hausdorff(const std::vector<cplx>& A, const std::vector<cplx>& B) {
  auto directed = [](const std::vector<cplx>& X, const std::vector<cplx>& Y) {
    double worst = 0.0;
    for (cplx x : X) {
      double best = std::numeric_limits<double>::infinity();
      for (cplx y : Y) best = std::min(best, fsl::dist2(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::sqrt(std::max(directed(A, B), directed(B, A)));
}

// ---------------------------------------------------------------------------

void misiurewicz(Outcome& o) {
  const double t = run_job("misiurewicz", 1);
  const auto m2 = fsl::misiurewicz_from_json(load("misiurewicz", "m_minus2.json"));
  const auto mi = fsl::misiurewicz_from_json(load("misiurewicz", "m_i.json"));
  o.detail << "c=" << fsl::format_complex(m2.c) << " residual=" << m2.residual
           << " rho=" << fsl::format_complex(m2.multiplier)
           << " scale_derivative=" << fsl::format_complex(m2.scale_derivative)
           << "; c=" << fsl::format_complex(mi.c) << " rho=" << fsl::format_complex(mi.multiplier)
           << " (" << t << " s for both)";
  o.require(std::abs(m2.c + 2.0) <= 1e-12 && m2.residual < 1e-12, "c = -2 with residual < 1e-12");
  o.require(std::abs(m2.multiplier - 4.0) <= 1e-12, "rho = 4");
  o.require(std::abs(m2.scale_derivative + 4.0) <= 1e-12, "scale_derivative = -4");
  o.require(std::abs(mi.c - I) <= 1e-12, "c = i within 1e-12");
  o.require(std::abs(mi.multiplier - 4.0 * (1.0 + I)) <= 1e-10, "rho = 4(1+i) within 1e-10");
  o.require(t < 1.0, "runtime < 1 s each");
}

void julia_selfsim(Outcome& o) {
  const double t = run_job("julia_selfsim", 1);
  for (const char* name : {"minus2", "i"}) {
    const Json r = load("julia_selfsim", std::string("julia_profile_") + name + ".json");
    const auto prof = doubles(r["profile"]);
    const double floor = std::max(doubles(r["cloud_floor"]).back(), r["model_floor"].get<double>());
    const double bound = std::max(0.05, 3.0 * floor);
    o.detail << name << ": profile " << list(prof) << " bound " << bound << "; ";
    o.require(r["cloud_points"].get<std::size_t>() >= 100000, std::string(name) + " cloud >= 1e5 points");
    o.require(non_increasing(prof), std::string(name) + " non-increasing");
    o.require(prof.back() < bound, std::string(name) + " final below bound");
  }
  o.detail << "(" << t << " s for both)";
  o.require(t < 120.0, "runtime < 60 s per parameter");
}

void mandelbrot_selfsim(Outcome& o) {
  const double t = run_job("mandelbrot_selfsim", 1);
  const Json r = load("mandelbrot_selfsim", "mandelbrot_profile_i.json");
  const auto prof = doubles(r["profile"]);
  const double floor = std::max(doubles(r["cloud_floor"]).back(), r["model_floor"].get<double>());
  const double bound = std::max(0.08, 3.0 * floor);
  const auto literal = doubles(load("mandelbrot_selfsim", "mandelbrot_profile_i_literal.json")["profile"]);
  o.detail << "model scale " << fsl::format_complex(cx(r["model_scale"])) << ": profile " << list(prof)
           << " bound " << bound << "; with 1/(f^l)'(c): " << list(literal) << " (" << t << " s)";
  o.require(prof.back() < prof.front(), "final < first");
  o.require(prof.back() < bound, "final below bound");
  o.require(t < 300.0, "runtime < 5 min");
}

void model_comparison(Outcome& o) {
  const double t = run_job("model_comparison", 1);
  auto dist = [](const std::string& f) { return load("model_comparison", f)["dist_star"].get<double>(); };
  for (const char* name : {"minus2", "i", "13"})
    for (int s : {7, 8}) {
      const auto n = load("model_comparison", std::string("model_") + name + "_s" + std::to_string(s) + ".csv.json");
      o.require(n["n_points"].get<std::size_t>() >= 10000, std::string(name) + " model >= 1e4 points");
    }
  struct Pair {
    const char *a, *b;
  };
  for (const auto& [a, b] : {Pair{"minus2", "i"}, Pair{"i", "13"}}) {
    const double self_a = dist(std::string("self_") + a + ".json");
    const double self_b = dist(std::string("self_") + b + ".json");
    const double ab = dist(std::string("cross_") + a + "_" + b + ".json");
    const double ba = dist(std::string("cross_") + b + "_" + a + ".json");
    const double cross = std::min(ab, ba);
    o.detail << a << " vs " << b << ": cross " << ab << "/" << ba << " self " << self_a << "/" << self_b
             << "; ";
    o.require(cross > 5.0 * std::max(self_a, self_b), std::string(a) + "/" + b + " > 5x self");
    o.require(cross > 0.1, std::string(a) + "/" + b + " > 0.1");
  }
  o.detail << "(" << t << " s for both pairs)";
  o.require(t < 600.0, "runtime < 5 min per pair");
}

void symmetry(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int trivial = 0;
  for (int k = 0; k < 50; ++k) {
    const cplx c{u(rng), u(rng)};
    trivial += fsl::linear_symmetry_group(fsl::Polynomial{c, 0.0, 1.0}).order == 1;
  }
  const int z3 = fsl::linear_symmetry_group(fsl::Polynomial::monomial(3)).order;
  const int z4z = fsl::linear_symmetry_group(fsl::Polynomial{0.0, 1.0, 0.0, 0.0, 1.0}).order;
  int commuting = 0;
  for (int a = 2; a <= 5; ++a)
    for (int b = 2; b <= 5; ++b) {
      const auto Pa = fsl::chebyshev_monic(a), Pb = fsl::chebyshev_monic(b);
      const auto ab = fsl::compose(Pa, Pb), ba = fsl::compose(Pb, Pa);
      const bool exact = std::equal(ab.coeffs().begin(), ab.coeffs().end(), ba.coeffs().begin(),
                                    ba.coeffs().end());
      commuting += exact && fsl::commutes_with_iterate(Pa, Pb, 1) == 1;
    }
  run_job("symmetry", 1);
  const int job_z3 = load("symmetry", "sym_z3.json")["symmetry"]["order"].get<int>();
  const int job_z4z = load("symmetry", "sym_z4_plus_z.json")["symmetry"]["order"].get<int>();
  const double t = seconds_since(t0);
  o.detail << "trivial " << trivial << "/50, z^3 order " << z3 << ", z^4+z order " << z4z
           << ", Chebyshev grid " << commuting << "/16 (" << t << " s)";
  o.require(trivial == 50, "order 1 for random quadratics");
  o.require(z3 == 2 && job_z3 == 2, "order 2 for z^3");
  o.require(z4z == 3 && job_z4z == 3, "order 3 for z^4+z");
  o.require(commuting == 16, "Chebyshev grid");
  o.require(t < 10.0, "runtime < 10 s");
}

void metric_axioms(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(29);
  int symmetric = 0, triangle = 0, indexed = 0;
  double worst_triangle = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double r = 0.5 + 0.1 * double(k % 10);
    const auto A = fsl::truncate(fsl::PointCloud{random_cloud(rng, 100 + rng() % 300), ""}, r);
    const auto B = fsl::truncate(fsl::PointCloud{random_cloud(rng, 100 + rng() % 300), ""}, r);
    const auto C = fsl::truncate(fsl::PointCloud{random_cloud(rng, 100 + rng() % 300), ""}, r);
    const double ab = fsl::hausdorff(A, B), ba = fsl::hausdorff(B, A);
    const double ac = fsl::hausdorff(A, C), bc = fsl::hausdorff(B, C);
    symmetric += ab == ba;
    const double excess = ac - (ab + bc);
    worst_triangle = std::max(worst_triangle, excess);
    triangle += excess <= 1e-12;
    indexed += ab == brute_hausdorff(A.all_points(), B.all_points());
  }
  const double t = seconds_since(t0);
  o.detail << "symmetric " << symmetric << "/200, triangle " << triangle << "/200 (worst excess "
           << worst_triangle << "), indexed = brute " << indexed << "/200 (" << t << " s)";
  o.require(symmetric == 200, "symmetry exact");
  o.require(triangle == 200, "triangle within 1e-12");
  o.require(indexed == 200, "indexed = brute force");
  o.require(t < 30.0, "runtime < 30 s");
}

void lamination(Outcome& o) {
  const double t = run_job("lamination", 1);
  const Json q = load("lamination", "lam_1_6_report.json");
  const Json& inv = q["invariance"];
  const auto probe = doubles(q["probe"]);
  const auto cheb = doubles(load("lamination", "lam_1_2_report.json")["probe"]);
  o.detail << "1/6 depth 8: " << q["leaves"].get<int>() << " leaves, gl1 " << inv["gl1"] << " gl3 "
           << inv["gl3"] << " gl4 " << inv["gl4"] << " gl5 " << inv["gl5"] << "; probe " << list(probe)
           << "; Chebyshev probe " << list(cheb) << " (" << t << " s)";
  o.require(inv["gl1"] && inv["gl3"] && inv["gl4"] && inv["gl5"], "invariance checks");
  o.require(strictly_decreasing(probe), "1/6 probe decreasing");
  o.require(*std::min_element(cheb.begin(), cheb.end()) > 0.1, "Chebyshev probe non-vanishing");
  o.require(t < 30.0, "runtime < 30 s");
}

void rays(Outcome& o) {
  const double t = run_job("rays", 1);
  const Json r2 = load("rays", "ray_minus2_0.json");
  const Json pr = load("rays", "pray_1_2.json");
  const double e2 = std::abs(cx(r2["landing"]) - 2.0), ep = std::abs(cx(pr["landing"]) + 2.0);
  o.require(r2["landed"] && e2 <= 1e-6, "dynamic ray 0 at c = -2 lands at 2");
  o.require(pr["landed"] && ep <= 1e-4, "parameter ray 1/2 lands at -2");

  // Steps after the first two come in pairs: theta, then 2 theta.
  const Json job = fsl::read_json_file((g_jobs / "rays.json").string());
  const auto& steps = job["steps"];
  double worst = 0.0;
  int pairs = 0;
  for (std::size_t k = 2; k + 1 < steps.size(); k += 2, ++pairs) {
    const Json a = load("rays", steps[k]["args"]["out"].get<std::string>());
    const Json b = load("rays", steps[k + 1]["args"]["out"].get<std::string>());
    o.require(a["landed"] && b["landed"], "ray " + a["angle"].get<std::string>() + " landed");
    const cplx z = cx(a["landing"]);
    worst = std::max(worst, std::abs(z * z + I - cx(b["landing"])));
  }
  o.detail << "|landing-2| " << e2 << ", |landing+2| " << ep << ", " << pairs
           << " angle pairs at c = i, worst |f(z_theta) - z_2theta| " << worst << " (" << t << " s)";
  o.require(pairs == 20, "20 preperiodic angles");
  o.require(worst <= 1e-5, "ray permutation within 1e-5");
  o.require(t < 60.0, "runtime < 60 s");
}

void koenigs(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto sample = [&](const fsl::KoenigsChart& ch) {
    return ch.base() + std::polar(ch.radius() * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
  };
  struct Case {
    cplx c, x;
    int p;
  };
  double worst = 0.0;
  for (const auto& [c, x, p] : {Case{-2.0, 2.0, 1}, Case{I, I - 1.0, 2}}) {
    const auto chart = fsl::koenigs(c, x, p, 0.25);
    for (int k = 0; k < 1000; ++k) {
      const cplx z = sample(chart);
      const cplx rhs = chart.rho() * chart(z);
      if (std::abs(rhs) == 0.0) continue;
      worst = std::max(worst, std::abs(chart(chart.forward(z)) - rhs) / std::abs(rhs));
    }
  }
  const auto log_chart = fsl::koenigs(0.0, 1.0, 1, 0.25);
  double worst_log = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const cplx z = sample(log_chart);
    worst_log = std::max(worst_log, std::abs(log_chart(z) - std::log(z)));
  }
  const double t = seconds_since(t0);
  o.detail << "worst relative functional-equation error " << worst << ", worst |phi - log| " << worst_log
           << " (" << t << " s)";
  o.require(worst <= 1e-8, "functional equation within 1e-8");
  o.require(worst_log <= 1e-9, "log chart within 1e-9");
  o.require(t < 5.0, "runtime < 5 s");
}

std::vector<fs::path> files_under(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  std::sort(out.begin(), out.end());
  return out;
}

void determinism(Outcome& o) {
  double t = 0.0;
  for (const auto& job : kJobs) t += run_job(job, 8);
  const fs::path one = g_out / "threads1", eight = g_out / "threads8";
  const auto a = files_under(one), b = files_under(eight);
  o.require(a == b, "same output files");
  std::size_t same = 0;
  for (const auto& f : a)
    if (fsl::read_text_file((one / f).string()) == fsl::read_text_file((eight / f).string())) ++same;
    else o.detail << " differs: " << f.string();
  o.detail << same << "/" << a.size() << " files byte-identical at 1 and 8 threads (" << t
           << " s for the 8-thread rerun)";
  o.require(!a.empty() && same == a.size(), "byte-identical outputs");
}

}  // namespace

int main(int argc, char** argv) {
  for (int k = 1; k + 1 < argc; k += 2) {
    const std::string flag = argv[k];
    if (flag == "--out-dir") g_out = argv[k + 1];
    else if (flag == "--jobs") g_jobs = argv[k + 1];
    else {
      std::cerr << "usage: acceptance [--out-dir DIR] [--jobs DIR]\n";
      return 2;
    }
  }
  fs::create_directories(g_out);

  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {"Misiurewicz certification", misiurewicz},
      {"Julia self-similarity at c = -2 and c = i", julia_selfsim},
      {"Mandelbrot self-similarity at c = i", mandelbrot_selfsim},
      {"limit models of distinct points are not similar", model_comparison},
      {"symmetry algebra", symmetry},
      {"metric axioms", metric_axioms},
      {"lamination suite", lamination},
      {"ray landing", rays},
      {"Koenigs functional equation", koenigs},
      {"determinism at 1 and 8 threads", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      criteria[k].run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].name << ": "
              << o.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
