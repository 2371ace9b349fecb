#include "fsl/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "fsl/angles.hpp"
#include "fsl/dynamics.hpp"
#include "fsl/error.hpp"
#include "fsl/io.hpp"
#include "fsl/lamination.hpp"
#include "fsl/linearize.hpp"
#include "fsl/metric.hpp"
#include "fsl/misiurewicz.hpp"
#include "fsl/parallel.hpp"
#include "fsl/symmetry.hpp"

namespace fsl::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  int threads = 1;
  bool threads_given = false;
  std::string out_dir;
  std::ostream& out;
  std::ostream& err;

  std::string path(const std::string& p) const {
    if (p.empty() || out_dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(out_dir) / p).string();
  }

  // Writes the result to `file` if given, and always echoes it to stdout.
  void emit(const Json& j, const std::string& file) const {
    const std::string text = dump_json(j);
    if (!file.empty()) write_text_file(path(file), text);
    out << text;
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw Error(ErrorCode::InvalidArgument, "expected a number, got '" + s + "'");
  return v;
}

Window parse_window(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4)
    throw Error(ErrorCode::InvalidArgument, "window must be re_min,re_max,im_min,im_max");
  Window w{to_number(parts[0]), to_number(parts[1]), to_number(parts[2]), to_number(parts[3])};
  w.validate();
  return w;
}

std::vector<cplx> parse_coeffs(const std::string& text) {
  std::vector<cplx> out;
  for (const auto& part : split(text, ';')) out.push_back(parse_complex(part));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no coefficients given");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  // "2,3,4" or "2..8"
  std::vector<int> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = int(to_number(text.substr(0, dots)));
    const int hi = int(to_number(text.substr(dots + 2)));
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(int(to_number(part)));
  return out;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "expected a rational p/q, got '" + text + "'");
  }
}

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

Json cloud_meta(const MisiurewiczPoint& m, double r, std::size_t n, double floor) {
  return Json{{"c", complex_to_json(m.c)},       {"l", m.preperiod},
              {"p", m.period},                    {"rho", complex_to_json(m.multiplier)},
              {"r", r},                           {"n_points", n},
              {"resolution_floor", floor}};
}

const char* kind_name(OrbitKind k) {
  switch (k) {
    case OrbitKind::Escaping: return "escaping";
    case OrbitKind::Superattracting: return "superattracting";
    case OrbitKind::Misiurewicz: return "misiurewicz";
    case OrbitKind::Undecided: return "undecided";
  }
  return "undecided";
}

// ---------------------------------------------------------------------------

struct RenderArgs {
  std::string window, center, c = "0", coloring = "gray", out;
  double half_width = 0.0;
  int resolution = 512, max_iter = 500;
  std::uint64_t seed = 0;
};

void add_render(CLI::App* sub, RenderArgs& a, bool julia) {
  sub->add_option("--window", a.window, "re_min,re_max,im_min,im_max");
  sub->add_option("--center", a.center, "window center a+bi");
  sub->add_option("--half-width", a.half_width, "window half width");
  if (julia) sub->add_option("--c", a.c, "parameter a+bi")->required();
  sub->add_option("--resolution", a.resolution, "pixel width");
  sub->add_option("--max-iter", a.max_iter, "escape iteration budget");
  sub->add_option("--coloring", a.coloring, "gray or bands")
      ->check(CLI::IsMember({"gray", "bands"}));
  sub->add_option("--seed", a.seed, "recorded in the PNG metadata");
  sub->add_option("--out", a.out, "output PNG")->required();
}

int do_render(const Context& ctx, const RenderArgs& a, bool julia) {
  Window w;
  if (!a.window.empty()) {
    w = parse_window(a.window);
  } else {
    const cplx center = a.center.empty() ? cplx(julia ? 0.0 : -0.5, 0.0) : parse_complex(a.center);
    const double hw = a.half_width > 0.0 ? a.half_width : (julia ? 2.0 : 1.5);
    w = Window::around(center, hw);
  }
  const Plane plane = julia ? Plane::dynamic(parse_complex(a.c)) : Plane::parameter();
  const Image img = render_grid(plane, w, a.resolution,
                                a.coloring == "bands" ? Coloring::Bands : Coloring::Grayscale,
                                a.max_iter, ctx.threads);
  std::map<std::string, std::string> text{{"window", dump_json(window_to_json(w), 0)},
                                          {"resolution", std::to_string(a.resolution)},
                                          {"seed", std::to_string(a.seed)}};
  text["window"].pop_back();  // trailing newline
  write_png(ctx.path(a.out), img, text);
  ctx.emit(Json{{"out", a.out}, {"width", img.width}, {"height", img.height}}, "");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PointArgs {
  std::string point;  // JSON file
  int l = 0, p = 0;
  std::string newton_seed;
};

void add_point(CLI::App* sub, PointArgs& a) {
  sub->add_option("--point", a.point, "Misiurewicz point JSON (from find-misiurewicz)");
  sub->add_option("--l", a.l, "preperiod of the critical value");
  sub->add_option("--p", a.p, "period");
  sub->add_option("--newton-seed", a.newton_seed, "Newton seed a+bi");
}

MisiurewiczPoint load_point(const Context& ctx, const PointArgs& a) {
  if (!a.point.empty()) {
    std::vector<std::string> warnings;
    auto m = misiurewicz_from_json(read_json_file(ctx.path(a.point)), &warnings);
    for (const auto& w : warnings) ctx.err << "warning: " << a.point << ": " << w << "\n";
    return m;
  }
  if (a.l < 1 || a.p < 1 || a.newton_seed.empty())
    throw Error(ErrorCode::InvalidArgument, "give --point, or --l, --p and --newton-seed");
  return find_misiurewicz(a.l, a.p, parse_complex(a.newton_seed));
}

// ---------------------------------------------------------------------------

int run_steps(const Json& job, Context base);

int dispatch(const std::vector<std::string>& args, Context ctx) {
  CLI::App app{"Experiments on Misiurewicz points, limit models and laminations", "fsl"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::optional<int> threads;
  std::string job, out_dir;
  app.add_option("--threads", threads, "worker threads (default: FSL_THREADS or 1)");
  app.add_option("--out-dir", out_dir, "resolve relative paths inside this directory");
  app.add_option("--job", job, "run a JSON job file");

  RenderArgs rm, rj;
  add_render(app.add_subcommand("render-mandelbrot", "escape-time image of the parameter plane"),
             rm, false);
  add_render(app.add_subcommand("render-julia", "escape-time image of a dynamic plane"), rj, true);

  auto* fm = app.add_subcommand("find-misiurewicz", "Newton solve and certify f^(l+p)(c) = f^l(c)");
  int fm_l = 0, fm_p = 0;
  std::string fm_seed, fm_out;
  fm->add_option("--l", fm_l, "preperiod of the critical value")->required();
  fm->add_option("--p", fm_p, "period")->required();
  fm->add_option("--seed", fm_seed, "Newton seed a+bi")->required();
  fm->add_option("--out", fm_out, "output JSON");

  auto* co = app.add_subcommand("classify-orbit", "classify the critical orbit of f_c");
  std::string co_c, co_out;
  int co_iter = 1000;
  co->add_option("--c", co_c, "parameter a+bi")->required();
  co->add_option("--max-iter", co_iter, "iteration budget");
  co->add_option("--out", co_out, "output JSON");

  auto* lm = app.add_subcommand("limit-model", "sample the limit model in the Koenigs chart");
  PointArgs lm_pt;
  add_point(lm, lm_pt);
  double lm_r = 1.0, lm_chart = 0.25;
  std::size_t lm_n = 20000, lm_js = 0;
  std::uint64_t lm_seed = 7;
  std::string lm_out;
  lm->add_option("--r", lm_r, "truncation radius");
  lm->add_option("--n-points", lm_n, "model size");
  lm->add_option("--julia-samples", lm_js, "Julia samples drawn in the chart (0: 40 per point)");
  lm->add_option("--chart-radius", lm_chart, "initial chart radius");
  lm->add_option("--seed", lm_seed, "sampling seed");
  lm->add_option("--out", lm_out, "output CSV (metadata goes to <out>.json)")->required();

  auto* sp = app.add_subcommand("selfsim-profile", "distances of rescaled truncations to a model");
  PointArgs sp_pt;
  add_point(sp, sp_pt);
  std::string sp_source = "julia", sp_cloud, sp_model, sp_scale = "1", sp_center, sp_alpha,
              sp_out, sp_cloud_out;
  double sp_r = 1.0, sp_hw = 0.02, sp_tol = 1e-6, sp_growth = 1.6;
  int sp_first = 1, sp_last = 4, sp_res = 1000, sp_iter = 1000, sp_levels = 7;
  std::size_t sp_seed_points = 5000;
  std::uint64_t sp_seed = 11;
  sp->add_option("--source", sp_source, "julia, mandelbrot or csv")
      ->check(CLI::IsMember({"julia", "mandelbrot", "csv"}));
  sp->add_option("--cloud", sp_cloud, "input CSV for --source csv");
  sp->add_option("--model", sp_model, "model CSV")->required();
  sp->add_option("--model-scale", sp_scale,
                 "multiplier for the model: a+bi, transversality or scale-derivative (inverted)");
  sp->add_option("--center", sp_center, "rescaling center (default from the point)");
  sp->add_option("--alpha", sp_alpha, "rescaling factor (default rho)");
  sp->add_option("--r", sp_r, "truncation radius");
  sp->add_option("--n-first", sp_first, "first exponent");
  sp->add_option("--n-last", sp_last, "last exponent");
  sp->add_option("--seed-points", sp_seed_points, "julia: samples in the first level");
  sp->add_option("--levels", sp_levels, "julia: pullback levels");
  sp->add_option("--growth", sp_growth, "julia: sample growth per level");
  sp->add_option("--seed", sp_seed, "julia: sampling seed");
  sp->add_option("--half-width", sp_hw, "mandelbrot: window half width");
  sp->add_option("--resolution", sp_res, "mandelbrot: grid side");
  sp->add_option("--bisection-tol", sp_tol, "mandelbrot: edge refinement");
  sp->add_option("--max-iter", sp_iter, "mandelbrot: escape budget");
  sp->add_option("--out", sp_out, "output JSON");
  sp->add_option("--cloud-out", sp_cloud_out, "write the sampled cloud as CSV");

  auto* cm = app.add_subcommand("compare-models", "best similarity between two models");
  std::string cm_a, cm_b, cm_rho, cm_point_b, cm_out;
  double cm_r = 1.0;
  cm->add_option("--a", cm_a, "model A CSV")->required();
  cm->add_option("--b", cm_b, "model B CSV")->required();
  auto* cm_rho_opt = cm->add_option("--rho-b", cm_rho, "self-similarity scale of B");
  cm->add_option("--point-b", cm_point_b, "take rho_B from this Misiurewicz point JSON")
      ->excludes(cm_rho_opt);
  cm->add_option("--r", cm_r, "truncation radius");
  cm->add_option("--out", cm_out, "output JSON");

  auto* tr = app.add_subcommand("trace-ray", "trace an external ray");
  std::string tr_plane = "dynamic", tr_c = "0", tr_angle, tr_out, tr_vertices;
  double tr_target = kLandingPotential;
  int tr_levels = 200;
  tr->add_option("--plane", tr_plane, "dynamic or parameter")
      ->check(CLI::IsMember({"dynamic", "parameter"}));
  tr->add_option("--c", tr_c, "parameter for the dynamic plane");
  tr->add_option("--angle", tr_angle, "external angle p/q")->required();
  tr->add_option("--target-potential", tr_target, "stop below this potential");
  tr->add_option("--levels", tr_levels, "potential halvings");
  tr->add_option("--out", tr_out, "output JSON");
  tr->add_option("--vertices", tr_vertices, "write the ray vertices as CSV");

  auto* la = app.add_subcommand("lamination", "build and check a lamination");
  std::string la_theta, la_out, la_svg, la_probe, la_report;
  int la_depth = 6, la_cheb = 0, la_cap = 32, la_family = 0, la_grid = 32;
  bool la_check = false;
  la->add_option("--theta", la_theta, "angle p/q of the quadratic lamination");
  la->add_option("--depth", la_depth, "pullback generations");
  la->add_option("--chebyshev", la_cheb, "degree of a Chebyshev lamination instead");
  la->add_option("--cap", la_cap, "Chebyshev denominator cap");
  la->add_option("--family", la_family, "Chebyshev family k");
  la->add_flag("--check", la_check, "run the invariance checks");
  la->add_option("--probe", la_probe, "gap density probe depths, e.g. 2..8");
  la->add_option("--grid", la_grid, "probe grid side");
  la->add_option("--out", la_out, "lamination JSON");
  la->add_option("--svg", la_svg, "SVG picture");
  la->add_option("--report", la_report, "write the summary and checks as JSON");

  auto* sy = app.add_subcommand("symmetry", "normal form and linear symmetries of a polynomial");
  std::string sy_coeffs, sy_commute, sy_out;
  int sy_nmax = 4;
  sy->add_option("--coeffs", sy_coeffs, "ascending coefficients a0;a1;...")->required();
  sy->add_option("--commute-with", sy_commute, "test g o f^n = f^n o g for g given likewise");
  sy->add_option("--n-max", sy_nmax, "largest iterate for --commute-with");
  sy->add_option("--out", sy_out, "output JSON");

  auto* an = app.add_subcommand("angles", "exact angle dynamics under t -> d t");
  std::string an_theta, an_map, an_out;
  int an_degree = 2;
  an->add_option("--theta", an_theta, "angle p/q");
  an->add_option("--degree", an_degree, "d");
  an->add_option("--map", an_map, "circle map slope,offset (rationals) to put in normal form");
  an->add_option("--out", an_out, "output JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    ctx.out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    ctx.err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    ctx.err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  if (threads) {
    if (*threads < 1) throw Error(ErrorCode::InvalidArgument, "--threads must be >= 1");
    ctx.threads = *threads;
    ctx.threads_given = true;
  }
  if (!out_dir.empty()) ctx.out_dir = out_dir;

  if (!job.empty()) {
    if (!app.get_subcommands().empty()) {
      ctx.err << "error: --job cannot be combined with a subcommand\n";
      return kExitUsage;
    }
    return run_steps(read_json_file(job), ctx);
  }
  if (app.get_subcommands().empty()) {
    ctx.err << app.help();
    return kExitUsage;
  }
  if (!ctx.out_dir.empty()) fs::create_directories(ctx.out_dir);

  if (app.got_subcommand("render-mandelbrot")) return do_render(ctx, rm, false);
  if (app.got_subcommand("render-julia")) return do_render(ctx, rj, true);

  if (app.got_subcommand("find-misiurewicz")) {
    ctx.emit(to_json(find_misiurewicz(fm_l, fm_p, parse_complex(fm_seed))), fm_out);
    return kExitOk;
  }

  if (app.got_subcommand("classify-orbit")) {
    const auto k = classify_critical_orbit(parse_complex(co_c), co_iter);
    ctx.emit(Json{{"kind", kind_name(k.kind)},
                  {"period", k.period},
                  {"preperiod_point", k.preperiod_point},
                  {"preperiod_value", k.preperiod_value},
                  {"escape_iteration", k.escape_iteration}},
             co_out);
    return kExitOk;
  }

  if (app.got_subcommand("limit-model")) {
    const auto m = load_point(ctx, lm_pt);
    LimitModelOptions o;
    o.seed = lm_seed;
    o.threads = ctx.threads;
    o.chart_radius = lm_chart;
    o.julia_samples = lm_js;
    const PointCloud L = limit_model(m, lm_r, lm_n, o);
    save_cloud_csv(ctx.path(lm_out), L);
    const Json meta = cloud_meta(m, lm_r, L.size(), resolution_floor(truncate(L, lm_r)));
    write_text_file(ctx.path(lm_out + ".json"), dump_json(meta));
    ctx.emit(meta, "");
    return kExitOk;
  }

  if (app.got_subcommand("selfsim-profile")) {
    std::optional<MisiurewiczPoint> m;
    if (!sp_pt.point.empty() || sp_pt.l > 0) m = load_point(ctx, sp_pt);
    if (sp_source != "csv" && !m)
      throw Error(ErrorCode::InvalidArgument, "--source " + sp_source + " needs a point");
    PointCloud B;
    cplx center{}, alpha{};
    if (m) alpha = m->multiplier;
    if (sp_source == "julia") {
      const auto chart = koenigs(m->c, m->x_c, m->period, 0.25);
      B = julia_near_base(chart, sp_seed_points, sp_levels, sp_growth, sp_seed, ctx.threads);
      center = m->x_c;
    } else if (sp_source == "mandelbrot") {
      BoundaryOptions bo;
      bo.bisection_tol = sp_tol;
      bo.max_iter = sp_iter;
      bo.threads = ctx.threads;
      B = sample_mandelbrot_boundary(Window::around(m->c, sp_hw), sp_res, bo);
      center = m->c;
    } else {
      if (sp_cloud.empty()) throw Error(ErrorCode::InvalidArgument, "--source csv needs --cloud");
      B = load_cloud_csv(ctx.path(sp_cloud));
    }
    if (!sp_center.empty()) center = parse_complex(sp_center);
    if (!sp_alpha.empty()) alpha = parse_complex(sp_alpha);
    if (std::abs(alpha) == 0.0) throw Error(ErrorCode::InvalidArgument, "no rescaling factor");
    cplx scale{1.0, 0.0};
    if (sp_scale == "transversality" || sp_scale == "scale-derivative") {
      if (!m) throw Error(ErrorCode::InvalidArgument, "--model-scale " + sp_scale + " needs a point");
      scale = 1.0 / (sp_scale == "transversality" ? m->transversality : m->scale_derivative);
    } else {
      scale = parse_complex(sp_scale);
    }
    // The model is sampled inside D_r only; L = rho L lets the factor be moved
    // into 1 <= |scale| < |rho| so the scaled model still covers D_r.
    if (m && std::abs(m->multiplier) > 1.0 && std::abs(scale) > 0.0) {
      while (std::abs(scale) < 1.0) scale *= m->multiplier;
      while (std::abs(scale) >= std::abs(m->multiplier)) scale /= m->multiplier;
    }
    PointCloud model = load_cloud_csv(ctx.path(sp_model));
    for (auto& z : model.points) z *= scale;
    if (!sp_cloud_out.empty()) save_cloud_csv(ctx.path(sp_cloud_out), B);
    const auto prof = selfsim_profile(B, center, alpha, model, sp_r, sp_first, sp_last, ctx.threads);
    Json floors = Json::array();
    for (int n = sp_first; n <= sp_last; ++n)
      floors.push_back(resolution_floor(truncate(rescaled_truncation(B, center, alpha, n, sp_r, 0), sp_r)));
    ctx.emit(Json{{"profile", prof},
                  {"n_first", sp_first},
                  {"n_last", sp_last},
                  {"cloud_points", B.size()},
                  {"cloud_floor", floors},
                  {"model_floor", resolution_floor(truncate(model, sp_r))},
                  {"center", complex_to_json(center)},
                  {"alpha", complex_to_json(alpha)},
                  {"model_scale", complex_to_json(scale)},
                  {"r", sp_r}},
             sp_out);
    return kExitOk;
  }

  if (app.got_subcommand("compare-models")) {
    SimilarityOptions so;
    so.threads = ctx.threads;
    if (cm_rho.empty() && cm_point_b.empty())
      throw Error(ErrorCode::InvalidArgument, "give --rho-b or --point-b");
    const cplx rho_b = cm_rho.empty() ? load_point(ctx, PointArgs{cm_point_b, 0, 0, ""}).multiplier
                                      : parse_complex(cm_rho);
    const auto res = best_similarity(load_cloud_csv(ctx.path(cm_a)), load_cloud_csv(ctx.path(cm_b)),
                                     rho_b, cm_r, so);
    ctx.emit(Json{{"lambda_star", complex_to_json(res.lambda_star)},
                  {"dist_star", res.dist_star},
                  {"resolution_floor", res.resolution_floor}},
             cm_out);
    return kExitOk;
  }

  if (app.got_subcommand("trace-ray")) {
    const Angle theta = Angle::parse(tr_angle);
    const RayTrace ray = tr_plane == "dynamic"
                             ? trace_dynamic_ray(parse_complex(tr_c), theta, tr_target, tr_levels)
                             : trace_parameter_ray(theta, tr_target, tr_levels);
    if (!tr_vertices.empty()) {
      PointCloud v;
      v.points = ray.vertices;
      save_cloud_csv(ctx.path(tr_vertices), v);
    }
    ctx.emit(Json{{"angle", theta.str()},
                  {"plane", tr_plane},
                  {"landed", ray.landed},
                  {"landing", complex_to_json(ray.landing_estimate)},
                  {"vertices", ray.vertices.size()},
                  {"final_potential", ray.potentials.empty() ? 0.0 : ray.potentials.back()}},
             tr_out);
    return kExitOk;
  }

  if (app.got_subcommand("lamination")) {
    Lamination L;
    if (la_cheb > 0)
      L = chebyshev_lamination(la_cheb, la_cap, la_family);
    else if (!la_theta.empty())
      L = build_quadratic_lamination(Angle::parse(la_theta), la_depth);
    else
      throw Error(ErrorCode::InvalidArgument, "give --theta or --chebyshev");
    Json res{{"degree", L.degree}, {"leaves", L.size()}, {"frontier", L.frontier_count()},
             {"gaps", gaps(L).size()}};
    if (la_check) {
      const auto rep = check_invariance(L);
      res["invariance"] = Json{{"gl1", rep.gl1}, {"gl2_note", rep.gl2_note}, {"gl3", rep.gl3},
                               {"gl4", rep.gl4}, {"gl4_exempt", rep.gl4_exempt},
                               {"gl5", rep.gl5}, {"gaps_checked", rep.gaps_checked}};
    }
    if (!la_probe.empty()) {
      if (la_theta.empty()) throw Error(ErrorCode::InvalidArgument, "--probe needs --theta");
      const auto depths = parse_int_list(la_probe);
      res["probe_depths"] = depths;
      res["probe"] = gap_density_probe(Angle::parse(la_theta), depths, la_grid);
    }
    if (!la_out.empty()) write_text_file(ctx.path(la_out), dump_json(to_json(L)));
    if (!la_svg.empty()) write_text_file(ctx.path(la_svg), to_svg(L));
    ctx.emit(res, la_report);
    return kExitOk;
  }

  if (app.got_subcommand("symmetry")) {
    const Polynomial f(parse_coeffs(sy_coeffs));
    const auto [nf, A] = normalize_monic_centered(f);
    const auto G = linear_symmetry_group(nf);
    const auto ex = recognize_exceptional(f);
    const char* kind = ex.kind == ExceptionalKind::Monomial    ? "monomial"
                       : ex.kind == ExceptionalKind::Chebyshev ? "chebyshev"
                                                               : "neither";
    Json res{{"degree", f.degree()},
             {"normal_form", to_json(nf)},
             {"conjugacy", Json{{"a", complex_to_json(A.a)}, {"b", complex_to_json(A.b)}}},
             {"symmetry", Json{{"order", G.order},
                               {"residue", G.residue},
                               {"generator", complex_to_json(G.generator)}}},
             {"exceptional", Json{{"kind", kind}, {"sign", ex.sign}}}};
    if (!sy_commute.empty()) {
      const auto n = commutes_with_iterate(Polynomial(parse_coeffs(sy_commute)), f, sy_nmax);
      res["commutes_at_iterate"] = n ? Json(*n) : Json(nullptr);
    }
    ctx.emit(res, sy_out);
    return kExitOk;
  }

  if (app.got_subcommand("angles")) {
    Json res{{"degree", an_degree}};
    if (!an_theta.empty()) {
      const Angle t = Angle::parse(an_theta);
      const auto k = classify_angle(t, an_degree);
      Json orbit = Json::array();
      Angle x = t;
      for (int i = 0; i < k.preperiod + k.period; ++i, x = times_d(x, an_degree))
        orbit.push_back(x.str());
      res["theta"] = t.str();
      res["preperiod"] = k.preperiod;
      res["period"] = k.period;
      res["orbit"] = orbit;
    }
    if (!an_map.empty()) {
      const auto parts = split(an_map, ',');
      if (parts.size() != 2) throw Error(ErrorCode::InvalidArgument, "--map takes slope,offset");
      const auto nf = normal_form(CircleAffine(parse_rational(parts[0]), parse_rational(parts[1])),
                                  an_degree);
      res["normal_form"] = Json{{"slope", rational_str(nf.map.slope())},
                                {"offset", rational_str(nf.map.offset())},
                                {"pre", nf.pre},
                                {"post", nf.post}};
    }
    if (an_theta.empty() && an_map.empty())
      throw Error(ErrorCode::InvalidArgument, "give --theta or --map");
    ctx.emit(res, an_out);
    return kExitOk;
  }
  return kExitUsage;
}

std::vector<std::string> step_args(const Json& step) {
  if (!step.is_object() || !step.contains("command") || !step["command"].is_string())
    throw Error(ErrorCode::MalformedFile, "job step needs a \"command\" string");
  std::vector<std::string> args{"fsl", step["command"].get<std::string>()};
  if (step.contains("args")) {
    const Json& a = step["args"];
    if (!a.is_object()) throw Error(ErrorCode::MalformedFile, "job \"args\" must be an object");
    for (auto it = a.begin(); it != a.end(); ++it) {
      const std::string flag = "--" + it.key();
      const Json& v = it.value();
      if (v.is_boolean()) {
        if (v.get<bool>()) args.push_back(flag);
      } else if (v.is_string()) {
        args.push_back(flag);
        args.push_back(v.get<std::string>());
      } else if (v.is_number_float()) {
        args.push_back(flag);
        args.push_back(format_double(v.get<double>()));
      } else if (v.is_number()) {
        args.push_back(flag);
        args.push_back(v.dump());
      } else {
        throw Error(ErrorCode::MalformedFile, "job arg '" + it.key() + "' must be a scalar");
      }
    }
  }
  return args;
}

int run_steps(const Json& job, Context base) {
  if (!job.is_object()) throw Error(ErrorCode::MalformedFile, "job file must hold an object");
  // Command-line settings win over the job file's.
  if (job.contains("threads") && !base.threads_given)
    base.threads = job["threads"].get<int>();
  if (job.contains("out_dir") && base.out_dir.empty())
    base.out_dir = job["out_dir"].get<std::string>();
  std::vector<Json> steps;
  if (job.contains("steps")) {
    for (const auto& s : job["steps"]) steps.push_back(s);
  } else {
    steps.push_back(job);
  }
  for (const auto& s : steps) {
    const int code = dispatch(step_args(s), base);
    if (code != kExitOk) return code;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{default_threads(), false, "", out, err};
  try {
    return dispatch(args, ctx);
  } catch (const Error& e) {
    err << dump_json(Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}});
    return kExitDomain;
  } catch (const std::exception& e) {
    err << dump_json(Json{{"error", "Failure"}, {"message", e.what()}});
    return kExitDomain;
  }
}

}  // namespace fsl::cli
