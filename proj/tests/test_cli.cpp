#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsl/cli.hpp"
#include "fsl/io.hpp"

using fsl::Json;

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fsl");
  std::ostringstream out, err;
  const int code = fsl::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fsl_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("find-misiurewicz prints the point") {
  const auto r = run({"find-misiurewicz", "--l", "1", "--p", "2", "--seed", "0.2+1.1i"});
  REQUIRE(r.code == fsl::cli::kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(std::abs(j["c"][0].get<double>()) < 1e-12);
  CHECK(std::abs(j["c"][1].get<double>() - 1.0) < 1e-12);
  CHECK(j["p"] == 2);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({"find-misiurewicz", "--l", "1", "--p", "2", "--seed", "i", "--bogus"}).code ==
        fsl::cli::kExitUsage);
  CHECK(run({"find-misiurewicz", "--l", "1"}).code == fsl::cli::kExitUsage);
  CHECK(run({}).code == fsl::cli::kExitUsage);
  CHECK(run({"no-such-command"}).code == fsl::cli::kExitUsage);
  CHECK(run({"--help"}).code == fsl::cli::kExitOk);
}

TEST_CASE("domain errors exit with 2 and a JSON record") {
  auto r = run({"find-misiurewicz", "--l", "2", "--p", "1", "--seed", "-2"});
  CHECK(r.code == fsl::cli::kExitDomain);
  Json e = Json::parse(r.err);
  CHECK(e["error"] == "NotMinimal");
  CHECK_FALSE(e["message"].get<std::string>().empty());

  r = run({"render-mandelbrot", "--window", "0,0,0,1", "--out", "x.png"});
  CHECK(r.code == fsl::cli::kExitDomain);
  CHECK(Json::parse(r.err)["error"] == "InvalidWindow");

  r = run({"lamination", "--theta", "1/6", "--depth", "30"});
  CHECK(r.code == fsl::cli::kExitDomain);
}

TEST_CASE("classify-orbit, angles and symmetry") {
  auto r = run({"classify-orbit", "--c", "i"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["kind"] == "misiurewicz");
  CHECK(j["period"] == 2);

  r = run({"angles", "--theta", "1/6"});
  REQUIRE(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j["preperiod"] == 1);
  CHECK(j["orbit"] == Json::array({"1/6", "1/3", "2/3"}));

  r = run({"symmetry", "--coeffs", "0;1;0;0;1"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["symmetry"]["order"] == 3);
}

TEST_CASE("job files run steps inside the output directory") {
  const fs::path dir = scratch_dir("job");
  const fs::path job = dir / "job.json";
  const Json job_json{{"out_dir", (dir / "out").string()},
                  {"steps",
                   Json::array({Json{{"command", "find-misiurewicz"},
                                     {"args", {{"l", 1}, {"p", 1}, {"seed", "-2.1"}, {"out", "m.json"}}}},
                                Json{{"command", "limit-model"},
                                     {"args", {{"point", "m.json"}, {"n-points", 500},
                                               {"julia-samples", 20000}, {"out", "model.csv"}}}},
                                Json{{"command", "lamination"},
                                     {"args", {{"theta", "1/6"}, {"depth", 4}, {"check", true},
                                               {"svg", "lam.svg"}}}}})}};
  fsl::write_text_file(job.string(), fsl::dump_json(job_json));
  const auto r = run({"--job", job.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(fs::exists(dir / "out" / "m.json"));
  CHECK(fs::exists(dir / "out" / "model.csv"));
  CHECK(fs::exists(dir / "out" / "model.csv.json"));
  CHECK(fs::exists(dir / "out" / "lam.svg"));

  // Same job with more threads writes identical files.
  const auto again = run({"--threads", "3", "--out-dir", (dir / "out3").string(), "--job", job.string()});
  REQUIRE(again.code == 0);
  for (const char* f : {"m.json", "model.csv", "model.csv.json", "lam.svg"})
    CHECK(slurp(dir / "out" / f) == slurp(dir / "out3" / f));
}

TEST_CASE("malformed job files") {
  const fs::path dir = scratch_dir("bad");
  fsl::write_text_file((dir / "a.json").string(), "[1, 2]");
  CHECK(run({"--job", (dir / "a.json").string()}).code == fsl::cli::kExitDomain);
  fsl::write_text_file((dir / "b.json").string(), R"({"steps": [{"args": {}}]})");
  const auto r = run({"--job", (dir / "b.json").string()});
  CHECK(r.code == fsl::cli::kExitDomain);
  CHECK(Json::parse(r.err)["error"] == "MalformedFile");
  CHECK(run({"--job", (dir / "missing.json").string()}).code == fsl::cli::kExitDomain);
}

TEST_CASE("model scales fold into one period of rho") {
  const fs::path dir = scratch_dir("scale");
  const auto d = dir.string();
  REQUIRE(run({"--out-dir", d, "find-misiurewicz", "--l", "1", "--p", "2", "--seed", "0.2+1.1i", "--out",
               "m.json"}).code == 0);
  REQUIRE(run({"--out-dir", d, "limit-model", "--point", "m.json", "--n-points", "2000", "--out",
               "L.csv"}).code == 0);
  // 1/transversality = 0.25 - 0.5i lies inside the unit disk; times rho it is 3 - i.
  const auto r = run({"--out-dir", d, "selfsim-profile", "--point", "m.json", "--model", "L.csv",
                      "--model-scale", "transversality", "--seed-points", "300", "--levels", "2",
                      "--n-last", "1"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const Json j = Json::parse(r.out);
  CHECK(std::abs(j["model_scale"][0].get<double>() - 3.0) < 1e-12);
  CHECK(std::abs(j["model_scale"][1].get<double>() + 1.0) < 1e-12);

  const auto by_point = run({"--out-dir", d, "compare-models", "--a", "L.csv", "--b", "L.csv",
                             "--point-b", "m.json"});
  REQUIRE_MESSAGE(by_point.code == 0, by_point.err);
  CHECK(Json::parse(by_point.out)["dist_star"] == 0.0);
  CHECK(run({"--out-dir", d, "compare-models", "--a", "L.csv", "--b", "L.csv"}).code ==
        fsl::cli::kExitDomain);
  CHECK(run({"--out-dir", d, "compare-models", "--a", "L.csv", "--b", "L.csv", "--rho-b", "4",
             "--point-b", "m.json"}).code == fsl::cli::kExitUsage);
}

TEST_CASE("lamination report file") {
  const fs::path dir = scratch_dir("lamreport");
  const auto r = run({"--out-dir", dir.string(), "lamination", "--theta", "1/6", "--depth", "3",
                      "--check", "--report", "rep.json"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "rep.json") == r.out);
  CHECK(Json::parse(r.out)["invariance"]["gl1"] == true);
}
