#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "test_util.hpp"

using namespace symmkern;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("symmkern_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  fs::path path_;
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST(CliGram, WritesMatrixAndMetadata) {
  TempDir dir;
  const Result r = run({"gram", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--n", "10", "--seed",
                        "0", "--out", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json meta = read_json(dir.path() / "gram.json");
  EXPECT_NEAR(meta["diagonal_min"].get<double>(), std::pow(2.0, -8.0), 1e-16);
  EXPECT_NEAR(meta["diagonal_max"].get<double>(), std::pow(2.0, -8.0), 1e-16);
  EXPECT_TRUE(meta["psd"]["pass"].get<bool>());
  EXPECT_EQ(meta["points"].get<int>(), 10);

  const std::string csv = slurp(dir.path() / "gram.csv");
  EXPECT_EQ(csv.rfind("# config: {", 0), 0u);
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 10);

  SpaceDescriptor space = SpaceDescriptor::parse("H2");
  const auto pts = point_set_from_json(read_json(dir.path() / "points.json"), &space);
  EXPECT_EQ(space, SpaceDescriptor::parse("spd:real:2"));
  EXPECT_EQ(point_set_hash(pts), meta["point_hash"].get<std::string>());
}

TEST(CliGram, RerunsAreByteIdentical) {
  TempDir dir;
  auto args = [&](const char* threads) {
    return std::vector<std::string>{"gram", "--space", "hyperbolic:3", "--kernel", "heat:kappa=1", "--n", "20",
                                    "--seed", "5", "--threads", threads, "--out", dir.str()};
  };
  const char* files[] = {"gram.csv", "gram.json", "points.json"};
  ASSERT_EQ(run(args("1")).code, 0);
  std::vector<std::string> first;
  for (const char* f : files) first.push_back(slurp(dir.path() / f));
  ASSERT_EQ(run(args("1")).code, 0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(slurp(dir.path() / files[i]), first[static_cast<std::size_t>(i)]);

  // Only the config echo on the first line depends on the thread count.
  ASSERT_EQ(run(args("4")).code, 0);
  const std::string csv = slurp(dir.path() / "gram.csv");
  EXPECT_EQ(csv.substr(csv.find('\n')), first[0].substr(first[0].find('\n')));
  EXPECT_EQ(slurp(dir.path() / "points.json"), first[2]);
}

TEST(CliGram, PointsFileReplacesSampling) {
  TempDir a, b;
  ASSERT_EQ(run({"gram", "--space", "spd:complex:2", "--kernel", "betaprime:alpha=2", "--n", "6", "--seed", "1",
                 "--out", a.str()})
                .code,
            0);
  const std::string points = (a.path() / "points.json").string();
  ASSERT_EQ(run({"gram", "--space", "spd:complex:2", "--kernel", "betaprime:alpha=2", "--points", points, "--out",
                 b.str()})
                .code,
            0);
  EXPECT_EQ(read_json(a.path() / "gram.json")["point_hash"], read_json(b.path() / "gram.json")["point_hash"]);
  EXPECT_EQ(run({"gram", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--points", points, "--out",
                 b.str()})
                .code,
            2);
}

TEST(CliGram, StrictPsdFailureExitsThree) {
  TempDir dir;
  const std::vector<std::string> base = {"gram", "--space", "spd:real:2", "--kernel", "geodesic-gaussian:sigma=4",
                                         "--n", "100", "--seed", "0", "--out", dir.str()};
  EXPECT_EQ(run(base).code, 0);
  EXPECT_FALSE(read_json(dir.path() / "gram.json")["psd"]["pass"].get<bool>());
  auto strict = base;
  strict.push_back("--strict");
  EXPECT_EQ(run(strict).code, 3);
}

TEST(CliGram, ConfigErrors) {
  TempDir dir;
  EXPECT_EQ(run({"gram", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--out", dir.str()}).code, 2);
  EXPECT_EQ(run({"gram", "--space", "spd:real:2", "--kernel", "betaprime:alpha=0.1", "--seed", "1", "--out",
                 dir.str()})
                .code,
            2);
  EXPECT_EQ(run({"gram", "--space", "spd:octonion:2", "--kernel", "betaprime:alpha=2", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"gram", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--seed", "x"}).code, 2);
  EXPECT_EQ(run({"gram", "--space", "spd:real:2", "--kernel", "betaprime:gamma=2", "--seed", "1"}).code, 2);
  EXPECT_EQ(run({"gram", "--bogus"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliGram, ConfigFileWithOverrides) {
  TempDir dir;
  const fs::path cfg = dir.path() / "cfg.json";
  std::ofstream(cfg) << R"({"space": "spd:real:2", "kernel": "betaprime:alpha=2", "n": 4, "seed": 3, "out": ")"
                     << dir.str() << "\"}";
  ASSERT_EQ(run({"gram", "--config", cfg.string()}).code, 0);
  EXPECT_EQ(read_json(dir.path() / "gram.json")["points"].get<int>(), 4);
  ASSERT_EQ(run({"gram", "--config", cfg.string(), "--n", "7"}).code, 0);
  const json meta = read_json(dir.path() / "gram.json");
  EXPECT_EQ(meta["points"].get<int>(), 7);
  EXPECT_EQ(meta["config"]["seed"].get<int>(), 3);

  const fs::path bad = dir.path() / "bad.json";
  std::ofstream(bad) << R"({"space": "spd:real:2", "kernel": "betaprime:alpha=2", "seed": 3, "colour": "red"})";
  const Result r = run({"gram", "--config", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos);

  const fs::path typed = dir.path() / "typed.json";
  std::ofstream(typed) << R"({"space": "spd:real:2", "kernel": "betaprime:alpha=2", "seed": "3"})";
  EXPECT_EQ(run({"gram", "--config", typed.string()}).code, 2);
  EXPECT_EQ(run({"gram", "--config", (dir.path() / "missing.json").string()}).code, 2);
}

TEST(CliDensity, CertificateAndTable) {
  TempDir dir;
  ASSERT_EQ(run({"density", "--space", "hyperbolic:3", "--kernel", "matern:kappa=1,nu=1.5", "--lambda-count", "11",
                 "--out", dir.str()})
                .code,
            0);
  const json cert = read_json(dir.path() / "certificate.json")["certificate"];
  EXPECT_EQ(cert["decay_exponent_2s"].get<double>(), 6.0);
  EXPECT_TRUE(cert["claims"]["C0"].get<bool>());
  const std::string csv = slurp(dir.path() / "density.csv");
  EXPECT_NE(csv.find("lambda,psi,plancherel,product"), std::string::npos);

  ASSERT_EQ(run({"density", "--space", "spd:real:3", "--kernel", "betaprime:alpha=1.5", "--out", dir.str()}).code, 0);
  const json bp = read_json(dir.path() / "certificate.json")["certificate"];
  EXPECT_EQ(bp["decay_exponent_2s"].get<std::string>(), "inf");
  EXPECT_EQ(bp["dims_n"].get<int>(), 6);

  EXPECT_EQ(run({"density", "--space", "spd:real:3", "--kernel", "betaprime:alpha=1", "--out", dir.str()}).code, 2);
  EXPECT_EQ(run({"density", "--space", "spd:real:3", "--kernel", "geodesic-gaussian:sigma=1", "--out", dir.str()})
                .code,
            2);
}

TEST(CliSynthCompare, OraclesPass) {
  TempDir dir;
  ASSERT_EQ(run({"synth-compare", "--space", "hyperbolic:3", "--kernel", "heat:kappa=1", "--out", dir.str()}).code, 0);
  const json j = read_json(dir.path() / "synth_compare.json");
  EXPECT_LT(j["max_rel_err"].get<double>(), 1e-4);
  EXPECT_EQ(j["config"]["bound"].get<double>(), 1e-4);

  ASSERT_EQ(run({"synth-compare", "--space", "spd:real:1", "--kernel", "betaprime:alpha=2", "--r-min", "0",
                 "--out", dir.str()})
                .code,
            0);
  std::istringstream csv(slurp(dir.path() / "synth_compare.csv"));
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  EXPECT_EQ(line, "r,synthesized,closed_form,rel_err");
  std::getline(csv, line);
  EXPECT_EQ(line, "0,1,1,0");
}

TEST(CliSynthCompare, BoundAndUnsupported) {
  TempDir dir;
  EXPECT_EQ(run({"synth-compare", "--space", "hyperbolic:3", "--kernel", "heat:kappa=1", "--bound", "1e-300",
                 "--out", dir.str()})
                .code,
            1);
  EXPECT_FALSE(read_json(dir.path() / "synth_compare.json")["pass"].get<bool>());
  EXPECT_EQ(run({"synth-compare", "--space", "hyperbolic:2", "--kernel", "heat:kappa=1", "--out", dir.str()}).code,
            2);
  EXPECT_EQ(run({"synth-compare", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--out", dir.str()}).code,
            2);
}

TEST(CliFit, ZeroTargetAndErrors) {
  TempDir dir;
  ASSERT_EQ(run({"fit", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--target", "zero", "--sizes",
                 "5,10", "--heldout", "20", "--seed", "1", "--out", dir.str()})
                .code,
            0);
  const json rep = read_json(dir.path() / "fit_report.json");
  EXPECT_EQ(rep["sizes"], json::array({5, 10}));
  for (const auto& v : rep["rms"]) EXPECT_EQ(v.get<double>(), 0.0);
  EXPECT_EQ(slurp(dir.path() / "learning_curve.csv").rfind("# config: ", 0), 0u);

  const Result bad = run({"fit", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--target", "cosine",
                          "--seed", "1", "--out", dir.str()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("sin-logdet"), std::string::npos);
  EXPECT_EQ(run({"fit", "--space", "hyperbolic:2", "--kernel", "heat:kappa=1", "--seed", "1", "--out", dir.str()})
                .code,
            2);
  EXPECT_EQ(run({"fit", "--space", "spd:real:2", "--kernel", "betaprime:alpha=2", "--out", dir.str()}).code, 2);
  // An indefinite Gram matrix with a negligible ridge breaks the Cholesky solve.
  EXPECT_EQ(run({"fit", "--space", "spd:real:2", "--kernel", "geodesic-gaussian:sigma=4", "--sizes", "100", "--mu",
                 "1e-12", "--heldout", "10", "--radius", "4", "--seed", "0", "--out", dir.str()})
                .code,
            4);
}

TEST(Io, FormatAndDump) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  json j = json::object();
  j["x"] = 0.1;
  j["v"] = json::array({1.0, 2.5});
  j["bad"] = std::numeric_limits<double>::infinity();
  const std::string s = dump_json(j, -1);
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(s.find("null"), std::string::npos);
  EXPECT_EQ(json::parse(s)["x"].get<double>(), 0.1);
}

TEST(Io, PointRoundTrip) {
  for (const auto& space : symmkern::testing::all_spaces()) {
    const auto pts = sample_points(space, 5, 8);
    SpaceDescriptor back = SpaceDescriptor::parse("H2");
    const auto again = point_set_from_json(json::parse(dump_json(point_set_to_json(space, pts))), &back);
    EXPECT_EQ(back, space);
    ASSERT_EQ(again.size(), pts.size());
    EXPECT_EQ(point_set_hash(again), point_set_hash(pts)) << space.name();
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_LE(geodesic_distance(pts[i], again[i]), 1e-12);
  }
  EXPECT_NE(point_set_hash(sample_points(SpaceDescriptor::parse("H2"), 3, 0)),
            point_set_hash(sample_points(SpaceDescriptor::parse("H2"), 3, 1)));
  EXPECT_EQ(point_set_hash({}).size(), 16u);
}

TEST(Io, KernelSpecs) {
  const KernelSpec m = parse_kernel_spec("matern:nu=2.5");
  EXPECT_EQ(m.family, "matern");
  EXPECT_EQ(m.params.at("kappa"), 1.0);
  EXPECT_EQ(m.params.at("nu"), 2.5);
  EXPECT_EQ(kernel_spec_string(parse_kernel_spec("heat")), "heat:kappa=1");
  EXPECT_THROW(parse_kernel_spec("betaprime"), DomainError);
  EXPECT_THROW(parse_kernel_spec("heat:sigma=1"), DomainError);
  EXPECT_THROW(parse_kernel_spec("laplace:kappa=1"), DomainError);
  EXPECT_THROW(parse_kernel_spec("heat:kappa=abc"), DomainError);
  const auto space = SpaceDescriptor::parse("spd:real:2");
  EXPECT_EQ(kernel_id(make_kernel(space, parse_kernel_spec("betaprime:alpha=2"))), "betaprime:alpha=2");
  EXPECT_THROW(make_density(space, parse_kernel_spec("geodesic-gaussian:sigma=1")), DomainError);
}
