#include <doctest.h>

#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"
#include "efs/datasets.hpp"
#include "efs/errors.hpp"
#include "efs/io.hpp"
#include "efs/svg.hpp"
#include "util.hpp"

using namespace efs;
using efs::test::temp_path;

namespace {

struct Run {
  int code;
  std::map<std::string, std::string> kv;
  std::string text;
};

Run efs_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "efs");
  std::ostringstream out;
  efs::test::LogCapture quiet(log::Level::kOff);
  const int code = cli::run(args, out);
  Run r{code, {}, out.str()};
  std::istringstream lines(r.text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) r.kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double num(const Run& r, const std::string& key) { return std::stod(r.kv.at(key)); }

}  // namespace

TEST_CASE("config parsing") {
  cli::RunConfig cfg;
  CHECK(cfg.gamma == 0.1);
  CHECK(cfg.k == 31);
  CHECK(cfg.T == 300);
  CHECK(cfg.n == 400);
  cfg.set("s", "d-2");
  CHECK(cfg.resolve_s(15) == 13.0);
  CHECK_THROWS_AS(cfg.resolve_s(1), InvalidInput);
  cfg.set("snapshot_mode", "exact");
  CHECK(cfg.backward().snapshot_mode == SnapshotMode::kExact);
  CHECK_THROWS_AS(cfg.set("gamma", "-1"), InvalidInput);
  CHECK_THROWS_AS(cfg.set("beta", "0"), InvalidInput);
  CHECK_THROWS_AS(cfg.set("k", "0"), InvalidInput);
  CHECK_THROWS_AS(cfg.set("n", "1"), InvalidInput);
  CHECK_THROWS_AS(cfg.set("s", "-2"), InvalidInput);
  CHECK_THROWS_AS(cfg.set("gamma", "abc"), InvalidInput);
  CHECK_THROWS_AS(cfg.set("bogus", "1"), InvalidInput);
  CHECK(cfg.assigned.contains("s"));
  CHECK_FALSE(cfg.assigned.contains("gamma"));

  const std::string path = temp_path("run.cfg");
  std::ofstream(path) << "# Table 1 row 3\ngamma = 0.05\nk=120 # comment\n\ns = d-2\n";
  cli::RunConfig file;
  file.load_file(path);
  CHECK(file.gamma == 0.05);
  CHECK(file.k == 120);
  CHECK(file.s == "d-2");
  std::ofstream(path) << "gamma = 0.05\nbeta 3\n";
  try {
    file.load_file(path);
    FAIL("expected a config error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(file.load_file(temp_path("nope.cfg")), IoError);
}

TEST_CASE("cli dataset") {
  const std::string out = temp_path("mix.efsb");
  auto r = efs_cli({"dataset", "--kind", "mixture", "--n", "400", "--seed", "7", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.kv["n"] == "400");
  CHECK(r.kv["d"] == "2");
  const std::string first = slurp(out);
  CHECK(efs_cli({"dataset", "--kind", "mixture", "--n", "400", "--seed", "7", "--out", out}).code == 0);
  CHECK(slurp(out) == first);

  const std::string swiss = temp_path("swiss.csv");
  const std::string svg = temp_path("swiss.svg");
  r = efs_cli({"dataset", "--kind", "swiss", "--n", "500", "--noise", "0.2", "--seed", "7", "--out", swiss,
               "--svg", svg});
  CHECK(r.code == 0);
  CHECK(r.kv["d"] == "2");
  CHECK(load_points(swiss, PointFormat::kCsv).points == swiss_roll(500, 0.2, 7).points);
  CHECK(slurp(svg).find("<svg") == 0);

  CHECK(efs_cli({"dataset", "--kind", "cube", "--out", out}).code == 2);
  CHECK(efs_cli({"dataset", "--n", "1", "--out", out}).code == 2);
  CHECK(efs_cli({"dataset", "--out", temp_path("x.txt")}).code == 2);
  CHECK(efs_cli({"dataset", "--out", "/nonexistent-dir/x.csv"}).code == 4);
  CHECK(efs_cli({"frobnicate"}).code == 2);
  CHECK(efs_cli({}).code == 2);
}

TEST_CASE("cli forward, sample, metrics") {
  const std::string data = temp_path("fw_mix.efsb");
  const std::string traj = temp_path("fw_traj.efsb");
  REQUIRE(efs_cli({"dataset", "--n", "400", "--seed", "7", "--out", data}).code == 0);
  auto r = efs_cli({"forward", "--data", data, "--out", traj, "--gamma", "0.1", "--k", "31", "--s", "1",
                    "--epsilon", "0.001"});
  REQUIRE(r.code == 0);
  CHECK(r.kv["snapshots"] == "32");
  CHECK(num(r, "energy_final") < num(r, "energy_initial"));
  std::optional<std::vector<std::int32_t>> labels;
  const auto t = io::load_trajectory(traj, &labels);
  CHECK(t.snapshots().size() == 32);
  CHECK(labels);
  const auto energy = io::read_csv(traj + ".energy.csv");
  CHECK(energy.header == std::vector<std::string>{"iteration", "energy"});
  CHECK(energy.rows.size() == 32);
  CHECK(energy.number(31, 1) < energy.number(0, 1));

  CHECK(efs_cli({"forward", "--data", data, "--out", traj + ".x", "--gamma", "0"}).code == 2);

  const std::string samples = temp_path("samples.csv");
  const std::string svg = temp_path("samples.svg");
  r = efs_cli({"sample", "--traj", traj, "--out", samples, "--mode", "sphere", "--m", "50", "--seed", "3",
               "--svg", svg, "--svg-latent", temp_path("latent.svg")});
  REQUIRE(r.code == 0);
  auto table = io::read_csv(samples);
  CHECK(table.rows.size() == 50);
  CHECK(table.header == std::vector<std::string>{"x0", "x1", "seed"});
  CHECK(slurp(svg).find("<polygon") != std::string::npos);

  const std::string replayed = temp_path("replayed.csv");
  CHECK(efs_cli({"sample", "--traj", traj, "--out", replayed, "--replay", samples}).code == 0);
  CHECK(slurp(replayed) == slurp(samples));

  const std::string path = temp_path("path.csv");
  r = efs_cli({"sample", "--traj", traj, "--out", path, "--mode", "interp", "--i", "3", "--j", "17",
               "--steps", "20", "--svg", temp_path("path.svg")});
  REQUIRE(r.code == 0);
  table = io::read_csv(path);
  CHECK(table.rows.size() == 20);
  CHECK(table.header == std::vector<std::string>{"x0", "x1", "seed", "i", "j", "t"});
  CHECK(table.number(0, 5) == 0.0);
  CHECK(table.number(19, 5) == 1.0);

  const std::string interp = temp_path("interp.csv");
  CHECK(efs_cli({"sample", "--traj", traj, "--out", interp, "--mode", "interp", "--m", "5"}).code == 0);
  const std::string interp2 = temp_path("interp2.csv");
  CHECK(efs_cli({"sample", "--traj", traj, "--out", interp2, "--mode", "interp", "--replay", interp}).code == 0);
  CHECK(slurp(interp2) == slurp(interp));
  CHECK(efs_cli({"sample", "--traj", traj, "--out", interp2, "--steps", "4"}).code == 2);
  CHECK(efs_cli({"sample", "--traj", temp_path("missing.efsb"), "--out", interp2}).code == 4);

  r = efs_cli({"metrics", "uniformity", "--input", traj});
  REQUIRE(r.code == 0);
  CHECK(num(r, "final.radial_ks") < num(r, "initial.radial_ks"));
  CHECK(r.kv.contains("final.angular_ks"));
  r = efs_cli({"metrics", "uniformity", "--input", traj, "--snapshot", "0"});
  CHECK(r.kv.contains("radial_ks"));

  r = efs_cli({"metrics", "mmd", "--a", data});
  REQUIRE(r.code == 0);
  CHECK(num(r, "mmd2") >= 0.0);
  r = efs_cli({"metrics", "novelty", "--generated", samples, "--training", traj});
  REQUIRE(r.code == 0);
  CHECK(r.kv.contains("min_nn"));
  CHECK(r.kv.contains("mean_nn"));
  CHECK(r.kv.contains("self_nn_mean"));
  r = efs_cli({"metrics", "energy", "--traj", traj});
  CHECK(r.kv.contains("energy.31"));
}

TEST_CASE("cli results do not depend on the thread count") {
  const std::string a = temp_path("thr1.efsb"), b = temp_path("thr3.efsb");
  CHECK(efs_cli({"--threads", "1", "forward", "--n", "300", "--k", "5", "--seed", "2", "--out", a}).code == 0);
  CHECK(efs_cli({"--threads", "3", "forward", "--n", "300", "--k", "5", "--seed", "2", "--out", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("cli roundtrip and exit codes") {
  auto r = efs_cli({"roundtrip", "--gamma", "0", "--k", "3", "--n", "50", "--snapshot_mode", "exact"});
  CHECK(r.code == 0);
  CHECK(num(r, "max_error") == 0.0);
  CHECK(r.kv["status"] == "pass");

  r = efs_cli({"roundtrip", "--gamma", "0.01", "--k", "10", "--n", "60", "--snapshot_mode", "exact"});
  CHECK(r.code == 0);
  CHECK(num(r, "max_error") <= 5e-2);

  r = efs_cli({"roundtrip", "--k", "3", "--n", "60", "--T", "50"});
  CHECK(r.code == 0);
  CHECK(r.kv["status"] == "reported");
  CHECK(r.kv["snapshot_mode"] == "paper");

  // 1e-9 tolerance cannot be met at gamma = 0.1: the check runs and fails
  r = efs_cli({"roundtrip", "--k", "3", "--n", "60", "--snapshot_mode", "exact", "--tol", "1e-9", "--count", "3"});
  CHECK(r.code == 1);
  CHECK(r.kv["status"] == "fail");

  const std::string dup = temp_path("dup.csv");
  std::ofstream(dup) << "x0,x1\n0,0\n0,0\n1,1\n";
  CHECK(efs_cli({"forward", "--data", dup, "--epsilon", "0", "--out", temp_path("dup.efsb")}).code == 3);

  const std::string cfg = temp_path("bad.cfg");
  std::ofstream(cfg) << "gamma = -3\n";
  CHECK(efs_cli({"forward", "--config", cfg, "--out", temp_path("cfg.efsb")}).code == 2);
  std::ofstream(cfg) << "gamma = 0.05\nk = 2\nn = 40\n";
  r = efs_cli({"forward", "--config", cfg, "--k", "3", "--out", temp_path("cfg.efsb")});
  CHECK(r.code == 0);
  CHECK(r.kv["snapshots"] == "4");
  CHECK(num(r, "gamma") == 0.05);
}

TEST_CASE("svg scatter") {
  svg::Layer base{efs::test::random_matrix(10, 2, 1), std::vector<std::int32_t>(10, 9)};
  svg::Layer stars{efs::test::random_matrix(3, 2, 2), std::nullopt, svg::Marker::kStar, true};
  const std::string doc = svg::render_scatter({base, stars}, "demo");
  CHECK(doc.find("width=\"800\" height=\"800\"") != std::string::npos);
  std::size_t circles = 0, polys = 0;
  for (auto at = doc.find("<circle"); at != std::string::npos; at = doc.find("<circle", at + 1)) ++circles;
  for (auto at = doc.find("<polygon"); at != std::string::npos; at = doc.find("<polygon", at + 1)) ++polys;
  CHECK(circles == 10);
  CHECK(polys == 3);
  CHECK(doc.find("r=\"2\"") != std::string::npos);
  CHECK(doc.find("#ff7f0e") != std::string::npos);  // label 9 -> palette slot 1
  CHECK(doc.find("<polyline") != std::string::npos);
  svg::Layer bad{efs::test::random_matrix(4, 2, 1), std::vector<std::int32_t>(3, 0)};
  CHECK_THROWS_AS(svg::render_scatter({bad}), InvalidInput);
}
