#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "unlk/grid_ingest.hpp"
#include "unlk/model_gen.hpp"
#include "unlk/model_json.hpp"
#include "unlk/plane_tree.hpp"
#include "unlk/rational.hpp"
#include "unlk/report.hpp"

namespace fs = std::filesystem;
using unlk::Rat;

namespace {

struct RunResult {
  int rc = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Fixture directory shared by every case in this binary.
struct Fixtures {
  fs::path dir;
  std::string cli = UNLK_CLI_PATH;

  Fixtures() {
    dir = fs::temp_directory_path() / ("unlk_cli_fixtures_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Fixtures() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  std::string file(const char* name, const std::string& bytes) const {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << bytes;
    return p.string();
  }
  template <typename Payload>
  std::string model(const char* name, Payload payload) const {
    unlk::ModelDocument doc;
    doc.payload = std::move(payload);
    return file(name, unlk::emit_model(doc));
  }
};

const Fixtures& fx() {
  static Fixtures f;
  return f;
}

unlk::PlaneTree steep_mountain() {
  unlk::PlaneTree t = unlk::single_mountain();
  t.nodes[0].level = Rat(3, 2);
  t.edges[0].geom.level_at_lo = Rat(3, 2);
  t.edges[0].profile.breakpoints[0].second = Rat(-3);
  return t;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("help and argument errors use the documented exit codes") {
  CHECK(run(fx().cli + " --help 2>/dev/null").rc == 0);
  CHECK(run(fx().cli + " 2>/dev/null").rc == 1);
  CHECK(run(fx().cli + " frobnicate 2>/dev/null").rc == 1);
  CHECK(run(fx().cli + " nu 2>/dev/null").rc == 1);
  CHECK(run(fx().cli + " nu --both --oracle x.json 2>/dev/null").rc == 1);
}

TEST_CASE("nu prints both routes of the frozen two-summit value") {
  const std::string p = fx().model("double.json", unlk::double_mountain());
  auto r = run(fx().cli + " nu --both '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "recursive=7/10 oracle=7/10\n");
  r = run(fx().cli + " nu '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "recursive=7/10\n");
  r = run(fx().cli + " nu --oracle '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "oracle=7/10\n");
}

TEST_CASE("nu accepts closed-surface models") {
  const std::string p = fx().model("torus.json", unlk::torus_model());
  const auto r = run(fx().cli + " nu --both '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "recursive=1 oracle=1\n");
}

TEST_CASE("spectrum emits the library's exact CSV bytes") {
  const std::string p = fx().model("single.json", unlk::single_mountain());
  const auto r = run(fx().cli + " spectrum '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == unlk::spectrum_csv(unlk::spectrum(unlk::single_mountain())));
  CHECK(r.out.find("source,kind,area,k,level,action,negative\n") == 0);
  CHECK(r.out.find("Y,trivial,0,,0,0,true\n") != std::string::npos);
}

TEST_CASE("commands reject a payload of the wrong kind") {
  const std::string p = fx().model("torus2.json", unlk::torus_model());
  const auto r = run(fx().cli + " spectrum '" + p + "' 2>/dev/null");
  CHECK(r.rc == 3);
}

TEST_CASE("validate reports verdicts through exit codes") {
  const std::string good = fx().model("valid_tree.json", unlk::single_mountain());
  auto r = run(fx().cli + " validate '" + good + "' 2>/dev/null");
  CHECK(r.rc == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("kind") == "plane_tree");
  CHECK(j.at("valid") == true);

  unlk::PlaneTree bad = unlk::single_mountain();
  bad.nodes[0].level = Rat(0);
  const std::string badp = fx().model("invalid_tree.json", bad);
  r = run(fx().cli + " validate '" + badp + "' 2>/dev/null");
  CHECK(r.rc == 2);
  j = nlohmann::json::parse(r.out);
  CHECK(j.at("valid") == false);
  CHECK(!j.at("diagnostics").empty());

  const std::string garbage = fx().file("garbage.json", "this is not a model");
  r = run(fx().cli + " validate '" + garbage + "' 2>/dev/null");
  CHECK(r.rc == 1);
}

TEST_CASE("validate can append the disk decomposition") {
  const std::string p = fx().model("genus2.json", unlk::genus2_figure());
  const auto r = run(fx().cli + " validate --decomposition '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("essential_saddles").size() == 6);
  CHECK(j.at("core_edges").size() == 7);
  CHECK(j.at("disks").size() == 4);
}

TEST_CASE("zeta agrees with its scan on the genus-2 figure") {
  const std::string p = fx().model("genus2b.json", unlk::genus2_figure());
  auto r = run(fx().cli + " zeta --scan '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "zeta=3/5 scan=3/5\n");
  const std::string t = fx().model("torus3.json", unlk::torus_model());
  r = run(fx().cli + " zeta '" + t + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "zeta=1/2\n");
}

TEST_CASE("heavy classifies cell sets of the torus") {
  const std::string p = fx().model("torus4.json", unlk::torus_model());
  auto r = run(fx().cli + " heavy --cells c0 '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "heavy=yes superheavy=no\n");
  r = run(fx().cli + " heavy --cells s0,s1,c0,c1 '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "heavy=yes superheavy=yes\n");
  r = run(fx().cli + " heavy --cells p0 '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "heavy=no superheavy=no\n");
  r = run(fx().cli + " heavy --cells nope '" + p + "' 2>/dev/null");
  CHECK(r.rc == 3);
}

TEST_CASE("bifurcate writes a deterministic diagram") {
  unlk::Family f;
  f.kind = unlk::Family::Kind::special;
  f.g.breakpoints = {{Rat(0), Rat(0)}, {Rat(1), Rat(5, 2)}, {Rat(2), Rat(0)}};
  f.flatten_width = Rat(1, 20);
  f.inside = {Rat(10)};
  const std::string p = fx().model("family_special.json", f);
  const std::string csv1 = (fx().dir / "bif1.csv").string();
  const std::string csv2 = (fx().dir / "bif2.csv").string();
  auto r = run("UNLK_THREADS=1 " + fx().cli + " bifurcate --steps 10 --out '" + csv1 + "' '" + p +
               "' 2>/dev/null");
  CHECK(r.rc == 0);
  r = run("UNLK_THREADS=3 " + fx().cli + " bifurcate --steps 10 --out '" + csv2 + "' '" + p +
          "' 2>/dev/null");
  CHECK(r.rc == 0);
  const std::string bytes = slurp(csv1);
  CHECK(bytes == slurp(csv2));
  CHECK(bytes.find("sigma,branch_id,action,provenance\n") == 0);
  CHECK(bytes.find("inside") != std::string::npos);

  const std::string svg = (fx().dir / "bif.svg").string();
  r = run(fx().cli + " svg --diagram '" + csv1 + "' --out '" + svg + "' 2>/dev/null");
  CHECK(r.rc == 0);
  const std::string picture = slurp(svg);
  CHECK(picture.find("<svg") == 0);
  CHECK(picture.find("polyline") != std::string::npos);
}

TEST_CASE("continue-c follows the invariant across a linear family") {
  unlk::Family f;
  f.kind = unlk::Family::Kind::linear;
  f.from = unlk::single_mountain();
  f.to = steep_mountain();
  const std::string p = fx().model("family_linear.json", f);
  const std::string out = (fx().dir / "path.csv").string();
  const auto r = run(fx().cli + " continue-c --c0 3/4 --out '" + out + "' '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  const std::string bytes = slurp(out);
  CHECK(bytes.rfind("sigma,c\n0,3/4\n", 0) == 0);
  CHECK(bytes.find("\n1,5/6\n") == bytes.size() - 7);
}

TEST_CASE("sphere evaluates height-profile files and the stock construction") {
  unlk::HeightProfile hp;
  hp.dh = {{Rat(0), Rat(0)}, {Rat(1, 4), Rat(0)}, {Rat(1, 2), Rat(3, 2)}, {Rat(1), Rat(1, 2)}};
  hp.h0 = Rat(0);
  const std::string p = fx().model("bump.json", hp);
  auto r = run(fx().cli + " sphere '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  CHECK(r.out == "c=2/3\n");

  r = run(fx().cli + " sphere counterexample 2>/dev/null");
  CHECK(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("c_sum") == "21/50");
  CHECK(j.at("c2") == "65091/133000");
  CHECK(j.at("gap") == "9231/133000");
  CHECK(j.at("parameters").at("shoulder_slope") == "95/79");
}

TEST_CASE("ingest-grid turns a raster into a valid tree model") {
  std::ostringstream grid;
  unlk::write_grid_csv(grid, unlk::rasterize_single_mountain(32));
  const std::string p = fx().file("mountain.csv", grid.str());
  const std::string out = (fx().dir / "ingested.json").string();
  const auto r =
      run(fx().cli + " ingest-grid --levels 24 --out '" + out + "' '" + p + "' 2>/dev/null");
  CHECK(r.rc == 0);
  const unlk::ModelDocument doc = unlk::load_model(out);
  CHECK(std::string(doc.kind()) == "plane_tree");
  const auto& t = std::get<unlk::PlaneTree>(doc.payload);
  CHECK(unlk::validate_tree(t).empty());
  CHECK(t.edges.size() == 1);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string p = fx().model("double2.json", unlk::double_mountain());
  const auto a = run(fx().cli + " spectrum '" + p + "' 2>/dev/null");
  const auto b = run(fx().cli + " spectrum '" + p + "' 2>/dev/null");
  CHECK(a.rc == 0);
  CHECK(a.out == b.out);
}
