#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
// Golden harness for the command-line tool: exit-code contract, schema
// round-trips and byte-identical reruns. The binary path comes from the
// QDIFF_CLI environment variable set by CTest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qdiff/json_io.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("QDIFF_CLI");
  REQUIRE_MESSAGE(p != nullptr, "QDIFF_CLI must point at the built binary");
  return p;
}

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "qdiff_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " > /dev/null 2> /dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path z4_spec() {
  fs::path p = work_dir() / "z4.json";
  spit(p,
       R"({"coefficient":[-1,0],"factors":[{"root":[1,0],"mult":1},{"root":[-1,0],"mult":1},)"
       R"({"root":[0,1],"mult":1},{"root":[0,-1],"mult":1}]})");
  return p;
}

}  // namespace

TEST_CASE("graph: output files and determinism") {
  auto spec = z4_spec();
  auto j1 = work_dir() / "g1.json", s1 = work_dir() / "g1.svg";
  auto j2 = work_dir() / "g2.json", s2 = work_dir() / "g2.svg";
  CHECK(run("graph --spec " + spec.string() + " --json " + j1.string() + " --out " +
            s1.string()) == 0);
  CHECK(run("graph --spec " + spec.string() + " --json " + j2.string() + " --out " +
            s2.string()) == 0);
  CHECK(slurp(j1) == slurp(j2));
  CHECK(slurp(s1) == slurp(s2));
  CHECK(slurp(s1).find("<svg") != std::string::npos);
}

TEST_CASE("graph: malformed spec exits 2") {
  auto bad = work_dir() / "bad.json";
  spit(bad, "{ not json");
  CHECK(run("graph --spec " + bad.string()) == 2);
  auto empty_factors = work_dir() / "bad2.json";
  spit(empty_factors, R"({"coefficient":[0,0],"factors":[]})");
  CHECK(run("graph --spec " + empty_factors.string()) == 2);
}

TEST_CASE("short: exit codes certify presence and absence") {
  auto spec = z4_spec();
  // sorted zeros: [-1, -i, i, 1] -> indices 0 and 3 are the real pair
  CHECK(run("short --spec " + spec.string() + " --from 0 --to 3") == 0);
  CHECK(run("short --spec " + spec.string() + " --from 1 --to 2") == 1);
  CHECK(run("short --spec " + spec.string() + " --from 0 --to 9") == 2);
}

TEST_CASE("short: report schema parses back") {
  auto spec = z4_spec();
  auto j = work_dir() / "short.json";
  CHECK(run("short --spec " + spec.string() + " --from 0 --to 3 --json " + j.string()) == 0);
  std::string text = slurp(j);
  CHECK(text.find("\"found\": true") != std::string::npos);
  CHECK(text.find("\"distance\"") != std::string::npos);
  CHECK(text.find("\"signature\"") != std::string::npos);
}

TEST_CASE("period: condition check and residue") {
  auto specp = work_dir() / "z4poly.json";
  spit(specp,
       R"({"coefficient":[1,0],"factors":[{"root":[1,0],"mult":1},{"root":[-1,0],"mult":1},)"
       R"({"root":[0,1],"mult":1},{"root":[0,-1],"mult":1}]})");
  auto arc = work_dir() / "cut.json";
  spit(arc, R"({"vertices":[[-1,0],[1,0]],"side":"plus"})");
  CHECK(run("period --spec " + specp.string() + " --arc " + arc.string() +
            " --condition") == 0);
  CHECK(run("period --spec " + specp.string() + " --residue-infinity") == 0);

  auto unit = work_dir() / "unit.json";
  spit(unit, R"({"coefficient":[1,0],"factors":[]})");
  auto seg = work_dir() / "seg.json";
  spit(seg, R"({"vertices":[[0,0],[1,0]],"side":"off"})");
  CHECK(run("period --spec " + unit.string() + " --arc " + seg.string() +
            " --condition") == 1);
}

TEST_CASE("family drivers") {
  auto j1 = work_dir() / "lag1.json";
  auto s1 = work_dir() / "lag1.svg";
  CHECK(run("laguerre --C \"-0.95,0.1\" --json " + j1.string() + " --out " + s1.string()) ==
        0);
  CHECK(slurp(j1).find("\"found\": true") != std::string::npos);

  CHECK(run("laguerre --C \"-1\"") == 2);
  CHECK(run("jacobi --A \"-1\" --B 1") == 2);

  auto j2 = work_dir() / "jac1.json";
  CHECK(run("jacobi --A \"10,1\" --B 10 --json " + j2.string()) == 0);
  CHECK(slurp(j2).find("\"found\": true") != std::string::npos);
}

TEST_CASE("family drivers are deterministic") {
  auto ja = work_dir() / "da.json", sa = work_dir() / "da.svg";
  auto jb = work_dir() / "db.json", sb = work_dir() / "db.svg";
  std::string args = "laguerre --C 3 --quantize --overlay-zeros 12";
  CHECK(run(args + " --json " + ja.string() + " --out " + sa.string()) == 0);
  CHECK(run(args + " --json " + jb.string() + " --out " + sb.string()) == 0);
  CHECK(slurp(ja) == slurp(jb));
  CHECK(slurp(sa) == slurp(sb));
}

TEST_CASE("sweep exit codes") {
  CHECK(run("sweep --family laguerre --from 3 --to 2 --samples 5") == 0);
  CHECK(run("sweep --family laguerre --from -2 --to 0.5 --samples 5") == 2);
  CHECK(run("sweep --family nonsense --from 0 --to 1") == 2);
}

TEST_CASE("polygon checker") {
  auto good = work_dir() / "poly_good.json";
  spit(good, R"({"vertices":[{"order":1,"angle":2.0943951023931953},)"
             R"({"order":1,"angle":2.0943951023931953}],"interior_orders":[-2]})");
  CHECK(run("check --teichmuller " + good.string()) == 0);

  auto bad = work_dir() / "poly_bad.json";
  spit(bad, R"({"vertices":[{"order":1,"angle":2.0943951023931953},)"
            R"({"order":1,"angle":2.0943951023931953}],"interior_orders":[]})");
  CHECK(run("check --teichmuller " + bad.string()) == 1);

  auto broken = work_dir() / "poly_broken.json";
  spit(broken, R"({"vertices":"nope"})");
  CHECK(run("check --teichmuller " + broken.string()) == 2);
}

TEST_CASE("library JSON round-trips") {
  using namespace qdiff;
  auto q = rational_from_json(slurp(z4_spec()));
  std::string emitted = to_json(q);
  auto q2 = rational_from_json(emitted);
  CHECK(to_json(q2) == emitted);
  CHECK(q2.factors().size() == 4);

  OrientedArc arc{{Complex(0, 1), Complex(1.25, 0), Complex(0, -1)}, Side::Plus};
  auto arc2 = arc_from_json(to_json(arc));
  CHECK(arc2.side == Side::Plus);
  REQUIRE(arc2.vertices.size() == 3);
  CHECK(std::abs(arc2.vertices[1] - Complex(1.25, 0)) < 1e-12);
}
