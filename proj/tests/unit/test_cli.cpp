#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "cwp/cli.hpp"
#include "cwp/fixture.hpp"

using namespace cwp;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cwpcheck");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string model() { return fixture_path("casemgmt/model.cwp"); }
std::string data(const std::string& rel) { return fixture_path("casemgmt/" + rel); }

}  // namespace

TEST_CASE("check exit codes") {
  CHECK(cli({"check", model(), data("population_valid.ttl")}).code == 0);
  const Run bad = cli({"check", model(), data("defects/gender.ttl"), "--format", "lines"});
  CHECK(bad.code == 2);
  std::istringstream lines(bad.out);
  std::string line;
  int errors = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("error\t", 0) == 0) {
      ++errors;
      CHECK(line.rfind("error\tCONSTRAINT:gender\tcasemanager:lab1\t", 0) == 0);
    }
  }
  CHECK(errors == 1);
}

TEST_CASE("usage and input errors exit with 1") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate", model()}).code == 1);
  CHECK(cli({"check", model()}).code == 1);
  CHECK(cli({"check", model(), data("population_valid.ttl"), "--format", "xml"}).code == 1);
  const Run missing = cli({"check", model(), "/nonexistent/pop.ttl"});
  CHECK(missing.code == 1);
  CHECK(missing.err.rfind("cwpcheck: IoError: ", 0) == 0);
  CHECK(cli({"simulate", model(), data("scenarios/labtest.scn"), "--clock", "soon"}).code == 1);
  CHECK(cli({"verify", model(), "--drop-rule", "T99"}).code == 1);
}

TEST_CASE("human report header") {
  const Run r = cli({"parse", model()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("cwpcheck 1.0.0\ninput " + model() + " ", 0) == 0);
  CHECK(r.out.find("note[TEMPORAL_GUARD] T6:") != std::string::npos);
}

TEST_CASE("parse --print round-trips") {
  const Run r = cli({"parse", model(), "--print", "--format", "lines"});
  CHECK(r.code == 0);
  const std::string printed = r.out.substr(0, r.out.find("note\t"));
  CHECK(parse_model(printed) == load_fixture());
}

TEST_CASE("simulate writes the golden trace") {
  const std::string path = "cli_trace_test.trace";
  const Run r = cli({"simulate", model(), data("scenarios/consult.scn"), "-o", path});
  CHECK(r.code == 0);
  CHECK(read_file(path) == read_file(data("golden/consult.trace")));
  std::remove(path.c_str());
  const Run direct = cli({"simulate", model(), data("scenarios/imaging.scn"), "--format", "lines"});
  CHECK(direct.out == read_file(data("golden/imaging.trace")));
}

TEST_CASE("verify") {
  const Run ok = cli({"verify", model(), "--format", "lines"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("warning\tCOVERAGE_GAP\tcasemanager:Consult\t") != std::string::npos);
  const Run dropped = cli({"verify", model(), "--drop-rule", "T12", "--format", "lines"});
  CHECK(dropped.code == 2);
  CHECK(dropped.out.find("error\tDEADLOCK\tcasemanager:LabTest\t\"Waiting for report\"\n") != std::string::npos);
  const Run probed = cli({"verify", model(), "--permutations", "3", "--scenario", data("scenarios/labtest.scn")});
  CHECK(probed.code == 0);
}

TEST_CASE("translate and export") {
  const Run t = cli({"translate", model(), "--part-whole", "single-haspart", "--part-cardinality", "--format", "lines"});
  CHECK(t.code == 0);
  CHECK(t.out.find("warning\tTRANSITIVE_CARDINALITY_CONFLICT\tcasemanager:partOf\t") != std::string::npos);
  const Run e = cli({"export", model(), "--data", data("population_valid.ttl")});
  CHECK(e.code == 0);
  CHECK(e.out == serialize(load_fixture_population("population_valid")));
}
