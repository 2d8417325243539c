#include "cwp/fixture.hpp"

#include <fstream>
#include <sstream>

#include "cwp/error.hpp"

namespace cwp {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path);
  return buf.str();
}

std::string data_dir() { return CWP_DATA_DIR; }

const FixtureManifest& fixture_manifest() {
  static const FixtureManifest m{
      "casemgmt/model.cwp",
      {"casemgmt/population_valid.ttl", "casemgmt/defects/gender.ttl", "casemgmt/defects/taskPatientName.ttl",
       "casemgmt/defects/contactPatientName.ttl", "casemgmt/defects/dateOrder.ttl",
       "casemgmt/defects/validPatient.ttl", "casemgmt/defects/withinPlan.ttl",
       "casemgmt/defects/singlePlan.ttl"},
      {"casemgmt/scenarios/labtest.scn", "casemgmt/scenarios/imaging.scn", "casemgmt/scenarios/consult.scn"},
      {"casemgmt/golden/labtest.trace", "casemgmt/golden/imaging.trace", "casemgmt/golden/consult.trace"},
  };
  return m;
}

std::string fixture_path(std::string_view relative) { return data_dir() + "/" + std::string(relative); }

WorkModel load_fixture() { return parse_model(read_file(fixture_path(fixture_manifest().model))); }

TripleStore load_fixture_population(std::string_view name) {
  return parse_triples(read_file(fixture_path("casemgmt/" + std::string(name) + ".ttl")));
}

Scenario load_fixture_scenario(std::string_view name, const WorkModel& model) {
  return parse_scenario(read_file(fixture_path("casemgmt/scenarios/" + std::string(name) + ".scn")), model);
}

}  // namespace cwp
