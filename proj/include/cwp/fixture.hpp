#ifndef CWP_FIXTURE_HPP
#define CWP_FIXTURE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "cwp/model.hpp"
#include "cwp/scenario.hpp"

namespace cwp {

/// Whole file as bytes. Throws IoError.
std::string read_file(const std::string& path);

/// Root of the bundled data files.
std::string data_dir();

/// The case-management fixture files, relative to data_dir().
struct FixtureManifest {
  std::string model;
  std::vector<std::string> populations;  // valid + one per seeded defect
  std::vector<std::string> scenarios;
  std::vector<std::string> goldens;      // trace per scenario, same order
};

const FixtureManifest& fixture_manifest();

/// Absolute path of a fixture file (`casemgmt/...`).
std::string fixture_path(std::string_view relative);

WorkModel load_fixture();

/// `name` without extension, e.g. "population_valid".
TripleStore load_fixture_population(std::string_view name);

/// `name` without extension, e.g. "labtest".
Scenario load_fixture_scenario(std::string_view name, const WorkModel& model);

}  // namespace cwp

#endif  // CWP_FIXTURE_HPP
