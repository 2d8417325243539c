#include "cwp/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>

#include "cwp/commands.hpp"
#include "cwp/fixture.hpp"

namespace cwp {

namespace {

struct Options {
  std::string format = "human";
  std::string model;
  std::string data;
  std::string scenario;
  std::vector<std::string> scenarios;
  std::string output;
  std::string clock;
  int max_iterations = kDefaultMaxIterations;
  int permutations = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> drop_rules;
  std::string part_whole;
  std::string value_partition;
  bool part_cardinality = false;
  bool print = false;
  bool materialize = false;
};

struct Loaded {
  WorkModel model;
  Report inputs;  // digests only
};

Loaded load_model(const std::string& path) {
  Loaded l;
  const std::string text = read_file(path);
  l.inputs.add_input(path, text);
  l.model = parse_model(text);
  return l;
}

DateTime parse_clock(const std::string& text) {
  if (text.empty()) return kDefaultClock;
  auto dt = DateTime::parse(text);
  if (!dt) throw Error(ErrorCode::InvalidArgument, "--clock expects YYYY-MM-DDThh:mm:ss, got " + text);
  return *dt;
}

TranslationOptions translation_options(const Options& o, TranslationOptions base) {
  if (o.part_whole == "per-association") base.part_whole_strategy = PartWholeStrategy::PerAssociation;
  if (o.part_whole == "single-haspart") base.part_whole_strategy = PartWholeStrategy::SingleHasPart;
  if (o.value_partition == "disjoint-individuals") {
    base.value_partition_strategy = ValuePartitionStrategy::DisjointIndividuals;
  }
  if (o.value_partition == "disjoint-subclasses") {
    base.value_partition_strategy = ValuePartitionStrategy::DisjointSubclasses;
  }
  if (o.part_cardinality) base.part_whole_cardinality = true;
  return base;
}

void write_text(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + o.output);
  f << text;
}

int finish(const Options& o, Report report, const Report& inputs, std::ostream& out) {
  report.inputs = inputs.inputs;
  out << render(report, o.format == "lines" ? ReportFormat::Lines : ReportFormat::Human);
  return report.exit_code();
}

SimulationOptions simulation_options(const Options& o) {
  SimulationOptions s;
  s.clock = parse_clock(o.clock);
  s.max_iterations = o.max_iterations;
  return s;
}

int dispatch(const std::string& cmd, const Options& o, std::ostream& out) {
  Loaded l = load_model(o.model);
  if (cmd == "parse") {
    for (const std::string& path : o.scenarios) {
      const std::string text = read_file(path);
      l.inputs.add_input(path, text);
      parse_scenario(text, l.model);
    }
    if (!o.data.empty()) {
      const std::string text = read_file(o.data);
      l.inputs.add_input(o.data, text);
      parse_triples(text);
    }
    CommandOutput r = cmd_parse(l.model);
    if (o.print) write_text(o, r.text, out);
    return finish(o, std::move(r.report), l.inputs, out);
  }
  if (cmd == "check") {
    const std::string text = read_file(o.data);
    l.inputs.add_input(o.data, text);
    return finish(o, cmd_check(l.model, parse_triples(text), parse_clock(o.clock)), l.inputs, out);
  }
  if (cmd == "translate") {
    CommandOutput r = cmd_translate(l.model, translation_options(o, l.model.options));
    write_text(o, r.text, out);
    return finish(o, std::move(r.report), l.inputs, out);
  }
  if (cmd == "simulate") {
    const std::string text = read_file(o.scenario);
    l.inputs.add_input(o.scenario, text);
    SimulateOptions so;
    so.simulation = simulation_options(o);
    so.permutations = o.permutations;
    so.seed = o.seed;
    CommandOutput r = cmd_simulate(l.model, parse_scenario(text, l.model), so);
    write_text(o, r.text, out);
    return finish(o, std::move(r.report), l.inputs, out);
  }
  if (cmd == "verify") {
    VerifyOptions vo;
    vo.drop_rules = o.drop_rules;
    vo.permutations = o.permutations;
    vo.seed = o.seed;
    vo.simulation = simulation_options(o);
    for (const std::string& path : o.scenarios) {
      const std::string text = read_file(path);
      l.inputs.add_input(path, text);
      vo.scenarios.push_back(parse_scenario(text, l.model));
    }
    return finish(o, cmd_verify(l.model, vo), l.inputs, out);
  }
  // export
  CommandOutput r;
  if (o.data.empty()) {
    r = cmd_export(l.model, translation_options(o, l.model.options));
  } else {
    const std::string text = read_file(o.data);
    l.inputs.add_input(o.data, text);
    r = cmd_export(l.model, parse_triples(text), o.materialize);
  }
  write_text(o, r.text, out);
  if (!o.output.empty()) return finish(o, std::move(r.report), l.inputs, out);
  return r.report.exit_code();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks, translates, simulates and verifies conceptual work product models.", "cwpcheck"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Options o;

  const std::vector<std::string> formats{"human", "lines"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("model", o.model, "Model file")->required();
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember(formats));
  };
  auto translation = [&](CLI::App* sub) {
    sub->add_option("--part-whole", o.part_whole, "per-association or single-haspart")
        ->check(CLI::IsMember({"per-association", "single-haspart"}));
    sub->add_option("--value-partition", o.value_partition, "disjoint-individuals or disjoint-subclasses")
        ->check(CLI::IsMember({"disjoint-individuals", "disjoint-subclasses"}));
    sub->add_flag("--part-cardinality", o.part_cardinality, "Request cardinality on the shared part-whole property");
  };
  auto engine = [&](CLI::App* sub) {
    sub->add_option("--clock", o.clock, "Clock as YYYY-MM-DDThh:mm:ss (default 2016-01-01T00:00:00)");
    sub->add_option("--max-iterations", o.max_iterations, "Rule engine pass cap")->check(CLI::PositiveNumber);
    sub->add_option("--permutations", o.permutations, "Random rule orders to probe")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", o.seed, "Seed for rule-order permutations");
  };

  CLI::App* parse = app.add_subcommand("parse", "Parse a model (and optional scenarios / data)");
  common(parse);
  parse->add_option("--scenario", o.scenarios, "Scenario file to parse");
  parse->add_option("--data", o.data, "Triple file to parse");
  parse->add_flag("--print", o.print, "Print the canonical model");
  parse->add_option("-o,--output", o.output, "Write the canonical model here");

  CLI::App* check = app.add_subcommand("check", "Check instance data against a model");
  common(check);
  check->add_option("data", o.data, "Triple file")->required();
  check->add_option("--clock", o.clock, "Clock as YYYY-MM-DDThh:mm:ss");

  CLI::App* tr = app.add_subcommand("translate", "Translate the class model to schema axioms");
  common(tr);
  translation(tr);
  tr->add_option("-o,--output", o.output, "Write axioms here instead of stdout");

  CLI::App* sim = app.add_subcommand("simulate", "Run a scenario");
  common(sim);
  sim->add_option("scenario", o.scenario, "Scenario file")->required();
  engine(sim);
  sim->add_option("-o,--trace", o.output, "Write the trace here instead of stdout");

  CLI::App* ver = app.add_subcommand("verify", "Check the state machine for reachability, deadlocks and gaps");
  common(ver);
  engine(ver);
  ver->add_option("--drop-rule", o.drop_rules, "Leave a rule out (repeatable)");
  ver->add_option("--scenario", o.scenarios, "Scenario to probe under --permutations (repeatable)");

  CLI::App* exp = app.add_subcommand("export", "Export schema axioms or instance data as triples");
  common(exp);
  translation(exp);
  exp->add_option("--data", o.data, "Export this population instead of the schema");
  exp->add_flag("--materialize", o.materialize, "Close the population under the schema first");
  exp->add_option("-o,--output", o.output, "Write triples here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return dispatch(cmd, o, out);
  } catch (const Error& e) {
    err << "cwpcheck: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cwp
