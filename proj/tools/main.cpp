// semideg: analyze (n+1)-parameter potential families from a system description.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "semideg/cli/fixtures.hpp"
#include "semideg/cli/pipeline.hpp"
#include "semideg/errors.hpp"

namespace fs = std::filesystem;
using namespace semideg;
using namespace semideg::cli;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A path on disk, or the name of a bundled fixture ("oscillator", "fixtures/oscillator").
System load(const std::string& path) {
  const std::string name = fs::path(path).filename().string();
  std::string text;
  if (fs::is_regular_file(path)) text = read_file(path);
  else if (auto f = find_fixture(name)) text = std::string(*f);
  else throw InputError("no such file or fixture: " + path);
  return build_system(parse_description(text, name));
}

void write_machine(const AnalysisReport& r, const std::string& target) {
  if (target == "-") return;
  const fs::path path = target.empty() ? fs::path(r.name + ".report.json") : fs::path(target);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << machine_report(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-tensor analysis of (n+1)-parameter potential families"};
  app.require_subcommand(1);

  std::string file, machine_out, grid, base, fit_dict, only, fixture_name;
  double tol = 0.0;

  auto* analyze_cmd = app.add_subcommand("analyze", "Run the full pipeline on a system description");
  analyze_cmd->add_option("file", file, "System description file or bundled fixture name")->required();
  analyze_cmd->add_option("--grid", grid, "Sample grid, e.g. 3x3x3");
  analyze_cmd->add_option("--base", base, "Base point, e.g. 1,1,1");
  analyze_cmd->add_option("--tol", tol, "Path-independence tolerance");
  analyze_cmd->add_option("--fit-dict", fit_dict, "File with one candidate expression per line");
  analyze_cmd->add_option("--machine-out", machine_out, "JSON report path (default <name>.report.json, '-' to skip)");

  auto* check_cmd = app.add_subcommand("check", "Run a single named check");
  check_cmd->add_option("file", file, "System description file or bundled fixture name")->required();
  check_cmd->add_option("--only", only, "Check name")->required();
  check_cmd->add_option("--machine-out", machine_out, "JSON report path (default: none)");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "List or print the bundled fixtures");
  fixtures_cmd->require_subcommand(1);
  auto* list_cmd = fixtures_cmd->add_subcommand("list", "List bundled fixtures");
  auto* show_cmd = fixtures_cmd->add_subcommand("show", "Print a bundled fixture");
  show_cmd->add_option("name", fixture_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*analyze_cmd) {
      System system = load(file);
      Overrides o;
      if (!grid.empty()) o.grid = parse_grid(grid);
      if (!base.empty()) o.base = parse_point(base);
      if (analyze_cmd->count("--tol")) o.tolerance = tol;
      if (!fit_dict.empty()) o.dictionary = parse_dictionary(read_file(fit_dict));
      AnalysisReport r = analyze(system, o);
      std::cout << human_report(r);
      write_machine(r, machine_out);
      return r.exit_code;
    }
    if (*check_cmd) {
      AnalysisReport r = run_check(load(file), only);
      std::cout << human_report(r);
      if (!machine_out.empty()) write_machine(r, machine_out);
      return r.exit_code;
    }
    if (*list_cmd) {
      for (const auto& f : embedded_fixtures()) std::cout << f.name << "\t" << fixture_summary(f.text) << "\n";
      return 0;
    }
    if (*show_cmd) {
      auto f = find_fixture(fixture_name);
      if (!f) throw InputError("unknown fixture '" + fixture_name + "'");
      std::cout << *f;
      return 0;
    }
  } catch (const semideg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInputError;
}
