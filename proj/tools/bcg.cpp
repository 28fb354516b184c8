#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bcg/errors.hpp"
#include "bcg/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bcg::InvalidArgument("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& experiment, const std::string& config, const std::string& out,
        const bcg::Overrides& ov) {
  const bcg::Scenario s =
      config.empty() ? bcg::default_scenario(experiment, ov) : bcg::parse_scenario(read_file(config), experiment, ov);
  const bcg::RunResult r = bcg::run_scenario(s);
  if (out.empty()) {
    bcg::write_csv(std::cout, r.rows);
  } else {
    std::ofstream csv(out);
    if (!csv) throw bcg::InvalidArgument("cannot write " + out);
    bcg::write_csv(csv, r.rows);
    std::ofstream js(out + ".json");
    js << bcg::manifest(s, r).dump(2) << '\n';
  }
  for (const auto& n : r.notes) std::cerr << n << '\n';
  std::cerr << (r.accepted ? "accepted" : "REJECTED") << '\n';
  return bcg::exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bcg: determinant functionals and symmetrization experiments"};
  app.require_subcommand(1);

  std::string config, out, field;
  std::uint64_t samples = 0, seed = 0;
  int workers = 0;
  double aspect = 0.0, r = 0.0;

  for (const auto& name : bcg::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config, "scenario JSON file")->check(CLI::ExistingFile);
    sub->add_option("--samples", samples, "sample budget");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "CSV output path; the manifest goes to PATH.json");
    sub->add_option("--field", field, "R, C or H")->check(CLI::IsMember({"R", "C", "H"}));
    if (name == "counterexample") sub->add_option("--aspect", aspect, "ellipsoid aspect a");
    if (name == "brs" || name == "counterexample") sub->add_option("--r", r, "weight exponent");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  bcg::Overrides ov;
  if (sub->count("--samples")) ov.samples = samples;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--workers")) ov.workers = workers;
  if (sub->count("--field")) ov.field = field;
  if (sub->get_option_no_throw("--aspect") && sub->count("--aspect")) ov.aspect = aspect;
  if (sub->get_option_no_throw("--r") && sub->count("--r")) ov.r = r;

  try {
    return run(sub->get_name(), config, out, ov);
  } catch (const bcg::SchemaError& e) {
    std::cerr << "schema error: " << (config.empty() ? "" : config + ":") << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error in " << sub->get_name() << ": " << e.what() << '\n';
  }
  return 1;
}
