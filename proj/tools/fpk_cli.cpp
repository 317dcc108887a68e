#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fpk/scenario.hpp"
#include "fpk/treed.hpp"

int main(int argc, char** argv) {
  CLI::App app{"disk potentials, Novikov critical points, and treed-disk indices "
               "for fibered Lagrangian tori"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_path;
  std::string order_text;
  std::string field_text;
  long conductor = 0;
  long index_sample = 0;
  bool list_scenarios_flag = false;
  bool timings = false;

  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario configuration file");
  run_cmd->add_option("file", config_path, "scenario configuration file")->required();
  run_cmd->add_option("--order", order_text, "target truncation order (rational p/q)");
  run_cmd->add_option("--conductor", conductor, "root-of-unity conductor bound for seeds");
  run_cmd->add_option("--field", field_text, "coefficient arithmetic: exact|float");
  run_cmd->add_option("--out", out_path, "write the JSON report to this path");
  run_cmd->add_option("--emit-index-sample", index_sample,
                      "also run N treed-type index identity checks");
  run_cmd->add_flag("--timings", timings, "include wall-clock timings in the report");

  app.add_flag("--list-scenarios", list_scenarios_flag, "describe the built-in scenario kinds");

  CLI11_PARSE(app, argc, argv);

  if (list_scenarios_flag) {
    std::cout << fpk::list_scenarios();
    return 0;
  }
  if (!run_cmd->parsed()) {
    std::cout << app.help();
    return 0;
  }

  try {
    std::ifstream in(config_path);
    if (!in)
      throw fpk::ConfigError("cannot open " + config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    fpk::Scenario scenario = fpk::parse_config(buffer.str());
    if (!order_text.empty())
      scenario.target_order = fpk::parse_rat(order_text);
    if (conductor != 0)
      scenario.conductor_bound = conductor;
    if (!field_text.empty()) {
      if (field_text == "float")
        scenario.float_mode = true;
      else if (field_text == "exact")
        scenario.float_mode = false;
      else
        throw fpk::ConfigError("--field must be exact or float");
    }
    if (index_sample != 0)
      scenario.emit_index_sample = index_sample;
    if (timings)
      scenario.include_timings = true;

    fpk::RunResult result = fpk::run(scenario, fpk::generator_seed_from_env());
    std::string text = result.report.dump(2);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out)
        throw fpk::ConfigError("cannot write " + out_path);
      out << text << "\n";
    } else {
      std::cout << text << "\n";
    }
    return result.exit_code;
  } catch (const fpk::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
