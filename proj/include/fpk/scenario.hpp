#ifndef FPK_SCENARIO_HPP
#define FPK_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "fpk/fibration.hpp"
#include "fpk/solver.hpp"

namespace fpk {

enum class ScenarioKind { flag3, families, fullflag, custom };

std::string kind_name(ScenarioKind kind);

struct Scenario {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::flag3;

  // flag3: fiber twist m, collapsed gap alpha, base disk energy eta
  long m = 1;
  Rat alpha = Rat(1, 3);
  Rat eta = Rat(1, 2);

  // families: base/fiber dimensions, coupling, torus position, fiber twists
  long n = 2;
  long k = 1;
  Rat coupling = Rat(3);
  std::vector<Rat> alphas;  // empty = barycenter
  std::vector<Int> twist;   // empty = zero twists
  Rat fiber_scale = Rat(0);

  // fullflag: per-level scales (empty = derived defaults)
  std::vector<Rat> level_scales;

  // custom: a full fibration spec
  std::optional<FibrationSpec> custom;

  // solver options
  Rat target_order = Rat(0);   // 0 = scenario default
  long conductor_bound = 0;    // 0 = scenario default
  bool float_mode = false;
  bool lift_all_seeds = false;
  long emit_index_sample = 0;
  bool include_timings = false;

  bool operator==(const Scenario& other) const;
};

Scenario parse_config(const std::string& text);
std::string render_config(const Scenario& scenario);
std::string list_scenarios();

struct RunResult {
  nlohmann::ordered_json report;
  int exit_code = 0;  // 0 all candidates, 2 inconclusive, 1 error
};

RunResult run(const Scenario& scenario, std::uint64_t index_seed);

} // namespace fpk

#endif
