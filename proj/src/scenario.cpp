#include "fpk/scenario.hpp"

#include <chrono>
#include <sstream>

#include "fpk/treed.hpp"

namespace fpk {

using json = nlohmann::ordered_json;

std::string kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::flag3:
      return "flag3";
    case ScenarioKind::families:
      return "families";
    case ScenarioKind::fullflag:
      return "fullflag";
    case ScenarioKind::custom:
      return "custom";
  }
  return "custom";
}

namespace {

ScenarioKind kind_from_name(const std::string& name) {
  if (name == "flag3")
    return ScenarioKind::flag3;
  if (name == "families")
    return ScenarioKind::families;
  if (name == "fullflag")
    return ScenarioKind::fullflag;
  if (name == "custom")
    return ScenarioKind::custom;
  throw ConfigError("unknown scenario kind: " + name);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos)
    return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_tuple(const std::string& text, const std::string& where) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw ConfigError(where + ": expected a parenthesized tuple, got '" + text + "'");
  std::vector<std::string> parts;
  std::string inner = t.substr(1, t.size() - 2);
  std::string current;
  for (char c : inner) {
    if (c == ',') {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty())
    parts.push_back(trim(current));
  return parts;
}

std::vector<Rat> parse_rat_tuple(const std::string& text, const std::string& where) {
  std::vector<Rat> out;
  for (const auto& p : split_tuple(text, where))
    out.push_back(parse_rat(p));
  return out;
}

std::vector<Int> parse_int_tuple(const std::string& text, const std::string& where) {
  std::vector<Int> out;
  for (const auto& p : split_tuple(text, where))
    out.push_back(Int(p));
  return out;
}

struct ConfigLine {
  std::string section;
  std::string key;
  std::string value;
  int number = 0;
};

std::vector<ConfigLine> tokenize(const std::string& text) {
  std::vector<ConfigLine> lines;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos)
      raw = raw.substr(0, hash);
    std::string line = trim(raw);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(number) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    lines.push_back(ConfigLine{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                               number});
  }
  return lines;
}

// [base]/[fiber] sections accumulate into one of these before validation
struct PolytopeDraft {
  long dimension = -1;
  Rat scale = Rat(1);
  std::vector<Facet> facets;
  std::vector<Rat> point;
};

void apply_polytope_line(PolytopeDraft& draft, const ConfigLine& line) {
  if (line.key == "scale") {
    draft.scale = parse_rat(line.value);
  } else if (line.key == "point") {
    draft.point = parse_rat_tuple(line.value, "[" + line.section + "].point");
  } else if (line.key == "normal") {
    // facet lines look like: normal = (a, b); offset = c
    auto semi = line.value.find(';');
    if (semi == std::string::npos)
      throw ConfigError("line " + std::to_string(line.number) +
                        ": facet needs 'normal = (...); offset = c'");
    std::string normal_part = trim(line.value.substr(0, semi));
    std::string offset_part = trim(line.value.substr(semi + 1));
    auto eq = offset_part.find('=');
    if (eq == std::string::npos || trim(offset_part.substr(0, eq)) != "offset")
      throw ConfigError("line " + std::to_string(line.number) + ": missing offset");
    Facet f;
    for (const auto& c : split_tuple(normal_part, "[" + line.section + "].normal"))
      f.normal.push_back(Int(c));
    f.offset = parse_rat(trim(offset_part.substr(eq + 1)));
    if (draft.dimension < 0)
      draft.dimension = static_cast<long>(f.normal.size());
    draft.facets.push_back(std::move(f));
  } else {
    throw ConfigError("line " + std::to_string(line.number) + ": unknown key '" + line.key +
                      "' in [" + line.section + "]");
  }
}

FibrationSpec assemble_custom(const PolytopeDraft& base, const PolytopeDraft& fiber,
                              const std::vector<ConfigLine>& holonomy_lines) {
  FibrationSpec spec;
  if (base.dimension < 0)
    throw ConfigError("[base]: at least one facet required");
  spec.base = MomentPolytope(base.dimension, base.facets, base.scale);
  spec.base_point = InteriorPoint{base.point};
  if (fiber.dimension < 0) {
    spec.fiber = MomentPolytope::point();
    spec.fiber_point = InteriorPoint{{}};
  } else {
    spec.fiber = MomentPolytope(fiber.dimension, fiber.facets, fiber.scale);
    spec.fiber_point = InteriorPoint{fiber.point};
  }
  long fiber_dim = spec.fiber.dimension();
  std::vector<std::string> names;
  for (long i = 1; i <= spec.base.dimension(); ++i)
    names.push_back("y" + std::to_string(i));
  for (long i = 1; i <= fiber_dim; ++i)
    names.push_back("x" + std::to_string(i));
  spec.vars = VarSet(names, static_cast<std::size_t>(spec.base.dimension()));
  spec.coupling = base.scale;
  std::size_t disks = spec.base.facets().size();
  spec.holonomy_exponents.assign(disks, Exponents(fiber_dim, Int(0)));
  spec.vertical_shift.assign(disks, Rat(0));
  spec.sign_convention.assign(disks, 1);
  std::size_t row_index = 0;
  for (const auto& line : holonomy_lines) {
    if (line.key == "row") {
      if (row_index >= disks)
        throw ConfigError("[holonomy]: more rows than base disks");
      auto row = parse_int_tuple(line.value, "[holonomy].row");
      if (static_cast<long>(row.size()) != fiber_dim)
        throw ConfigError("[holonomy]: row length must match fiber dimension");
      spec.holonomy_exponents[row_index++] = row;
    } else if (line.key == "shifts") {
      auto shifts = parse_rat_tuple(line.value, "[holonomy].shifts");
      if (shifts.size() != disks)
        throw ConfigError("[holonomy]: shifts must match base disk count");
      spec.vertical_shift = shifts;
    } else if (line.key == "signs") {
      auto signs = parse_int_tuple(line.value, "[holonomy].signs");
      if (signs.size() != disks)
        throw ConfigError("[holonomy]: signs must match base disk count");
      for (std::size_t i = 0; i < disks; ++i)
        spec.sign_convention[i] = static_cast<int>(to_long(signs[i]));
    } else if (line.key == "families_mode") {
      spec.families_mode = line.value == "true";
    } else {
      throw ConfigError("line " + std::to_string(line.number) + ": unknown key '" + line.key +
                        "' in [holonomy]");
    }
  }
  spec.validate();
  return spec;
}

std::string rat_tuple_to_string(const std::vector<Rat>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ", ";
    out += rat_to_string(v[i]);
  }
  return out + ")";
}

std::string int_tuple_to_string(const std::vector<Int>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ", ";
    out += v[i].get_str();
  }
  return out + ")";
}

} // namespace

Scenario parse_config(const std::string& text) {
  Scenario s;
  PolytopeDraft base, fiber;
  std::vector<ConfigLine> holonomy_lines;
  bool saw_scenario = false;
  for (const auto& line : tokenize(text)) {
    if (line.section == "scenario") {
      saw_scenario = true;
      if (line.key == "name")
        s.name = line.value;
      else if (line.key == "kind")
        s.kind = kind_from_name(line.value);
      else if (line.key == "m")
        s.m = to_long(Int(line.value));
      else if (line.key == "alpha")
        s.alpha = parse_rat(line.value);
      else if (line.key == "eta")
        s.eta = parse_rat(line.value);
      else if (line.key == "n")
        s.n = to_long(Int(line.value));
      else if (line.key == "k")
        s.k = to_long(Int(line.value));
      else if (line.key == "K")
        s.coupling = parse_rat(line.value);
      else if (line.key == "alphas")
        s.alphas = parse_rat_tuple(line.value, "[scenario].alphas");
      else if (line.key == "twist")
        s.twist = parse_int_tuple(line.value, "[scenario].twist");
      else if (line.key == "fiber_scale")
        s.fiber_scale = parse_rat(line.value);
      else if (line.key == "scales")
        s.level_scales = parse_rat_tuple(line.value, "[scenario].scales");
      else
        throw ConfigError("line " + std::to_string(line.number) + ": unknown key '" + line.key +
                          "' in [scenario]");
    } else if (line.section == "solver") {
      if (line.key == "target_order")
        s.target_order = parse_rat(line.value);
      else if (line.key == "conductor_bound")
        s.conductor_bound = to_long(Int(line.value));
      else if (line.key == "field") {
        if (line.value == "float")
          s.float_mode = true;
        else if (line.value == "exact")
          s.float_mode = false;
        else
          throw ConfigError("line " + std::to_string(line.number) +
                            ": field must be exact or float");
      } else if (line.key == "lift_all_seeds")
        s.lift_all_seeds = line.value == "true";
      else if (line.key == "emit_index_sample")
        s.emit_index_sample = to_long(Int(line.value));
      else if (line.key == "timings")
        s.include_timings = line.value == "true";
      else
        throw ConfigError("line " + std::to_string(line.number) + ": unknown key '" + line.key +
                          "' in [solver]");
    } else if (line.section == "base") {
      apply_polytope_line(base, line);
    } else if (line.section == "fiber") {
      apply_polytope_line(fiber, line);
    } else if (line.section == "holonomy") {
      holonomy_lines.push_back(line);
    } else {
      throw ConfigError("line " + std::to_string(line.number) + ": unknown section [" +
                        line.section + "]");
    }
  }
  if (!saw_scenario)
    throw ConfigError("missing [scenario] section");
  if (s.kind == ScenarioKind::custom)
    s.custom = assemble_custom(base, fiber, holonomy_lines);

  // semantic validation with field paths
  if (s.kind == ScenarioKind::flag3) {
    if (s.m < 0)
      throw ConfigError("[scenario].m: must be non-negative");
    if (s.alpha <= 0)
      throw ConfigError("[scenario].alpha: must be positive");
    if (s.eta <= s.alpha)
      throw ConfigError("[scenario].eta: must exceed alpha so the fiber has positive area");
  }
  if (s.kind == ScenarioKind::families) {
    if (s.coupling <= 0)
      throw ConfigError("[scenario].K: coupling must be positive");
    if (s.n < 1 || s.k < 1)
      throw ConfigError("[scenario].n/k: dimensions must be at least 1");
    if (!s.alphas.empty()) {
      if (static_cast<long>(s.alphas.size()) != s.n)
        throw ConfigError("[scenario].alphas: expected " + std::to_string(s.n) + " entries");
      Rat sum(0);
      for (const auto& a : s.alphas) {
        if (a <= 0)
          throw ConfigError("[scenario].alphas: entries must be positive "
                            "(InteriorPoint invariant)");
        sum += a;
      }
      if (sum >= s.coupling)
        throw ConfigError("[scenario].alphas: sum must stay below K "
                          "(InteriorPoint invariant)");
    }
    if (!s.twist.empty() && static_cast<long>(s.twist.size()) != s.k)
      throw ConfigError("[scenario].twist: expected " + std::to_string(s.k) + " entries");
  }
  if (s.kind == ScenarioKind::fullflag) {
    if (s.n < 2 || s.k < 1 || s.k > s.n)
      throw ConfigError("[scenario].n/k: need n >= 2 and 1 <= k <= n");
    if (!s.level_scales.empty() && static_cast<long>(s.level_scales.size()) != s.k)
      throw ConfigError("[scenario].scales: expected one scale per level");
  }
  return s;
}

std::string render_config(const Scenario& s) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "name = " << s.name << "\n";
  out << "kind = " << kind_name(s.kind) << "\n";
  switch (s.kind) {
    case ScenarioKind::flag3:
      out << "m = " << s.m << "\n";
      out << "alpha = " << rat_to_string(s.alpha) << "\n";
      out << "eta = " << rat_to_string(s.eta) << "\n";
      break;
    case ScenarioKind::families:
      out << "n = " << s.n << "\n";
      out << "k = " << s.k << "\n";
      out << "K = " << rat_to_string(s.coupling) << "\n";
      if (!s.alphas.empty())
        out << "alphas = " << rat_tuple_to_string(s.alphas) << "\n";
      if (!s.twist.empty())
        out << "twist = " << int_tuple_to_string(s.twist) << "\n";
      if (s.fiber_scale != 0)
        out << "fiber_scale = " << rat_to_string(s.fiber_scale) << "\n";
      break;
    case ScenarioKind::fullflag:
      out << "n = " << s.n << "\n";
      out << "k = " << s.k << "\n";
      if (!s.level_scales.empty())
        out << "scales = " << rat_tuple_to_string(s.level_scales) << "\n";
      break;
    case ScenarioKind::custom:
      break;
  }
  out << "[solver]\n";
  if (s.target_order != 0)
    out << "target_order = " << rat_to_string(s.target_order) << "\n";
  if (s.conductor_bound != 0)
    out << "conductor_bound = " << s.conductor_bound << "\n";
  out << "field = " << (s.float_mode ? "float" : "exact") << "\n";
  if (s.lift_all_seeds)
    out << "lift_all_seeds = true\n";
  if (s.emit_index_sample != 0)
    out << "emit_index_sample = " << s.emit_index_sample << "\n";
  if (s.include_timings)
    out << "timings = true\n";
  if (s.kind == ScenarioKind::custom && s.custom) {
    const FibrationSpec& spec = *s.custom;
    out << "[base]\n";
    out << "scale = " << rat_to_string(spec.base.scale()) << "\n";
    out << "point = " << rat_tuple_to_string(spec.base_point.coords) << "\n";
    for (const auto& f : spec.base.facets())
      out << "normal = " << int_tuple_to_string(f.normal)
          << "; offset = " << rat_to_string(f.offset) << "\n";
    if (spec.fiber.dimension() > 0) {
      out << "[fiber]\n";
      out << "scale = " << rat_to_string(spec.fiber.scale()) << "\n";
      out << "point = " << rat_tuple_to_string(spec.fiber_point.coords) << "\n";
      for (const auto& f : spec.fiber.facets())
        out << "normal = " << int_tuple_to_string(f.normal)
            << "; offset = " << rat_to_string(f.offset) << "\n";
    }
    out << "[holonomy]\n";
    for (const auto& row : spec.holonomy_exponents)
      out << "row = " << int_tuple_to_string(row) << "\n";
    out << "shifts = " << rat_tuple_to_string(spec.vertical_shift) << "\n";
    std::vector<Int> signs;
    for (int v : spec.sign_convention)
      signs.push_back(Int(v));
    out << "signs = " << int_tuple_to_string(signs) << "\n";
    out << "families_mode = " << (spec.families_mode ? "true" : "false") << "\n";
  }
  return out.str();
}

bool Scenario::operator==(const Scenario& other) const {
  return render_config(*this) == render_config(other);
}

std::string list_scenarios() {
  std::ostringstream out;
  out << "built-in scenario kinds:\n\n";
  out << "flag3     three-torus over the Clifford torus of the projective plane\n"
      << "          parameters: m >= 0, alpha > 0, eta > alpha\n\n";
  out << "families  twisted torus family in a projectivized bundle over P^n\n"
      << "          parameters: n, k, K, alphas (interior), twist, fiber_scale\n\n";
  out << "fullflag  iterated Clifford tower in the flag manifold\n"
      << "          parameters: n >= 2, 1 <= k <= n, scales (per level)\n\n";
  out << "custom    explicit [base]/[fiber]/[holonomy] sections\n\n";
  out << "sample stanza:\n\n"
      << "[scenario]\n"
      << "name = demo\n"
      << "kind = flag3\n"
      << "m = 1\n"
      << "alpha = 1/3\n"
      << "eta = 1/2\n"
      << "[solver]\n"
      << "conductor_bound = 6\n"
      << "field = exact\n";
  return out.str();
}

namespace {

json series_json(const NovikovSeries& s) {
  json out = json::array();
  for (const auto& [e, c] : s.terms())
    out.push_back(json::array(
        {e.get_num().get_str(), e.get_den().get_str(), c.to_string()}));
  return out;
}

json discarded_json(const std::vector<DiskMeta>& discarded) {
  json out = json::array();
  for (const auto& m : discarded)
    out.push_back(json{{"label", m.label},
                       {"base_area", rat_to_string(m.base_area)},
                       {"vert_area", rat_to_string(m.vert_area)},
                       {"output", m.output}});
  return out;
}

json potential_json(const LaurentQR& w) {
  json terms = json::array();
  for (const auto& [e, t] : w.terms()) {
    json term;
    json exps = json::array();
    for (const auto& x : e)
      exps.push_back(x.get_str());
    term["exponents"] = exps;
    json coeff = json::array();
    for (const auto& [d, c] : t.coeff.terms())
      coeff.push_back(json::array({rat_to_string(d.first), rat_to_string(d.second),
                                   c.to_string()}));
    term["coeff"] = coeff;
    if (t.meta) {
      term["label"] = t.meta->label;
      term["maslov"] = t.meta->maslov;
      term["base_area"] = rat_to_string(t.meta->base_area);
      term["vert_area"] = rat_to_string(t.meta->vert_area);
      term["sign"] = t.meta->sign;
      term["output"] = t.meta->output;
    }
    terms.push_back(term);
  }
  json out;
  json names = json::array();
  for (const auto& n : w.vars().names)
    names.push_back(n);
  out["vars"] = names;
  out["base_vars"] = w.vars().base_count;
  out["terms"] = terms;
  return out;
}

json system_json(const CriticalSystem& sys) {
  json eqs = json::array();
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    json eq;
    eq["derived_from"] = sys.provenance[i].derived_from;
    json clearing = json::array();
    for (const auto& c : sys.provenance[i].clearing)
      clearing.push_back(c.get_str());
    eq["clearing"] = clearing;
    eq["t_content"] = rat_to_string(sys.provenance[i].t_content);
    json terms = json::array();
    for (const auto& [e, t] : sys.equations[i].terms()) {
      json exps = json::array();
      for (const auto& x : e)
        exps.push_back(x.get_str());
      terms.push_back(json{{"exponents", exps}, {"series", series_json(t.coeff)}});
    }
    eq["terms"] = terms;
    eqs.push_back(eq);
  }
  json out;
  json names = json::array();
  for (const auto& n : sys.vars.names)
    names.push_back(n);
  out["vars"] = names;
  out["on_cover"] = sys.on_cover;
  out["equations"] = eqs;
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::floer_nontrivial_candidate:
      return "floer_nontrivial_candidate";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::failed:
      return "failed";
  }
  return "failed";
}

json report_json(const SolveReport& r) {
  json out;
  out["seed"] = r.seed.to_string();
  out["seed_conductor"] = r.seed.conductor;
  json sol = json::array();
  for (const auto& s : r.solution)
    sol.push_back(series_json(s));
  out["solution"] = sol;
  out["achieved_order"] = rat_to_string(r.achieved_order);
  json residuals = json::array();
  for (const auto& v : r.residual_valuations) {
    if (v)
      residuals.push_back(rat_to_string(*v));
    else
      residuals.push_back(nullptr);
  }
  out["residual_valuations"] = residuals;
  out["jacobian_unit"] = r.jacobian_unit;
  out["hessian_nondegenerate"] = r.hessian_nondegenerate;
  out["verdict"] = verdict_name(r.verdict);
  out["iterations"] = r.iterations;
  json trace = json::array();
  for (const auto& v : r.valuation_trace)
    trace.push_back(rat_to_string(v));
  out["valuation_trace"] = trace;
  out["on_cover"] = r.on_cover;
  out["note"] = r.note;
  return out;
}

int exit_code_for(const std::vector<SolveReport>& reports) {
  if (reports.empty())
    return 2;
  for (const auto& r : reports)
    if (r.verdict != Verdict::floer_nontrivial_candidate)
      return 2;
  return 0;
}

// flag-type fibration over the Clifford torus of the projective plane
FibrationSpec flag3_spec(const Scenario& s) {
  Rat fiber_area = s.eta - s.alpha;
  FibrationSpec spec;
  spec.base = MomentPolytope::simplex(2, 3 * s.eta);
  spec.base_point = InteriorPoint{{Rat(1, 3), Rat(1, 3)}};
  spec.fiber = MomentPolytope::simplex(1, 2 * fiber_area);
  spec.fiber_point = InteriorPoint{{Rat(1, 2)}};
  spec.coupling = 3 * s.eta;
  spec.holonomy_exponents = {{Int(0)}, {Int(0)}, {Int(-s.m)}};
  spec.vertical_shift = {Rat(0), Rat(0), Rat(0)};
  spec.sign_convention = {1, 1, 1};
  spec.vars = VarSet({"y1", "y2", "y3"}, 2);
  return spec;
}

// reduced one-variable system on the cover, built from the paper's
// normalized equation and the standard clearing pipeline
CriticalSystem flag3_reduced_system(const Scenario& s, const Rat& cutoff) {
  Rat fiber_area = s.eta - s.alpha;
  VarSet cover({"y"}, 1);
  Rat eps(1, 100);
  Rat eps_bound = s.alpha / (2 * s.eta);
  if (eps_bound < eps)
    eps = eps_bound;
  LaurentQR eq(cover);
  Rat qr_cutoff = cutoff + s.eta;  // wide enough to hold every exponent
  eq.add_term({Int(0)},
              BiNovikovSeries::monomial(Rat(0), fiber_area, Scalar(Rat(1)), eps, qr_cutoff));
  eq.add_term({Int(-2)},
              BiNovikovSeries::monomial(Rat(0), fiber_area, Scalar(Rat(-1)), eps, qr_cutoff));
  if (s.m > 0)
    eq.add_term({Int(-(5 * s.m + 3))},
                BiNovikovSeries::monomial(s.eta, Rat(0), Scalar(Rat(-s.m)), eps, qr_cutoff));
  LaurentT collapsed = truncate_equation(collapse(eq), qr_cutoff, SeriesMode::ring);
  CriticalSystem sys = clear_denominators({collapsed});
  sys.on_cover = true;
  sys.provenance[0].derived_from =
      "y3, after the substitution y1 = y2 = y3^(-m/3) and the cover y3 -> y3^3";
  // divide out the t-content, as build_system does for full potentials
  std::optional<Rat> content;
  for (const auto& [e, t] : sys.equations[0].terms()) {
    auto v = t.coeff.valuation();
    if (v && (!content || *v < *content))
      content = *v;
  }
  if (content && *content > 0) {
    LaurentT normalized(sys.vars);
    for (const auto& [e, t] : sys.equations[0].terms())
      normalized.add_term(e, t.coeff.shifted(-*content));
    sys.equations[0] = std::move(normalized);
    sys.provenance[0].t_content = *content;
  }
  sys.equations[0] = truncate_equation(sys.equations[0], cutoff, SeriesMode::ring);
  return sys;
}

FibrationSpec families_spec(const Scenario& s) {
  std::vector<Rat> alphas = s.alphas;
  if (alphas.empty())
    alphas.assign(s.n, s.coupling / Rat(s.n + 1));
  std::vector<Int> twist = s.twist;
  if (twist.empty())
    twist.assign(s.k, Int(0));
  FibrationSpec spec;
  spec.base = MomentPolytope::simplex(s.n, s.coupling);
  std::vector<Rat> u;
  for (const auto& a : alphas)
    u.push_back(a / s.coupling);
  spec.base_point = InteriorPoint{u};
  Rat fiber_scale = s.fiber_scale;
  if (fiber_scale == 0)
    fiber_scale = s.coupling * Rat(s.k + 1) / Rat(2 * (s.n + 1));
  spec.fiber = MomentPolytope::simplex(s.k, fiber_scale);
  spec.fiber_point = InteriorPoint{std::vector<Rat>(s.k, Rat(1, s.k + 1))};
  spec.coupling = s.coupling;
  spec.families_mode = true;
  TwistData twist_data{alphas, s.n, s.k, s.coupling};
  spec.vertical_shift = families_shifts(twist_data);
  std::vector<std::string> names;
  for (long i = 1; i <= s.n; ++i)
    names.push_back("y" + std::to_string(i));
  for (long i = 1; i <= s.k; ++i)
    names.push_back("x" + std::to_string(i));
  spec.vars = VarSet(names, s.n);
  for (long d = 0; d <= s.n; ++d)
    spec.holonomy_exponents.push_back(Exponents(s.k, Int(0)));
  for (long i = 0; i < s.k; ++i)
    spec.holonomy_exponents.back()[i] = -twist[i];
  spec.sign_convention.assign(s.n + 1, 1);
  Rat max_alpha(0);
  for (const auto& a : alphas)
    if (a > max_alpha)
      max_alpha = a;
  Rat bound = s.coupling / (Rat(2 * (s.n + 1)) * max_alpha);
  if (bound < spec.epsilon)
    spec.epsilon = bound;
  return spec;
}

FlagTower fullflag_tower(const Scenario& s) {
  FlagTower tower;
  tower.n = s.n;
  tower.k = s.k;
  tower.level_scales = s.level_scales;
  if (tower.level_scales.empty())
    for (long i = 1; i <= s.k; ++i)
      tower.level_scales.push_back(Rat(s.n + 2 - i) * (Rat(1) + Rat(s.k - i, 4)));
  // unit holonomy twists on every inverse term; they feed the t-corrections
  // that the lift has to solve order by order
  for (long j = 2; j <= s.k; ++j) {
    std::vector<Exponents> per_level;
    for (long i = 1; i < j; ++i)
      per_level.push_back(Exponents(tower.level_var_count(j), Int(1)));
    tower.twists.push_back(std::move(per_level));
  }
  return tower;
}

// Block-constant root-of-unity seeds of the tower system: every variable in
// level i takes the value exp(2*pi*i*angle_i) with
//   (n+2-i) * angle_i + sum_{l>i} |nu_(i|l)| * angle_l = m_i  (m_i integral).
std::vector<Seed> tower_seeds(const FlagTower& tower, bool all_choices) {
  long k = tower.k;
  std::vector<std::vector<long>> choices;  // m_i per level
  if (all_choices) {
    std::vector<long> current(k, 0);
    while (true) {
      choices.push_back(current);
      long level = k - 1;
      while (level >= 0) {
        long order = tower.n + 2 - (level + 1);
        if (++current[level] < order)
          break;
        current[level] = 0;
        --level;
      }
      if (level < 0)
        break;
    }
  } else {
    choices.push_back(std::vector<long>(k, 0));
  }
  std::vector<Seed> seeds;
  for (const auto& m_choice : choices) {
    std::vector<Rat> angles(k, Rat(0));
    for (long i = k; i >= 1; --i) {
      Rat acc(m_choice[i - 1]);
      for (long l = i + 1; l <= k; ++l) {
        Int total(0);
        if (!tower.twists.empty()) {
          const auto& row = tower.twists[l - 2][i - 1];
          for (const auto& v : row)
            total += v;
        }
        acc -= Rat(total) * angles[l - 1];
      }
      angles[i - 1] = acc / Rat(tower.n + 2 - i);
    }
    long conductor = 1;
    for (const auto& a : angles)
      conductor = lcm_long(conductor, to_long(a.get_den()));
    std::vector<long> exps;
    for (long i = 1; i <= k; ++i) {
      Rat scaled = angles[i - 1] * Rat(conductor);
      long e = to_long(scaled.get_num()) % conductor;
      if (e < 0)
        e += conductor;
      for (long j = 0; j < tower.level_var_count(i); ++j)
        exps.push_back(e);
    }
    seeds.push_back(Seed::from_exponents(conductor, exps));
  }
  return seeds;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

json index_sample_json(long count, std::uint64_t seed) {
  TypeGenerator gen(seed);
  long identity_failures = 0, idempotence_failures = 0;
  long inequality_checked = 0, inequality_failed = 0, inequality_skipped = 0;
  for (long i = 0; i < count; ++i) {
    TreedType t = gen.random_type();
    if (projected_index(t).total != treed_index(pi_stabilize(t)).total)
      ++identity_failures;
    TreedType once = pi_stabilize(t);
    TreedType twice = pi_stabilize(once);
    if (treed_index(once).total != treed_index(twice).total ||
        once.vertices.size() != twice.vertices.size() || once.edges.size() != twice.edges.size())
      ++idempotence_failures;
    TreedType h = gen.random_hypothesis_type();
    ProjectionCheck check = projection_inequality_check(h);
    if (check.status == ProjectionStatus::hypothesis_violated)
      ++inequality_skipped;
    else if (check.status == ProjectionStatus::holds)
      ++inequality_checked;
    else
      ++inequality_failed;
  }
  json out;
  out["count"] = count;
  out["generator_seed"] = seed;
  out["identity_failures"] = identity_failures;
  out["idempotence_failures"] = idempotence_failures;
  out["inequality_checked"] = inequality_checked;
  out["inequality_failed"] = inequality_failed;
  out["inequality_skipped"] = inequality_skipped;
  return out;
}

} // namespace

RunResult run(const Scenario& scenario, std::uint64_t index_seed) {
  Timer timer;
  RunResult result;
  json& report = result.report;
  report["scenario"] = json{{"name", scenario.name}, {"kind", kind_name(scenario.kind)}};
  report["config"] = render_config(scenario);
  json warnings = json::array();
  warnings.push_back("analytic hypotheses (regularity, compactness, transversality of the "
                     "perturbation data) are assumed, not machine-checked; verdicts are "
                     "candidates");
  if (scenario.float_mode)
    warnings.push_back("float mode: coefficient arithmetic uses a fixed zero tolerance");

  SolverOptions options;
  options.target_order = scenario.target_order;
  options.conductor_bound = scenario.conductor_bound;
  options.float_mode = scenario.float_mode;

  std::vector<SolveReport> reports;
  switch (scenario.kind) {
    case ScenarioKind::flag3: {
      FibrationSpec spec = flag3_spec(scenario);
      SecondOrderResult second = second_order_potential(spec);
      report["potential"] = potential_json(second.potential);
      report["discarded_lifted_terms"] = discarded_json(second.discarded);
      if (options.target_order == 0)
        options.target_order = 3 * scenario.alpha;
      if (options.conductor_bound == 0)
        options.conductor_bound = 6;
      CriticalSystem sys = flag3_reduced_system(scenario, options.target_order);
      report["critical_system"] = system_json(sys);
      warnings.push_back("solutions are reported on the covering variable y with y3 = y^3");
      reports = solve_system(sys, options);
      break;
    }
    case ScenarioKind::families: {
      FibrationSpec spec = families_spec(scenario);
      SecondOrderResult second = second_order_potential(spec);
      report["potential"] = potential_json(second.potential);
      report["discarded_lifted_terms"] = discarded_json(second.discarded);
      // the balancing property behind the families construction
      bool balanced = true;
      Rat expected = scenario.coupling / Rat(scenario.n + 1);
      LaurentQR lifted = lift_base_potential(spec);
      for (const auto& [e, t] : lifted.terms())
        if (t.meta->base_area + t.meta->vert_area != expected)
          balanced = false;
      report["equal_degree_check"] = balanced;
      warnings.push_back("all interior torus positions are treated as admissible; the paper "
                         "constructs the twist only on a small neighborhood");
      LaurentT collapsed = collapse(second.potential);
      if (options.conductor_bound == 0)
        options.conductor_bound = (scenario.n + 1) * (scenario.k + 1);
      CriticalSystem sys = build_system(collapsed);
      report["critical_system"] = system_json(sys);
      reports = solve_scenario(collapsed, options);
      break;
    }
    case ScenarioKind::fullflag: {
      FlagTower tower = fullflag_tower(scenario);
      LaurentQR w = kth_order_potential(tower);
      report["potential"] = potential_json(w);
      json pattern = json::array();
      for (long level = 1; level <= tower.k; ++level)
        pattern.push_back(json{{"level", level},
                               {"terms", tower.n + 2 - level},
                               {"energy", rat_to_string(tower_level_energy(tower, level))}});
      report["level_pattern"] = pattern;
      if (options.target_order == 0)
        options.target_order = 2 * tower_level_energy(tower, tower.k);
      LaurentT collapsed = collapse(w);
      CriticalSystem sys = build_system(collapsed);
      report["critical_system"] = system_json(sys);
      std::vector<Seed> seeds = tower_seeds(tower, scenario.lift_all_seeds);
      reports = solve_scenario(collapsed, options, &seeds);
      break;
    }
    case ScenarioKind::custom: {
      if (!scenario.custom)
        throw ConfigError("custom scenario without a fibration spec");
      FibrationSpec spec = *scenario.custom;
      auto is_simplex = [](const MomentPolytope& p) {
        if (p.dimension() == 0)
          return true;
        MomentPolytope reference = MomentPolytope::simplex(p.dimension());
        if (p.facets().size() != reference.facets().size())
          return false;
        for (std::size_t i = 0; i < p.facets().size(); ++i)
          if (p.facets()[i].normal != reference.facets()[i].normal)
            return false;
        return true;
      };
      if (!is_simplex(spec.base) || !is_simplex(spec.fiber))
        warnings.push_back("non-simplex polytope: the first-order disk classification is "
                           "unvalidated beyond Fano simplices");
      SecondOrderResult second = second_order_potential(spec);
      report["potential"] = potential_json(second.potential);
      report["discarded_lifted_terms"] = discarded_json(second.discarded);
      LaurentT collapsed = collapse(second.potential);
      if (options.conductor_bound == 0)
        options.conductor_bound = 60;
      CriticalSystem sys = build_system(collapsed);
      report["critical_system"] = system_json(sys);
      reports = solve_scenario(collapsed, options);
      break;
    }
  }

  json report_array = json::array();
  for (const auto& r : reports)
    report_array.push_back(report_json(r));
  report["solve_reports"] = report_array;
  if (scenario.emit_index_sample > 0)
    report["index_sample"] = index_sample_json(scenario.emit_index_sample, index_seed);
  report["warnings"] = warnings;
  if (scenario.include_timings)
    report["timings"] = json{{"total_seconds", timer.seconds()}};
  else
    report["timings"] = nullptr;
  result.exit_code = exit_code_for(reports);
  return result;
}

} // namespace fpk
