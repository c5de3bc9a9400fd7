#include "qtraj/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "qtraj/analytic.hpp"

namespace qtraj {

using nlohmann::json;

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Diffusive: return "diffusive";
    case Mode::Counting: return "counting";
    case Mode::Analytic: return "analytic";
    case Mode::Compare: return "compare";
    case Mode::Ensemble: return "ensemble";
    case Mode::Survival: return "survival";
    case Mode::Lindblad: return "lindblad";
  }
  throw ConfigError("unknown mode tag");
}

Mode mode_from_name(const std::string& name) {
  if (name == "diffusive") return Mode::Diffusive;
  if (name == "counting") return Mode::Counting;
  if (name == "analytic") return Mode::Analytic;
  if (name == "compare") return Mode::Compare;
  if (name == "ensemble") return Mode::Ensemble;
  if (name == "survival") return Mode::Survival;
  if (name == "lindblad") return Mode::Lindblad;
  throw ConfigError("unknown mode '" + name + "'");
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.contains(it.key()))
      throw ConfigError("unknown key '" + where + it.key() + "'");
}

double require_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError("missing required key '" + where + key + "'");
  if (!obj[key].is_number()) throw ConfigError("key '" + where + key + "' must be a number");
  const double v = obj[key].get<double>();
  if (!std::isfinite(v)) throw ConfigError("key '" + where + key + "' must be finite");
  return v;
}

double optional_number(const json& obj, const std::string& where, const std::string& key,
                       double fallback) {
  if (!obj.contains(key)) return fallback;
  return require_number(obj, where, key);
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  grid.validate();
  initial.validate();
  if (n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");
  if (record_every < 1) throw ConfigError("record_every must be >= 1");
  if (mode == Mode::Ensemble && scheme != "diffusive" && scheme != "counting")
    throw ConfigError("ensemble scheme must be 'diffusive' or 'counting'");
  if (params.dim != 0 && params.dim < 2)
    throw ConfigError("params.dim must be 0 (auto) or >= 2");
  if (!tol.allow_coarse_dt) {
    if (params.mu * grid.dt() > 0.01 + 1e-12)
      throw ConfigError("mu * dt = " + std::to_string(params.mu * grid.dt()) +
                        " exceeds the 0.01 stability guard "
                        "(set tolerances.allow_coarse_dt to override)");
    if (mode == Mode::Counting || mode == Mode::Survival ||
        (mode == Mode::Ensemble && scheme == "counting")) {
      const double n0 = analytic::initial_means(initial).mean_n;
      if (params.mu * std::max(n0, 1.0) * grid.dt() > 0.01 + 1e-12)
        throw ConfigError("counting guard: mu * <n>(0) * dt exceeds 0.01 "
                          "(set tolerances.allow_coarse_dt to override)");
    }
  }
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown(doc, "", {"mode", "initial", "params", "grid", "seed", "n_trajectories",
                           "scheme", "record_every", "output", "tolerances"});

  RunConfig c;
  if (!doc.contains("mode")) throw ConfigError("missing required key 'mode'");
  c.mode = mode_from_name(doc["mode"].get<std::string>());

  if (!doc.contains("initial") || !doc["initial"].is_object())
    throw ConfigError("missing required object 'initial'");
  {
    const json& ini = doc["initial"];
    reject_unknown(ini, "initial.", {"family", "alpha_re", "alpha_im", "rho", "theta"});
    if (!ini.contains("family"))
      throw ConfigError("missing required key 'initial.family'");
    c.initial.family = family_from_name(ini["family"].get<std::string>());
    const bool squeezed = c.initial.family == Family::SqueezedVacuum ||
                          c.initial.family == Family::SqueezedCoherent;
    const bool displaced = c.initial.family == Family::Coherent ||
                           c.initial.family == Family::CatEven ||
                           c.initial.family == Family::CatOdd ||
                           c.initial.family == Family::SqueezedCoherent;
    if (displaced) {
      c.initial.alpha = Complex{require_number(ini, "initial.", "alpha_re"),
                                optional_number(ini, "initial.", "alpha_im", 0.0)};
    } else if (ini.contains("alpha_re") || ini.contains("alpha_im")) {
      throw ConfigError("initial.alpha_* not allowed for family '" +
                        family_name(c.initial.family) + "'");
    }
    if (squeezed) {
      if (!ini.contains("rho")) throw ConfigError("missing required key 'initial.rho'");
      if (!ini.contains("theta")) throw ConfigError("missing required key 'initial.theta'");
      c.initial.xi = SqueezeParams::make(require_number(ini, "initial.", "rho"),
                                         require_number(ini, "initial.", "theta"));
    } else if (ini.contains("rho") || ini.contains("theta")) {
      if (ini.contains("rho") && !ini.contains("theta"))
        throw ConfigError("missing required key 'initial.theta' (rho given without theta)");
      throw ConfigError("initial.rho/theta not allowed for family '" +
                        family_name(c.initial.family) + "'");
    }
  }

  if (!doc.contains("params") || !doc["params"].is_object())
    throw ConfigError("missing required object 'params'");
  {
    const json& par = doc["params"];
    reject_unknown(par, "params.", {"omega", "mu", "dim"});
    c.params.omega = require_number(par, "params.", "omega");
    c.params.mu = require_number(par, "params.", "mu");
    c.params.dim = static_cast<int>(optional_number(par, "params.", "dim", 0.0));
  }

  if (!doc.contains("grid") || !doc["grid"].is_object())
    throw ConfigError("missing required object 'grid'");
  {
    const json& g = doc["grid"];
    reject_unknown(g, "grid.", {"t_max", "n_steps"});
    c.grid.t_max = require_number(g, "grid.", "t_max");
    c.grid.n_steps = static_cast<int>(require_number(g, "grid.", "n_steps"));
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw ConfigError("key 'seed' must be a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  c.n_trajectories = static_cast<int>(optional_number(doc, "", "n_trajectories", 1.0));
  if (doc.contains("scheme")) c.scheme = doc["scheme"].get<std::string>();
  c.record_every = static_cast<int>(optional_number(doc, "", "record_every", 1.0));
  if (doc.contains("output")) c.output = doc["output"].get<std::string>();

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    reject_unknown(t, "tolerances.",
                   {"max_mean_x", "max_mean_y", "max_mean_n", "max_dx", "max_dy",
                    "max_infidelity", "allow_coarse_dt"});
    c.tol.max_mean_x = optional_number(t, "tolerances.", "max_mean_x", c.tol.max_mean_x);
    c.tol.max_mean_y = optional_number(t, "tolerances.", "max_mean_y", c.tol.max_mean_y);
    c.tol.max_mean_n = optional_number(t, "tolerances.", "max_mean_n", c.tol.max_mean_n);
    c.tol.max_dx = optional_number(t, "tolerances.", "max_dx", c.tol.max_dx);
    c.tol.max_dy = optional_number(t, "tolerances.", "max_dy", c.tol.max_dy);
    c.tol.max_infidelity =
        optional_number(t, "tolerances.", "max_infidelity", c.tol.max_infidelity);
    if (t.contains("allow_coarse_dt")) c.tol.allow_coarse_dt = t["allow_coarse_dt"].get<bool>();
  }

  c.validate();
  return c;
}

std::string emit_config(const RunConfig& c) {
  json doc;
  doc["mode"] = mode_name(c.mode);
  json ini;
  ini["family"] = family_name(c.initial.family);
  const bool squeezed = c.initial.family == Family::SqueezedVacuum ||
                        c.initial.family == Family::SqueezedCoherent;
  const bool displaced = c.initial.family == Family::Coherent ||
                         c.initial.family == Family::CatEven ||
                         c.initial.family == Family::CatOdd ||
                         c.initial.family == Family::SqueezedCoherent;
  if (displaced) {
    ini["alpha_re"] = c.initial.alpha.real();
    ini["alpha_im"] = c.initial.alpha.imag();
  }
  if (squeezed) {
    ini["rho"] = c.initial.xi.rho;
    ini["theta"] = c.initial.xi.theta;
  }
  doc["initial"] = ini;
  doc["params"] = {{"omega", c.params.omega}, {"mu", c.params.mu}, {"dim", c.params.dim}};
  doc["grid"] = {{"t_max", c.grid.t_max}, {"n_steps", c.grid.n_steps}};
  doc["seed"] = c.seed;
  doc["n_trajectories"] = c.n_trajectories;
  doc["scheme"] = c.scheme;
  doc["record_every"] = c.record_every;
  doc["output"] = c.output;
  doc["tolerances"] = {{"max_mean_x", c.tol.max_mean_x},   {"max_mean_y", c.tol.max_mean_y},
                       {"max_mean_n", c.tol.max_mean_n},   {"max_dx", c.tol.max_dx},
                       {"max_dy", c.tol.max_dy},           {"max_infidelity", c.tol.max_infidelity},
                       {"allow_coarse_dt", c.tol.allow_coarse_dt}};
  return doc.dump(2) + "\n";
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.mode == b.mode && a.initial.family == b.initial.family &&
         a.initial.alpha == b.initial.alpha && a.initial.xi.rho == b.initial.xi.rho &&
         a.initial.xi.theta == b.initial.xi.theta && a.params.omega == b.params.omega &&
         a.params.mu == b.params.mu && a.params.dim == b.params.dim &&
         a.grid.t_max == b.grid.t_max && a.grid.n_steps == b.grid.n_steps &&
         a.seed == b.seed && a.n_trajectories == b.n_trajectories && a.scheme == b.scheme &&
         a.record_every == b.record_every && a.output == b.output &&
         a.tol.max_mean_x == b.tol.max_mean_x && a.tol.max_mean_y == b.tol.max_mean_y &&
         a.tol.max_mean_n == b.tol.max_mean_n && a.tol.max_dx == b.tol.max_dx &&
         a.tol.max_dy == b.tol.max_dy && a.tol.max_infidelity == b.tol.max_infidelity &&
         a.tol.allow_coarse_dt == b.tol.allow_coarse_dt;
}

}  // namespace qtraj
