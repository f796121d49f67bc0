#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "phonoconv/errors.hpp"
#include "phonoconv/physical_model.hpp"

namespace phonoconv {

/// `[physical]` section: crystal constants in SI units plus the optional optical
/// and acoustic angular frequencies (rad/s) needed to evaluate g0 and the Brillouin frequency.
struct PhysicalSection {
  CrystalParams crystal;
  std::optional<double> omega1;
  std::optional<double> omega_ac;
};

struct ModelConfig {
  SystemParams system;
  std::optional<PhysicalSection> physical;
};

namespace detail {

struct SystemKey {
  std::string_view name;
  double SystemParams::*field;
};

inline constexpr SystemKey system_keys[] = {
    {"delta1", &SystemParams::delta1},         {"delta2", &SystemParams::delta2},
    {"omega_m", &SystemParams::omega_m},       {"kappa1", &SystemParams::kappa1},
    {"kappa2", &SystemParams::kappa2},         {"gamma_m", &SystemParams::gamma_m},
    {"g_m", &SystemParams::g_m},               {"g1", &SystemParams::g1},
    {"g2", &SystemParams::g2},                 {"kappa1_ext", &SystemParams::kappa1_ext},
    {"kappa2_ext", &SystemParams::kappa2_ext}, {"alpha_p", &SystemParams::alpha_p},
};

struct CrystalKey {
  std::string_view name;
  double CrystalParams::*field;
};

inline constexpr CrystalKey crystal_keys[] = {
    {"n", &CrystalParams::n},         {"n_eff", &CrystalParams::n_eff},
    {"p13", &CrystalParams::p13},     {"rho", &CrystalParams::rho},
    {"A", &CrystalParams::area},      {"L_ac", &CrystalParams::l_ac},
    {"L_opt", &CrystalParams::l_opt}, {"v_a", &CrystalParams::v_a},
};

inline double parse_number(std::string_view key, std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("key '" + std::string(key) + "': cannot parse '" + std::string(text) +
                      "' as a number");
  return value;
}

inline bool set_system_key(SystemParams& p, std::string_view key, double value) {
  for (const auto& k : system_keys) {
    if (k.name == key) {
      p.*(k.field) = value;
      return true;
    }
  }
  return false;
}

inline bool set_physical_key(PhysicalSection& s, std::string_view key, double value) {
  for (const auto& k : crystal_keys) {
    if (k.name == key) {
      s.crystal.*(k.field) = value;
      return true;
    }
  }
  if (key == "omega1") {
    s.omega1 = value;
    return true;
  }
  if (key == "omega_ac") {
    s.omega_ac = value;
    return true;
  }
  return false;
}

}  // namespace detail

/// Parses the two-section key = value configuration on top of the default
/// parameters. Unknown sections and unknown keys are hard errors.
inline ModelConfig parse_config(std::istream& in, ModelConfig cfg = {}) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (section == "system") {
      for (const auto& [key, value] : body) {
        const double v = detail::parse_number(key, value.data());
        if (!detail::set_system_key(cfg.system, key, v))
          throw ConfigError("unknown key '" + key + "' in [system]");
      }
    } else if (section == "physical") {
      PhysicalSection phys = cfg.physical.value_or(PhysicalSection{});
      for (const auto& [key, value] : body) {
        const double v = detail::parse_number(key, value.data());
        if (!detail::set_physical_key(phys, key, v))
          throw ConfigError("unknown key '" + key + "' in [physical]");
      }
      cfg.physical = phys;
    } else if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' outside a section");
    } else {
      throw ConfigError("unknown section '[" + section + "]'");
    }
  }
  return cfg;
}

inline ModelConfig load_config(const std::string& path, ModelConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(cfg));
}

/// Applies `key=value` or `section.key=value`. Bare keys resolve to [system] first.
inline void apply_override(ModelConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  auto trim = [](std::string_view v) {
    const auto b = v.find_first_not_of(" \t");
    if (b == std::string_view::npos) return std::string_view{};
    return v.substr(b, v.find_last_not_of(" \t") - b + 1);
  };
  std::string_view key = trim(assignment.substr(0, eq));
  const double value = detail::parse_number(key, trim(assignment.substr(eq + 1)));

  std::string_view section;
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  if (section.empty() || section == "system") {
    if (detail::set_system_key(cfg.system, key, value)) return;
    if (section == "system")
      throw ConfigError("unknown key '" + std::string(key) + "' in [system]");
  }
  if (section.empty() || section == "physical") {
    PhysicalSection phys = cfg.physical.value_or(PhysicalSection{});
    if (detail::set_physical_key(phys, key, value)) {
      cfg.physical = phys;
      return;
    }
  }
  throw ConfigError("unknown key '" + std::string(assignment.substr(0, eq)) + "'");
}

}  // namespace phonoconv
