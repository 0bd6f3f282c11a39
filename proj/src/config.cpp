#include "windcheck/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace windcheck {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing "# ..." or "; ..." comment that follows whitespace.
std::string value_text(const std::string& raw) {
  for (std::size_t i = 1; i < raw.size(); ++i)
    if ((raw[i] == '#' || raw[i] == ';') && (raw[i - 1] == ' ' || raw[i - 1] == '\t')) return trim(raw.substr(0, i));
  return trim(raw);
}

double parse_plain(const std::string& s, const std::string& key) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw ConfigError(key + ": not a number: '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const std::string& key) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_plain(s, key);
  const double den = parse_plain(trim(s.substr(slash + 1)), key);
  if (den == 0) throw ConfigError(key + ": zero denominator");
  return parse_plain(trim(s.substr(0, slash)), key) / den;
}

long long parse_int(const std::string& s, const std::string& key) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw ConfigError(key + ": not an integer: '" + s + "'");
  return v;
}

template <class T>
T ranged(long long v, long long lo, long long hi, const std::string& key) {
  if (v < lo || v > hi) throw ConfigError(key + ": out of range");
  return static_cast<T>(v);
}

using Setter = std::function<void(MissionConfig&, const std::string&, const std::string&)>;

Setter real(double MissionConfig::*m) {
  return [m](MissionConfig& c, const std::string& v, const std::string& k) { c.*m = parse_real(v, k); };
}
Setter real(double BatteryParams::*m) {
  return [m](MissionConfig& c, const std::string& v, const std::string& k) {
    c.battery.*m = parse_real(v, k);
  };
}
Setter real(double ActionDurations::*m) {
  return [m](MissionConfig& c, const std::string& v, const std::string& k) {
    c.durations.*m = parse_real(v, k);
  };
}
Setter integer(int MissionConfig::*m) {
  return [m](MissionConfig& c, const std::string& v, const std::string& k) {
    c.*m = ranged<int>(parse_int(v, k), 1, 1000, k);
  };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"mission",
       {{"scenario", nullptr},  // handled first
        {"grid_width", integer(&MissionConfig::grid_width)},
        {"grid_height", integer(&MissionConfig::grid_height)},
        {"base_x",
         [](MissionConfig& c, const std::string& v, const std::string& k) {
           c.base.x = ranged<int>(parse_int(v, k), 0, 999, k);
         }},
        {"base_y",
         [](MissionConfig& c, const std::string& v, const std::string& k) {
           c.base.y = ranged<int>(parse_int(v, k), 0, 999, k);
         }},
        {"safe_t", real(&MissionConfig::safe_t)},
        {"p_wsp_c", real(&MissionConfig::p_wsp_c)},
        {"variant", [](MissionConfig& c, const std::string& v, const std::string&) { c.variant = parse_variant(v); }},
        {"appointment_rule",
         [](MissionConfig& c, const std::string& v, const std::string&) {
           c.appointment_rule = parse_appointment_rule(v);
         }},
        {"bs1_plan",
         [](MissionConfig& c, const std::string& v, const std::string&) { c.bs1_plan = parse_plan_scope(v); }},
        {"state_cap",
         [](MissionConfig& c, const std::string& v, const std::string& k) {
           c.state_cap = ranged<std::size_t>(parse_int(v, k), 1, 1LL << 40, k);
         }}}},
      {"battery",
       {{"c_new", real(&BatteryParams::c_new)},
        {"e_spec", real(&BatteryParams::e_spec)},
        {"v_high", real(&BatteryParams::v_high)},
        {"v_med", real(&BatteryParams::v_med)},
        {"v_low", real(&BatteryParams::v_low)},
        {"soc_hi_threshold", real(&BatteryParams::soc_hi_threshold)},
        {"soc_lo_threshold", real(&BatteryParams::soc_lo_threshold)},
        {"fade_rate", real(&BatteryParams::fade_rate)},
        {"fade_law",
         [](MissionConfig& c, const std::string& v, const std::string&) {
           c.battery.fade_law = parse_fade_law(v);
         }},
        {"fade_cycles",
         [](MissionConfig& c, const std::string& v, const std::string& k) {
           c.battery.fade_cycles = ranged<std::uint32_t>(parse_int(v, k), 0, 100000, k);
         }},
        {"t_normal", real(&BatteryParams::t_normal)},
        {"t_high", real(&BatteryParams::t_high)},
        {"consumption",
         [](MissionConfig& c, const std::string& v, const std::string&) {
           c.battery.consumption = parse_consumption(v);
         }}}},
      {"durations",
       {{"take_off", real(&ActionDurations::take_off)},
        {"land", real(&ActionDurations::land)},
        {"transit", real(&ActionDurations::transit)},
        {"inspect", real(&ActionDurations::inspect)},
        {"recharge", real(&ActionDurations::recharge)}}},
  };
  return s;
}

std::string num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

AppointmentRule parse_appointment_rule(const std::string& text) {
  for (auto r : {AppointmentRule::Shared, AppointmentRule::UniqueCover})
    if (text == to_string(r)) return r;
  throw ConfigError("unknown appointment rule '" + text + "' (expected shared or unique_cover)");
}

PlanScope parse_plan_scope(const std::string& text) {
  for (auto p : {PlanScope::ToInspection, PlanScope::WithReturn})
    if (text == to_string(p)) return p;
  throw ConfigError("unknown plan scope '" + text + "' (expected to_inspection or with_return)");
}

ConsumptionMode parse_consumption(const std::string& text) {
  for (auto m : {ConsumptionMode::Equation, ConsumptionMode::Table})
    if (text == to_string(m)) return m;
  throw ConfigError("unknown consumption mode '" + text + "' (expected equation or table)");
}

FadeLaw parse_fade_law(const std::string& text) {
  for (auto f : {FadeLaw::Multiplicative, FadeLaw::Linear})
    if (text == to_string(f)) return f;
  throw ConfigError("unknown fade law '" + text + "' (expected multiplicative or linear)");
}

MissionConfig parse_config(std::string_view text, MissionConfig base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }

  const auto& sch = schema();
  for (const auto& [section, body] : tree) {
    auto sec = sch.find(section);
    if (sec == sch.end()) {
      if (body.empty() && !body.data().empty()) throw ConfigError("key outside a section: " + section);
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, _] : body)
      if (!sec->second.count(key)) throw ConfigError("unknown key " + key + " in [" + section + "]");
  }

  MissionConfig c = base;
  if (auto m = tree.get_child_optional("mission")) {
    if (auto s = m->get_optional<std::string>("scenario")) {
      const std::string v = value_text(*s);
      c = scenario_preset(ranged<int>(parse_int(v, "scenario"), 1, 4, "scenario"));
    }
  }
  for (const auto& [section, body] : tree) {
    const auto& keys = sch.at(section);
    for (const auto& [key, value] : body) {
      if (key == "scenario") continue;
      keys.at(key)(c, value_text(value.data()), section + "." + key);
    }
  }
  c.validate();
  return c;
}

MissionConfig load_config(const std::string& path, MissionConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str(), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string format_config(const MissionConfig& c) {
  const auto& b = c.battery;
  const auto& d = c.durations;
  std::ostringstream o;
  o << "[mission]\n"
    << "grid_width = " << c.grid_width << "\n"
    << "grid_height = " << c.grid_height << "\n"
    << "base_x = " << c.base.x << "\n"
    << "base_y = " << c.base.y << "\n"
    << "safe_t = " << num(c.safe_t) << "\n"
    << "p_wsp_c = " << num(c.p_wsp_c) << "\n"
    << "variant = " << to_string(c.variant) << "\n"
    << "appointment_rule = " << to_string(c.appointment_rule) << "\n"
    << "bs1_plan = " << to_string(c.bs1_plan) << "\n"
    << "state_cap = " << c.state_cap << "\n\n"
    << "[battery]\n"
    << "c_new = " << num(b.c_new) << "\n"
    << "e_spec = " << num(b.e_spec) << "\n"
    << "v_high = " << num(b.v_high) << "\n"
    << "v_med = " << num(b.v_med) << "\n"
    << "v_low = " << num(b.v_low) << "\n"
    << "soc_hi_threshold = " << num(b.soc_hi_threshold) << "\n"
    << "soc_lo_threshold = " << num(b.soc_lo_threshold) << "\n"
    << "fade_rate = " << num(b.fade_rate) << "\n"
    << "fade_law = " << to_string(b.fade_law) << "\n"
    << "fade_cycles = " << b.fade_cycles << "\n"
    << "t_normal = " << num(b.t_normal) << "\n"
    << "t_high = " << num(b.t_high) << "\n"
    << "consumption = " << to_string(b.consumption) << "\n\n"
    << "[durations]\n"
    << "take_off = " << num(d.take_off) << "\n"
    << "land = " << num(d.land) << "\n"
    << "transit = " << num(d.transit) << "\n"
    << "inspect = " << num(d.inspect) << "\n"
    << "recharge = " << num(d.recharge) << "\n";
  return o.str();
}

}  // namespace windcheck
