#include "windcheck/battery.hpp"

#include <algorithm>
#include <cmath>

#include "windcheck/error.hpp"

namespace windcheck {

const char* to_string(BatteryVariant v) {
  switch (v) {
    case BatteryVariant::Advanced: return "advanced";
    case BatteryVariant::BasicHigh: return "basic_high";
    case BatteryVariant::BasicMedium: return "basic_medium";
    case BatteryVariant::BasicLow: return "basic_low";
  }
  return "?";
}

const char* to_string(ActionKind a) {
  switch (a) {
    case ActionKind::TakeOff: return "take_off";
    case ActionKind::Land: return "land";
    case ActionKind::TransitPerCell: return "transit";
    case ActionKind::InspectTurbine: return "inspect";
  }
  return "?";
}

BatteryVariant parse_variant(const std::string& text) {
  for (auto v : {BatteryVariant::Advanced, BatteryVariant::BasicHigh, BatteryVariant::BasicMedium,
                 BatteryVariant::BasicLow})
    if (text == to_string(v)) return v;
  throw ConfigError("unknown battery variant '" + text +
                    "' (expected advanced, basic_high, basic_medium or basic_low)");
}

void BatteryParams::validate() const {
  if (!(c_new > 0)) throw ConfigError("battery.c_new must be positive");
  if (!(e_spec > 0)) throw ConfigError("battery.e_spec must be positive");
  if (!(v_low > 0 && v_low < v_med && v_med < v_high))
    throw ConfigError("battery voltages must satisfy 0 < v_low < v_med < v_high");
  if (!(soc_lo_threshold > 0 && soc_lo_threshold < soc_hi_threshold && soc_hi_threshold < 1))
    throw ConfigError("battery thresholds must satisfy 0 < soc_lo_threshold < soc_hi_threshold < 1");
  if (!(fade_rate >= 0 && fade_rate < 1)) throw ConfigError("battery.fade_rate must be in [0,1)");
  if (!(t_high > 0 && t_high < t_normal)) throw ConfigError("battery running times must satisfy 0 < t_high < t_normal");
}

double ActionDurations::minutes(ActionKind a) const {
  switch (a) {
    case ActionKind::TakeOff: return take_off;
    case ActionKind::Land: return land;
    case ActionKind::TransitPerCell: return transit;
    case ActionKind::InspectTurbine: return inspect;
  }
  return 0.0;
}

void ActionDurations::validate() const {
  if (!(take_off > 0 && land > 0 && transit > 0 && inspect > 0))
    throw ConfigError("action durations must be positive");
  if (!(recharge >= 0)) throw ConfigError("durations.recharge must be non-negative");
}

double voltage_level(double f, const BatteryParams& p) {
  if (f > p.soc_hi_threshold) return p.v_high;
  if (f >= p.soc_lo_threshold) return p.v_med;
  return p.v_low;
}

double variant_voltage(BatteryVariant v, double f, const BatteryParams& p) {
  switch (v) {
    case BatteryVariant::Advanced: return voltage_level(f, p);
    case BatteryVariant::BasicHigh: return p.v_high;
    case BatteryVariant::BasicMedium: return p.v_med;
    case BatteryVariant::BasicLow: return p.v_low;
  }
  return p.v_med;
}

namespace {

// take-off/land, transit, inspection at low, medium, high voltage
constexpr double kTable[3][3] = {{0.3, 0.2, 0.1}, {0.5, 0.4, 0.3}, {4.5, 4.0, 3.6}};

double table_value(ActionKind a, double voltage, const BatteryParams& p) {
  int row = 0;
  switch (a) {
    case ActionKind::TakeOff:
    case ActionKind::Land: row = 0; break;
    case ActionKind::TransitPerCell: row = 1; break;
    case ActionKind::InspectTurbine: row = 2; break;
  }
  int col = 1;
  if (voltage == p.v_low) col = 0;
  else if (voltage == p.v_high) col = 2;
  else if (voltage != p.v_med) throw ConfigError("table consumption needs one of the three configured voltages");
  return kTable[row][col];
}

}  // namespace

double action_consumption(ActionKind a, double voltage, PowerLevel power, const BatteryParams& p,
                          const ActionDurations& dur) {
  const double t_k = power == PowerLevel::Normal ? p.t_normal : p.t_high;
  if (p.consumption == ConsumptionMode::Table) return table_value(a, voltage, p) * (p.t_normal / t_k);
  return p.e_spec * dur.hours(a) / (voltage * t_k);
}

CoulombResult coulomb_step(double soc, double current, double dt, double q_max) {
  if (!(dt > 0) || !(q_max > 0)) throw Error("coulomb_step needs dt > 0 and q_max > 0");
  const double next = soc - current * dt / q_max;
  if (next < 0) return {0.0, true};
  return {next, false};
}

double faded_capacity(const BatteryParams& p, std::uint32_t n) {
  n = std::min(n, p.fade_cycles);
  if (p.fade_law == FadeLaw::Linear) return std::max(0.0, p.c_new * (1.0 - p.fade_rate * n));
  return p.c_new * std::pow(1.0 - p.fade_rate, static_cast<double>(n));
}

BatteryState fade_on_recharge(const BatteryState& s, const BatteryParams& p, BatteryVariant v) {
  BatteryState out = s;
  out.recharges = s.recharges + 1;
  out.c_full = v == BatteryVariant::Advanced ? faded_capacity(p, out.recharges) : p.c_new;
  out.soc = out.c_full;
  return out;
}

double soc_after_plan(const BatteryState& s, std::span<const ActionKind> plan,
                      std::span<const PowerLevel> wind, const BatteryParams& p, BatteryVariant v,
                      const ActionDurations& dur) {
  if (plan.size() != wind.size()) throw Error("plan and wind sequences differ in length");
  double soc = s.soc;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const double volt = variant_voltage(v, soc / s.c_full, p);
    soc -= action_consumption(plan[i], volt, wind[i], p, dur);
  }
  return soc;
}

bool is_safe(const BatteryState& s, std::span<const ActionKind> plan,
             std::span<const PowerLevel> wind, double safe_t, const BatteryParams& p,
             BatteryVariant v, const ActionDurations& dur) {
  return soc_after_plan(s, plan, wind, p, v, dur) >= safe_t * s.c_full;
}

}  // namespace windcheck
