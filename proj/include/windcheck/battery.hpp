#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "windcheck/error.hpp"

namespace windcheck {

enum class ActionKind : std::uint8_t { TakeOff, Land, TransitPerCell, InspectTurbine };
enum class PowerLevel : std::uint8_t { Normal, High };

/// Advanced models voltage steps and capacity fade. The Basic variants pin
/// the voltage to one level and never fade.
enum class BatteryVariant : std::uint8_t { Advanced, BasicHigh, BasicMedium, BasicLow };

/// Where per-action consumption comes from: the energy equation, or the
/// one-decimal consumption table (scaled by t_normal / t_high for high power).
enum class ConsumptionMode : std::uint8_t { Equation, Table };

enum class FadeLaw : std::uint8_t { Multiplicative, Linear };

const char* to_string(BatteryVariant v);
const char* to_string(ActionKind a);
BatteryVariant parse_variant(const std::string& text);  // throws ConfigError

struct BatteryParams {
  double c_new = 11.0;   // Ah
  double e_spec = 180.0; // Wh
  double v_high = 25.0;
  double v_med = 22.0;
  double v_low = 20.0;
  double soc_hi_threshold = 0.75;
  double soc_lo_threshold = 0.25;
  double fade_rate = 0.002;
  FadeLaw fade_law = FadeLaw::Multiplicative;
  // recharges the fade rate applies to; capacity holds afterwards
  std::uint32_t fade_cycles = 100;
  double t_normal = 0.5;       // h of flight at normal power
  double t_high = 0.25;        // h of flight at high power
  ConsumptionMode consumption = ConsumptionMode::Table;

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;
};

/// Action durations in minutes.
struct ActionDurations {
  double take_off = 1.0;
  double land = 1.0;
  double transit = 50.0 / 60.0;  // one 500 m cell at 10 m/s
  double inspect = 15.0;
  double recharge = 90.0;

  double minutes(ActionKind a) const;
  double hours(ActionKind a) const { return minutes(a) / 60.0; }
  void validate() const;
};

struct BatteryState {
  double soc = 0.0;     // Ah
  double c_full = 0.0;  // Ah, after fade
  std::uint32_t recharges = 0;

  static BatteryState fresh(const BatteryParams& p) { return {p.c_new, p.c_new, 0}; }
};

/// Step function of the SOC fraction: above hi -> v_high, [lo, hi] -> v_med,
/// below lo -> v_low.
double voltage_level(double soc_fraction, const BatteryParams& p);

/// The voltage a variant runs at for a given SOC fraction.
double variant_voltage(BatteryVariant v, double soc_fraction, const BatteryParams& p);

/// Charge (Ah) drawn by one action: e_spec * t / (V * T_k).
double action_consumption(ActionKind a, double voltage, PowerLevel power, const BatteryParams& p,
                          const ActionDurations& dur = {});

struct CoulombResult {
  double soc;
  bool depleted;
};

/// SOC(k+1) = SOC(k) - I * dt / q_max, clamped at 0.
CoulombResult coulomb_step(double soc, double current, double dt, double q_max);

/// Fully charged capacity after n recharges (fade stops after fade_cycles).
double faded_capacity(const BatteryParams& p, std::uint32_t n);

/// One recharge: count it, fade (Advanced only) and refill.
BatteryState fade_on_recharge(const BatteryState& s, const BatteryParams& p, BatteryVariant v);

/// Projected SOC after running `plan`, re-evaluating the voltage before each
/// action. `wind` holds one power level per action. May be negative.
double soc_after_plan(const BatteryState& s, std::span<const ActionKind> plan,
                      std::span<const PowerLevel> wind, const BatteryParams& p,
                      BatteryVariant v, const ActionDurations& dur = {});

/// True iff the projected SOC stays at or above safe_t * c_full.
bool is_safe(const BatteryState& s, std::span<const ActionKind> plan,
             std::span<const PowerLevel> wind, double safe_t, const BatteryParams& p,
             BatteryVariant v, const ActionDurations& dur = {});

}  // namespace windcheck
