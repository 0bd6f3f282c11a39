#pragma once

#include <compare>
#include <string>
#include <vector>

#include "windcheck/battery.hpp"
#include "windcheck/dtmc.hpp"

namespace windcheck {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Which turbines a cell inspects. Shared: corner cells 1, edge cells
/// 2, interior cells 4 (neighbouring cells share turbines). UniqueCover:
/// turbine (tx, ty) belongs to cell (min(tx, w-1), min(ty, h-1)), so every
/// turbine is inspected exactly once.
enum class AppointmentRule : std::uint8_t { Shared, UniqueCover };

/// What the safety check projects before take-off, fly-to-target and inspect.
/// ToInspection: the actions up to and including the next inspection.
/// WithReturn: additionally the flight back to base and the landing.
enum class PlanScope : std::uint8_t { ToInspection, WithReturn };

const char* to_string(AppointmentRule r);
const char* to_string(PlanScope p);
const char* to_string(ConsumptionMode m);
const char* to_string(FadeLaw f);

struct MissionConfig {
  int grid_width = 5;
  int grid_height = 5;
  Cell base{2, 2};
  double safe_t = 0.3;
  double p_wsp_c = 0.1;
  BatteryParams battery;
  ActionDurations durations;
  BatteryVariant variant = BatteryVariant::Advanced;
  AppointmentRule appointment_rule = AppointmentRule::UniqueCover;
  PlanScope bs1_plan = PlanScope::ToInspection;
  std::size_t state_cap = 5'000'000;

  /// Throws ConfigError.
  void validate() const;
};

/// The four reference scenarios over (safe_t, p_wsp_c):
/// 1 (0.3, 0.1), 2 (0.25, 0.1), 3 (0.3, 0.3), 4 (0.25, 0.3).
MissionConfig scenario_preset(int id);

/// Boustrophedon order: row 0 left to right, row 1 right to left, ...
std::vector<Cell> snake_route(int width, int height);

int appointed_turbines(Cell c, int width, int height, AppointmentRule rule);

/// Manhattan distance in cells.
int travel_cells(Cell a, Cell b);

/// Charge per action in 0.1 Ah quanta, indexed [action][band][wind] with
/// action 0 take-off, 1 land, 2 transit, 3 inspect; band 0 low, 1 medium,
/// 2 high voltage; wind 0 low, 1 high.
struct QuantizedCosts {
  int q[4][3][2] = {};
};
QuantizedCosts quantized_costs(const MissionConfig& c);

/// Guarded-command source of the mission model. Drone states: 0 charged at
/// base, 1 airborne at base, 2 at target cell, 3 inspected, 4 back over the
/// base, 5 landed, 6 out of battery, 7 success.
std::string mission_model_text(const MissionConfig& c);

/// Builds the mission DTMC from its generated source.
Dtmc build_mission_model(const MissionConfig& c);

inline constexpr const char* kSuccessProperty = "P=? [ F \"success\" ]";
inline constexpr const char* kMissionTimeProperty = "R{\"mt\"}=? [ F \"done\" ]";
inline constexpr const char* kRechargeProperty = "R{\"rc\"}=? [ F \"done\" ]";

}  // namespace windcheck
