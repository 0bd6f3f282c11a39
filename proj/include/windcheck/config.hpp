#pragma once

#include <string>
#include <string_view>

#include "windcheck/mission.hpp"

namespace windcheck {

/// Reads a mission config in INI form on top of `base`. Sections and keys
/// mirror the MissionConfig / BatteryParams / ActionDurations fields:
///
///   [mission]   scenario grid_width grid_height base_x base_y safe_t p_wsp_c
///               variant appointment_rule bs1_plan state_cap
///   [battery]   c_new e_spec v_high v_med v_low soc_hi_threshold
///               soc_lo_threshold fade_rate fade_law fade_cycles t_normal
///               t_high consumption
///   [durations] take_off land transit inspect recharge   (minutes)
///
/// `scenario` resets everything to that preset before the other keys apply.
/// Real values may be written as fractions ("1/3"). Unknown sections or keys
/// and malformed values throw ConfigError; the result is validated. A "#" or
/// ";" after whitespace starts a trailing comment.
MissionConfig parse_config(std::string_view text, MissionConfig base = {});
MissionConfig load_config(const std::string& path, MissionConfig base = {});

/// Every key with its current value, in the layout `parse_config` reads.
std::string format_config(const MissionConfig& c);

AppointmentRule parse_appointment_rule(const std::string& text);
PlanScope parse_plan_scope(const std::string& text);
ConsumptionMode parse_consumption(const std::string& text);
FadeLaw parse_fade_law(const std::string& text);

}  // namespace windcheck
