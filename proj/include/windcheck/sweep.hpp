#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "windcheck/mission.hpp"

namespace windcheck {

enum class SweepParam : std::uint8_t { CNew, SafeT, PWspC };

const char* to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& text);  // throws ConfigError

struct SweepSpec {
  SweepParam parameter = SweepParam::CNew;
  double lo = 8.0;
  double hi = 16.0;
  double step = 0.2;
  std::vector<BatteryVariant> variants{BatteryVariant::Advanced};
  std::vector<std::string> properties{kSuccessProperty, kMissionTimeProperty, kRechargeProperty};

  /// Throws ConfigError.
  void validate() const;
  /// lo + i*step for every i that stays within hi (rounded to 1e-9).
  std::vector<double> values() const;
};

struct SweepPoint {
  double value = 0.0;
  BatteryVariant variant = BatteryVariant::Advanced;
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::vector<double> results;  // one per property
  std::string error;            // non-empty when the point failed
};

/// Builds and checks one model per (value, variant). Properties are parsed
/// before any model is built, so formula errors surface as exceptions; model
/// and solver errors are recorded in the point. Points are returned in
/// parameter order, then variant order, whatever the thread count.
std::vector<SweepPoint> run_sweep(const MissionConfig& base, const SweepSpec& spec,
                                  unsigned threads = 1);

/// Columns: param, value, variant, states, transitions, then one per
/// property. A failed point has `error` in every result column.
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points);

}  // namespace windcheck
