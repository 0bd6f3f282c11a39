#pragma once

#include <string>
#include <string_view>

#include "windcheck/dtmc.hpp"
#include "windcheck/sim.hpp"

namespace windcheck::report {

/// Header comment that opens every CSV file we write.
std::string csv_version_line();

/// Shortest text that reads back to the same double; "inf", "-inf", "nan"
/// for the special values.
std::string number(double v);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(std::string_view s);

/// One row per trace step: step, action, one column per model variable,
/// then `<reward>_accum` for each reward structure.
std::string trace_csv(const Dtmc& d, const sim::Trace& t);

}  // namespace windcheck::report
