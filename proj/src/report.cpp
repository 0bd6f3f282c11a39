#include "windcheck/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace windcheck::report {

std::string csv_version_line() { return std::string("# windcheck v") + WINDCHECK_VERSION + "\n"; }

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string trace_csv(const Dtmc& d, const sim::Trace& t) {
  std::ostringstream o;
  o << csv_version_line() << "step,action";
  for (const auto& v : d.variable_names()) o << ',' << csv_field(v);
  for (const auto& r : d.rewards()) o << ',' << csv_field(r.name + "_accum");
  o << '\n';
  for (const auto& s : t.steps) {
    o << s.step << ',' << csv_field(s.action);
    if (d.has_valuations())
      for (auto x : d.valuation(s.state)) o << ',' << x;
    for (double r : s.rewards) o << ',' << number(r);
    o << '\n';
  }
  return o.str();
}

}  // namespace windcheck::report
