#include "windcheck/sweep.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "windcheck/pctl/checker.hpp"
#include "windcheck/report.hpp"

namespace windcheck {

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::CNew: return "c_new";
    case SweepParam::SafeT: return "safe_t";
    case SweepParam::PWspC: return "p_wsp_c";
  }
  return "?";
}

SweepParam parse_sweep_param(const std::string& text) {
  for (auto p : {SweepParam::CNew, SweepParam::SafeT, SweepParam::PWspC})
    if (text == to_string(p)) return p;
  throw ConfigError("unknown sweep parameter '" + text + "' (expected c_new, safe_t or p_wsp_c)");
}

void SweepSpec::validate() const {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw ConfigError("sweep range needs lo < hi");
  if (!(step > 0)) throw ConfigError("sweep step must be positive");
  if ((hi - lo) / step > 1e6) throw ConfigError("sweep has too many points");
  if (variants.empty()) throw ConfigError("sweep needs at least one variant");
  if (properties.empty()) throw ConfigError("sweep needs at least one property");
}

std::vector<double> SweepSpec::values() const {
  validate();
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double v = std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9;
    if (v > hi + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

namespace {

MissionConfig with_value(MissionConfig c, SweepParam p, double v, BatteryVariant variant) {
  switch (p) {
    case SweepParam::CNew: c.battery.c_new = v; break;
    case SweepParam::SafeT: c.safe_t = v; break;
    case SweepParam::PWspC: c.p_wsp_c = v; break;
  }
  c.variant = variant;
  return c;
}

}  // namespace

std::vector<SweepPoint> run_sweep(const MissionConfig& base, const SweepSpec& spec, unsigned threads) {
  const auto values = spec.values();
  std::vector<pctl::Formula> formulas;
  for (const auto& p : spec.properties) formulas.push_back(pctl::parse_formula(p));

  std::vector<SweepPoint> points;
  for (double v : values)
    for (auto variant : spec.variants) points.push_back({v, variant, 0, 0, {}, {}});

  auto run_point = [&](SweepPoint& pt) {
    try {
      const Dtmc d = build_mission_model(with_value(base, spec.parameter, pt.value, pt.variant));
      pt.states = d.num_states();
      pt.transitions = d.num_transitions();
      pctl::Checker checker(d);
      for (const auto& f : formulas) {
        const auto r = checker.check(f);
        pt.results.push_back(r.numeric ? r.value : (r.holds ? 1.0 : 0.0));
      }
    } catch (const FormulaError&) {
      throw;
    } catch (const Error& e) {
      pt.results.clear();
      pt.error = e.what();
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
  if (threads == 1) {
    for (auto& pt : points) run_point(pt);
    return points;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < points.size();) {
        try {
          run_point(points[i]);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return points;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepPoint>& points) {
  std::ostringstream o;
  o << report::csv_version_line() << "param,value,variant,states,transitions";
  for (const auto& p : spec.properties) o << ',' << report::csv_field(p);
  o << '\n';
  for (const auto& pt : points) {
    o << to_string(spec.parameter) << ',' << report::number(pt.value) << ',' << to_string(pt.variant) << ','
      << pt.states << ',' << pt.transitions;
    for (std::size_t i = 0; i < spec.properties.size(); ++i)
      o << ',' << (pt.error.empty() ? report::number(pt.results[i]) : "error");
    o << '\n';
  }
  return o.str();
}

}  // namespace windcheck
