#include "windcheck/mission.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "windcheck/error.hpp"
#include "windcheck/gcl/builder.hpp"

namespace windcheck {

const char* to_string(AppointmentRule r) {
  return r == AppointmentRule::Shared ? "shared" : "unique_cover";
}
const char* to_string(PlanScope p) { return p == PlanScope::WithReturn ? "with_return" : "to_inspection"; }
const char* to_string(ConsumptionMode m) { return m == ConsumptionMode::Equation ? "equation" : "table"; }
const char* to_string(FadeLaw f) { return f == FadeLaw::Multiplicative ? "multiplicative" : "linear"; }

void MissionConfig::validate() const {
  if (grid_width < 1 || grid_height < 1) throw ConfigError("grid dimensions must be positive");
  if (base.x < 0 || base.x >= grid_width || base.y < 0 || base.y >= grid_height)
    throw ConfigError("base cell lies outside the grid");
  if (!(safe_t >= 0 && safe_t < 1)) throw ConfigError("safe_t must be in [0,1)");
  if (!(p_wsp_c >= 0 && p_wsp_c <= 1)) throw ConfigError("p_wsp_c must be in [0,1]");
  battery.validate();
  durations.validate();
  if (battery.c_new * 10 > 1e6) throw ConfigError("battery.c_new is too large to discretise");
}

MissionConfig scenario_preset(int id) {
  MissionConfig c;
  switch (id) {
    case 1: c.safe_t = 0.3; c.p_wsp_c = 0.1; break;
    case 2: c.safe_t = 0.25; c.p_wsp_c = 0.1; break;
    case 3: c.safe_t = 0.3; c.p_wsp_c = 0.3; break;
    case 4: c.safe_t = 0.25; c.p_wsp_c = 0.3; break;
    default: throw ConfigError("unknown scenario " + std::to_string(id) + " (expected 1..4)");
  }
  return c;
}

std::vector<Cell> snake_route(int width, int height) {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y)
    for (int i = 0; i < width; ++i) out.push_back({y % 2 == 0 ? i : width - 1 - i, y});
  return out;
}

int appointed_turbines(Cell c, int width, int height, AppointmentRule rule) {
  if (c.x < 0 || c.x >= width || c.y < 0 || c.y >= height) throw ConfigError("cell outside the grid");
  if (rule == AppointmentRule::UniqueCover) {
    const int cols = c.x == width - 1 ? 2 : 1;
    const int rows = c.y == height - 1 ? 2 : 1;
    return cols * rows;
  }
  const bool inner_x = c.x > 0 && c.x < width - 1;
  const bool inner_y = c.y > 0 && c.y < height - 1;
  return (inner_x ? 2 : 1) * (inner_y ? 2 : 1);
}

int travel_cells(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

namespace {

int quanta(double ah) {
  // half-up rounding to 0.1 Ah; the epsilon absorbs binary noise at .x5
  return static_cast<int>(std::floor(ah * 10.0 + 0.5 + 1e-9));
}

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

enum Act : int { kTo, kLd, kTr, kIn };

constexpr const char* kActName[4] = {"to", "ld", "tr", "in"};
constexpr const char* kBandName[3] = {"lo", "med", "hi"};
constexpr const char* kWindName[2] = {"n", "h"};

class Generator {
 public:
  explicit Generator(const MissionConfig& c) : c_(c), costs_(quantized_costs(c)) {
    route_ = snake_route(c.grid_width, c.grid_height);
    for (const Cell& cell : route_) {
      dist_.push_back(travel_cells(c.base, cell));
      turbines_.push_back(appointed_turbines(cell, c.grid_width, c.grid_height, c.appointment_rule));
    }
    max_d_ = *std::max_element(dist_.begin(), dist_.end());
    fade_ = c.variant == BatteryVariant::Advanced && c.battery.fade_rate > 0 && c.battery.fade_cycles > 0;
    cq_ = quanta(c.battery.c_new);
  }

  std::string run() {
    header();
    constants();
    formulas();
    drone();
    grid();
    environment();
    battery();
    rewards();
    labels();
    return out_.str();
  }

 private:
  const MissionConfig& c_;
  QuantizedCosts costs_;
  std::vector<Cell> route_;
  std::vector<int> dist_;
  std::vector<int> turbines_;
  int max_d_ = 0;
  bool fade_ = false;
  int cq_ = 0;
  std::ostringstream out_;

  int n() const { return static_cast<int>(route_.size()); }

  void header() {
    out_ << "// wind farm inspection mission, " << c_.grid_width << "x" << c_.grid_height
         << " cells, base [" << c_.base.x << "," << c_.base.y << "]\n"
         << "// variant " << to_string(c_.variant) << ", consumption " << to_string(c_.battery.consumption)
         << ", safety plan " << to_string(c_.bs1_plan) << ", turbines " << to_string(c_.appointment_rule)
         << "\n// charge is counted in 0.1 Ah quanta\n\ndtmc\n\n";
  }

  void constants() {
    out_ << "const int N = " << n() << ";  // cells on the route\n"
         << "const int c_new_q = " << cq_ << ";\n"
         << "const double safe_t = " << num(c_.safe_t) << ";\n"
         << "const double p_wsp_c = " << num(c_.p_wsp_c) << ";\n"
         << "const double soc_hi = " << num(c_.battery.soc_hi_threshold) << ";\n"
         << "const double soc_lo = " << num(c_.battery.soc_lo_threshold) << ";\n";
    if (fade_) {
      if (c_.battery.fade_law == FadeLaw::Multiplicative)
        out_ << "const double keep = " << num(1.0 - c_.battery.fade_rate) << ";\n";
      else
        out_ << "const double fade = " << num(c_.battery.fade_rate) << ";\n";
    }
    out_ << "\n// consumption per action, voltage band and wind (n normal, h high)\n";
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 3; ++b)
        for (int w = 0; w < 2; ++w)
          out_ << "const int c_" << kActName[a] << "_" << kBandName[b] << "_" << kWindName[w] << " = "
               << costs_.q[a][b][w] << ";\n";
    out_ << "\n";
  }

  // route-indexed lookup as a chain of conditionals
  std::string lookup(const std::string& index, const std::vector<int>& values, int fallback) const {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i)
      s += "(" + index + "=" + std::to_string(i) + " ? " + std::to_string(values[i]) + " : ";
    s += std::to_string(fallback);
    s += std::string(values.size(), ')');
    return s;
  }

  std::string band_cost(int a, int w, const std::string& x) const {
    auto name = [&](int b) {
      return std::string("c_") + kActName[a] + "_" + kBandName[b] + "_" + kWindName[w];
    };
    switch (c_.variant) {
      case BatteryVariant::BasicHigh: return name(2);
      case BatteryVariant::BasicMedium: return name(1);
      case BatteryVariant::BasicLow: return name(0);
      case BatteryVariant::Advanced: break;
    }
    return "(" + x + " > soc_hi*cf ? " + name(2) + " : (" + x + " >= soc_lo*cf ? " + name(1) + " : " +
           name(0) + "))";
  }

  std::string cost(int a, const std::string& x) const {
    return "(wsp=1 ? " + band_cost(a, 0, x) + " : " + band_cost(a, 1, x) + ")";
  }

  // Emits formulas folding `steps` over `start`; returns the last name.
  std::string chain(const std::string& prefix, const std::string& start, const std::vector<int>& steps) {
    std::string prev = start;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      std::string name = prefix + "_" + std::to_string(i + 1);
      out_ << "formula " << name << " = " << prev << " - " << cost(steps[i], prev) << ";\n";
      prev = name;
    }
    return prev;
  }

  // One chain per distance, selected by the distance formula `d`.
  void by_distance(const std::string& name, const std::string& d,
                   const std::vector<int>& before, const std::vector<int>& per_cell,
                   const std::vector<int>& after) {
    std::vector<std::string> ends;
    for (int k = 0; k <= max_d_; ++k) {
      std::vector<int> steps = before;
      for (int i = 0; i < k; ++i) steps.insert(steps.end(), per_cell.begin(), per_cell.end());
      steps.insert(steps.end(), after.begin(), after.end());
      if (steps.empty()) {
        ends.push_back("soc");
        continue;
      }
      ends.push_back(chain(name + "_d" + std::to_string(k), "soc", steps));
    }
    std::string sel;
    for (int k = 0; k < max_d_; ++k) sel += "(" + d + "=" + std::to_string(k) + " ? " + ends[k] + " : ";
    sel += ends[max_d_] + std::string(max_d_, ')');
    out_ << "formula " << name << " = " << sel << ";\n\n";
  }

  void formulas() {
    out_ << "formula cf = ";
    if (!fade_)
      out_ << "c_new_q;\n";
    else if (c_.battery.fade_law == FadeLaw::Multiplicative)
      out_ << "c_new_q * pow(keep, nrc);\n";
    else
      out_ << "max(0.0, c_new_q * (1 - fade * nrc));\n";
    if (fade_) {
      out_ << "formula nrc_next = min(nrc + 1, " << max_recharges() << ");\n"
           << "formula cf_next = ";
      if (c_.battery.fade_law == FadeLaw::Multiplicative)
        out_ << "c_new_q * pow(keep, nrc_next);\n";
      else
        out_ << "max(0.0, c_new_q * (1 - fade * nrc_next));\n";
    }
    std::vector<int> prev_dist{0};
    prev_dist.insert(prev_dist.end(), dist_.begin(), dist_.end() - 1);
    out_ << "formula nk = " << lookup("k", turbines_, 0) << ";\n"
         << "formula dk = " << lookup("k", dist_, 0) << ";\n"
         << "formula dprev = " << lookup("k", prev_dist, dist_.back()) << ";\n"
         << "formula dhere = (s=3 & j=0) ? dprev : dk;\n\n";

    const bool ret = c_.bs1_plan == PlanScope::WithReturn;

    out_ << "// charge after the action itself\n";
    out_ << "formula a_to = soc - " << cost(kTo, "soc") << ";\n"
         << "formula a_ld = soc - " << cost(kLd, "soc") << ";\n"
         << "formula a_in = soc - " << cost(kIn, "soc") << ";\n"
         << "formula a_next = soc - " << cost(kTr, "soc") << ";\n";
    by_distance("a_fly", "dk", {}, {kTr}, {});
    by_distance("a_back", "dhere", {}, {kTr}, {});

    out_ << "// projected charge for the safety check\n";
    if (ret) {
      // outbound leg, inspection, return leg: distances enter twice
      plan_with_return("p_to", {kTo}, "dk", true);
      plan_with_return("p_fly", {}, "dk", true);
      plan_with_return("p_in", {}, "dhere", false);
      plan_with_return("p_next", {kTr}, "dk", false);
    } else {
      by_distance("p_to", "dk", {kTo}, {kTr}, {kIn});
      by_distance("p_fly", "dk", {}, {kTr}, {kIn});
      out_ << "formula p_in = a_in;\n";
      chain_named("p_next", {kTr, kIn});
    }
    out_ << "formula ok_to = p_to >= safe_t*cf;\n"
         << "formula ok_fly = p_fly >= safe_t*cf;\n"
         << "formula ok_in = p_in >= safe_t*cf;\n"
         << "formula ok_next = p_next >= safe_t*cf;\n\n";
  }

  void chain_named(const std::string& name, const std::vector<int>& steps) {
    const std::string last = chain(name + "_s", "soc", steps);
    out_ << "formula " << name << " = " << last << ";\n\n";
  }

  // prefix, out-leg of d cells when `out_leg`, inspection, back-leg of d cells, land
  void plan_with_return(const std::string& name, const std::vector<int>& prefix, const std::string& d,
                        bool out_leg) {
    std::vector<std::string> ends;
    for (int k = 0; k <= max_d_; ++k) {
      std::vector<int> steps = prefix;
      if (out_leg) steps.insert(steps.end(), static_cast<std::size_t>(k), kTr);
      steps.push_back(kIn);
      steps.insert(steps.end(), static_cast<std::size_t>(k), kTr);
      steps.push_back(kLd);
      ends.push_back(chain(name + "_d" + std::to_string(k), "soc", steps));
    }
    std::string sel;
    for (int k = 0; k < max_d_; ++k) sel += "(" + d + "=" + std::to_string(k) + " ? " + ends[k] + " : ";
    sel += ends[max_d_] + std::string(max_d_, ')');
    out_ << "formula " << name << " = " << sel << ";\n\n";
  }

  void drone() {
    out_ << "module drone\n"
         << "  s : [0..7] init 0;\n\n"
         << "  [wait] s=0 & wsp=2 -> (s'=0);\n"
         << "  [abort] s=0 & wsp=1 & !ok_to -> (s'=6);\n"
         << "  [takeoff] s=0 & wsp=1 & ok_to -> (s'=(a_to < 0 ? 6 : 1));\n"
         << "  [fly] s=1 & ok_fly -> (s'=(a_fly < 0 ? 6 : 2));\n"
         << "  [land] (s=1 & !ok_fly) | s=4 -> (s'=(a_ld < 0 ? 6 : 5));\n"
         << "  [inspect] (s=2 | (s=3 & j>0)) & ok_in -> (s'=(a_in < 0 ? 6 : 3));\n"
         << "  [next] s=3 & j=0 & k<N & ok_next -> (s'=(a_next < 0 ? 6 : 2));\n"
         << "  [back] (s=2 & !ok_in) | (s=3 & j>0 & !ok_in) | (s=3 & j=0 & (k=N | !ok_next))"
            " -> (s'=(a_back < 0 ? 6 : 4));\n"
         << "  [recharge] s=5 & k<N -> (s'=0);\n"
         << "  [finish] s=5 & k=N -> (s'=7);\n"
         << "  [] s>=6 -> true;\n"
         << "endmodule\n\n";
  }

  void grid() {
    int max_j = *std::max_element(turbines_.begin(), turbines_.end()) - 1;
    out_ << "module grid\n"
         << "  k : [0..N] init 0;  // route position of the current target cell\n"
         << "  j : [0.." << max_j << "] init 0;  // turbines done in that cell\n\n"
         << "  [inspect] true -> (j'=(j+1 >= nk ? 0 : j+1)) & (k'=(j+1 >= nk ? k+1 : k));\n"
         << "endmodule\n\n";
  }

  void environment() {
    out_ << "module environment\n"
         << "  wsp : [1..2] init 1;  // 1 low wind, 2 high wind\n\n";
    for (const char* a : {"wait", "takeoff", "fly", "land", "inspect", "next", "back", "recharge"}) {
      if (c_.p_wsp_c == 0)
        out_ << "  [" << a << "] true -> true;\n";
      else if (c_.p_wsp_c == 1)
        out_ << "  [" << a << "] true -> (wsp'=3-wsp);\n";
      else
        out_ << "  [" << a << "] true -> p_wsp_c:(wsp'=3-wsp) + 1-p_wsp_c:(wsp'=wsp);\n";
    }
    out_ << "endmodule\n\n";
  }

  void battery() {
    out_ << "module battery\n"
         << "  soc : [0..c_new_q] init c_new_q;\n";
    if (fade_) out_ << "  nrc : [0.." << max_recharges() << "] init 0;  // recharges so far\n";
    out_ << "\n"
         << "  [takeoff] true -> (soc'=max(0, a_to));\n"
         << "  [fly] true -> (soc'=max(0, a_fly));\n"
         << "  [land] true -> (soc'=max(0, a_ld));\n"
         << "  [inspect] true -> (soc'=max(0, a_in));\n"
         << "  [next] true -> (soc'=max(0, a_next));\n"
         << "  [back] true -> (soc'=max(0, a_back));\n";
    if (fade_)
      out_ << "  [recharge] true -> (soc'=floor(cf_next + 1e-9)) & (nrc'=nrc_next);\n";
    else
      out_ << "  [recharge] true -> (soc'=c_new_q);\n";
    out_ << "endmodule\n\n";
  }

  // Fade stops after fade_cycles; past the returned count a full battery
  // also fails the take-off check for any cell.
  int max_recharges() const {
    int min_in = costs_.q[3][0][0];
    for (int b = 0; b < 3; ++b)
      for (int w = 0; w < 2; ++w) min_in = std::min(min_in, costs_.q[3][b][w]);
    const double keep = 1.0 - c_.safe_t;
    const int cap = static_cast<int>(std::min<std::uint32_t>(c_.battery.fade_cycles, 100000));
    for (int r = 0; r < cap; ++r) {
      double cf = c_.battery.fade_law == FadeLaw::Multiplicative
                      ? cq_ * std::pow(1.0 - c_.battery.fade_rate, r)
                      : std::max(0.0, cq_ * (1.0 - c_.battery.fade_rate * r));
      if (cf * keep < min_in) return r;
    }
    return cap;
  }

  void rewards() {
    const auto& d = c_.durations;
    out_ << "rewards \"mt\"  // minutes\n"
         << "  [takeoff] true : " << num(d.take_off) << ";\n"
         << "  [fly] true : dk * " << num(d.transit) << ";\n"
         << "  [land] true : " << num(d.land) << ";\n"
         << "  [inspect] true : " << num(d.inspect) << ";\n"
         << "  [next] true : " << num(d.transit) << ";\n"
         << "  [back] true : dhere * " << num(d.transit) << ";\n"
         << "  [recharge] true : " << num(d.recharge) << ";\n"
         << "endrewards\n\n"
         << "rewards \"rc\"\n"
         << "  [recharge] true : 1;\n"
         << "endrewards\n\n";
  }

  void labels() {
    out_ << "label \"success\" = s=7;\n"
         << "label \"fail\" = s=6;\n"
         << "label \"done\" = s>=6;\n";
  }
};

}  // namespace

QuantizedCosts quantized_costs(const MissionConfig& c) {
  QuantizedCosts out;
  const double volts[3] = {c.battery.v_low, c.battery.v_med, c.battery.v_high};
  const ActionKind acts[4] = {ActionKind::TakeOff, ActionKind::Land, ActionKind::TransitPerCell,
                              ActionKind::InspectTurbine};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 3; ++b)
      for (int w = 0; w < 2; ++w) {
        const PowerLevel p = w == 0 ? PowerLevel::Normal : PowerLevel::High;
        out.q[a][b][w] = quanta(action_consumption(acts[a], volts[b], p, c.battery, c.durations));
      }
  return out;
}

std::string mission_model_text(const MissionConfig& c) {
  c.validate();
  return Generator(c).run();
}

Dtmc build_mission_model(const MissionConfig& c) {
  const std::string text = mission_model_text(c);
  gcl::BuildOptions opt;
  opt.state_cap = c.state_cap;
  return gcl::compose_and_build(gcl::parse_model(text), opt);
}

}  // namespace windcheck
