#include "vine/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <iterator>
#include <limits>

#include "vine/errors.hpp"
#include "vine/units.hpp"

namespace vine {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Actuation {
  double tip_speed = kNaN;  // [m/s]
  double base_takeup_speed = 0.0;
};

Actuation actuation(const Scenario& s) {
  Actuation a;
  if (s.device) {
    const auto k = retraction_kinematics(*s.device, s.motor_speed.value_or(s.device->motor_speed_max));
    a.tip_speed = k.tip_speed;
    a.base_takeup_speed = s.base_takeup ? k.base_takeup_speed : 0.0;
  } else if (s.retraction_speed) {
    a.tip_speed = *s.retraction_speed;
    // Base spool pulls the tail in at twice the tip speed.
    a.base_takeup_speed = 2.0 * *s.retraction_speed;
  }
  return a;
}

StepRecord evaluate(const Scenario& s, std::size_t index, double tip, double travelled,
                    const Actuation& act) {
  StepRecord rec;
  rec.step = index;
  rec.tip_position = tip;
  rec.pressure = s.pressure.at(tip);
  const RobotState state{tip, s.curvature, rec.pressure};
  BehaviorPrediction pred;
  if (s.device) {
    pred = predict_with_device(s.body, *s.device, state, s.efficiency);
    rec.device_force = applied_device_force(s.body, *s.device, rec.pressure, s.efficiency);
  } else {
    pred = predict_behavior(s.body, state);
  }
  rec.required_tension = pred.required_tension;
  rec.verdict = pred.verdict;
  rec.elapsed_time = travelled / act.tip_speed;
  rec.base_takeup_speed = act.base_takeup_speed;
  rec.slack = (s.device && !s.base_takeup) ? 2.0 * travelled : 0.0;
  return rec;
}

double position_tolerance(double scale) { return 1e-12 * std::max(1.0, scale); }

}  // namespace

std::string_view to_string(TerminalKind k) noexcept {
  switch (k) {
    case TerminalKind::FullyRetracted: return "fully_retracted";
    case TerminalKind::BuckledAt: return "buckled_at";
    case TerminalKind::Stalled: return "stalled";
    case TerminalKind::ReachedTarget: return "reached_target";
  }
  return "fully_retracted";
}

PressureSchedule PressureSchedule::constant(double pressure) {
  if (!std::isfinite(pressure) || pressure < 0.0) {
    throw ValidationError("pressure must be finite and >= 0");
  }
  PressureSchedule s;
  s.knots_ = {{0.0, pressure}};
  s.constant_ = true;
  return s;
}

PressureSchedule PressureSchedule::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) throw ValidationError("pressure schedule needs at least one knot");
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [x, p] = knots[i];
    if (!std::isfinite(x) || x < 0.0 || !std::isfinite(p) || p < 0.0) {
      throw ValidationError("schedule knots need finite, non-negative position and pressure");
    }
    if (i > 0 && knots[i - 1].first == x) {
      throw ValidationError("schedule knots must have distinct positions");
    }
  }
  PressureSchedule s;
  s.knots_ = std::move(knots);
  s.constant_ = false;
  return s;
}

double PressureSchedule::at(double tip) const {
  if (constant_) return knots_.front().second;
  const double lo = knots_.front().first, hi = knots_.back().first;
  const double tol = position_tolerance(hi);
  if (tip < lo - tol || tip > hi + tol) {
    throw DomainError(fmt::format("tip position {} m outside schedule [{}, {}] m", tip, lo, hi));
  }
  if (knots_.size() == 1) return knots_.front().second;
  tip = std::clamp(tip, lo, hi);
  auto upper = std::lower_bound(knots_.begin(), knots_.end(), tip,
                                [](const auto& k, double x) { return k.first < x; });
  if (upper == knots_.begin()) return upper->second;
  const auto lower = std::prev(upper);
  const double w = (tip - lower->first) / (upper->first - lower->first);
  return lower->second + w * (upper->second - lower->second);
}

void Scenario::validate() const {
  body.validate();
  auto non_negative = [](double x) { return std::isfinite(x) && x >= 0.0; };
  if (!non_negative(initial_length)) throw ValidationError("initial length must be >= 0");
  if (!non_negative(target_length)) throw ValidationError("target length must be >= 0");
  if (!non_negative(curvature)) throw ValidationError("curvature must be >= 0");
  if (!(std::isfinite(step) && step > 0.0)) throw ValidationError("step must be > 0");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw ValidationError("efficiency must lie in [0, 1]");
  }
  if (device) device->validate();
  if (motor_speed && !non_negative(*motor_speed)) {
    throw ValidationError("motor speed must be >= 0");
  }
  if (device && motor_speed && *motor_speed > device->motor_speed_max * (1.0 + 1e-12)) {
    throw ValidationError("motor speed exceeds the device maximum");
  }
  if (retraction_speed && !(std::isfinite(*retraction_speed) && *retraction_speed > 0.0)) {
    throw ValidationError("retraction speed must be > 0");
  }
}

EpisodeLog simulate_retraction(const Scenario& s) {
  s.validate();
  EpisodeLog log;
  const Actuation act = actuation(s);
  const double l0 = s.initial_length;
  const double tol = position_tolerance(l0);

  if (l0 <= tol) {
    log.terminal = {TerminalKind::FullyRetracted, 0.0};
    return log;
  }
  if (s.device && !(act.tip_speed > 0.0)) {
    log.steps.push_back(evaluate(s, 0, l0, 0.0, act));
    log.terminal = {TerminalKind::Stalled, l0};
    return log;
  }

  for (std::size_t k = 0;; ++k) {
    const double tip = l0 - static_cast<double>(k) * s.step;
    if (tip <= tol) break;
    StepRecord rec = evaluate(s, k, tip, l0 - tip, act);
    log.steps.push_back(rec);
    if (rec.verdict == Verdict::Buckle) {
      log.terminal = {TerminalKind::BuckledAt, tip};
      return log;
    }
  }
  log.terminal = {TerminalKind::FullyRetracted, 0.0};
  return log;
}

EpisodeLog simulate_growth(const Scenario& s) {
  s.validate();
  EpisodeLog log;
  const Actuation act = actuation(s);
  const double start = s.initial_length, target = s.target_length;
  const double tol = position_tolerance(target);
  log.terminal = {TerminalKind::ReachedTarget, std::max(start, target)};
  if (target <= start + tol) return log;

  for (std::size_t k = 1;; ++k) {
    double tip = start + static_cast<double>(k) * s.step;
    const bool last = tip >= target - tol;
    if (last) tip = target;
    StepRecord rec = evaluate(s, k - 1, tip, tip - start, act);
    // Growth does not accumulate retraction slack.
    rec.slack = 0.0;
    if (rec.verdict == Verdict::Buckle && !log.first_buckle_length) {
      log.first_buckle_length = tip;
    }
    log.steps.push_back(rec);
    if (last) break;
  }
  return log;
}

std::string emit_episode_csv(const EpisodeLog& log) {
  std::string out = "step,tip_cm,pressure_kpa,required_n,device_n,verdict,time_s\n";
  auto it = std::back_inserter(out);
  for (const auto& r : log.steps) {
    fmt::format_to(it, "{},{:.10g},{:.10g},{:.10g},{:.10g},{},", r.step,
                   r.tip_position / units::cm, r.pressure / units::kPa, r.required_tension,
                   r.device_force, to_string(r.verdict));
    if (std::isfinite(r.elapsed_time)) fmt::format_to(it, "{:.10g}", r.elapsed_time);
    out += '\n';
  }
  return out;
}

}  // namespace vine
