#pragma once

// Quasistatic retraction/growth episodes. Each step is an independent
// static verdict; only tip position and elapsed time carry over. Buckling
// ends a retraction episode since the post-buckling shape is outside the
// model.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vine/device.hpp"
#include "vine/model.hpp"

namespace vine {

/// Pressure as a function of tip position: constant, or piecewise linear
/// between knots sorted by tip position.
class PressureSchedule {
 public:
  PressureSchedule() = default;
  static PressureSchedule constant(double pressure);
  /// Knots are (tip position [m], pressure [Pa]); at least one.
  static PressureSchedule piecewise_linear(std::vector<std::pair<double, double>> knots);

  /// Throws DomainError outside [first knot, last knot] for piecewise schedules.
  double at(double tip_position) const;

  bool is_constant() const noexcept { return knots_.size() == 1 && constant_; }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_{{0.0, 0.0}};
  bool constant_ = true;
};

struct Scenario {
  BodySpec body;
  double initial_length = 0.0;  // [m]
  double target_length = 0.0;   // growth only [m]
  double curvature = 0.0;       // [1/m]
  PressureSchedule pressure;
  std::optional<DeviceSpec> device;
  double efficiency = 1.0;
  double step = 0.01;                          // [m]
  std::optional<double> motor_speed;           // [rad/s]; device maximum when unset
  std::optional<double> retraction_speed;      // tip speed without a device [m/s]
  bool base_takeup = true;                     // base motor reels in the slack

  void validate() const;
};

struct StepRecord {
  std::size_t step = 0;
  double tip_position = 0.0;      // current length [m]
  double pressure = 0.0;          // [Pa]
  double required_tension = 0.0;  // [N]
  double device_force = 0.0;      // applied F_d [N]
  Verdict verdict = Verdict::Invert;
  double elapsed_time = 0.0;      // [s]; NaN when no speed is known
  double base_takeup_speed = 0.0; // [m/s]
  double slack = 0.0;             // tail slack between tip and base [m]
};

enum class TerminalKind { FullyRetracted, BuckledAt, Stalled, ReachedTarget };

std::string_view to_string(TerminalKind k) noexcept;

struct TerminalEvent {
  TerminalKind kind = TerminalKind::FullyRetracted;
  double length = 0.0;  // [m] where the episode ended
};

struct EpisodeLog {
  std::vector<StepRecord> steps;
  TerminalEvent terminal;
  /// Growth: first length whose retraction verdict is Buckle.
  std::optional<double> first_buckle_length;
};

/// Steps from initial_length toward 0. Records every position > 0, stops at
/// the first Buckle (BuckledAt). A device whose motors do not turn stalls.
EpisodeLog simulate_retraction(const Scenario& s);

/// Steps from initial_length up to target_length, recording the retraction
/// verdict that would hold at each length.
EpisodeLog simulate_growth(const Scenario& s);

/// `step,tip_cm,pressure_kpa,required_n,device_n,verdict,time_s`.
std::string emit_episode_csv(const EpisodeLog& log);

}  // namespace vine
