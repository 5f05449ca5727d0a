#include "vine/device.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "vine/errors.hpp"

namespace vine {
namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

void require_efficiency(double efficiency) {
  if (!std::isfinite(efficiency) || efficiency < 0.0 || efficiency > 1.0) {
    throw ValidationError(fmt::format("efficiency must lie in [0, 1] (got {})", efficiency));
  }
}

}  // namespace

double DeviceSpec::min_sliding_aperture() const noexcept {
  return std::min(tip_ring_area, routing_aperture_area);
}

void DeviceSpec::validate() const {
  if (!positive(max_motor_torque)) throw ValidationError("motor torque must be > 0");
  if (!positive(roller_radius)) throw ValidationError("roller radius must be > 0");
  if (!positive(motor_speed_max)) throw ValidationError("motor speed must be > 0");
  if (!positive(tip_ring_area)) throw ValidationError("tip ring area must be > 0");
  if (!positive(routing_aperture_area)) {
    throw ValidationError("routing aperture area must be > 0");
  }
  if (!positive(aperture_c1)) throw ValidationError("aperture C1 must be > 0");
  if (!positive(aperture_c2)) throw ValidationError("aperture C2 must be > 0");
  if (static_friction && !positive(*static_friction)) {
    throw ValidationError("static friction must be > 0");
  }
  if (roller_normal_force && !positive(*roller_normal_force)) {
    throw ValidationError("roller normal force must be > 0");
  }
}

double aperture_inversion_force(double c1, double c2, double area) {
  if (!(area > 0.0)) {
    throw DomainError(fmt::format("aperture area must be > 0 (got {})", area));
  }
  return c1 / area + c2;
}

double aperture_inversion_force(const DeviceSpec& device) {
  return aperture_inversion_force(device.aperture_c1, device.aperture_c2,
                                  device.min_sliding_aperture());
}

double tail_tension_with_device(const BodySpec& body, const DeviceSpec& device,
                                double pressure, double device_force) {
  if (!(device_force >= 0.0)) throw DomainError("device force must be >= 0");
  // Written against the zero-tension force so that F_d = PA + 2 F_I,dev gives exactly 0.
  return 0.5 * (device_force_for_zero_tension(body, device, pressure) - device_force);
}

double device_force_for_zero_tension(const BodySpec& body, const DeviceSpec& device,
                                     double pressure) {
  return crushing_force(body, pressure) + 2.0 * aperture_inversion_force(device);
}

double max_device_force(const DeviceSpec& device) {
  const double torque_limit = 2.0 * device.max_motor_torque / device.roller_radius;
  if (device.static_friction && device.roller_normal_force) {
    return std::min(torque_limit, *device.static_friction * *device.roller_normal_force);
  }
  return torque_limit;
}

double max_zero_tension_pressure(const BodySpec& body, const DeviceSpec& device,
                                 double efficiency, InversionForceSource source) {
  require_efficiency(efficiency);
  const double f_i = source == InversionForceSource::Device ? aperture_inversion_force(device)
                                                            : body.inversion_force;
  const double p = (efficiency * max_device_force(device) - 2.0 * f_i) /
                   body.cross_section_area();
  return std::max(p, 0.0);
}

double efficiency_for_zero_tension_pressure(const BodySpec& body, const DeviceSpec& device,
                                            double pressure) {
  return device_force_for_zero_tension(body, device, pressure) / max_device_force(device);
}

DeviceForces device_forces(const BodySpec& body, const DeviceSpec& device, double pressure,
                           double device_force) {
  DeviceForces f;
  f.device_force = device_force;
  f.grounding_force = device_force;
  f.tail_tension = tail_tension_with_device(body, device, pressure, device_force);
  // Wall balance with the device's own inversion force.
  f.wall_tension = crushing_force(body, pressure) - f.tail_tension;
  return f;
}

RetractionKinematics retraction_kinematics(const DeviceSpec& device, double motor_speed) {
  if (!(motor_speed >= 0.0)) throw DomainError("motor speed must be >= 0");
  if (motor_speed > device.motor_speed_max * (1.0 + 1e-12)) {
    throw DomainError(fmt::format("motor speed {} rad/s exceeds the maximum {} rad/s",
                                  motor_speed, device.motor_speed_max));
  }
  RetractionKinematics k;
  k.roller_surface_speed = motor_speed * device.roller_radius;
  // Eversion moves the tip at half the speed the tail is drawn in.
  k.tip_speed = 0.5 * k.roller_surface_speed;
  k.base_takeup_speed = k.roller_surface_speed;
  return k;
}

double applied_device_force(const BodySpec& body, const DeviceSpec& device, double pressure,
                            double efficiency) {
  require_efficiency(efficiency);
  return std::min(device_force_for_zero_tension(body, device, pressure),
                  efficiency * max_device_force(device));
}

BehaviorPrediction predict_with_device(const BodySpec& body, const DeviceSpec& device,
                                       const RobotState& state, double efficiency) {
  body.validate();
  device.validate();
  state.validate();
  require_efficiency(efficiency);

  const double available = efficiency * max_device_force(device);
  const double needed = device_force_for_zero_tension(body, device, state.pressure);

  if (needed <= available) {
    // No tail tension, so nothing loads the wall: the limits are reported
    // for reference only.
    BehaviorPrediction out = predict_for_tension(body, state, 0.0);
    out.required_tension = 0.0;
    out.margin = out.limiting_force;
    out.verdict = Verdict::Invert;
    out.mode = FailureMode::None;
    return out;
  }

  const double residual = tail_tension_with_device(body, device, state.pressure, available);
  BehaviorPrediction out = predict_for_tension(body, state, residual);
  out.model_extension = available > 0.0;
  return out;
}

}  // namespace vine
