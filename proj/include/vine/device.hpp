#pragma once

// Tip-mounted retraction device: a pair of motor-driven rollers squeezing
// the tail, grounded against the tip through a low-friction ring. The force
// it applies never loads the body over any length, so it cannot buckle it.

#include <optional>

#include "vine/model.hpp"
#include "vine/units.hpp"

namespace vine {

struct DeviceSpec {
  double max_motor_torque = 24.5 * units::N_cm;       // tau_max per motor [N·m]
  double roller_radius = 1.2 * units::cm;             // r [m]
  double motor_speed_max = 33.0 * units::rpm;         // [rad/s]
  std::optional<double> static_friction;              // mu_s, unset = not binding
  std::optional<double> roller_normal_force;          // N [N], unset = not binding
  double tip_ring_area = std::numbers::pi * 1.6 * 1.6 * units::cm2;          // [m^2]
  double routing_aperture_area = std::numbers::pi * 1.6 * 1.6 * units::cm2;  // [m^2]
  double aperture_c1 = 6.1 * units::N_cm2;            // [N·m^2]
  double aperture_c2 = 3.3;                           // [N]

  /// Smallest aperture the tail slides through. The roller gap is not a
  /// sliding aperture (the rollers roll along the tail).
  double min_sliding_aperture() const noexcept;

  void validate() const;
};

/// Forces at the tip while the device is active; grounding == device force.
struct DeviceForces {
  double device_force = 0.0;     // F_d on the tail [N]
  double grounding_force = 0.0;  // F_g on the tip [N]
  double tail_tension = 0.0;     // T_T [N]
  double wall_tension = 0.0;     // T_W [N]
};

struct RetractionKinematics {
  double roller_surface_speed = 0.0;  // [m/s]
  double tip_speed = 0.0;             // [m/s], half the tail speed
  double base_takeup_speed = 0.0;     // [m/s], keeps tail slack constant
};

enum class InversionForceSource {
  Device,  // F_I through the device apertures (aperture model)
  Bare,    // the body's own F_I, as measured without the device
};

/// F_I = C1/a + C2.
double aperture_inversion_force(double c1, double c2, double area);

/// Aperture model at the device's smallest sliding aperture.
double aperture_inversion_force(const DeviceSpec& device);

/// T_T = P*A/2 + F_I,dev - F_d/2; negative when the device over-drives.
double tail_tension_with_device(const BodySpec& body, const DeviceSpec& device,
                                double pressure, double device_force);

/// F_d = P*A + 2*F_I,dev, the force that inverts with zero tail tension.
double device_force_for_zero_tension(const BodySpec& body, const DeviceSpec& device,
                                     double pressure);

/// min(2*tau_max/r, mu_s*N); the friction cap applies only when both are set.
double max_device_force(const DeviceSpec& device);

/// Highest pressure retractable with zero tail tension, floored at 0.
double max_zero_tension_pressure(const BodySpec& body, const DeviceSpec& device,
                                 double efficiency,
                                 InversionForceSource source = InversionForceSource::Device);

/// Efficiency for which max_zero_tension_pressure() equals `pressure`.
/// Used to back out transmission losses from a measured maximum.
double efficiency_for_zero_tension_pressure(const BodySpec& body, const DeviceSpec& device,
                                            double pressure);

DeviceForces device_forces(const BodySpec& body, const DeviceSpec& device, double pressure,
                           double device_force);

/// Throws DomainError when motor_speed is negative or above the device maximum.
RetractionKinematics retraction_kinematics(const DeviceSpec& device, double motor_speed);

/// Device applies min(what is needed, efficiency * max force). When that is
/// short of the zero-tension force, the residual tail tension goes through the
/// ordinary buckling comparison and the result is flagged model_extension.
BehaviorPrediction predict_with_device(const BodySpec& body, const DeviceSpec& device,
                                       const RobotState& state, double efficiency = 1.0);

/// Device force actually applied at a state: min(zero-tension need, available).
double applied_device_force(const BodySpec& body, const DeviceSpec& device, double pressure,
                            double efficiency);

}  // namespace vine
