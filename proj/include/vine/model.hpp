#pragma once

// Quasistatic retraction mechanics of a pneumatically everting soft robot:
// tail tension needed to invert the tip, and the tail tension at which the
// pressurized wall gives way (axial buckling, crushing, or transverse
// buckling of a constant-curvature body).
//
// All quantities are SI: m, Pa, N, 1/m.

#include <numbers>
#include <string_view>

namespace vine {

/// Curvatures below this are treated as exactly straight [1/m].
inline constexpr double kStraightCurvatureThreshold = 1e-6;

/// Geometry and material of the inflated body. Defaults describe the LDPE
/// tube used for the reference measurements (8.5 cm diameter, 74 um wall).
struct BodySpec {
  double radius = 0.0425;         // R [m]
  double wall_thickness = 74e-6;  // t [m]
  double youngs_modulus = 300e6;  // E [Pa]
  double shear_modulus = 210e6;   // G [Pa]
  double inversion_force = 3.5;   // F_I [N], tip material deformation force

  double cross_section_area() const noexcept {
    return std::numbers::pi * radius * radius;
  }

  /// Throws ValidationError unless R, t, E, G > 0 and F_I >= 0.
  void validate() const;
};

/// Operating point of the body.
struct RobotState {
  double length = 0.0;     // L, centerline arc length [m]
  double curvature = 0.0;  // kappa [1/m]
  double pressure = 0.0;   // P, gauge [Pa]

  void validate() const;
};

enum class Verdict { Invert, Buckle };
enum class FailureMode { None, AxialBuckle, Crush, TransverseBuckle };
enum class ModelKind { Straight, Curved };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(FailureMode m) noexcept;
std::string_view to_string(ModelKind m) noexcept;

struct BehaviorPrediction {
  Verdict verdict = Verdict::Buckle;
  FailureMode mode = FailureMode::None;
  double required_tension = 0.0;  // tail tension needed to invert [N]
  double limiting_force = 0.0;    // smallest tail tension that collapses the wall [N]
  double margin = 0.0;            // limiting_force - required_tension [N]
  ModelKind model_used = ModelKind::Straight;
  bool extrapolated = false;      // kappa*L > pi, outside the moment-arm model
  bool model_extension = false;   // residual-tension regime of a saturated tip device
};

// --- Forces ---------------------------------------------------------------

/// T_T = P*A/2 + F_I.
double tail_tension_to_invert(const BodySpec& body, double pressure);

/// P*A; independent of length.
double crushing_force(const BodySpec& body, double pressure);

/// Axial buckling load of an inflated beam. Throws DomainError for L <= 0.
double axial_buckling_force(const BodySpec& body, double pressure, double length);

/// 2*F_I/A: below this, inverting the tip always crushes the wall.
double min_inversion_pressure(const BodySpec& body);

/// D = R + (1 - cos(kappa*L))/kappa. Requires kappa > 0 and kappa*L <= pi.
double moment_arm(const BodySpec& body, double curvature, double length);

/// P*A*R/D. Same domain as moment_arm().
double curved_buckling_force(const BodySpec& body, double pressure, double curvature,
                             double length);

/// Moment arm at which the inversion tension first buckles a curved body.
double min_buckling_moment_arm(const BodySpec& body, double pressure);

/// T_W = P*A/2 - F_I + F_d/2. Negative means the wall is slack.
double wall_tension(const BodySpec& body, double pressure, double device_force = 0.0);

// --- Transition lengths ---------------------------------------------------

enum class TransitionStatus {
  Found,                 // length holds the critical length
  BelowMinimumPressure,  // inversion tension already crushes the wall at L = 0
  Unreachable,           // curved limit never drops to the tension within kappa*L <= pi
  NeverBuckles,          // required tension is not positive
};

std::string_view to_string(TransitionStatus s) noexcept;

/// Critical length separating inversion (shorter) from buckling (longer).
struct TransitionLength {
  TransitionStatus status = TransitionStatus::BelowMinimumPressure;
  double length = 0.0;

  bool found() const noexcept { return status == TransitionStatus::Found; }
};

/// Which model governs a given (P, kappa, tension) and where it transitions.
struct GoverningTransition {
  ModelKind model = ModelKind::Straight;
  TransitionLength transition;
};

/// Closed form for axial buckling == tension, checked against bisection.
/// Throws NumericCrossCheckError when the two disagree.
TransitionLength straight_transition_length_for_tension(const BodySpec& body,
                                                        double pressure,
                                                        double tail_tension);

/// Closed form for curved buckling == tension, checked against bisection.
TransitionLength curved_transition_length_for_tension(const BodySpec& body,
                                                      double pressure,
                                                      double curvature,
                                                      double tail_tension);

TransitionLength straight_transition_length(const BodySpec& body, double pressure);

/// Throws DomainError for kappa <= 0.
TransitionLength curved_transition_length(const BodySpec& body, double pressure,
                                          double curvature);

/// Applies the straight/curved dispatch: a curved body whose curved
/// transition would be longer than (or absent compared to) the straight one
/// is treated as straight.
GoverningTransition governing_transition(const BodySpec& body, double pressure,
                                         double curvature, double tail_tension);

// --- Prediction -----------------------------------------------------------

/// Invert or buckle when retracting from the base.
BehaviorPrediction predict_behavior(const BodySpec& body, const RobotState& state);

/// Same comparison with an arbitrary required tail tension (e.g. the
/// residual tension left over from a tip device).
BehaviorPrediction predict_for_tension(const BodySpec& body, const RobotState& state,
                                       double tail_tension);

namespace detail {

/// 1 - cos(x) without cancellation near 0.
double one_minus_cos(double x) noexcept;

/// Axial buckling formula without the L > 0 precondition; finite at L = 0.
double axial_buckling_force_unchecked(const BodySpec& body, double pressure,
                                      double length) noexcept;

/// Moment arm with kappa*L clamped to pi (the maximum arm).
double moment_arm_clamped(const BodySpec& body, double curvature,
                          double length) noexcept;

}  // namespace detail

}  // namespace vine
