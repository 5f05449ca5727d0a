#include "vine/model.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "vine/errors.hpp"

namespace vine {
namespace {

constexpr double kPi = std::numbers::pi;

// Closed forms and their bisection check must agree to these.
constexpr double kCrossCheckLengthTol = 1e-6;    // [m]
constexpr double kCrossCheckResidualTol = 1e-9;  // [N], scaled by max(1, T)

// Allowance on kappa*L <= pi for values computed as pi/kappa * kappa.
constexpr double kArcSlack = 1e-12;

bool finite_non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

void require_pressure(double pressure) {
  if (!finite_non_negative(pressure)) {
    throw DomainError(fmt::format("pressure must be finite and >= 0 (got {})", pressure));
  }
}

// Root of a decreasing function f with f(lo) > target >= f(hi).
template <typename F>
double bisect_decreasing(F&& f, double target, double lo, double hi) {
  for (int i = 0; i < 400 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void cross_check(const char* what, double closed_form, double bisected, double residual,
                 double tension) {
  const double residual_tol = kCrossCheckResidualTol * std::max(1.0, std::abs(tension));
  if (!(std::abs(closed_form - bisected) <= kCrossCheckLengthTol) ||
      !(std::abs(residual) <= residual_tol)) {
    throw NumericCrossCheckError(fmt::format(
        "{} transition: closed form {} m vs bisection {} m (residual {} N)", what,
        closed_form, bisected, residual));
  }
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::Invert ? "invert" : "buckle";
}

std::string_view to_string(FailureMode m) noexcept {
  switch (m) {
    case FailureMode::None: return "none";
    case FailureMode::AxialBuckle: return "axial_buckle";
    case FailureMode::Crush: return "crush";
    case FailureMode::TransverseBuckle: return "transverse_buckle";
  }
  return "none";
}

std::string_view to_string(ModelKind m) noexcept {
  return m == ModelKind::Straight ? "straight" : "curved";
}

std::string_view to_string(TransitionStatus s) noexcept {
  switch (s) {
    case TransitionStatus::Found: return "found";
    case TransitionStatus::BelowMinimumPressure: return "below_minimum_pressure";
    case TransitionStatus::Unreachable: return "unreachable";
    case TransitionStatus::NeverBuckles: return "never_buckles";
  }
  return "found";
}

void BodySpec::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(radius)) throw ValidationError("body radius must be > 0");
  if (!positive(wall_thickness)) throw ValidationError("wall thickness must be > 0");
  if (!positive(youngs_modulus)) throw ValidationError("Young's modulus must be > 0");
  if (!positive(shear_modulus)) throw ValidationError("shear modulus must be > 0");
  if (!finite_non_negative(inversion_force)) {
    throw ValidationError("inversion force must be >= 0");
  }
}

void RobotState::validate() const {
  if (!finite_non_negative(length)) throw ValidationError("length must be >= 0");
  if (!finite_non_negative(curvature)) throw ValidationError("curvature must be >= 0");
  if (!finite_non_negative(pressure)) throw ValidationError("pressure must be >= 0");
}

namespace detail {

double one_minus_cos(double x) noexcept {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

double axial_buckling_force_unchecked(const BodySpec& b, double p, double l) noexcept {
  const double pi3 = kPi * kPi * kPi;
  const double r = b.radius, t = b.wall_thickness, e = b.youngs_modulus, g = b.shear_modulus;
  const double numerator = e * pi3 * r * r * r * r * t * p + e * g * pi3 * r * r * r * t * t;
  const double denominator = e * kPi * kPi * r * r * t + r * l * l * p + g * t * l * l;
  return numerator / denominator;
}

double moment_arm_clamped(const BodySpec& b, double kappa, double l) noexcept {
  const double arc = std::min(kappa * l, kPi);
  return b.radius + one_minus_cos(arc) / kappa;
}

}  // namespace detail

double tail_tension_to_invert(const BodySpec& body, double pressure) {
  require_pressure(pressure);
  return 0.5 * pressure * body.cross_section_area() + body.inversion_force;
}

double crushing_force(const BodySpec& body, double pressure) {
  require_pressure(pressure);
  return pressure * body.cross_section_area();
}

double axial_buckling_force(const BodySpec& body, double pressure, double length) {
  require_pressure(pressure);
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError(fmt::format("axial buckling needs L > 0 (got {})", length));
  }
  return detail::axial_buckling_force_unchecked(body, pressure, length);
}

double min_inversion_pressure(const BodySpec& body) {
  return 2.0 * body.inversion_force / body.cross_section_area();
}

double moment_arm(const BodySpec& body, double curvature, double length) {
  if (!(curvature > 0.0) || !std::isfinite(curvature)) {
    throw DomainError(fmt::format("moment arm needs kappa > 0 (got {})", curvature));
  }
  if (!finite_non_negative(length)) {
    throw DomainError(fmt::format("moment arm needs L >= 0 (got {})", length));
  }
  const double arc = curvature * length;
  if (arc > kPi * (1.0 + kArcSlack)) {
    throw DomainError(fmt::format("kappa*L = {} exceeds pi; tail would contact the wall", arc));
  }
  // Below the straightness threshold the body is straight: no lever arm gain.
  if (curvature < kStraightCurvatureThreshold) return body.radius;
  return detail::moment_arm_clamped(body, curvature, length);
}

double curved_buckling_force(const BodySpec& body, double pressure, double curvature,
                             double length) {
  require_pressure(pressure);
  const double d = moment_arm(body, curvature, length);
  return pressure * body.cross_section_area() * body.radius / d;
}

double min_buckling_moment_arm(const BodySpec& body, double pressure) {
  if (!(pressure > 0.0) || !std::isfinite(pressure)) {
    throw DomainError("minimum moment arm needs P > 0");
  }
  const double pa = pressure * body.cross_section_area();
  return pa * body.radius / (0.5 * pa + body.inversion_force);
}

double wall_tension(const BodySpec& body, double pressure, double device_force) {
  require_pressure(pressure);
  return 0.5 * pressure * body.cross_section_area() - body.inversion_force +
         0.5 * device_force;
}

TransitionLength straight_transition_length_for_tension(const BodySpec& body,
                                                        double pressure,
                                                        double tension) {
  require_pressure(pressure);
  const double pa = pressure * body.cross_section_area();
  if (tension >= pa) return {TransitionStatus::BelowMinimumPressure, 0.0};
  if (tension <= 0.0) return {TransitionStatus::NeverBuckles, 0.0};

  const double r = body.radius, t = body.wall_thickness, e = body.youngs_modulus,
               g = body.shear_modulus;
  const double pi3 = kPi * kPi * kPi;
  const double numerator = e * pi3 * r * r * r * r * t * pressure + e * g * pi3 * r * r * r * t * t;
  // axial(0) = P*A + pi*R*G*t > P*A > T, so the bracket is positive.
  const double length_sq =
      (numerator / tension - e * kPi * kPi * r * r * t) / (r * pressure + g * t);
  const double closed = std::sqrt(std::max(length_sq, 0.0));

  auto force = [&](double l) { return detail::axial_buckling_force_unchecked(body, pressure, l); };
  double hi = std::max(1.0, 2.0 * closed);
  while (force(hi) > tension) hi *= 2.0;
  const double bisected = bisect_decreasing(force, tension, 0.0, hi);
  cross_check("straight", closed, bisected, force(closed) - tension, tension);
  return {TransitionStatus::Found, closed};
}

TransitionLength curved_transition_length_for_tension(const BodySpec& body,
                                                      double pressure, double curvature,
                                                      double tension) {
  require_pressure(pressure);
  if (!(curvature > 0.0) || !std::isfinite(curvature)) {
    throw DomainError(fmt::format("curved transition needs kappa > 0 (got {})", curvature));
  }
  const double pa = pressure * body.cross_section_area();
  if (tension > pa) return {TransitionStatus::BelowMinimumPressure, 0.0};
  if (tension == pa) return {TransitionStatus::Found, 0.0};
  if (tension <= 0.0) return {TransitionStatus::NeverBuckles, 0.0};

  const double d_min = pa * body.radius / tension;
  const double x = curvature * (d_min - body.radius);  // = 1 - cos(kappa*L*)
  if (x > 2.0) return {TransitionStatus::Unreachable, 0.0};
  // arccos(1 - x) written as 2*asin(sqrt(x/2)) to stay accurate for small x.
  const double closed = 2.0 * std::asin(std::sqrt(0.5 * x)) / curvature;

  auto force = [&](double l) {
    return pa * body.radius / detail::moment_arm_clamped(body, curvature, l);
  };
  const double bisected = bisect_decreasing(force, tension, 0.0, kPi / curvature);
  cross_check("curved", closed, bisected, force(closed) - tension, tension);
  return {TransitionStatus::Found, closed};
}

TransitionLength straight_transition_length(const BodySpec& body, double pressure) {
  return straight_transition_length_for_tension(body, pressure,
                                                tail_tension_to_invert(body, pressure));
}

TransitionLength curved_transition_length(const BodySpec& body, double pressure,
                                          double curvature) {
  return curved_transition_length_for_tension(body, pressure, curvature,
                                              tail_tension_to_invert(body, pressure));
}

GoverningTransition governing_transition(const BodySpec& body, double pressure,
                                         double curvature, double tension) {
  const TransitionLength straight =
      straight_transition_length_for_tension(body, pressure, tension);
  if (curvature < kStraightCurvatureThreshold) return {ModelKind::Straight, straight};

  const TransitionLength curved =
      curved_transition_length_for_tension(body, pressure, curvature, tension);
  const bool use_straight =
      !curved.found() || (straight.found() && curved.length > straight.length);
  if (use_straight) return {ModelKind::Straight, straight};
  return {ModelKind::Curved, curved};
}

BehaviorPrediction predict_for_tension(const BodySpec& body, const RobotState& state,
                                       double tension) {
  body.validate();
  state.validate();

  const double p = state.pressure, l = state.length, kappa = state.curvature;
  const double pa = p * body.cross_section_area();

  BehaviorPrediction out;
  out.required_tension = tension;

  const GoverningTransition gov = governing_transition(body, p, kappa, tension);
  out.model_used = gov.model;
  out.extrapolated = kappa >= kStraightCurvatureThreshold && kappa * l > kPi;

  if (gov.model == ModelKind::Straight) {
    const double axial = detail::axial_buckling_force_unchecked(body, p, l);
    const bool crush_binds = pa <= axial;
    out.limiting_force = crush_binds ? pa : axial;
    out.mode = crush_binds ? FailureMode::Crush : FailureMode::AxialBuckle;
  } else {
    out.limiting_force = pa * body.radius / detail::moment_arm_clamped(body, kappa, l);
    out.mode = FailureMode::TransverseBuckle;
  }

  out.margin = out.limiting_force - tension;
  // Ties buckle.
  out.verdict = tension < out.limiting_force ? Verdict::Invert : Verdict::Buckle;
  if (out.verdict == Verdict::Invert) out.mode = FailureMode::None;
  return out;
}

BehaviorPrediction predict_behavior(const BodySpec& body, const RobotState& state) {
  state.validate();
  return predict_for_tension(body, state, tail_tension_to_invert(body, state.pressure));
}

}  // namespace vine
