#include "vine/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fmt/format.h>

#include "vine/errors.hpp"

namespace vine {
namespace {

void validate_axis(const GridAxis& axis, const char* name) {
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || axis.min < 0.0) {
    throw ValidationError(fmt::format("{} range must be finite and >= 0", name));
  }
  if (!(axis.min < axis.max)) {
    throw ValidationError(fmt::format("{} range needs min < max", name));
  }
  if (axis.steps < 1) throw ValidationError(fmt::format("{} range needs steps >= 1", name));
}

// Everything about a pressure row that does not depend on length.
struct RowPlan {
  double pressure = 0.0;
  double tension = 0.0;          // required tail tension after any device help
  bool zero_tension = false;     // device inverts on its own
  bool model_extension = false;  // device saturated, residual tension left
  GoverningTransition governing;
};

RowPlan plan_row(const SweepRequest& req, std::size_t row, const TransitionSolver& solver) {
  RowPlan plan;
  plan.pressure = req.pressure.center(row);
  if (req.device) {
    const double available = req.efficiency * max_device_force(*req.device);
    if (device_force_for_zero_tension(req.body, *req.device, plan.pressure) <= available) {
      plan.zero_tension = true;
      plan.tension = 0.0;
      plan.governing = {ModelKind::Straight, {TransitionStatus::NeverBuckles, 0.0}};
      return plan;
    }
    plan.tension = tail_tension_with_device(req.body, *req.device, plan.pressure, available);
    plan.model_extension = available > 0.0;
  } else {
    plan.tension = tail_tension_to_invert(req.body, plan.pressure);
  }
  plan.governing = solver(req.body, plan.pressure, req.curvature, plan.tension);
  return plan;
}

bool inverts_at(const GoverningTransition& g, double length) {
  switch (g.transition.status) {
    case TransitionStatus::Found: return length < g.transition.length;
    case TransitionStatus::NeverBuckles:
    case TransitionStatus::Unreachable: return true;
    case TransitionStatus::BelowMinimumPressure: return false;
  }
  return false;
}

BehaviorPrediction classify_cell(const SweepRequest& req, const RowPlan& plan, double length) {
  const BodySpec& body = req.body;
  const double pa = plan.pressure * body.cross_section_area();
  const double kappa = req.curvature;

  BehaviorPrediction out;
  out.required_tension = plan.tension;
  out.model_used = plan.governing.model;
  out.extrapolated = kappa >= kStraightCurvatureThreshold &&
                     kappa * length > std::numbers::pi;
  out.model_extension = plan.model_extension;

  if (plan.governing.model == ModelKind::Straight) {
    const double axial = detail::axial_buckling_force_unchecked(body, plan.pressure, length);
    out.limiting_force = std::min(pa, axial);
    out.mode = pa <= axial ? FailureMode::Crush : FailureMode::AxialBuckle;
  } else {
    out.limiting_force = pa * body.radius / detail::moment_arm_clamped(body, kappa, length);
    out.mode = FailureMode::TransverseBuckle;
  }
  out.margin = out.limiting_force - out.required_tension;
  if (plan.zero_tension || inverts_at(plan.governing, length)) {
    out.verdict = Verdict::Invert;
    out.mode = FailureMode::None;
  } else {
    out.verdict = Verdict::Buckle;
  }
  return out;
}

PhaseDiagram classify_serial(const SweepRequest& req, const TransitionSolver& solver) {
  PhaseDiagram d;
  d.request = req;
  std::vector<RowPlan> plans(d.rows());
  for (std::size_t r = 0; r < d.rows(); ++r) plans[r] = plan_row(req, r, solver);

  d.cells.resize(d.rows() * d.cols());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c) {
      d.cells[r * d.cols() + c] = classify_cell(req, plans[r], req.length.center(c));
    }
  }
  for (const auto& p : plans) {
    if (p.governing.transition.found()) {
      d.transition_curve.push_back({p.pressure, p.governing.transition.length});
    }
  }
  return d;
}

PhaseDiagram classify_parallel(const SweepRequest& req, const TransitionSolver& solver) {
  PhaseDiagram d;
  d.request = req;
  const auto rows = static_cast<std::ptrdiff_t>(d.rows());
  const auto cols = static_cast<std::ptrdiff_t>(d.cols());

  // Exceptions cannot leave an OpenMP region; park them per row.
  std::vector<RowPlan> plans(d.rows());
  std::vector<std::exception_ptr> errors(d.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    try {
      plans[r] = plan_row(req, static_cast<std::size_t>(r), solver);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  d.cells.resize(d.rows() * d.cols());
  const std::ptrdiff_t total = rows * cols;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto r = static_cast<std::size_t>(i / cols);
    const auto c = static_cast<std::size_t>(i % cols);
    d.cells[static_cast<std::size_t>(i)] = classify_cell(req, plans[r], req.length.center(c));
  }

  for (const auto& p : plans) {
    if (p.governing.transition.found()) {
      d.transition_curve.push_back({p.pressure, p.governing.transition.length});
    }
  }
  return d;
}

}  // namespace

void SweepRequest::validate() const {
  body.validate();
  if (!std::isfinite(curvature) || curvature < 0.0) {
    throw ValidationError("curvature must be finite and >= 0");
  }
  validate_axis(pressure, "pressure");
  validate_axis(length, "length");
  if (device) device->validate();
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw ValidationError("efficiency must lie in [0, 1]");
  }
}

PhaseDiagram classify_grid(const SweepRequest& req, Execution exec) {
  return classify_grid(req, exec, governing_transition);
}

PhaseDiagram classify_grid(const SweepRequest& req, Execution exec,
                           const TransitionSolver& solver) {
  req.validate();
  return exec == Execution::Serial ? classify_serial(req, solver)
                                   : classify_parallel(req, solver);
}

PhaseDiagram oracle_scan(const SweepRequest& req) {
  req.validate();
  const BodySpec& body = req.body;
  const double kappa = req.curvature;
  const bool curved = kappa >= kStraightCurvatureThreshold;

  PhaseDiagram d;
  d.request = req;
  d.cells.reserve(d.rows() * d.cols());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const double p = req.pressure.center(r);
    const double pa = p * body.cross_section_area();

    double tension = tail_tension_to_invert(body, p);
    bool zero_tension = false;
    bool extension = false;
    if (req.device) {
      const double available = req.efficiency * max_device_force(*req.device);
      const double needed = pa + 2.0 * aperture_inversion_force(*req.device);
      zero_tension = needed <= available;
      tension = zero_tension ? 0.0 : 0.5 * needed - 0.5 * available;
      extension = !zero_tension && available > 0.0;
    }

    for (std::size_t c = 0; c < d.cols(); ++c) {
      const double l = req.length.center(c);
      BehaviorPrediction cell;
      cell.required_tension = tension;
      cell.model_extension = extension;
      cell.extrapolated = curved && kappa * l > std::numbers::pi;

      // Crushing, axial buckling, and (for curved bodies) transverse
      // buckling all compete; the smallest wins.
      const double axial = detail::axial_buckling_force_unchecked(body, p, l);
      cell.limiting_force = pa;
      cell.mode = FailureMode::Crush;
      if (axial < cell.limiting_force) {
        cell.limiting_force = axial;
        cell.mode = FailureMode::AxialBuckle;
      }
      if (curved) {
        const double transverse = pa * body.radius / detail::moment_arm_clamped(body, kappa, l);
        if (transverse < cell.limiting_force) {
          cell.limiting_force = transverse;
          cell.mode = FailureMode::TransverseBuckle;
          cell.model_used = ModelKind::Curved;
        }
      }
      cell.margin = cell.limiting_force - tension;
      const bool inverts = zero_tension || tension < cell.limiting_force;
      cell.verdict = inverts ? Verdict::Invert : Verdict::Buckle;
      if (inverts) cell.mode = FailureMode::None;
      d.cells.push_back(cell);
    }
  }
  return d;
}

std::vector<CellMismatch> compare_verdicts(const PhaseDiagram& a, const PhaseDiagram& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.cells.size() != b.cells.size()) {
    throw ValidationError("diagrams have different shapes");
  }
  std::vector<CellMismatch> out;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a.at(r, c).verdict != b.at(r, c).verdict) out.push_back({r, c});
    }
  }
  return out;
}

}  // namespace vine
