#pragma once

// Phase diagrams over (pressure, length) at fixed curvature.
//
// classify_grid() is the fast path: one governing transition length per
// pressure row (closed form), then each cell is classified by comparing its
// length against it. oracle_scan() never touches a transition solver; it
// compares the required tension against every limiting force cell by cell.
// The two must agree on every verdict.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vine/device.hpp"
#include "vine/model.hpp"

namespace vine {

inline constexpr std::string_view kModelVersion = "vine-retract-1";

/// `steps` cells spanning [min, max]; values are taken at cell centers.
struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 2;

  double center(std::size_t i) const noexcept {
    return min + (static_cast<double>(i) + 0.5) * (max - min) / static_cast<double>(steps);
  }
};

struct SweepRequest {
  BodySpec body;
  double curvature = 0.0;  // [1/m]
  GridAxis pressure;       // [Pa]
  GridAxis length;         // [m]
  std::optional<DeviceSpec> device;
  double efficiency = 1.0;

  void validate() const;
};

struct TransitionPoint {
  double pressure = 0.0;         // [Pa]
  double critical_length = 0.0;  // [m]
};

struct PhaseDiagram {
  SweepRequest request;
  /// Row-major: row = pressure index, column = length index.
  std::vector<BehaviorPrediction> cells;
  std::vector<TransitionPoint> transition_curve;
  std::string model_version{kModelVersion};

  std::size_t rows() const noexcept { return request.pressure.steps; }
  std::size_t cols() const noexcept { return request.length.steps; }
  const BehaviorPrediction& at(std::size_t row, std::size_t col) const {
    return cells[row * cols() + col];
  }
};

enum class Execution { Serial, Parallel };

/// Signature of a governing-transition solver; swappable for fault injection.
using TransitionSolver =
    std::function<GoverningTransition(const BodySpec&, double pressure, double curvature,
                                      double tail_tension)>;

PhaseDiagram classify_grid(const SweepRequest& req, Execution exec = Execution::Parallel);
PhaseDiagram classify_grid(const SweepRequest& req, Execution exec,
                           const TransitionSolver& solver);

/// Cell-by-cell direct force comparison. Serial by construction.
PhaseDiagram oracle_scan(const SweepRequest& req);

struct CellMismatch {
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Cells whose verdicts differ. Throws ValidationError on shape mismatch.
std::vector<CellMismatch> compare_verdicts(const PhaseDiagram& a, const PhaseDiagram& b);

enum class DiagramFormat { Csv, Svg };

/// Throws ValidationError for anything other than "csv" or "svg".
DiagramFormat parse_diagram_format(std::string_view name);

/// Grid CSV or SVG scatter; byte-identical output for identical input.
std::string emit_diagram(const PhaseDiagram& diagram, DiagramFormat format);

/// `pressure_kpa,critical_length_cm` rows of the transition curve.
std::string emit_transition_csv(const PhaseDiagram& diagram);

}  // namespace vine
