#pragma once

// Recovers the empirical constants of the model from bench measurements:
// the tip inversion force F_I from tail tension vs. pressure sweeps, and the
// aperture constants (C1, C2) from zero-pressure pull-through tests.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace vine {

struct TensionSample {
  double pressure = 0.0;      // [Pa]
  double tail_tension = 0.0;  // [N]
  std::size_t row = 0;        // source row (1-based, header = 1), 0 if synthetic
};

enum class ApertureShape { Circular, Rectangular, Device };

std::string_view to_string(ApertureShape s) noexcept;

struct ApertureSample {
  double aperture_area = 0.0;    // [m^2]
  double inversion_force = 0.0;  // measured pull force = 2*F_I [N]
  ApertureShape shape = ApertureShape::Circular;
  std::size_t row = 0;
};

struct InversionForceFit {
  double inversion_force = 0.0;  // F_I [N]
  double residual_rms = 0.0;     // [N]
};

struct AffineFit {
  double slope = 0.0;      // [N/Pa]
  double intercept = 0.0;  // [N]
  double residual_rms = 0.0;
};

struct ApertureFit {
  double c1 = 0.0;  // [N·m^2]
  double c2 = 0.0;  // [N]
  double residual_rms = 0.0;  // in F_I (half the measured force) [N]
};

/// Least squares with the slope pinned to A/2: F_I is the mean of
/// T - P*A/2. Each trial is one equally weighted sample.
InversionForceFit fit_inversion_force(std::span<const TensionSample> samples,
                                      double cross_section_area);

/// Unconstrained T = slope*P + intercept, for comparing against the pinned fit.
AffineFit fit_affine_tension(std::span<const TensionSample> samples);

/// F_I = C1/a + C2 by ordinary least squares in 1/a, after halving the
/// measured forces. Throws ValidationError with fewer than two distinct areas.
ApertureFit fit_aperture_constants(std::span<const ApertureSample> samples);

enum class MeasurementKind { Tension, Aperture };

/// "tension" or "aperture"; throws ValidationError otherwise.
MeasurementKind parse_measurement_kind(std::string_view name);

using Measurements = std::variant<std::vector<TensionSample>, std::vector<ApertureSample>>;

/// CSV with header `pressure_kpa,tension_n` (tension) or
/// `area_cm2,force_n,shape` (aperture). Converts to SI.
/// Throws EmptyInputError for files without data rows and ParseError (with
/// the row number) for malformed rows.
Measurements load_measurements(const std::filesystem::path& path, MeasurementKind kind);

std::vector<TensionSample> load_tension_csv(const std::filesystem::path& path);
std::vector<ApertureSample> load_aperture_csv(const std::filesystem::path& path);

}  // namespace vine
