#include "vine/calibration.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <set>
#include <string>

#include "vine/errors.hpp"
#include "vine/units.hpp"

namespace vine {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t row, std::string_view column) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError(row, fmt::format("{} is not a number: '{}'", column, field));
  }
  return value;
}

// Reads a CSV with an exact header; blank lines are skipped, row numbers kept.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(
    const std::filesystem::path& path, std::string_view header) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));

  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t row = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = line;
    if (row == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    if (!seen_header) {
      if (trim(view) != header) {
        throw ParseError(row, fmt::format("expected header '{}'", header));
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string> fields;
    for (auto f : split_fields(view)) fields.emplace_back(f);
    rows.emplace_back(row, std::move(fields));
  }
  if (rows.empty()) {
    throw EmptyInputError(fmt::format("'{}' contains no data rows", path.string()));
  }
  return rows;
}

void expect_columns(const std::vector<std::string>& fields, std::size_t n, std::size_t row) {
  if (fields.size() != n) {
    throw ParseError(row, fmt::format("expected {} columns, found {}", n, fields.size()));
  }
}

}  // namespace

std::string_view to_string(ApertureShape s) noexcept {
  switch (s) {
    case ApertureShape::Circular: return "circle";
    case ApertureShape::Rectangular: return "rect";
    case ApertureShape::Device: return "device";
  }
  return "circle";
}

InversionForceFit fit_inversion_force(std::span<const TensionSample> samples,
                                      double area) {
  if (samples.empty()) throw ValidationError("inversion-force fit needs at least one sample");
  double sum = 0.0;
  for (const auto& s : samples) sum += s.tail_tension - 0.5 * s.pressure * area;
  const double f_i = sum / static_cast<double>(samples.size());

  double ss = 0.0;
  for (const auto& s : samples) {
    const double r = s.tail_tension - (0.5 * s.pressure * area + f_i);
    ss += r * r;
  }
  return {f_i, std::sqrt(ss / static_cast<double>(samples.size()))};
}

AffineFit fit_affine_tension(std::span<const TensionSample> samples) {
  if (samples.empty()) throw ValidationError("affine fit needs at least one sample");
  const double n = static_cast<double>(samples.size());
  double mp = 0.0, mt = 0.0;
  for (const auto& s : samples) {
    mp += s.pressure;
    mt += s.tail_tension;
  }
  mp /= n;
  mt /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    sxx += (s.pressure - mp) * (s.pressure - mp);
    sxy += (s.pressure - mp) * (s.tail_tension - mt);
  }
  AffineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = mt - fit.slope * mp;
  double ss = 0.0;
  for (const auto& s : samples) {
    const double r = s.tail_tension - (fit.slope * s.pressure + fit.intercept);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

ApertureFit fit_aperture_constants(std::span<const ApertureSample> samples) {
  std::set<double> areas;
  for (const auto& s : samples) {
    if (!(s.aperture_area > 0.0)) throw ValidationError("aperture areas must be > 0");
    areas.insert(s.aperture_area);
  }
  if (areas.size() < 2) {
    throw ValidationError("aperture fit needs at least two distinct areas");
  }

  // Regress y = F/2 on x = 1/a with centered sums.
  const double n = static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& s : samples) {
    mx += 1.0 / s.aperture_area;
    my += 0.5 * s.inversion_force;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = 1.0 / s.aperture_area - mx;
    sxx += dx * dx;
    sxy += dx * (0.5 * s.inversion_force - my);
  }
  ApertureFit fit;
  fit.c1 = sxy / sxx;
  fit.c2 = my - fit.c1 * mx;
  double ss = 0.0;
  for (const auto& s : samples) {
    const double r = 0.5 * s.inversion_force - (fit.c1 / s.aperture_area + fit.c2);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

MeasurementKind parse_measurement_kind(std::string_view name) {
  if (name == "tension" || name == "inversion") return MeasurementKind::Tension;
  if (name == "aperture") return MeasurementKind::Aperture;
  throw ValidationError(fmt::format("unknown measurement kind '{}'", name));
}

std::vector<TensionSample> load_tension_csv(const std::filesystem::path& path) {
  std::vector<TensionSample> out;
  for (const auto& [row, fields] : read_csv(path, "pressure_kpa,tension_n")) {
    expect_columns(fields, 2, row);
    TensionSample s;
    s.pressure = parse_number(fields[0], row, "pressure_kpa") * units::kPa;
    s.tail_tension = parse_number(fields[1], row, "tension_n");
    s.row = row;
    if (s.pressure < 0.0) throw ParseError(row, "pressure must be >= 0");
    if (s.tail_tension < 0.0) throw ParseError(row, "tension must be >= 0");
    out.push_back(s);
  }
  return out;
}

std::vector<ApertureSample> load_aperture_csv(const std::filesystem::path& path) {
  std::vector<ApertureSample> out;
  for (const auto& [row, fields] : read_csv(path, "area_cm2,force_n,shape")) {
    expect_columns(fields, 3, row);
    ApertureSample s;
    s.aperture_area = parse_number(fields[0], row, "area_cm2") * units::cm2;
    s.inversion_force = parse_number(fields[1], row, "force_n");
    s.row = row;
    if (fields[2] == "circle") {
      s.shape = ApertureShape::Circular;
    } else if (fields[2] == "rect") {
      s.shape = ApertureShape::Rectangular;
    } else if (fields[2] == "device") {
      s.shape = ApertureShape::Device;
    } else {
      throw ParseError(row, fmt::format("unknown shape '{}'", fields[2]));
    }
    if (!(s.aperture_area > 0.0)) throw ParseError(row, "area must be > 0");
    if (!(s.inversion_force > 0.0)) throw ParseError(row, "force must be > 0");
    out.push_back(s);
  }
  return out;
}

Measurements load_measurements(const std::filesystem::path& path, MeasurementKind kind) {
  if (kind == MeasurementKind::Tension) return load_tension_csv(path);
  return load_aperture_csv(path);
}

}  // namespace vine
