#include <fmt/format.h>

#include <iterator>

#include "vine/errors.hpp"
#include "vine/sweep.hpp"
#include "vine/units.hpp"

namespace vine {
namespace {

std::string emit_csv(const PhaseDiagram& d) {
  std::string out = "pressure_kpa,length_cm,verdict,mode,required_n,limit_n,margin_n,model,extrapolated\n";
  auto it = std::back_inserter(out);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const double p_kpa = d.request.pressure.center(r) / units::kPa;
    for (std::size_t c = 0; c < d.cols(); ++c) {
      const auto& cell = d.at(r, c);
      fmt::format_to(it, "{:.10g},{:.10g},{},{},{:.10g},{:.10g},{:.10g},{},{}\n", p_kpa,
                     d.request.length.center(c) / units::cm, to_string(cell.verdict),
                     to_string(cell.mode), cell.required_tension, cell.limiting_force,
                     cell.margin, to_string(cell.model_used),
                     cell.extrapolated ? "true" : "false");
    }
  }
  return out;
}

// Fixed-layout scatter: pressure [kPa] on x, length [cm] on y. Green circles
// invert, red crosses buckle, dashed line is the modeled transition.
std::string emit_svg(const PhaseDiagram& d) {
  constexpr double kWidth = 640, kHeight = 480;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  constexpr double kPlotW = kWidth - kLeft - kRight;
  constexpr double kPlotH = kHeight - kTop - kBottom;

  const double p0 = d.request.pressure.min / units::kPa, p1 = d.request.pressure.max / units::kPa;
  const double l0 = d.request.length.min / units::cm, l1 = d.request.length.max / units::cm;
  auto sx = [&](double p_kpa) { return kLeft + (p_kpa - p0) / (p1 - p0) * kPlotW; };
  auto sy = [&](double l_cm) { return kTop + kPlotH - (l_cm - l0) / (l1 - l0) * kPlotH; };

  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                 "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                 kWidth, kHeight);
  fmt::format_to(it, "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  fmt::format_to(it,
                 "<text x=\"{:.2f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
                 "Retraction behavior, curvature {:.4g} 1/m</text>\n",
                 kWidth / 2, d.request.curvature);

  // Axes and ticks.
  fmt::format_to(it,
                 "<g stroke=\"black\" fill=\"none\"><rect x=\"{:.2f}\" y=\"{:.2f}\" "
                 "width=\"{:.2f}\" height=\"{:.2f}\"/></g>\n",
                 kLeft, kTop, kPlotW, kPlotH);
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double p = p0 + (p1 - p0) * i / kTicks;
    const double l = l0 + (l1 - l0) * i / kTicks;
    fmt::format_to(it,
                   "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                   "stroke=\"black\"/><text x=\"{0:.2f}\" y=\"{3:.2f}\" "
                   "text-anchor=\"middle\">{4:.3g}</text>\n",
                   sx(p), kTop + kPlotH, kTop + kPlotH + 5, kTop + kPlotH + 20, p);
    fmt::format_to(it,
                   "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                   "stroke=\"black\"/><text x=\"{3:.2f}\" y=\"{4:.2f}\" "
                   "text-anchor=\"end\">{5:.3g}</text>\n",
                   kLeft - 5, sy(l), kLeft, kLeft - 8, sy(l) + 4, l);
  }
  fmt::format_to(it,
                 "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">Pressure (kPa)</text>\n",
                 kLeft + kPlotW / 2, kHeight - 15);
  fmt::format_to(it,
                 "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                 "transform=\"rotate(-90 18 {0:.2f})\">Length (cm)</text>\n",
                 kTop + kPlotH / 2);

  // Markers.
  constexpr double kMark = 3.0;
  out += "<g id=\"invert\" stroke=\"#2a9d2a\" fill=\"none\">\n";
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c) {
      if (d.at(r, c).verdict != Verdict::Invert) continue;
      fmt::format_to(it, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.1f}\"/>\n",
                     sx(d.request.pressure.center(r) / units::kPa),
                     sy(d.request.length.center(c) / units::cm), kMark);
    }
  }
  out += "</g>\n<g id=\"buckle\" stroke=\"#d62728\">\n";
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c) {
      if (d.at(r, c).verdict != Verdict::Buckle) continue;
      const double x = sx(d.request.pressure.center(r) / units::kPa);
      const double y = sy(d.request.length.center(c) / units::cm);
      fmt::format_to(it,
                     "<path d=\"M{:.2f} {:.2f}L{:.2f} {:.2f}M{:.2f} {:.2f}L{:.2f} {:.2f}\"/>\n",
                     x - kMark, y - kMark, x + kMark, y + kMark, x - kMark, y + kMark,
                     x + kMark, y - kMark);
    }
  }
  out += "</g>\n";

  // Transition polyline, clipped to the plot box.
  fmt::format_to(it,
                 "<clipPath id=\"plot\"><rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" "
                 "height=\"{:.2f}\"/></clipPath>\n",
                 kLeft, kTop, kPlotW, kPlotH);
  out += "<polyline id=\"transition\" clip-path=\"url(#plot)\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"1.5\" stroke-dasharray=\"4 3\" points=\"";
  bool first = true;
  for (const auto& pt : d.transition_curve) {
    fmt::format_to(it, "{}{:.2f},{:.2f}", first ? "" : " ", sx(pt.pressure / units::kPa),
                   sy(pt.critical_length / units::cm));
    first = false;
  }
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace

DiagramFormat parse_diagram_format(std::string_view name) {
  if (name == "csv") return DiagramFormat::Csv;
  if (name == "svg") return DiagramFormat::Svg;
  throw ValidationError(fmt::format("unknown diagram format '{}'", name));
}

std::string emit_diagram(const PhaseDiagram& diagram, DiagramFormat format) {
  return format == DiagramFormat::Csv ? emit_csv(diagram) : emit_svg(diagram);
}

std::string emit_transition_csv(const PhaseDiagram& diagram) {
  std::string out = "pressure_kpa,critical_length_cm\n";
  auto it = std::back_inserter(out);
  for (const auto& pt : diagram.transition_curve) {
    fmt::format_to(it, "{:.10g},{:.10g}\n", pt.pressure / units::kPa,
                   pt.critical_length / units::cm);
  }
  return out;
}

}  // namespace vine
