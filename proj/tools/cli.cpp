#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vine/calibration.hpp"
#include "vine/config.hpp"
#include "vine/device.hpp"
#include "vine/errors.hpp"
#include "vine/model.hpp"
#include "vine/sim.hpp"
#include "vine/sweep.hpp"
#include "vine/units.hpp"

namespace vine::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GridAxis parse_axis(const std::string& spec, double scale, const char* flag) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos || spec.find(':', b + 1) != std::string::npos) {
    throw UsageError(fmt::format("{} expects min:max:steps (got '{}')", flag, spec));
  }
  try {
    std::size_t used = 0;
    GridAxis axis;
    const std::string lo = spec.substr(0, a), hi = spec.substr(a + 1, b - a - 1),
                      n = spec.substr(b + 1);
    axis.min = std::stod(lo, &used) * scale;
    if (used != lo.size()) throw std::invalid_argument(lo);
    axis.max = std::stod(hi, &used) * scale;
    if (used != hi.size()) throw std::invalid_argument(hi);
    const long steps = std::stol(n, &used);
    if (used != n.size() || steps < 1) throw std::invalid_argument(n);
    axis.steps = static_cast<std::size_t>(steps);
    return axis;
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("{} expects min:max:steps (got '{}')", flag, spec));
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError(fmt::format("cannot write '{}'", path));
  f << contents;
  if (!f) throw ValidationError(fmt::format("failed writing '{}'", path));
}

json prediction_json(const BehaviorPrediction& p) {
  return {
      {"verdict", to_string(p.verdict)},
      {"mode", to_string(p.mode)},
      {"required_n", p.required_tension},
      {"limit_n", p.limiting_force},
      {"margin_n", p.margin},
      {"model", to_string(p.model_used)},
      {"extrapolated", p.extrapolated},
      {"model_extension", p.model_extension},
  };
}

json transition_json(const TransitionLength& t) {
  json j = {{"status", to_string(t.status)}};
  j["critical_length_cm"] = t.found() ? json(t.length / units::cm) : json(nullptr);
  return j;
}

std::string transition_text(const TransitionLength& t) {
  if (t.found()) return fmt::format("{:.2f} cm", t.length / units::cm);
  return std::string(to_string(t.status));
}

struct Options {
  std::string config_path;
  bool json = false;

  // predict / transition / sweep
  double pressure_kpa = 0.0;
  double length_cm = 0.0;
  double kappa = 0.0;
  bool device = false;
  std::optional<double> efficiency;

  // sweep
  std::string p_axis = "0:10:50";
  std::string l_axis = "0:300:50";
  std::string out_csv, out_svg, out_transition_csv;
  bool oracle_check = false;
  bool serial = false;
  bool inject_fault = false;

  // fit
  std::string csv_path;
  std::string shape = "circle";

  // simulate
  std::string scenario_path;
};

double efficiency_of(const Options& o, const Config& cfg) {
  const double e = o.efficiency.value_or(cfg.efficiency);
  if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("--efficiency must lie in [0, 1]");
  return e;
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_predict(const Options& o, const Config& cfg, std::ostream& out) {
  const RobotState state{o.length_cm * units::cm, o.kappa, o.pressure_kpa * units::kPa};
  const double eff = efficiency_of(o, cfg);
  const BehaviorPrediction p = o.device
                                   ? predict_with_device(cfg.body, cfg.device, state, eff)
                                   : predict_behavior(cfg.body, state);
  if (o.json) {
    json j = prediction_json(p);
    j["input"] = {{"pressure_kpa", state.pressure / units::kPa},
                  {"length_cm", state.length / units::cm},
                  {"kappa_per_m", state.curvature},
                  {"device", o.device}};
    if (o.device) j["input"]["efficiency"] = eff;
    emit_json(out, j);
    return kOk;
  }
  fmt::print(out, "{:<18}{}\n", "verdict", to_string(p.verdict));
  fmt::print(out, "{:<18}{}\n", "mode", to_string(p.mode));
  fmt::print(out, "{:<18}{:.4f} N\n", "required tension", p.required_tension);
  fmt::print(out, "{:<18}{:.4f} N\n", "limiting force", p.limiting_force);
  fmt::print(out, "{:<18}{:.4f} N\n", "margin", p.margin);
  fmt::print(out, "{:<18}{}\n", "model", to_string(p.model_used));
  fmt::print(out, "{:<18}{}\n", "extrapolated", p.extrapolated ? "yes" : "no");
  if (p.model_extension) fmt::print(out, "{:<18}{}\n", "note", "saturated device, residual tension");
  return kOk;
}

int cmd_transition(const Options& o, const Config& cfg, std::ostream& out) {
  const double p = o.pressure_kpa * units::kPa;
  if (!(o.kappa >= 0.0)) throw ValidationError("--kappa-per-m must be >= 0");

  double tension = tail_tension_to_invert(cfg.body, p);
  bool zero_tension = false;
  if (o.device) {
    const double available = efficiency_of(o, cfg) * max_device_force(cfg.device);
    zero_tension = device_force_for_zero_tension(cfg.body, cfg.device, p) <= available;
    tension = zero_tension ? 0.0 : tail_tension_with_device(cfg.body, cfg.device, p, available);
  }
  const TransitionLength straight = straight_transition_length_for_tension(cfg.body, p, tension);
  std::optional<TransitionLength> curved;
  if (o.kappa >= kStraightCurvatureThreshold) {
    curved = curved_transition_length_for_tension(cfg.body, p, o.kappa, tension);
  }
  const GoverningTransition gov = governing_transition(cfg.body, p, o.kappa, tension);

  if (o.json) {
    json j = {
        {"input", {{"pressure_kpa", p / units::kPa}, {"kappa_per_m", o.kappa}, {"device", o.device}}},
        {"required_n", tension},
        {"min_inversion_pressure_kpa", min_inversion_pressure(cfg.body) / units::kPa},
        {"straight", transition_json(straight)},
        {"curved", curved ? transition_json(*curved) : json(nullptr)},
        {"governing", transition_json(gov.transition)},
        {"model", to_string(gov.model)},
    };
    j["governing"]["model"] = to_string(gov.model);
    emit_json(out, j);
    return kOk;
  }
  fmt::print(out, "{:<20}{:.4f} N\n", "required tension", tension);
  fmt::print(out, "{:<20}{}\n", "straight", transition_text(straight));
  if (curved) fmt::print(out, "{:<20}{}\n", "curved", transition_text(*curved));
  fmt::print(out, "{:<20}{} ({})\n", "critical length", transition_text(gov.transition),
             to_string(gov.model));
  return kOk;
}

int cmd_sweep(const Options& o, const Config& cfg, std::ostream& out, std::ostream& err) {
  SweepRequest req;
  req.body = cfg.body;
  req.curvature = o.kappa;
  req.pressure = parse_axis(o.p_axis, units::kPa, "--p");
  req.length = parse_axis(o.l_axis, units::cm, "--l");
  if (o.device) req.device = cfg.device;
  req.efficiency = efficiency_of(o, cfg);

  const Execution exec = o.serial ? Execution::Serial : Execution::Parallel;
  PhaseDiagram diagram;
  if (o.inject_fault) {
    // Deliberately wrong closed form, for exercising the oracle check.
    TransitionSolver biased = [](const BodySpec& b, double p, double k, double t) {
      GoverningTransition g = governing_transition(b, p, k, t);
      if (g.transition.found()) g.transition.length *= 1.25;
      return g;
    };
    diagram = classify_grid(req, exec, biased);
  } else {
    diagram = classify_grid(req, exec);
  }

  std::size_t mismatches = 0;
  if (o.oracle_check) {
    const auto diff = compare_verdicts(diagram, oracle_scan(req));
    mismatches = diff.size();
    if (!diff.empty()) {
      const auto& first = diff.front();
      fmt::print(err, "error: oracle check failed: {} of {} cells disagree (first at {:.4g} kPa, {:.4g} cm)\n",
                 diff.size(), diagram.cells.size(),
                 req.pressure.center(first.row) / units::kPa,
                 req.length.center(first.col) / units::cm);
      return kCrossCheckFailed;
    }
  }

  if (!o.out_csv.empty()) write_file(o.out_csv, emit_diagram(diagram, DiagramFormat::Csv));
  if (!o.out_svg.empty()) write_file(o.out_svg, emit_diagram(diagram, DiagramFormat::Svg));
  if (!o.out_transition_csv.empty()) write_file(o.out_transition_csv, emit_transition_csv(diagram));

  std::size_t inverts = 0;
  for (const auto& c : diagram.cells) inverts += c.verdict == Verdict::Invert;

  if (o.json) {
    json curve = json::array();
    for (const auto& pt : diagram.transition_curve) {
      curve.push_back({{"pressure_kpa", pt.pressure / units::kPa},
                       {"critical_length_cm", pt.critical_length / units::cm}});
    }
    emit_json(out, {{"model_version", diagram.model_version},
                    {"kappa_per_m", req.curvature},
                    {"rows", diagram.rows()},
                    {"cols", diagram.cols()},
                    {"invert_cells", inverts},
                    {"buckle_cells", diagram.cells.size() - inverts},
                    {"oracle_checked", o.oracle_check},
                    {"oracle_mismatches", mismatches},
                    {"transition_curve", curve}});
    return kOk;
  }
  fmt::print(out, "{} x {} cells: {} invert, {} buckle\n", diagram.rows(), diagram.cols(), inverts,
             diagram.cells.size() - inverts);
  fmt::print(out, "transition points: {}\n", diagram.transition_curve.size());
  if (o.oracle_check) fmt::print(out, "oracle check: all cells agree\n");
  return kOk;
}

int cmd_device_info(const Options& o, const Config& cfg, std::ostream& out) {
  const double eff = efficiency_of(o, cfg);
  const DeviceSpec& d = cfg.device;
  const double torque_limit = 2.0 * d.max_motor_torque / d.roller_radius;
  const double f_max = max_device_force(d);
  const double p_bare = max_zero_tension_pressure(cfg.body, d, 1.0, InversionForceSource::Bare);
  const double p_dev = max_zero_tension_pressure(cfg.body, d, eff, InversionForceSource::Device);
  const auto kin = retraction_kinematics(d, d.motor_speed_max);
  const double f_i_dev = aperture_inversion_force(d);

  if (o.json) {
    json j = {
        {"max_device_force_n", f_max},
        {"torque_limit_n", torque_limit},
        {"friction_limit_n", (d.static_friction && d.roller_normal_force)
                                 ? json(*d.static_friction * *d.roller_normal_force)
                                 : json(nullptr)},
        {"max_zero_tension_pressure_kpa", p_bare / units::kPa},
        {"max_zero_tension_pressure_device_kpa", p_dev / units::kPa},
        {"efficiency", eff},
        {"device_inversion_force_n", f_i_dev},
        {"min_sliding_aperture_cm2", d.min_sliding_aperture() / units::cm2},
        {"tip_speed_cm_s", kin.tip_speed / units::cm},
        {"roller_surface_speed_cm_s", kin.roller_surface_speed / units::cm},
        {"motor_rpm_max", d.motor_speed_max / units::rpm},
    };
    emit_json(out, j);
    return kOk;
  }
  fmt::print(out, "{:<34}{:.2f} N\n", "max device force", f_max);
  fmt::print(out, "{:<34}{:.2f} kPa\n", "max zero-tension pressure", p_bare / units::kPa);
  fmt::print(out, "{:<34}{:.2f} kPa (efficiency {:.3g})\n", "  with F_I through device",
             p_dev / units::kPa, eff);
  fmt::print(out, "{:<34}{:.2f} N\n", "F_I through device", f_i_dev);
  fmt::print(out, "{:<34}{:.2f} cm/s at {:.0f} RPM\n", "tip retraction speed",
             kin.tip_speed / units::cm, d.motor_speed_max / units::rpm);
  return kOk;
}

int cmd_fit_inversion(const Options& o, const Config& cfg, std::ostream& out) {
  const auto samples = load_tension_csv(o.csv_path);
  const double area = cfg.body.cross_section_area();
  const auto fit = fit_inversion_force(samples, area);
  const auto affine = fit_affine_tension(samples);
  if (o.json) {
    emit_json(out, {{"f_i_n", fit.inversion_force},
                    {"residual_rms_n", fit.residual_rms},
                    {"samples", samples.size()},
                    {"slope_n_per_kpa", 0.5 * area * units::kPa},
                    {"unconstrained_slope_n_per_kpa", affine.slope * units::kPa},
                    {"unconstrained_intercept_n", affine.intercept},
                    {"unconstrained_residual_rms_n", affine.residual_rms}});
    return kOk;
  }
  fmt::print(out, "{:<24}{:.4f} N\n", "F_I", fit.inversion_force);
  fmt::print(out, "{:<24}{:.4f} N\n", "residual rms", fit.residual_rms);
  fmt::print(out, "{:<24}{}\n", "samples", samples.size());
  return kOk;
}

int cmd_fit_aperture(const Options& o, std::ostream& out) {
  auto samples = load_aperture_csv(o.csv_path);
  if (o.shape != "all") {
    ApertureShape keep;
    if (o.shape == "circle") {
      keep = ApertureShape::Circular;
    } else if (o.shape == "rect") {
      keep = ApertureShape::Rectangular;
    } else if (o.shape == "device") {
      keep = ApertureShape::Device;
    } else {
      throw UsageError(fmt::format("--shape must be circle, rect, device or all (got '{}')", o.shape));
    }
    std::erase_if(samples, [&](const ApertureSample& s) { return s.shape != keep; });
  }
  const auto fit = fit_aperture_constants(samples);
  if (o.json) {
    emit_json(out, {{"c1_ncm2", fit.c1 / units::N_cm2},
                    {"c2_n", fit.c2},
                    {"residual_rms_n", fit.residual_rms},
                    {"samples", samples.size()},
                    {"shape", o.shape}});
    return kOk;
  }
  fmt::print(out, "{:<24}{:.4f} N·cm²\n", "C1", fit.c1 / units::N_cm2);
  fmt::print(out, "{:<24}{:.4f} N\n", "C2", fit.c2);
  fmt::print(out, "{:<24}{:.4f} N\n", "residual rms", fit.residual_rms);
  fmt::print(out, "{:<24}{}\n", "samples", samples.size());
  return kOk;
}

int cmd_simulate(const Options& o, const Config& cfg, std::ostream& out) {
  const ScenarioDocument doc = load_scenario(o.scenario_path, cfg);
  const EpisodeLog log = doc.direction == EpisodeDirection::Retract
                             ? simulate_retraction(doc.scenario)
                             : simulate_growth(doc.scenario);
  if (!o.out_csv.empty()) write_file(o.out_csv, emit_episode_csv(log));

  if (o.json) {
    json j = {{"direction", doc.direction == EpisodeDirection::Retract ? "retract" : "grow"},
              {"terminal", to_string(log.terminal.kind)},
              {"terminal_length_cm", log.terminal.length / units::cm},
              {"steps", log.steps.size()}};
    j["first_buckle_length_cm"] =
        log.first_buckle_length ? json(*log.first_buckle_length / units::cm) : json(nullptr);
    if (!log.steps.empty()) {
      j["final_slack_cm"] = log.steps.back().slack / units::cm;
      j["base_takeup_speed_cm_s"] = log.steps.back().base_takeup_speed / units::cm;
    }
    emit_json(out, j);
    return kOk;
  }
  fmt::print(out, "{:<20}{}\n", "terminal event", to_string(log.terminal.kind));
  fmt::print(out, "{:<20}{:.2f} cm\n", "at length", log.terminal.length / units::cm);
  fmt::print(out, "{:<20}{}\n", "steps", log.steps.size());
  if (log.first_buckle_length) {
    fmt::print(out, "{:<20}{:.2f} cm\n", "first buckle", *log.first_buckle_length / units::cm);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Retraction behavior and tip-device sizing for everting soft robots", "vinectl"};
  app.require_subcommand(1);
  app.add_option("--config", o.config_path, "JSON config overriding body/device defaults")
      ->check(CLI::ExistingFile);

  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "Emit one JSON document"); };
  auto add_device = [&](CLI::App* sub) {
    sub->add_flag("--device", o.device, "Retract through the tip device");
    sub->add_option("--efficiency", o.efficiency, "Device transmission efficiency (0..1]");
  };

  auto* predict = app.add_subcommand("predict", "Invert or buckle at one operating point");
  predict->add_option("--pressure-kpa", o.pressure_kpa, "Gauge pressure [kPa]")->required();
  predict->add_option("--length-cm", o.length_cm, "Body length [cm]")->required();
  predict->add_option("--kappa-per-m", o.kappa, "Curvature [1/m]");
  add_device(predict);
  add_json(predict);

  auto* transition = app.add_subcommand("transition", "Critical length at a pressure");
  transition->add_option("--pressure-kpa", o.pressure_kpa, "Gauge pressure [kPa]")->required();
  transition->add_option("--kappa-per-m", o.kappa, "Curvature [1/m]");
  add_device(transition);
  add_json(transition);

  auto* sweep = app.add_subcommand("sweep", "Phase diagram over pressure and length");
  sweep->add_option("--kappa-per-m", o.kappa, "Curvature [1/m]");
  sweep->add_option("--p", o.p_axis, "Pressure axis min:max:steps [kPa]")->capture_default_str();
  sweep->add_option("--l", o.l_axis, "Length axis min:max:steps [cm]")->capture_default_str();
  sweep->add_option("--out-csv", o.out_csv, "Grid CSV output path");
  sweep->add_option("--out-svg", o.out_svg, "SVG output path");
  sweep->add_option("--out-transition-csv", o.out_transition_csv, "Transition curve CSV path");
  sweep->add_flag("--oracle-check", o.oracle_check, "Cross-check every cell by direct comparison");
  sweep->add_flag("--serial", o.serial, "Use the serial kernel");
  sweep->add_flag("--inject-fault", o.inject_fault)->group("");
  add_device(sweep);
  add_json(sweep);

  auto* device = app.add_subcommand("device", "Tip device sizing");
  device->require_subcommand(1);
  auto* info = device->add_subcommand("info", "Max force, zero-tension pressure, tip speed");
  info->add_option("--efficiency", o.efficiency, "Device transmission efficiency (0..1]");
  add_json(info);

  auto* fit = app.add_subcommand("fit", "Calibrate empirical constants from CSV");
  fit->require_subcommand(1);
  auto* fit_inv = fit->add_subcommand("inversion", "F_I from pressure_kpa,tension_n");
  fit_inv->add_option("--csv", o.csv_path, "Measurements")->required()->check(CLI::ExistingFile);
  add_json(fit_inv);
  auto* fit_ap = fit->add_subcommand("aperture", "C1, C2 from area_cm2,force_n,shape");
  fit_ap->add_option("--csv", o.csv_path, "Measurements")->required()->check(CLI::ExistingFile);
  fit_ap->add_option("--shape", o.shape, "circle, rect, device or all")->capture_default_str();
  add_json(fit_ap);

  auto* simulate = app.add_subcommand("simulate", "Step a retraction or growth episode");
  simulate->add_option("--scenario", o.scenario_path, "Scenario JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--out-csv", o.out_csv, "Episode CSV output path");
  add_json(simulate);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  }

  try {
    const Config cfg = o.config_path.empty() ? Config{} : load_config(o.config_path);
    if (predict->parsed()) return cmd_predict(o, cfg, out);
    if (transition->parsed()) return cmd_transition(o, cfg, out);
    if (sweep->parsed()) return cmd_sweep(o, cfg, out, err);
    if (info->parsed()) return cmd_device_info(o, cfg, out);
    if (fit_inv->parsed()) return cmd_fit_inversion(o, cfg, out);
    if (fit_ap->parsed()) return cmd_fit_aperture(o, out);
    if (simulate->parsed()) return cmd_simulate(o, cfg, out);
    fmt::print(err, "error: no subcommand\n");
    return kUsage;
  } catch (const UsageError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  } catch (const NumericCrossCheckError& e) {
    fmt::print(err, "error: numeric cross-check failed: {}\n", e.what());
    return kCrossCheckFailed;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kInvalidInput;
  }
}

}  // namespace vine::cli
