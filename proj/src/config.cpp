#include "vine/config.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "vine/errors.hpp"
#include "vine/units.hpp"

namespace vine {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text, std::string_view what) {
  try {
    json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) throw ValidationError(fmt::format("{} must be a JSON object", what));
    return doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(fmt::format("{} is not valid JSON: {}", what, e.what()));
  }
}

void reject_unknown(const json& obj, std::string_view section,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ValidationError(fmt::format("unknown key '{}' in {}", key, section));
  }
}

double number(const json& obj, std::string_view section, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(fmt::format("{}.{} must be a number", section, key));
  return v.get<double>();
}

// Reads obj[key] if present, requires it positive, and scales it to SI.
void read_positive(const json& obj, std::string_view section, const char* key, double scale,
                   double& out) {
  if (!obj.contains(key)) return;
  const double v = number(obj, section, key);
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ValidationError(fmt::format("{}.{} must be > 0 (got {})", section, key, v));
  }
  out = v * scale;
}

void read_non_negative(const json& obj, std::string_view section, const char* key,
                       double scale, double& out) {
  if (!obj.contains(key)) return;
  const double v = number(obj, section, key);
  if (!(std::isfinite(v) && v >= 0.0)) {
    throw ValidationError(fmt::format("{}.{} must be >= 0 (got {})", section, key, v));
  }
  out = v * scale;
}

void apply_body(const json& obj, BodySpec& body) {
  if (!obj.is_object()) throw ValidationError("body must be an object");
  reject_unknown(obj, "body", {"radius_cm", "thickness_um", "e_mpa", "g_mpa", "f_i_n"});
  read_positive(obj, "body", "radius_cm", units::cm, body.radius);
  read_positive(obj, "body", "thickness_um", units::um, body.wall_thickness);
  read_positive(obj, "body", "e_mpa", units::MPa, body.youngs_modulus);
  read_positive(obj, "body", "g_mpa", units::MPa, body.shear_modulus);
  read_positive(obj, "body", "f_i_n", 1.0, body.inversion_force);
}

void apply_device(const json& obj, DeviceSpec& device, double& efficiency) {
  if (!obj.is_object()) throw ValidationError("device must be an object");
  reject_unknown(obj, "device",
                 {"torque_ncm", "roller_radius_cm", "rpm_max", "tip_ring_diameter_cm",
                  "routing_aperture_cm2", "c1_ncm2", "c2_n", "efficiency", "static_friction",
                  "normal_force_n"});
  read_positive(obj, "device", "torque_ncm", units::N_cm, device.max_motor_torque);
  read_positive(obj, "device", "roller_radius_cm", units::cm, device.roller_radius);
  read_positive(obj, "device", "rpm_max", units::rpm, device.motor_speed_max);
  read_positive(obj, "device", "c1_ncm2", units::N_cm2, device.aperture_c1);
  read_positive(obj, "device", "c2_n", 1.0, device.aperture_c2);

  const bool routing_given = obj.contains("routing_aperture_cm2");
  if (obj.contains("tip_ring_diameter_cm")) {
    double diameter = 0.0;
    read_positive(obj, "device", "tip_ring_diameter_cm", units::cm, diameter);
    device.tip_ring_area = std::numbers::pi * 0.25 * diameter * diameter;
    // An unspecified routing aperture never undercuts the tip ring.
    if (!routing_given) device.routing_aperture_area = device.tip_ring_area;
  }
  read_positive(obj, "device", "routing_aperture_cm2", units::cm2, device.routing_aperture_area);

  if (obj.contains("static_friction")) {
    double mu = 0.0;
    read_positive(obj, "device", "static_friction", 1.0, mu);
    device.static_friction = mu;
  }
  if (obj.contains("normal_force_n")) {
    double n = 0.0;
    read_positive(obj, "device", "normal_force_n", 1.0, n);
    device.roller_normal_force = n;
  }
  if (obj.contains("efficiency")) {
    read_positive(obj, "device", "efficiency", 1.0, efficiency);
    if (efficiency > 1.0) throw ValidationError("device.efficiency must be <= 1");
  }
}

}  // namespace

Config parse_config(std::string_view text) {
  const json doc = parse_json(text, "config");
  reject_unknown(doc, "config", {"body", "device", "defaults"});
  Config cfg;
  if (doc.contains("body")) apply_body(doc.at("body"), cfg.body);
  if (doc.contains("device")) apply_device(doc.at("device"), cfg.device, cfg.efficiency);
  if (doc.contains("defaults")) {
    if (!doc.at("defaults").is_object()) throw ValidationError("defaults must be an object");
    cfg.defaults_json = doc.at("defaults").dump();
  }
  cfg.body.validate();
  cfg.device.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

ScenarioDocument parse_scenario(std::string_view text, const Config& base) {
  const json doc = parse_json(text, "scenario");
  reject_unknown(doc, "scenario",
                 {"direction", "initial_length_cm", "target_length_cm", "kappa_per_m",
                  "pressure_kpa", "pressure_schedule", "device", "efficiency", "step_cm",
                  "motor_rpm", "retraction_speed_cm_s", "base_takeup", "body"});

  ScenarioDocument out;
  Scenario& s = out.scenario;
  s.body = base.body;
  s.efficiency = base.efficiency;

  if (doc.contains("direction")) {
    const auto& d = doc.at("direction");
    if (d == "retract") {
      out.direction = EpisodeDirection::Retract;
    } else if (d == "grow") {
      out.direction = EpisodeDirection::Grow;
    } else {
      throw ValidationError("scenario.direction must be \"retract\" or \"grow\"");
    }
  }
  if (doc.contains("body")) apply_body(doc.at("body"), s.body);

  read_non_negative(doc, "scenario", "initial_length_cm", units::cm, s.initial_length);
  read_non_negative(doc, "scenario", "target_length_cm", units::cm, s.target_length);
  read_non_negative(doc, "scenario", "kappa_per_m", 1.0, s.curvature);
  read_positive(doc, "scenario", "step_cm", units::cm, s.step);

  const bool has_constant = doc.contains("pressure_kpa");
  const bool has_schedule = doc.contains("pressure_schedule");
  if (has_constant == has_schedule) {
    throw ValidationError("scenario needs exactly one of pressure_kpa or pressure_schedule");
  }
  if (has_constant) {
    double p = 0.0;
    read_non_negative(doc, "scenario", "pressure_kpa", units::kPa, p);
    s.pressure = PressureSchedule::constant(p);
  } else {
    const json& arr = doc.at("pressure_schedule");
    if (!arr.is_array() || arr.empty()) {
      throw ValidationError("pressure_schedule must be a non-empty array");
    }
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : arr) {
      if (!k.is_object()) throw ValidationError("schedule knots must be objects");
      reject_unknown(k, "pressure_schedule", {"tip_cm", "pressure_kpa"});
      if (!k.contains("tip_cm") || !k.contains("pressure_kpa")) {
        throw ValidationError("schedule knots need tip_cm and pressure_kpa");
      }
      double tip = 0.0, p = 0.0;
      read_non_negative(k, "pressure_schedule", "tip_cm", units::cm, tip);
      read_non_negative(k, "pressure_schedule", "pressure_kpa", units::kPa, p);
      knots.emplace_back(tip, p);
    }
    s.pressure = PressureSchedule::piecewise_linear(std::move(knots));
  }

  if (doc.contains("device")) {
    const json& d = doc.at("device");
    if (d.is_boolean()) {
      if (d.get<bool>()) s.device = base.device;
    } else if (d.is_object()) {
      DeviceSpec dev = base.device;
      apply_device(d, dev, s.efficiency);
      s.device = dev;
    } else {
      throw ValidationError("scenario.device must be a boolean or an object");
    }
  }
  if (doc.contains("efficiency")) {
    read_non_negative(doc, "scenario", "efficiency", 1.0, s.efficiency);
  }
  if (doc.contains("motor_rpm")) {
    double w = 0.0;
    read_non_negative(doc, "scenario", "motor_rpm", units::rpm, w);
    s.motor_speed = w;
  }
  if (doc.contains("retraction_speed_cm_s")) {
    double v = 0.0;
    read_positive(doc, "scenario", "retraction_speed_cm_s", units::cm, v);
    s.retraction_speed = v;
  }
  if (doc.contains("base_takeup")) {
    if (!doc.at("base_takeup").is_boolean()) {
      throw ValidationError("scenario.base_takeup must be a boolean");
    }
    s.base_takeup = doc.at("base_takeup").get<bool>();
  }
  s.validate();
  return out;
}

ScenarioDocument load_scenario(const std::filesystem::path& path, const Config& base) {
  return parse_scenario(read_file(path), base);
}

std::string config_to_json(const Config& c) {
  json body = {
      {"radius_cm", c.body.radius / units::cm},
      {"thickness_um", c.body.wall_thickness / units::um},
      {"e_mpa", c.body.youngs_modulus / units::MPa},
      {"g_mpa", c.body.shear_modulus / units::MPa},
      {"f_i_n", c.body.inversion_force},
  };
  json device = {
      {"torque_ncm", c.device.max_motor_torque / units::N_cm},
      {"roller_radius_cm", c.device.roller_radius / units::cm},
      {"rpm_max", c.device.motor_speed_max / units::rpm},
      {"tip_ring_diameter_cm",
       2.0 * std::sqrt(c.device.tip_ring_area / std::numbers::pi) / units::cm},
      {"routing_aperture_cm2", c.device.routing_aperture_area / units::cm2},
      {"c1_ncm2", c.device.aperture_c1 / units::N_cm2},
      {"c2_n", c.device.aperture_c2},
      {"efficiency", c.efficiency},
  };
  if (c.device.static_friction) device["static_friction"] = *c.device.static_friction;
  if (c.device.roller_normal_force) device["normal_force_n"] = *c.device.roller_normal_force;
  json doc = {{"body", body}, {"device", device}, {"defaults", json::parse(c.defaults_json)}};
  return doc.dump(2);
}

}  // namespace vine
