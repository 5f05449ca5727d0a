#pragma once

// JSON documents at the CLI boundary. Everything in them is in presentation
// units (cm, um, MPa, kPa, N·cm, RPM) and is converted to SI here.
//
// Config:
//   {
//     "body":   {"radius_cm", "thickness_um", "e_mpa", "g_mpa", "f_i_n"},
//     "device": {"torque_ncm", "roller_radius_cm", "rpm_max",
//                "tip_ring_diameter_cm", "routing_aperture_cm2",
//                "c1_ncm2", "c2_n", "efficiency",
//                "static_friction", "normal_force_n"},
//     "defaults": {...}            // free-form, echoed back, not interpreted
//   }
// Every field is optional; missing ones keep the built-in defaults. Present
// numeric fields must be > 0 (efficiency in (0, 1]).
//
// Scenario:
//   {
//     "direction": "retract" | "grow",          // default "retract"
//     "initial_length_cm": 100,
//     "target_length_cm": 300,                  // grow only
//     "kappa_per_m": 0,
//     "pressure_kpa": 2,                        // or:
//     "pressure_schedule": [{"tip_cm": 0, "pressure_kpa": 2}, ...],
//     "device": false | true | {device fields},
//     "efficiency": 1.0,
//     "step_cm": 1,
//     "motor_rpm": 33,
//     "retraction_speed_cm_s": 2,               // tip speed without a device
//     "base_takeup": true,
//     "body": {body fields}
//   }

#include <filesystem>
#include <string>
#include <string_view>

#include "vine/device.hpp"
#include "vine/model.hpp"
#include "vine/sim.hpp"

namespace vine {

struct Config {
  BodySpec body;
  DeviceSpec device;
  double efficiency = 1.0;
  std::string defaults_json = "{}";  // echo of the free-form "defaults" section
};

enum class EpisodeDirection { Retract, Grow };

struct ScenarioDocument {
  Scenario scenario;
  EpisodeDirection direction = EpisodeDirection::Retract;
};

/// Throws ValidationError on malformed JSON, unknown keys, or bad values.
Config parse_config(std::string_view json_text);
Config load_config(const std::filesystem::path& path);

ScenarioDocument parse_scenario(std::string_view json_text, const Config& base);
ScenarioDocument load_scenario(const std::filesystem::path& path, const Config& base);

/// Config back in presentation units, as a JSON document.
std::string config_to_json(const Config& config);

}  // namespace vine
