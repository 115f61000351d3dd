/*
   Copyright 2026 The opcalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPCALC_CONFIG_HPP
#define OPCALC_CONFIG_HPP

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "opcalc/noise.hpp"
#include "opcalc/sweep.hpp"

namespace opcalc {

/// Parsed and schema-checked run configuration.  Unknown keys anywhere are
/// an error; so is a section missing for the requested command.
struct RunConfig {
    nlohmann::json echo;  // the validated document, re-emitted into artifacts

    // model
    CarrierSpec carrier;
    std::string model_type;

    // estimator
    std::string estimator_id;
    std::vector<double> premultiply;  // optional polynomial in s, ascending
    std::string plan_file;

    // grid
    std::uint64_t nbar = 0;
    double window = 0.0;

    // noise
    NoiseSpec noise;

    // numerics
    QuadRule rule = QuadRule::Simpson;
    double eps_div = 1e-8;

    // experiment
    std::uint64_t seed = 1;
    unsigned trials = 1;
    struct SweepSection {
        std::string variable;  // "omega" | "nbar" | "amplitude"
        std::vector<double> values;
        std::string amplitude_rule = "fixed";  // fixed | sqrt | linear
        double amplitude_base = 1.0;
        std::string grid_rule = "fixed";  // fixed | resolve
        double samples_per_cycle = 80.0;
        std::string fit_metric = "mean_err";  // mean_err | std_err
    };
    std::optional<SweepSection> sweep;
    struct SerSection {
        std::vector<double> constellation;
        std::uint64_t symbols = 10000;
        double snr_db = -20.0;
        std::vector<std::uint64_t> nbar_values;
    };
    std::optional<SerSection> ser;
    struct DemodSection {
        std::vector<double> constellation;
        std::uint64_t samples_per_symbol = 0;
    };
    std::optional<DemodSection> demod;

    // io
    std::string input;          // signal CSV for estimate / file demod
    std::string out_dir = ".";
    std::string prefix = "run";

    bool has_model = false, has_estimator = false, has_grid = false;
};

struct ConfigError {
    std::string message;  // includes line/column for parse errors
};

/// Load + validate.  Returns the config or a diagnostic.
std::variant<RunConfig, ConfigError> load_config(const std::string& path);

/// Validate an already-parsed document (exposed for tests).
std::variant<RunConfig, ConfigError> validate_config(const nlohmann::json& doc);

}  // namespace opcalc

#endif
