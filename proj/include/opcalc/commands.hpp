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

#ifndef OPCALC_COMMANDS_HPP
#define OPCALC_COMMANDS_HPP

#include <iosfwd>
#include <optional>

#include "opcalc/config.hpp"
#include "opcalc/models.hpp"

namespace opcalc {

// exit codes shared by every subcommand
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;          // malformed config or I/O
inline constexpr int kExitNotIdentifiable = 2;
inline constexpr int kExitDegenerate = 3;     // guard-dominated numerics

struct CommandOptions {
    std::string out_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<unsigned> trials_override;
    bool quiet = false;
    bool serial = false;  // disable the OpenMP paths
};

/// Model/estimator sections resolved into a runnable EstimatorModel.
EstimatorModel model_from_config(const RunConfig& cfg);

int cmd_derive(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_estimate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_demod(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);

}  // namespace opcalc

#endif
