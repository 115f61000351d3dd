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

#include <iostream>

#include <CLI11.hpp>

#include "opcalc/commands.hpp"

using namespace opcalc;

int main(int argc, char** argv) {
    CLI::App app{"algebraic carrier-parameter estimation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    CommandOptions opt;
    std::uint64_t seed = 0;
    unsigned trials = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", opt.out_override, "output directory override");
        auto* s = sub->add_option("--seed", seed, "master seed override");
        auto* t = sub->add_option("--trials", trials, "trials-per-cell override");
        sub->add_flag("--quiet", opt.quiet, "suppress progress output");
        sub->add_flag("--serial", opt.serial, "disable the OpenMP paths");
        sub->parse_complete_callback([&, s, t]() {
            if (s->count()) opt.seed_override = seed;
            if (t->count()) opt.trials_override = trials;
        });
    };

    CLI::App* derive = app.add_subcommand(
        "derive", "identifiability analysis and estimator compilation");
    CLI::App* simulate = app.add_subcommand("simulate", "write a carrier-plus-noise CSV");
    CLI::App* estimate = app.add_subcommand("estimate", "run an estimator over a signal CSV");
    CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo scaling-law sweep");
    CLI::App* demod = app.add_subcommand("demod", "symbol demodulation / SER experiment");
    for (CLI::App* sub : {derive, simulate, estimate, sweep, demod}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    auto loaded = load_config(config_path);
    if (std::holds_alternative<ConfigError>(loaded)) {
        std::cerr << "error: " << std::get<ConfigError>(loaded).message << "\n";
        return kExitInput;
    }
    const RunConfig& cfg = std::get<RunConfig>(loaded);

    try {
        if (derive->parsed()) return cmd_derive(cfg, opt, std::cout);
        if (simulate->parsed()) return cmd_simulate(cfg, opt, std::cout);
        if (estimate->parsed()) return cmd_estimate(cfg, opt, std::cout);
        if (sweep->parsed()) return cmd_sweep(cfg, opt, std::cout);
        if (demod->parsed()) return cmd_demod(cfg, opt, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
