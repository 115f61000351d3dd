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

#include "opcalc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace opcalc {

namespace {

using nlohmann::json;

struct Check {
    std::string error;
    bool ok() const { return error.empty(); }
};

Check fail(const std::string& msg) { return {msg}; }

Check known_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) return fail("unknown key \"" + key + "\" in " + where);
    return {};
}

bool get_num(const json& j, double& out) {
    if (!j.is_number()) return false;
    out = j.get<double>();
    return true;
}

Check parse_tone(const json& j, const std::string& where, Tone& tone) {
    if (!j.is_object()) return fail(where + " must be an object");
    if (auto c = known_keys(j, where, {"amplitude", "omega", "phase"}); !c.ok()) return c;
    if (!j.contains("omega") || !get_num(j.at("omega"), tone.omega) || tone.omega <= 0.0)
        return fail(where + ".omega must be a positive number");
    if (j.contains("amplitude") && !get_num(j.at("amplitude"), tone.amplitude))
        return fail(where + ".amplitude must be a number");
    if (j.contains("phase") && !get_num(j.at("phase"), tone.phase))
        return fail(where + ".phase must be a number");
    return {};
}

Check parse_noise_tone(const json& j, const std::string& where, NoiseTone& tone) {
    if (!j.is_object()) return fail(where + " must be an object");
    if (auto c = known_keys(j, where, {"amplitude", "omega", "phase"}); !c.ok()) return c;
    if (!j.contains("omega") || !get_num(j.at("omega"), tone.omega) || tone.omega <= 0.0)
        return fail(where + ".omega must be a positive number");
    if (j.contains("amplitude") && !get_num(j.at("amplitude"), tone.amplitude))
        return fail(where + ".amplitude must be a number");
    if (j.contains("phase")) {
        if (j.at("phase").is_string()) {
            if (j.at("phase").get<std::string>() != "random")
                return fail(where + ".phase must be a number or \"random\"");
            tone.random_phase = true;
        } else if (!get_num(j.at("phase"), tone.phase)) {
            return fail(where + ".phase must be a number or \"random\"");
        }
    }
    return {};
}

Check parse_model(const json& j, RunConfig& cfg) {
    if (!j.is_object()) return fail("model must be an object");
    if (auto c = known_keys(j, "model", {"type", "tones", "omega", "numerator", "denominator"});
        !c.ok())
        return c;
    if (!j.contains("type") || !j.at("type").is_string())
        return fail("model.type must be a string");
    cfg.model_type = j.at("type").get<std::string>();
    if (cfg.model_type == "trig") {
        if (!j.contains("tones") || !j.at("tones").is_array() || j.at("tones").empty())
            return fail("model.tones must be a nonempty array");
        for (const auto& t : j.at("tones")) {
            Tone tone;
            if (auto c = parse_tone(t, "model.tones[]", tone); !c.ok()) return c;
            cfg.carrier.tones.push_back(tone);
        }
        cfg.carrier.kind = CarrierSpec::Kind::TrigSum;
    } else if (cfg.model_type == "sinc" || cfg.model_type == "raised_cosine") {
        if (!j.contains("omega") || !get_num(j.at("omega"), cfg.carrier.omega) ||
            cfg.carrier.omega <= 0.0)
            return fail("model.omega must be a positive number");
        cfg.carrier.kind = cfg.model_type == "sinc" ? CarrierSpec::Kind::Sinc
                                                    : CarrierSpec::Kind::RaisedCosine;
    } else if (cfg.model_type == "rational") {
        if (!j.contains("numerator") || !j.at("numerator").is_array() ||
            !j.contains("denominator") || !j.at("denominator").is_array())
            return fail("rational model needs numerator and denominator arrays");
        for (const auto& v : j.at("numerator")) {
            double x;
            if (!get_num(v, x)) return fail("model.numerator entries must be numbers");
            cfg.carrier.num_coeffs.push_back(x);
        }
        for (const auto& v : j.at("denominator")) {
            double x;
            if (!get_num(v, x)) return fail("model.denominator entries must be numbers");
            cfg.carrier.den_coeffs.push_back(x);
        }
        cfg.carrier.kind = CarrierSpec::Kind::RationalSpectrum;
    } else {
        return fail("model.type must be trig, sinc, raised_cosine or rational");
    }
    cfg.has_model = true;
    return {};
}

Check parse_estimator(const json& j, RunConfig& cfg) {
    if (!j.is_object()) return fail("estimator must be an object");
    if (auto c = known_keys(j, "estimator", {"id", "premultiply", "plan_file"}); !c.ok())
        return c;
    if (!j.contains("id") || !j.at("id").is_string())
        return fail("estimator.id must be a string");
    cfg.estimator_id = j.at("id").get<std::string>();
    static const std::set<std::string> ids = {"amplitude", "phase", "frequency", "rational"};
    if (!ids.count(cfg.estimator_id))
        return fail("estimator.id must be amplitude, phase, frequency or rational");
    if (j.contains("premultiply")) {
        if (!j.at("premultiply").is_array())
            return fail("estimator.premultiply must be an array of coefficients");
        for (const auto& v : j.at("premultiply")) {
            double x;
            if (!get_num(v, x)) return fail("estimator.premultiply entries must be numbers");
            cfg.premultiply.push_back(x);
        }
    }
    if (j.contains("plan_file")) {
        if (!j.at("plan_file").is_string()) return fail("estimator.plan_file must be a string");
        cfg.plan_file = j.at("plan_file").get<std::string>();
    }
    cfg.has_estimator = true;
    return {};
}

Check parse_grid(const json& j, RunConfig& cfg) {
    if (!j.is_object()) return fail("grid must be an object");
    if (auto c = known_keys(j, "grid", {"nbar", "window"}); !c.ok()) return c;
    if (!j.contains("nbar") || !j.at("nbar").is_number_unsigned() ||
        j.at("nbar").get<std::uint64_t>() < 2)
        return fail("grid.nbar must be an integer >= 2");
    cfg.nbar = j.at("nbar").get<std::uint64_t>();
    if (!j.contains("window") || !get_num(j.at("window"), cfg.window) || cfg.window <= 0.0)
        return fail("grid.window must be a positive number");
    cfg.has_grid = true;
    return {};
}

Check parse_noise(const json& j, RunConfig& cfg) {
    if (!j.is_object()) return fail("noise must be an object");
    if (auto c = known_keys(j, "noise", {"type", "amplitude", "dist", "rho", "tones"}); !c.ok())
        return c;
    std::string type = j.value("type", "none");
    if (type == "none") {
        cfg.noise.kind = NoiseSpec::Kind::None;
    } else if (type == "white" || type == "correlated") {
        cfg.noise.kind =
            type == "white" ? NoiseSpec::Kind::White : NoiseSpec::Kind::Correlated;
        if (j.contains("amplitude") && !get_num(j.at("amplitude"), cfg.noise.amplitude))
            return fail("noise.amplitude must be a number");
        if (cfg.noise.amplitude < 0.0) return fail("noise.amplitude must be >= 0");
        std::string dist = j.value("dist", "gaussian");
        if (dist == "gaussian") cfg.noise.dist = NoiseSpec::Dist::Gaussian;
        else if (dist == "rademacher") cfg.noise.dist = NoiseSpec::Dist::Rademacher;
        else if (dist == "uniform") cfg.noise.dist = NoiseSpec::Dist::Uniform;
        else return fail("noise.dist must be gaussian, rademacher or uniform");
        if (type == "correlated") {
            if (!j.contains("rho") || !get_num(j.at("rho"), cfg.noise.rho) ||
                cfg.noise.rho <= -1.0 || cfg.noise.rho >= 1.0)
                return fail("noise.rho must lie in (-1, 1)");
        }
    } else if (type == "sinusoid") {
        cfg.noise.kind = NoiseSpec::Kind::SinusoidSum;
        if (!j.contains("tones") || !j.at("tones").is_array() || j.at("tones").empty())
            return fail("sinusoid noise needs a nonempty tones array");
        for (const auto& t : j.at("tones")) {
            NoiseTone tone;
            if (auto c = parse_noise_tone(t, "noise.tones[]", tone); !c.ok()) return c;
            cfg.noise.tones.push_back(tone);
        }
    } else {
        return fail("noise.type must be none, white, correlated or sinusoid");
    }
    return {};
}

Check parse_numerics(const json& j, RunConfig& cfg) {
    if (!j.is_object()) return fail("numerics must be an object");
    if (auto c = known_keys(j, "numerics", {"quadrature", "eps_div"}); !c.ok()) return c;
    std::string q = j.value("quadrature", "simpson");
    if (q == "simpson") cfg.rule = QuadRule::Simpson;
    else if (q == "trapezoid") cfg.rule = QuadRule::Trapezoid;
    else return fail("numerics.quadrature must be simpson or trapezoid");
    if (j.contains("eps_div")) {
        if (!get_num(j.at("eps_div"), cfg.eps_div) || cfg.eps_div <= 0.0)
            return fail("numerics.eps_div must be a positive number");
    }
    return {};
}

Check parse_experiment(const json& j, RunConfig& cfg) {
    if (!j.is_object()) return fail("experiment must be an object");
    if (auto c = known_keys(j, "experiment", {"seed", "trials", "sweep", "ser", "demod"});
        !c.ok())
        return c;
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) return fail("experiment.seed must be unsigned");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("trials")) {
        if (!j.at("trials").is_number_unsigned() || j.at("trials").get<std::uint64_t>() < 1)
            return fail("experiment.trials must be a positive integer");
        cfg.trials = static_cast<unsigned>(j.at("trials").get<std::uint64_t>());
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (auto c = known_keys(s, "experiment.sweep",
                                {"variable", "values", "amplitude_rule", "amplitude_base",
                                 "grid_rule", "samples_per_cycle", "fit_metric"});
            !c.ok())
            return c;
        RunConfig::SweepSection sw;
        if (!s.contains("variable") || !s.at("variable").is_string())
            return fail("sweep.variable must be a string");
        sw.variable = s.at("variable").get<std::string>();
        if (sw.variable != "omega" && sw.variable != "nbar" && sw.variable != "amplitude")
            return fail("sweep.variable must be omega, nbar or amplitude");
        if (!s.contains("values") || !s.at("values").is_array() || s.at("values").size() < 2)
            return fail("sweep.values must list at least 2 cells");
        for (const auto& v : s.at("values")) {
            double x;
            if (!get_num(v, x) || x <= 0.0) return fail("sweep.values must be positive numbers");
            sw.values.push_back(x);
        }
        sw.amplitude_rule = s.value("amplitude_rule", "fixed");
        if (sw.amplitude_rule != "fixed" && sw.amplitude_rule != "sqrt" &&
            sw.amplitude_rule != "linear")
            return fail("sweep.amplitude_rule must be fixed, sqrt or linear");
        if (s.contains("amplitude_base") && !get_num(s.at("amplitude_base"), sw.amplitude_base))
            return fail("sweep.amplitude_base must be a number");
        sw.grid_rule = s.value("grid_rule", "fixed");
        if (sw.grid_rule != "fixed" && sw.grid_rule != "resolve")
            return fail("sweep.grid_rule must be fixed or resolve");
        if (s.contains("samples_per_cycle") &&
            (!get_num(s.at("samples_per_cycle"), sw.samples_per_cycle) ||
             sw.samples_per_cycle < 4.0))
            return fail("sweep.samples_per_cycle must be a number >= 4");
        sw.fit_metric = s.value("fit_metric", "mean_err");
        if (sw.fit_metric != "mean_err" && sw.fit_metric != "std_err")
            return fail("sweep.fit_metric must be mean_err or std_err");
        cfg.sweep = sw;
    }
    if (j.contains("ser")) {
        const json& s = j.at("ser");
        if (auto c = known_keys(s, "experiment.ser",
                                {"constellation", "symbols", "snr_db", "nbar_values"});
            !c.ok())
            return c;
        RunConfig::SerSection ser;
        if (!s.contains("constellation") || !s.at("constellation").is_array() ||
            s.at("constellation").size() < 2)
            return fail("ser.constellation needs at least 2 points");
        for (const auto& v : s.at("constellation")) {
            double x;
            if (!get_num(v, x)) return fail("ser.constellation entries must be numbers");
            ser.constellation.push_back(x);
        }
        if (s.contains("symbols")) {
            if (!s.at("symbols").is_number_unsigned() ||
                s.at("symbols").get<std::uint64_t>() < 1)
                return fail("ser.symbols must be a positive integer");
            ser.symbols = s.at("symbols").get<std::uint64_t>();
        }
        if (s.contains("snr_db") && !get_num(s.at("snr_db"), ser.snr_db))
            return fail("ser.snr_db must be a number");
        if (!s.contains("nbar_values") || !s.at("nbar_values").is_array() ||
            s.at("nbar_values").empty())
            return fail("ser.nbar_values must be a nonempty array");
        for (const auto& v : s.at("nbar_values")) {
            if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 2)
                return fail("ser.nbar_values must be integers >= 2");
            ser.nbar_values.push_back(v.get<std::uint64_t>());
        }
        cfg.ser = ser;
    }
    if (j.contains("demod")) {
        const json& s = j.at("demod");
        if (auto c = known_keys(s, "experiment.demod", {"constellation", "samples_per_symbol"});
            !c.ok())
            return c;
        RunConfig::DemodSection dm;
        if (!s.contains("constellation") || !s.at("constellation").is_array() ||
            s.at("constellation").empty())
            return fail("demod.constellation must be a nonempty array");
        for (const auto& v : s.at("constellation")) {
            double x;
            if (!get_num(v, x)) return fail("demod.constellation entries must be numbers");
            dm.constellation.push_back(x);
        }
        if (!s.contains("samples_per_symbol") || !s.at("samples_per_symbol").is_number_unsigned() ||
            s.at("samples_per_symbol").get<std::uint64_t>() < 3)
            return fail("demod.samples_per_symbol must be an integer >= 3");
        dm.samples_per_symbol = s.at("samples_per_symbol").get<std::uint64_t>();
        cfg.demod = dm;
    }
    return {};
}

Check parse_output(const json& j, RunConfig& cfg) {
    if (!j.is_object()) return fail("output must be an object");
    if (auto c = known_keys(j, "output", {"dir", "prefix"}); !c.ok()) return c;
    if (j.contains("dir")) {
        if (!j.at("dir").is_string()) return fail("output.dir must be a string");
        cfg.out_dir = j.at("dir").get<std::string>();
    }
    if (j.contains("prefix")) {
        if (!j.at("prefix").is_string()) return fail("output.prefix must be a string");
        cfg.prefix = j.at("prefix").get<std::string>();
    }
    return {};
}

}  // namespace

std::variant<RunConfig, ConfigError> validate_config(const json& doc) {
    if (!doc.is_object()) return ConfigError{"top-level config must be a JSON object"};
    if (auto c = known_keys(doc, "config",
                            {"model", "estimator", "grid", "noise", "numerics", "experiment",
                             "input", "output"});
        !c.ok())
        return ConfigError{c.error};

    RunConfig cfg;
    cfg.echo = doc;
    if (doc.contains("model"))
        if (auto c = parse_model(doc.at("model"), cfg); !c.ok()) return ConfigError{c.error};
    if (doc.contains("estimator"))
        if (auto c = parse_estimator(doc.at("estimator"), cfg); !c.ok())
            return ConfigError{c.error};
    if (doc.contains("grid"))
        if (auto c = parse_grid(doc.at("grid"), cfg); !c.ok()) return ConfigError{c.error};
    if (doc.contains("noise"))
        if (auto c = parse_noise(doc.at("noise"), cfg); !c.ok()) return ConfigError{c.error};
    if (doc.contains("numerics"))
        if (auto c = parse_numerics(doc.at("numerics"), cfg); !c.ok())
            return ConfigError{c.error};
    if (doc.contains("experiment"))
        if (auto c = parse_experiment(doc.at("experiment"), cfg); !c.ok())
            return ConfigError{c.error};
    if (doc.contains("input")) {
        if (!doc.at("input").is_string()) return ConfigError{"input must be a string path"};
        cfg.input = doc.at("input").get<std::string>();
    }
    if (doc.contains("output"))
        if (auto c = parse_output(doc.at("output"), cfg); !c.ok()) return ConfigError{c.error};
    return cfg;
}

std::variant<RunConfig, ConfigError> load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) return ConfigError{"cannot open config file " + path};
    std::stringstream buf;
    buf << is.rdbuf();
    std::string text = buf.str();
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into a line/column diagnostic
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << "JSON parse error at line " << line << ", column " << col << ": " << e.what();
        return ConfigError{os.str()};
    }
    return validate_config(doc);
}

}  // namespace opcalc
