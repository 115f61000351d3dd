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

#include "opcalc/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "opcalc/runtime.hpp"

namespace opcalc {

namespace {

using nlohmann::json;

struct Resolved {
    std::string out_dir;
    std::string prefix;
    std::uint64_t seed;
    unsigned trials;
    bool parallel;
};

Resolved resolve(const RunConfig& cfg, const CommandOptions& opt) {
    Resolved r;
    r.out_dir = opt.out_override.empty() ? cfg.out_dir : opt.out_override;
    r.prefix = cfg.prefix;
    r.seed = opt.seed_override.value_or(cfg.seed);
    r.trials = opt.trials_override.value_or(cfg.trials);
    r.parallel = !opt.serial;
    std::filesystem::create_directories(r.out_dir);
    return r;
}

std::string artifact_path(const Resolved& r, const std::string& suffix) {
    return (std::filesystem::path(r.out_dir) / (r.prefix + suffix)).string();
}

std::vector<std::string> csv_preamble(const RunConfig& cfg, std::uint64_t seed) {
    return {"config: " + cfg.echo.dump(), "seed: " + std::to_string(seed)};
}

json envelope(const RunConfig& cfg, std::uint64_t seed) {
    json j;
    j["config"] = cfg.echo;
    j["seed"] = seed;
    return j;
}

const Tone& single_tone(const RunConfig& cfg) {
    if (cfg.carrier.kind != CarrierSpec::Kind::TrigSum || cfg.carrier.tones.size() != 1)
        throw std::invalid_argument("this estimator expects a single-tone trig model");
    return cfg.carrier.tones[0];
}

EstimatorPlan load_plan_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open plan file " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    json doc = json::parse(buf.str());
    if (doc.contains("plan")) return EstimatorPlan::from_json(doc.at("plan").dump());
    return EstimatorPlan::from_json(doc.dump());
}

}  // namespace

EstimatorModel model_from_config(const RunConfig& cfg) {
    if (!cfg.has_model || !cfg.has_estimator)
        throw std::invalid_argument("model and estimator sections are required");
    if (cfg.estimator_id == "amplitude") {
        const Tone& t = single_tone(cfg);
        if (t.phase != 0.0)
            throw std::invalid_argument("the amplitude estimator assumes zero carrier phase");
        return make_amplitude_model(t.omega, t.amplitude);
    }
    if (cfg.estimator_id == "phase") {
        const Tone& t = single_tone(cfg);
        return make_phase_model(t.omega, t.amplitude, t.phase);
    }
    if (cfg.estimator_id == "frequency") {
        const Tone& t = single_tone(cfg);
        return make_frequency_model(t.omega, t.amplitude, t.phase);
    }
    if (cfg.carrier.kind != CarrierSpec::Kind::RationalSpectrum)
        throw std::invalid_argument("the rational estimator expects a rational model");
    return make_rational_model(cfg.carrier.num_coeffs, cfg.carrier.den_coeffs);
}

// ------------------------------------------------------------------ derive

namespace {

// divisor certification in the time domain: exact polynomial determinant
// when the A side is unit-only, numeric spot checks on the carrier otherwise
struct DivisorCert {
    bool exact = false;
    bool nonzero = false;
    std::string text;
};

using TPoly = std::map<unsigned, BigRat>;  // power of t -> coefficient

TPoly tpoly_mul(const TPoly& a, const TPoly& b) {
    TPoly out;
    for (const auto& [pa, ca] : a)
        for (const auto& [pb, cb] : b) {
            BigRat& slot = out[pa + pb];
            slot += ca * cb;
            if (slot == 0) out.erase(pa + pb);
        }
    return out;
}

TPoly tpoly_sub(TPoly a, const TPoly& b) {
    for (const auto& [p, c] : b) {
        BigRat& slot = a[p];
        slot -= c;
        if (slot == 0) a.erase(p);
    }
    return a;
}

TPoly tpoly_det(const std::vector<std::vector<TPoly>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    TPoly acc;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<TPoly>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<TPoly> row;
            for (std::size_t cc = 0; cc < n; ++cc)
                if (cc != c) row.push_back(m[r][cc]);
            minor.push_back(std::move(row));
        }
        TPoly term = tpoly_mul(m[0][c], tpoly_det(minor));
        acc = (c % 2 == 0) ? tpoly_sub(std::move(term), tpoly_sub(TPoly{}, acc))
                           : tpoly_sub(std::move(acc), term);
    }
    return acc;
}

BigRat fact_rat(unsigned n) {
    BigRat acc(1);
    for (unsigned i = 2; i <= n; ++i) acc *= BigRat(static_cast<long>(i));
    return acc;
}

DivisorCert certify_divisor(const EstimatorModel& model, const RunConfig& cfg) {
    DivisorCert cert;
    const EstimatorPlan& plan = model.plan;
    bool unit_only = true;
    for (const auto& row : plan.A)
        for (const auto& f : row)
            for (const auto& a : f.atoms)
                if (a.src != IntegralAtom::Source::Unit) unit_only = false;

    if (unit_only) {
        const unsigned rho = plan.arity();
        std::vector<std::vector<TPoly>> m(rho, std::vector<TPoly>(rho));
        for (unsigned r = 0; r < rho; ++r)
            for (unsigned i = 0; i < rho; ++i)
                for (const auto& a : plan.A[r][i].atoms)
                    m[r][i][a.k - 1] += a.c / fact_rat(a.k - 1);
        TPoly det = tpoly_det(m);
        cert.exact = true;
        cert.nonzero = !det.empty();
        std::ostringstream os;
        if (det.empty()) {
            os << "0";
        } else {
            bool first = true;
            for (auto it = det.rbegin(); it != det.rend(); ++it) {
                if (!first) os << " + ";
                os << rat_to_string(it->second) << "*t^" << it->first;
                first = false;
            }
        }
        cert.text = "divisor det A(t) = " + os.str() + " (exact)";
        return cert;
    }

    // measured atoms: evaluate the divisor on the model carrier
    std::uint64_t nbar = cfg.has_grid ? std::min<std::uint64_t>(cfg.nbar, 4000) : 2000;
    if (nbar % 2 == 1) ++nbar;
    double window = cfg.has_grid ? cfg.window : 1.0;
    SampledSignal x = carrier_sample(model.carrier, Grid::over(window, nbar));
    double best = 0.0;
    std::ostringstream os;
    os << "divisor det A(t) on the model carrier:";
    for (double frac : {0.5, 0.75, 1.0}) {
        std::size_t idx = static_cast<std::size_t>(frac * static_cast<double>(nbar));
        if (idx % 2 == 1) ++idx;
        double t = x.grid.time_at(idx);
        EstimateResult res = evaluate_plan(plan, x, t, {cfg.rule, cfg.eps_div});
        os << "  t=" << t << ": " << res.divisor;
        best = std::max(best, std::abs(res.divisor));
    }
    cert.exact = false;
    cert.nonzero = best > 0.0;
    cert.text = os.str() + (cert.nonzero ? "  (nonzero, probabilistic)" : "  (vanishes!)");
    return cert;
}

std::string coefficient_form_table(const CoefficientForm& cf) {
    std::ostringstream os;
    os << "signal terms (a, mu, nu):\n";
    for (const auto& t : cf.sig)
        os << "  (" << t.a.to_string() << ", " << t.mu << ", " << t.nu << ")\n";
    os << "forcing terms (b, kappa):\n";
    for (const auto& t : cf.force)
        os << "  (" << t.b.to_string() << ", " << t.kappa << ")\n";
    os << "N+1 = " << cf.n_sig() << ", M = " << cf.n_force() << "\n";
    return os.str();
}

}  // namespace

int cmd_derive(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    Resolved r = resolve(cfg, opt);
    EstimatorModel model = model_from_config(cfg);

    MinimalEquation analysis = model.equation;
    if (!cfg.premultiply.empty()) {
        std::vector<ParamScalar> c;
        for (double v : cfg.premultiply) c.push_back(ParamScalar(rat_from_double(v)));
        analysis = premultiply(analysis, SPoly(std::move(c)));
    }
    CoefficientForm cf = to_coefficient_form(analysis);
    IdentReport report = is_projectively_identifiable(cf, model.module, {.seed = r.seed});

    DivisorCert cert = certify_divisor(model, cfg);

    if (!opt.quiet) {
        out << "operational relation: " << model.relation.to_string() << "\n";
        out << "analysis equation:    " << analysis.to_string() << "\n\n";
        out << coefficient_form_table(cf) << "\n";
        out << "rank " << report.rank << " of expected " << report.expected_rank
            << (report.identifiable ? "  -> identifiable" : "  -> NOT identifiable")
            << " (normalization column " << report.normalization_index << ")\n\n";
        out << "compiled plan for parameters:";
        for (const auto& p : model.plan.params) out << " " << p;
        out << "\n" << model.plan.atom_table() << "\n";
        out << cert.text << "\n";
    }

    json ident = envelope(cfg, r.seed);
    ident["report"] = json::parse(report.to_json());
    ident["divisor_certificate"] = {
        {"exact", cert.exact}, {"nonzero", cert.nonzero}, {"text", cert.text}};
    atomic_write_text(artifact_path(r, "_identifiability.json"), ident.dump(2) + "\n");

    json planj = envelope(cfg, r.seed);
    planj["plan"] = json::parse(model.plan.to_json());
    atomic_write_text(artifact_path(r, "_plan.json"), planj.dump(2) + "\n");

    return report.identifiable ? kExitOk : kExitNotIdentifiable;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    Resolved r = resolve(cfg, opt);
    if (!cfg.has_model || !cfg.has_grid)
        throw std::invalid_argument("simulate needs model and grid sections");
    Grid grid = Grid::over(cfg.window, cfg.nbar);
    SampledSignal clean = carrier_sample(cfg.carrier, grid);
    SampledSignal noise = gen_noise(cfg.noise, grid, {r.seed, 0, 0});

    std::vector<std::vector<double>> rows(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        rows[i] = {grid.time_at(i), clean.values[i], noise.values[i],
                   clean.values[i] + noise.values[i]};
    write_table_csv(artifact_path(r, "_signal.csv"), {"t", "signal", "noise", "value"}, rows,
                    csv_preamble(cfg, r.seed));
    if (!opt.quiet)
        out << "wrote " << grid.count << " samples, snr " << snr_db(clean, noise) << " dB\n";
    return kExitOk;
}

// ---------------------------------------------------------------- estimate

int cmd_estimate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    Resolved r = resolve(cfg, opt);
    if (cfg.input.empty()) throw std::invalid_argument("estimate needs an input signal CSV");
    if (!cfg.has_grid) throw std::invalid_argument("estimate needs the grid section");

    EstimatorPlan plan;
    std::vector<std::string> names;
    if (!cfg.plan_file.empty()) {
        plan = load_plan_file(cfg.plan_file);
    } else {
        plan = model_from_config(cfg).plan;
    }

    SampledSignal x = read_signal_csv(cfg.input);
    EstimateResult res = evaluate_plan(plan, x, cfg.window, {cfg.rule, cfg.eps_div});

    json j = envelope(cfg, r.seed);
    j["window"] = res.window;
    j["divisor"] = res.divisor;
    j["divisor_reference"] = res.divisor_ref;
    j["guard_ok"] = res.guard_ok;
    if (!res.guard_ok) j["diagnostic"] = res.diagnostic;
    json est = json::object();
    for (std::size_t i = 0; i < res.estimates.size(); ++i)
        est[plan.params[i]] = res.estimates[i];
    j["estimates"] = est;
    atomic_write_text(artifact_path(r, "_estimate.json"), j.dump(2) + "\n");

    if (!opt.quiet) {
        if (res.guard_ok) {
            out << "estimates:";
            for (std::size_t i = 0; i < res.estimates.size(); ++i)
                out << " " << plan.params[i] << "=" << res.estimates[i];
            out << "  (divisor " << res.divisor << ")\n";
        } else {
            out << "no estimate: " << res.diagnostic << "\n";
        }
    }
    return res.guard_ok ? kExitOk : kExitDegenerate;
}

// ------------------------------------------------------------------- sweep

namespace {

std::uint64_t even_up(std::uint64_t n) { return n % 2 == 0 ? n : n + 1; }

double apply_amp_rule(const std::string& rule, double base, double v) {
    if (rule == "sqrt") return base * std::sqrt(v);
    if (rule == "linear") return base * v;
    return base;
}

SweepConfig sweep_from_config(const RunConfig& cfg, const Resolved& r,
                              const EstimatorModel& model) {
    const auto& sw = *cfg.sweep;
    SweepConfig sc;
    sc.plan = model.plan;
    sc.truth = model.truth;
    sc.carrier = model.carrier;
    sc.window = cfg.window;
    sc.rule = cfg.rule;
    sc.eps_div = cfg.eps_div;
    sc.trials = r.trials;
    sc.seed = r.seed;
    sc.parallel = r.parallel;
    sc.fit_metric = sw.fit_metric == "std_err" ? SweepConfig::Metric::StdErr
                                               : SweepConfig::Metric::MeanErr;

    for (double v : sw.values) {
        SweepCell cell;
        cell.swept = v;
        cell.nbar = cfg.nbar;
        cell.noise = cfg.noise;
        if (sw.variable == "omega") {
            if (cfg.noise.kind != NoiseSpec::Kind::SinusoidSum || cfg.noise.tones.size() != 1)
                throw std::invalid_argument(
                    "an omega sweep needs a single-tone sinusoid noise section");
            cell.noise.tones[0].omega = v;
            cell.noise.tones[0].amplitude =
                apply_amp_rule(sw.amplitude_rule, sw.amplitude_base, v);
            if (sw.grid_rule == "resolve") {
                double needed = sw.samples_per_cycle * v * cfg.window / (2.0 * M_PI);
                cell.nbar = even_up(std::max<std::uint64_t>(
                    cfg.nbar, static_cast<std::uint64_t>(std::ceil(needed))));
            }
        } else if (sw.variable == "nbar") {
            cell.nbar = static_cast<std::uint64_t>(v);
            if (cell.nbar < 2) throw std::invalid_argument("swept nbar must be >= 2");
            if (cfg.noise.kind != NoiseSpec::Kind::White &&
                cfg.noise.kind != NoiseSpec::Kind::Correlated)
                throw std::invalid_argument("an nbar sweep needs white or correlated noise");
            cell.noise.amplitude = apply_amp_rule(sw.amplitude_rule, sw.amplitude_base, v);
        } else {  // amplitude
            if (cfg.noise.kind == NoiseSpec::Kind::SinusoidSum) {
                if (cfg.noise.tones.size() != 1)
                    throw std::invalid_argument("amplitude sweep needs a single noise tone");
                cell.noise.tones[0].amplitude = v;
            } else if (cfg.noise.kind == NoiseSpec::Kind::White ||
                       cfg.noise.kind == NoiseSpec::Kind::Correlated) {
                cell.noise.amplitude = v;
            } else {
                throw std::invalid_argument("amplitude sweep needs a noise section");
            }
        }
        sc.cells.push_back(cell);
    }
    return sc;
}

json sweep_report_json(const SweepReport& rep, const RunConfig& cfg) {
    json j = json::object();
    j["seed"] = rep.seed;
    j["config"] = cfg.echo;
    j["degenerate"] = rep.degenerate;
    j["fit"] = {{"slope", rep.fit.slope},         {"intercept", rep.fit.intercept},
                {"stderr_slope", rep.fit.stderr_slope}, {"ci95", rep.fit.ci95},
                {"points", rep.fit.points},       {"valid", rep.fit.valid}};
    json rows = json::array();
    for (const auto& row : rep.rows)
        rows.push_back({{"swept", row.swept},
                        {"noise_amp", row.noise_amp},
                        {"nbar", row.nbar},
                        {"mean_err", row.mean_err},
                        {"std_err", row.std_err},
                        {"snr_db", row.mean_snr_db},
                        {"erasures", row.erasures},
                        {"trials", row.trials_run}});
    j["rows"] = rows;
    return j;
}

}  // namespace

int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    Resolved r = resolve(cfg, opt);
    if (!cfg.sweep) throw std::invalid_argument("sweep needs the experiment.sweep section");
    if (!cfg.has_grid) throw std::invalid_argument("sweep needs the grid section");
    EstimatorModel model = model_from_config(cfg);
    SweepConfig sc = sweep_from_config(cfg, r, model);
    SweepReport rep = run_sweep(sc);

    std::vector<std::vector<double>> rows;
    for (const auto& row : rep.rows)
        rows.push_back({row.swept, row.noise_amp, row.nbar, row.mean_err, row.std_err,
                        row.mean_snr_db, static_cast<double>(row.erasures),
                        static_cast<double>(row.trials_run)});
    write_table_csv(artifact_path(r, "_sweep.csv"),
                    {"swept", "noise_amp", "nbar", "mean_err", "std_err", "snr_db",
                     "erasures", "trials"},
                    rows, csv_preamble(cfg, r.seed));
    atomic_write_text(artifact_path(r, "_sweep_summary.json"),
                      sweep_report_json(rep, cfg).dump(2) + "\n");

    if (!opt.quiet) {
        out << "sweep over " << cfg.sweep->variable << ", " << rep.rows.size() << " cells x "
            << r.trials << " trials\n";
        if (rep.fit.valid)
            out << "log-log slope " << rep.fit.slope << " +- " << rep.fit.ci95 << "\n";
        if (rep.degenerate) out << "warning: a cell lost every trial to the divisor guard\n";
    }
    return rep.degenerate ? kExitDegenerate : kExitOk;
}

// ------------------------------------------------------------------- demod

int cmd_demod(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
    Resolved r = resolve(cfg, opt);

    if (cfg.ser) {
        if (!cfg.has_grid) throw std::invalid_argument("demod needs the grid section");
        EstimatorModel model = model_from_config(cfg);
        SerConfig sc;
        sc.plan = model.plan;
        sc.carrier = model.carrier;
        sc.window = cfg.window;
        sc.rule = cfg.rule;
        sc.eps_div = cfg.eps_div;
        sc.constellation = cfg.ser->constellation;
        sc.symbols = cfg.ser->symbols;
        sc.snr_target_db = cfg.ser->snr_db;
        sc.nbar_values = cfg.ser->nbar_values;
        sc.dist = cfg.noise.kind == NoiseSpec::Kind::White ? cfg.noise.dist
                                                           : NoiseSpec::Dist::Gaussian;
        sc.seed = r.seed;
        sc.parallel = r.parallel;
        SerReport rep = run_ser(sc);

        std::vector<std::vector<double>> rows;
        for (const auto& row : rep.rows)
            rows.push_back({row.nbar, row.noise_amp, row.snr_db, row.ser_algebraic,
                            row.ser_correlation, static_cast<double>(row.erasures)});
        write_table_csv(artifact_path(r, "_ser.csv"),
                        {"nbar", "noise_amp", "snr_db", "ser_algebraic", "ser_correlation",
                         "erasures"},
                        rows, csv_preamble(cfg, r.seed));

        json j = envelope(cfg, r.seed);
        j["variance_constant"] = rep.variance_constant;
        j["predicted_nbar_for_1pct"] = rep.predicted_nbar_for_1pct;
        j["degenerate"] = rep.degenerate;
        json jrows = json::array();
        for (const auto& row : rep.rows)
            jrows.push_back({{"nbar", row.nbar},
                             {"snr_db", row.snr_db},
                             {"ser_algebraic", row.ser_algebraic},
                             {"ser_correlation", row.ser_correlation},
                             {"erasures", row.erasures}});
        j["rows"] = jrows;
        atomic_write_text(artifact_path(r, "_ser_summary.json"), j.dump(2) + "\n");

        if (!opt.quiet) {
            out << "symbol error rates at " << cfg.ser->snr_db << " dB:\n";
            for (const auto& row : rep.rows)
                out << "  nbar " << row.nbar << ": algebraic " << row.ser_algebraic
                    << ", correlation " << row.ser_correlation << "\n";
            out << "predicted nbar for 1%: " << rep.predicted_nbar_for_1pct << "\n";
        }
        return rep.degenerate ? kExitDegenerate : kExitOk;
    }

    // file mode: demodulate a recorded stream window by window
    if (cfg.input.empty() || !cfg.demod)
        throw std::invalid_argument(
            "demod needs either experiment.ser or an input stream with experiment.demod");
    EstimatorPlan plan;
    if (!cfg.plan_file.empty()) plan = load_plan_file(cfg.plan_file);
    else plan = model_from_config(cfg).plan;

    SampledSignal stream = read_signal_csv(cfg.input);
    DemodOptions dopt;
    dopt.eval = {cfg.rule, cfg.eps_div};
    dopt.parallel = r.parallel;
    DemodResult res = sliding_demodulate(plan, stream, cfg.demod->samples_per_symbol,
                                         cfg.demod->constellation, dopt);

    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < res.symbols; ++s)
        rows.push_back({static_cast<double>(s), static_cast<double>(res.decisions[s]),
                        res.estimates[s], res.decisions[s] < 0 ? 1.0 : 0.0,
                        res.low_confidence[s] ? 1.0 : 0.0});
    write_table_csv(artifact_path(r, "_decisions.csv"),
                    {"symbol", "decision", "estimate", "erased", "low_confidence"}, rows,
                    csv_preamble(cfg, r.seed));

    json j = envelope(cfg, r.seed);
    j["symbols"] = res.symbols;
    j["decided"] = res.decided;
    j["erasures"] = res.erasures;
    atomic_write_text(artifact_path(r, "_demod_summary.json"), j.dump(2) + "\n");

    if (!opt.quiet)
        out << res.decided << " decisions, " << res.erasures << " erasures\n";
    bool guard_dominated = res.erasures * 2 >= res.symbols && res.symbols > 0;
    return guard_dominated ? kExitDegenerate : kExitOk;
}

}  // namespace opcalc
