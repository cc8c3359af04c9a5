/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NETSCHED_CLI_HPP
#define NETSCHED_CLI_HPP

/**
 * @file cli.hpp
 * @brief The `netsched` command-line front end.
 *
 * Exit codes: 0 success, 2 infeasible or failed result, 1 usage or I/O error.
 */

#include "netsched/certify.hpp"
#include "netsched/io.hpp"
#include "netsched/mjls.hpp"
#include "netsched/model.hpp"
#include "netsched/plot.hpp"
#include "netsched/presets.hpp"
#include "netsched/random.hpp"
#include "netsched/scheduler.hpp"
#include "netsched/search.hpp"
#include "netsched/sim.hpp"
#include "netsched/synthesis.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace netsched::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kFailure = 2 };

inline constexpr const char* kFailureMessage = "report a failure";

/// Usage problems discovered after parsing (missing config, bad combination of flags).
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Values collected from the command line; unset optionals fall back to the config.
struct Flags {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> horizon;
    std::optional<std::int64_t> trials;
    std::optional<std::string> h;
    std::optional<double> kappa;
    std::string mode = "exact";
    std::optional<int> threads;
    std::optional<std::string> out;
    bool plot = false;
    bool design = false;
    // bench
    int n = 20;
    int m = 10;
    int d = 5;
    double time_budget = 0.0;
    // positional arguments of demo / bench / preset
    std::string target;
};

inline int resolve_threads(const Flags& f) {
    if (f.threads) return std::max(1, *f.threads);
    if (const char* env = std::getenv("NETSCHED_THREADS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw UsageError(std::string("NETSCHED_THREADS is not an integer: ") + env);
        }
    }
    return 1;
}

inline RunConfig from_preset(const presets::Preset& p) {
    RunConfig cfg;
    cfg.ncs = p.config;
    cfg.schedule = p.schedule;
    for (const auto& [plant, cert] : p.certificates) cfg.certificates.push_back({plant, cert});
    return cfg;
}

/// Loads --config or --preset and applies flag overrides.
inline RunConfig resolve_config(const Flags& f) {
    if (!f.config.empty() && !f.preset.empty()) throw UsageError("give either --config or --preset, not both");
    RunConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
    } else if (!f.preset.empty()) {
        cfg = from_preset(presets::preset(f.preset));
        cfg.ncs.validate();
    } else {
        throw UsageError("no configuration: pass --config <file> or --preset <name>");
    }
    if (f.seed) cfg.simulation.seed = *f.seed;
    if (f.horizon) cfg.simulation.horizon = *f.horizon;
    if (f.trials) cfg.simulation.trials = *f.trials;
    if (f.kappa) cfg.solver.kappa = *f.kappa;
    if (f.h) cfg.solver.h = Rational::parse(*f.h);
    if (f.out) cfg.output = *f.out;
    if (cfg.simulation.horizon < 1) throw UsageError("--horizon must be >= 1");
    if (cfg.simulation.trials < 1) throw UsageError("--trials must be >= 1");
    return cfg;
}

inline std::filesystem::path ensure_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    writer(os);
}

/// Uniform initial state in [-radius, radius]^d.
inline Vector random_initial_state(Eigen::Index d, std::uint64_t stream, double radius = 10.0) {
    Xoshiro256 rng(stream);
    Vector x(d);
    for (Eigen::Index k = 0; k < d; ++k) x(k) = rng.uniform(-radius, radius);
    return x;
}

inline const ScheduleParameters& require_schedule(const RunConfig& cfg) {
    if (!cfg.schedule) throw UsageError("configuration has no \"schedule\" section");
    return *cfg.schedule;
}

inline void require_gains(const NcsConfig& ncs) {
    for (const auto& p : ncs.plants)
        if (!p.has_gain()) throw SynthesisRequired();
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_check(const Flags& f, std::ostream& out) {
    const auto cfg = resolve_config(f);
    const auto rep = check_assumptions(cfg.ncs);
    out << "N=" << cfg.ncs.size() << " M=" << cfg.ncs.capacity << " divisible=" << (rep.divisible ? "yes" : "no")
        << '\n';
    out << "plant  unstable  controllable  gain  closed-loop-stable\n";
    for (const auto& p : rep.plants) {
        out << std::setw(5) << p.index << "  " << std::setw(8) << (p.open_loop_unstable ? "yes" : "no") << "  "
            << std::setw(12) << (p.controllable ? "yes" : "no") << "  " << std::setw(4) << (p.has_gain ? "yes" : "no")
            << "  " << (p.has_gain ? (p.closed_loop_stable ? "yes" : "no") : "-") << '\n';
    }
    out << (rep.passed() ? "all assumptions hold\n" : "assumptions violated\n");
    return rep.passed() ? kSuccess : kFailure;
}

inline int cmd_verify(const Flags& f, std::ostream& out) {
    const auto cfg = resolve_config(f);
    if (cfg.certificates.empty()) throw UsageError("configuration has no \"certificates\" section");
    Json results = Json::array();
    bool all_ok = true;
    for (const auto& entry : cfg.certificates) {
        const auto& plant = cfg.ncs.plant(entry.plant);
        if (!plant.has_gain()) throw SynthesisRequired();
        const auto mm = mode_matrices(plant);
        const auto rep = verify_certificate(mm.stable, mm.unstable, entry.certificate);
        all_ok = all_ok && rep.ok;
        out << "plant " << entry.plant << " p=" << entry.certificate.p << ": " << (rep.ok ? "verified" : "REJECTED");
        if (rep.residuals)
            out << " (max eig R_s=" << rep.residuals->margin_s << ", R_u=" << rep.residuals->margin_u << ")";
        out << '\n';
        for (const auto& d : rep.diagnostics) out << "  " << d << '\n';
        results.push_back(verification_to_json(entry.plant, rep));
    }
    if (f.out) write_text(ensure_dir(*f.out) / "verify.json", results.dump(2) + "\n");
    return all_ok ? kSuccess : kFailure;
}

inline int cmd_synth(const Flags& f, std::ostream& out) {
    auto cfg = resolve_config(f);
    const auto& params = require_schedule(cfg);
    const auto result = synthesize_controllers(cfg.ncs, params, cfg.solver.kappa, resolve_threads(f));
    Json doc = Json::array();
    for (const auto& s : result.plants) {
        out << "plant " << s.index << " p=" << s.p << ": ";
        if (s.ok()) {
            out << "K = " << matrix_to_json(*s.K).dump() << '\n';
        } else {
            out << "failed (" << s.failure << ")\n";
        }
        doc.push_back(synthesis_to_json(s));
    }
    if (f.out) {
        const auto dir = ensure_dir(*f.out);
        write_text(dir / "synth.json", doc.dump(2) + "\n");
        if (result.all_succeeded()) {
            RunConfig updated = cfg;
            updated.ncs = result.apply(cfg.ncs);
            updated.certificates.clear();
            for (const auto& s : result.plants) updated.certificates.push_back({s.index, *s.certificate});
            write_text(dir / "config.synth.json", serialize(updated));
        }
    }
    if (!result.all_succeeded()) {
        out << kFailureMessage << '\n';
        return kFailure;
    }
    return kSuccess;
}

inline void print_schedule_parameters(std::ostream& out, const ScheduleParameters& params) {
    for (std::size_t j = 0; j < params.partition.blocks.size(); ++j) {
        out << "  c_" << j + 1 << " = {";
        const auto& b = params.partition.blocks[j];
        for (std::size_t k = 0; k < b.size(); ++k) out << (k ? "," : "") << b[k];
        out << "}  p = " << params.probabilities.values[j] << '\n';
    }
}

inline int cmd_search(const Flags& f, std::ostream& out) {
    const auto cfg = resolve_config(f);
    SearchOptions opts{cfg.solver.kappa, resolve_threads(f), f.time_budget};
    bool gains_given = true;
    for (const auto& p : cfg.ncs.plants) gains_given = gains_given && p.has_gain();
    const bool design = f.design || !gains_given;
    const auto outcome = design ? search_with_synthesis(cfg.ncs, cfg.solver.h, opts)
                                : search_schedule_parameters(cfg.ncs, cfg.solver.h, opts);
    out << "search (" << (design ? "with controller synthesis" : "fixed gains") << ", h=" << cfg.solver.h
        << "): " << to_string(outcome.status) << " after " << outcome.multisets_examined << " probability multisets\n";
    if (f.out) write_text(ensure_dir(*f.out) / "search.json", search_to_json(outcome).dump(2) + "\n");
    if (!outcome.found()) {
        out << kFailureMessage << '\n';
        return kFailure;
    }
    print_schedule_parameters(out, outcome.result->params);
    return kSuccess;
}

inline int cmd_schedule(const Flags& f, std::ostream& out) {
    const auto cfg = resolve_config(f);
    const auto& params = require_schedule(cfg);
    params.validate(cfg.ncs.size(), cfg.ncs.capacity);
    const auto mode = parse_schedule_mode(f.mode);
    const auto s = generate_schedule(params, cfg.simulation.horizon, cfg.simulation.seed, mode);
    const auto counts = s.counts(static_cast<int>(params.partition.blocks.size()));
    out << "schedule (" << to_string(mode) << ", T=" << s.horizon() << ", seed=" << s.seed << ") counts:";
    for (auto c : counts) out << ' ' << c;
    out << '\n';
    const auto dir = ensure_dir(cfg.output);
    write_file(dir / "schedule.csv", [&](std::ostream& os) { write_schedule_csv(os, s, params); });
    out << "wrote " << (dir / "schedule.csv").string() << '\n';
    return kSuccess;
}

inline int cmd_simulate(const Flags& f, std::ostream& out) {
    const auto cfg = resolve_config(f);
    const auto& params = require_schedule(cfg);
    params.validate(cfg.ncs.size(), cfg.ncs.capacity);
    require_gains(cfg.ncs);
    const auto mode = parse_schedule_mode(f.mode);
    const int threads = resolve_threads(f);
    const auto seed = cfg.simulation.seed;
    const auto schedule = generate_schedule(params, cfg.simulation.horizon, seed, mode);

    std::vector<Vector> x0s;
    for (const auto& plant : cfg.ncs.plants)
        x0s.push_back(random_initial_state(plant.state_dim(), derive_seed(seed, "simulate/x0", static_cast<std::uint64_t>(plant.index))));
    const auto trajs = simulate_ncs(cfg.ncs, params, schedule, x0s);

    const auto dir = ensure_dir(cfg.output);
    write_file(dir / "schedule.csv", [&](std::ostream& os) { write_schedule_csv(os, schedule, params); });
    bool diverged = false;
    out << "plant  p      rho(M)     exact E[cost]     MC mean (+-se)              tail\n";
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const auto& plant = cfg.ncs.plants[i];
        const auto sums = cumulative_cost(trajs[i]);
        const auto stem = "plant" + std::to_string(plant.index);
        write_file(dir / (stem + "_trajectory.csv"), [&](std::ostream& os) { write_trajectory_csv(os, trajs[i]); });
        write_file(dir / (stem + "_cost.csv"), [&](std::ostream& os) { write_cost_csv(os, plant.index, sums); });

        const auto p = params.probability_of(plant.index);
        const auto mm = mode_matrices(plant);
        const double rho = second_moment_operator(mm.stable, mm.unstable, p).spectral_radius();
        const auto mc = estimate_stochastic_stability(plant, params, x0s[i], cfg.simulation.horizon,
                                                      cfg.simulation.trials, derive_seed(seed, "simulate/mc", static_cast<std::uint64_t>(plant.index)), threads);
        diverged = diverged || mc.diverged;
        std::ostringstream exact;
        if (rho < 1.0) {
            exact << std::setprecision(8) << expected_cost_exact(mm.stable, mm.unstable, p, x0s[i]);
        } else {
            exact << "divergent";
        }
        out << std::setw(5) << plant.index << "  " << std::setw(5) << p.str() << "  " << std::setw(9)
            << std::setprecision(6) << rho << "  " << std::setw(16) << exact.str() << "  " << std::setprecision(8)
            << mc.mean << " (+-" << std::setprecision(3) << mc.standard_error << ")  " << std::setprecision(4)
            << tail_increment_ratio(sums) << '\n';
    }
    out << std::setprecision(6);
    if (f.plot) {
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            LineChart chart;
            chart.title = "plant " + std::to_string(trajs[i].plant);
            chart.y_label = "||x(t)||^2";
            std::vector<double> ys;
            for (const auto& x : trajs[i].states) ys.push_back(x.squaredNorm());
            chart.series.push_back(std::move(ys));
            write_file(dir / ("plant" + std::to_string(trajs[i].plant) + ".svg"),
                       [&](std::ostream& os) { write_svg(os, chart); });
        }
    }
    out << "wrote " << dir.string() << '\n';
    return diverged ? kFailure : kSuccess;
}

/**
 * The two-plant benchmark: verify the published certificates, design gains at
 * p = (1/2, 1/2), verify them, then simulate 10 frequency-exact schedules x 10
 * initial states in [-10,10]^d per plant and check that cost growth has stopped.
 */
inline int cmd_demo(const Flags& f, std::ostream& out) {
    if (f.target != "exp1") throw UsageError("unknown demo \"" + f.target + "\" (available: exp1)");
    if (!f.config.empty() || !f.preset.empty()) throw UsageError("demo exp1 uses the built-in experiment1 preset");
    Flags g = f;
    g.preset = "experiment1";
    const auto cfg = resolve_config(g);
    const auto& params = *cfg.schedule;
    const auto seed = cfg.simulation.seed;
    const auto horizon = cfg.simulation.horizon;
    const auto dir = ensure_dir(f.out.value_or("out/exp1"));
    constexpr int kSchedules = 10;
    constexpr int kInitialStates = 10;
    constexpr double kTailLimit = 0.01;
    bool ok = true;

    Json doc;
    out << "published certificates:\n";
    Json published = Json::array();
    for (const auto& entry : cfg.certificates) {
        const auto mm = mode_matrices(cfg.ncs.plant(entry.plant));
        const auto rep = verify_certificate(mm.stable, mm.unstable, entry.certificate);
        ok = ok && rep.ok;
        out << "  plant " << entry.plant << ": " << (rep.ok ? "verified" : "REJECTED") << '\n';
        published.push_back(verification_to_json(entry.plant, rep));
    }
    doc["published"] = published;

    const auto synth = synthesize_controllers(cfg.ncs, params, cfg.solver.kappa, resolve_threads(f));
    Json designed = Json::array();
    out << "designed gains:\n";
    for (const auto& s : synth.plants) {
        out << "  plant " << s.index << ": " << (s.ok() ? "K = " + matrix_to_json(*s.K).dump() : "failed (" + s.failure + ")")
            << '\n';
        designed.push_back(synthesis_to_json(s));
    }
    doc["designed"] = designed;
    if (!synth.all_succeeded()) {
        write_text(dir / "certificates.json", doc.dump(2) + "\n");
        out << kFailureMessage << '\n';
        return kFailure;
    }
    const auto ncs = synth.apply(cfg.ncs);

    std::vector<Schedule> schedules;
    for (int k = 0; k < kSchedules; ++k) {
        schedules.push_back(generate_schedule_exact(params, horizon, derive_seed(seed, "exp1/schedule", static_cast<std::uint64_t>(k))));
        write_file(dir / ("schedule_" + std::to_string(k) + ".csv"),
                   [&](std::ostream& os) { write_schedule_csv(os, schedules.back(), params); });
    }

    Json runs = Json::array();
    for (const auto& plant : ncs.plants) {
        const auto pdir = ensure_dir((dir / ("plant" + std::to_string(plant.index))).string());
        const auto modes_of = [&](const Schedule& s) { return mode_signal(s, params, plant.index); };
        double worst_tail = 0.0;
        LineChart chart;
        chart.title = "plant " + std::to_string(plant.index) + ": ||x(t)||^2";
        chart.y_label = "||x(t)||^2";
        for (int l = 0; l < kInitialStates; ++l) {
            const auto x0 = random_initial_state(plant.state_dim(),
                                                 derive_seed(seed, "exp1/x0/plant" + std::to_string(plant.index), static_cast<std::uint64_t>(l)));
            for (int k = 0; k < kSchedules; ++k) {
                const auto traj = simulate_plant(plant, modes_of(schedules[static_cast<std::size_t>(k)]), x0);
                const auto sums = cumulative_cost(traj);
                const double tail = tail_increment_ratio(sums);
                worst_tail = std::max(worst_tail, tail);
                const auto tag = "s" + std::to_string(k) + "_x" + std::to_string(l);
                write_file(pdir / ("cost_" + tag + ".csv"), [&](std::ostream& os) { write_cost_csv(os, plant.index, sums); });
                write_file(pdir / ("trajectory_" + tag + ".csv"), [&](std::ostream& os) { write_trajectory_csv(os, traj); });
                if (k == 0) {
                    std::vector<double> ys;
                    for (const auto& x : traj.states) ys.push_back(x.squaredNorm());
                    chart.series.push_back(std::move(ys));
                }
                runs.push_back(Json{{"plant", plant.index}, {"schedule", k}, {"initial_state", l},
                                    {"total_cost", sums.back()}, {"tail_ratio", tail}});
            }
        }
        const bool plant_ok = worst_tail < kTailLimit;
        ok = ok && plant_ok;
        out << "plant " << plant.index << ": " << kSchedules * kInitialStates << " runs, worst tail ratio "
            << std::setprecision(3) << worst_tail << std::setprecision(6) << (plant_ok ? " (settled)" : " (NOT settled)")
            << '\n';
        if (f.plot) write_file(dir / ("plant" + std::to_string(plant.index) + ".svg"), [&](std::ostream& os) { write_svg(os, chart); });
    }
    doc["runs"] = runs;
    doc["seed"] = seed;
    doc["horizon"] = horizon;
    write_text(dir / "certificates.json", doc.dump(2) + "\n");
    out << "wrote " << dir.string() << '\n';
    if (!ok) {
        out << kFailureMessage << '\n';
        return kFailure;
    }
    return kSuccess;
}

/// Outcome of one scaled random-NCS run; exposed for tests.
struct BenchReport {
    bool success = false;
    double seconds_total = 0.0;
    double seconds_search = 0.0;
    SearchOutcome search;
    bool certificates_verified = false;
    bool partition_valid = false;
    std::vector<std::int64_t> schedule_counts;
    bool simulation_finite = false;
    std::vector<std::pair<Rational, int>> open_loop_feasible_counts;  // p -> #plants passing the necessary test
};

inline BenchReport run_bench(const NcsConfig& ncs, const Rational& h, std::int64_t horizon, std::uint64_t seed,
                             const SearchOptions& opts) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    BenchReport rep;
    for (std::int64_t k = 1; k <= grid_top(h); ++k) {
        const Rational p = h * Rational(k);
        int count = 0;
        for (const auto& plant : ncs.plants) count += open_loop_step_feasible(plant.A, p) ? 1 : 0;
        rep.open_loop_feasible_counts.emplace_back(p, count);
    }
    const auto ts = clock::now();
    rep.search = search_with_synthesis(ncs, h, opts);
    rep.seconds_search = std::chrono::duration<double>(clock::now() - ts).count();
    if (rep.search.found()) {
        const auto& res = *rep.search.result;
        NcsConfig designed = ncs;
        rep.certificates_verified = true;
        for (auto& plant : designed.plants) {
            const auto& ev = res.evidence[static_cast<std::size_t>(plant.index - 1)];
            plant.K = *ev.gain;
            const auto mm = mode_matrices(plant);
            rep.certificates_verified = rep.certificates_verified && verify_certificate(mm.stable, mm.unstable, ev.certificate).ok &&
                                        ev.certificate.p == res.params.probability_of(plant.index);
        }
        rep.partition_valid = partition_violation(res.params.partition, ncs.size(), ncs.capacity).empty();
        const auto schedule = generate_schedule_exact(res.params, horizon, derive_seed(seed, "bench/schedule"));
        rep.schedule_counts = schedule.counts(static_cast<int>(res.params.partition.blocks.size()));
        rep.simulation_finite = true;
        for (const auto& plant : designed.plants) {
            const auto x0 = random_initial_state(plant.state_dim(), derive_seed(seed, "bench/x0", static_cast<std::uint64_t>(plant.index)));
            const auto traj = simulate_plant(plant, mode_signal(schedule, res.params, plant.index), x0);
            for (const auto& x : traj.states) rep.simulation_finite = rep.simulation_finite && x.allFinite();
        }
        rep.success = rep.certificates_verified && rep.partition_valid && rep.simulation_finite;
    }
    rep.seconds_total = std::chrono::duration<double>(clock::now() - t0).count();
    return rep;
}

inline int cmd_bench(const Flags& f, std::ostream& out) {
    if (f.target != "exp2") throw UsageError("unknown benchmark \"" + f.target + "\" (available: exp2)");
    const Rational h = Rational::parse(f.h.value_or("1/10"));
    const std::uint64_t seed = f.seed.value_or(1);
    const std::int64_t horizon = f.horizon.value_or(1000);
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto ncs = generate_random_ncs(f.n, f.d, seed, f.m);
    const double gen_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    SearchOptions opts{f.kappa.value_or(kDefaultKappa), resolve_threads(f), f.time_budget};
    const auto rep = run_bench(ncs, h, horizon, seed, opts);
    const double total = gen_seconds + rep.seconds_total;

    out << "bench exp2: N=" << f.n << " M=" << f.m << " d=" << f.d << " h=" << h << " seed=" << seed << '\n';
    out << "plants passing the open-loop necessary condition (1-p) rho(A)^2 < 1, by p:\n ";
    for (const auto& [p, c] : rep.open_loop_feasible_counts) out << ' ' << p << ':' << c;
    out << '\n';
    out << "search: " << to_string(rep.search.status) << " (" << rep.search.multisets_examined << " multisets, "
        << rep.search.evaluations << " plant checks, " << std::fixed << std::setprecision(3) << rep.seconds_search
        << " s)\n";
    if (rep.search.found()) {
        print_schedule_parameters(out, rep.search.result->params);
        out << "certificates verified: " << (rep.certificates_verified ? "yes" : "no")
            << "; partition valid: " << (rep.partition_valid ? "yes" : "no") << "; schedule counts:";
        for (auto c : rep.schedule_counts) out << ' ' << c;
        out << "; simulation finite: " << (rep.simulation_finite ? "yes" : "no") << '\n';
    }
    out << "wall time: " << total << " s\n" << std::defaultfloat << std::setprecision(6);
    if (f.out) {
        Json doc{{"n", f.n}, {"m", f.m}, {"d", f.d}, {"h", h.str()}, {"seed", seed}, {"wall_seconds", total},
                 {"success", rep.success}, {"search", search_to_json(rep.search)}};
        write_text(ensure_dir(*f.out) / "bench.json", doc.dump(2) + "\n");
    }
    if (!rep.success) {
        out << kFailureMessage << '\n';
        return kFailure;
    }
    return kSuccess;
}

inline int cmd_preset(const Flags& f, std::ostream& out) {
    const auto p = presets::preset(f.target);
    const auto cfg = from_preset(p);
    const auto text = serialize(cfg);
    if (f.out) {
        write_text(*f.out, text);
    } else {
        out << text;
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------

/// Parses `args` (without the program name), runs the command, returns the exit code.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Probabilistic scheduling and controller co-design for networked control systems", "netsched"};
    app.set_help_flag("--help", "print this help and exit");
    app.fallthrough();
    app.require_subcommand(1);
    Flags f;
    std::string h_text;
    app.add_option("--config", f.config, "JSON run configuration");
    app.add_option("--preset", f.preset, "built-in configuration (batch-reactor, inverted-pendulum, experiment1)");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--horizon", f.horizon, "schedule / simulation length T");
    app.add_option("--trials", f.trials, "Monte Carlo trials");
    app.add_option("--h", f.h, "probability grid step, e.g. 1/10");
    app.add_option("--kappa", f.kappa, "certificate eigenvalue band kappa in ]0,1[");
    app.add_option("--mode", f.mode, "schedule generator: iid or exact")->check(CLI::IsMember({"iid", "exact"}));
    app.add_option("--threads", f.threads, "worker threads (default: NETSCHED_THREADS or 1)");
    app.add_option("--out", f.out, "output directory (file for `preset`)");
    app.add_flag("--plot", f.plot, "also write SVG charts of ||x(t)||^2");

    auto* check = app.add_subcommand("check", "report plant and network assumptions");
    auto* verify = app.add_subcommand("verify", "verify stability certificates from the configuration");
    auto* synth = app.add_subcommand("synth", "design state-feedback gains for the configured schedule");
    auto* search = app.add_subcommand("search", "select blocks and activation probabilities");
    search->add_flag("--design", f.design, "design gains during the search even if gains are given");
    search->add_option("--time-budget", f.time_budget, "stop after this many seconds (0 = no limit)");
    auto* schedule = app.add_subcommand("schedule", "generate a scheduling sequence and write schedule.csv");
    auto* simulate = app.add_subcommand("simulate", "simulate trajectories and estimate expected cost");
    auto* demo = app.add_subcommand("demo", "run a built-in demonstration");
    demo->add_option("name", f.target, "demo name (exp1)")->required();
    auto* bench = app.add_subcommand("bench", "run a scaled random-NCS benchmark");
    bench->add_option("name", f.target, "benchmark name (exp2)")->required();
    bench->add_option("--n", f.n, "number of plants")->check(CLI::PositiveNumber);
    bench->add_option("--m", f.m, "network capacity")->check(CLI::PositiveNumber);
    bench->add_option("--d", f.d, "state dimension")->check(CLI::PositiveNumber);
    bench->add_option("--time-budget", f.time_budget, "stop the search after this many seconds (0 = no limit)");
    auto* preset_cmd = app.add_subcommand("preset", "print a built-in configuration as JSON");
    preset_cmd->add_option("name", f.target, "preset name")->required();

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("netsched");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (check->parsed()) return cmd_check(f, out);
        if (verify->parsed()) return cmd_verify(f, out);
        if (synth->parsed()) return cmd_synth(f, out);
        if (search->parsed()) return cmd_search(f, out);
        if (schedule->parsed()) return cmd_schedule(f, out);
        if (simulate->parsed()) return cmd_simulate(f, out);
        if (demo->parsed()) return cmd_demo(f, out);
        if (bench->parsed()) return cmd_bench(f, out);
        if (preset_cmd->parsed()) return cmd_preset(f, out);
    } catch (const SynthesisRequired& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    err << "error: no command\n";
    return kUsage;
}

}  // namespace netsched::cli

#endif  // NETSCHED_CLI_HPP
