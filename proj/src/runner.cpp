#include "nsk/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "nsk/contraction.hpp"
#include "nsk/csv.hpp"
#include "nsk/limits.hpp"
#include "nsk/npi.hpp"
#include "nsk/profile.hpp"
#include "nsk/solver.hpp"

namespace nsk {

namespace {

constexpr const char* kVersion = "nsklab 0.1.0";

namespace fs = std::filesystem;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

FluidParams params_from(const RunConfig& cfg) {
    cfg.require("gamma");
    return make_fluid_params(cfg.gamma, cfg.alpha, cfg.c);
}

ShockData shock_from(const RunConfig& cfg, const FluidParams& p) {
    cfg.require("eps");
    const ShockFamily fam = cfg.family == 2 ? ShockFamily::Two : ShockFamily::One;
    return solve_end_states(cfg.v_minus, cfg.u_minus, cfg.eps, fam, p);
}

void write_common_manifest(ManifestWriter& mf, const std::string& sub,
                           const RunConfig& cfg, const Timer& timer) {
    mf.put("version", kVersion);
    mf.put("subcommand", sub);
    mf.put("gamma", cfg.gamma);
    mf.put("alpha", cfg.alpha);
    mf.put("c", cfg.c);
    mf.put("eps", cfg.eps);
    mf.put("v_minus", cfg.v_minus);
    mf.put("u_minus", cfg.u_minus);
    mf.put("family", static_cast<long>(cfg.family));
    mf.put("lambda", cfg.lambda);
    mf.put("delta0", cfg.delta0);
    mf.put("delta3", cfg.delta3);
    mf.put("L", cfg.L);
    mf.put("n", static_cast<long>(cfg.n));
    mf.put("t_end", cfg.t_end);
    mf.put("cfl", cfg.cfl);
    mf.put("v_floor", cfg.v_floor);
    mf.put("out_stride", cfg.out_stride);
    mf.put("nu", cfg.nu);
    mf.put("pert_kind", cfg.pert_kind);
    mf.put("pert_amp_v", cfg.pert_amp_v);
    mf.put("pert_amp_h", cfg.pert_amp_h);
    mf.put("pert_width", cfg.pert_width);
    mf.put("pert_center", cfg.pert_center);
    mf.put("seed", static_cast<long>(cfg.seed));
    mf.put("threads", static_cast<long>(cfg.threads));
    for (std::size_t i = 0; i < cfg.warnings.size(); ++i) {
        mf.put("warning_" + std::to_string(i), cfg.warnings[i]);
    }
    mf.put("wall_ms", timer.ms());
}

State initial_state(const Profile& prof, const RunConfig& cfg) {
    State st;
    st.t = 0.0;
    st.v = prof.vt;
    st.h = prof.ht;
    if (cfg.pert_kind == "gaussian") {
        const Grid& g = prof.grid;
        for (int i = 0; i < g.n; ++i) {
            const double z = (g.xi(i) - cfg.pert_center) / cfg.pert_width;
            const double bump = std::exp(-0.5 * z * z);
            st.v[i] += cfg.pert_amp_v * bump;
            st.h[i] += cfg.pert_amp_h * bump;
        }
    }
    if ((st.v <= 0.0).any()) {
        throw NumericsError("perturbed initial volume is not positive");
    }
    return st;
}

void run_endstates(const RunConfig& cfg, const fs::path& dir, Timer& timer) {
    const FluidParams p = params_from(cfg);
    const ShockData s = shock_from(cfg, p);
    const auto [r1, r2] = rh_residual(s, p);

    std::cout << "v_minus = " << fmt17(s.v_minus) << "\n"
              << "u_minus = " << fmt17(s.u_minus) << "\n"
              << "v_plus = " << fmt17(s.v_plus) << "\n"
              << "u_plus = " << fmt17(s.u_plus) << "\n"
              << "sigma = " << fmt17(s.sigma) << "\n"
              << "sigma_star = " << fmt17(s.sigma_star) << "\n"
              << "eps = " << fmt17(s.eps) << "\n"
              << "family = " << (s.family == ShockFamily::Two ? 2 : 1) << "\n"
              << "rh_residual_1 = " << fmt17(r1) << "\n"
              << "rh_residual_2 = " << fmt17(r2) << "\n";

    CsvWriter csv((dir / "endstates.csv").string(),
                  {"v_minus", "u_minus", "v_plus", "u_plus", "sigma", "sigma_star",
                   "eps", "family", "rh_residual_1", "rh_residual_2"});
    csv.write_row({fmt17(s.v_minus), fmt17(s.u_minus), fmt17(s.v_plus),
                   fmt17(s.u_plus), fmt17(s.sigma), fmt17(s.sigma_star), fmt17(s.eps),
                   s.family == ShockFamily::Two ? "2" : "1", fmt17(r1), fmt17(r2)});

    ManifestWriter mf((dir / "manifest.txt").string());
    write_common_manifest(mf, "endstates", cfg, timer);
    mf.put("artifact_0", "endstates.csv");
}

void run_profile(const RunConfig& cfg, const fs::path& dir, Timer& timer) {
    const FluidParams p = params_from(cfg);
    const ShockData s = shock_from(cfg, p);
    ProfileOptions opt;
    opt.L = cfg.L;
    opt.n = cfg.n;
    const Profile prof = compute_profile(s, p, opt);

    CsvWriter csv((dir / "profile.csv").string(),
                  {"xi", "v", "h", "u", "dv", "dh", "d2v"});
    for (int i = 0; i < prof.grid.n; ++i) {
        csv.write_numeric({prof.grid.xi(i), prof.vt[i], prof.ht[i], prof.ut[i],
                           prof.dvt[i], prof.dht[i], prof.d2vt[i]});
    }

    const ProfileReport rep = validate_profile(prof);
    ManifestWriter mf((dir / "manifest.txt").string());
    write_common_manifest(mf, "profile", cfg, timer);
    mf.put("monotone", rep.monotone ? "true" : "false");
    mf.put("tail_slope_left", rep.tail_slope_left);
    mf.put("tail_slope_right", rep.tail_slope_right);
    mf.put("min_dv_core", rep.min_dv_core);
    mf.put("ratio_vh", rep.ratio_vh);
    mf.put("ratio_hp", rep.ratio_hp);
    mf.put("ratio_d2v", rep.ratio_d2v);
    mf.put("ratio_d2h", rep.ratio_d2h);
    mf.put("boundary_gap", rep.boundary_gap);
    mf.put("artifact_0", "profile.csv");
}

void run_simulate(const RunConfig& cfg, const fs::path& dir, Timer& timer) {
    const FluidParams p = params_from(cfg);
    const ShockData s = shock_from(cfg, p);
    ProfileOptions opt;
    opt.L = cfg.L;
    opt.n = cfg.n;
    const Profile prof = compute_profile(s, p, opt);
    const Grid& g = prof.grid;

    SolverConfig scfg;
    scfg.cfl = cfg.cfl;
    scfg.v_floor = cfg.v_floor;
    scfg.t_end = cfg.t_end;
    scfg.out_stride = cfg.out_stride;
    scfg.nu = cfg.nu;

    CsvWriter csv((dir / "snapshots.csv").string(), {"t", "xi", "v", "h"});
    auto hook = [&](const State& st) {
        for (int i = 0; i < g.n; ++i) {
            csv.write_numeric({st.t, g.xi(i), st.v[i], st.h[i]});
        }
    };
    simulate(initial_state(prof, cfg), g, p, s, scfg, {}, hook);

    ManifestWriter mf((dir / "manifest.txt").string());
    write_common_manifest(mf, "simulate", cfg, timer);
    mf.put("artifact_0", "snapshots.csv");
}

void run_contraction_cmd(const RunConfig& cfg, const fs::path& dir, Timer& timer) {
    const FluidParams p = params_from(cfg);
    const ShockData s = shock_from(cfg, p);
    ProfileOptions opt;
    opt.L = cfg.L;
    opt.n = cfg.n;
    const Profile prof = compute_profile(s, p, opt);
    const Grid& g = prof.grid;
    const WeightSpec w{cfg.lambda, cfg.eps};

    SolverConfig scfg;
    scfg.cfl = cfg.cfl;
    scfg.v_floor = cfg.v_floor;
    scfg.t_end = cfg.t_end;
    scfg.out_stride = cfg.out_stride;
    scfg.nu = cfg.nu;

    const ContractionRun run = run_contraction(initial_state(prof, cfg), g, prof, p,
                                               s, w, cfg.delta3, scfg, {}, cfg.delta0);

    CsvWriter csv((dir / "timeseries.csv").string(),
                  {"t", "X", "Xdot", "E_weighted", "Y", "Y_g", "Y_b", "Y_l", "Y_s",
                   "J_bad", "J_good", "P1", "P2", "G_p", "G_h_minus", "G_h_plus",
                   "D_h", "D_p", "boundary_tail_bound"});
    for (const auto& row : run.rows) {
        const auto& r = row.rep;
        csv.write_numeric({row.t, row.X, r.Xdot, r.E_weighted, r.Y, r.Y_g, r.Y_b,
                           r.Y_l, r.Y_s, r.J_bad, r.J_good, r.P1, r.P2, r.G_p,
                           r.G_h_minus, r.G_h_plus, r.D_h, r.D_p, r.boundary_tail});
    }

    ManifestWriter mf((dir / "manifest.txt").string());
    write_common_manifest(mf, "contraction", cfg, timer);
    mf.put("E0", run.E0);
    mf.put("steps", run.steps);
    mf.put("max_entropy_violation", run.max_entropy_violation);
    mf.put("identity_residual", run.identity_residual);
    mf.put("int_Gp_dt", run.int_Gp);
    mf.put("int_dissipation_dt", run.int_D);
    mf.put("int_bad_terms_dt", run.int_f);
    mf.put("max_xdot_bound_gap", run.max_xdot_bound_gap);
    mf.put("max_gain_gap", run.max_gain_gap);
    mf.put("final_ledger_lhs", run.rows.back().ledger_lhs);
    mf.put("artifact_0", "timeseries.csv");
}

void run_npi(const RunConfig& cfg, const fs::path& dir, Timer& timer) {
    const std::vector<double> deltas = parse_double_list(cfg.npi_deltas);
    if (deltas.empty()) throw ConfigError("npi_deltas is empty");
    const NpiReport rep =
        npi_campaign(cfg.npi_c1, deltas, cfg.npi_samples, cfg.seed, cfg.npi_nodes,
                     1e-8, cfg.threads);

    CsvWriter csv((dir / "npi.csv").string(),
                  {"sample_id", "delta", "L2_of_W", "R_value"});
    for (const auto& s : rep.samples) {
        csv.write_numeric({static_cast<double>(s.id), s.delta, s.l2, s.R});
    }

    std::vector<std::string> coeff_header = {"sample_id", "delta", "R_value"};
    for (int j = 0; j < 16; ++j) coeff_header.push_back("c" + std::to_string(j));
    auto write_coeff_rows = [&](CsvWriter& out,
                                const std::vector<std::pair<NpiSample, Eigen::ArrayXd>>& rows) {
        for (const auto& [s, coeffs] : rows) {
            std::vector<double> cells = {static_cast<double>(s.id), s.delta, s.R};
            for (Eigen::Index j = 0; j < coeffs.size(); ++j) cells.push_back(coeffs[j]);
            out.write_numeric(cells);
        }
    };
    if (!rep.violations.empty()) {
        CsvWriter bad((dir / "npi_violations.csv").string(), coeff_header);
        write_coeff_rows(bad, rep.violations);
    }
    CsvWriter top((dir / "npi_top.csv").string(), coeff_header);
    write_coeff_rows(top, rep.top);

    ManifestWriter mf((dir / "manifest.txt").string());
    write_common_manifest(mf, "npi", cfg, timer);
    mf.put("npi_c1", cfg.npi_c1);
    mf.put("npi_deltas", cfg.npi_deltas);
    mf.put("npi_samples", static_cast<long>(cfg.npi_samples));
    mf.put("npi_nodes", static_cast<long>(cfg.npi_nodes));
    mf.put("max_R", rep.max_R);
    mf.put("violations", static_cast<long>(rep.violations.size()));
    // per-delta envelope, so the largest delta with no violations is visible
    for (double d : deltas) {
        double mx = -std::numeric_limits<double>::infinity();
        long bad = 0;
        for (const auto& s : rep.samples) {
            if (s.delta != d) continue;
            mx = std::max(mx, s.R);
            if (s.R > 1e-8) ++bad;
        }
        mf.put("max_R_delta_" + fmt17(d), mx);
        mf.put("violations_delta_" + fmt17(d), bad);
    }
    mf.put("artifact_0", "npi.csv");
    mf.put("artifact_1", "npi_top.csv");
    if (!rep.violations.empty()) mf.put("artifact_2", "npi_violations.csv");
}

void run_limit(const RunConfig& cfg, const fs::path& dir, Timer& timer) {
    if (cfg.family != 2) throw ConfigError("the limit experiment uses a 2-shock");
    const FluidParams p = params_from(cfg);
    const ShockData s = shock_from(cfg, p);
    NuLadder ladder;
    ladder.nus = parse_double_list(cfg.nu_ladder);
    if (ladder.nus.empty()) throw ConfigError("nu_ladder is empty");
    for (std::size_t i = 0; i + 1 < ladder.nus.size(); ++i) {
        if (!(ladder.nus[i] > ladder.nus[i + 1])) {
            throw ConfigError("nu_ladder must be strictly decreasing");
        }
    }
    ladder.window = cfg.window;
    ladder.horizon = cfg.horizon;
    const double nu_min = ladder.nus.back();

    // Unit-frame coverage needed for every (t, x) in the ladder.
    const double z_need =
        (ladder.window + std::abs(s.sigma) * ladder.horizon) / nu_min;
    ProfileOptions opt;
    opt.L = cfg.L;
    opt.n = cfg.n;
    if (opt.L == 0.0) opt.L = 12.0 / cfg.eps;
    if (opt.L < z_need) {
        throw ConfigError("unit domain too small for the ladder: need L >= " +
                          std::to_string(z_need));
    }
    const Profile prof = compute_profile(s, p, opt);

    WellPreparedSpec wps;
    wps.kind = cfg.wp_kind == "profile" ? WellPreparedSpec::Kind::ProfileBased
                                        : WellPreparedSpec::Kind::MollifiedRiemann;
    wps.omega = cfg.omega;
    if (cfg.pert_kind == "gaussian") {
        wps.amp_v = cfg.pert_amp_v;
        wps.amp_h = cfg.pert_amp_h;
        wps.width = cfg.pert_width;
        wps.center = cfg.pert_center;
    }

    const LimitResult res = run_limit_experiment(prof, ladder, wps, cfg.lambda,
                                                 cfg.delta3, cfg.cfl, cfg.v_floor,
                                                 cfg.macro_n);

    CsvWriter csv((dir / "limit.csv").string(),
                  {"nu", "t", "L1_window_distance", "dq_ac", "kinetic_part", "X_nu",
                   "X_drift"});
    for (const auto& row : res.rows) {
        csv.write_numeric({row.nu, row.t, row.l1_window, row.dq, row.kinetic,
                           row.X_nu, row.X_drift});
    }

    ManifestWriter mf((dir / "manifest.txt").string());
    write_common_manifest(mf, "limit", cfg, timer);
    mf.put("nu_ladder", cfg.nu_ladder);
    mf.put("window", ladder.window);
    mf.put("horizon", ladder.horizon);
    mf.put("macro_n", static_cast<long>(cfg.macro_n));
    mf.put("wp_kind", cfg.wp_kind);
    mf.put("omega", cfg.omega);
    mf.put("unit_entropy_vs_wave", res.entropy_vs_wave);
    mf.put("unit_entropy_vs_riemann", res.entropy_vs_riemann);
    for (double nu : ladder.nus) {
        mf.put("E0_nu_" + fmt17(nu), nu * res.entropy_vs_wave);
    }
    mf.put("fitted_C_L1_over_nu", res.fitted_C);
    mf.put("int_bad_terms_dt", res.int_f);
    mf.put("artifact_0", "limit.csv");
}

void run_sweep(const RunConfig& cfg, const fs::path& dir, Timer& timer);

void dispatch(const std::string& sub, const RunConfig& cfg, const fs::path& dir,
              Timer& timer) {
    if (sub == "endstates") {
        run_endstates(cfg, dir, timer);
    } else if (sub == "profile") {
        run_profile(cfg, dir, timer);
    } else if (sub == "simulate") {
        run_simulate(cfg, dir, timer);
    } else if (sub == "contraction") {
        run_contraction_cmd(cfg, dir, timer);
    } else if (sub == "npi") {
        run_npi(cfg, dir, timer);
    } else if (sub == "limit") {
        run_limit(cfg, dir, timer);
    } else if (sub == "sweep") {
        run_sweep(cfg, dir, timer);
    } else {
        throw ConfigError("unknown subcommand '" + sub + "'");
    }
}

void run_sweep(const RunConfig& cfg, const fs::path& dir, Timer& timer) {
    if (cfg.sweep_target.empty() || cfg.sweep_key.empty() || cfg.sweep_values.empty()) {
        throw ConfigError("sweep requires sweep_target, sweep_key and sweep_values");
    }
    if (cfg.sweep_target == "sweep") throw ConfigError("cannot sweep a sweep");

    std::vector<std::string> tokens;
    {
        std::string item;
        std::stringstream ss(cfg.sweep_values);
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) tokens.push_back(item);
        }
    }
    if (tokens.empty()) throw ConfigError("sweep_values is empty");

    // Rebuild each entry's config from the raw text with the swept key replaced.
    std::vector<std::string> errors(tokens.size());
    std::vector<fs::path> subdirs(tokens.size());
    auto worker = [&](std::size_t i) {
        try {
            std::string text;
            std::stringstream ss(cfg.raw_text);
            std::string line;
            while (std::getline(ss, line)) {
                const auto eq = line.find('=');
                std::string key = eq == std::string::npos ? "" : line.substr(0, eq);
                key.erase(std::remove_if(key.begin(), key.end(),
                                         [](unsigned char ch) { return std::isspace(ch); }),
                          key.end());
                if (key == cfg.sweep_key || key == "sweep_target" ||
                    key == "sweep_key" || key == "sweep_values") {
                    continue;
                }
                text += line + "\n";
            }
            text += cfg.sweep_key + " = " + tokens[i] + "\n";
            RunConfig sub_cfg = parse_config(text);
            subdirs[i] = dir / (cfg.sweep_key + "_" + tokens[i]);
            fs::create_directories(subdirs[i]);
            Timer t;
            if (cfg.sweep_target != "endstates" && cfg.sweep_target != "npi") {
                sub_cfg.resolve_defaults();
            }
            dispatch(cfg.sweep_target, sub_cfg, subdirs[i], t);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    const int workers = std::max(1, cfg.threads);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < tokens.size();
                 i = next.fetch_add(1)) {
                worker(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!errors[i].empty()) {
            throw NumericsError("sweep entry " + tokens[i] + " failed: " + errors[i]);
        }
    }

    ManifestWriter mf((dir / "manifest.txt").string());
    write_common_manifest(mf, "sweep", cfg, timer);
    mf.put("sweep_target", cfg.sweep_target);
    mf.put("sweep_key", cfg.sweep_key);
    mf.put("sweep_values", cfg.sweep_values);
}

}  // namespace

void run_subcommand(const std::string& subcommand, RunConfig cfg,
                    const std::string& out_dir) {
    Timer timer;
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    // endstates/npi do not need the eps-dependent defaults; sweep entries
    // resolve their own.
    if (subcommand != "endstates" && subcommand != "npi" && subcommand != "sweep") {
        cfg.resolve_defaults();
    }
    dispatch(subcommand, cfg, dir, timer);
}

}  // namespace nsk
