#include "nsk/limits.hpp"

#include <algorithm>
#include <cmath>

#include "nsk/contraction.hpp"

namespace nsk {

MacroSnapshot rescale_snapshot(const State& unit_state, const Grid& unit_grid,
                               const ShockData& s, const FluidParams& p,
                               double nu, double t_macro, const Grid& macro_grid) {
    if (!(nu > 0.0)) throw DomainError("rescale_snapshot: nu must be positive");
    if (std::abs(unit_state.t - t_macro / nu) > 1e-9 * std::max(1.0, t_macro / nu)) {
        throw DomainError("rescale_snapshot: unit snapshot time does not match t/nu");
    }
    const double zmax =
        std::max(std::abs(-macro_grid.L - s.sigma * t_macro),
                 std::abs(macro_grid.L - s.sigma * t_macro)) / nu;
    if (zmax > unit_grid.L) {
        throw DomainError("rescale_snapshot: coverage insufficient for the requested "
                          "window and horizon (needs |xi| <= " + std::to_string(zmax) + ")");
    }

    LagrangeInterpolant vi(-unit_grid.L, unit_grid.dx(), unit_state.v);
    LagrangeInterpolant hi(-unit_grid.L, unit_grid.dx(), unit_state.h);

    MacroSnapshot ms;
    ms.t = t_macro;
    ms.nu = nu;
    ms.grid = macro_grid;
    ms.v.resize(macro_grid.n);
    ms.h.resize(macro_grid.n);
    for (int i = 0; i < macro_grid.n; ++i) {
        const double xi = (macro_grid.xi(i) - s.sigma * t_macro) / nu;
        ms.v[i] = vi(xi);
        ms.h[i] = hi(xi);
    }
    // u = h + nu tau1 g v_x / v^(a+1), the nu-scaled effective-velocity inverse
    ms.u = ms.h + nu * p.tau1 * p.gamma * ddx(ms.v, macro_grid) * ms.v.pow(-p.alpha - 1.0);
    return ms;
}

double dq_ac(const Field& v, const RiemannShock& rs, double X, const Grid& g,
             const FluidParams& p) {
    Field q(g.n);
    for (int i = 0; i < g.n; ++i) {
        q[i] = q_rel(v[i], rs.v_at(g.xi(i) - X), p);
    }
    return integrate(q, g);
}

StabilityMetrics stability_metrics(const MacroSnapshot& ms, const RiemannShock& rs,
                                   double X_total, const FluidParams& p) {
    const Grid& g = ms.grid;
    StabilityMetrics out;
    Field l1(g.n), kin(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.xi(i);
        l1[i] = std::abs(ms.v[i] - rs.v_at(x - rs.s.sigma * ms.t));
        const double du = ms.u[i] - rs.u_at(x - X_total);
        kin[i] = 0.5 * du * du;
    }
    out.l1_window = integrate(l1, g);
    out.kinetic = integrate(kin, g);
    out.dq = dq_ac(ms.v, rs, X_total, g, p);
    return out;
}

namespace {

double erf_step(double x, double omega) {
    return 0.5 * (1.0 + std::erf(x / (std::sqrt(2.0) * omega)));
}

double gaussian(double x, double center, double width) {
    const double z = (x - center) / width;
    return std::exp(-0.5 * z * z);
}

}  // namespace

WellPrepared well_prepared_data(const RiemannShock& rs, const WellPreparedSpec& spec,
                                double nu, const Profile& prof, const Grid& unit_grid) {
    if (!(nu > 0.0)) throw DomainError("well_prepared_data: nu must be positive");
    const auto& p = prof.params;
    const auto& s = rs.s;
    const int n = unit_grid.n;

    WellPrepared wp;
    wp.unit_state.t = 0.0;
    wp.unit_state.v.resize(n);
    wp.unit_state.h.resize(n);

    // The unit-frame coordinate xi corresponds to the macroscopic x = nu xi
    // at t = 0. The base data is either the wave itself or a mollified step;
    // the bump lives at the macroscopic scale.
    Field wave_v(n), wave_h(n);
    for (int i = 0; i < n; ++i) {
        const double xi = unit_grid.xi(i);
        const double x = nu * xi;
        const ProfilePoint q = prof.at(xi);
        wave_v[i] = q.v;
        wave_h[i] = q.h;
        double v0, h0;
        if (spec.kind == WellPreparedSpec::Kind::ProfileBased) {
            v0 = q.v;
            h0 = q.h;
        } else {
            const double step = erf_step(x, spec.omega);
            v0 = s.v_minus + (s.v_plus - s.v_minus) * step;
            h0 = s.u_minus + (s.u_plus - s.u_minus) * step;
        }
        const double bump = gaussian(x, spec.center, spec.width);
        wp.unit_state.v[i] = v0 + spec.amp_v * bump;
        wp.unit_state.h[i] = h0 + spec.amp_h * bump;
    }
    if ((wp.unit_state.v <= 0.0).any()) {
        throw NumericsError("well_prepared_data: non-positive initial volume");
    }

    // Relative entropies, reported at the macroscopic scale (dx_macro = nu dxi).
    Field vs_wave(n), vs_riemann(n);
    for (int i = 0; i < n; ++i) {
        const double x = nu * unit_grid.xi(i);
        vs_wave[i] = rel_entropy_density(wp.unit_state.v[i], wp.unit_state.h[i],
                                         wave_v[i], wave_h[i], p);
        vs_riemann[i] = rel_entropy_density(wp.unit_state.v[i], wp.unit_state.h[i],
                                            rs.v_at(x), rs.u_at(x), p);
    }
    wp.entropy_vs_wave = nu * integrate(vs_wave, unit_grid);
    wp.entropy_vs_riemann = nu * integrate(vs_riemann, unit_grid);
    return wp;
}

LimitResult run_limit_experiment(const Profile& prof, const NuLadder& ladder,
                                 const WellPreparedSpec& wps, double lambda,
                                 double delta3, double cfl, double v_floor,
                                 int macro_n) {
    if (ladder.nus.empty()) throw DomainError("empty nu ladder");
    for (std::size_t i = 0; i + 1 < ladder.nus.size(); ++i) {
        if (!(ladder.nus[i] > ladder.nus[i + 1])) {
            throw DomainError("nu ladder must be strictly decreasing");
        }
    }
    const ShockData& s = prof.shock;
    const FluidParams& p = prof.params;
    const Grid& g = prof.grid;
    const double nu_min = ladder.nus.back();
    const double z_need = (ladder.window + std::abs(s.sigma) * ladder.horizon) / nu_min;
    if (g.L < z_need) {
        throw DomainError("unit domain too small for the ladder: need L >= " +
                          std::to_string(z_need));
    }

    const RiemannShock rs{s};
    const WellPrepared wp = well_prepared_data(rs, wps, 1.0, prof, g);

    const std::vector<double> report_times = {
        0.25 * ladder.horizon, 0.5 * ladder.horizon, 0.75 * ladder.horizon,
        ladder.horizon};
    std::vector<double> unit_times;
    for (double nu : ladder.nus)
        for (double t : report_times) unit_times.push_back(t / nu);
    std::sort(unit_times.begin(), unit_times.end());
    unit_times.erase(
        std::unique(unit_times.begin(), unit_times.end(),
                    [](double a, double b) { return std::abs(a - b) < 1e-10; }),
        unit_times.end());

    SolverConfig scfg;
    scfg.cfl = cfl;
    scfg.v_floor = v_floor;
    scfg.t_end = unit_times.back();
    scfg.out_stride = unit_times.back() / 200.0;
    const WeightSpec w{lambda, s.eps};
    const ContractionRun run =
        run_contraction(wp.unit_state, g, prof, p, s, w, delta3, scfg, unit_times);

    auto capture_index = [&](double su) {
        for (std::size_t i = 0; i < unit_times.size(); ++i) {
            if (std::abs(unit_times[i] - su) < 1e-9 * std::max(1.0, su)) return i;
        }
        throw ConvergenceError("missing capture at unit time " + std::to_string(su));
    };

    LimitResult out;
    out.entropy_vs_wave = wp.entropy_vs_wave;
    out.entropy_vs_riemann = wp.entropy_vs_riemann;
    out.int_f = run.int_f;
    const Grid macro(ladder.window, macro_n);
    for (double nu : ladder.nus) {
        for (double t : report_times) {
            const std::size_t k = capture_index(t / nu);
            const MacroSnapshot ms = rescale_snapshot(run.captures[k], g, s, p, nu, t, macro);
            const double drift = nu * run.capture_X[k];
            const double X_total = s.sigma * t + drift;
            const StabilityMetrics m = stability_metrics(ms, rs, X_total, p);
            out.rows.push_back({nu, t, m.l1_window, m.dq, m.kinetic, X_total,
                                std::abs(drift)});
            if (t == report_times.back()) {
                out.fitted_C = std::max(out.fitted_C, m.l1_window / nu);
            }
        }
    }
    return out;
}

}  // namespace nsk
