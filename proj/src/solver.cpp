#include "nsk/solver.hpp"

#include <cmath>

namespace nsk {

namespace {

// Conservative divergence of coeff * d(q)/dxi with arithmetic-mean face
// coefficients; zero on the boundary rows.
Field flux_divergence(const Field& coeff, const Field& q, const Grid& g) {
    const int n = g.n;
    const double dx = g.dx();
    Field out = Field::Zero(n);
    for (int i = 1; i < n - 1; ++i) {
        const double fp = 0.5 * (coeff[i] + coeff[i + 1]) * (q[i + 1] - q[i]) / dx;
        const double fm = 0.5 * (coeff[i - 1] + coeff[i]) * (q[i] - q[i - 1]) / dx;
        out[i] = (fp - fm) / dx;
    }
    return out;
}

Field central_dx(const Field& f, const Grid& g) {
    const int n = g.n;
    const double dx = g.dx();
    Field out = Field::Zero(n);
    for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    return out;
}

void check_state(const State& st, double v_floor, const Grid& g) {
    double vmin = st.v.minCoeff();
    if (!(vmin > v_floor)) {
        int loc = 0;
        st.v.minCoeff(&loc);
        throw NumericsError("positivity violation: min v = " + std::to_string(vmin) +
                            " at t = " + std::to_string(st.t) +
                            ", xi = " + std::to_string(g.xi(loc)));
    }
    if (!st.v.isFinite().all() || !st.h.isFinite().all()) {
        throw NumericsError("non-finite state at t = " + std::to_string(st.t));
    }
}

}  // namespace

std::pair<Field, Field> semidiscrete_rhs(const State& st, const Grid& g,
                                         const FluidParams& p, const ShockData& s,
                                         double nu) {
    const int n = g.n;
    if (st.v.size() != n || st.h.size() != n) {
        throw DomainError("semidiscrete_rhs: state does not match grid");
    }
    const Field pv = pressure(st.v, p);
    const Field vbeta = st.v.pow(p.beta);
    const Field vma = st.v.pow(-p.alpha - 1.0);

    Field dvdt = s.sigma * central_dx(st.v, g) + central_dx(st.h, g) -
                 nu * p.tau1 * flux_divergence(vbeta, pv, g);
    Field dhdt = s.sigma * central_dx(st.h, g) - central_dx(pv, g) +
                 nu * p.tau2 * p.gamma * flux_divergence(vma, st.h, g);
    dvdt[0] = dvdt[n - 1] = 0.0;
    dhdt[0] = dhdt[n - 1] = 0.0;
    return {std::move(dvdt), std::move(dhdt)};
}

double stable_dt(const State& st, const Grid& g, const FluidParams& p,
                 const ShockData& s, const SolverConfig& cfg) {
    const double dx = g.dx();
    const double dv_coeff =
        cfg.nu * p.tau1 * p.gamma * st.v.pow(p.beta - p.gamma - 1.0).maxCoeff();
    const double dh_coeff =
        cfg.nu * p.tau2 * p.gamma * st.v.pow(-p.alpha - 1.0).maxCoeff();
    const double diff = std::max(dv_coeff, dh_coeff);
    double dt = cfg.cfl * dx * dx / std::max(diff, 1e-300);
    // advective cap, relevant only on coarse grids
    const double speed = std::abs(s.sigma) + s.sigma_star;
    dt = std::min(dt, 0.5 * dx / std::max(speed, 1e-300));
    return dt;
}

State step(const State& st, double dt, const Grid& g, const FluidParams& p,
           const ShockData& s, const SolverConfig& cfg) {
    check_state(st, cfg.v_floor, g);
    auto rhs = [&](const State& q) { return semidiscrete_rhs(q, g, p, s, cfg.nu); };

    auto [k1v, k1h] = rhs(st);
    State s2{st.t + 0.5 * dt, st.v + 0.5 * dt * k1v, st.h + 0.5 * dt * k1h};
    check_state(s2, cfg.v_floor, g);
    auto [k2v, k2h] = rhs(s2);
    State s3{st.t + 0.5 * dt, st.v + 0.5 * dt * k2v, st.h + 0.5 * dt * k2h};
    check_state(s3, cfg.v_floor, g);
    auto [k3v, k3h] = rhs(s3);
    State s4{st.t + dt, st.v + dt * k3v, st.h + dt * k3h};
    check_state(s4, cfg.v_floor, g);
    auto [k4v, k4h] = rhs(s4);

    State out;
    out.t = st.t + dt;
    out.v = st.v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    out.h = st.h + (dt / 6.0) * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
    check_state(out, cfg.v_floor, g);
    return out;
}

std::vector<State> simulate(const State& initial, const Grid& g,
                            const FluidParams& p, const ShockData& s,
                            const SolverConfig& cfg,
                            const std::vector<double>& capture_times,
                            const MonitorHook& hook) {
    std::vector<double> captures = capture_times;
    if (captures.empty()) captures = {initial.t, cfg.t_end};
    std::vector<State> out;
    out.reserve(captures.size());

    State st = initial;
    if (hook) hook(st);
    std::size_t ci = 0;
    while (ci < captures.size() && captures[ci] <= st.t + 1e-12) {
        out.push_back(st);
        ++ci;
    }
    double next_hook = st.t + cfg.out_stride;
    const double t_final = std::max(cfg.t_end, captures.empty() ? cfg.t_end
                                                               : captures.back());
    while (st.t < t_final - 1e-12) {
        double dt = stable_dt(st, g, p, s, cfg);
        double t_stop = std::min(next_hook, t_final);
        if (ci < captures.size()) t_stop = std::min(t_stop, captures[ci]);
        if (t_stop - st.t <= 1e-12 * std::max(1.0, t_final)) {
            st.t = t_stop;  // coincident stop times: relabel, no degenerate step
        } else {
            dt = std::min(dt, t_stop - st.t);
            st = step(st, dt, g, p, s, cfg);
        }
        if (ci < captures.size() && st.t >= captures[ci] - 1e-12) {
            out.push_back(st);
            ++ci;
        }
        if (st.t >= next_hook - 1e-12) {
            if (hook) hook(st);
            next_hook += cfg.out_stride;
        }
    }
    return out;
}

Field transform_residual(const Field& v, const Field& u, const Grid& g,
                         const FluidParams& p, KappaModel model) {
    if ((v <= 0.0).any()) throw DomainError("transform_residual: non-positive v");
    const Field vx = ddx(v, g);
    const Field vxx = d2dx(v, g);
    const Field ux = ddx(u, g);
    const Field mu = p.b * v.pow(-p.alpha);

    Field kappa, dkappa;
    if (model == KappaModel::Relation) {
        kappa = p.c * p.b * p.b * v.pow(3.0 - 2.0 * p.alpha);
        dkappa = p.c * p.b * p.b * (3.0 - 2.0 * p.alpha) * v.pow(2.0 - 2.0 * p.alpha);
    } else {
        kappa = v;
        dkappa = Field::Ones(v.size());
    }

    const Field korteweg =
        kappa * (-vxx / v.pow(5.0) + 2.5 * vx.square() / v.pow(6.0)) -
        0.5 * dkappa * vx.square() / v.pow(5.0);
    const Field lhs = (1.0 - p.tau1) * ddx(mu * ux / v, g) + ddx(korteweg, g);

    const Field h = u - p.tau1 * mu * vx / v;
    const Field rhs = p.tau2 * ddx(mu * ddx(h, g) / v, g);
    return lhs - rhs;
}

}  // namespace nsk
