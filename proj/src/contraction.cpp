#include "nsk/contraction.hpp"

#include <algorithm>
#include <cmath>

namespace nsk {

double weight_a(double p_vt, double p_vminus, const WeightSpec& w) {
    return 1.0 - (w.lambda / w.eps) * (p_vt - p_vminus);
}

double phi_eps(double y, double eps) {
    if (!(eps > 0.0)) throw DomainError("phi_eps requires eps > 0");
    const double e2 = eps * eps;
    if (y <= -e2) return 1.0 / e2;
    if (y >= e2) return -1.0 / e2;
    return -y / (e2 * e2);
}

ShiftedProfile sample_shifted_profile(const Profile& prof, const WeightSpec& w,
                                      double X, const Grid& g) {
    const int n = g.n;
    ShiftedProfile sp;
    sp.vt.resize(n);
    sp.ht.resize(n);
    sp.dvt.resize(n);
    sp.dht.resize(n);
    sp.d2ht.resize(n);
    for (int i = 0; i < n; ++i) {
        const ProfilePoint q = prof.at(g.xi(i) - X);
        sp.vt[i] = q.v;
        sp.ht[i] = q.h;
        sp.dvt[i] = q.dv;
        sp.dht[i] = q.dh;
        sp.d2ht[i] = q.d2h;
    }
    const auto& p = prof.params;
    sp.pt = pressure(sp.vt, p);
    sp.dpt = dpressure(sp.vt, p) * sp.dvt;
    const double p_minus = pressure(prof.shock.v_minus, p);
    sp.a = 1.0 - (w.lambda / w.eps) * (sp.pt - p_minus);
    sp.ap = -(w.lambda / w.eps) * sp.dpt;
    return sp;
}

namespace {

struct Arrays {
    ShiftedProfile sp;
    Field pv, dp, dh, Q, prel, eta;
    Field ddp, ddh;
    Field vbeta, vma;
    Field in_m, out_m;
};

Arrays build_arrays(const State& st, const Grid& g, const Profile& prof,
                    const WeightSpec& w, double X, double delta3) {
    const auto& p = prof.params;
    Arrays A;
    A.sp = sample_shifted_profile(prof, w, X, g);
    A.pv = pressure(st.v, p);
    A.dp = A.pv - A.sp.pt;
    A.dh = st.h - A.sp.ht;
    A.Q = q_rel(st.v, A.sp.vt, p);
    A.prel = p_rel(st.v, A.sp.vt, p);
    A.eta = 0.5 * A.dh.square() + A.Q;
    A.ddp = ddx(A.dp, g);
    A.ddh = ddx(A.dh, g);
    A.vbeta = st.v.pow(p.beta);
    A.vma = st.v.pow(-p.alpha - 1.0);
    A.in_m = (A.dp <= delta3).cast<double>();
    A.out_m = 1.0 - A.in_m;
    return A;
}

}  // namespace

FunctionalReport evaluate_functionals(const State& st, const Grid& g,
                                      const Profile& prof, const WeightSpec& w,
                                      double X, double delta3) {
    if (prof.shock.family != ShockFamily::Two) {
        throw DomainError("contraction functionals expect a 2-shock comparison wave");
    }
    const auto& p = prof.params;
    const ShockData& s = prof.shock;
    const double sg = s.sigma;
    const Arrays A = build_arrays(st, g, prof, w, X, delta3);
    const auto& sp = A.sp;
    auto T = [&](const Field& f) { return integrate(f, g); };

    FunctionalReport r;
    r.E_weighted = T(sp.a * A.eta);
    r.Y = -T(sp.ap * A.eta) +
          T(sp.a * (-sp.dpt * (st.v - sp.vt) + sp.dht * A.dh));

    r.J_bad = T(sp.ap * A.dp * A.dh) + sg * T(sp.a * sp.dvt * A.prel);
    r.P1 = -p.tau1 * (T(sp.ap * A.vbeta * A.dp * A.ddp) +
                      T(sp.ap * A.dp * (A.vbeta - sp.vt.pow(p.beta)) * sp.dpt) +
                      T(sp.a * A.ddp * (A.vbeta - sp.vt.pow(p.beta)) * sp.dpt));
    const Field vtma = sp.vt.pow(-p.alpha - 1.0);
    r.P2 = -p.tau2 * p.gamma * T(sp.ap * A.vma * A.dh * A.ddh) +
           p.tau2 * p.gamma * T(sp.a * A.dh * (A.vma - vtma) * sp.d2ht) +
           p.tau2 * p.gamma * T(sp.a * A.dh * ddx(Field(A.vma - vtma), g) * sp.dht);
    r.G_p = sg * T(sp.ap * A.Q);
    r.D_p = p.tau1 * T(sp.a * A.vbeta * A.ddp.square());
    r.D_h = p.tau2 * p.gamma * T(sp.a * A.vma * A.ddh.square());
    r.J_good = r.G_p + 0.5 * sg * T(sp.ap * A.dh.square()) + r.D_p + r.D_h;

    r.B1_plus = 0.5 / sg * T(sp.ap * A.dp.square() * A.in_m);
    r.B1_minus = T(sp.ap * A.dp * A.dh * A.out_m);
    r.B2 = sg * T(sp.a * sp.dvt * A.prel);
    r.G_h_minus = 0.5 * sg * T(sp.ap * A.dh.square() * A.out_m);
    const Field res_h = A.dh - A.dp / sg;
    r.G_h_plus = 0.5 * sg * T(sp.ap * res_h.square() * A.in_m);

    r.Y_g = -0.5 / (sg * sg) * T(sp.ap * A.dp.square() * A.in_m) -
            T(sp.ap * A.Q * A.in_m) - T(sp.a * sp.dpt * (st.v - sp.vt) * A.in_m) +
            1.0 / sg * T(sp.a * sp.dht * A.dp * A.in_m);
    r.Y_b = -0.5 * T(sp.ap * res_h.square() * A.in_m) -
            1.0 / sg * T(sp.ap * A.dp * res_h * A.in_m);
    r.Y_l = T(sp.a * sp.dht * res_h * A.in_m);
    r.Y_s = -T(sp.ap * A.Q * A.out_m) - T(sp.a * sp.dpt * (st.v - sp.vt) * A.out_m) -
            0.5 * T(sp.ap * A.dh.square() * A.out_m) +
            T(sp.a * sp.dht * A.dh * A.out_m);

    // Functionals of the two-sided truncation vbar.
    const Field dpb = A.dp.min(delta3).max(-delta3);
    const Field pvb = sp.pt + dpb;
    const Field vb = inv_pressure(pvb, p);
    r.I_1 = 0.5 / sg * T(sp.ap * dpb.square());
    r.I_2 = sg * T(sp.a * sp.dvt * p_rel(vb, sp.vt, p));
    r.I_gY = -0.5 / (sg * sg) * T(sp.ap * dpb.square()) - T(sp.ap * q_rel(vb, sp.vt, p)) -
             T(sp.a * sp.dpt * (vb - sp.vt)) + 1.0 / sg * T(sp.a * sp.dht * dpb);

    r.Xdot = shift_rate(r.Y, r.J_bad, r.P1, r.P2, w.eps);

    const int n = g.n;
    r.boundary_tail =
        (std::abs(sp.a[0] * A.eta[0]) + std::abs(sp.a[n - 1] * A.eta[n - 1])) / w.eps;
    return r;
}

double evaluate_Y(const State& st, const Grid& g, const Profile& prof,
                  const WeightSpec& w, double X) {
    const ShiftedProfile sp = sample_shifted_profile(prof, w, X, g);
    const auto& p = prof.params;
    const Field dh = st.h - sp.ht;
    const Field eta = 0.5 * dh.square() + q_rel(st.v, sp.vt, p);
    return -integrate(Field(sp.ap * eta), g) +
           integrate(Field(sp.a * (-sp.dpt * (st.v - sp.vt) + sp.dht * dh)), g);
}

TruncatedV truncate_v(const Field& v, const Profile& prof, double k) {
    if (!(k > 0.0)) throw DomainError("truncation level k must be positive");
    const auto& p = prof.params;
    const Field pv = pressure(v, p);
    const Field pt = pressure(prof.vt, p);
    const Field dp = pv - pt;
    TruncatedV t;
    t.vbar_k = inv_pressure(Field(pt + dp.min(k).max(-k)), p);
    t.vbar_s = inv_pressure(Field(pt + dp.max(-k)), p);
    t.vbar_b = inv_pressure(Field(pt + dp.min(k)), p);
    return t;
}

Field truncate_h(const Field& h, const Profile& prof, double delta3) {
    if (!(delta3 > 0.0)) throw DomainError("truncation level delta3 must be positive");
    const Field dh = h - prof.ht;
    return prof.ht + dh.min(delta3).max(-delta3);
}

double shift_rate(double Y, double J_bad, double P1, double P2, double eps) {
    const double M = 2 * std::abs(J_bad) + 2 * std::abs(P1) + 2 * std::abs(P2) + 1.0;
    return phi_eps(Y, eps) * M;
}

ShiftState advance_shift(const ShiftState& ss, double dt, double M, double eps,
                         double dYdX_est, const State& frozen, const Grid& g,
                         const Profile& prof, const WeightSpec& w) {
    const double e4 = eps * eps * eps * eps;
    // Sub-step so one Euler update moves Y by at most ~0.3 of the band slope.
    const double rate_scale = M * std::abs(dYdX_est) / e4;
    int nsub = 1;
    if (rate_scale > 0.0 && std::isfinite(rate_scale)) {
        nsub = std::clamp(static_cast<int>(std::ceil(dt * rate_scale / 0.3)), 1, 64);
    }
    const double h = dt / nsub;
    double X = ss.X;
    for (int k = 0; k < nsub; ++k) {
        const double Yv = evaluate_Y(frozen, g, prof, w, X);
        X += h * phi_eps(Yv, eps) * M;
    }
    return {ss.t + dt, X, (X - ss.X) / dt};
}

ContractionRun run_contraction(const State& initial, const Grid& g,
                               const Profile& prof, const FluidParams& p,
                               const ShockData& s, const WeightSpec& w,
                               double delta3, const SolverConfig& cfg,
                               const std::vector<double>& capture_times,
                               double delta0) {
    ContractionRun run;
    State U = initial;
    ShiftState shift;
    shift.t = U.t;

    auto ledger = [&](double E) {
        return E + delta0 * (w.eps / w.lambda) * run.int_Gp + delta0 * run.int_D;
    };
    auto gain_gap = [&](const FunctionalReport& r) {
        // Phi_eps(Y) M Y <= -(M - 1) for |Y| >= eps^2 and <= -Y^2/eps^4 below
        const double e2 = w.eps * w.eps;
        const double lhs = r.Xdot * r.Y;
        const double bound = std::abs(r.Y) >= e2 ? -(r.bad_sum()) : -r.Y * r.Y / (e2 * e2);
        return lhs - bound;
    };

    FunctionalReport rep = evaluate_functionals(U, g, prof, w, shift.X, delta3);
    run.E0 = rep.E_weighted;
    run.max_gain_gap = gain_gap(rep);
    run.rows.push_back({U.t, shift.X, rep, 0.0, 0.0, ledger(rep.E_weighted)});

    std::size_t ci = 0;
    auto capture_if_due = [&]() {
        while (ci < capture_times.size() && capture_times[ci] <= U.t + 1e-12) {
            run.captures.push_back(U);
            run.capture_X.push_back(shift.X);
            ++ci;
        }
    };
    capture_if_due();

    const double t_final =
        std::max(cfg.t_end, capture_times.empty() ? cfg.t_end : capture_times.back());
    double next_row = U.t + cfg.out_stride;
    const double probe = std::max(1e-4, 1e-3 * w.eps);

    while (U.t < t_final - 1e-12) {
        double dt = stable_dt(U, g, p, s, cfg);
        double t_stop = std::min(next_row, t_final);
        if (ci < capture_times.size()) t_stop = std::min(t_stop, capture_times[ci]);
        if (t_stop - U.t <= 1e-12 * std::max(1.0, t_final)) {
            // coincident stop times: relabel instead of taking a degenerate step
            U.t = t_stop;
            capture_if_due();
            if (U.t >= next_row - 1e-12) {
                run.rows.push_back({U.t, shift.X, rep, run.int_Gp, run.int_D,
                                    ledger(rep.E_weighted)});
                next_row += cfg.out_stride;
            }
            continue;
        }
        dt = std::min(dt, t_stop - U.t);

        const double M = rep.bad_sum() + 1.0;
        const double dYdX =
            (evaluate_Y(U, g, prof, w, shift.X + probe) - rep.Y) / probe;

        const State U_new = step(U, dt, g, p, s, cfg);
        const ShiftState shift_new =
            advance_shift(shift, dt, M, w.eps, dYdX, U, g, prof, w);
        const FunctionalReport rep_new =
            evaluate_functionals(U_new, g, prof, w, shift_new.X, delta3);

        const double F_old = rep.J_bad + rep.P1 + rep.P2 - rep.J_good;
        const double F_new = rep_new.J_bad + rep_new.P1 + rep_new.P2 - rep_new.J_good;
        const double dE = rep_new.E_weighted - rep.E_weighted;
        const double resid =
            dE - dt * (0.5 * shift_new.Xdot * (rep.Y + rep_new.Y) + 0.5 * (F_old + F_new));
        run.identity_residual = std::max(run.identity_residual, std::abs(resid) / dt);

        const double slack = 1e-6 * run.E0 +
                             std::max(rep.boundary_tail, rep_new.boundary_tail);
        run.max_entropy_violation = std::max(run.max_entropy_violation, dE - slack);

        run.max_xdot_bound_gap =
            std::max(run.max_xdot_bound_gap,
                     std::abs(shift_new.Xdot) - M / (w.eps * w.eps));

        const double f_old = rep.bad_sum();
        const double f_new = rep_new.bad_sum();
        run.int_Gp += 0.5 * dt * (rep.G_p + rep_new.G_p);
        run.int_D += 0.5 * dt * (rep.D_h + rep.D_p + rep_new.D_h + rep_new.D_p);
        run.int_f += 0.5 * dt * (f_old + f_new);
        run.max_gain_gap = std::max(run.max_gain_gap, gain_gap(rep_new));

        U = U_new;
        shift = shift_new;
        rep = rep_new;
        ++run.steps;

        capture_if_due();
        if (U.t >= next_row - 1e-12) {
            run.rows.push_back({U.t, shift.X, rep, run.int_Gp, run.int_D,
                                ledger(rep.E_weighted)});
            next_row += cfg.out_stride;
        }
    }
    return run;
}

}  // namespace nsk
