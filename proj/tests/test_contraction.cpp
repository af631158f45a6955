#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nsk/contraction.hpp"

using namespace nsk;

namespace {

Profile make_profile(double eps = 0.1, int n = 1501, double L = 0.0) {
    const FluidParams p = make_fluid_params(1.0, 0.0, 0.09);
    const ShockData s = solve_end_states(1.0, 0.0, eps, ShockFamily::Two, p);
    ProfileOptions opt;
    opt.n = n;
    opt.L = L;
    return compute_profile(s, p, opt);
}

State perturbed_state(const Profile& prof, double av, double ah, double width,
                      double center) {
    State st{0.0, prof.vt, prof.ht};
    for (int i = 0; i < prof.grid.n; ++i) {
        const double z = (prof.grid.xi(i) - center) / width;
        st.v[i] += av * std::exp(-0.5 * z * z);
        st.h[i] += ah * std::exp(-0.5 * z * z);
    }
    return st;
}

}  // namespace

TEST_CASE("weight function range and total variation") {
    {
        const WeightSpec w{0.3, 0.1};
        CHECK(weight_a(1.0, 1.0, w) == 1.0);
        CHECK(weight_a(0.9, 1.0, w) == doctest::Approx(1.3).epsilon(1e-14));
    }
    const Profile prof = make_profile(0.1, 4001, 300.0);
    const WeightSpec w{0.3, 0.1};
    const Grid& g = prof.grid;
    const ShiftedProfile sp = sample_shifted_profile(prof, w, 0.0, g);
    CHECK(sp.a.minCoeff() >= 1.0 - 1e-12);
    CHECK(sp.a.maxCoeff() <= 1.0 + w.lambda + 1e-12);
    CHECK(sp.a[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(sp.a[g.n - 1] == doctest::Approx(1.0 + w.lambda).epsilon(1e-4));
    CHECK((sp.ap >= 0.0).all());
    CHECK((sp.ap.segment(1, g.n - 2) > 0.0).all());
    CHECK(std::abs(integrate(sp.ap.abs(), g) - w.lambda) <= 1e-8);

    // lambda = 0 degenerates to the unweighted entropy
    const ShiftedProfile sp0 = sample_shifted_profile(prof, WeightSpec{0.0, 0.1}, 0.0, g);
    CHECK((sp0.a == 1.0).all());
    CHECK((sp0.ap == 0.0).all());

    // a'/( (lambda/eps)|vt'| ) = |p'(vt)| bounded above and below
    const auto& p = prof.params;
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < g.n; ++i) {
        const double r = sp.ap[i] / ((w.lambda / w.eps) * sp.dvt[i]);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(lo >= -dpressure(prof.shock.v_plus, p) - 1e-12);
    CHECK(hi <= -dpressure(prof.shock.v_minus, p) + 1e-12);
    CHECK(lo > 0.0);
}

TEST_CASE("feedback gain profile") {
    CHECK(phi_eps(0.0, 0.1) == 0.0);
    CHECK(phi_eps(0.02, 0.1) == doctest::Approx(-100.0).epsilon(1e-14));
    CHECK(phi_eps(-0.005, 0.1) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(phi_eps(1.0, 0.1) == doctest::Approx(-100.0));
    CHECK(phi_eps(-1.0, 0.1) == doctest::Approx(100.0));
    // continuity at the junctions and global bound
    const double e2 = 0.01;
    CHECK(phi_eps(e2 - 1e-12, 0.1) == doctest::Approx(phi_eps(e2, 0.1)).epsilon(1e-6));
    CHECK(phi_eps(-e2 + 1e-12, 0.1) == doctest::Approx(phi_eps(-e2, 0.1)).epsilon(1e-6));
    for (double y = -0.05; y <= 0.05; y += 1e-3) {
        CHECK(std::abs(phi_eps(y, 0.1)) <= 100.0 + 1e-12);
    }
    CHECK_THROWS_AS(phi_eps(0.0, 0.0), DomainError);
}

TEST_CASE("zero perturbation zeroes every functional") {
    const Profile prof = make_profile();
    const State st{0.0, prof.vt, prof.ht};
    const WeightSpec w{0.3, 0.1};
    const FunctionalReport r =
        evaluate_functionals(st, prof.grid, prof, w, 0.0, 0.1);
    CHECK(r.E_weighted == 0.0);
    CHECK(r.Y == 0.0);
    CHECK(r.J_bad == 0.0);
    CHECK(r.J_good == 0.0);
    CHECK(r.P1 == 0.0);
    CHECK(r.P2 == 0.0);
    CHECK(r.B1_plus == 0.0);
    CHECK(r.B1_minus == 0.0);
    CHECK(r.B2 == 0.0);
    CHECK(r.G_h_minus == 0.0);
    CHECK(r.G_h_plus == 0.0);
    CHECK(r.G_p == 0.0);
    CHECK(r.D_h == 0.0);
    CHECK(r.D_p == 0.0);
    CHECK(r.I_gY == 0.0);
    CHECK(r.I_1 == 0.0);
    CHECK(r.I_2 == 0.0);
    CHECK(r.Xdot == 0.0);
}

TEST_CASE("pure h-perturbation against a direct quadrature") {
    const Profile prof = make_profile();
    const Grid& g = prof.grid;
    const WeightSpec w{0.3, 0.1};
    State st{0.0, prof.vt, prof.ht};
    Field phi(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double z = (g.xi(i) - 1.0) / 0.8;
        phi[i] = 0.05 * std::exp(-0.5 * z * z);
    }
    st.h += phi;
    const FunctionalReport r = evaluate_functionals(st, g, prof, w, 0.0, 0.1);

    // independent quadrature of the definition with v = vt
    const ShiftedProfile sp = sample_shifted_profile(prof, w, 0.0, g);
    const double Y_direct =
        integrate(Field(-sp.ap * 0.5 * phi.square() + sp.a * sp.dht * phi), g);
    CHECK(r.Y == doctest::Approx(Y_direct).epsilon(1e-12));
    CHECK(r.E_weighted ==
          doctest::Approx(integrate(Field(sp.a * 0.5 * phi.square()), g)).epsilon(1e-12));
    CHECK(r.J_bad == 0.0);
    CHECK(r.B1_minus == 0.0);
    CHECK(r.B1_plus == 0.0);
    CHECK(r.B2 == 0.0);
    CHECK(r.G_p == 0.0);
    CHECK(r.D_p == 0.0);
    CHECK(r.P1 == 0.0);
    CHECK(r.D_h > 0.0);
}

TEST_CASE("decomposition identities on random states") {
    const Profile prof = make_profile();
    const Grid& g = prof.grid;
    const WeightSpec w{0.316, 0.1};
    std::mt19937_64 rng(411);
    std::uniform_real_distribution<double> amp(-0.4, 0.4);
    std::uniform_real_distribution<double> pos(-30.0, 30.0);
    std::uniform_real_distribution<double> wid(0.5, 4.0);
    for (int k = 0; k < 12; ++k) {
        const State st = perturbed_state(prof, amp(rng), amp(rng), wid(rng), pos(rng));
        const double X = 0.3 * amp(rng);
        const FunctionalReport r = evaluate_functionals(st, g, prof, w, X, 0.1);
        CHECK(std::abs(r.Y - (r.Y_g + r.Y_b + r.Y_l + r.Y_s)) <= 1e-12);
        const double lhs = r.J_bad - r.J_good;
        const double rhs = (r.B1_plus + r.B1_minus + r.B2) -
                           (r.G_h_minus + r.G_h_plus + r.G_p + r.D_h + r.D_p);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
        CHECK(evaluate_Y(st, g, prof, w, X) == doctest::Approx(r.Y).epsilon(1e-13));
    }
}

TEST_CASE("pressure truncations act nodewise") {
    const Profile prof = make_profile();
    const auto& p = prof.params;
    const Grid& g = prof.grid;
    State st = perturbed_state(prof, 0.35, 0.0, 2.0, 3.0);
    st.v -= 0.25 * (-0.5 * ((g.nodes() + 5.0) / 2.0).square()).exp();

    const double k = 0.05;
    const TruncatedV t = truncate_v(st.v, prof, k);
    const Field dp = pressure(st.v, p) - pressure(prof.vt, p);
    for (int i = 0; i < g.n; ++i) {
        const double dpk = pressure(t.vbar_k[i], p) - pressure(prof.vt[i], p);
        CHECK(dpk == doctest::Approx(std::clamp(dp[i], -k, k)).epsilon(1e-12));
        // one-sided: vbar_s only acts where dp < -k, vbar_b only where dp > k
        if (dp[i] >= -k) {
            CHECK(t.vbar_s[i] == doctest::Approx(st.v[i]).epsilon(1e-13));
        } else {
            CHECK(pressure(t.vbar_s[i], p) - pressure(prof.vt[i], p) ==
                  doctest::Approx(-k).epsilon(1e-12));
        }
        if (dp[i] <= k) {
            CHECK(t.vbar_b[i] == doctest::Approx(st.v[i]).epsilon(1e-13));
        } else {
            CHECK(pressure(t.vbar_b[i], p) - pressure(prof.vt[i], p) ==
                  doctest::Approx(k).epsilon(1e-12));
        }
        // vbar_k lies between v and vt
        const double lo = std::min(st.v[i], prof.vt[i]) - 1e-13;
        const double hi = std::max(st.v[i], prof.vt[i]) + 1e-13;
        CHECK(t.vbar_k[i] >= lo);
        CHECK(t.vbar_k[i] <= hi);
    }

    // small perturbations pass through untouched
    const State tiny = perturbed_state(prof, 1e-4, 0.0, 2.0, 0.0);
    const TruncatedV t2 = truncate_v(tiny.v, prof, k);
    CHECK((t2.vbar_k - tiny.v).abs().maxCoeff() <= 1e-14);

    // k -> 0 collapses to the profile
    const TruncatedV t3 = truncate_v(st.v, prof, 1e-15);
    CHECK((t3.vbar_k - prof.vt).abs().maxCoeff() <= 1e-10);

    // h truncation
    State sh = perturbed_state(prof, 0.0, 0.4, 2.0, 0.0);
    const Field hbar = truncate_h(sh.h, prof, 0.1);
    for (int i = 0; i < g.n; ++i) {
        CHECK(hbar[i] - prof.ht[i] ==
              doctest::Approx(std::clamp(sh.h[i] - prof.ht[i], -0.1, 0.1)).epsilon(1e-13));
    }
}

TEST_CASE("shift feedback rate") {
    CHECK(shift_rate(0.0, 0.3, 0.2, 0.1, 0.1) == 0.0);
    // saturated branch: Y >= eps^2
    const double M = 2 * 0.3 + 2 * 0.2 + 2 * 0.1 + 1.0;
    CHECK(shift_rate(0.02, 0.3, 0.2, 0.1, 0.1) == doctest::Approx(-100.0 * M));
    CHECK(shift_rate(-0.02, -0.3, 0.2, -0.1, 0.1) == doctest::Approx(100.0 * M));
    // odd gain: sign opposes Y
    for (double y : {1e-3, 5e-3, 0.02, 0.3}) {
        CHECK(shift_rate(y, 0.1, 0.0, 0.0, 0.1) < 0.0);
        CHECK(shift_rate(-y, 0.1, 0.0, 0.0, 0.1) > 0.0);
    }
}

TEST_CASE("shift update respects the rate bound and relaxes Y") {
    const Profile prof = make_profile();
    const Grid& g = prof.grid;
    const WeightSpec w{0.3, 0.1};
    const State st = perturbed_state(prof, 0.2, -0.1, 1.0, 2.0);
    const FunctionalReport r = evaluate_functionals(st, g, prof, w, 0.0, 0.1);
    const double M = r.bad_sum() + 1.0;
    const double probe = 1e-3;
    const double dYdX = (evaluate_Y(st, g, prof, w, probe) - r.Y) / probe;

    ShiftState ss;
    const double dt = 0.05;
    const ShiftState s1 = advance_shift(ss, dt, M, w.eps, dYdX, st, g, prof, w);
    CHECK(std::abs(s1.Xdot) <= M / (w.eps * w.eps) + 1e-12);
    CHECK(s1.t == doctest::Approx(dt));
    // several updates shrink |Y| toward the dead band
    ShiftState cur;
    double Yv = r.Y;
    for (int k = 0; k < 40; ++k) {
        cur = advance_shift(cur, dt, M, w.eps, dYdX, st, g, prof, w);
        Yv = evaluate_Y(st, g, prof, w, cur.X);
    }
    CHECK(std::abs(Yv) < std::abs(r.Y));
}

TEST_CASE("the dissipation-augmented ledger is non-increasing") {
    const Profile prof = make_profile(0.1, 1001);
    const Grid& g = prof.grid;
    const WeightSpec w{0.3, 0.1};
    const State st = perturbed_state(prof, 0.25, -0.15, 1.0, 2.0);
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.out_stride = 0.1;
    const ContractionRun run = run_contraction(st, g, prof, prof.params,
                                               prof.shock, w, 0.1, cfg, {}, 0.4);
    REQUIRE(run.rows.size() > 10);
    for (std::size_t i = 1; i < run.rows.size(); ++i) {
        // cumulative dissipations are monotone by construction
        CHECK(run.rows[i].cum_Gp >= run.rows[i - 1].cum_Gp);
        CHECK(run.rows[i].cum_D >= run.rows[i - 1].cum_D);
        // entropy + weighted dissipation history decays as a whole
        CHECK(run.rows[i].ledger_lhs <=
              run.rows[i - 1].ledger_lhs + 1e-6 * run.E0);
    }
    CHECK(run.rows.back().cum_D > 0.0);
}

TEST_CASE("monitor on the steady profile stays identically flat") {
    const Profile prof = make_profile(0.1, 1001);
    const State st{0.0, prof.vt, prof.ht};
    SolverConfig cfg;
    cfg.t_end = 0.5;
    cfg.out_stride = 0.1;
    const WeightSpec w{0.3, 0.1};
    const ContractionRun run =
        run_contraction(st, prof.grid, prof, prof.params, prof.shock, w, 0.1, cfg);
    CHECK(run.E0 == 0.0);
    // the discrete steady state is exact only to O(dx^2) truncation, so the
    // series is flat at that noise floor
    for (const auto& row : run.rows) {
        CHECK(std::abs(row.rep.E_weighted) <= 1e-15);
        CHECK(std::abs(row.rep.Y) <= 1e-10);
        CHECK(std::abs(row.X) <= 1e-7);
        CHECK(std::abs(row.rep.Xdot) <= 1e-5);
    }
    CHECK(run.max_entropy_violation <= 1e-15);
}

TEST_CASE("short perturbed run: decay, identity audit, rate bound") {
    const Profile prof = make_profile(0.1, 1001);
    const Grid& g = prof.grid;
    const WeightSpec w{0.3, 0.1};
    const State st = perturbed_state(prof, 0.25, -0.15, 1.0, 2.0);
    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.out_stride = 0.25;
    const ContractionRun run =
        run_contraction(st, g, prof, prof.params, prof.shock, w, 0.1, cfg);
    CHECK(run.E0 > 0.0);
    CHECK(run.max_entropy_violation <= 0.0);
    CHECK(run.max_xdot_bound_gap <= 1e-12);
    CHECK(run.max_gain_gap <= 1e-12);
    CHECK(run.rows.back().rep.E_weighted < run.E0);
    CHECK(std::isfinite(run.int_f));
    CHECK(run.int_Gp >= 0.0);
    CHECK(run.int_D >= 0.0);
    // the gain inequality at the recorded instants
    for (const auto& row : run.rows) {
        const auto& r = row.rep;
        const double lhsY = r.Xdot * r.Y;
        const double sumJ = 2 * std::abs(r.J_bad) + 2 * std::abs(r.P1) + 2 * std::abs(r.P2);
        const double e2 = w.eps * w.eps;
        if (std::abs(r.Y) >= e2) {
            CHECK(lhsY <= -sumJ - 1e-15);
        } else {
            CHECK(lhsY <= -r.Y * r.Y / (e2 * e2) + 1e-15);
        }
    }
}
