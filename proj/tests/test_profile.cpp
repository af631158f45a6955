#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsk/profile.hpp"
#include "nsk/fields.hpp"

using namespace nsk;

namespace {

// Residuals of the traveling-wave equations integrated from the left state;
// an independent check of tw_rhs output.
std::pair<double, double> integrated_residual(double v, double h, double dv,
                                              double dh, const ShockData& s,
                                              const FluidParams& p) {
    const double r1 = -s.sigma * (v - s.v_minus) - (h - s.u_minus) +
                      p.tau1 * std::pow(v, p.beta) * dpressure(v, p) * dv;
    const double r2 = -s.sigma * (h - s.u_minus) + pressure(v, p) -
                      pressure(s.v_minus, p) -
                      p.tau2 * p.gamma * std::pow(v, -p.alpha - 1.0) * dh;
    return {r1, r2};
}

// max interior residual of the unintegrated wave system, discrete derivatives
double vs_residual_max(const Profile& prof) {
    const auto& g = prof.grid;
    const auto& p = prof.params;
    const auto& s = prof.shock;
    const Field dv = ddx(prof.vt, g), dh = ddx(prof.ht, g);
    const Field pv = pressure(prof.vt, p);
    const Field r1 =
        -s.sigma * dv - dh + p.tau1 * ddx(Field(prof.vt.pow(p.beta) * ddx(pv, g)), g);
    const Field r2 = -s.sigma * dh + ddx(pv, g) -
                     p.tau2 * p.gamma *
                         ddx(Field(prof.vt.pow(-p.alpha - 1.0) * dh), g);
    double m = 0.0;
    for (int i = 2; i < g.n - 2; ++i) {
        m = std::max(m, std::max(std::abs(r1[i]), std::abs(r2[i])));
    }
    return m;
}

}  // namespace

TEST_CASE("tw_rhs vanishes at both end states") {
    const FluidParams p = make_fluid_params(1.1, 0.4, 0.06);
    const ShockData s = solve_end_states(1.2, 0.3, 0.15, ShockFamily::Two, p);
    {
        auto [dv, dh] = tw_rhs(s.v_minus, s.u_minus, s, p);
        CHECK(dv == 0.0);
        CHECK(dh == 0.0);
    }
    {
        auto [dv, dh] = tw_rhs(s.v_plus, s.u_plus, s, p);
        CHECK(std::abs(dv) <= 1e-14);
        CHECK(std::abs(dh) <= 1e-13);
    }
}

TEST_CASE("tw_rhs at an off-equilibrium point, frozen value") {
    const FluidParams p = make_fluid_params(1.0, 0.0, 0.09);
    const ShockData s = solve_end_states(1.0, 0.0, 0.5, ShockFamily::Two, p);
    auto [dv, dh] = tw_rhs(1.5, -0.35, s, p);
    CHECK(dv == doctest::Approx(-0.005922317655456347).epsilon(1e-12));
    CHECK(dh == doctest::Approx(-1.2876893987706253).epsilon(1e-12));
    auto [r1, r2] = integrated_residual(1.5, -0.35, dv, dh, s, p);
    CHECK(std::abs(r1) <= 1e-15);
    CHECK(std::abs(r2) <= 1e-15);
}

TEST_CASE("tw_rhs rejects degenerate capillarity") {
    const FluidParams p = make_fluid_params(1.0, 0.0, 0.0);
    const ShockData s = solve_end_states(1.0, 0.0, 0.2, ShockFamily::Two, p);
    CHECK_THROWS_AS(tw_rhs(1.1, -0.1, s, p), DomainError);
    CHECK_THROWS_AS(compute_profile(s, p), DomainError);
}

TEST_CASE("profile invariants at moderate amplitude") {
    const FluidParams p = make_fluid_params(1.1, 0.3, 0.05);
    const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::Two, p);
    ProfileOptions opt;
    opt.L = 140.0;  // 14/eps keeps the end-state gap below 1e-6
    opt.n = 2001;
    const Profile prof = compute_profile(s, p, opt);
    const int n = prof.grid.n;

    // boundary values and midpoint normalization
    CHECK(std::abs(prof.vt[0] - s.v_minus) <= 1e-6);
    CHECK(std::abs(prof.ht[0] - s.u_minus) <= 1e-6);
    CHECK(std::abs(prof.vt[n - 1] - s.v_plus) <= 1e-6);
    CHECK(std::abs(prof.ht[n - 1] - s.u_plus) <= 1e-6);
    CHECK(std::abs(prof.vt[(n - 1) / 2] - 0.5 * (s.v_minus + s.v_plus)) <= 1e-8);

    // strict monotonicity at every node
    for (int i = 0; i < n; ++i) {
        CHECK(prof.dvt[i] > 0.0);
        CHECK(prof.dht[i] < 0.0);
    }

    // effective-velocity relation u = h + tau1 g v'/v^(a+1) pointwise
    for (int i = 0; i < n; i += 97) {
        const double u = prof.ht[i] +
                         p.tau1 * p.gamma * prof.dvt[i] *
                             std::pow(prof.vt[i], -p.alpha - 1.0);
        CHECK(prof.ut[i] == doctest::Approx(u).epsilon(1e-14));
    }

    const ProfileReport rep = validate_profile(prof);
    CHECK(rep.monotone);
    CHECK(rep.boundary_gap <= 1e-6);
}

TEST_CASE("tail slopes and core slope scale with the amplitude") {
    const FluidParams p = make_fluid_params(1.1, 0.3, 0.05);
    double core_over_eps2[3];
    int k = 0;
    for (double eps : {0.05, 0.1, 0.2}) {
        const ShockData s = solve_end_states(1.0, 0.0, eps, ShockFamily::Two, p);
        ProfileOptions opt;
        opt.n = 2001;
        const Profile prof = compute_profile(s, p, opt);
        const ProfileReport rep = validate_profile(prof);
        CHECK(rep.monotone);
        // fitted log-slopes of v' are negative outward, magnitude ~ eps
        CHECK(rep.tail_slope_left > 0.05 * eps);
        CHECK(rep.tail_slope_left < 50.0 * eps);
        CHECK(rep.tail_slope_right < -0.05 * eps);
        CHECK(rep.tail_slope_right > -50.0 * eps);
        CHECK(rep.min_dv_core > 0.0);
        core_over_eps2[k++] = rep.min_dv_core / (eps * eps);
        // ratio diagnostics are O(1)
        CHECK(rep.ratio_vh < 10.0);
        CHECK(rep.ratio_hp < 10.0);
        CHECK(rep.ratio_d2v < 10.0);
        CHECK(rep.ratio_d2h < 10.0);
    }
    // min v' on the core scales like eps^2: fitted constants stable within x3
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(core_over_eps2[i] <= 3.0 * core_over_eps2[j]);
        }
    }
}

TEST_CASE("wave-system residual converges at second order") {
    const FluidParams p = make_fluid_params(1.1, 0.3, 0.05);
    const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::Two, p);
    double r[2];
    int k = 0;
    for (int n : {2001, 4001}) {
        ProfileOptions opt;
        opt.n = n;
        r[k++] = vs_residual_max(compute_profile(s, p, opt));
    }
    CHECK(std::log2(r[0] / r[1]) >= 1.8);
}

TEST_CASE("offset sensitivity stays below profile tolerance") {
    const FluidParams p = make_fluid_params(1.0, 0.0, 0.09);
    const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::Two, p);
    ProfileOptions a, b, c;
    a.n = b.n = c.n = 1001;
    b.unstable_offset = 2e-8;
    c.unstable_offset = 5e-9;
    const Profile pa = compute_profile(s, p, a);
    const Profile pb = compute_profile(s, p, b);
    const Profile pc = compute_profile(s, p, c);
    CHECK((pa.vt - pb.vt).abs().maxCoeff() <= 1e-6);
    CHECK((pa.vt - pc.vt).abs().maxCoeff() <= 1e-6);
    CHECK((pa.ht - pb.ht).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("one-shock profile by mirror symmetry") {
    const FluidParams p = make_fluid_params(1.1, 0.3, 0.05);
    const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::One, p);
    ProfileOptions opt;
    opt.L = 150.0;
    opt.n = 1501;
    const Profile prof = compute_profile(s, p, opt);
    const int n = prof.grid.n;
    CHECK(std::abs(prof.vt[0] - s.v_minus) <= 1e-6);
    CHECK(std::abs(prof.vt[n - 1] - s.v_plus) <= 1e-6);
    CHECK(std::abs(prof.ht[0] - s.u_minus) <= 1e-6);
    CHECK(std::abs(prof.ht[n - 1] - s.u_plus) <= 1e-6);
    CHECK(std::abs(prof.vt[(n - 1) / 2] - 0.5 * (s.v_minus + s.v_plus)) <= 1e-8);
    for (int i = 0; i < n; ++i) {
        CHECK(prof.dvt[i] < 0.0);  // v decreasing along a 1-shock
        CHECK(prof.dht[i] < 0.0);
    }
    CHECK(vs_residual_max(prof) <= 1e-6);
}

TEST_CASE("velocity reconstruction solves the original wave system") {
    const FluidParams p = make_fluid_params(1.1, 0.3, 0.05);
    const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::Two, p);
    double r[2];
    int k = 0;
    for (int n : {2001, 4001}) {
        ProfileOptions opt;
        opt.n = n;
        const Profile prof = compute_profile(s, p, opt);
        const Grid& g = prof.grid;
        const Field du = ddx(prof.ut, g);
        const Field dv = ddx(prof.vt, g);
        const Field d2v = d2dx(prof.vt, g);
        const Field pv = pressure(prof.vt, p);
        const Field mu = p.b * prof.vt.pow(-p.alpha);
        const Field kappa = p.c * p.b * p.b * prof.vt.pow(3.0 - 2.0 * p.alpha);
        const Field dkappa =
            p.c * p.b * p.b * (3.0 - 2.0 * p.alpha) * prof.vt.pow(2.0 - 2.0 * p.alpha);
        const Field korteweg = kappa * (-d2v / prof.vt.pow(5.0) +
                                        2.5 * dv.square() / prof.vt.pow(6.0)) -
                               0.5 * dkappa * dv.square() / prof.vt.pow(5.0);
        const Field r1 = -s.sigma * dv - du;
        const Field r2 = -s.sigma * du + ddx(pv, g) -
                         ddx(Field(mu * du / prof.vt), g) - ddx(korteweg, g);
        double m = 0.0;
        for (int i = 3; i < g.n - 3; ++i) {
            m = std::max(m, std::max(std::abs(r1[i]), std::abs(r2[i])));
        }
        r[k++] = m;
    }
    CHECK(std::log2(r[0] / r[1]) >= 1.8);
}

TEST_CASE("parameter corners: near-degenerate capillarity and stiff gas") {
    {
        // c -> 0 makes the h-equation fast; the shot must still connect
        const FluidParams p = make_fluid_params(1.0, 0.0, 0.01);
        const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::Two, p);
        ProfileOptions opt;
        opt.n = 1501;
        const ProfileReport r = validate_profile(compute_profile(s, p, opt));
        CHECK(r.monotone);
        CHECK(r.boundary_gap <= 1e-6);
    }
    {
        const FluidParams p = make_fluid_params(1.25, 0.75, 0.05);
        const ShockData s = solve_end_states(1.0, 0.0, 0.3, ShockFamily::Two, p);
        ProfileOptions opt;
        opt.n = 1501;
        const ProfileReport r = validate_profile(compute_profile(s, p, opt));
        CHECK(r.monotone);
        CHECK(r.boundary_gap <= 1e-5);  // eps = 0.3 tails are fatter at L = 12/eps
    }
}

TEST_CASE("normalization does not depend on grid parity") {
    const FluidParams p = make_fluid_params(1.1, 0.3, 0.05);
    const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::Two, p);
    ProfileOptions opt;
    opt.n = 1500;  // no node at xi = 0
    const Profile prof = compute_profile(s, p, opt);
    CHECK(std::abs(prof.at(0.0).v - 0.5 * (s.v_minus + s.v_plus)) <= 1e-8);
}

TEST_CASE("profiles are grid independent and scale exactly") {
    const FluidParams p = make_fluid_params(1.0, 0.0, 0.09);
    const ShockData s = solve_end_states(1.0, 0.0, 0.1, ShockFamily::Two, p);
    ProfileOptions a, b;
    a.n = 2001;
    b.n = 3751;
    const Profile pa = compute_profile(s, p, a);
    const Profile pb = compute_profile(s, p, b);
    // same continuum object regardless of sampling
    for (double xi : {-37.2, -5.0, 0.0, 1.3, 12.7, 55.1}) {
        CHECK(pa.at(xi).v == doctest::Approx(pb.at(xi).v).epsilon(1e-9));
        CHECK(pa.at(xi).h == doctest::Approx(pb.at(xi).h).epsilon(1e-9));
    }
    // resampling at xi/nu reproduces the scaled wave with scaled derivatives
    const double nu = 0.5;
    for (double x : {-20.0, -3.0, 0.7, 9.9}) {
        const ProfilePoint q = pa.at(x / nu);
        const ProfilePoint qn = pb.at(x / nu);
        CHECK(q.v == doctest::Approx(qn.v).epsilon(1e-9));
        // derivative of vt(x/nu) with respect to x is dv/nu; consistency of
        // the stored derivative under the same resampling
        CHECK(q.dv / nu == doctest::Approx(qn.dv / nu).epsilon(1e-7));
    }
}
