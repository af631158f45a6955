#include "nsk/profile.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "nsk/ode.hpp"

namespace nsk {

namespace {

void require_tau2(const FluidParams& p) {
    if (!(p.tau2 > 0.0)) {
        throw DomainError(
            "degenerate capillarity (c = 0): the h-equation of the transformed "
            "system is algebraic; use the pure Navier-Stokes reduction instead");
    }
}

using Vec2 = Eigen::Vector2d;

struct TwField {
    ShockData s;
    FluidParams p;
    Vec2 operator()(double, const Vec2& y) const {
        if (!(y[0] > 0.0)) throw NumericsError("negative v encountered on the orbit");
        auto [dv, dh] = tw_rhs(y[0], y[1], s, p);
        return {dv, dh};
    }
};

double hermite_component(double t0, double v0, double f0, double t1, double v1,
                         double f1, double t) {
    const double h = t1 - t0;
    const double u = (t - t0) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * v0 + (u3 - 2 * u2 + u) * h * f0 +
           (-2 * u3 + 3 * u2) * v1 + (u3 - u2) * h * f1;
}

struct Linearization {
    double m_unstable = 0.0;
    Vec2 e_unstable;
};

Linearization linearize_at_left(const ShockData& s, const FluidParams& p) {
    const Eigen::Matrix2d J = tw_jacobian(s.v_minus, s.u_minus, s, p);
    const double tr = J.trace();
    const double det = J.determinant();
    const double disc = tr * tr - 4.0 * det;
    if (!(disc > 0.0) || !(det < 0.0)) {
        throw ConvergenceError("left end state is not a saddle; cannot shoot");
    }
    Linearization lin;
    lin.m_unstable = 0.5 * (tr + std::sqrt(disc));
    // (J - m I) e = 0 with the first row.
    lin.e_unstable = Vec2(-J(0, 1), J(0, 0) - lin.m_unstable);
    if (std::abs(lin.e_unstable[0]) < 1e-300) {
        lin.e_unstable = Vec2(J(1, 1) - lin.m_unstable, -J(1, 0));
    }
    lin.e_unstable.normalize();
    if (lin.e_unstable[0] * (s.v_plus - s.v_minus) < 0.0) lin.e_unstable = -lin.e_unstable;
    return lin;
}

struct ShotResult {
    double t_cross = -1.0;  // integration time at which v hits the midpoint
    double t_reach = -1.0;  // time entering the 1e-6 ball of the right state
};

// Forward shot from left + delta * e_unstable. Returns the midpoint-crossing
// time and the ball-entry time; throws on non-convergence.
ShotResult shoot(const TwField& f, const Vec2& y0, double vmid, const Vec2& right,
                 double reach_needed, double budget, const OdeOptions& opt) {
    ShotResult r;
    integrate_observed(
        f, 0.0, y0, budget, opt,
        [&](double t0, const Vec2& ya, const Vec2& fa, double t1, const Vec2& yb,
            const Vec2& fb) {
            if (r.t_cross < 0.0 && (ya[0] - vmid) * (yb[0] - vmid) <= 0.0) {
                double lo = t0, hi = t1;
                for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi);
                     ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double vm =
                        hermite_component(t0, ya[0], fa[0], t1, yb[0], fb[0], mid);
                    if ((vm - vmid) * (ya[0] - vmid) > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                r.t_cross = 0.5 * (lo + hi);
            }
            if (r.t_reach < 0.0 &&
                std::max(std::abs(yb[0] - right[0]), std::abs(yb[1] - right[1])) <=
                    1e-6) {
                r.t_reach = t1;
            }
            const bool covered =
                r.t_cross >= 0.0 && t1 >= r.t_cross + reach_needed;
            return !(covered && r.t_reach >= 0.0);
        });
    if (r.t_cross < 0.0 || r.t_reach < 0.0) {
        throw ConvergenceError(
            "profile orbit failed to enter a 1e-6 ball of the right state "
            "within the xi budget");
    }
    return r;
}

Profile mirror_one_shock(const ShockData& s, const FluidParams& p,
                         const ProfileOptions& opt);

}  // namespace

std::pair<double, double> tw_rhs(double v, double h, const ShockData& s,
                                 const FluidParams& p) {
    require_tau2(p);
    if (!(v > 0.0)) throw DomainError("tw_rhs: v must be positive");
    const double va = std::pow(v, p.alpha + 1.0);
    const double n1 = s.sigma * (v - s.v_minus) + (h - s.u_minus);
    const double n2 = -s.sigma * (h - s.u_minus) + pressure(v, p) - pressure(s.v_minus, p);
    return {-n1 * va / (p.tau1 * p.gamma), n2 * va / (p.tau2 * p.gamma)};
}

Eigen::Matrix2d tw_jacobian(double v, double h, const ShockData& s,
                            const FluidParams& p) {
    require_tau2(p);
    if (!(v > 0.0)) throw DomainError("tw_jacobian: v must be positive");
    const double va = std::pow(v, p.alpha + 1.0);
    const double vam = (p.alpha + 1.0) * std::pow(v, p.alpha);
    const double n1 = s.sigma * (v - s.v_minus) + (h - s.u_minus);
    const double n2 = -s.sigma * (h - s.u_minus) + pressure(v, p) - pressure(s.v_minus, p);
    Eigen::Matrix2d J;
    J(0, 0) = -(s.sigma * va + n1 * vam) / (p.tau1 * p.gamma);
    J(0, 1) = -va / (p.tau1 * p.gamma);
    J(1, 0) = (dpressure(v, p) * va + n2 * vam) / (p.tau2 * p.gamma);
    J(1, 1) = -s.sigma * va / (p.tau2 * p.gamma);
    return J;
}

ProfilePoint Profile::at(double xi) const {
    ProfilePoint q;
    q.v = v_interp(xi);
    q.h = h_interp(xi);
    if (xi < v_interp.x_min() || xi > v_interp.x_max()) {
        // Constant extension: end states are equilibria, derivatives vanish.
        return q;
    }
    std::tie(q.dv, q.dh) = tw_rhs(q.v, q.h, shock, params);
    const Eigen::Matrix2d J = tw_jacobian(q.v, q.h, shock, params);
    q.d2v = J(0, 0) * q.dv + J(0, 1) * q.dh;
    q.d2h = J(1, 0) * q.dv + J(1, 1) * q.dh;
    return q;
}

double reconstruct_u(double v, double h, double dv, const FluidParams& p) {
    return h + p.tau1 * p.gamma * dv * std::pow(v, -p.alpha - 1.0);
}

Profile compute_profile(const ShockData& s, const FluidParams& p,
                        const ProfileOptions& opt) {
    if (!(s.eps > 0.0)) throw DomainError("compute_profile requires positive amplitude");
    require_tau2(p);
    if (s.family == ShockFamily::One) return mirror_one_shock(s, p, opt);

    const double L = opt.L > 0.0 ? opt.L : 12.0 / s.eps;
    Grid grid(L, opt.n);

    const TwField f{s, p};
    const Linearization lin = linearize_at_left(s, p);
    const double dv_total = std::abs(s.v_plus - s.v_minus);
    const double vmid = 0.5 * (s.v_minus + s.v_plus);
    const Vec2 left(s.v_minus, s.u_minus);
    const Vec2 right(s.v_plus, s.u_plus);

    const double margin = std::max(4.0, 0.02 * L);
    const double reach = L + margin;
    const double budget = 40.0 / lin.m_unstable + 4.0 * reach + 100.0;

    OdeOptions ode;
    ode.rtol = 1e-10;
    ode.atol = 1e-13 * std::max(1.0, std::abs(s.u_minus) + std::abs(s.u_plus));
    ode.h_init = 1e-3 / lin.m_unstable;
    ode.h_max = 0.5 / lin.m_unstable;

    const double delta = opt.unstable_offset * dv_total;
    const ShotResult shot =
        shoot(f, Vec2(left + delta * lin.e_unstable), vmid, right, reach, budget, ode);

    Profile prof;
    prof.grid = grid;
    prof.shock = s;
    prof.params = p;
    prof.vt.resize(grid.n);
    prof.ht.resize(grid.n);
    prof.ut.resize(grid.n);
    prof.dvt.resize(grid.n);
    prof.dht.resize(grid.n);
    prof.d2vt.resize(grid.n);
    prof.d2ht.resize(grid.n);

    // Nodes ahead of the shot's start lie deep in the saddle's linear regime;
    // fill them from the unstable ray (relative error O(delta)).
    int first_shot = 0;
    while (first_shot < grid.n && shot.t_cross + grid.xi(first_shot) < 0.0) {
        const double amp = delta * std::exp(lin.m_unstable *
                                            (shot.t_cross + grid.xi(first_shot)));
        const Vec2 y = left + amp * lin.e_unstable;
        auto [dv, dh] = tw_rhs(y[0], y[1], s, p);
        prof.vt[first_shot] = y[0];
        prof.ht[first_shot] = y[1];
        prof.dvt[first_shot] = dv;
        prof.dht[first_shot] = dh;
        ++first_shot;
    }
    std::vector<double> targets;
    targets.reserve(grid.n - first_shot);
    for (int i = first_shot; i < grid.n; ++i) targets.push_back(shot.t_cross + grid.xi(i));
    integrate_to_targets(f, 0.0, Vec2(left + delta * lin.e_unstable), targets, ode,
                         [&](std::size_t i, double, const Vec2& y, const Vec2& fy) {
                             prof.vt[first_shot + i] = y[0];
                             prof.ht[first_shot + i] = y[1];
                             prof.dvt[first_shot + i] = fy[0];
                             prof.dht[first_shot + i] = fy[1];
                         });
    for (int i = 0; i < grid.n; ++i) {
        const Eigen::Matrix2d J = tw_jacobian(prof.vt[i], prof.ht[i], s, p);
        prof.d2vt[i] = J(0, 0) * prof.dvt[i] + J(0, 1) * prof.dht[i];
        prof.d2ht[i] = J(1, 0) * prof.dvt[i] + J(1, 1) * prof.dht[i];
        prof.ut[i] = reconstruct_u(prof.vt[i], prof.ht[i], prof.dvt[i], p);
    }
    prof.v_interp = HermiteInterpolant(-L, grid.dx(), prof.vt, prof.dvt);
    prof.h_interp = HermiteInterpolant(-L, grid.dx(), prof.ht, prof.dht);
    return prof;
}

namespace {

Profile mirror_one_shock(const ShockData& s, const FluidParams& p,
                         const ProfileOptions& opt) {
    // x -> -x, u -> -u maps a 1-shock onto the 2-shock connecting
    // (v_+, -u_+) to (v_-, -u_-).
    ShockData m = solve_end_states(s.v_plus, -s.u_plus, s.eps, ShockFamily::Two, p);
    Profile q = compute_profile(m, p, opt);
    const int n = q.grid.n;
    Profile prof;
    prof.grid = q.grid;
    prof.shock = s;
    prof.params = p;
    prof.vt.resize(n);
    prof.ht.resize(n);
    prof.ut.resize(n);
    prof.dvt.resize(n);
    prof.dht.resize(n);
    prof.d2vt.resize(n);
    prof.d2ht.resize(n);
    for (int i = 0; i < n; ++i) {
        const int j = n - 1 - i;
        prof.vt[i] = q.vt[j];
        prof.ht[i] = -q.ht[j];
        prof.dvt[i] = -q.dvt[j];
        prof.dht[i] = q.dht[j];
        prof.d2vt[i] = q.d2vt[j];
        prof.d2ht[i] = -q.d2ht[j];
        prof.ut[i] = reconstruct_u(prof.vt[i], prof.ht[i], prof.dvt[i], p);
    }
    prof.v_interp = HermiteInterpolant(-prof.grid.L, prof.grid.dx(), prof.vt, prof.dvt);
    prof.h_interp = HermiteInterpolant(-prof.grid.L, prof.grid.dx(), prof.ht, prof.dht);
    return prof;
}

double fit_log_slope(const Profile& prof, int i0, int i1) {
    // Least-squares slope of log|v'| against xi on [i0, i1].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = i0; i <= i1; ++i) {
        const double a = std::abs(prof.dvt[i]);
        if (!(a > 0.0)) continue;
        const double x = prof.grid.xi(i), y = std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

ProfileReport validate_profile(const Profile& prof) {
    const auto& s = prof.shock;
    const auto& p = prof.params;
    const int n = prof.grid.n;
    const double eps = s.eps;
    const double sgn = (s.family == ShockFamily::Two) ? 1.0 : -1.0;

    ProfileReport r;
    r.monotone = true;
    for (int i = 0; i < n; ++i) {
        if (!(sgn * prof.dvt[i] > 0.0) || !(prof.dht[i] < 0.0)) r.monotone = false;
    }

    const int quarter = n / 4;
    r.tail_slope_left = fit_log_slope(prof, 0, quarter);
    r.tail_slope_right = fit_log_slope(prof, n - 1 - quarter, n - 1);

    r.min_dv_core = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double xi = prof.grid.xi(i);
        if (std::abs(xi) <= 1.0 / eps) {
            r.min_dv_core = std::min(r.min_dv_core, std::abs(prof.dvt[i]));
        }
        const double adv = std::abs(prof.dvt[i]);
        if (!(adv > 0.0)) continue;
        const double dpt = dpressure(prof.vt[i], p) * prof.dvt[i];
        r.ratio_vh = std::max(
            r.ratio_vh, std::abs(s.sigma_star * prof.dvt[i] + prof.dht[i]) / (eps * adv));
        r.ratio_hp = std::max(
            r.ratio_hp, std::abs(s.sigma_star * prof.dht[i] - dpt) / (eps * adv));
        r.ratio_d2v = std::max(r.ratio_d2v, std::abs(prof.d2vt[i]) / (eps * adv));
        r.ratio_d2h = std::max(r.ratio_d2h, std::abs(prof.d2ht[i]) / (eps * adv));
    }

    r.boundary_gap = std::max(
        std::max(std::abs(prof.vt[0] - s.v_minus), std::abs(prof.ht[0] - s.u_minus)),
        std::max(std::abs(prof.vt[n - 1] - s.v_plus), std::abs(prof.ht[n - 1] - s.u_plus)));
    return r;
}

}  // namespace nsk
