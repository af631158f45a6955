#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nsk/types.hpp"

namespace nsk {

/// Dormand-Prince 5(4) adaptive integrator for small fixed-size systems.
struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    double h_init = 1e-4;
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 20'000'000;
};

namespace detail {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace detail

/// One trial step; returns (y_new, f_new, scaled error estimate).
/// FSAL: f0 must be f(t, y); f_new is f(t+h, y_new).
template <class Vec, class F>
void dopri5_step(const F& f, double t, const Vec& y, const Vec& f0, double h,
                 Vec& y_new, Vec& f_new, double& err, const OdeOptions& opt) {
    using namespace detail;
    const Vec k1 = f0;
    const Vec k2 = f(t + c2 * h, Vec(y + h * (a21 * k1)));
    const Vec k3 = f(t + c3 * h, Vec(y + h * (a31 * k1 + a32 * k2)));
    const Vec k4 = f(t + c4 * h, Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const Vec k5 = f(t + c5 * h, Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const Vec k6 =
        f(t + h, Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f_new = f(t + h, y_new);
    const Vec ev = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * f_new);
    err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(ev[i]) / sc);
    }
}

/// Integrates from (t0, y0), landing exactly on each entry of the ascending
/// target list and reporting (index, t, y, f) there.
template <class Vec, class F, class CB>
void integrate_to_targets(const F& f, double t0, const Vec& y0,
                          const std::vector<double>& targets, const OdeOptions& opt,
                          CB&& on_target) {
    double t = t0;
    Vec y = y0;
    Vec fy = f(t, y);
    double h_ctrl = std::min(opt.h_init, opt.h_max);
    long steps = 0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const double T = targets[k];
        if (T < t - 1e-12 * std::max(1.0, std::abs(t))) {
            throw DomainError("integrate_to_targets: targets must be ascending");
        }
        while (t < T) {
            if (++steps > opt.max_steps) {
                throw ConvergenceError("ode integration exceeded max step count");
            }
            const double rem = T - t;
            const double h = std::min(h_ctrl, rem);
            const bool capped = h < h_ctrl;
            Vec y_new, f_new;
            double err;
            dopri5_step(f, t, y, fy, h, y_new, f_new, err, opt);
            const double fac =
                std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                t += h;
                y = y_new;
                fy = f_new;
                if (!capped) h_ctrl = std::min(h * fac, opt.h_max);
                if (t >= T) break;
            } else {
                h_ctrl = h * fac;
            }
            if (!(h_ctrl > 0.0) || !std::isfinite(h_ctrl)) {
                throw NumericsError("ode step size collapsed to zero");
            }
        }
        t = T;
        on_target(k, t, y, fy);
    }
}

/// Integrates from (t0, y0) while observer(t, y, f, t_new, y_new, f_new)
/// returns true; stops when it returns false or t reaches t_end.
/// The observer sees every accepted step.
template <class Vec, class F, class Obs>
void integrate_observed(const F& f, double t0, const Vec& y0, double t_end,
                        const OdeOptions& opt, Obs&& observer) {
    double t = t0;
    Vec y = y0;
    Vec fy = f(t, y);
    double h = std::min(opt.h_init, opt.h_max);
    long steps = 0;
    while (t < t_end) {
        if (++steps > opt.max_steps) {
            throw ConvergenceError("ode integration exceeded max step count");
        }
        h = std::min(h, t_end - t);
        Vec y_new, f_new;
        double err;
        dopri5_step(f, t, y, fy, h, y_new, f_new, err, opt);
        if (err <= 1.0) {
            const bool keep_going = observer(t, y, fy, t + h, y_new, f_new);
            t += h;
            y = y_new;
            fy = f_new;
            if (!keep_going) return;
        }
        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        h = std::min(h * fac, opt.h_max);
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw NumericsError("ode step size collapsed to zero");
        }
    }
}

}  // namespace nsk
