#pragma once

#include <cmath>
#include <vector>

#include "nsk/profile.hpp"
#include "nsk/solver.hpp"

namespace nsk {

/// Weight a(xi) = 1 - (lambda/eps)(p(vt(xi)) - p(v_-)), increasing from 1 to
/// 1 + lambda across a 2-shock.
struct WeightSpec {
    double lambda = 0.1;
    double eps = 0.1;
};

/// Weight value from the local profile pressure.
double weight_a(double p_vt, double p_vminus, const WeightSpec& w);

/// Piecewise feedback gain: 1/eps^2 for y <= -eps^2, -y/eps^4 in between,
/// -1/eps^2 for y >= eps^2.
double phi_eps(double y, double eps);

/// Profile, weight, and their xi-derivatives sampled at xi - X on the grid.
struct ShiftedProfile {
    Field vt, ht;
    Field dvt, dht, d2ht;
    Field pt, dpt;  // p(vt) and its xi-derivative
    Field a, ap;
};

ShiftedProfile sample_shifted_profile(const Profile& prof, const WeightSpec& w,
                                      double X, const Grid& g);

/// Every contraction functional at one instant, all by trapezoid quadrature
/// against the comparison wave shifted by X.
struct FunctionalReport {
    double E_weighted = 0;
    double Y = 0, Y_g = 0, Y_b = 0, Y_l = 0, Y_s = 0;
    double J_bad = 0, J_good = 0;
    double P1 = 0, P2 = 0;
    double B1_plus = 0, B1_minus = 0, B2 = 0;
    double G_h_minus = 0, G_h_plus = 0, G_p = 0, D_h = 0, D_p = 0;
    double I_gY = 0, I_1 = 0, I_2 = 0;
    double Xdot = 0;
    double boundary_tail = 0;  // truncation error bar for the entropy integral

    double bad_sum() const { return 2 * std::abs(J_bad) + 2 * std::abs(P1) + 2 * std::abs(P2); }
};

FunctionalReport evaluate_functionals(const State& st, const Grid& g,
                                      const Profile& prof, const WeightSpec& w,
                                      double X, double delta3);

/// Y alone, for shift sub-steps.
double evaluate_Y(const State& st, const Grid& g, const Profile& prof,
                  const WeightSpec& w, double X);

/// Two-sided and one-sided pressure truncations of v against the profile:
/// p(vbar_k) - p(vt) clamps p(v) - p(vt) to [-k, k]; vbar_s clamps only from
/// below (large v), vbar_b only from above (small v).
struct TruncatedV {
    Field vbar_k;
    Field vbar_s;
    Field vbar_b;
};
TruncatedV truncate_v(const Field& v, const Profile& prof, double k);

/// h-truncation: hbar - ht = clamp(h - ht, +-delta3).
Field truncate_h(const Field& h, const Profile& prof, double delta3);

/// Shift feedback rate from the current functionals.
double shift_rate(double Y, double J_bad, double P1, double P2, double eps);

struct ShiftState {
    double t = 0.0;
    double X = 0.0;
    double Xdot = 0.0;  // applied mean rate of the last step
};

/// Explicit Euler update of the shift over one PDE step, sub-stepped when the
/// middle branch of the feedback is steep. The bad-term magnitude M is frozen
/// at its step-start value; Y is re-evaluated at the moving shift.
ShiftState advance_shift(const ShiftState& ss, double dt, double M, double eps,
                         double dYdX_est, const State& frozen, const Grid& g,
                         const Profile& prof, const WeightSpec& w);

struct MonitorRow {
    double t = 0, X = 0;
    FunctionalReport rep;
    double cum_Gp = 0;       // int_0^t G_p ds
    double cum_D = 0;        // int_0^t (D_h + D_p) ds
    double ledger_lhs = 0;   // E + delta0 (eps/lambda) cum_Gp + delta0 cum_D
};

struct ContractionRun {
    std::vector<MonitorRow> rows;  // one per out_stride
    std::vector<State> captures;   // states at requested times
    std::vector<double> capture_X;
    double E0 = 0;
    double max_entropy_violation = 0;  // max over steps of dE - slack
    double identity_residual = 0;      // max |dE - dt*(Xdot Y + F)| / dt
    double int_Gp = 0, int_D = 0, int_f = 0;  // cumulative time integrals
    double max_xdot_bound_gap = 0;     // |Xdot| minus its stated bound
    double max_gain_gap = 0;  // violation of the feedback-gain inequality
    long steps = 0;
};

/// Time-integrates the PDE with the coupled shift ODE and full functional
/// monitoring at every step. delta0 only weights the reported ledger.
ContractionRun run_contraction(const State& initial, const Grid& g,
                               const Profile& prof, const FluidParams& p,
                               const ShockData& s, const WeightSpec& w,
                               double delta3, const SolverConfig& cfg,
                               const std::vector<double>& capture_times = {},
                               double delta0 = 0.4);

}  // namespace nsk
