#pragma once

#include <functional>
#include <vector>

#include "nsk/endstates.hpp"
#include "nsk/fields.hpp"

namespace nsk {

/// Discrete (v, h) fields in the shifted frame at one instant.
struct State {
    double t = 0.0;
    Field v;
    Field h;
};

struct SolverConfig {
    double cfl = 0.2;       // parabolic CFL number, in (0, 0.5]
    double v_floor = 1e-6;  // positivity abort threshold
    double t_end = 1.0;
    double out_stride = 0.1;  // time between monitor-hook invocations
    double nu = 1.0;          // viscosity-capillarity scale of the diffusion terms
};

/// Semidiscrete right-hand side of the shifted-frame system
///   v_t = sigma v_xi + h_xi - nu tau1 (v^beta p(v)_xi)_xi
///   h_t = sigma h_xi - p(v)_xi + nu tau2 g (v^(-a-1) h_xi)_xi
/// Diffusion in conservative flux form with arithmetic-mean coefficients;
/// advection by central differences; boundary rows pinned to zero.
std::pair<Field, Field> semidiscrete_rhs(const State& st, const Grid& g,
                                         const FluidParams& p, const ShockData& s,
                                         double nu = 1.0);

/// Parabolic stability bound for the current state.
double stable_dt(const State& st, const Grid& g, const FluidParams& p,
                 const ShockData& s, const SolverConfig& cfg);

/// One classic 4-stage Runge-Kutta step; aborts on positivity loss or
/// non-finite values.
State step(const State& st, double dt, const Grid& g, const FluidParams& p,
           const ShockData& s, const SolverConfig& cfg);

using MonitorHook = std::function<void(const State&)>;

/// Integrates to cfg.t_end with the adaptive parabolic step, invoking the
/// hook every cfg.out_stride time units and landing exactly on each capture
/// time. Returns the captured states (always includes t = 0 and t_end when
/// capture_times is empty).
std::vector<State> simulate(const State& initial, const Grid& g,
                            const FluidParams& p, const ShockData& s,
                            const SolverConfig& cfg,
                            const std::vector<double>& capture_times = {},
                            const MonitorHook& hook = nullptr);

enum class KappaModel {
    Relation,    // kappa = c mu^2 v^3 (the admissible coupling)
    UnitVolume,  // kappa = v (negative control)
};

/// Pointwise check of the effective-velocity transformation: difference
/// between the capillarity right side of the momentum equation and
/// tau2 (mu(v) h_x / v)_x with h = u - tau1 mu(v) v_x / v, evaluated with
/// discrete derivatives. Interior max is O(dx^2) for KappaModel::Relation.
Field transform_residual(const Field& v, const Field& u, const Grid& g,
                         const FluidParams& p,
                         KappaModel model = KappaModel::Relation);

}  // namespace nsk
