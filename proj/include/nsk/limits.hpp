#pragma once

#include <vector>

#include "nsk/profile.hpp"
#include "nsk/solver.hpp"

namespace nsk {

/// Piecewise-constant entropy shock of the barotropic Euler system.
struct RiemannShock {
    ShockData s;

    double v_at(double z) const { return z < 0.0 ? s.v_minus : s.v_plus; }
    double u_at(double z) const { return z < 0.0 ? s.u_minus : s.u_plus; }
};

/// Descending viscosity-capillarity ladder with a fixed macroscopic window
/// [-window, window] and horizon T.
struct NuLadder {
    std::vector<double> nus = {0.4, 0.2, 0.1, 0.05};
    double window = 2.0;
    double horizon = 1.0;
};

/// Macroscopic fields U^nu(t, x) = U_unit(t/nu, x/nu) on a window grid,
/// obtained by pure re-indexing of a unit-frame snapshot. The velocity is
/// reconstructed from h by the nu-scaled effective-velocity inverse.
struct MacroSnapshot {
    double t = 0;
    double nu = 1;
    Grid grid;       // macroscopic window grid
    Field v, h, u;
};

/// unit_state.t must equal t_macro/nu; throws if the window needs data
/// beyond the unit grid coverage.
MacroSnapshot rescale_snapshot(const State& unit_state, const Grid& unit_grid,
                               const ShockData& s, const FluidParams& p,
                               double nu, double t_macro, const Grid& macro_grid);

/// Absolutely continuous part of the generalized relative entropy:
/// int Q(v(x) | vbar(x - X)) dx over the window. Nodal fields cannot carry a
/// singular part, so measure-valued inputs are outside this interface.
double dq_ac(const Field& v, const RiemannShock& rs, double X, const Grid& g,
             const FluidParams& p);

struct StabilityMetrics {
    double l1_window = 0;     // int |v - vbar(x - sigma t)| dx
    double dq = 0;            // dq_ac against the shifted Riemann wave
    double kinetic = 0;       // 1/2 int |u - ubar(x - X)|^2 dx
};

/// X_total is the macroscopic comparison shift (sigma t plus drift).
StabilityMetrics stability_metrics(const MacroSnapshot& ms, const RiemannShock& rs,
                                   double X_total, const FluidParams& p);

struct WellPreparedSpec {
    enum class Kind { ProfileBased, MollifiedRiemann };
    Kind kind = Kind::ProfileBased;
    double omega = 0.1;  // mollification width (MollifiedRiemann only)
    // optional macroscopic Gaussian bump on top of the base data
    double amp_v = 0.0, amp_h = 0.0, width = 1.0, center = 0.0;
};

struct WellPrepared {
    State unit_state;            // (v, h) on the unit grid at s = 0
    double entropy_vs_wave = 0;      // relative entropy against the scaled wave
    double entropy_vs_riemann = 0;   // same against the Riemann shock (E0 proxy)
};

/// Builds smooth initial data for the scaled system: either the scaled
/// profile plus a bump (relative entropy converges to the bump's E0), or an
/// erf-mollified Riemann step of width omega.
WellPrepared well_prepared_data(const RiemannShock& rs, const WellPreparedSpec& spec,
                                double nu, const Profile& prof, const Grid& unit_grid);

struct LimitRow {
    double nu = 0, t = 0;
    double l1_window = 0, dq = 0, kinetic = 0;
    double X_nu = 0, X_drift = 0;
};

struct LimitResult {
    std::vector<LimitRow> rows;  // ladder-major, report times ascending
    double entropy_vs_wave = 0;
    double entropy_vs_riemann = 0;
    double fitted_C = 0;  // max over the ladder of L1(horizon)/nu
    double int_f = 0;     // time integral of the unit-run bad-term sum
};

/// Runs one unit-frame trajectory with the coupled shift and evaluates the
/// whole ladder from its exact rescalings, at times {1/4, 1/2, 3/4, 1} of the
/// horizon.
LimitResult run_limit_experiment(const Profile& prof, const NuLadder& ladder,
                                 const WellPreparedSpec& wps, double lambda,
                                 double delta3, double cfl, double v_floor,
                                 int macro_n);

}  // namespace nsk
