#pragma once

#include <Eigen/Dense>

#include "nsk/endstates.hpp"
#include "nsk/fields.hpp"

namespace nsk {

/// Profile state at one point, with derivatives taken from the traveling-wave
/// field (exact functions of (v,h), no finite differencing).
struct ProfilePoint {
    double v = 0, h = 0;
    double dv = 0, dh = 0;
    double d2v = 0, d2h = 0;
};

/// Right-hand side of the planar traveling-wave system, obtained by
/// integrating the wave equations from the left state:
///   v' = -[sigma (v - v_-) + (h - h_-)] v^(a+1) / (tau1 g)
///   h' =  [-sigma (h - h_-) + p(v) - p(v_-)] v^(a+1) / (tau2 g)
/// Both end states are equilibria. Requires tau2 > 0.
std::pair<double, double> tw_rhs(double v, double h, const ShockData& s,
                                 const FluidParams& p);

/// Jacobian of tw_rhs with respect to (v, h).
Eigen::Matrix2d tw_jacobian(double v, double h, const ShockData& s,
                            const FluidParams& p);

/// Densely sampled viscous-dispersive shock profile, normalized so that
/// v(0) = (v_- + v_+)/2.
struct Profile {
    Grid grid;
    Field vt, ht, ut;
    Field dvt, dht;
    Field d2vt, d2ht;
    ShockData shock;
    FluidParams params;

    /// Interpolated evaluation with constant extension beyond [-L, L].
    ProfilePoint at(double xi) const;

    HermiteInterpolant v_interp;
    HermiteInterpolant h_interp;
};

struct ProfileOptions {
    double L = 0.0;          // half-length; 0 selects the default 12/eps
    int n = 2001;            // grid nodes
    double unstable_offset = 1e-8;  // delta / |v_+ - v_-| for the shot
};

/// Shoots the heteroclinic orbit from the left saddle to the right state and
/// samples it on the grid. 1-shocks are obtained from the mirrored 2-shock.
Profile compute_profile(const ShockData& s, const FluidParams& p,
                        const ProfileOptions& opt = {});

/// Fitted small-shock diagnostics; all ratios are maxima over the grid.
struct ProfileReport {
    bool monotone = false;
    double tail_slope_left = 0.0;   // d log|v'| / d xi on the outer left quarter
    double tail_slope_right = 0.0;  // same on the outer right quarter
    double min_dv_core = 0.0;       // min |v'| on [-1/eps, 1/eps]
    double ratio_vh = 0.0;          // |sigma* v' + h'| / (eps |v'|)
    double ratio_hp = 0.0;          // |sigma* h' - p(v)'| / (eps |v'|)
    double ratio_d2v = 0.0;         // |v''| / (eps |v'|)
    double ratio_d2h = 0.0;         // |h''| / (eps |v'|)
    double boundary_gap = 0.0;      // max end-state mismatch at +-L
};

ProfileReport validate_profile(const Profile& prof);

/// Velocity reconstruction u = h + tau1 g v' / v^(a+1) for one point.
double reconstruct_u(double v, double h, double dv, const FluidParams& p);

}  // namespace nsk
