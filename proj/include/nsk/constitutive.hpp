#pragma once

#include "nsk/types.hpp"

namespace nsk {

/// Constitutive constants of the polytropic Korteweg fluid.
///
/// Enforced ranges: 1 <= gamma <= 5/4, 0 <= alpha <= gamma,
/// beta = gamma - alpha in [0, 1], 0 <= c <= 9/100 (so tau1 >= 0.9).
/// The sharper coupling gamma <= 1 + alpha/3 matters only for the decay
/// analysis; the config layer warns when it fails instead of rejecting.
struct FluidParams {
    double gamma = 1.0;  // adiabatic exponent, p(v) = v^-gamma
    double alpha = 0.0;  // viscosity exponent, mu(v) = b v^-alpha
    double b = 1.0;      // viscosity scale (> 0)
    double c = 0.0;      // capillarity ratio, kappa = c mu^2 v^3
    double tau1 = 1.0;   // effective-velocity splitting constant
    double tau2 = 0.0;   // 1 - tau1, tau1*tau2 = c
    double beta = 1.0;   // gamma - alpha
};

/// Splits c into (tau1, tau2) with tau1 = (1 + sqrt(1-4c))/2.
/// Rejects c outside [0, 9/100].
std::pair<double, double> tau_split(double c);

/// Validates the constitutive constraints and fills the derived constants.
/// b defaults to gamma when not given, matching the transformed system.
FluidParams make_fluid_params(double gamma, double alpha, double c);
FluidParams make_fluid_params(double gamma, double alpha, double c, double b);

double pressure(double v, const FluidParams& p);
double dpressure(double v, const FluidParams& p);   // p'(v)
double d2pressure(double v, const FluidParams& p);  // p''(v)
double inv_pressure(double pr, const FluidParams& p);  // v with p(v) = pr

/// (mu(v), kappa(v)) = (b v^-alpha, c mu^2 v^3).
std::pair<double, double> coefficients(double v, const FluidParams& p);

/// Internal energy Q with Q'(v) = -p(v); two branches, picked by gamma == 1.
double q_of_v(double v, const FluidParams& p);

/// Relative internal energy Q(v|w) >= 0, zero iff v == w.
double q_rel(double v, double w, const FluidParams& p);

/// Relative pressure p(v|w) = p(v) - p(w) - p'(w)(v - w) >= 0.
double p_rel(double v, double w, const FluidParams& p);

/// Relative entropy density  (h - ht)^2/2 + Q(v|vt).
double rel_entropy_density(double v, double h, double vt, double ht,
                           const FluidParams& p);

// Elementwise variants over fields (all entries must be positive where the
// scalar version requires it).
Field pressure(const Field& v, const FluidParams& p);
Field dpressure(const Field& v, const FluidParams& p);
Field inv_pressure(const Field& pr, const FluidParams& p);
Field q_of_v(const Field& v, const FluidParams& p);
Field q_rel(const Field& v, const Field& w, const FluidParams& p);
Field p_rel(const Field& v, const Field& w, const FluidParams& p);

}  // namespace nsk
