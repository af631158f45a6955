#pragma once

#include "nsk/constitutive.hpp"

namespace nsk {

enum class ShockFamily { One, Two };

/// Rankine-Hugoniot end states and shock speed for a given amplitude.
struct ShockData {
    double v_minus = 1.0;
    double u_minus = 0.0;
    double v_plus = 1.0;
    double u_plus = 0.0;
    double sigma = 0.0;       // shock speed sigma_eps
    double sigma_star = 0.0;  // sqrt(-p'(v_minus))
    double eps = 0.0;         // |p(v_plus) - p(v_minus)|
    ShockFamily family = ShockFamily::Two;
};

/// sqrt(-p'(v_minus)), the zero-amplitude characteristic speed.
double sigma_star(double v_minus, const FluidParams& p);

/// Solves the jump conditions for the end states at pressure amplitude eps.
/// 2-shock: p(v_plus) = p(v_minus) - eps, sigma > 0, v_minus < v_plus.
/// 1-shock: p(v_plus) = p(v_minus) + eps, sigma < 0, v_minus > v_plus.
/// eps == 0 yields the degenerate constant state with sigma = sigma_star.
ShockData solve_end_states(double v_minus, double u_minus, double eps,
                           ShockFamily family, const FluidParams& p);

/// Residuals of the two jump conditions; both zero for valid data.
std::pair<double, double> rh_residual(const ShockData& s, const FluidParams& p);

}  // namespace nsk
