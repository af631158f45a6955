#include "nsk/endstates.hpp"

#include <cmath>

namespace nsk {

double sigma_star(double v_minus, const FluidParams& p) {
    return std::sqrt(-dpressure(v_minus, p));
}

ShockData solve_end_states(double v_minus, double u_minus, double eps,
                           ShockFamily family, const FluidParams& p) {
    if (!(v_minus > 0.0)) throw DomainError("v_minus must be positive");
    if (eps < 0.0) throw DomainError("shock amplitude eps must be non-negative");

    ShockData s;
    s.v_minus = v_minus;
    s.u_minus = u_minus;
    s.eps = eps;
    s.family = family;
    s.sigma_star = sigma_star(v_minus, p);

    if (eps == 0.0) {
        s.v_plus = v_minus;
        s.u_plus = u_minus;
        s.sigma = s.sigma_star;
        return s;
    }

    const double p_minus = pressure(v_minus, p);
    double p_plus;
    if (family == ShockFamily::Two) {
        p_plus = p_minus - eps;
        if (!(p_plus > 0.0)) {
            throw DomainError("infeasible amplitude: eps >= p(v_minus) = " +
                              std::to_string(p_minus));
        }
    } else {
        p_plus = p_minus + eps;
    }
    s.v_plus = inv_pressure(p_plus, p);

    const double slope = -(p_plus - p_minus) / (s.v_plus - v_minus);
    const double speed = std::sqrt(slope);
    s.sigma = (family == ShockFamily::Two) ? speed : -speed;
    // -sigma (v+ - v-) = u+ - u-
    s.u_plus = u_minus - s.sigma * (s.v_plus - v_minus);
    return s;
}

std::pair<double, double> rh_residual(const ShockData& s, const FluidParams& p) {
    const double r1 = -s.sigma * (s.v_plus - s.v_minus) - (s.u_plus - s.u_minus);
    const double r2 =
        -s.sigma * (s.u_plus - s.u_minus) + pressure(s.v_plus, p) - pressure(s.v_minus, p);
    return {r1, r2};
}

}  // namespace nsk
