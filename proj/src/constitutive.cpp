#include "nsk/constitutive.hpp"

#include <cmath>

namespace nsk {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) {
        throw DomainError(std::string(what) + " must be positive, got " +
                          std::to_string(v));
    }
}

}  // namespace

std::pair<double, double> tau_split(double c) {
    if (c < 0.0 || c > 0.09) {
        throw DomainError("capillarity ratio c must satisfy 0 <= c <= 9/100, got " +
                          std::to_string(c));
    }
    const double tau1 = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * c));
    return {tau1, 1.0 - tau1};
}

FluidParams make_fluid_params(double gamma, double alpha, double c) {
    return make_fluid_params(gamma, alpha, c, gamma);
}

FluidParams make_fluid_params(double gamma, double alpha, double c, double b) {
    if (gamma < 1.0 || gamma > 1.25) {
        throw DomainError("gamma must satisfy 1 <= gamma <= 5/4, got " +
                          std::to_string(gamma));
    }
    if (alpha < 0.0 || alpha > gamma) {
        throw DomainError("alpha must satisfy 0 <= alpha <= gamma, got alpha = " +
                          std::to_string(alpha) + ", gamma = " + std::to_string(gamma));
    }
    if (gamma - alpha < 0.0 || gamma - alpha > 1.0) {
        throw DomainError("beta = gamma - alpha must lie in [0, 1], got " +
                          std::to_string(gamma - alpha));
    }
    require_positive(b, "viscosity scale b");
    FluidParams p;
    p.gamma = gamma;
    p.alpha = alpha;
    p.b = b;
    p.c = c;
    std::tie(p.tau1, p.tau2) = tau_split(c);
    p.beta = gamma - alpha;
    return p;
}

double pressure(double v, const FluidParams& p) {
    require_positive(v, "specific volume v");
    return std::pow(v, -p.gamma);
}

double dpressure(double v, const FluidParams& p) {
    require_positive(v, "specific volume v");
    return -p.gamma * std::pow(v, -p.gamma - 1.0);
}

double d2pressure(double v, const FluidParams& p) {
    require_positive(v, "specific volume v");
    return p.gamma * (p.gamma + 1.0) * std::pow(v, -p.gamma - 2.0);
}

double inv_pressure(double pr, const FluidParams& p) {
    require_positive(pr, "pressure");
    return std::pow(pr, -1.0 / p.gamma);
}

std::pair<double, double> coefficients(double v, const FluidParams& p) {
    require_positive(v, "specific volume v");
    const double mu = p.b * std::pow(v, -p.alpha);
    const double kappa = p.c * mu * mu * v * v * v;
    return {mu, kappa};
}

double q_of_v(double v, const FluidParams& p) {
    require_positive(v, "specific volume v");
    if (p.gamma == 1.0) return -std::log(v);
    return std::pow(v, 1.0 - p.gamma) / (p.gamma - 1.0);
}

double q_rel(double v, double w, const FluidParams& p) {
    // Q(v|w) = Q(v) - Q(w) + p(w)(v - w), using Q' = -p.
    return q_of_v(v, p) - q_of_v(w, p) + pressure(w, p) * (v - w);
}

double p_rel(double v, double w, const FluidParams& p) {
    return pressure(v, p) - pressure(w, p) - dpressure(w, p) * (v - w);
}

double rel_entropy_density(double v, double h, double vt, double ht,
                           const FluidParams& p) {
    const double dh = h - ht;
    return 0.5 * dh * dh + q_rel(v, vt, p);
}

Field pressure(const Field& v, const FluidParams& p) {
    if ((v <= 0.0).any()) throw DomainError("pressure: non-positive volume in field");
    return v.pow(-p.gamma);
}

Field dpressure(const Field& v, const FluidParams& p) {
    if ((v <= 0.0).any()) throw DomainError("dpressure: non-positive volume in field");
    return -p.gamma * v.pow(-p.gamma - 1.0);
}

Field inv_pressure(const Field& pr, const FluidParams& p) {
    if ((pr <= 0.0).any()) throw DomainError("inv_pressure: non-positive pressure in field");
    return pr.pow(-1.0 / p.gamma);
}

Field q_of_v(const Field& v, const FluidParams& p) {
    if ((v <= 0.0).any()) throw DomainError("q_of_v: non-positive volume in field");
    if (p.gamma == 1.0) return -v.log();
    return v.pow(1.0 - p.gamma) / (p.gamma - 1.0);
}

Field q_rel(const Field& v, const Field& w, const FluidParams& p) {
    return q_of_v(v, p) - q_of_v(w, p) + pressure(w, p) * (v - w);
}

Field p_rel(const Field& v, const Field& w, const FluidParams& p) {
    return pressure(v, p) - pressure(w, p) - dpressure(w, p) * (v - w);
}

}  // namespace nsk
