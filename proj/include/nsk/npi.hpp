#pragma once

#include <cstdint>
#include <vector>

#include "nsk/profile.hpp"

namespace nsk {

/// Truncated Fourier test function on [0,1]:
///   W(y) = c_0 + sum_k [ c_{2k-1} cos(2 pi k y) + c_{2k} sin(2 pi k y) ].
struct TestFunctionW {
    Eigen::ArrayXd coeffs;

    double operator()(double y) const;
    double deriv(double y) const;
    double l2_sq() const;              // exact int_0^1 W^2 by orthogonality
    void rescale_l2(double target_sq); // enforce int W^2 = target_sq
};

/// R_delta(W) = -(1/delta)(int W^2 + 2 int W)^2 + (1+delta) int W^2
///              + (2/3) int W^3 + delta int |W|^3
///              - (0.9-delta) int y(1-y) |W'|^2,
/// composite Simpson with m subintervals (even, >= 256).
double npi_functional(const TestFunctionW& W, double delta, int m = 1024);

struct NpiSample {
    long id = 0;
    double delta = 0;
    double l2 = 0;  // int W^2
    double R = 0;
};

struct NpiReport {
    std::vector<NpiSample> samples;
    std::vector<std::pair<NpiSample, Eigen::ArrayXd>> violations;  // R > tol
    std::vector<std::pair<NpiSample, Eigen::ArrayXd>> top;         // 10 largest R
    double max_R = 0;
};

/// Seeded random campaign: `count` 16-mode samples rescaled to
/// int W^2 in {0.1, 0.5, 1.0} * C1, each evaluated at every delta.
/// Samples are independent; results do not depend on the worker count.
NpiReport npi_campaign(double C1, const std::vector<double>& deltas, int count,
                       std::uint64_t seed, int m = 1024, double tol = 1e-8,
                       int threads = 1);

/// Deterministic sample generator used by the campaign (exposed for replay).
TestFunctionW npi_sample(double C1, long id, std::uint64_t seed);

/// Shock-frame change of variables y = (p(v_-) - p(vt(xi)))/eps and the
/// Jacobian deviation |vt^beta y'/(y(1-y)) - eps/(2 alpha_g)|, reported over
/// the interior band min(y, 1-y) >= y_cut.
struct JacobianReport {
    Field y;
    double alpha_g = 0;      // g sigma* p(v_-) / (g+1)
    double target = 0;       // eps / (2 alpha_g)
    double max_deviation = 0;
};
JacobianReport change_of_variables(const Profile& prof, double y_cut = 0.005);

/// Lifts a volume field to W(y) = (lambda/eps)(p(v) - p(vt)) on y^{-1},
/// resampled on m_nodes uniform y-points.
Field lift_to_W(const Field& v, const Profile& prof, double lambda,
                int m_nodes = 1025);

}  // namespace nsk
