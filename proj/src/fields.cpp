#include "nsk/fields.hpp"

#include <cmath>

namespace nsk {

Grid::Grid(double half_length, int nodes) : L(half_length), n(nodes) {
    if (!(L > 0.0)) throw DomainError("grid half-length must be positive");
    if (n < 16) throw DomainError("grid needs at least 16 nodes, got " + std::to_string(n));
}

Field Grid::nodes() const {
    Field x(n);
    for (int i = 0; i < n; ++i) x[i] = xi(i);
    return x;
}

namespace {

void check_size(const Field& f, const Grid& g, const char* op) {
    if (f.size() != g.n) {
        throw DomainError(std::string(op) + ": field size " + std::to_string(f.size()) +
                          " does not match grid size " + std::to_string(g.n));
    }
}

}  // namespace

Field ddx(const Field& f, const Grid& g) {
    check_size(f, g, "ddx");
    const int n = g.n;
    const double h = g.dx();
    Field d(n);
    // one-sided stencils in difference form, exact on constants
    d[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[n - 1] = (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2.0 * h);
    return d;
}

Field d2dx(const Field& f, const Grid& g) {
    check_size(f, g, "d2dx");
    const int n = g.n;
    const double h2 = g.dx() * g.dx();
    Field d(n);
    d[0] = (2.0 * (f[0] - f[1]) - 3.0 * (f[1] - f[2]) + (f[2] - f[3])) / h2;
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    d[n - 1] =
        (2.0 * (f[n - 1] - f[n - 2]) - 3.0 * (f[n - 2] - f[n - 3]) + (f[n - 3] - f[n - 4])) / h2;
    return d;
}

double integrate(const Field& f, const Grid& g) {
    check_size(f, g, "integrate");
    const int n = g.n;
    double s = 0.5 * (f[0] + f[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += f[i];
    return s * g.dx();
}

HermiteInterpolant::HermiteInterpolant(double x0, double dx, Field values, Field derivs)
    : x0_(x0), dx_(dx), values_(std::move(values)), derivs_(std::move(derivs)) {
    if (values_.size() != derivs_.size() || values_.size() < 2) {
        throw DomainError("HermiteInterpolant: inconsistent data sizes");
    }
    if (!(dx_ > 0.0)) throw DomainError("HermiteInterpolant: dx must be positive");
}

double HermiteInterpolant::operator()(double x) const {
    const Eigen::Index m = values_.size();
    if (x <= x0_) return values_[0];
    const double xe = x0_ + dx_ * (m - 1);
    if (x >= xe) return values_[m - 1];
    auto k = static_cast<Eigen::Index>((x - x0_) / dx_);
    if (k > m - 2) k = m - 2;
    double t = (x - (x0_ + k * dx_)) / dx_;
    // snap onto nodes so that nodal queries reproduce the data bit-exactly
    if (t >= 1.0 - 1e-12 && k + 1 <= m - 1) return values_[k + 1];
    if (t <= 1e-12) return values_[k];
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * values_[k] + h10 * dx_ * derivs_[k] + h01 * values_[k + 1] +
           h11 * dx_ * derivs_[k + 1];
}

LagrangeInterpolant::LagrangeInterpolant(double x0, double dx, Field values)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
    if (values_.size() < 4) throw DomainError("LagrangeInterpolant: need at least 4 points");
    if (!(dx_ > 0.0)) throw DomainError("LagrangeInterpolant: dx must be positive");
}

double LagrangeInterpolant::operator()(double x) const {
    const Eigen::Index m = values_.size();
    if (x <= x0_) return values_[0];
    const double xe = x0_ + dx_ * (m - 1);
    if (x >= xe) return values_[m - 1];
    auto k = static_cast<Eigen::Index>((x - x0_) / dx_);
    {
        const double u = (x - (x0_ + k * dx_)) / dx_;
        if (u >= 1.0 - 1e-12 && k + 1 <= m - 1) return values_[k + 1];
        if (u <= 1e-12) return values_[k];
    }
    // 4-point stencil centered on the containing interval.
    Eigen::Index j = k - 1;
    if (j < 0) j = 0;
    if (j > m - 4) j = m - 4;
    const double t = (x - (x0_ + j * dx_)) / dx_;  // in [0,3]
    const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return w0 * values_[j] + w1 * values_[j + 1] + w2 * values_[j + 2] + w3 * values_[j + 3];
}

}  // namespace nsk
