#pragma once

#include "nsk/types.hpp"

namespace nsk {

/// Uniform grid of n nodes on [-L, L], symmetric about 0.
struct Grid {
    double L = 1.0;
    int n = 16;

    Grid() = default;
    Grid(double half_length, int nodes);

    double dx() const { return 2.0 * L / (n - 1); }
    double xi(int i) const { return -L + i * dx(); }
    Field nodes() const;
};

/// Second-order first derivative: central interior, one-sided at the ends.
/// Exact for quadratics.
Field ddx(const Field& f, const Grid& g);

/// Second-order second derivative: central interior, one-sided at the ends.
Field d2dx(const Field& f, const Grid& g);

/// Trapezoid rule over [-L, L].
double integrate(const Field& f, const Grid& g);

/// Cubic Hermite interpolant on a uniform grid from nodal values and
/// derivatives. Constant value (zero slope) extension outside the data.
class HermiteInterpolant {
  public:
    HermiteInterpolant() = default;
    HermiteInterpolant(double x0, double dx, Field values, Field derivs);

    double operator()(double x) const;
    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * (values_.size() - 1); }

  private:
    double x0_ = 0.0;
    double dx_ = 1.0;
    Field values_;
    Field derivs_;
};

/// Sliding 4-point cubic Lagrange interpolant on a uniform grid, for data
/// without stored derivatives. Constant extension outside the data.
class LagrangeInterpolant {
  public:
    LagrangeInterpolant() = default;
    LagrangeInterpolant(double x0, double dx, Field values);

    double operator()(double x) const;

  private:
    double x0_ = 0.0;
    double dx_ = 1.0;
    Field values_;
};

/// Samples interp(xi - X) on the grid nodes; realizes shifted comparisons.
template <class Interp>
Field sample_shifted(const Interp& interp, double X, const Grid& g) {
    Field out(g.n);
    for (int i = 0; i < g.n; ++i) out[i] = interp(g.xi(i) - X);
    return out;
}

}  // namespace nsk
