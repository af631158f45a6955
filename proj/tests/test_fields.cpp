#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsk/fields.hpp"

using namespace nsk;

namespace {

Field apply(const Grid& g, double (*f)(double)) {
    Field out(g.n);
    for (int i = 0; i < g.n; ++i) out[i] = f(g.xi(i));
    return out;
}

}  // namespace

TEST_CASE("grid construction") {
    const Grid g(5.0, 21);
    CHECK(g.dx() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.xi(0) == -5.0);
    CHECK(g.xi(20) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(g.xi(10) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(Grid(1.0, 8), DomainError);
    CHECK_THROWS_AS(Grid(-1.0, 32), DomainError);
}

TEST_CASE("ddx is exact on linears and quadratics") {
    const Grid g(3.0, 61);
    const Field cst = ddx(Field::Constant(g.n, 2.7), g);
    CHECK(cst.abs().maxCoeff() == 0.0);  // constants are annihilated exactly

    const Field lin = apply(g, [](double x) { return x; });
    const Field dl = ddx(lin, g);
    for (int i = 0; i < g.n; ++i) CHECK(dl[i] == doctest::Approx(1.0).epsilon(1e-12));

    const Field quad = apply(g, [](double x) { return x * x; });
    const Field dq = ddx(quad, g);
    for (int i = 0; i < g.n; ++i) {
        CHECK(std::abs(dq[i] - 2.0 * g.xi(i)) <= 1e-12);
    }
    const Field d2 = d2dx(quad, g);
    for (int i = 0; i < g.n; ++i) CHECK(d2[i] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("ddx converges at second order on sin") {
    double errs[2];
    int idx = 0;
    for (int n : {101, 201}) {
        const Grid g(std::numbers::pi, n);
        const Field f = apply(g, [](double x) { return std::sin(x); });
        const Field d = ddx(f, g);
        double emax = 0.0;
        for (int i = 1; i < g.n - 1; ++i) {
            emax = std::max(emax, std::abs(d[i] - std::cos(g.xi(i))));
        }
        errs[idx++] = emax;
    }
    const double ratio = errs[0] / errs[1];
    CHECK(ratio > 3.2);  // order 2 within +-0.3
    CHECK(ratio < 5.0);
}

TEST_CASE("trapezoid rule") {
    {
        const Grid g(5.0, 41);
        CHECK(integrate(Field::Ones(g.n), g) == doctest::Approx(10.0).epsilon(1e-14));
        const Field odd = apply(g, [](double x) { return x; });
        CHECK(std::abs(integrate(odd, g)) <= 1e-13);
    }
    {
        const Grid g(1.0, 1001);
        const Field q = apply(g, [](double x) { return x * x; });
        // composite trapezoid error for x^2: (b-a) h^2 f''/12 = 4/3 * 1e-6
        CHECK(std::abs(integrate(q, g) - 2.0 / 3.0) <= 1.5e-6);
        CHECK(std::abs(integrate(q, g) - 2.0 / 3.0) >= 1e-6);  // the bound is sharp
    }
    CHECK_THROWS_AS(integrate(Field::Ones(5), Grid(1.0, 16)), DomainError);
}

TEST_CASE("hermite interpolant reproduces nodes and converges") {
    auto fv = [](double x) { return std::sin(1.3 * x); };
    auto fd = [](double x) { return 1.3 * std::cos(1.3 * x); };
    double errs[2];
    int idx = 0;
    for (int n : {33, 65}) {
        const Grid g(2.0, n);
        Field v(g.n), d(g.n);
        for (int i = 0; i < g.n; ++i) {
            v[i] = fv(g.xi(i));
            d[i] = fd(g.xi(i));
        }
        const HermiteInterpolant itp(-g.L, g.dx(), v, d);
        for (int i = 0; i < g.n; ++i) CHECK(itp(g.xi(i)) == doctest::Approx(v[i]).epsilon(1e-14));
        double emax = 0.0;
        for (double x = -1.9; x < 1.9; x += 0.0137) {
            emax = std::max(emax, std::abs(itp(x) - fv(x)));
        }
        errs[idx++] = emax;
    }
    CHECK(errs[0] / errs[1] > 6.0);  // at least cubic-order decay
    // constant extension
    const HermiteInterpolant itp(0.0, 1.0, Field::LinSpaced(4, 0.0, 3.0), Field::Ones(4));
    CHECK(itp(-5.0) == 0.0);
    CHECK(itp(99.0) == 3.0);
}

TEST_CASE("lagrange interpolant is exact on cubics") {
    const Grid g(2.0, 17);
    auto f = [](double x) { return ((0.5 * x - 0.2) * x + 1.0) * x - 0.7; };
    Field v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = f(g.xi(i));
    const LagrangeInterpolant itp(-g.L, g.dx(), v);
    for (double x = -1.99; x < 1.99; x += 0.0213) {
        CHECK(itp(x) == doctest::Approx(f(x)).epsilon(1e-12));
    }
}

TEST_CASE("sample_shifted") {
    const Grid g(2.0, 33);
    Field v(g.n), d(g.n);
    for (int i = 0; i < g.n; ++i) {
        v[i] = std::tanh(g.xi(i));
        d[i] = 1.0 - std::tanh(g.xi(i)) * std::tanh(g.xi(i));
    }
    const HermiteInterpolant itp(-g.L, g.dx(), v, d);
    const Field same = sample_shifted(itp, 0.0, g);
    for (int i = 0; i < g.n; ++i) CHECK(same[i] == doctest::Approx(v[i]).epsilon(1e-14));

    const HermiteInterpolant cst(-g.L, g.dx(), Field::Constant(g.n, 4.2), Field::Zero(g.n));
    const Field shifted = sample_shifted(cst, 17.3, g);
    for (int i = 0; i < g.n; ++i) CHECK(shifted[i] == 4.2);

    // shift then unshift, refined: at least third-order decay
    double errs[2];
    int idx = 0;
    for (int n : {65, 129}) {
        const Grid gg(2.0, n);
        Field vv(gg.n), dd(gg.n);
        for (int i = 0; i < gg.n; ++i) {
            vv[i] = std::tanh(gg.xi(i));
            dd[i] = 1.0 - std::tanh(gg.xi(i)) * std::tanh(gg.xi(i));
        }
        const HermiteInterpolant it1(-gg.L, gg.dx(), vv, dd);
        const Field fwd = sample_shifted(it1, 0.3, gg);
        // derivative data for the shifted samples, from the analytic form
        Field dfwd(gg.n);
        for (int i = 0; i < gg.n; ++i) {
            const double th = std::tanh(gg.xi(i) - 0.3);
            dfwd[i] = 1.0 - th * th;
        }
        const HermiteInterpolant it2(-gg.L, gg.dx(), fwd, dfwd);
        const Field back = sample_shifted(it2, -0.3, gg);
        double emax = 0.0;
        for (int i = 0; i < gg.n; ++i) {
            if (std::abs(gg.xi(i)) > gg.L - 0.5) continue;  // clear of the extension
            emax = std::max(emax, std::abs(back[i] - vv[i]));
        }
        errs[idx++] = emax;
    }
    CHECK(errs[0] / errs[1] > 5.6);  // >= 2^2.5
}
