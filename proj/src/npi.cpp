#include "nsk/npi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace nsk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller, independent of the standard library's distribution internals.
double normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

double TestFunctionW::operator()(double y) const {
    double s = coeffs.size() > 0 ? coeffs[0] : 0.0;
    for (Eigen::Index j = 1; j < coeffs.size(); ++j) {
        const auto k = static_cast<double>((j + 1) / 2);
        s += (j % 2 == 1) ? coeffs[j] * std::cos(two_pi * k * y)
                          : coeffs[j] * std::sin(two_pi * k * y);
    }
    return s;
}

double TestFunctionW::deriv(double y) const {
    double s = 0.0;
    for (Eigen::Index j = 1; j < coeffs.size(); ++j) {
        const auto k = static_cast<double>((j + 1) / 2);
        s += (j % 2 == 1) ? -coeffs[j] * two_pi * k * std::sin(two_pi * k * y)
                          : coeffs[j] * two_pi * k * std::cos(two_pi * k * y);
    }
    return s;
}

double TestFunctionW::l2_sq() const {
    if (coeffs.size() == 0) return 0.0;
    double s = coeffs[0] * coeffs[0];
    for (Eigen::Index j = 1; j < coeffs.size(); ++j) s += 0.5 * coeffs[j] * coeffs[j];
    return s;
}

void TestFunctionW::rescale_l2(double target_sq) {
    const double cur = l2_sq();
    if (!(cur > 0.0)) throw DomainError("cannot rescale a zero test function");
    coeffs *= std::sqrt(target_sq / cur);
}

double npi_functional(const TestFunctionW& W, double delta, int m) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw DomainError("npi_functional requires delta in (0, 0.5)");
    }
    if (m < 256 || m % 2 != 0) {
        throw DomainError("npi_functional requires an even node count m >= 256");
    }
    const double h = 1.0 / m;
    double i1 = 0, i2 = 0, i3 = 0, i3a = 0, id = 0;
    for (int j = 0; j <= m; ++j) {
        const double y = j * h;
        const double wgt = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        const double Wy = W(y);
        const double dWy = W.deriv(y);
        i1 += wgt * Wy;
        i2 += wgt * Wy * Wy;
        i3 += wgt * Wy * Wy * Wy;
        i3a += wgt * std::abs(Wy * Wy * Wy);
        id += wgt * y * (1.0 - y) * dWy * dWy;
    }
    const double f = h / 3.0;
    i1 *= f;
    i2 *= f;
    i3 *= f;
    i3a *= f;
    id *= f;
    const double lin = i2 + 2.0 * i1;
    return -lin * lin / delta + (1.0 + delta) * i2 + (2.0 / 3.0) * i3 + delta * i3a -
           (0.9 - delta) * id;
}

TestFunctionW npi_sample(double C1, long id, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix(seed ^ static_cast<std::uint64_t>(id + 1)));
    TestFunctionW W;
    W.coeffs.resize(16);
    for (int j = 0; j < 16; ++j) W.coeffs[j] = normal(rng);
    static constexpr double targets[3] = {0.1, 0.5, 1.0};
    W.rescale_l2(targets[id % 3] * C1);
    return W;
}

NpiReport npi_campaign(double C1, const std::vector<double>& deltas, int count,
                       std::uint64_t seed, int m, double tol, int threads) {
    NpiReport rep;
    rep.max_R = -std::numeric_limits<double>::infinity();
    const std::size_t nd = deltas.size();
    rep.samples.resize(static_cast<std::size_t>(count) * nd);

    auto evaluate_range = [&](long lo, long hi) {
        for (long id = lo; id < hi; ++id) {
            const TestFunctionW W = npi_sample(C1, id, seed);
            const double l2 = W.l2_sq();
            for (std::size_t j = 0; j < nd; ++j) {
                rep.samples[id * nd + j] =
                    NpiSample{id, deltas[j], l2, npi_functional(W, deltas[j], m)};
            }
        }
    };
    const int workers = std::clamp(threads, 1, std::max(1, count));
    if (workers == 1) {
        evaluate_range(0, count);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (count + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long lo = w * chunk;
            const long hi = std::min<long>(count, lo + chunk);
            if (lo < hi) pool.emplace_back(evaluate_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<NpiSample> order = rep.samples;
    std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(10, order.size()),
                      order.end(),
                      [](const NpiSample& a, const NpiSample& b) { return a.R > b.R; });
    order.resize(std::min<std::size_t>(10, order.size()));
    for (const auto& s : order) rep.top.emplace_back(s, npi_sample(C1, s.id, seed).coeffs);
    for (const auto& s : rep.samples) {
        rep.max_R = std::max(rep.max_R, s.R);
        if (s.R > tol) rep.violations.emplace_back(s, npi_sample(C1, s.id, seed).coeffs);
    }
    return rep;
}

JacobianReport change_of_variables(const Profile& prof, double y_cut) {
    if (prof.shock.family != ShockFamily::Two) {
        throw DomainError("change_of_variables expects a 2-shock profile");
    }
    const auto& p = prof.params;
    const auto& s = prof.shock;
    const double p_minus = pressure(s.v_minus, p);
    JacobianReport rep;
    rep.alpha_g = p.gamma * s.sigma_star * p_minus / (p.gamma + 1.0);
    rep.target = s.eps / (2.0 * rep.alpha_g);
    const int n = prof.grid.n;
    rep.y.resize(n);
    rep.max_deviation = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pt = pressure(prof.vt[i], p);
        const double y = (p_minus - pt) / s.eps;
        rep.y[i] = y;
        if (std::min(y, 1.0 - y) < y_cut) continue;
        const double dy = -dpressure(prof.vt[i], p) * prof.dvt[i] / s.eps;
        const double val =
            std::pow(prof.vt[i], p.beta) * dy / (y * (1.0 - y));
        rep.max_deviation = std::max(rep.max_deviation, std::abs(val - rep.target));
    }
    return rep;
}

namespace {

// 4-point Lagrange interpolation on monotone, non-uniform abscissae.
double lagrange4(const Field& xs, const Field& ys, double x) {
    const Eigen::Index n = xs.size();
    if (x <= xs[0]) return ys[0];
    if (x >= xs[n - 1]) return ys[n - 1];
    Eigen::Index lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const Eigen::Index mid = (lo + hi) / 2;
        (xs[mid] <= x ? lo : hi) = mid;
    }
    Eigen::Index j = std::clamp<Eigen::Index>(lo - 1, 0, n - 4);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            w *= (x - xs[j + b]) / (xs[j + a] - xs[j + b]);
        }
        acc += w * ys[j + a];
    }
    return acc;
}

}  // namespace

Field lift_to_W(const Field& v, const Profile& prof, double lambda, int m_nodes) {
    if (prof.shock.family != ShockFamily::Two) {
        throw DomainError("lift_to_W expects a 2-shock profile");
    }
    if (m_nodes < 4) throw DomainError("lift_to_W needs at least 4 output nodes");
    const auto& p = prof.params;
    const auto& s = prof.shock;
    const double p_minus = pressure(s.v_minus, p);
    const Field pt = pressure(prof.vt, p);
    const Field y_data = (p_minus - pt) / s.eps;
    const Field w_data = (lambda / s.eps) * (pressure(v, p) - pt);
    Field W(m_nodes);
    for (int i = 0; i < m_nodes; ++i) {
        const double y = static_cast<double>(i) / (m_nodes - 1);
        W[i] = lagrange4(y_data, w_data, y);
    }
    return W;
}

}  // namespace nsk
