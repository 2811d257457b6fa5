#include "dwsim/device.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwsim {

MembraneGeometry MembraneGeometry::default_device() {
    return {5e-6, 1e-6, 3.35e-10, 2.26e3, 1.02e12, 0.0};
}

ElasticParams elastic_params(const MembraneGeometry& g, int mode, double omega_override) {
    if (mode < 1) throw std::invalid_argument("elastic_params: mode < 1");
    if (g.length <= 0 || g.width <= 0 || g.thickness <= 0 || g.mass_density <= 0 ||
        g.young_modulus <= 0)
        throw std::invalid_argument("elastic_params: non-positive geometry");
    const double pi = std::numbers::pi;
    const double npi = mode * pi;
    ElasticParams p;
    p.mass = g.mass_density * g.thickness * g.length * g.width / 2.0;
    p.beta = g.young_modulus * g.thickness * g.width / (8.0 * std::pow(g.length, 3)) *
             std::pow(npi, 4);
    if (omega_override > 0) {
        p.omega = omega_override;
    } else {
        if (g.tension <= 0)
            throw std::invalid_argument("elastic_params: need tension or omega override");
        const double mu = g.mass_density * g.thickness; // areal density
        p.omega = std::sqrt(g.tension / mu) * npi / g.length;
    }
    return p;
}

double duffing_gamma(double mass, double omega, double beta) {
    if (mass <= 0 || omega <= 0 || beta <= 0)
        throw std::invalid_argument("duffing_gamma: non-positive input");
    return beta * hbar_SI / (16.0 * mass * mass * omega * omega * omega);
}

namespace {

// degree-6 truncated Taylor jet in one variable
constexpr int JET = 7;
using Jet = std::array<double, JET>;

Jet jconst(double v) {
    Jet j{};
    j[0] = v;
    return j;
}

Jet jadd(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < JET; ++i) r[i] = a[i] + b[i];
    return r;
}

Jet jmul(const Jet& a, const Jet& b) {
    Jet r{};
    for (int i = 0; i < JET; ++i)
        for (int k = 0; k <= i; ++k) r[i] += a[k] * b[i - k];
    return r;
}

Jet jinv(const Jet& a) {
    if (a[0] == 0) throw std::domain_error("jet division by zero");
    Jet r{};
    r[0] = 1.0 / a[0];
    for (int i = 1; i < JET; ++i) {
        double acc = 0.0;
        for (int k = 1; k <= i; ++k) acc += a[k] * r[i - k];
        r[i] = -acc / a[0];
    }
    return r;
}

Jet jsqrt(const Jet& a) {
    if (a[0] <= 0) throw std::domain_error("jet sqrt of non-positive value");
    Jet r{};
    r[0] = std::sqrt(a[0]);
    for (int i = 1; i < JET; ++i) {
        double acc = 0.0;
        for (int k = 1; k < i; ++k) acc += r[k] * r[i - k];
        r[i] = (a[i] - acc) / (2.0 * r[0]);
    }
    return r;
}

Jet jlog(const Jet& a) {
    if (a[0] <= 0) throw std::domain_error("jet log of non-positive value");
    // d/dz log a = a'/a, integrate term by term
    const Jet dlog = jmul([&] {
        Jet d{};
        for (int i = 0; i + 1 < JET; ++i) d[i] = (i + 1) * a[i + 1];
        return d;
    }(), jinv(a));
    Jet r{};
    r[0] = std::log(a[0]);
    for (int i = 1; i < JET; ++i) r[i] = dlog[i - 1] / i;
    return r;
}

Jet rod_potential_jet(const ElectrodeGeometry& g) {
    // V(z) = 2 V0 ln[(R + a)/(R - a)], R = sqrt(a^2 + b^2 + (z - z0)^2), at x = 0
    const double a = g.half_length, b = g.half_separation, z0 = g.standoff;
    if (a <= 0 || b <= 0 || z0 <= 0)
        throw std::invalid_argument("electrostatic_coeffs: non-positive geometry");
    Jet dz{}; // (z - z0) as a jet in z around 0
    dz[0] = -z0;
    dz[1] = 1.0;
    // rho2 = b^2 + (z - z0)^2; ln[(R+a)/(R-a)] = 2 ln(R+a) - ln(rho2) avoids the
    // R - a cancellation for long rods
    const Jet rho2 = jadd(jconst(b * b), jmul(dz, dz));
    const Jet R = jsqrt(jadd(jconst(a * a), rho2));
    const Jet num = jadd(R, jconst(a));
    Jet v = jadd([&] {
        Jet nl = jlog(num);
        for (auto& x : nl) x *= 2.0;
        return nl;
    }(), [&] {
        Jet nl = jlog(rho2);
        for (auto& x : nl) x = -x;
        return nl;
    }());
    for (auto& x : v) x *= 2.0 * g.potential;
    return v;
}

} // namespace

std::vector<double> electrostatic_coeffs(const ElectrodeGeometry& geom, int max_order) {
    if (max_order < 1 || max_order > 6)
        throw std::invalid_argument("electrostatic_coeffs: order must be in 1..6");
    const Jet v = rod_potential_jet(geom);
    return std::vector<double>(v.begin() + 1, v.begin() + 1 + max_order);
}

double two_rod_potential(const ElectrodeGeometry& g, double z) {
    const double a = g.half_length, b = g.half_separation, z0 = g.standoff;
    const double rho2 = b * b + (z - z0) * (z - z0);
    if (rho2 <= 0) throw std::invalid_argument("two_rod_potential: log argument <= 0");
    const double R = std::sqrt(a * a + rho2);
    return 2.0 * g.potential * (2.0 * std::log(R + a) - std::log(rho2));
}

std::vector<double> electrostatic_coeffs_fd(const ElectrodeGeometry& geom, int max_order) {
    if (max_order < 1 || max_order > 6)
        throw std::invalid_argument("electrostatic_coeffs_fd: order must be in 1..6");
    // central differences in the dimensionless coordinate u = z/z0 (keeps the
    // step well above roundoff for high orders), Richardson-extrapolated
    const double z0 = geom.standoff;
    auto deriv = [&](int order, long double h) {
        // symmetric O(h^2) stencils up to the 6th derivative; long double keeps
        // the cancellation noise below the 1e-8 agreement target
        const long double a = geom.half_length, b = geom.half_separation, zz0 = geom.standoff;
        auto f = [&](long double u) {
            const long double z = u * zz0;
            const long double rho2 = b * b + (z - zz0) * (z - zz0);
            const long double R = sqrtl(a * a + rho2);
            return 2.0L * (long double)geom.potential * (2.0L * logl(R + a) - logl(rho2));
        };
        switch (order) {
            case 1: return (f(h) - f(-h)) / (2 * h);
            case 2: return (f(h) - 2 * f(0) + f(-h)) / (h * h);
            case 3: return (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h * h * h);
            case 4:
                return (f(2 * h) - 4 * f(h) + 6 * f(0) - 4 * f(-h) + f(-2 * h)) /
                       (h * h * h * h);
            case 5:
                return (f(3 * h) - 4 * f(2 * h) + 5 * f(h) - 5 * f(-h) + 4 * f(-2 * h) -
                        f(-3 * h)) /
                       (2 * std::pow(h, 5));
            case 6:
                return (f(3 * h) - 6 * f(2 * h) + 15 * f(h) - 20 * f(0) + 15 * f(-h) -
                        6 * f(-2 * h) + f(-3 * h)) /
                       std::pow(h, 6);
        }
        throw std::logic_error("unsupported derivative order");
    };
    std::vector<double> out(max_order);
    double fact = 1.0;
    for (int j = 1; j <= max_order; ++j) {
        fact *= j;
        const int rows = 5;
        double tab[rows][rows];
        for (int i = 0; i < rows; ++i) tab[i][0] = deriv(j, 0.2 / std::pow(2.0, i));
        for (int c = 1; c < rows; ++c)
            for (int i = c; i < rows; ++i) {
                const double p = std::pow(4.0, c);
                tab[i][c] = (p * tab[i][c - 1] - tab[i - 1][c - 1]) / (p - 1.0);
            }
        // derivative w.r.t. u = z/z0, converted back to z
        out[j - 1] = tab[rows - 1][rows - 1] / fact / std::pow(z0, j);
    }
    return out;
}

double control_mapping(double alpha2, const UnitSystem& unit) {
    return -2.0 * alpha2 / (unit.mass * unit.omega * unit.omega) - 1.0;
}

double control_mapping_inverse(double zeta, const UnitSystem& unit) {
    return -(1.0 + zeta) * unit.mass * unit.omega * unit.omega / 2.0;
}

} // namespace dwsim
