#pragma once
#include <vector>

#include "dwsim/units.hpp"

namespace dwsim {

struct MembraneGeometry {
    double length;       // m
    double width;        // m
    double thickness;    // m
    double mass_density; // kg/m^3
    double young_modulus;// Pa
    double tension;      // N/m

    static MembraneGeometry default_device();
};

struct ElectrodeGeometry {
    double half_length;  // a, m
    double half_separation; // b, m
    double standoff;     // z0, m
    double potential;    // V0, volts
};

struct ElasticParams {
    double mass;  // kg
    double beta;  // J/m^4
    double omega; // rad/s
};

// mass = rho h L w / 2; beta = (Y h w / 8 L^3)(n pi)^4; omega from the tension
// formula unless omega_override > 0.
ElasticParams elastic_params(const MembraneGeometry& geom, int mode, double omega_override = 0.0);

double duffing_gamma(double mass, double omega, double beta);

// Taylor coefficients alpha_j (j = 1..max_order) of the on-axis two-rod
// potential about z = 0: V(z) = sum_j alpha_j z^j. Analytic via truncated
// Taylor-jet arithmetic on the closed form.
std::vector<double> electrostatic_coeffs(const ElectrodeGeometry& geom, int max_order);

// Same coefficients by Richardson-extrapolated central differences (oracle).
std::vector<double> electrostatic_coeffs_fd(const ElectrodeGeometry& geom, int max_order);

// On-axis potential value (x = 0).
double two_rod_potential(const ElectrodeGeometry& geom, double z);

// zeta = -2 alpha2 / (m omega^2) - 1, inverse of alpha2 = -(1 + zeta) m omega^2 / 2.
double control_mapping(double alpha2, const UnitSystem& unit);
double control_mapping_inverse(double zeta, const UnitSystem& unit);

} // namespace dwsim
