#pragma once
#include <cmath>

namespace dwsim {

constexpr double hbar_SI = 1.054571817e-34; // J s
constexpr double kB_SI = 1.380649e-23;      // J/K

// Physical scales of the resonator. Everything downstream is dimensionless
// (hbar = omega = 1, lengths in z_zpm, times in 1/omega); this struct is the
// only place where SI units enter or leave.
struct UnitSystem {
    double mass;  // kg
    double omega; // rad/s
    double beta;  // J/m^4

    double gamma() const { return beta * hbar_SI / (16.0 * mass * mass * omega * omega * omega); }
    double z_zpm() const { return std::sqrt(hbar_SI / (2.0 * mass * omega)); }
    // dimensionless temperature kB*T / (hbar*omega)
    double thermal_scale(double temperature_K) const {
        return kB_SI * temperature_K / (hbar_SI * omega);
    }

    static UnitSystem default_device();
};

} // namespace dwsim
