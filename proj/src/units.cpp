#include "dwsim/units.hpp"

#include <numbers>

namespace dwsim {

UnitSystem UnitSystem::default_device() {
    // 5 um x 1 um x 0.335 nm membrane, Y = 1.02 TPa, rho = 2.26e3 kg/m^3,
    // fundamental mode pinned at omega/2pi = 2 MHz.
    const double L = 5e-6, w = 1e-6, h = 3.35e-10;
    const double Y = 1.02e12, rho = 2.26e3;
    const double pi = std::numbers::pi;
    UnitSystem u;
    u.mass = rho * h * L * w / 2.0;
    u.beta = (Y * h * w / (8.0 * L * L * L)) * pi * pi * pi * pi;
    u.omega = 2.0 * pi * 2e6;
    return u;
}

} // namespace dwsim
