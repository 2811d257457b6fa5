#pragma once
#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "dwsim/spectral.hpp"

namespace dwsim {

enum class RampKind { Linear, Sqrt, Sine, GapAdapted, Adiabatic };

RampKind ramp_kind_from_string(const std::string& name);
std::string to_string(RampKind kind);

// zeta(t) over one protocol stage; times in 1/omega.
struct RampSchedule {
    RampKind kind = RampKind::Sine;
    double zeta_start = 0.0;
    double zeta_end = 0.0;
    double duration = 1.0;
    double t_start = 0.0;
};

struct RampPoint {
    double zeta;
    double zeta_dot;
};

RampPoint ramp_value(const RampSchedule& schedule, double t);

// Even-level transition pairs (n, m), n < m, addressed by the truncated drive.
struct TransitionSet {
    std::vector<std::pair<int, int>> pairs;

    static TransitionSet up_to(int level); // all even pairs n < m <= level
    static TransitionSet parse(const std::string& text); // "upto4", "none", "0-2,0-4"
    bool empty() const { return pairs.empty(); }
    void validate() const;
};

struct DriveHamiltonian {
    Eigen::MatrixXcd matrix; // computational basis, units hbar*omega
    double zeta = 0.0;
    double zeta_dot = 0.0;
};

// Exact counterdiabatic generator i sum_{n!=m} |n><n|dH/dt|m><m| / (E_m - E_n).
// dH_dt in hbar*omega units, same basis as eig.
DriveHamiltonian cd_full(const EigenSystem& eig, const Eigen::MatrixXd& dH_dt);

// Truncated even-subspace drive:
//   H_drv = -(i/4) zeta_dot sum_{(n,m)} (<n|z^2|m> / delta_mn) |n><m| + h.c.
// with z in z_zpm units and delta in omega units.
DriveHamiltonian cd_even_truncated(const EigenSystem& eig, double zeta_dot,
                                   const TransitionSet& set);

} // namespace dwsim
