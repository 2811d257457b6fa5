#pragma once
#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwsim/control.hpp"
#include "dwsim/spectral.hpp"
#include "dwsim/units.hpp"

namespace dwsim {

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DensityMatrix {
    Eigen::MatrixXcd matrix;

    int dim() const { return int(matrix.rows()); }
    double trace_error() const { return std::abs(matrix.trace().real() - 1.0) + std::abs(matrix.trace().imag()); }
    double hermiticity_error() const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff(); }
    double purity() const { return (matrix * matrix).trace().real(); }
    double min_eigenvalue() const;
    void validate(double trace_tol = 1e-8, double herm_tol = 1e-10, double pos_tol = 1e-6) const;
};

struct BathParams {
    double temperature = 0.015;   // K
    double quality_factor = 1e6;
    UnitSystem unit = UnitSystem::default_device();
    bool enabled = true;          // false = fully closed evolution

    bool closed() const { return !enabled; }
};

// N = 1/(exp(hbar*delta*omega/kB T) - 1); 0 at T = 0.
double thermal_occupation(double delta, const BathParams& bath);

// Thermal jump operator in the computational basis,
// A = sum_{m>n} g_mn [N|m><n| + (N+1)|n><m|], g_mn = (delta_mn/Q) <m|z|n>.
Eigen::MatrixXcd jump_operator(const EigenSystem& eig, const BathParams& bath);

// drho/dtau = -i[H, rho] + (1/2)[z, rho A^dag - A rho]; tau = omega t.
Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                     const Eigen::MatrixXcd& A, const Eigen::MatrixXd& z_op);

struct StepPolicy {
    double dt_max = 0.05;        // accuracy ceiling on the step (1/omega)
    double stability = 0.5;      // h * ||H||_inf kept below this
    double h_override = 0.0;     // > 0 forces a fixed step
    int refresh_every = 1;       // integrator steps between eigensystem refreshes
    int samples = 120;           // trajectory sample count
    bool store_states = false;   // keep sampled density matrices
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> zeta;
    std::vector<double> fidelity_ground; // to instantaneous ground state
    std::vector<double> purity;
    std::vector<double> trace_err;
    std::vector<Eigen::MatrixXcd> states; // only if store_states
    DensityMatrix final_state;
    double final_fidelity_ground = 0.0;
    long steps = 0;
};

Trajectory evolve(const DensityMatrix& rho0, const RampSchedule& schedule,
                  const TransitionSet& transitions, const BathParams& bath,
                  const PotentialParams& params, const ScaledBasis& basis,
                  const StepPolicy& policy);

// Gibbs-diagonal state over eig's levels with harmonic-ladder weights,
// p_n ~ exp(-n ln(1 + 1/N0)); N0 = 0 gives the ground state.
DensityMatrix initial_thermal_state(const EigenSystem& eig, double occupation);

struct ProtocolConfig {
    double zeta_start = -1.0;
    double zeta_c = -2.5e-4;
    double zeta_f = 3e-4;
    double dt1 = 100.0;          // stage-2 duration, 1/omega
    double dt2 = 110.0;          // stage-3 duration, 1/omega
    RampKind stage2_ramp = RampKind::Adiabatic;
    RampKind stage3_ramp = RampKind::Sine;
    TransitionSet transitions = TransitionSet::up_to(4);
    double initial_occupation = 0.0;
    BathParams bath{};
    double xi = 0.0;
    double gamma = UnitSystem::default_device().gamma();
    BasisPolicy policy{};
    int dim_stage2 = 140;
    bool include_stage2 = true;  // false: start stage 3 thermally at zeta_c
    StepPolicy stepping{};
};

struct ProtocolResult {
    Trajectory stage2; // empty when stage 2 skipped
    Trajectory stage3;
    double final_fidelity = 0.0;           // to the ground state of H(zeta_f, xi)
    double final_fidelity_symmetric = 0.0; // to the xi = 0 ground state
    double basis_switch_leakage = 0.0;
    ScaledBasis basis{};                   // stage-3 computational basis
    DensityMatrix final_state;
};

ProtocolResult run_protocol(const ProtocolConfig& config);

} // namespace dwsim
