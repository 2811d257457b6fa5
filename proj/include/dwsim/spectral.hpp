#pragma once
#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "dwsim/units.hpp"

namespace dwsim {

enum class Parity { Even, Odd, Undefined };

// Basis selection rule: theta = c1 deep in the single-well regime, and
// theta*|zeta| pinned to c2 once |zeta| gets small (or zeta > 0), so the
// basis frequency never collapses as zeta -> 0.
struct BasisPolicy {
    double c1 = 2.0;
    double c2 = 5e-4;
    double zeta_switch = -2.5e-4;
    int dim = 50;
};

struct ScaledBasis {
    int dim;
    double theta;     // scaling parameter (omega0^2 / |zeta| when zeta != 0)
    double zeta_ref;  // zeta the basis was selected for
    double omega0;    // omega0 / omega = sqrt(theta * |zeta_ref|), or sqrt(c2) capped
    bool capped = false;
};

struct PotentialParams {
    double zeta;       // quadratic control, >= -1
    double gamma;      // Duffing strength
    double xi = 0.0;   // cubic asymmetry
};

struct EigenSystem {
    Eigen::VectorXd energies;      // ascending, units hbar*omega
    Eigen::MatrixXd states;        // eigenvector columns in the scaled basis
    std::vector<Parity> parities;
    double zeta = 0.0;
    ScaledBasis basis{};
};

ScaledBasis build_basis(double zeta, const BasisPolicy& policy);

// Annihilation/creation pair, entries sqrt(n) on the first off-diagonals.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ladder_operators(const ScaledBasis& basis);

// Powers of x = b + b^dag and k = b - b^dag, formed at dim+pad and truncated
// after multiplication. Multiplying truncated factors instead would seed
// spurious eigenvalues inside the physical spectrum.
struct BasisOperators {
    Eigen::MatrixXd x, x2, x3, x4, k2;
};
BasisOperators basis_operators(const ScaledBasis& basis, int pad = 4);

// H / (hbar*omega0) in the scaled basis.
Eigen::MatrixXd build_hamiltonian(const PotentialParams& params, const ScaledBasis& basis);
Eigen::MatrixXd build_hamiltonian(const PotentialParams& params, const ScaledBasis& basis,
                                  const BasisOperators& ops);

// Full diagonalization; energies converted to hbar*omega units; columns
// phase-fixed (largest-|entry| component positive) and parity-labelled.
EigenSystem eigensystem(const Eigen::MatrixXd& H, const PotentialParams& params,
                        const ScaledBasis& basis);

// eps_n = |E^H_n - E^L_n| / |E^H_n + E^L_n|; NaN where the denominator vanishes.
std::vector<double> relative_error(const std::vector<double>& e_high,
                                   const std::vector<double>& e_low);

// Transition frequency delta_mn = E_m - E_n in units of omega.
double gap(const EigenSystem& eig, int m, int n);

// Overlap matrix O(m, n) = <m_to | n_from> between number states of two
// scaled bases (same physical coordinate, different oscillator frequency).
Eigen::MatrixXd basis_overlap(const ScaledBasis& to, const ScaledBasis& from);

// Flip column signs of V so that diag(V^T Vref) >= 0; keeps eigenvector
// phases continuous along a parameter sweep.
void align_columns(Eigen::MatrixXd& V, const Eigen::MatrixXd& Vref);

} // namespace dwsim
