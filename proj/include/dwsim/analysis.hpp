#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dwsim/dynamics.hpp"
#include "dwsim/spectral.hpp"

namespace dwsim {

// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)); pure arguments take
// the sqrt(<psi|rho|psi>) shortcut.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct WignerGrid {
    std::vector<double> x_axis; // z / z_zpm
    std::vector<double> p_axis; // p in hbar/(2 z_zpm) units
    Eigen::MatrixXd values;     // values(i, j) = W(x_i, p_j)
    bool support_warning = false;

    double integral() const;
};

// Fock-kernel evaluation (associated Laguerre recurrence) of W for a state
// given in the scaled basis; axes in z_zpm-based units as above.
WignerGrid wigner(const DensityMatrix& rho, const ScaledBasis& basis,
                  double x_min, double x_max, double p_min, double p_max, int resolution);

// rho_nn in the eigenbasis.
std::vector<double> populations(const DensityMatrix& rho, const EigenSystem& eig);

double parity_expectation(const DensityMatrix& rho);

void write_wigner_csv(const WignerGrid& grid, const std::string& path);
void write_wigner_binary(const WignerGrid& grid, const std::string& path);

} // namespace dwsim
