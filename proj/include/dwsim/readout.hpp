#pragma once
#include <string>
#include <vector>

#include "dwsim/dynamics.hpp"
#include "dwsim/spectral.hpp"

namespace dwsim {

struct CavityParams {
    double kappa = 1.0; // units omega
    double g = 0.1;     // units omega
};

struct SpectrumLine {
    int m, n;       // transition partner m, populated level n
    double delta;   // delta_mn = E_m - E_n (omega units)
    double center;  // line position Omega = E_n - E_m
    double weight;
    double width;   // Lorentzian half-width (floor applied)
};

struct SpectrumResult {
    std::vector<double> omega_axis;
    std::vector<double> values;
    std::vector<SpectrumLine> lines;
};

// Gamma_mn: m < n -> g_mn N(delta), m > n -> g_mn (N+1), g_mn = (|delta|/Q) z_mn.
double decoherence_rate(const EigenSystem& eig, int m, int n, const BathParams& bath);

// S(Omega) = sum_{n,m} [kappa g^2 z_mn^2 / (kappa^2/4 + delta_mn^2)] L(Omega) rho_nn
// with unit-area Lorentzians centered at E_n - E_m (photons emitted while the
// resonator absorbs E_m - E_n appear red-shifted).
SpectrumResult output_spectrum(const std::vector<double>& populations, const EigenSystem& eig,
                               const CavityParams& cavity, const BathParams& bath,
                               const std::vector<double>& omega_axis,
                               double floor_width = 1e-6);

std::vector<double> default_omega_axis(double span = 0.2, int points = 4001);

void write_spectrum_csv(const SpectrumResult& spec, const std::string& path);
void write_spectrum_lines_json(const SpectrumResult& spec, const std::string& path);

} // namespace dwsim
