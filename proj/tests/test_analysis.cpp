#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dwsim/analysis.hpp"

using namespace dwsim;

namespace {

constexpr double pi = std::numbers::pi;

DensityMatrix fock(int n, int dim) {
    DensityMatrix rho;
    rho.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    rho.matrix(n, n) = 1.0;
    return rho;
}

ScaledBasis unit_basis(int dim) {
    ScaledBasis basis;
    basis.dim = dim;
    basis.omega0 = 1.0;
    return basis;
}

double grid_value_at(const WignerGrid& g, double x, double p) {
    // nearest grid node
    int ix = 0, ip = 0;
    for (size_t i = 1; i < g.x_axis.size(); ++i)
        if (std::abs(g.x_axis[i] - x) < std::abs(g.x_axis[ix] - x)) ix = int(i);
    for (size_t j = 1; j < g.p_axis.size(); ++j)
        if (std::abs(g.p_axis[j] - p) < std::abs(g.p_axis[ip] - p)) ip = int(j);
    return g.values(ix, ip);
}

} // namespace

TEST_CASE("fidelity of pure states") {
    const auto r0 = fock(0, 6), r1 = fock(1, 6);
    CHECK(fidelity(r0, r0) == doctest::Approx(1.0));
    CHECK(fidelity(r0, r1) == doctest::Approx(0.0).epsilon(1e-10));
    DensityMatrix plus;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(6);
    psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
    plus.matrix = psi * psi.adjoint();
    CHECK(fidelity(r0, plus) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("fidelity of commuting mixed states matches the classical overlap") {
    DensityMatrix a, b;
    a.matrix = Eigen::Vector2cd(0.7, 0.3).asDiagonal();
    b.matrix = Eigen::Vector2cd(0.5, 0.5).asDiagonal();
    const double expected = std::sqrt(0.35) + std::sqrt(0.15); // sum sqrt(p q)
    CHECK(fidelity(a, b) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(fidelity(b, a) == doctest::Approx(expected).epsilon(1e-10)); // symmetric
}

TEST_CASE("pure shortcut agrees with the general formula") {
    // nearly-pure copy of |0><0| runs through the Uhlmann branch
    DensityMatrix pure0 = fock(0, 4);
    DensityMatrix nearly;
    nearly.matrix = 0.999999999 * pure0.matrix +
                    (1e-9 / 3.0) * (Eigen::MatrixXcd::Identity(4, 4) - pure0.matrix);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(0) = std::sqrt(0.25);
    psi(2) = std::sqrt(0.75);
    DensityMatrix probe;
    probe.matrix = psi * psi.adjoint();
    CHECK(fidelity(probe, pure0) == doctest::Approx(fidelity(probe, nearly)).epsilon(1e-4));
    CHECK(fidelity(probe, pure0) == doctest::Approx(0.5));
}

TEST_CASE("wigner function of the vacuum") {
    const auto grid = wigner(fock(0, 24), unit_basis(24), -5, 5, -5, 5, 101);
    CHECK(grid.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(grid.support_warning);
    // phase-space parity relation: tr(Pi rho) = 2 pi W(0, 0) in these coordinates
    CHECK(2.0 * pi * grid_value_at(grid, 0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    // all values non-negative for a Gaussian state
    CHECK(grid.values.minCoeff() > -1e-12);
}

TEST_CASE("wigner function of the first Fock state is negative at the origin") {
    const auto grid = wigner(fock(1, 24), unit_basis(24), -6, 6, -6, 6, 121);
    CHECK(grid.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(2.0 * pi * grid_value_at(grid, 0, 0) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(2.0 * pi * grid_value_at(grid, 0, 0) ==
          doctest::Approx(parity_expectation(fock(1, 24))).epsilon(1e-9));
}

TEST_CASE("wigner marginal reproduces the position distribution") {
    // superposition with off-diagonal structure
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(24);
    psi(0) = std::sqrt(0.6);
    psi(2) = std::complex<double>(0.0, std::sqrt(0.4));
    DensityMatrix rho;
    rho.matrix = psi * psi.adjoint();
    const auto grid = wigner(rho, unit_basis(24), -7, 7, -7, 7, 141);
    // integrate over p at x = 0 (trapezoid)
    int ix = 70; // center of the axis
    double marginal = 0.0;
    for (size_t j = 0; j + 1 < grid.p_axis.size(); ++j)
        marginal += 0.5 * (grid.values(ix, j) + grid.values(ix, j + 1)) *
                    (grid.p_axis[j + 1] - grid.p_axis[j]);
    // |psi(0)|^2 from the harmonic-oscillator wavefunctions at x = 0
    const double h0 = std::pow(1.0 / (2.0 * pi), 0.25) * std::exp(0.0); // s = 1
    const double h2 = -h0 / std::sqrt(2.0); // H_2(0)/sqrt(2^2 2!) = -1/sqrt(2)
    const double density = std::norm(std::sqrt(0.6) * h0 +
                                     std::complex<double>(0, std::sqrt(0.4)) * h2);
    CHECK(marginal == doctest::Approx(density).epsilon(0.01));
}

TEST_CASE("wigner support warning fires when the window clips the state") {
    const auto grid = wigner(fock(6, 24), unit_basis(24), -1, 1, -1, 1, 21);
    CHECK(grid.support_warning);
}

TEST_CASE("double-well ground state is an interference cat") {
    BasisPolicy policy;
    policy.dim = 60;
    const double zeta = 3e-4;
    const auto basis = build_basis(zeta, policy);
    PotentialParams params;
    params.zeta = zeta;
    params.gamma = 3.085919e-8;
    const auto eig = eigensystem(build_hamiltonian(params, basis), params, basis);
    DensityMatrix rho;
    Eigen::VectorXcd psi = eig.states.col(0).cast<std::complex<double>>();
    rho.matrix = psi * psi.adjoint();
    const auto grid = wigner(rho, basis, -50, 50, -6, 6, 161);
    // fringe sampling limits the quadrature here; 0.5% is resolution-bound
    CHECK(grid.integral() == doctest::Approx(1.0).epsilon(5e-3));
    // two positive lobes at the classical well positions +-sqrt(zeta/8 gamma) ~ 35
    const double well = std::sqrt(zeta / (8.0 * params.gamma));
    CHECK(well == doctest::Approx(34.9).epsilon(0.01));
    CHECK(grid_value_at(grid, well, 0) > 0.3 * grid.values.maxCoeff());
    CHECK(grid_value_at(grid, -well, 0) > 0.3 * grid.values.maxCoeff());
    // interference fringes between the wells go negative
    double fringe_min = 0.0;
    for (size_t i = 0; i < grid.x_axis.size(); ++i)
        for (size_t j = 0; j < grid.p_axis.size(); ++j)
            if (std::abs(grid.x_axis[i]) < 10.0)
                fringe_min = std::min(fringe_min, grid.values(i, j));
    CHECK(fringe_min < -0.3 * grid.values.maxCoeff());
    // even state: positive parity at the origin
    CHECK(parity_expectation(rho) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("populations in the eigenbasis") {
    BasisPolicy policy;
    policy.dim = 30;
    const auto basis = build_basis(-0.1, policy);
    PotentialParams params;
    params.zeta = -0.1;
    params.gamma = 3.085919e-8;
    const auto eig = eigensystem(build_hamiltonian(params, basis), params, basis);
    DensityMatrix rho;
    Eigen::VectorXcd psi = (0.8 * eig.states.col(0) + 0.6 * eig.states.col(3))
                               .cast<std::complex<double>>();
    rho.matrix = psi * psi.adjoint();
    const auto p = populations(rho, eig);
    CHECK(p[0] == doctest::Approx(0.64));
    CHECK(p[3] == doctest::Approx(0.36));
    CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
}
