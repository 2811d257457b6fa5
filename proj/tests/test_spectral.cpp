#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dwsim/spectral.hpp"
#include "dwsim/units.hpp"

using namespace dwsim;

namespace {
const double kGamma = UnitSystem::default_device().gamma();

EigenSystem solve(double zeta, const BasisPolicy& pol, double xi = 0.0) {
    const ScaledBasis basis = build_basis(zeta, pol);
    const PotentialParams p{zeta, kGamma, xi};
    return eigensystem(build_hamiltonian(p, basis), p, basis);
}
} // namespace

TEST_CASE("device constants") {
    const UnitSystem u = UnitSystem::default_device();
    CHECK(u.mass == doctest::Approx(1.89275e-18).epsilon(1e-4));
    CHECK(u.beta == doctest::Approx(3.32847e13).epsilon(1e-4));
    CHECK(u.gamma() == doctest::Approx(3.085919e-8).epsilon(1e-5));
    CHECK(u.z_zpm() == doctest::Approx(1.4889e-12).epsilon(1e-4));
    CHECK(hbar_SI * u.omega / kB_SI == doctest::Approx(9.59849e-5).epsilon(1e-5));
}

TEST_CASE("basis selection") {
    BasisPolicy pol;
    const ScaledBasis deep = build_basis(-1.0, pol);
    CHECK(deep.theta == doctest::Approx(2.0));
    CHECK(deep.omega0 == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(deep.capped);

    const ScaledBasis dw = build_basis(3e-4, pol);
    CHECK(dw.omega0 == doctest::Approx(std::sqrt(5e-4)));
    CHECK(dw.capped);

    const ScaledBasis origin = build_basis(0.0, pol);
    CHECK(origin.omega0 == doctest::Approx(std::sqrt(5e-4)));

    CHECK_THROWS_AS(build_basis(-1.5, pol), std::invalid_argument);
    BasisPolicy bad = pol;
    bad.dim = 1;
    CHECK_THROWS_AS(build_basis(-1.0, bad), std::invalid_argument);
}

TEST_CASE("ladder operators") {
    BasisPolicy pol;
    pol.dim = 2;
    auto [b, bd] = ladder_operators(build_basis(-1.0, pol));
    CHECK(b(0, 0) == 0.0);
    CHECK(b(0, 1) == doctest::Approx(1.0));
    CHECK(b(1, 0) == 0.0);
    CHECK(b(1, 1) == 0.0);

    pol.dim = 12;
    const ScaledBasis basis = build_basis(-1.0, pol);
    auto [b2, bd2] = ladder_operators(basis);
    for (int n = 1; n < 12; ++n) CHECK(b2(n - 1, n) == doctest::Approx(std::sqrt(double(n))));
    const Eigen::MatrixXd comm = b2 * bd2 - bd2 * b2;
    for (int n = 0; n < 11; ++n) CHECK(comm(n, n) == doctest::Approx(1.0));
}

TEST_CASE("harmonic limit") {
    // zeta = -1, gamma -> 0, theta = 1: eigenvalues n + 1/2 in hbar*omega
    const ScaledBasis basis{20, 1.0, -1.0, 1.0, false};
    const PotentialParams p{-1.0, 1e-30, 0.0};
    const EigenSystem eig = eigensystem(build_hamiltonian(p, basis), p, basis);
    for (int n = 0; n < 10; ++n) CHECK(eig.energies[n] == doctest::Approx(n + 0.5).epsilon(1e-9));
    // parity alternation even, odd, even, ...
    for (int n = 0; n < 10; ++n)
        CHECK(eig.parities[n] == (n % 2 == 0 ? Parity::Even : Parity::Odd));
}

TEST_CASE("hamiltonian structure") {
    BasisPolicy pol;
    for (double zeta : {-1.0, -2.5e-4, 0.0, 3e-4}) {
        const ScaledBasis basis = build_basis(zeta, pol);
        const Eigen::MatrixXd H = build_hamiltonian({zeta, kGamma, 0.0}, basis);
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <=
              1e-12 * H.cwiseAbs().maxCoeff());
        // parity symmetry Pi H Pi = H
        Eigen::VectorXd pi(basis.dim);
        for (int i = 0; i < basis.dim; ++i) pi[i] = i % 2 == 0 ? 1.0 : -1.0;
        const Eigen::MatrixXd Hp = pi.asDiagonal() * H * pi.asDiagonal();
        CHECK((H - Hp).cwiseAbs().maxCoeff() < 1e-14);
    }
    CHECK_THROWS_AS(build_hamiltonian({-2.0, kGamma, 0.0}, build_basis(-1.0, pol)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_hamiltonian({-1.0, -1.0, 0.0}, build_basis(-1.0, pol)),
                    std::invalid_argument);
}

TEST_CASE("double-well regime") {
    const EigenSystem eig = solve(3e-4, BasisPolicy{});
    // tunnel-split ground doublet far below the trap frequency
    CHECK(gap(eig, 1, 0) < 1e-3);
    CHECK(eig.parities[0] == Parity::Even);
    CHECK(eig.parities[1] == Parity::Odd);
}

TEST_CASE("parity alternation across the sweep") {
    for (double zeta : {-1.0, -0.3, -0.01, -2.5e-4, 0.0, 1e-4, 3e-4}) {
        const EigenSystem eig = solve(zeta, BasisPolicy{});
        for (int n = 0; n < 20; ++n)
            CHECK(eig.parities[n] == (n % 2 == 0 ? Parity::Even : Parity::Odd));
    }
}

TEST_CASE("broken symmetry undefines parity") {
    const EigenSystem eig = solve(3e-4, BasisPolicy{}, 0.01);
    for (int n = 0; n < 6; ++n) CHECK(eig.parities[n] == Parity::Undefined);
}

TEST_CASE("phase convention") {
    const EigenSystem eig = solve(-2.5e-4, BasisPolicy{});
    for (int n = 0; n < eig.basis.dim; ++n) {
        int imax = 0;
        eig.states.col(n).cwiseAbs().maxCoeff(&imax);
        CHECK(eig.states(imax, n) > 0);
    }
    // orthonormal columns
    const Eigen::MatrixXd g = eig.states.transpose() * eig.states;
    CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("relative error") {
    CHECK(relative_error({1.0, 2.0}, {1.0, 2.0}) == std::vector<double>{0.0, 0.0});
    const auto eps = relative_error({1.0}, {1.1});
    CHECK(eps[0] == doctest::Approx(0.1 / 2.1));
    CHECK(std::isnan(relative_error({1.0}, {-1.0})[0]));
    CHECK_THROWS_AS(relative_error({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("gap basics") {
    const EigenSystem eig = solve(-0.5, BasisPolicy{});
    CHECK(gap(eig, 3, 3) == 0.0);
    CHECK(gap(eig, 2, 1) == doctest::Approx(-gap(eig, 1, 2)));
    // harmonic scaling: gamma -> 0 gives delta_10 = sqrt(|zeta|)
    const ScaledBasis basis = build_basis(-0.5, BasisPolicy{});
    const PotentialParams p{-0.5, 1e-30, 0.0};
    const EigenSystem eh = eigensystem(build_hamiltonian(p, basis), p, basis);
    CHECK(gap(eh, 1, 0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("gap floor delta_10 >= sqrt|zeta|") {
    for (double zeta = -1.0; zeta < -1e-3; zeta /= 1.6) {
        const EigenSystem eig = solve(zeta, BasisPolicy{});
        CHECK(gap(eig, 1, 0) >= std::sqrt(-zeta) * (1.0 - 1e-12));
    }
}

TEST_CASE("truncation calibration against a high-dimensional reference") {
    BasisPolicy pol;
    BasisPolicy ref = pol;
    ref.dim = 400;
    for (double zeta : {-2.5e-4, 3e-4}) {
        const EigenSystem lo = solve(zeta, pol);
        const EigenSystem hi = solve(zeta, ref);
        std::vector<double> el(lo.energies.data(), lo.energies.data() + 26);
        std::vector<double> eh(hi.energies.data(), hi.energies.data() + 26);
        const auto eps = relative_error(eh, el);
        for (int n = 0; n < 26; ++n) CHECK(eps[n] < 1e-6);
    }
}

TEST_CASE("truncation error decreases with dim") {
    BasisPolicy ref;
    ref.dim = 400;
    const EigenSystem hi = solve(3e-4, ref);
    std::vector<double> eh(hi.energies.data(), hi.energies.data() + 26);
    double prev0 = 1.0, prev10 = 1.0, prev25 = 1.0;
    for (int dim : {50, 100, 200}) {
        BasisPolicy pol;
        pol.dim = dim;
        const EigenSystem lo = solve(3e-4, pol);
        std::vector<double> el(lo.energies.data(), lo.energies.data() + 26);
        const auto eps = relative_error(eh, el);
        // monotone until the comparison hits the double-precision floor
        CHECK(eps[0] <= std::max(prev0, 1e-12));
        CHECK(eps[10] <= std::max(prev10, 1e-12));
        CHECK(eps[25] <= std::max(prev25, 1e-12));
        prev0 = eps[0];
        prev10 = eps[10];
        prev25 = eps[25];
    }
}

TEST_CASE("basis independence of the spectrum") {
    // same zeta diagonalized in the c1-scaled and in the capped basis
    const double zeta = -0.01;
    BasisPolicy pol1;
    pol1.dim = 400;
    BasisPolicy pol2 = pol1;
    pol2.zeta_switch = -1.1; // force the capped branch
    const EigenSystem e1 = solve(zeta, pol1);
    const EigenSystem e2 = solve(zeta, pol2);
    std::vector<double> a(e1.energies.data(), e1.energies.data() + 26);
    std::vector<double> b(e2.energies.data(), e2.energies.data() + 26);
    const auto eps = relative_error(a, b);
    for (int n = 0; n < 26; ++n) CHECK(eps[n] < 1e-8);
}

TEST_CASE("basis overlap transports states faithfully") {
    BasisPolicy pol;
    pol.dim = 60;
    const ScaledBasis b1 = build_basis(-1.0, pol);
    BasisPolicy pol2;
    pol2.dim = 120;
    ScaledBasis b2 = build_basis(-1.0, pol2);
    b2.omega0 = 0.3; // deliberately mismatched frequency
    b2.theta = b2.omega0 * b2.omega0;

    const Eigen::MatrixXd S = basis_overlap(b2, b1);
    // ground state of H(-1) expressed in either basis
    const PotentialParams p{-1.0, kGamma, 0.0};
    const EigenSystem e1 = eigensystem(build_hamiltonian(p, b1), p, b1);
    const EigenSystem e2 = eigensystem(build_hamiltonian(p, b2), p, b2);
    Eigen::VectorXd g = S * e1.states.col(0);
    CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(g.dot(e2.states.col(0))) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("column sign alignment") {
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd W = -V;
    align_columns(W, V);
    CHECK((W - V).norm() == 0.0);
}
