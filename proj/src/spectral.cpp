#include "dwsim/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dwsim {

ScaledBasis build_basis(double zeta, const BasisPolicy& policy) {
    if (zeta < -1.0) throw std::invalid_argument("build_basis: zeta < -1");
    if (policy.dim < 2) throw std::invalid_argument("build_basis: dim < 2");
    if (policy.c1 <= 0 || policy.c2 <= 0) throw std::invalid_argument("build_basis: bad policy");
    ScaledBasis b;
    b.dim = policy.dim;
    b.zeta_ref = zeta;
    if (zeta <= policy.zeta_switch) {
        b.theta = policy.c1;
        b.omega0 = std::sqrt(policy.c1 * std::abs(zeta));
        b.capped = false;
    } else {
        // theta*|zeta| pinned to c2; finite even at zeta = 0
        b.omega0 = std::sqrt(policy.c2);
        b.theta = zeta != 0.0 ? policy.c2 / std::abs(zeta)
                              : std::numeric_limits<double>::infinity();
        b.capped = true;
    }
    return b;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ladder_operators(const ScaledBasis& basis) {
    const int n = basis.dim;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) b(i, i + 1) = std::sqrt(double(i + 1));
    return {b, b.transpose()};
}

BasisOperators basis_operators(const ScaledBasis& basis, int pad) {
    const int dim = basis.dim;
    const int n = dim + pad;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) b(i, i + 1) = std::sqrt(double(i + 1));
    Eigen::MatrixXd x = b + b.transpose();
    Eigen::MatrixXd k = b - b.transpose();
    Eigen::MatrixXd x2 = x * x;
    BasisOperators ops;
    ops.x = x.topLeftCorner(dim, dim);
    ops.x2 = x2.topLeftCorner(dim, dim);
    ops.x3 = (x2 * x).topLeftCorner(dim, dim);
    ops.x4 = (x2 * x2).topLeftCorner(dim, dim);
    ops.k2 = (k * k).topLeftCorner(dim, dim);
    return ops;
}

Eigen::MatrixXd build_hamiltonian(const PotentialParams& params, const ScaledBasis& basis) {
    return build_hamiltonian(params, basis, basis_operators(basis));
}

Eigen::MatrixXd build_hamiltonian(const PotentialParams& params, const ScaledBasis& basis,
                                  const BasisOperators& ops) {
    if (params.gamma <= 0) throw std::invalid_argument("build_hamiltonian: gamma <= 0");
    if (params.zeta < -1.0) throw std::invalid_argument("build_hamiltonian: zeta < -1");
    if (basis.dim < 2 || !(basis.omega0 > 0))
        throw std::invalid_argument("build_hamiltonian: invalid basis");
    if (ops.x2.rows() != basis.dim)
        throw std::invalid_argument("build_hamiltonian: operator/basis dimension mismatch");
    const double s = basis.omega0;  // omega0/omega
    const double r = s * s;         // theta*|zeta| (or the c2 cap)
    // -zeta/(4r) is the de-singularized form of -sgn(zeta)/(4 theta)
    Eigen::MatrixXd H = -0.25 * ops.k2 - (params.zeta / (4.0 * r)) * ops.x2 +
                        (params.gamma / (r * std::sqrt(r))) * ops.x4;
    if (params.xi != 0.0)
        H += (params.xi / (3.0 * std::pow(s, 2.5))) * ops.x3;
    return H;
}

EigenSystem eigensystem(const Eigen::MatrixXd& H, const PotentialParams& params,
                        const ScaledBasis& basis) {
    const int dim = int(H.rows());
    if (H.cols() != dim) throw std::invalid_argument("eigensystem: non-square input");
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + H.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("eigensystem: input not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensystem: diagonalization failed");
    EigenSystem eig;
    eig.energies = solver.eigenvalues() * basis.omega0; // to hbar*omega units
    eig.states = solver.eigenvectors();
    eig.zeta = params.zeta;
    eig.basis = basis;
    eig.parities.resize(dim);
    for (int n = 0; n < dim; ++n) {
        // phase convention: largest-magnitude component positive
        int imax = 0;
        eig.states.col(n).cwiseAbs().maxCoeff(&imax);
        if (eig.states(imax, n) < 0) eig.states.col(n) *= -1.0;
        double pexp = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double c2 = eig.states(i, n) * eig.states(i, n);
            pexp += (i % 2 == 0) ? c2 : -c2;
        }
        eig.parities[n] = pexp > 0.99 ? Parity::Even : (pexp < -0.99 ? Parity::Odd : Parity::Undefined);
    }
    // deterministic order inside numerically degenerate doublets: even first
    for (int n = 0; n + 1 < dim; ++n) {
        if (std::abs(eig.energies[n + 1] - eig.energies[n]) < 1e-12 &&
            eig.parities[n] == Parity::Odd && eig.parities[n + 1] == Parity::Even) {
            eig.energies.row(n).swap(eig.energies.row(n + 1));
            eig.states.col(n).swap(eig.states.col(n + 1));
            std::swap(eig.parities[n], eig.parities[n + 1]);
        }
    }
    return eig;
}

std::vector<double> relative_error(const std::vector<double>& e_high,
                                   const std::vector<double>& e_low) {
    if (e_high.size() < e_low.size())
        throw std::invalid_argument("relative_error: reference spectrum shorter than test spectrum");
    std::vector<double> eps(e_low.size());
    for (size_t n = 0; n < e_low.size(); ++n) {
        const double denom = std::abs(e_high[n] + e_low[n]);
        eps[n] = denom == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                              : std::abs(e_high[n] - e_low[n]) / denom;
    }
    return eps;
}

double gap(const EigenSystem& eig, int m, int n) {
    if (m < 0 || n < 0 || m >= eig.energies.size() || n >= eig.energies.size())
        throw std::out_of_range("gap: level index out of range");
    return eig.energies[m] - eig.energies[n];
}

Eigen::MatrixXd basis_overlap(const ScaledBasis& to, const ScaledBasis& from) {
    const double s2 = to.omega0, s1 = from.omega0;
    if (!(s1 > 0) || !(s2 > 0)) throw std::invalid_argument("basis_overlap: invalid basis");
    const int nmax = std::max(to.dim, from.dim);
    // number-state wavefunction in coordinate q (z_zpm units):
    // psi_n(q) = (s/2)^{1/4} * h_n(q*sqrt(s/2)), h_n normalized Hermite functions
    const double smin = std::min(s1, s2);
    const double qmax = 1.3 * std::sqrt(2.0 * (2.0 * nmax + 1.0) / smin) + 8.0;
    const int npts = 6001;
    const double dq = 2.0 * qmax / (npts - 1);

    auto hermite_table = [&](double s) {
        // rows: grid points, cols: n
        Eigen::MatrixXd h(npts, nmax);
        const double norm0 = std::pow(s / 2.0, 0.25) / std::pow(M_PI, 0.25);
        for (int i = 0; i < npts; ++i) {
            const double q = -qmax + i * dq;
            const double u = q * std::sqrt(s / 2.0);
            h(i, 0) = norm0 * std::exp(-0.5 * u * u);
            if (nmax > 1) h(i, 1) = std::sqrt(2.0) * u * h(i, 0);
            for (int n = 2; n < nmax; ++n)
                h(i, n) = std::sqrt(2.0 / n) * u * h(i, n - 1) -
                          std::sqrt(double(n - 1) / n) * h(i, n - 2);
        }
        return h;
    };
    Eigen::MatrixXd hto = hermite_table(s2);
    Eigen::MatrixXd hfrom = hermite_table(s1);
    Eigen::MatrixXd O = (hto.transpose() * hfrom) * dq;
    return O.topLeftCorner(to.dim, from.dim);
}

void align_columns(Eigen::MatrixXd& V, const Eigen::MatrixXd& Vref) {
    for (int n = 0; n < V.cols() && n < Vref.cols(); ++n)
        if (V.col(n).dot(Vref.col(n)) < 0) V.col(n) *= -1.0;
}

} // namespace dwsim
