#include "dwsim/analysis.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace dwsim {

using cxd = std::complex<double>;

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -1e-8) throw std::invalid_argument("fidelity: input not positive");
        ev[i] = ev[i] > 0 ? std::sqrt(ev[i]) : 0.0;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

bool pure_vector(const DensityMatrix& dm, Eigen::VectorXcd& out) {
    if (dm.purity() <= 1.0 - 1e-9) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dm.matrix);
    out = es.eigenvectors().col(dm.dim() - 1);
    return true;
}

} // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    Eigen::VectorXcd psi;
    if (pure_vector(sigma, psi)) {
        const double v = (psi.adjoint() * rho.matrix * psi).real()(0, 0);
        return std::sqrt(std::max(0.0, v));
    }
    if (pure_vector(rho, psi)) {
        const double v = (psi.adjoint() * sigma.matrix * psi).real()(0, 0);
        return std::sqrt(std::max(0.0, v));
    }
    const Eigen::MatrixXcd sr = psd_sqrt(rho.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sr * sigma.matrix * sr);
    double f = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        f += std::sqrt(std::max(0.0, es.eigenvalues()[i]));
    return f;
}

WignerGrid wigner(const DensityMatrix& rho, const ScaledBasis& basis,
                  double x_min, double x_max, double p_min, double p_max, int resolution) {
    const int dim = rho.dim();
    const double s = basis.omega0;
    const double pi = std::numbers::pi;
    WignerGrid grid;
    grid.x_axis.resize(resolution);
    grid.p_axis.resize(resolution);
    for (int i = 0; i < resolution; ++i) {
        grid.x_axis[i] = x_min + (x_max - x_min) * i / (resolution - 1);
        grid.p_axis[i] = p_min + (p_max - p_min) * i / (resolution - 1);
    }
    grid.values.setZero(resolution, resolution);

    // support check: grid must cover a few standard deviations of the state
    {
        const BasisOperators ops = basis_operators(basis);
        const Eigen::MatrixXd zz = ops.x2 / s;
        const Eigen::MatrixXd pp = -s * ops.k2; // p^2 in hbar/(2 z_zpm) units: -s(b-b^dag)^2
        const double z2 = (rho.matrix * zz.cast<cxd>()).trace().real();
        const double p2 = (rho.matrix * pp.cast<cxd>()).trace().real();
        if (2.5 * std::sqrt(std::max(0.0, z2)) > std::max(std::abs(x_min), x_max) ||
            2.5 * std::sqrt(std::max(0.0, p2)) > std::max(std::abs(p_min), p_max))
            grid.support_warning = true;
    }

    // c(m, k) = sqrt(m! / (m+k)!)
    Eigen::MatrixXd cmk(dim, dim);
    for (int m = 0; m < dim; ++m) {
        cmk(m, 0) = 1.0;
        for (int k = 1; m + k < dim; ++k) cmk(m, k) = cmk(m, k - 1) / std::sqrt(double(m + k));
    }

    std::vector<cxd> pow2a(dim);
    std::vector<double> lag(dim);
    for (int ix = 0; ix < resolution; ++ix) {
        const double X = grid.x_axis[ix] * std::sqrt(s / 2.0);
        for (int ip = 0; ip < resolution; ++ip) {
            const double P = grid.p_axis[ip] / std::sqrt(2.0 * s);
            const cxd alpha(X / std::sqrt(2.0), P / std::sqrt(2.0));
            const double r2 = std::norm(alpha);
            if (4.0 * r2 > 600.0) continue; // exp(-2|a|^2) underflow: W = 0
            const double e = std::exp(-2.0 * r2) / pi;
            pow2a[0] = 1.0;
            for (int k = 1; k < dim; ++k) pow2a[k] = pow2a[k - 1] * (2.0 * alpha);
            double w = 0.0;
            for (int k = 0; k < dim; ++k) {
                // L_m^k(4 r^2) upward in m
                const double xarg = 4.0 * r2;
                double lm2 = 1.0, lm1 = 1.0 + k - xarg;
                for (int m = 0; m + k < dim; ++m) {
                    double L;
                    if (m == 0) L = lm2;
                    else if (m == 1) L = lm1;
                    else {
                        L = ((2.0 * (m - 1) + 1.0 + k - xarg) * lm1 - (m - 1 + k) * lm2) / m;
                        lm2 = lm1;
                        lm1 = L;
                    }
                    const int n = m + k;
                    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                    const cxd kern = sign * cmk(m, k) * pow2a[k] * e * L;
                    if (k == 0)
                        w += (rho.matrix(m, m).real()) * kern.real();
                    else
                        w += 2.0 * (rho.matrix(m, n) * kern).real();
                }
            }
            grid.values(ix, ip) = w / 2.0; // Jacobian of (x, p) -> (X, P)
        }
    }
    return grid;
}

double WignerGrid::integral() const {
    if (x_axis.size() < 2 || p_axis.size() < 2) return 0.0;
    const double dx = x_axis[1] - x_axis[0];
    const double dp = p_axis[1] - p_axis[0];
    return values.sum() * dx * dp;
}

std::vector<double> populations(const DensityMatrix& rho, const EigenSystem& eig) {
    if (rho.dim() != eig.states.rows()) throw std::invalid_argument("populations: dimension mismatch");
    const Eigen::MatrixXcd r =
        eig.states.transpose().cast<cxd>() * rho.matrix * eig.states.cast<cxd>();
    std::vector<double> out(rho.dim());
    for (int n = 0; n < rho.dim(); ++n) out[n] = r(n, n).real();
    return out;
}

double parity_expectation(const DensityMatrix& rho) {
    double v = 0.0;
    for (int n = 0; n < rho.dim(); ++n)
        v += (n % 2 == 0 ? 1.0 : -1.0) * rho.matrix(n, n).real();
    return v;
}

void write_wigner_csv(const WignerGrid& grid, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "x,p,w\n";
    char buf[96];
    for (size_t i = 0; i < grid.x_axis.size(); ++i)
        for (size_t j = 0; j < grid.p_axis.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g\n", grid.x_axis[i],
                          grid.p_axis[j], grid.values(i, j));
            f << buf;
        }
}

void write_wigner_binary(const WignerGrid& grid, const std::string& path) {
    // header: magic "DWWG", u32 nx, u32 np, f64 x0, x1, p0, p1; then row-major f64
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f.write("DWWG", 4);
    const std::uint32_t nx = std::uint32_t(grid.x_axis.size()),
                        np = std::uint32_t(grid.p_axis.size());
    f.write(reinterpret_cast<const char*>(&nx), 4);
    f.write(reinterpret_cast<const char*>(&np), 4);
    const double ranges[4] = {grid.x_axis.front(), grid.x_axis.back(), grid.p_axis.front(),
                              grid.p_axis.back()};
    f.write(reinterpret_cast<const char*>(ranges), sizeof ranges);
    for (std::uint32_t i = 0; i < nx; ++i)
        for (std::uint32_t j = 0; j < np; ++j) {
            const double v = grid.values(i, j);
            f.write(reinterpret_cast<const char*>(&v), 8);
        }
}

} // namespace dwsim
