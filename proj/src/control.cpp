#include "dwsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dwsim {

RampKind ramp_kind_from_string(const std::string& name) {
    if (name == "linear") return RampKind::Linear;
    if (name == "sqrt") return RampKind::Sqrt;
    if (name == "sine") return RampKind::Sine;
    if (name == "gap_adapted") return RampKind::GapAdapted;
    if (name == "adiabatic") return RampKind::Adiabatic;
    throw std::invalid_argument("unknown ramp kind: " + name);
}

std::string to_string(RampKind kind) {
    switch (kind) {
        case RampKind::Linear: return "linear";
        case RampKind::Sqrt: return "sqrt";
        case RampKind::Sine: return "sine";
        case RampKind::GapAdapted: return "gap_adapted";
        case RampKind::Adiabatic: return "adiabatic";
    }
    return "?";
}

RampPoint ramp_value(const RampSchedule& sch, double t) {
    if (sch.duration <= 0) throw std::invalid_argument("ramp_value: duration <= 0");
    const double eps = 1e-9 * sch.duration;
    if (t < sch.t_start - eps || t > sch.t_start + sch.duration + eps)
        throw std::out_of_range("ramp_value: t outside stage window");
    const double tau = std::clamp((t - sch.t_start) / sch.duration, 0.0, 1.0);
    const double dz = sch.zeta_end - sch.zeta_start;
    const double pi = std::numbers::pi;
    switch (sch.kind) {
        case RampKind::Linear:
            return {sch.zeta_start + dz * tau, dz / sch.duration};
        case RampKind::Sqrt:
            return {sch.zeta_start + dz * std::sqrt(tau),
                    tau > 0 ? dz / (2.0 * std::sqrt(tau) * sch.duration)
                            : std::numeric_limits<double>::infinity()};
        case RampKind::Sine: {
            const double sv = std::sin(pi * tau / 2.0);
            return {sch.zeta_start + dz * sv * sv,
                    dz * (pi / 2.0) * std::sin(pi * tau) / sch.duration};
        }
        case RampKind::GapAdapted: {
            // zeta(t) = zeta_start * exp(-lambda t): rate proportional to |zeta|,
            // i.e. to the square of the closing gap ~ sqrt|zeta|
            if (sch.zeta_start * sch.zeta_end <= 0)
                throw std::invalid_argument("gap_adapted ramp requires same-sign endpoints");
            const double lam = std::log(sch.zeta_start / sch.zeta_end) / sch.duration;
            const double z = sch.zeta_start * std::exp(-lam * tau * sch.duration);
            return {z, -lam * z};
        }
        case RampKind::Adiabatic: {
            // uniform local adiabaticity: |zeta_dot| ~ |zeta|^{3/2}, closed form
            // zeta(t) = zeta_start / (1 + k t / 2)^2
            if (sch.zeta_start * sch.zeta_end <= 0)
                throw std::invalid_argument("adiabatic ramp requires same-sign endpoints");
            const double k =
                2.0 * (std::sqrt(sch.zeta_start / sch.zeta_end) - 1.0) / sch.duration;
            const double u = 1.0 + 0.5 * k * tau * sch.duration;
            return {sch.zeta_start / (u * u), -sch.zeta_start * k / (u * u * u)};
        }
    }
    throw std::logic_error("ramp_value: unreachable");
}

TransitionSet TransitionSet::up_to(int level) {
    TransitionSet set;
    for (int n = 0; n <= level; n += 2)
        for (int m = n + 2; m <= level; m += 2) set.pairs.emplace_back(n, m);
    std::sort(set.pairs.begin(), set.pairs.end());
    return set;
}

TransitionSet TransitionSet::parse(const std::string& text) {
    if (text == "none" || text.empty()) return {};
    if (text.rfind("upto", 0) == 0) return up_to(std::stoi(text.substr(4)));
    TransitionSet set;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto dash = item.find('-');
        if (dash == std::string::npos)
            throw std::invalid_argument("transition pair must look like '0-2': " + item);
        set.pairs.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
    }
    std::sort(set.pairs.begin(), set.pairs.end());
    set.validate();
    return set;
}

void TransitionSet::validate() const {
    std::set<std::pair<int, int>> seen;
    for (auto [n, m] : pairs) {
        if (n % 2 != 0 || m % 2 != 0)
            throw std::invalid_argument("transition indices must be even");
        if (n >= m || n < 0) throw std::invalid_argument("transition pair needs 0 <= n < m");
        if (!seen.insert({n, m}).second)
            throw std::invalid_argument("duplicate transition pair");
    }
}

DriveHamiltonian cd_full(const EigenSystem& eig, const Eigen::MatrixXd& dH_dt) {
    const int dim = int(eig.energies.size());
    if (dH_dt.rows() != dim || dH_dt.cols() != dim)
        throw std::invalid_argument("cd_full: dimension mismatch");
    const Eigen::MatrixXd M = eig.states.transpose() * dH_dt * eig.states;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            if (n == m) continue;
            const double de = eig.energies[m] - eig.energies[n];
            if (std::abs(de) < 1e-12) {
                if (std::abs(M(n, m)) < 1e-14) continue; // decoupled doublet
                throw std::runtime_error("cd_full: degenerate coupled pair (" +
                                         std::to_string(n) + "," + std::to_string(m) + ")");
            }
            K(n, m) = std::complex<double>(0.0, 1.0) * M(n, m) / de;
        }
    DriveHamiltonian drv;
    drv.matrix = eig.states * K * eig.states.transpose();
    drv.zeta = eig.zeta;
    return drv;
}

DriveHamiltonian cd_even_truncated(const EigenSystem& eig, double zeta_dot,
                                   const TransitionSet& set) {
    set.validate();
    const int dim = int(eig.energies.size());
    const double s = eig.basis.omega0;
    // z^2 (z_zpm units) = (b + b^dag)^2 / s
    const Eigen::MatrixXd x2 = basis_operators(eig.basis).x2 / s;
    const Eigen::MatrixXd M = eig.states.transpose() * x2 * eig.states;
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(dim, dim);
    for (auto [n, m] : set.pairs) {
        if (m >= dim) throw std::invalid_argument("cd_even_truncated: level beyond basis");
        const double delta = eig.energies[m] - eig.energies[n];
        if (std::abs(delta) < 1e-12)
            throw std::runtime_error("cd_even_truncated: vanishing gap in pair (" +
                                     std::to_string(n) + "," + std::to_string(m) + ")");
        const std::complex<double> c(0.0, -0.25 * zeta_dot * M(n, m) / delta);
        K(n, m) += c;
        K(m, n) += std::conj(c);
    }
    DriveHamiltonian drv;
    drv.matrix = eig.states * K * eig.states.transpose();
    drv.zeta = eig.zeta;
    drv.zeta_dot = zeta_dot;
    return drv;
}

} // namespace dwsim
