#include "dwsim/readout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace dwsim {

namespace {
double z_element(const EigenSystem& eig, int m, int n) {
    const Eigen::MatrixXd z = basis_operators(eig.basis).x / std::sqrt(eig.basis.omega0);
    return eig.states.col(m).dot(z * eig.states.col(n));
}
} // namespace

double decoherence_rate(const EigenSystem& eig, int m, int n, const BathParams& bath) {
    if (m == n) throw std::invalid_argument("decoherence_rate: m == n");
    const double delta = std::abs(eig.energies[m] - eig.energies[n]);
    const double zmn = z_element(eig, m, n);
    const double gmn = (delta / bath.quality_factor) * zmn;
    const double N = delta > 0 && bath.temperature > 0
                         ? thermal_occupation(delta, bath)
                         : 0.0;
    return std::abs(gmn) * (m < n ? N : N + 1.0);
}

SpectrumResult output_spectrum(const std::vector<double>& populations, const EigenSystem& eig,
                               const CavityParams& cavity, const BathParams& bath,
                               const std::vector<double>& omega_axis, double floor_width) {
    if (cavity.kappa <= 0) throw std::invalid_argument("output_spectrum: kappa <= 0");
    const int dim = int(eig.energies.size());
    if (int(populations.size()) > dim)
        throw std::invalid_argument("output_spectrum: populations exceed basis");
    const Eigen::MatrixXd z = basis_operators(eig.basis).x / std::sqrt(eig.basis.omega0);
    const Eigen::MatrixXd zeigv = eig.states.transpose() * z * eig.states;
    const double pi = std::numbers::pi;
    SpectrumResult res;
    res.omega_axis = omega_axis;
    res.values.assign(omega_axis.size(), 0.0);

    for (int n = 0; n < int(populations.size()); ++n) {
        if (populations[n] < 1e-14) continue;
        for (int m = 0; m < dim; ++m) {
            if (m == n) continue;
            const double delta = eig.energies[m] - eig.energies[n];
            const double w = cavity.kappa * cavity.g * cavity.g * zeigv(m, n) * zeigv(m, n) /
                             (cavity.kappa * cavity.kappa / 4.0 + delta * delta) *
                             populations[n];
            if (w < 1e-18) continue;
            SpectrumLine line;
            line.m = m;
            line.n = n;
            line.delta = delta;
            line.center = -delta;
            line.weight = w;
            const double ad = std::abs(delta);
            const double N = ad > 0 && bath.temperature > 0 ? thermal_occupation(ad, bath) : 0.0;
            const double gmn = (ad / bath.quality_factor) * std::abs(zeigv(m, n));
            line.width = std::max(gmn * (m < n ? N : N + 1.0), floor_width);
            res.lines.push_back(line);
            for (size_t i = 0; i < omega_axis.size(); ++i) {
                const double d = omega_axis[i] - line.center;
                res.values[i] += w * (line.width / pi) / (d * d + line.width * line.width);
            }
        }
    }
    std::sort(res.lines.begin(), res.lines.end(),
              [](const SpectrumLine& a, const SpectrumLine& b) { return a.weight > b.weight; });
    return res;
}

std::vector<double> default_omega_axis(double span, int points) {
    std::vector<double> axis(points);
    for (int i = 0; i < points; ++i) axis[i] = -span + 2.0 * span * i / (points - 1);
    return axis;
}

void write_spectrum_csv(const SpectrumResult& spec, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "omega,s\n";
    f.precision(12);
    for (size_t i = 0; i < spec.omega_axis.size(); ++i)
        f << spec.omega_axis[i] << ',' << spec.values[i] << '\n';
}

void write_spectrum_lines_json(const SpectrumResult& spec, const std::string& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& l : spec.lines)
        j.push_back({{"m", l.m},
                     {"n", l.n},
                     {"delta", l.delta},
                     {"center", l.center},
                     {"weight", l.weight},
                     {"width", l.width}});
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << '\n';
}

} // namespace dwsim
