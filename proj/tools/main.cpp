#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwsim/analysis.hpp"
#include "dwsim/config.hpp"
#include "dwsim/control.hpp"
#include "dwsim/device.hpp"
#include "dwsim/dynamics.hpp"
#include "dwsim/readout.hpp"
#include "dwsim/spectral.hpp"
#include "dwsim/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dwsim;

namespace {

constexpr const char* kVersion = "1.0.0";

UnitSystem unit_from(const Config& cfg) {
    UnitSystem u = UnitSystem::default_device();
    u.mass = cfg.get_double("device.mass", u.mass);
    u.omega = cfg.get_double("device.omega", u.omega);
    u.beta = cfg.get_double("device.beta", u.beta);
    return u;
}

BasisPolicy policy_from(const Config& cfg) {
    BasisPolicy p;
    p.c1 = cfg.get_double("basis.c1", p.c1);
    p.c2 = cfg.get_double("basis.c2", p.c2);
    p.zeta_switch = cfg.get_double("basis.zeta_switch", p.zeta_switch);
    p.dim = cfg.get_int("basis.dim", p.dim);
    return p;
}

BathParams bath_from(const Config& cfg) {
    BathParams b;
    b.unit = unit_from(cfg);
    b.temperature = cfg.get_double("bath.temperature_mk", 15.0) * 1e-3;
    b.quality_factor = cfg.get_double("bath.q", 1e6);
    b.enabled = cfg.get_bool("bath.enabled", true);
    return b;
}

StepPolicy stepping_from(const Config& cfg) {
    StepPolicy s;
    s.dt_max = cfg.get_double("integrator.dt_max", s.dt_max);
    s.stability = cfg.get_double("integrator.stability", s.stability);
    s.h_override = cfg.get_double("integrator.h", 0.0);
    s.refresh_every = cfg.get_int("integrator.refresh_every", s.refresh_every);
    s.samples = cfg.get_int("integrator.samples", s.samples);
    return s;
}

ProtocolConfig protocol_from(const Config& cfg) {
    ProtocolConfig p;
    const UnitSystem unit = unit_from(cfg);
    p.zeta_start = cfg.get_double("protocol.zeta_start", p.zeta_start);
    p.zeta_c = cfg.get_double("protocol.zeta_c", p.zeta_c);
    p.zeta_f = cfg.get_double("protocol.zeta_f", p.zeta_f);
    p.dt1 = cfg.get_time("protocol.dt1", p.dt1, unit.omega);
    p.dt2 = cfg.get_time("protocol.dt2", p.dt2, unit.omega);
    p.stage2_ramp = ramp_kind_from_string(cfg.get_string("protocol.stage2_ramp", "adiabatic"));
    p.stage3_ramp = ramp_kind_from_string(cfg.get_string("protocol.stage3_ramp", "sine"));
    p.transitions = TransitionSet::parse(cfg.get_string("protocol.transitions", "upto4"));
    p.initial_occupation = cfg.get_double("protocol.initial_occupation", 0.0);
    p.xi = cfg.get_double("protocol.xi", 0.0);
    p.bath = bath_from(cfg);
    p.gamma = cfg.get_double("device.gamma", unit.gamma());
    p.policy = policy_from(cfg);
    p.dim_stage2 = cfg.get_int("basis.dim_stage2", p.dim_stage2);
    p.include_stage2 = cfg.get_bool("protocol.stage2", true);
    p.stepping = stepping_from(cfg);
    return p;
}

json derived_json(const Config& cfg) {
    const UnitSystem u = unit_from(cfg);
    const double gamma = cfg.get_double("device.gamma", u.gamma());
    const double zeta_f = cfg.get_double("protocol.zeta_f", 3e-4);
    return json{{"gamma", gamma},
                {"z_zpm_m", u.z_zpm()},
                {"hbar_omega_over_kB_K", hbar_SI * u.omega / kB_SI},
                {"well_position_zzpm", std::sqrt(zeta_f / (8.0 * gamma))}};
}

void write_manifest(const fs::path& dir, const std::string& command, const Config& cfg,
                    const json& extra, const std::vector<std::string>& outputs,
                    double wall_seconds) {
    json m{{"version", kVersion},
           {"command", command},
           {"wall_seconds", wall_seconds},
           {"config", cfg.to_json()},
           {"derived", derived_json(cfg)},
           {"outputs", outputs}};
    if (extra.is_object()) m.update(extra);
    std::ofstream f(dir / "manifest.json");
    f << m.dump(2) << '\n';
}

void save_state(const fs::path& path, const DensityMatrix& rho, const ScaledBasis& basis) {
    json j;
    j["dim"] = basis.dim;
    j["basis"] = {{"omega0", basis.omega0},
                  {"theta", basis.theta},
                  {"zeta_ref", basis.zeta_ref},
                  {"capped", basis.capped}};
    json re = json::array(), im = json::array();
    for (int i = 0; i < rho.dim(); ++i) {
        json r1 = json::array(), i1 = json::array();
        for (int k = 0; k < rho.dim(); ++k) {
            r1.push_back(rho.matrix(i, k).real());
            i1.push_back(rho.matrix(i, k).imag());
        }
        re.push_back(r1);
        im.push_back(i1);
    }
    j["rho_re"] = re;
    j["rho_im"] = im;
    std::ofstream f(path);
    f << j.dump() << '\n';
}

std::pair<DensityMatrix, ScaledBasis> load_state(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open state file: " + path.string());
    json j;
    f >> j;
    ScaledBasis basis;
    basis.dim = j.at("dim");
    basis.omega0 = j.at("basis").at("omega0");
    basis.theta = j.at("basis").at("theta");
    basis.zeta_ref = j.at("basis").at("zeta_ref");
    basis.capped = j.at("basis").at("capped");
    DensityMatrix rho;
    rho.matrix.resize(basis.dim, basis.dim);
    for (int i = 0; i < basis.dim; ++i)
        for (int k = 0; k < basis.dim; ++k)
            rho.matrix(i, k) = {j.at("rho_re")[i][k].get<double>(),
                                j.at("rho_im")[i][k].get<double>()};
    return {rho, basis};
}

void write_trajectory_csv(const Trajectory& tr, const fs::path& path) {
    std::ofstream f(path);
    f << "time,zeta,fidelity_ground,purity,trace_err\n";
    f.precision(12);
    for (size_t i = 0; i < tr.times.size(); ++i)
        f << tr.times[i] << ',' << tr.zeta[i] << ',' << tr.fidelity_ground[i] << ','
          << tr.purity[i] << ',' << tr.trace_err[i] << '\n';
}

EigenSystem eigensystem_at(double zeta, double gamma, double xi, const ScaledBasis& basis) {
    const PotentialParams p{zeta, gamma, xi};
    return eigensystem(build_hamiltonian(p, basis), p, basis);
}

// ---------------------------------------------------------------- commands

int cmd_eigen(const Config& cfg, const fs::path& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const UnitSystem unit = unit_from(cfg);
    const double gamma = cfg.get_double("device.gamma", unit.gamma());
    const BasisPolicy pol = policy_from(cfg);
    const double z_lo = cfg.get_double("eigen.zeta_min", -1.0);
    const double z_hi = cfg.get_double("eigen.zeta_max", 3e-4);
    const int npts = cfg.get_int("eigen.zeta_points", 50);
    const int nlev = std::min(cfg.get_int("eigen.levels", 26), pol.dim);
    std::vector<std::string> outputs;

    {
        std::ofstream f(out / "eigenvalues.csv");
        f << "zeta";
        for (int n = 0; n < nlev; ++n) f << ",e" << n;
        for (int n = 0; n < nlev; ++n) f << ",parity" << n;
        f << '\n';
        f.precision(12);
        for (int i = 0; i < npts; ++i) {
            const double zeta = z_lo + (z_hi - z_lo) * i / (npts - 1);
            const ScaledBasis basis = build_basis(zeta, pol);
            const EigenSystem eig = eigensystem_at(zeta, gamma, 0.0, basis);
            f << zeta;
            for (int n = 0; n < nlev; ++n) f << ',' << eig.energies[n];
            for (int n = 0; n < nlev; ++n)
                f << ',' << (eig.parities[n] == Parity::Even
                                 ? "even"
                                 : eig.parities[n] == Parity::Odd ? "odd" : "undefined");
            f << '\n';
        }
        outputs.push_back("eigenvalues.csv");
    }
    {
        std::ofstream f(out / "gaps.csv");
        f << "zeta,d10,d20,d30\n";
        f.precision(12);
        for (int i = 0; i < npts; ++i) {
            const double zeta = z_lo + (z_hi - z_lo) * i / (npts - 1);
            const ScaledBasis basis = build_basis(zeta, pol);
            const EigenSystem eig = eigensystem_at(zeta, gamma, 0.0, basis);
            f << zeta << ',' << gap(eig, 1, 0) << ',' << gap(eig, 2, 0) << ',' << gap(eig, 3, 0)
              << '\n';
        }
        outputs.push_back("gaps.csv");
    }
    // calibration: dim vs high-truncation reference
    json calib;
    calib["c1"] = pol.c1;
    calib["c2"] = pol.c2;
    const int dim_ref = cfg.get_int("eigen.dim_ref", 1000);
    for (double zeta : {pol.zeta_switch, cfg.get_double("protocol.zeta_f", 3e-4), -1.0}) {
        BasisPolicy pref = pol;
        pref.dim = dim_ref;
        const ScaledBasis blo = build_basis(zeta, pol);
        const ScaledBasis bhi = build_basis(zeta, pref);
        const EigenSystem elo = eigensystem_at(zeta, gamma, 0.0, blo);
        const EigenSystem ehi = eigensystem_at(zeta, gamma, 0.0, bhi);
        std::vector<double> lo(elo.energies.data(), elo.energies.data() + nlev);
        std::vector<double> hi(ehi.energies.data(), ehi.energies.data() + nlev);
        calib["eps"][std::to_string(zeta)] = relative_error(hi, lo);
    }
    std::ofstream(out / "calibration.json") << calib.dump(2) << '\n';
    outputs.push_back("calibration.json");
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out, "eigen", cfg, {}, outputs, wall);
    return 0;
}

int cmd_protocol(const Config& cfg, const fs::path& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProtocolConfig pc = protocol_from(cfg);
    const ProtocolResult res = run_protocol(pc);
    std::vector<std::string> outputs;

    if (!res.stage2.times.empty()) {
        write_trajectory_csv(res.stage2, out / "trajectory_stage2.csv");
        outputs.push_back("trajectory_stage2.csv");
    }
    write_trajectory_csv(res.stage3, out / "trajectory_stage3.csv");
    outputs.push_back("trajectory_stage3.csv");
    save_state(out / "state.json", res.final_state, res.basis);
    outputs.push_back("state.json");

    const WignerGrid grid = wigner(
        res.final_state, res.basis, cfg.get_double("wigner.x_min", -60.0),
        cfg.get_double("wigner.x_max", 60.0), cfg.get_double("wigner.p_min", -6.0),
        cfg.get_double("wigner.p_max", 6.0), cfg.get_int("wigner.resolution", 241));
    write_wigner_csv(grid, (out / "wigner.csv").string());
    outputs.push_back("wigner.csv");

    json extra{{"final_fidelity", res.final_fidelity},
               {"final_fidelity_symmetric", res.final_fidelity_symmetric},
               {"basis_switch_leakage", res.basis_switch_leakage},
               {"steps_stage2", res.stage2.steps},
               {"steps_stage3", res.stage3.steps}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out, "protocol", cfg, {{"result", extra}}, outputs, wall);
    std::printf("final fidelity      %.6f\n", res.final_fidelity);
    if (pc.xi != 0.0)
        std::printf("symmetric-target    %.6f\n", res.final_fidelity_symmetric);
    return 0;
}

int cmd_sweep(const Config& cfg, const fs::path& out, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    // axes: sweep.axis.<i> = key=v1,v2,... (values kept as strings)
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (int i = 1;; ++i) {
        const std::string raw = cfg.get_string("sweep.axis." + std::to_string(i), "");
        if (raw.empty()) break;
        const auto eq = raw.find('=');
        if (eq == std::string::npos)
            throw ConfigError("sweep axis must look like key=v1,v2: " + raw);
        std::vector<std::string> vals;
        std::stringstream ss(raw.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(item);
        if (vals.empty()) throw ConfigError("sweep axis has no values: " + raw);
        axes.emplace_back(raw.substr(0, eq), vals);
    }
    if (axes.empty()) throw ConfigError("sweep: no sweep.axis.<n> keys in config");
    size_t total = 1;
    for (const auto& [k, v] : axes) total *= v.size();
    const size_t cap = size_t(cfg.get_int("sweep.max_points", 512));
    if (total > cap) throw ConfigError("sweep: point count exceeds sweep.max_points");

    struct Point {
        std::vector<std::pair<std::string, std::string>> assignment;
        double fidelity = 0.0, fidelity_symmetric = 0.0, wall = 0.0;
        bool failed = false;
        std::string error;
    };
    std::vector<Point> points(total);
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        for (const auto& [key, vals] : axes) {
            points[idx].assignment.emplace_back(key, vals[rem % vals.size()]);
            rem /= vals.size();
        }
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            Point& pt = points[idx];
            const auto w0 = std::chrono::steady_clock::now();
            try {
                Config local = cfg;
                for (const auto& [k, v] : pt.assignment) local.apply_override(k + "=" + v);
                const ProtocolResult res = run_protocol(protocol_from(local));
                pt.fidelity = res.final_fidelity;
                pt.fidelity_symmetric = res.final_fidelity_symmetric;
            } catch (const std::exception& e) {
                pt.failed = true;
                pt.error = e.what();
            }
            pt.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - w0)
                          .count();
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < std::max(1, workers); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ofstream f(out / "sweep.csv");
    f << "index";
    for (const auto& [k, v] : axes) f << ',' << k;
    f << ",fidelity,fidelity_symmetric,wall_seconds,status\n";
    f.precision(10);
    int failures = 0;
    for (size_t idx = 0; idx < total; ++idx) {
        const Point& pt = points[idx];
        f << idx;
        for (const auto& [k, v] : pt.assignment) f << ',' << v;
        if (pt.failed) {
            ++failures;
            f << ",,," << pt.wall << ",failed: " << pt.error << '\n';
        } else {
            f << ',' << pt.fidelity << ',' << pt.fidelity_symmetric << ',' << pt.wall
              << ",ok\n";
        }
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out, "sweep", cfg, {{"points", total}, {"failures", failures}},
                   {"sweep.csv"}, wall);
    std::printf("sweep: %zu points, %d failures\n", total, failures);
    return 0;
}

int cmd_spectrum(const Config& cfg, const fs::path& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const UnitSystem unit = unit_from(cfg);
    const double gamma = cfg.get_double("device.gamma", unit.gamma());
    const double zeta_f = cfg.get_double("protocol.zeta_f", 3e-4);
    const BathParams bath = bath_from(cfg);
    CavityParams cavity;
    cavity.kappa = cfg.get_double("spectrum.kappa", 1.0);
    cavity.g = cfg.get_double("spectrum.g", 0.1);
    const auto axis = default_omega_axis(cfg.get_double("spectrum.span", 0.2),
                                         cfg.get_int("spectrum.points", 4001));
    const double floor_w = cfg.get_double("spectrum.floor_width", 1e-6);

    DensityMatrix rho;
    ScaledBasis basis;
    const std::string source = cfg.get_string("spectrum.state", "");
    if (source.empty()) {
        // default: pure ground state of the double well
        basis = build_basis(zeta_f, policy_from(cfg));
        const EigenSystem eig = eigensystem_at(zeta_f, gamma, 0.0, basis);
        rho.matrix = (eig.states.col(0) * eig.states.col(0).transpose())
                         .cast<std::complex<double>>();
    } else {
        std::tie(rho, basis) = load_state(source);
    }
    // protocol.xi is expressed with z in units of the target well position
    const double well = std::sqrt(zeta_f / (8.0 * gamma));
    const double xi_int = cfg.get_double("protocol.xi", 0.0) / (well * well * well);
    const EigenSystem eig = eigensystem_at(zeta_f, gamma, xi_int, basis);

    std::vector<double> holds = cfg.get_list("spectrum.hold_times");
    if (holds.empty()) holds = {0.0};
    std::vector<std::string> outputs;
    DensityMatrix current = rho;
    double t_now = 0.0;
    StepPolicy pol = stepping_from(cfg);
    pol.samples = 2;
    for (double hold : holds) {
        if (hold > t_now) {
            RampSchedule still{RampKind::Linear, zeta_f, zeta_f, hold - t_now, t_now};
            current = evolve(current, still, TransitionSet{}, bath,
                             PotentialParams{zeta_f, gamma, xi_int},
                             basis, pol)
                          .final_state;
            t_now = hold;
        }
        const auto pops = populations(current, eig);
        const SpectrumResult spec = output_spectrum(pops, eig, cavity, bath, axis, floor_w);
        char tag[32];
        std::snprintf(tag, sizeof tag, "%g", hold);
        write_spectrum_csv(spec, (out / (std::string("spectrum_t") + tag + ".csv")).string());
        write_spectrum_lines_json(spec, (out / (std::string("lines_t") + tag + ".json")).string());
        outputs.push_back(std::string("spectrum_t") + tag + ".csv");
        outputs.push_back(std::string("lines_t") + tag + ".json");
        std::ofstream pf(out / (std::string("populations_t") + tag + ".csv"));
        pf << "n,p\n";
        for (size_t n = 0; n < pops.size(); ++n) pf << n << ',' << pops[n] << '\n';
        outputs.push_back(std::string("populations_t") + tag + ".csv");
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out, "spectrum", cfg, {}, outputs, wall);
    return 0;
}

int cmd_design(const Config& cfg, const fs::path& out) {
    const auto t0 = std::chrono::steady_clock::now();
    MembraneGeometry geom = MembraneGeometry::default_device();
    geom.length = cfg.get_double("membrane.length", geom.length);
    geom.width = cfg.get_double("membrane.width", geom.width);
    geom.thickness = cfg.get_double("membrane.thickness", geom.thickness);
    geom.mass_density = cfg.get_double("membrane.density", geom.mass_density);
    geom.young_modulus = cfg.get_double("membrane.young_modulus", geom.young_modulus);
    geom.tension = cfg.get_double("membrane.tension", geom.tension);
    const double omega_override =
        cfg.get_double("device.omega", UnitSystem::default_device().omega);
    const ElasticParams ep = elastic_params(geom, cfg.get_int("membrane.mode", 1),
                                            omega_override);
    UnitSystem unit{ep.mass, ep.omega, ep.beta};

    json report;
    report["mass_kg"] = ep.mass;
    report["mass_note"] = "formula value; printed literature value differs in exponent";
    report["beta_J_per_m4"] = ep.beta;
    report["omega_rad_s"] = ep.omega;
    report["gamma"] = duffing_gamma(ep.mass, ep.omega, ep.beta);
    report["z_zpm_m"] = unit.z_zpm();
    report["zeta_to_alpha2"] = {{"zeta=-1", control_mapping_inverse(-1.0, unit)},
                                {"zeta=0", control_mapping_inverse(0.0, unit)},
                                {"zeta=3e-4", control_mapping_inverse(3e-4, unit)}};

    ElectrodeGeometry eg;
    eg.standoff = cfg.get_double("electrode.standoff", 100e-9);
    eg.half_length = cfg.get_double("electrode.half_length", 10.0) * eg.standoff;
    eg.potential = cfg.get_double("electrode.potential", 1.0);
    const int nb = cfg.get_int("electrode.b_points", 80);
    {
        std::ofstream f(out / "alpha_grid.csv");
        f << "b_over_z0,alpha1,alpha2,alpha3,alpha4\n";
        f.precision(10);
        for (int i = 0; i < nb; ++i) {
            const double bz = 0.1 + (2.0 - 0.1) * i / (nb - 1);
            eg.half_separation = bz * eg.standoff;
            const auto a = electrostatic_coeffs(eg, 4);
            // dimensionless: alpha_j z0^j / V0
            f << bz;
            for (int j = 1; j <= 4; ++j)
                f << ',' << a[j - 1] * std::pow(eg.standoff, j) / eg.potential;
            f << '\n';
        }
    }
    eg.half_separation = eg.standoff / std::sqrt(3.0);
    report["alpha3_at_root_b"] = electrostatic_coeffs(eg, 3)[2] *
                                 std::pow(eg.standoff, 3) / eg.potential;
    std::ofstream(out / "design.json") << report.dump(2) << '\n';
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out, "design", cfg, {}, {"design.json", "alpha_grid.csv"}, wall);
    std::printf("beta = %.4e J/m^4, gamma = %.4e\n", ep.beta, report["gamma"].get<double>());
    return 0;
}

int cmd_wigner(const Config& cfg, const fs::path& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const UnitSystem unit = unit_from(cfg);
    const double gamma = cfg.get_double("device.gamma", unit.gamma());
    DensityMatrix rho;
    ScaledBasis basis;
    const std::string source = cfg.get_string("wigner.state", "");
    if (source.empty()) {
        const double zeta = cfg.get_double("wigner.zeta", cfg.get_double("protocol.zeta_f", 3e-4));
        basis = build_basis(zeta, policy_from(cfg));
        const EigenSystem eig = eigensystem_at(zeta, gamma, 0.0, basis);
        rho.matrix = (eig.states.col(0) * eig.states.col(0).transpose())
                         .cast<std::complex<double>>();
    } else {
        std::tie(rho, basis) = load_state(source);
    }
    const WignerGrid grid = wigner(
        rho, basis, cfg.get_double("wigner.x_min", -60.0), cfg.get_double("wigner.x_max", 60.0),
        cfg.get_double("wigner.p_min", -6.0), cfg.get_double("wigner.p_max", 6.0),
        cfg.get_int("wigner.resolution", 241));
    write_wigner_csv(grid, (out / "wigner.csv").string());
    write_wigner_binary(grid, (out / "wigner.bin").string());
    json extra{{"integral", grid.integral()},
               {"support_warning", grid.support_warning},
               {"parity", parity_expectation(rho)}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out, "wigner", cfg, {{"result", extra}}, {"wigner.csv", "wigner.bin"}, wall);
    if (grid.support_warning)
        std::fprintf(stderr, "warning: grid may not cover the state support\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"double-well cat-state simulator"};
    app.require_subcommand(1);
    std::string config_path, out_dir = "run";
    int workers = int(std::thread::hardware_concurrency());
    long seed = 0; // reserved: the pipeline is deterministic
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--workers", workers, "sweep worker count");
    app.add_option("--seed", seed, "reserved");
    app.add_option("--override", overrides, "key=value config overrides");

    for (const char* name :
         {"eigen", "protocol", "sweep", "spectrum", "design", "wigner"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Config cfg = config_path.empty() ? Config{} : Config::from_file(config_path);
        for (const auto& ov : overrides) cfg.apply_override(ov);
        fs::create_directories(out_dir);
        const fs::path out(out_dir);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "eigen") return cmd_eigen(cfg, out);
        if (sub == "protocol") return cmd_protocol(cfg, out);
        if (sub == "sweep") return cmd_sweep(cfg, out, workers);
        if (sub == "spectrum") return cmd_spectrum(cfg, out);
        if (sub == "design") return cmd_design(cfg, out);
        if (sub == "wigner") return cmd_wigner(cfg, out);
        return 2;
    } catch (const InvariantViolation& e) {
        std::fprintf(stderr, "numerical invariant violated: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
