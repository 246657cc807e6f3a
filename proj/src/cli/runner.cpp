#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kerrlab/cli.hpp"
#include "kerrlab/error.hpp"
#include "kerrlab/io.hpp"
#include "kerrlab/parallel.hpp"
#include "kerrlab/phase_space.hpp"
#include "kerrlab/scenarios.hpp"
#include "kerrlab/tomography.hpp"

namespace kerrlab::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kBootstrapStream = 0xb007;

/// Collects the files of one run; formats that `emit` leaves out are skipped.
class Artifacts {
public:
    Artifacts(fs::path dir, const json& emit) : dir_(std::move(dir)) {
        for (const auto& e : emit) {
            if (e == "csv") csv_ = true;
            if (e == "json") json_ = true;
        }
    }

    void csv(const std::string& name, const std::string& contents) {
        if (csv_) write(name, contents);
    }
    void json_file(const std::string& name, const json& contents) {
        if (json_) write(name, contents.dump(2) + "\n");
    }
    const std::vector<std::string>& written() const { return written_; }
    const fs::path& dir() const { return dir_; }

private:
    void write(const std::string& name, const std::string& contents) {
        io::write_file_atomic(dir_ / name, contents);
        written_.push_back(name);
    }

    fs::path dir_;
    bool csv_ = false;
    bool json_ = false;
    std::vector<std::string> written_;
};

std::string fmt(double v) { return io::format_double(v); }

KerrParams kerr_from(const json& j) {
    return KerrParams{j.at("chi").get<double>(), j.at("chi_s").get<double>(), j.at("omega_s").get<double>(),
                      j.at("T").get<double>()};
}

InterferometerParams interferometer_from(const json& p) {
    InterferometerParams out;
    out.kerr = kerr_from(p.at("kerr"));
    out.nu = io::complex_from_json(p.at("nu"));
    out.theta_offset = p.at("theta_offset").get<double>();
    out.probe_cutoff = p.at("probe_cutoff").get<int>();
    if (p.contains("second_kerr")) {
        out.second_kerr = kerr_from(p.at("second_kerr"));
        out.coherence_jitter_sigma = p.at("jitter_sigma").get<double>();
        out.jitter_mode = p.at("jitter_mode") == "uniform" ? JitterMode::uniform : JitterMode::gaussian;
    }
    return out;
}

std::string fringe_csv(const FringeScan& scan) {
    std::string out = "theta,n4\n";
    for (std::size_t i = 0; i < scan.theta_values.size(); ++i) {
        out += fmt(scan.theta_values[i]) + "," + fmt(scan.n4_values[i]) + "\n";
    }
    return out;
}

std::string wigner_csv(const WignerGrid& grid) {
    std::string out = "x";
    for (double x : grid.x_values) out += "," + fmt(x);
    out += "\np";
    for (double p : grid.p_values) out += "," + fmt(p);
    out += "\n";
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < grid.values.cols(); ++j) out += (j ? "," : "") + fmt(grid.values(i, j));
        out += "\n";
    }
    return out;
}

void run_interfere(const json& p, Artifacts& out) {
    const auto params = interferometer_from(p);
    const auto scan = mz_simulate(params, uniform_theta_grid(p.at("theta_points").get<int>()));
    const double s = std::sin(params.kerr.chi * params.kerr.T);
    out.csv("fringe.csv", fringe_csv(scan));
    out.json_file("summary.json", {{"visibility", scan.visibility},
                                   {"analytic_visibility", std::exp(-2.0 * std::norm(params.nu) * s * s)},
                                   {"snr_R", scan.snr_R},
                                   {"probe_cutoff", params.resolved_probe_cutoff()},
                                   {"parameters", p}});
}

void run_erase(const json& p, std::uint64_t seed, Artifacts& out) {
    const auto params = interferometer_from(p);
    const auto scan = eraser_simulate(params, uniform_theta_grid(p.at("theta_points").get<int>()),
                                      p.at("jitter_trials").get<int>(), seed);
    out.csv("fringe.csv", fringe_csv(scan));
    out.json_file("summary.json", {{"visibility", scan.visibility},
                                   {"snr_R", scan.snr_R},
                                   {"probe_cutoff", params.resolved_probe_cutoff()},
                                   {"parameters", p}});
}

void run_cat(const json& p, Artifacts& out) {
    const cplx nu = io::complex_from_json(p.at("nu"));
    const auto kerr = kerr_from(p.at("kerr"));
    const auto outcome = p.at("outcome") == "45" ? CatOutcome::diagonal : CatOutcome::antidiagonal;
    const int cutoff = p.at("probe_cutoff").get<int>();
    const auto result = cat_generate(nu, kerr, outcome, cutoff);
    const auto reference = cat_reference(nu, kerr, outcome, cutoff);

    double half_width = p.at("wigner_half_width").get<double>();
    if (half_width <= 0.0) half_width = std::sqrt(2.0) * std::abs(nu) + 5.0;
    const auto grid = wigner(result.probe, GridSpec::square(half_width, p.at("wigner_points").get<int>()));
    const auto minimum = wigner_min(grid);

    out.json_file("cat_state.json", io::state_to_json(result.probe));
    out.csv("wigner.csv", wigner_csv(grid));
    out.json_file("summary.json", {{"probability", result.probability},
                                   {"fidelity_with_reference", fidelity(result.probe, reference)},
                                   {"wigner_min", {{"value", minimum.value}, {"x", minimum.x}, {"p", minimum.p}}},
                                   {"wigner_integral", grid.integral()},
                                   {"probe_cutoff", static_cast<int>(result.probe.dim()) - 1},
                                   {"parameters", p}});
}

BellState bell_from(const std::string& name) {
    if (name == "phi+") return BellState::phi_plus;
    if (name == "phi-") return BellState::phi_minus;
    if (name == "psi+") return BellState::psi_plus;
    return BellState::psi_minus;
}

void run_ghz(const json& p, Artifacts& out) {
    const auto bell = bell_from(p.at("bell").get<std::string>());
    const double phi = p.at("phi").get<double>();
    const auto state = ghz_generate(bell, phi);
    double deviation = 0.0;
    for (std::size_t q = 0; q < 3; ++q) {
        const Matrix reduced = partial_trace(state, {q}).matrix();
        deviation = std::max(deviation, (reduced - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
    out.json_file("ghz_state.json", io::state_to_json(state));
    out.json_file("summary.json", {{"fidelity", fidelity(state, ghz_target(bell))},
                                   {"max_reduced_state_deviation", deviation},
                                   {"parameters", p}});
}

QubitState letter_from(const json& j) {
    if (j.is_number()) return QubitState::from_angle(j.get<double>());
    const auto name = j.get<std::string>();
    if (name == "H") return QubitState::horizontal();
    if (name == "V") return QubitState::vertical();
    if (name == "45") return QubitState::diagonal();
    return QubitState::antidiagonal();
}

void run_eve(const json& p, Artifacts& out) {
    std::vector<QubitState> alphabet;
    for (const auto& e : p.at("alphabet")) alphabet.push_back(letter_from(e));
    const auto report = eve_analysis(p.at("phi").get<double>(), alphabet, p.at("transmittance").get<double>());
    json letters = json::array();
    for (const auto& l : report.letters) {
        letters.push_back({{"theta", l.qubit.theta},
                           {"h", io::complex_to_json(l.qubit.h)},
                           {"v", io::complex_to_json(l.qubit.v)},
                           {"p_guess", l.p_guess},
                           {"qber", l.qber},
                           {"eve_rho", io::density_to_json(l.eve_rho)},
                           {"bob_rho", io::density_to_json(l.bob_rho)}});
    }
    out.json_file("eve_report.json", {{"eve_info_bound", report.eve_info_bound},
                                      {"p_guess", report.p_guess},
                                      {"bob_qber", report.bob_qber},
                                      {"probe_overlap", io::complex_to_json(report.probe_overlap)},
                                      {"joint_state", io::state_to_json(report.joint_state)},
                                      {"letters", letters},
                                      {"parameters", p}});
}

StateVector tomo_truth(const std::string& kind, cplx nu) {
    if (kind == "vacuum") return fock_state(0, default_cutoff(0.0));
    const int cutoff = default_cutoff(nu);
    if (kind == "coherent") return coherent_state(nu, cutoff);
    const double sign = kind == "odd_cat" ? -1.0 : 1.0;
    Vector amps = coherent_state(nu, cutoff).amplitudes() + sign * coherent_state(-nu, cutoff).amplitudes();
    amps.normalize();
    return StateVector(ModeLayout({Mode::bosonic(cutoff)}), amps);
}

QuadratureDataset read_dataset_csv(const fs::path& path) {
    std::istringstream in(io::read_file(path));
    QuadratureDataset data;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.rfind("lo_phase", 0) == 0)) continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("missing comma");
            data.records.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw Error(ErrorKind::parse_error,
                        path.string() + ": line " + std::to_string(line_no) + " is not 'lo_phase,value'");
        }
    }
    data.source_description = "file:" + path.filename().string();
    return data;
}

std::string dataset_csv(const QuadratureDataset& data) {
    std::string out = "lo_phase,value\n";
    out.reserve(out.size() + data.records.size() * 48);
    for (const auto& r : data.records) out += fmt(r.lo_phase) + "," + fmt(r.value) + "\n";
    return out;
}

json noise_json(const NoiseModel& noise) {
    return {{"kind", to_string(noise.kind)}, {"sigma_fraction", noise.sigma_fraction}, {"eta", noise.eta}};
}

void run_tomo(const json& p, std::uint64_t seed, Artifacts& out) {
    const auto& nj = p.at("noise");
    NoiseModel noise{noise_kind_from_string(nj.at("kind").get<std::string>()), nj.at("sigma_fraction").get<double>(),
                     nj.at("eta").get<double>()};
    const auto& rj = p.at("reconstruction");
    ReconstructionConfig rc;
    rc.cutoff = rj.at("cutoff").get<int>();
    rc.max_iterations = rj.at("max_iterations").get<int>();
    rc.convergence_tol = rj.at("convergence_tol").get<double>();
    rc.bin_count = rj.at("bin_count").get<int>();
    rc.noise_aware = rj.at("noise_aware").get<bool>();

    const auto dataset_path = p.at("dataset").get<std::string>();
    std::optional<StateVector> truth;
    QuadratureDataset data;
    if (dataset_path.empty()) {
        truth = tomo_truth(p.at("state").get<std::string>(), io::complex_from_json(p.at("nu")));
        data = homodyne_sample(*truth, uniform_phases(p.at("phases").get<int>()), p.at("samples_per_phase").get<int>(),
                               noise, seed);
        data.source_description = "simulated:" + p.at("state").get<std::string>();
    } else {
        data = read_dataset_csv(dataset_path);
        data.noise = noise;
        data.seed = seed;
    }

    const auto result = reconstruct_maxlik(data, rc);
    const auto grid = GridSpec::square(p.at("wigner_half_width").get<double>(), p.at("wigner_points").get<int>());
    const auto report =
        negativity_report(result.rho, grid, p.at("bootstrap_resamples").get<int>(), data, rc,
                          derive_seed(seed, kBootstrapStream));

    json summary = {{"iterations", result.iterations},
                    {"residual", result.residual},
                    {"converged", result.converged},
                    {"final_log_likelihood", result.log_likelihood.empty() ? 0.0 : result.log_likelihood.back()},
                    {"records", data.records.size()},
                    {"min_wigner", report.min_wigner},
                    {"identified", report.identified},
                    {"parameters", p}};
    if (truth) {
        // Overlap with the true state restricted to the reconstruction's Fock range.
        const auto dim = result.rho.matrix().rows();
        const Vector psi = truth->amplitudes().head(std::min<Eigen::Index>(dim, truth->amplitudes().size()));
        Vector padded = Vector::Zero(dim);
        padded.head(psi.size()) = psi;
        summary["fidelity_with_truth"] = padded.dot(result.rho.matrix() * padded).real();
    }

    out.csv("dataset.csv", dataset_csv(data));
    out.json_file("dataset.json", {{"records", data.records.size()},
                                   {"noise", noise_json(data.noise)},
                                   {"seed", data.seed},
                                   {"source", data.source_description}});
    out.json_file("rho.json", io::density_to_json(result.rho));
    out.json_file("negativity.json", {{"min_wigner", report.min_wigner},
                                      {"x", report.x},
                                      {"p", report.p},
                                      {"bootstrap_std", report.bootstrap_std},
                                      {"significance_sigmas", report.significance_sigmas},
                                      {"identified", report.identified},
                                      {"resamples", report.resamples}});
    out.json_file("summary.json", summary);
}

void dispatch(const json& config, std::uint64_t seed, Artifacts& out) {
    const auto scenario = config.at("scenario").get<std::string>();
    const auto& p = config.at("parameters");
    if (scenario == "interfere") return run_interfere(p, out);
    if (scenario == "erase") return run_erase(p, seed, out);
    if (scenario == "cat") return run_cat(p, out);
    if (scenario == "ghz") return run_ghz(p, out);
    if (scenario == "eve") return run_eve(p, out);
    if (scenario == "tomo") return run_tomo(p, seed, out);
    throw Error(ErrorKind::config_invalid, "scenario: unknown scenario '" + scenario + "'");
}

}  // namespace

int run(const json& config, const RunOptions& options, std::ostream& err) {
    const auto diagnostics = validate(config);
    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics) err << "ConfigInvalid: " << d.path << ": " << d.message << "\n";
        return kExitConfigInvalid;
    }

    json resolved = resolve_defaults(config);
    if (options.seed) resolved["seed"] = *options.seed;
    const auto seed = resolved.at("seed").get<std::uint64_t>();
    const fs::path dir = options.output_dir ? *options.output_dir : fs::path(resolved.at("output_dir").get<std::string>());

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        err << "IoError: cannot create output directory " << dir << ": " << ec.message() << "\n";
        return kExitComputeError;
    }

    Artifacts out(dir, resolved.at("emit"));
    json error = nullptr;
    try {
        dispatch(resolved, seed, out);
    } catch (const Error& e) {
        error = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    } catch (const std::exception& e) {
        error = {{"kind", "InternalError"}, {"message", e.what()}};
    }

    // The output location is a property of the invocation, not of the computation,
    // so it stays out of the manifest and the hash.
    json described = resolved;
    described.erase("output_dir");
    const json manifest = {{"tool", kToolName},
                           {"version", kToolVersion},
                           {"config_hash", config_hash(described)},
                           {"seed", seed},
                           {"config", described},
                           {"status", error.is_null() ? "ok" : "error"},
                           {"outputs", out.written()},
                           {"error", error}};
    try {
        io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitComputeError;
    }
    if (!error.is_null()) {
        err << error.at("message").get<std::string>() << "\n";
        return kExitComputeError;
    }
    return kExitOk;
}

int run_file(const fs::path& path, const RunOptions& options, std::ostream& err) {
    json config;
    try {
        config = parse_config_text(io::read_file(path));
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.kind() == ErrorKind::io_error ? kExitComputeError : kExitConfigInvalid;
    }
    return run(config, options, err);
}

}  // namespace kerrlab::cli
