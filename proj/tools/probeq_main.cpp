// Command-line front end. Everything goes through the public C API of the
// shared library; no core headers are used here.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "probeq.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitError = 2;

struct StringDeleter {
    void operator()(char* s) const { pq_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

struct InstanceDeleter {
    void operator()(pq_instance* p) const { pq_instance_free(p); }
};
struct SpectrumDeleter {
    void operator()(pq_spectrum* p) const { pq_spectrum_free(p); }
};
struct ResultDeleter {
    void operator()(pq_result* p) const { pq_result_free(p); }
};
struct TableDeleter {
    void operator()(pq_table* p) const { pq_table_free(p); }
};

[[noreturn]] void die(const std::string& context) {
    std::cerr << "error: " << context;
    const char* detail = pq_last_error();
    if (detail && *detail)
        std::cerr << ": " << detail;
    std::cerr << "\n";
    std::exit(kExitError);
}

std::unique_ptr<pq_instance, InstanceDeleter> load_instance(const std::string& path) {
    pq_instance* raw = nullptr;
    if (pq_instance_load(path.c_str(), &raw) != PQ_OK)
        die("loading " + path);
    return std::unique_ptr<pq_instance, InstanceDeleter>(raw);
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty() || output_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << output_path << "\n";
        std::exit(kExitError);
    }
    out << text;
}

// Grid specs are "start:stop:step" (inclusive stop, within a half step) or a
// JSON file holding an array of numbers.
std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3) {
        std::cerr << "error: grid spec must be start:stop:step, got \"" << spec
                  << "\"\n";
        std::exit(kExitError);
    }
    if (step <= 0.0 || stop < start) {
        std::cerr << "error: grid needs a positive step and stop >= start\n";
        std::exit(kExitError);
    }
    std::vector<double> grid;
    for (double v = start; v <= stop + 0.5 * step; v += step)
        grid.push_back(v);
    return grid;
}

std::vector<double> read_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open grid file " << path << "\n";
        std::exit(kExitError);
    }
    std::vector<double> grid;
    char c;
    if (!(in >> c) || c != '[') {
        std::cerr << "error: grid file must contain a JSON array of numbers\n";
        std::exit(kExitError);
    }
    double v;
    while (in >> v) {
        grid.push_back(v);
        if (!(in >> c) || c == ']')
            break;
        if (c != ',') {
            std::cerr << "error: malformed grid file " << path << "\n";
            std::exit(kExitError);
        }
    }
    if (grid.empty()) {
        std::cerr << "error: grid file " << path << " holds no numbers\n";
        std::exit(kExitError);
    }
    return grid;
}

struct CommonOptions {
    std::string instance_path;
    std::string output_path;
    double omega = 1.0;
    double coupling = 0.002;
    std::string method = "exact";
    int trotter_steps = 0;
    int krylov_dim = 32;
    double tolerance = 1e-10;
    double threshold = 0.1;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_instance = true) {
    if (with_instance)
        cmd->add_option("instance", opt.instance_path, "instance JSON file")
            ->required();
    cmd->add_option("-o,--output", opt.output_path, "output file (default stdout)");
    cmd->add_option("--omega", opt.omega, "probe frequency (default 1)");
    cmd->add_option("-c,--coupling", opt.coupling, "coupling strength (default 0.002)");
    cmd->add_option("--method", opt.method,
                    "propagator: exact, exact_eig, exact_krylov, trotter")
        ->check(CLI::IsMember({"exact", "exact_eig", "exact_krylov", "trotter"}));
    cmd->add_option("-L,--trotter-steps", opt.trotter_steps,
                    "Trotter step count (0 = auto-select)");
    cmd->add_option("--krylov-dim", opt.krylov_dim, "Krylov subspace dimension");
    cmd->add_option("--tol", opt.tolerance, "Krylov local tolerance");
    cmd->add_option("--threshold", opt.threshold,
                    "conditional mass needed to report an assignment");
    cmd->add_option("--shots", opt.shots, "sample the final state (0 = off)");
    cmd->add_option("--seed", opt.seed, "RNG seed for shots mode");
    cmd->add_flag("-v,--verbose", opt.verbose, "progress notes on stderr");
}

pq_run_params to_run_params(const CommonOptions& opt, const pq_instance* inst,
                            double tau) {
    pq_run_params params;
    pq_run_params_init(&params);
    params.omega = opt.omega;
    params.coupling = opt.coupling;
    params.tau = tau;
    if (opt.method == "exact") {
        // Dense eigendecomposition at desk scale, Krylov beyond it.
        const int n = pq_instance_num_bits(inst);
        params.method = (std::int64_t{1} << (n + 2)) <= 4096 ? PQ_METHOD_EXACT_EIG
                                                             : PQ_METHOD_EXACT_KRYLOV;
    } else if (opt.method == "exact_eig") {
        params.method = PQ_METHOD_EXACT_EIG;
    } else if (opt.method == "exact_krylov") {
        params.method = PQ_METHOD_EXACT_KRYLOV;
    } else {
        params.method = PQ_METHOD_TROTTER;
    }
    params.trotter_steps = opt.trotter_steps;
    params.krylov_dim = opt.krylov_dim;
    params.tolerance = opt.tolerance;
    params.threshold = opt.threshold;
    params.shots = opt.shots;
    params.seed = opt.seed;
    return params;
}

void note_gate_estimate(const CommonOptions& opt, const pq_instance* inst) {
    if (!opt.verbose || opt.method != "trotter")
        return;
    const std::int64_t n = pq_instance_num_bits(inst);
    // Hadamard layer plus two multi-controlled phases per step; the
    // controlled phases decompose into O(n^2) elementary gates.
    const std::int64_t estimate = 4 * (n + 2) + 2 * (n + 1) * (n + 1);
    std::cerr << "note: ~" << estimate
              << " elementary gates per Trotter step at n = " << n << "\n";
}

int cmd_spectrum(const CommonOptions& opt) {
    auto inst = load_instance(opt.instance_path);
    pq_spectrum* raw = nullptr;
    if (pq_spectrum_solve(inst.get(), &raw) != PQ_OK)
        die("solving spectrum");
    std::unique_ptr<pq_spectrum, SpectrumDeleter> spectrum(raw);

    char* json = nullptr;
    if (pq_spectrum_to_json(inst.get(), spectrum.get(), &json) != PQ_OK)
        die("serializing spectrum");
    ApiString holder(json);
    emit(json, opt.output_path);
    return pq_spectrum_min_energy(spectrum.get()) == 0 ? kExitOk : kExitUnsat;
}

int cmd_run(const CommonOptions& opt, double tau) {
    auto inst = load_instance(opt.instance_path);
    note_gate_estimate(opt, inst.get());
    const pq_run_params params = to_run_params(opt, inst.get(), tau);
    pq_result* raw = nullptr;
    if (pq_run(inst.get(), &params, &raw) != PQ_OK)
        die("running the algorithm");
    std::unique_ptr<pq_result, ResultDeleter> result(raw);

    char* json = nullptr;
    if (pq_result_to_json(result.get(), &json) != PQ_OK)
        die("serializing result");
    ApiString holder(json);
    emit(json, opt.output_path);
    return kExitOk;
}

int cmd_sweep_tau(const CommonOptions& opt, const std::vector<double>& grid) {
    auto inst = load_instance(opt.instance_path);
    note_gate_estimate(opt, inst.get());
    const pq_run_params params = to_run_params(opt, inst.get(), 0.0);
    pq_table* raw = nullptr;
    if (pq_sweep_tau(inst.get(), &params, grid.data(), grid.size(), &raw) != PQ_OK)
        die("sweeping evolution times");
    std::unique_ptr<pq_table, TableDeleter> table(raw);

    char* csv = nullptr;
    if (pq_table_to_csv(table.get(), &csv) != PQ_OK)
        die("serializing sweep");
    ApiString holder(csv);
    emit(csv, opt.output_path);
    return kExitOk;
}

int cmd_sweep_omega(const CommonOptions& opt, const std::vector<double>& grid,
                    std::optional<double> fixed_tau) {
    auto inst = load_instance(opt.instance_path);
    const pq_run_params params = to_run_params(opt, inst.get(), 0.0);
    pq_table* raw = nullptr;
    if (pq_sweep_omega(inst.get(), &params, grid.data(), grid.size(),
                       fixed_tau.value_or(-1.0), &raw) != PQ_OK)
        die("sweeping probe frequencies");
    std::unique_ptr<pq_table, TableDeleter> table(raw);

    char* csv = nullptr;
    if (pq_table_to_csv(table.get(), &csv) != PQ_OK)
        die("serializing sweep");
    ApiString holder(csv);
    emit(csv, opt.output_path);

    double resonance = 0.0;
    if (pq_table_first_resonant_omega(table.get(), &resonance)) {
        if (opt.verbose)
            std::cerr << "note: first resonance at omega = " << resonance << "\n";
        return kExitOk;
    }
    return kExitUnsat;
}

int cmd_solve(const CommonOptions& opt) {
    auto inst = load_instance(opt.instance_path);
    note_gate_estimate(opt, inst.get());
    const pq_run_params params = to_run_params(opt, inst.get(), 0.0);
    pq_result* raw = nullptr;
    if (pq_solve(inst.get(), &params, &raw) != PQ_OK)
        die("solving instance");
    std::unique_ptr<pq_result, ResultDeleter> result(raw);

    char* json = nullptr;
    if (pq_result_to_json(result.get(), &json) != PQ_OK)
        die("serializing result");
    ApiString holder(json);
    emit(json, opt.output_path);
    return pq_result_satisfiable(result.get()) ? kExitOk : kExitUnsat;
}

int cmd_verify(int bits, std::uint64_t seed, bool corrupt,
               const std::string& output_path) {
    pq_verify_params params;
    pq_verify_params_init(&params);
    params.num_bits = bits;
    params.seed = seed;
    params.corrupt_sign_hook = corrupt ? 1 : 0;

    char* report = nullptr;
    int failed = 0;
    if (pq_verify(&params, &report, &failed) != PQ_OK)
        die("running verification");
    ApiString holder(report);
    emit(report, output_path);
    return failed == 0 ? kExitOk : kExitUnsat;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"probe-qubit spectral simulator for 3-bit exact cover"};
    app.require_subcommand(1);

    CommonOptions opt;

    auto* spectrum = app.add_subcommand(
        "spectrum", "exhaustive energy spectrum and satisfying assignments");
    add_common(spectrum, opt);

    double tau = 0.0;
    auto* run = app.add_subcommand("run", "single run at a fixed evolution time");
    add_common(run, opt);
    run->add_option("--tau", tau, "evolution time")->required();

    std::string grid_spec, grid_file;
    auto* sweep_tau = app.add_subcommand(
        "sweep-tau", "decay probability vs evolution time, CSV output");
    add_common(sweep_tau, opt);
    sweep_tau->add_option("--grid", grid_spec, "grid as start:stop:step");
    sweep_tau->add_option("--grid-file", grid_file, "JSON array of grid points");

    std::string omega_grid_spec, omega_grid_file;
    double fixed_tau = -1.0;
    auto* sweep_omega = app.add_subcommand(
        "sweep-omega", "decay probability vs probe frequency, CSV output");
    add_common(sweep_omega, opt);
    sweep_omega->add_option("--grid", omega_grid_spec, "grid as start:stop:step");
    sweep_omega->add_option("--grid-file", omega_grid_file,
                            "JSON array of grid points");
    sweep_omega->add_option("--tau", fixed_tau,
                            "fix the per-point evolution time (default: doubling guesses)");

    auto* solve = app.add_subcommand(
        "solve", "decide satisfiability and extract the assignments");
    add_common(solve, opt);

    int verify_bits = 4;
    std::uint64_t verify_seed = 7;
    bool corrupt_hook = false;
    std::string verify_output;
    auto* verify = app.add_subcommand(
        "verify", "cross-check operators against dense oracles");
    verify->add_option("--bits", verify_bits, "register size (dense cap: 6)");
    verify->add_option("--seed", verify_seed, "random-instance seed");
    verify->add_option("-o,--output", verify_output, "output file (default stdout)");
    verify
        ->add_flag("--corrupt-sign-hook", corrupt_hook,
                   "negative control: corrupt a coupling sign so Hermiticity fails")
        ->group(""); // test hook, hidden from --help

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed())
            return cmd_spectrum(opt);
        if (run->parsed())
            return cmd_run(opt, tau);
        if (sweep_tau->parsed()) {
            if (grid_spec.empty() == grid_file.empty()) {
                std::cerr << "error: pass exactly one of --grid or --grid-file\n";
                return kExitError;
            }
            const auto grid =
                grid_file.empty() ? parse_grid(grid_spec) : read_grid_file(grid_file);
            return cmd_sweep_tau(opt, grid);
        }
        if (sweep_omega->parsed()) {
            if (omega_grid_spec.empty() == omega_grid_file.empty()) {
                std::cerr << "error: pass exactly one of --grid or --grid-file\n";
                return kExitError;
            }
            const auto grid = omega_grid_file.empty()
                                  ? parse_grid(omega_grid_spec)
                                  : read_grid_file(omega_grid_file);
            std::optional<double> pinned;
            if (fixed_tau > 0.0)
                pinned = fixed_tau;
            return cmd_sweep_omega(opt, grid, pinned);
        }
        if (solve->parsed())
            return cmd_solve(opt);
        if (verify->parsed())
            return cmd_verify(verify_bits, verify_seed, corrupt_hook, verify_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
