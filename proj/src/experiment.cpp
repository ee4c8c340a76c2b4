#include "probeq/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>

#include <json.hpp>

#include "probeq/errors.hpp"

namespace probeq {

namespace {

int thread_count(std::size_t work) {
    int t = 0;
    if (const char* env = std::getenv("PROBEQ_THREADS"))
        t = std::atoi(env);
    if (t <= 0)
        t = static_cast<int>(std::thread::hardware_concurrency());
    t = std::max(1, t);
    return static_cast<int>(std::min<std::size_t>(t, work));
}

// Runs fn(i) for i in [0, count), chunked over threads. Results must be
// written to per-index slots so the outcome is independent of scheduling.
template <class F>
void parallel_for_index(std::size_t count, F&& fn) {
    const int threads = thread_count(count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = count * static_cast<std::size_t>(t) / threads;
        const std::size_t hi = count * (static_cast<std::size_t>(t) + 1) / threads;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i)
                fn(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

void validate_params(const SimulationParams& sp) {
    if (sp.tau < 0.0)
        throw InvalidArgument("evolution time must be non-negative");
    if (!(sp.solution_threshold >= 0.0 && sp.solution_threshold <= 1.0))
        throw InvalidArgument("solution threshold must lie in [0, 1]");
    if (sp.propagator.trotter_steps < 0)
        throw InvalidArgument("Trotter step count must be non-negative (0 = auto)");
    if (sp.propagator.krylov_dim < 2)
        throw InvalidArgument("Krylov dimension must be at least 2");
    if (!(sp.propagator.tolerance > 0.0 && sp.propagator.tolerance < 1.0))
        throw InvalidArgument("tolerance must lie in (0, 1)");
}

// Shared propagation context so sweeps and the solver reuse one
// eigendecomposition across many evolution times.
class Engine {
  public:
    Engine(const EC3Instance& inst, const SimulationParams& sp, double omega)
        : params_(make_hamiltonian_params(inst, omega, sp.coupling)),
          spec_(sp.propagator), psi0_(prepare_reference(inst.n)) {
        if (spec_.method == PropagatorMethod::ExactEig)
            dense_.emplace(params_);
    }

    QuantumState evolve(double tau, std::optional<int>* steps_used = nullptr) const {
        switch (spec_.method) {
        case PropagatorMethod::ExactEig:
            return dense_->apply(psi0_, tau);
        case PropagatorMethod::ExactKrylov:
            return propagate_krylov(params_, psi0_, tau, spec_.krylov_dim,
                                    spec_.tolerance);
        case PropagatorMethod::Trotter:
            if (spec_.trotter_steps > 0) {
                if (steps_used)
                    *steps_used = spec_.trotter_steps;
                return propagate_trotter(params_, psi0_, tau, spec_.trotter_steps);
            } else {
                TrotterRun run = propagate_trotter_auto(params_, psi0_, tau);
                if (steps_used)
                    *steps_used = run.steps;
                return std::move(run.state);
            }
        }
        throw InvalidArgument("unknown propagator method");
    }

    const HamiltonianParams& params() const { return params_; }
    const QuantumState& reference() const { return psi0_; }

  private:
    HamiltonianParams params_;
    PropagatorSpec spec_;
    QuantumState psi0_;
    std::optional<ExactPropagator> dense_;
};

DecayResult readout(const QuantumState& state, double omega, double tau) {
    const int n = state.num_bits;
    const std::int64_t half = register_dim(n);
    const std::int64_t quarter = half / 2;

    DecayResult dr;
    dr.omega = omega;
    dr.tau = tau;
    dr.p_decay = state.amplitudes.head(half).squaredNorm();

    // The target block is probe = 0, ancilla = 1; residual reference-block
    // amplitude (ancilla = 0) is excluded from the conditional distribution.
    const double anc1 = state.amplitudes.segment(quarter, quarter).squaredNorm();
    dr.ancilla_one_mass = dr.p_decay > 1e-12 ? anc1 / dr.p_decay : 0.0;

    if (anc1 > 1e-300) {
        dr.conditional_register.reserve(static_cast<std::size_t>(quarter));
        for (std::int64_t z = 0; z < quarter; ++z) {
            const double w = std::norm(state.amplitudes[quarter + z]);
            if (w > 0.0)
                dr.conditional_register.emplace_back(static_cast<std::uint64_t>(z),
                                                     w / anc1);
        }
        std::sort(dr.conditional_register.begin(), dr.conditional_register.end(),
                  [](const auto& a, const auto& b) {
                      if (a.second != b.second)
                          return a.second > b.second;
                      return a.first < b.first;
                  });
    }
    return dr;
}

ShotSample sample_shots(const QuantumState& state, std::uint64_t shots,
                        std::uint64_t seed) {
    const int n = state.num_bits;
    const std::int64_t half = register_dim(n);
    const std::int64_t quarter = half / 2;

    std::vector<double> weights(static_cast<std::size_t>(state.amplitudes.size()));
    for (std::int64_t i = 0; i < state.amplitudes.size(); ++i)
        weights[static_cast<std::size_t>(i)] = std::norm(state.amplitudes[i]);
    std::discrete_distribution<std::int64_t> dist(weights.begin(), weights.end());
    std::mt19937_64 rng(seed);

    ShotSample sample;
    sample.shots = shots;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const std::int64_t idx = dist(rng);
        if (idx < half) {
            ++sample.decayed;
            if (idx >= quarter) {
                const auto a = Assignment::from_index(
                    static_cast<std::uint64_t>(idx - quarter), n);
                ++sample.register_counts[a.to_string()];
            }
        }
    }
    return sample;
}

std::string method_name(const PropagatorSpec& spec) {
    switch (spec.method) {
    case PropagatorMethod::ExactEig:
        return "exact_eig";
    case PropagatorMethod::ExactKrylov:
        return "exact_krylov";
    case PropagatorMethod::Trotter:
        return "trotter";
    }
    return "unknown";
}

std::uint64_t max_degeneracy_above_ground(const SpectrumSummary& spectrum) {
    std::uint64_t m0 = 0;
    for (const auto& [energy, count] : spectrum.degeneracies)
        if (energy > 0)
            m0 = std::max(m0, count);
    return m0;
}

nlohmann::ordered_json params_json(const EC3Instance& inst,
                                   const SimulationParams& sp, double tau) {
    nlohmann::ordered_json p;
    p["n"] = inst.n;
    p["num_clauses"] = inst.clauses.size();
    p["omega"] = sp.omega;
    p["c"] = sp.coupling;
    p["tau"] = tau;
    p["method"] = method_name(sp.propagator);
    if (sp.propagator.method == PropagatorMethod::Trotter && sp.propagator.trotter_steps > 0)
        p["trotter_steps"] = sp.propagator.trotter_steps;
    else
        p["trotter_steps"] = nullptr;
    p["threshold"] = sp.solution_threshold;
    p["shots"] = sp.shots;
    p["seed"] = sp.seed;
    return p;
}

nlohmann::ordered_json analytics_json(const EC3Instance& inst,
                                      const SimulationParams& sp,
                                      std::uint64_t m) {
    if (m == 0)
        return nullptr;
    const AnalyticPrediction ap = analytic_prediction(inst, sp, m);
    nlohmann::ordered_json a;
    a["q01"] = ap.q01;
    a["err_bound"] = ap.err_bound;
    a["optimal_tau"] = ap.optimal_tau;
    return a;
}

nlohmann::json assignments_json(const std::vector<Assignment>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : list)
        arr.push_back(a.to_string());
    return arr;
}

} // namespace

DecayResult run_algorithm(const EC3Instance& inst, const SimulationParams& sp) {
    validate_params(sp);
    Engine engine(inst, sp, sp.omega);
    std::optional<int> steps;
    const QuantumState final_state = engine.evolve(sp.tau, &steps);
    DecayResult dr = readout(final_state, sp.omega, sp.tau);
    dr.chosen_steps = steps;
    if (sp.shots > 0)
        dr.samples = sample_shots(final_state, sp.shots, sp.seed);
    return dr;
}

AnalyticPrediction analytic_prediction(const EC3Instance& inst,
                                       const SimulationParams& sp,
                                       std::uint64_t m) {
    if (m == 0)
        throw InvalidArgument("analytic prediction needs at least one satisfying "
                              "assignment (no resonant channel)");
    AnalyticPrediction ap;
    ap.q01 = 2.0 * sp.coupling * std::sqrt(static_cast<double>(m));
    const double s = std::sin(0.5 * ap.q01 * sp.tau);
    ap.p_decay_analytic = s * s;
    ap.optimal_tau = std::numbers::pi / ap.q01;

    const auto spectrum = brute_force_solve(inst);
    const double m0 = static_cast<double>(max_degeneracy_above_ground(spectrum));
    ap.err_bound = (2.0 / 3.0) * m0 * std::numbers::pi * std::numbers::pi *
                   sp.coupling * sp.coupling;
    return ap;
}

double rabi_decay_probability(double level_energy, double reference_energy,
                              double omega, double coupling,
                              std::uint64_t degeneracy, double tau) {
    if (degeneracy == 0)
        throw InvalidArgument("channel degeneracy must be at least 1");
    const double q = 2.0 * coupling * std::sqrt(static_cast<double>(degeneracy));
    const double detuning = level_energy - reference_energy - omega;
    const double rabi = std::sqrt(q * q + detuning * detuning);
    const double s = std::sin(0.5 * rabi * tau);
    return s * s * (q * q) / (q * q + detuning * detuning);
}

std::vector<TauSweepRow> sweep_tau(const EC3Instance& inst,
                                   const SimulationParams& sp,
                                   const std::vector<double>& tau_grid) {
    validate_params(sp);
    if (tau_grid.empty())
        throw InvalidArgument("evolution-time grid must not be empty");
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (tau_grid[i] < 0.0)
            throw InvalidArgument("grid point " + std::to_string(i) +
                                  ": negative evolution time");
        if (i > 0 && tau_grid[i] <= tau_grid[i - 1])
            throw InvalidArgument("grid point " + std::to_string(i) +
                                  ": grid must be strictly ascending");
    }

    const auto spectrum = brute_force_solve(inst);
    const std::uint64_t m = spectrum.solution_count();
    const double q01 = 2.0 * sp.coupling * std::sqrt(static_cast<double>(m));

    const Engine engine(inst, sp, sp.omega);
    std::vector<TauSweepRow> rows(tau_grid.size());
    std::vector<std::string> errors(tau_grid.size());
    parallel_for_index(tau_grid.size(), [&](std::size_t i) {
        try {
            const double tau = tau_grid[i];
            const double p = decay_probability(engine.evolve(tau));
            const double s = std::sin(0.5 * q01 * tau);
            const double analytic = m > 0 ? s * s : 0.0;
            rows[i] = TauSweepRow{tau, p, analytic, std::abs(p - analytic)};
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw NumericError("grid point " + std::to_string(i) + " (tau = " +
                               format_double(tau_grid[i]) + "): " + errors[i]);
    return rows;
}

OmegaSweepResult sweep_omega(const EC3Instance& inst, const SimulationParams& sp,
                             const std::vector<double>& omega_grid,
                             std::optional<double> fixed_tau) {
    validate_params(sp);
    if (omega_grid.empty())
        throw InvalidArgument("frequency grid must not be empty");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (omega_grid[i] <= 0.0)
            throw InvalidArgument("grid point " + std::to_string(i) +
                                  ": frequencies must be positive");
        if (i > 0 && omega_grid[i] <= omega_grid[i - 1])
            throw InvalidArgument("grid point " + std::to_string(i) +
                                  ": grid must be strictly ascending");
    }

    // Evolution-time guesses for unknown degeneracy: pi/(2c sqrt(m)) for
    // m = 1, 2, 4, ... Some guess lands within [1, 2) of the true value,
    // which already drives the decay probability above 0.63 on resonance.
    std::vector<double> tau_guesses;
    if (fixed_tau) {
        tau_guesses.push_back(*fixed_tau);
    } else {
        const std::uint64_t cap = std::uint64_t{1} << inst.n;
        for (std::uint64_t guess = 1; guess <= cap; guess *= 2)
            tau_guesses.push_back(std::numbers::pi /
                                  (2.0 * sp.coupling * std::sqrt(static_cast<double>(guess))));
    }

    OmegaSweepResult result;
    result.rows.resize(omega_grid.size());
    std::vector<std::string> errors(omega_grid.size());
    parallel_for_index(omega_grid.size(), [&](std::size_t i) {
        try {
            const Engine engine(inst, sp, omega_grid[i]);
            OmegaSweepRow row;
            row.omega = omega_grid[i];
            row.best_tau = tau_guesses.front();
            for (double tau : tau_guesses) {
                const double p = decay_probability(engine.evolve(tau));
                if (p > row.p_decay) {
                    row.p_decay = p;
                    row.best_tau = tau;
                }
                if (row.p_decay > 0.5)
                    break;
            }
            result.rows[i] = row;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw NumericError("grid point " + std::to_string(i) + " (omega = " +
                               format_double(omega_grid[i]) + "): " + errors[i]);

    for (const auto& row : result.rows) {
        if (row.p_decay > 0.5) {
            result.first_resonant_omega = row.omega;
            result.resonant_level =
                static_cast<int>(std::lround(row.omega + kReferenceEnergy));
            SimulationParams at_res = sp;
            at_res.omega = row.omega;
            at_res.tau = row.best_tau;
            at_res.shots = 0;
            const DecayResult dr = run_algorithm(inst, at_res);
            result.resonant_assignments =
                extract_solutions(inst, dr, sp.solution_threshold);
            break;
        }
    }
    return result;
}

std::vector<Assignment> extract_solutions(const EC3Instance& inst,
                                          const DecayResult& dr,
                                          double threshold) {
    std::vector<Assignment> out;
    if (dr.p_decay <= 1e-12)
        return out;
    const int level = static_cast<int>(std::lround(dr.omega + kReferenceEnergy));
    if (level < 0)
        return out;
    for (const auto& [encoding, prob] : dr.conditional_register) {
        if (prob <= threshold)
            break; // sorted descending
        Assignment a = Assignment::from_index(encoding, inst.n);
        // Never trust amplitudes alone: the classical energy must match the
        // level selected by the probe frequency.
        if (problem_energy(inst, a) == level)
            out.push_back(std::move(a));
    }
    return out;
}

SolveOutcome solve_instance(const EC3Instance& inst, const SimulationParams& sp) {
    validate_params(sp);
    SimulationParams at_resonance = sp;
    at_resonance.omega = 1.0;

    SolveOutcome outcome;
    const std::uint64_t cap = std::uint64_t{1} << inst.n;
    const Engine engine(inst, at_resonance, 1.0);
    for (std::uint64_t guess = 1; guess <= cap; guess *= 2) {
        const double tau = std::numbers::pi /
                           (2.0 * sp.coupling * std::sqrt(static_cast<double>(guess)));
        std::optional<int> steps;
        const QuantumState state = engine.evolve(tau, &steps);
        DecayResult dr = readout(state, 1.0, tau);
        dr.chosen_steps = steps;
        outcome.result = std::move(dr);
        outcome.tau = tau;
        if (outcome.result.p_decay > 0.5) {
            outcome.satisfiable = true;
            outcome.solutions =
                extract_solutions(inst, outcome.result, sp.solution_threshold);
            return outcome;
        }
    }

    // No decay at omega = 1: scan the discrete frequencies above it for the
    // lowest resonant level and its minimal-violation assignments.
    std::vector<double> omega_grid;
    for (int w = 2; w <= static_cast<int>(inst.clauses.size()) + 1; ++w)
        omega_grid.push_back(static_cast<double>(w));
    if (!omega_grid.empty()) {
        const OmegaSweepResult sweep = sweep_omega(inst, sp, omega_grid);
        outcome.first_resonant_omega = sweep.first_resonant_omega;
        outcome.minimal_violation = sweep.resonant_assignments;
    }
    return outcome;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string tau_sweep_csv(const std::vector<TauSweepRow>& rows) {
    std::string out = "tau,p_decay,p_analytic,abs_err\n";
    for (const auto& r : rows) {
        out += format_double(r.tau);
        out += ',';
        out += format_double(r.p_decay);
        out += ',';
        out += format_double(r.p_analytic);
        out += ',';
        out += format_double(r.abs_err);
        out += '\n';
    }
    return out;
}

std::string omega_sweep_csv(const OmegaSweepResult& result) {
    std::string out = "omega,p_decay,best_tau\n";
    for (const auto& r : result.rows) {
        out += format_double(r.omega);
        out += ',';
        out += format_double(r.p_decay);
        out += ',';
        out += format_double(r.best_tau);
        out += '\n';
    }
    return out;
}

std::string spectrum_json(const EC3Instance& inst, const SpectrumSummary& s) {
    nlohmann::ordered_json doc;
    doc["n"] = inst.n;
    doc["num_clauses"] = s.num_clauses;
    doc["satisfiable"] = s.satisfiable();
    doc["min_energy"] = s.min_energy;
    doc["solution_count"] = s.solution_count();
    nlohmann::ordered_json deg;
    for (const auto& [energy, count] : s.degeneracies)
        deg[std::to_string(energy)] = count;
    doc["degeneracies"] = std::move(deg);
    doc["minimizers"] = assignments_json(s.minimizers);
    return doc.dump(2) + "\n";
}

std::string run_result_json(const EC3Instance& inst, const SimulationParams& sp,
                            const DecayResult& dr,
                            const std::vector<Assignment>& solutions) {
    const auto spectrum = brute_force_solve(inst);
    const std::uint64_t m = spectrum.solution_count();

    nlohmann::ordered_json doc;
    doc["params"] = params_json(inst, sp, dr.tau);
    doc["satisfiable"] = m > 0;
    doc["p_decay"] = dr.p_decay;
    if (dr.chosen_steps)
        doc["chosen_L"] = *dr.chosen_steps;
    else
        doc["chosen_L"] = nullptr;
    doc["solutions"] = assignments_json(solutions);
    doc["analytics"] = analytics_json(inst, sp, m);
    if (dr.samples) {
        nlohmann::ordered_json samples;
        samples["shots"] = dr.samples->shots;
        samples["seed"] = sp.seed;
        samples["decayed"] = dr.samples->decayed;
        samples["register_counts"] = dr.samples->register_counts;
        doc["samples"] = std::move(samples);
    }
    return doc.dump(2) + "\n";
}

std::string solve_result_json(const EC3Instance& inst, const SimulationParams& sp,
                              const SolveOutcome& outcome) {
    SimulationParams at_resonance = sp;
    at_resonance.omega = 1.0;
    at_resonance.tau = outcome.tau;

    const auto spectrum = brute_force_solve(inst);
    const std::uint64_t m = spectrum.solution_count();

    nlohmann::ordered_json doc;
    doc["params"] = params_json(inst, at_resonance, outcome.tau);
    doc["satisfiable"] = outcome.satisfiable;
    doc["p_decay"] = outcome.result.p_decay;
    if (outcome.result.chosen_steps)
        doc["chosen_L"] = *outcome.result.chosen_steps;
    else
        doc["chosen_L"] = nullptr;
    doc["solutions"] = assignments_json(outcome.solutions);
    doc["analytics"] = analytics_json(inst, at_resonance, m);
    if (!outcome.satisfiable) {
        if (outcome.first_resonant_omega)
            doc["first_resonant_omega"] = *outcome.first_resonant_omega;
        else
            doc["first_resonant_omega"] = nullptr;
        doc["minimal_violation"] = assignments_json(outcome.minimal_violation);
    }
    return doc.dump(2) + "\n";
}

} // namespace probeq
