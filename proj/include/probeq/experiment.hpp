#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "probeq/ec3.hpp"
#include "probeq/evolution.hpp"

namespace probeq {

/// Reference-block eigenvalue; the probe resonance for level E sits at
/// omega = E - kReferenceEnergy.
inline constexpr double kReferenceEnergy = -1.0;

struct SimulationParams {
    double omega = 1.0;
    double coupling = 0.002;
    double tau = 0.0;
    PropagatorSpec propagator;
    double solution_threshold = 0.1; // conditional mass needed for extraction
    std::uint64_t shots = 0;         // 0 = deterministic amplitude readout
    std::uint64_t seed = 0;
};

/// Multinomial draws from the final state, demonstration only.
struct ShotSample {
    std::uint64_t shots = 0;
    std::uint64_t decayed = 0;
    std::map<std::string, std::uint64_t> register_counts; // probe 0, ancilla 1
};

struct DecayResult {
    double p_decay = 0.0;          // total probe |0> probability
    double ancilla_one_mass = 0.0; // P(ancilla = 1 | probe = 0)
    // (encoding, probability) conditioned on probe = 0 and ancilla = 1,
    // descending probability, ties by encoding.
    std::vector<std::pair<std::uint64_t, double>> conditional_register;
    std::optional<int> chosen_steps; // Trotter step count actually used
    double omega = 1.0;
    double tau = 0.0;
    std::optional<ShotSample> samples;
};

struct AnalyticPrediction {
    double q01 = 0.0;              // Rabi matrix element 2c sqrt(m)
    double p_decay_analytic = 0.0; // sin^2(q01 tau / 2)
    double err_bound = 0.0;        // (2/3) m0 pi^2 c^2
    double optimal_tau = 0.0;      // pi / q01
};

struct TauSweepRow {
    double tau = 0.0;
    double p_decay = 0.0;
    double p_analytic = 0.0;
    double abs_err = 0.0;
};

struct OmegaSweepRow {
    double omega = 0.0;
    double p_decay = 0.0;  // best over the evolution-time guesses
    double best_tau = 0.0;
};

struct OmegaSweepResult {
    std::vector<OmegaSweepRow> rows;
    std::optional<double> first_resonant_omega; // first row above 0.5
    int resonant_level = 0;                     // round(omega) - 1 at that row
    std::vector<Assignment> resonant_assignments;
};

struct SolveOutcome {
    bool satisfiable = false;
    double tau = 0.0; // accepted evolution time (last guess when unsat)
    DecayResult result;
    std::vector<Assignment> solutions;
    // Unsatisfiable hint: lowest resonant probe frequency and the
    // minimal-violation assignments it reveals.
    std::optional<double> first_resonant_omega;
    std::vector<Assignment> minimal_violation;
};

/// Full protocol: prepare the reference state, evolve for tau, read out the
/// probe and the conditional register distribution.
DecayResult run_algorithm(const EC3Instance& inst, const SimulationParams& sp);

/// Closed-form single-channel prediction for m satisfying assignments;
/// m0 for the error bound is the largest degeneracy over nonzero levels.
AnalyticPrediction analytic_prediction(const EC3Instance& inst,
                                       const SimulationParams& sp,
                                       std::uint64_t m);

/// Rabi line shape of one excitation channel at detuning
/// level_energy - reference_energy - omega.
double rabi_decay_probability(double level_energy, double reference_energy,
                              double omega, double coupling,
                              std::uint64_t degeneracy, double tau);

/// One run per grid point (points are independent and may run in parallel;
/// the table order always follows the grid).
std::vector<TauSweepRow> sweep_tau(const EC3Instance& inst,
                                   const SimulationParams& sp,
                                   const std::vector<double>& tau_grid);

/// Spectroscopy over probe frequencies. Each point evaluates the decay at a
/// doubling sequence of evolution-time guesses pi/(2c sqrt(m_guess)) and
/// keeps the best, unless fixed_tau pins a single time.
OmegaSweepResult sweep_omega(const EC3Instance& inst, const SimulationParams& sp,
                             const std::vector<double>& omega_grid,
                             std::optional<double> fixed_tau = std::nullopt);

/// Assignments whose conditional probability exceeds the threshold, each
/// re-verified against the classical energy of the resonant level.
std::vector<Assignment> extract_solutions(const EC3Instance& inst,
                                          const DecayResult& dr,
                                          double threshold);

/// Decision procedure at omega = 1: try evolution times for guessed
/// degeneracies m = 1, 2, 4, ... until the probe decays; on failure, sweep
/// the probe frequency upward for the minimal-violation hint.
SolveOutcome solve_instance(const EC3Instance& inst, const SimulationParams& sp);

// --- serialization (12 significant digits, LF line endings) ---

std::string format_double(double v);
std::string tau_sweep_csv(const std::vector<TauSweepRow>& rows);
std::string omega_sweep_csv(const OmegaSweepResult& result);
std::string spectrum_json(const EC3Instance& inst, const SpectrumSummary& s);
std::string run_result_json(const EC3Instance& inst, const SimulationParams& sp,
                            const DecayResult& dr,
                            const std::vector<Assignment>& solutions);
std::string solve_result_json(const EC3Instance& inst, const SimulationParams& sp,
                              const SolveOutcome& outcome);

} // namespace probeq
