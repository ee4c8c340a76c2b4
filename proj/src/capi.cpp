#include "probeq.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "probeq/ec3.hpp"
#include "probeq/errors.hpp"
#include "probeq/experiment.hpp"
#include "probeq/verify.hpp"

struct pq_instance {
    probeq::EC3Instance inst;
};

struct pq_spectrum {
    probeq::SpectrumSummary summary;
};

struct pq_result {
    probeq::EC3Instance inst;
    probeq::SimulationParams params;
    bool is_solve = false;
    bool satisfiable = false;
    probeq::DecayResult decay;
    std::vector<probeq::Assignment> solutions;
    probeq::SolveOutcome solve;
};

struct pq_table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> values; // row-major
    std::string csv;
    std::optional<double> first_resonant;
    std::vector<std::string> resonant_assignments;
};

namespace {

thread_local std::string g_last_error;

template <class F>
pq_status guarded(F&& fn) {
    try {
        fn();
        return PQ_OK;
    } catch (const probeq::ParseError& e) {
        g_last_error = e.what();
        return PQ_ERR_PARSE;
    } catch (const probeq::InvalidArgument& e) {
        g_last_error = e.what();
        return PQ_ERR_INVALID_ARGUMENT;
    } catch (const probeq::ResourceError& e) {
        g_last_error = e.what();
        return PQ_ERR_RESOURCE;
    } catch (const probeq::IoError& e) {
        g_last_error = e.what();
        return PQ_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PQ_ERR_NUMERIC;
    }
}

pq_status fail_invalid(const char* message) {
    g_last_error = message;
    return PQ_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

pq_status write_bits(const std::string& bits, char* buf, size_t bufsize) {
    if (!buf || bufsize < bits.size() + 1)
        return fail_invalid("output buffer too small for the bit string");
    std::memcpy(buf, bits.c_str(), bits.size() + 1);
    return PQ_OK;
}

probeq::SimulationParams to_simulation_params(const pq_run_params& p) {
    probeq::SimulationParams sp;
    sp.omega = p.omega;
    sp.coupling = p.coupling;
    sp.tau = p.tau;
    sp.solution_threshold = p.threshold;
    sp.shots = p.shots;
    sp.seed = p.seed;
    switch (p.method) {
    case PQ_METHOD_EXACT_EIG:
        sp.propagator.method = probeq::PropagatorMethod::ExactEig;
        break;
    case PQ_METHOD_EXACT_KRYLOV:
        sp.propagator.method = probeq::PropagatorMethod::ExactKrylov;
        break;
    case PQ_METHOD_TROTTER:
        sp.propagator.method = probeq::PropagatorMethod::Trotter;
        break;
    default:
        throw probeq::InvalidArgument("unknown propagator method");
    }
    sp.propagator.trotter_steps = p.trotter_steps;
    sp.propagator.krylov_dim = p.krylov_dim;
    sp.propagator.tolerance = p.tolerance;
    return sp;
}

} // namespace

const char* pq_last_error(void) { return g_last_error.c_str(); }

const char* pq_version(void) { return "0.1.0"; }

void pq_string_free(char* s) { std::free(s); }

pq_status pq_instance_parse(const char* json_text, pq_instance** out) {
    if (!json_text || !out)
        return fail_invalid("null argument");
    return guarded([&] {
        auto handle = std::make_unique<pq_instance>();
        handle->inst = probeq::parse_instance(json_text);
        *out = handle.release();
    });
}

pq_status pq_instance_load(const char* path, pq_instance** out) {
    if (!path || !out)
        return fail_invalid("null argument");
    return guarded([&] {
        auto handle = std::make_unique<pq_instance>();
        handle->inst = probeq::load_instance(path);
        *out = handle.release();
    });
}

void pq_instance_free(pq_instance* inst) { delete inst; }

int pq_instance_num_bits(const pq_instance* inst) {
    return inst ? inst->inst.n : 0;
}

int pq_instance_num_clauses(const pq_instance* inst) {
    return inst ? static_cast<int>(inst->inst.clauses.size()) : 0;
}

pq_status pq_spectrum_solve(const pq_instance* inst, pq_spectrum** out) {
    if (!inst || !out)
        return fail_invalid("null argument");
    return guarded([&] {
        auto handle = std::make_unique<pq_spectrum>();
        handle->summary = probeq::brute_force_solve(inst->inst);
        *out = handle.release();
    });
}

void pq_spectrum_free(pq_spectrum* s) { delete s; }

int pq_spectrum_min_energy(const pq_spectrum* s) {
    return s ? s->summary.min_energy : -1;
}

uint64_t pq_spectrum_degeneracy(const pq_spectrum* s, int energy) {
    if (!s)
        return 0;
    auto it = s->summary.degeneracies.find(energy);
    return it == s->summary.degeneracies.end() ? 0 : it->second;
}

size_t pq_spectrum_num_minimizers(const pq_spectrum* s) {
    return s ? s->summary.minimizers.size() : 0;
}

pq_status pq_spectrum_minimizer(const pq_spectrum* s, size_t i, char* buf,
                                size_t bufsize) {
    if (!s)
        return fail_invalid("null spectrum");
    if (i >= s->summary.minimizers.size())
        return fail_invalid("minimizer index out of range");
    return write_bits(s->summary.minimizers[i].to_string(), buf, bufsize);
}

pq_status pq_spectrum_to_json(const pq_instance* inst, const pq_spectrum* s,
                              char** out_json) {
    if (!inst || !s || !out_json)
        return fail_invalid("null argument");
    return guarded([&] {
        *out_json = dup_string(probeq::spectrum_json(inst->inst, s->summary));
    });
}

void pq_run_params_init(pq_run_params* params) {
    if (!params)
        return;
    params->omega = 1.0;
    params->coupling = 0.002;
    params->tau = 0.0;
    params->method = PQ_METHOD_EXACT_EIG;
    params->trotter_steps = 0;
    params->krylov_dim = 32;
    params->tolerance = 1e-10;
    params->threshold = 0.1;
    params->shots = 0;
    params->seed = 0;
}

pq_status pq_run(const pq_instance* inst, const pq_run_params* params,
                 pq_result** out) {
    if (!inst || !params || !out)
        return fail_invalid("null argument");
    return guarded([&] {
        auto handle = std::make_unique<pq_result>();
        handle->inst = inst->inst;
        handle->params = to_simulation_params(*params);
        handle->decay = probeq::run_algorithm(inst->inst, handle->params);
        handle->solutions = probeq::extract_solutions(inst->inst, handle->decay,
                                                      handle->params.solution_threshold);
        handle->satisfiable =
            probeq::brute_force_solve(inst->inst).satisfiable();
        *out = handle.release();
    });
}

pq_status pq_solve(const pq_instance* inst, const pq_run_params* params,
                   pq_result** out) {
    if (!inst || !params || !out)
        return fail_invalid("null argument");
    return guarded([&] {
        auto handle = std::make_unique<pq_result>();
        handle->inst = inst->inst;
        handle->params = to_simulation_params(*params);
        handle->is_solve = true;
        handle->solve = probeq::solve_instance(inst->inst, handle->params);
        handle->satisfiable = handle->solve.satisfiable;
        handle->solutions = handle->solve.solutions;
        handle->decay = handle->solve.result;
        *out = handle.release();
    });
}

void pq_result_free(pq_result* r) { delete r; }

double pq_result_p_decay(const pq_result* r) {
    return r ? r->decay.p_decay : 0.0;
}

int pq_result_satisfiable(const pq_result* r) {
    return r && r->satisfiable ? 1 : 0;
}

int pq_result_chosen_steps(const pq_result* r) {
    return r && r->decay.chosen_steps ? *r->decay.chosen_steps : -1;
}

size_t pq_result_num_solutions(const pq_result* r) {
    return r ? r->solutions.size() : 0;
}

pq_status pq_result_solution(const pq_result* r, size_t i, char* buf,
                             size_t bufsize) {
    if (!r)
        return fail_invalid("null result");
    if (i >= r->solutions.size())
        return fail_invalid("solution index out of range");
    return write_bits(r->solutions[i].to_string(), buf, bufsize);
}

pq_status pq_result_to_json(const pq_result* r, char** out_json) {
    if (!r || !out_json)
        return fail_invalid("null argument");
    return guarded([&] {
        const std::string json =
            r->is_solve
                ? probeq::solve_result_json(r->inst, r->params, r->solve)
                : probeq::run_result_json(r->inst, r->params, r->decay, r->solutions);
        *out_json = dup_string(json);
    });
}

pq_status pq_sweep_tau(const pq_instance* inst, const pq_run_params* params,
                       const double* taus, size_t count, pq_table** out) {
    if (!inst || !params || !taus || !out)
        return fail_invalid("null argument");
    return guarded([&] {
        const auto sp = to_simulation_params(*params);
        const std::vector<double> grid(taus, taus + count);
        const auto rows = probeq::sweep_tau(inst->inst, sp, grid);

        auto table = std::make_unique<pq_table>();
        table->columns = {"tau", "p_decay", "p_analytic", "abs_err"};
        table->values.reserve(rows.size());
        for (const auto& row : rows)
            table->values.push_back({row.tau, row.p_decay, row.p_analytic, row.abs_err});
        table->csv = probeq::tau_sweep_csv(rows);
        *out = table.release();
    });
}

pq_status pq_sweep_omega(const pq_instance* inst, const pq_run_params* params,
                         const double* omegas, size_t count, double fixed_tau,
                         pq_table** out) {
    if (!inst || !params || !omegas || !out)
        return fail_invalid("null argument");
    return guarded([&] {
        const auto sp = to_simulation_params(*params);
        const std::vector<double> grid(omegas, omegas + count);
        std::optional<double> tau;
        if (fixed_tau > 0.0)
            tau = fixed_tau;
        const auto result = probeq::sweep_omega(inst->inst, sp, grid, tau);

        auto table = std::make_unique<pq_table>();
        table->columns = {"omega", "p_decay", "best_tau"};
        table->values.reserve(result.rows.size());
        for (const auto& row : result.rows)
            table->values.push_back({row.omega, row.p_decay, row.best_tau});
        table->csv = probeq::omega_sweep_csv(result);
        table->first_resonant = result.first_resonant_omega;
        for (const auto& a : result.resonant_assignments)
            table->resonant_assignments.push_back(a.to_string());
        *out = table.release();
    });
}

void pq_table_free(pq_table* t) { delete t; }

size_t pq_table_rows(const pq_table* t) { return t ? t->values.size() : 0; }

size_t pq_table_cols(const pq_table* t) { return t ? t->columns.size() : 0; }

const char* pq_table_column_name(const pq_table* t, size_t col) {
    if (!t || col >= t->columns.size())
        return nullptr;
    return t->columns[col].c_str();
}

double pq_table_value(const pq_table* t, size_t row, size_t col) {
    if (!t || row >= t->values.size() || col >= t->values[row].size())
        return 0.0;
    return t->values[row][col];
}

pq_status pq_table_to_csv(const pq_table* t, char** out_csv) {
    if (!t || !out_csv)
        return fail_invalid("null argument");
    *out_csv = dup_string(t->csv);
    return PQ_OK;
}

int pq_table_first_resonant_omega(const pq_table* t, double* omega_out) {
    if (!t || !t->first_resonant)
        return 0;
    if (omega_out)
        *omega_out = *t->first_resonant;
    return 1;
}

size_t pq_table_num_resonant_assignments(const pq_table* t) {
    return t ? t->resonant_assignments.size() : 0;
}

pq_status pq_table_resonant_assignment(const pq_table* t, size_t i, char* buf,
                                       size_t bufsize) {
    if (!t)
        return fail_invalid("null table");
    if (i >= t->resonant_assignments.size())
        return fail_invalid("assignment index out of range");
    return write_bits(t->resonant_assignments[i], buf, bufsize);
}

void pq_verify_params_init(pq_verify_params* params) {
    if (!params)
        return;
    params->num_bits = 4;
    params->seed = 7;
    params->corrupt_sign_hook = 0;
}

pq_status pq_verify(const pq_verify_params* params, char** report_out,
                    int* checks_failed) {
    if (!params || !report_out || !checks_failed)
        return fail_invalid("null argument");
    return guarded([&] {
        probeq::VerifyOptions opts;
        opts.num_bits = params->num_bits;
        opts.seed = params->seed;
        opts.corrupt_coupling_sign = params->corrupt_sign_hook != 0;
        const probeq::VerifyReport report = probeq::run_verification(opts);
        *report_out = dup_string(report.text());
        *checks_failed = report.failures();
    });
}
