#include "probeq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "probeq/errors.hpp"
#include "probeq/evolution.hpp"

namespace probeq {

namespace {

constexpr Complex kImag{0.0, 1.0};

Eigen::Matrix2d pauli_x() {
    Eigen::Matrix2d m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::VectorXcd random_state(std::int64_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        v[i] = Complex(gauss(rng), gauss(rng));
    return v / v.norm();
}

// Coupling matvec with an optional one-sided sign flip (non-Hermitian on
// purpose; used as the negative control).
Eigen::VectorXcd apply_h_maybe_corrupt(const HamiltonianParams& p,
                                       const Eigen::VectorXcd& psi,
                                       bool corrupt) {
    if (!corrupt)
        return apply_full_h(p, psi);
    const int n = p.num_bits;
    const std::int64_t half = register_dim(n);
    const std::int64_t quarter = half / 2;

    Eigen::VectorXcd out(psi.size());
    for (std::int64_t i = 0; i < psi.size(); ++i)
        out[i] = (probe_energy(p.omega, i, n) + p.htilde.values[i & (half - 1)]) * psi[i];

    const double scale = 1.0 / std::sqrt(static_cast<double>(quarter));
    Complex s[2][2];
    for (int probe = 0; probe < 2; ++probe)
        for (int anc = 0; anc < 2; ++anc)
            s[probe][anc] =
                scale * psi.segment(probe * half + anc * quarter, quarter).sum();
    for (int probe = 0; probe < 2; ++probe)
        for (int anc = 0; anc < 2; ++anc) {
            const double sign = probe == 0 ? 1.0 : -1.0;
            out.segment(probe * half + anc * quarter, quarter).array() +=
                sign * p.coupling * s[1 - probe][1 - anc];
        }
    return out;
}

} // namespace

int VerifyReport::failures() const {
    int n = 0;
    for (const auto& c : checks)
        n += c.passed ? 0 : 1;
    return n;
}

std::string VerifyReport::text() const {
    std::string out;
    char buf[160];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%s %s: deviation %.3g (tolerance %.3g)",
                      c.passed ? "[PASS]" : "[FAIL]", c.name.c_str(),
                      c.deviation, c.tolerance);
        out += buf;
        if (!c.detail.empty()) {
            out += " [";
            out += c.detail;
            out += ']';
        }
        out += '\n';
    }
    return out;
}

EC3Instance random_instance(int n, int num_clauses, std::uint64_t seed) {
    if (n < 3)
        throw InvalidArgument("instances need at least 3 bits");
    if (num_clauses < 1)
        throw InvalidArgument("instances need at least one clause");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(1, n);

    EC3Instance inst;
    inst.n = n;
    for (int c = 0; c < num_clauses; ++c) {
        std::array<int, 3> triple{};
        triple[0] = pick(rng);
        do {
            triple[1] = pick(rng);
        } while (triple[1] == triple[0]);
        do {
            triple[2] = pick(rng);
        } while (triple[2] == triple[0] || triple[2] == triple[1]);
        std::sort(triple.begin(), triple.end());
        inst.clauses.push_back(triple);
    }
    return inst;
}

Eigen::MatrixXd dense_excitation_sum(int n) {
    const std::int64_t terms = std::int64_t{1} << n;
    const std::int64_t dim = std::int64_t{1} << (n + 1);
    const Eigen::Matrix2d sx = pauli_x();
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();

    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
    for (std::int64_t mask = 0; mask < terms; ++mask) {
        Eigen::MatrixXd term = sx; // ancilla flip, present in every term
        for (int p = 1; p <= n; ++p) {
            const bool flip = (mask >> (n - p)) & 1;
            term = Eigen::kroneckerProduct(term, flip ? sx : id).eval();
        }
        sum += term;
    }
    return sum / std::sqrt(static_cast<double>(terms));
}

Eigen::MatrixXd dense_excitation_tensor(int n) {
    const Eigen::Matrix2d sx = pauli_x();
    const Eigen::Matrix2d plus =
        (Eigen::Matrix2d::Identity() + sx) / std::sqrt(2.0);

    Eigen::MatrixXd out = sx;
    for (int p = 0; p < n; ++p)
        out = Eigen::kroneckerProduct(out, plus).eval();
    return out;
}

Eigen::MatrixXcd dense_full_hamiltonian(const HamiltonianParams& params,
                                        bool corrupt_coupling_sign) {
    const int n = params.num_bits;
    const std::int64_t half = register_dim(n);

    Eigen::Matrix2d probe = Eigen::Matrix2d::Zero();
    probe(0, 0) = -0.5 * params.omega; // probe ground state |0>
    probe(1, 1) = 0.5 * params.omega;  // probe excited state |1>

    Eigen::MatrixXd h =
        Eigen::kroneckerProduct(probe, Eigen::MatrixXd::Identity(half, half));
    h += Eigen::kroneckerProduct(Eigen::Matrix2d::Identity(),
                                 Eigen::MatrixXd(params.htilde.values.asDiagonal()));

    Eigen::Matrix2d flip = pauli_x();
    if (corrupt_coupling_sign)
        flip(1, 0) = -1.0;
    h += params.coupling *
         Eigen::kroneckerProduct(flip, dense_excitation_tensor(n));
    return h.cast<Complex>();
}

Eigen::MatrixXcd dense_expm_hermitian(const Eigen::MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericError("dense eigendecomposition failed");
    Eigen::VectorXcd phases(h.rows());
    for (std::int64_t k = 0; k < h.rows(); ++k)
        phases[k] = std::exp(-kImag * solver.eigenvalues()[k] * t);
    return solver.eigenvectors() * phases.asDiagonal() *
           solver.eigenvectors().adjoint();
}

VerifyReport run_verification(const VerifyOptions& opts) {
    if (opts.num_bits > kMaxVerifyBits)
        throw ResourceError("dense verification is capped at " +
                            std::to_string(kMaxVerifyBits) + " register bits");
    const EC3Instance inst =
        random_instance(opts.num_bits, opts.num_bits, opts.seed);
    return run_verification(inst, opts);
}

VerifyReport run_verification(const EC3Instance& inst, const VerifyOptions& opts) {
    if (inst.n > kMaxVerifyBits)
        throw ResourceError("dense verification is capped at " +
                            std::to_string(kMaxVerifyBits) + " register bits");

    const int n = inst.n;
    const std::int64_t dim = full_dim(n);
    std::mt19937_64 rng(opts.seed);
    const HamiltonianParams params = make_hamiltonian_params(inst, 1.0, 0.002);

    VerifyReport report;
    auto record = [&report](std::string name, double dev, double tol,
                            std::string detail = {}) {
        report.checks.push_back(
            {std::move(name), dev <= tol, dev, tol, std::move(detail)});
    };

    // Excitation operator: per-term sum form against the tensor form.
    {
        const Eigen::MatrixXd sum = dense_excitation_sum(n);
        const Eigen::MatrixXd tensor = dense_excitation_tensor(n);
        record("excitation_sum_vs_tensor",
               (sum - tensor).cwiseAbs().maxCoeff(), 1e-12);
        record("excitation_hermitian",
               (tensor - tensor.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }

    // Matrix-free Hamiltonian against the Kronecker assembly, column by column.
    {
        const Eigen::MatrixXcd dense = dense_full_hamiltonian(params);
        double worst = 0.0;
        for (std::int64_t j = 0; j < dim; ++j) {
            Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
            basis[j] = 1.0;
            const Eigen::VectorXcd column = apply_full_h(params, basis);
            worst = std::max(worst, (column - dense.col(j)).cwiseAbs().maxCoeff());
        }
        record("hamiltonian_dense_vs_matrix_free", worst, 1e-12);
    }

    // Hermiticity through random inner products (honors the corruption hook).
    {
        double worst = 0.0;
        for (int trial = 0; trial < 8; ++trial) {
            const Eigen::VectorXcd u = random_state(dim, rng);
            const Eigen::VectorXcd v = random_state(dim, rng);
            const Complex uhv =
                u.dot(apply_h_maybe_corrupt(params, v, opts.corrupt_coupling_sign));
            const Complex vhu =
                v.dot(apply_h_maybe_corrupt(params, u, opts.corrupt_coupling_sign));
            worst = std::max(worst, std::abs(uhv - std::conj(vhu)));
        }
        record("hamiltonian_hermiticity", worst, 1e-9,
               opts.corrupt_coupling_sign ? "coupling-sign hook active" : "");
    }

    // Coupling step: circuit path against the dense exponential and the
    // direct rank-2 exponential.
    {
        const Eigen::MatrixXd coupling_real =
            params.coupling *
            Eigen::MatrixXd(Eigen::kroneckerProduct(pauli_x(), dense_excitation_tensor(n)));
        const Eigen::MatrixXcd coupling = coupling_real.cast<Complex>();
        std::uniform_real_distribution<double> dts(0.0, 1.0);
        double worst_dense = 0.0;
        double worst_direct = 0.0;
        for (int trial = 0; trial < 4; ++trial) {
            const double dt = dts(rng);
            QuantumState psi;
            psi.num_bits = n;
            psi.amplitudes = random_state(dim, rng);
            const QuantumState via_circuit = coupling_step(params, psi, dt);
            const QuantumState via_direct = coupling_step_direct(params, psi, dt);
            const Eigen::VectorXcd via_dense =
                dense_expm_hermitian(coupling, dt) * psi.amplitudes;
            worst_dense = std::max(
                worst_dense,
                (via_circuit.amplitudes - via_dense).cwiseAbs().maxCoeff());
            worst_direct = std::max(
                worst_direct,
                (via_circuit.amplitudes - via_direct.amplitudes).cwiseAbs().maxCoeff());
        }
        record("coupling_circuit_vs_dense_exponential", worst_dense, 1e-10);
        record("coupling_circuit_vs_direct_exponential", worst_direct, 1e-10);
    }

    // First-order step-count convergence, fitted on doubling step counts.
    {
        const double tau = 50.0;
        const QuantumState psi0 = prepare_reference(n);
        const Eigen::MatrixXcd dense = dense_full_hamiltonian(params);
        const Eigen::VectorXcd exact =
            dense_expm_hermitian(dense, tau) * psi0.amplitudes;

        std::vector<double> logl, loge;
        for (int steps = 64; steps <= 1024; steps *= 2) {
            const QuantumState approx = propagate_trotter(params, psi0, tau, steps);
            const double err = (approx.amplitudes - exact).cwiseAbs().maxCoeff();
            logl.push_back(std::log(static_cast<double>(steps)));
            loge.push_back(std::log(err));
        }
        const double k = static_cast<double>(logl.size());
        const double mx = std::accumulate(logl.begin(), logl.end(), 0.0) / k;
        const double my = std::accumulate(loge.begin(), loge.end(), 0.0) / k;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < logl.size(); ++i) {
            sxy += (logl[i] - mx) * (loge[i] - my);
            sxx += (logl[i] - mx) * (logl[i] - mx);
        }
        const double order = -sxy / sxx;
        char fitted[64];
        std::snprintf(fitted, sizeof fitted, "fitted order %.3f", order);
        record("trotter_convergence_order", std::abs(order - 1.0), 0.3, fitted);
    }

    // Unitarity over many composed steps.
    {
        const QuantumState psi0 = prepare_reference(n);
        const QuantumState evolved = propagate_trotter(params, psi0, 10.0, 10000);
        record("norm_preservation_1e4_steps", std::abs(evolved.norm() - 1.0), 1e-9);
    }

    return report;
}

} // namespace probeq
