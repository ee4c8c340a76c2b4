#include "probeq/evolution.hpp"

#include <cmath>
#include <vector>

#include "probeq/errors.hpp"

namespace probeq {

namespace {

constexpr Complex kImag{0.0, 1.0};

void check_state(const HamiltonianParams& params, const QuantumState& psi) {
    if (psi.num_bits != params.num_bits || psi.amplitudes.size() != full_dim(params.num_bits))
        throw InvalidArgument("state does not match the Hamiltonian dimension");
}

double diagonal_entry(const HamiltonianParams& p, std::int64_t index) {
    const std::int64_t half = register_dim(p.num_bits);
    return probe_energy(p.omega, index, p.num_bits) + p.htilde.values[index & (half - 1)];
}

// In-place Hadamard on every qubit of a length-2^nq vector.
void hadamard_all(Eigen::VectorXcd& v, int nq) {
    const double inv = 1.0 / std::sqrt(2.0);
    const std::int64_t size = v.size();
    for (int q = 0; q < nq; ++q) {
        const std::int64_t stride = std::int64_t{1} << q;
        for (std::int64_t base = 0; base < size; base += 2 * stride) {
            for (std::int64_t off = 0; off < stride; ++off) {
                const Complex x = v[base + off];
                const Complex y = v[base + off + stride];
                v[base + off] = (x + y) * inv;
                v[base + off + stride] = (x - y) * inv;
            }
        }
    }
}

double norm_bound(const HamiltonianParams& p) {
    const double diag =
        0.5 * p.omega + std::max(1.0, p.htilde.values.maxCoeff());
    const double coupling =
        p.coupling * std::sqrt(static_cast<double>(std::int64_t{1} << p.num_bits));
    return diag + coupling;
}

void coupling_step_inplace(const HamiltonianParams& p, Eigen::VectorXcd& v, double dt) {
    const int n = p.num_bits;
    const std::int64_t half = register_dim(n);
    const std::int64_t quarter = half / 2;
    const double theta =
        p.coupling * std::sqrt(static_cast<double>(quarter)) * dt;

    hadamard_all(v, n + 2);
    // In the rotated frame the generator is a sigma_z (x) sigma_z phase on
    // the probe and ancilla, supported on register bits all zero. The sign
    // is the probe/ancilla parity.
    const Complex even = std::exp(-kImag * theta);
    const Complex odd = std::exp(kImag * theta);
    v[0] *= even;              // probe 0, ancilla 0
    v[quarter] *= odd;         // probe 0, ancilla 1
    v[half] *= odd;            // probe 1, ancilla 0
    v[half + quarter] *= even; // probe 1, ancilla 1
    hadamard_all(v, n + 2);
}

} // namespace

ExactPropagator::ExactPropagator(const HamiltonianParams& params)
    : num_bits_(params.num_bits) {
    const std::int64_t dim = full_dim(num_bits_);
    if (dim > kDenseDimensionCap)
        throw ResourceError("dense propagator limited to dimension " +
                            std::to_string(kDenseDimensionCap) +
                            "; use the Krylov method instead");

    const std::int64_t half = register_dim(num_bits_);
    const std::int64_t quarter = half / 2;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::int64_t i = 0; i < dim; ++i)
        h(i, i) = diagonal_entry(params, i);

    // Coupling blocks: constant c * 2^(-n/2) wherever both the probe and the
    // ancilla bit differ.
    const double entry =
        params.coupling / std::sqrt(static_cast<double>(quarter));
    for (int probe = 0; probe < 2; ++probe)
        for (int anc = 0; anc < 2; ++anc) {
            const std::int64_t row = probe * half + anc * quarter;
            const std::int64_t col = (1 - probe) * half + (1 - anc) * quarter;
            h.block(row, col, quarter, quarter).array() += entry;
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigendecomposition of the Hamiltonian failed");
    basis_ = solver.eigenvectors();
    energies_ = solver.eigenvalues();
}

QuantumState ExactPropagator::apply(const QuantumState& psi, double tau) const {
    if (psi.num_bits != num_bits_)
        throw InvalidArgument("state does not match the propagator dimension");
    const Eigen::VectorXd re = basis_.transpose() * psi.amplitudes.real();
    const Eigen::VectorXd im = basis_.transpose() * psi.amplitudes.imag();

    const std::int64_t dim = energies_.size();
    Eigen::VectorXd out_re(dim), out_im(dim);
    for (std::int64_t k = 0; k < dim; ++k) {
        const double c = std::cos(energies_[k] * tau);
        const double s = std::sin(energies_[k] * tau);
        // (re + i im) * exp(-i E tau)
        out_re[k] = re[k] * c + im[k] * s;
        out_im[k] = im[k] * c - re[k] * s;
    }

    QuantumState result;
    result.num_bits = num_bits_;
    result.amplitudes.resize(dim);
    result.amplitudes.real() = basis_ * out_re;
    result.amplitudes.imag() = basis_ * out_im;
    return result;
}

QuantumState propagate_exact(const HamiltonianParams& params,
                             const QuantumState& psi, double tau) {
    check_state(params, psi);
    if (tau < 0.0)
        throw InvalidArgument("evolution time must be non-negative");
    if (full_dim(params.num_bits) <= kDenseDimensionCap)
        return ExactPropagator(params).apply(psi, tau);
    return propagate_krylov(params, psi, tau, 32, 1e-10);
}

QuantumState propagate_krylov(const HamiltonianParams& params,
                              const QuantumState& psi, double tau,
                              int krylov_dim, double tolerance) {
    check_state(params, psi);
    if (tau < 0.0)
        throw InvalidArgument("evolution time must be non-negative");
    if (krylov_dim < 2)
        throw InvalidArgument("Krylov dimension must be at least 2");
    if (!(tolerance > 0.0 && tolerance < 1.0))
        throw InvalidArgument("tolerance must lie in (0, 1)");

    QuantumState state = psi;
    if (tau == 0.0)
        return state;

    const std::int64_t dim = state.amplitudes.size();
    const int m = static_cast<int>(std::min<std::int64_t>(krylov_dim, dim));

    // Spectral-radius bound: diagonal range plus the coupling norm c*2^(n/2).
    const double hnorm = norm_bound(params);

    std::vector<Eigen::VectorXcd> basis(static_cast<std::size_t>(m) + 1);
    Eigen::VectorXd alpha(m), beta(m);

    double remaining = tau;
    double dt = std::min(remaining, static_cast<double>(m) / (2.0 * hnorm));

    while (remaining > 0.0) {
        dt = std::min(dt, remaining);

        const double start_norm = state.amplitudes.norm();
        if (start_norm == 0.0)
            throw NumericError("cannot propagate the zero vector");
        basis[0] = state.amplitudes / start_norm;

        int kdim = m;
        bool invariant = false;
        for (int k = 0; k < m; ++k) {
            Eigen::VectorXcd w = apply_full_h(params, basis[static_cast<std::size_t>(k)]);
            if (k > 0)
                w -= beta[k - 1] * basis[static_cast<std::size_t>(k) - 1];
            alpha[k] = basis[static_cast<std::size_t>(k)].dot(w).real();
            w -= alpha[k] * basis[static_cast<std::size_t>(k)];
            // Full reorthogonalization keeps the basis clean over long runs.
            for (int j = 0; j <= k; ++j)
                w -= basis[static_cast<std::size_t>(j)].dot(w) *
                     basis[static_cast<std::size_t>(j)];
            beta[k] = w.norm();
            if (beta[k] < 1e-12 * hnorm) {
                kdim = k + 1;
                invariant = true;
                break;
            }
            basis[static_cast<std::size_t>(k) + 1] = w / beta[k];
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(kdim, kdim);
        for (int k = 0; k < kdim; ++k) {
            tri(k, k) = alpha[k];
            if (k + 1 < kdim) {
                tri(k, k + 1) = beta[k];
                tri(k + 1, k) = beta[k];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);

        // Shrink dt until the residual estimate passes; the basis stays valid.
        Eigen::VectorXcd reduced;
        int attempts = 0;
        for (;; ++attempts) {
            if (attempts > 60)
                throw NumericError("Krylov exponential did not reach the requested "
                                   "tolerance; smallest step " + std::to_string(dt));
            const Eigen::VectorXd weights = small.eigenvectors().row(0).transpose();
            reduced.resize(kdim);
            for (int k = 0; k < kdim; ++k) {
                Complex acc = 0.0;
                for (int j = 0; j < kdim; ++j)
                    acc += small.eigenvectors()(k, j) * weights[j] *
                           std::exp(-kImag * small.eigenvalues()[j] * dt);
                reduced[k] = acc;
            }
            const double err =
                invariant ? 0.0 : beta[kdim - 1] * std::abs(reduced[kdim - 1]) * dt;
            if (err <= tolerance)
                break;
            dt *= 0.5;
        }

        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim);
        for (int k = 0; k < kdim; ++k)
            next += reduced[k] * basis[static_cast<std::size_t>(k)];
        // The evolution is unitary; project the tiny truncation error away.
        state.amplitudes = next * (start_norm / next.norm());

        remaining -= dt;
        if (attempts == 0)
            dt *= 1.5;
    }
    return state;
}

QuantumState propagate_trotter(const HamiltonianParams& params,
                               const QuantumState& psi, double tau, int steps) {
    check_state(params, psi);
    if (tau < 0.0)
        throw InvalidArgument("evolution time must be non-negative");
    if (steps < 1)
        throw InvalidArgument("step count must be at least 1");

    const double dt = tau / steps;
    const std::int64_t dim = full_dim(params.num_bits);
    Eigen::VectorXcd phases(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        phases[i] = std::exp(-kImag * diagonal_entry(params, i) * dt);

    QuantumState state = psi;
    for (int l = 0; l < steps; ++l) {
        state.amplitudes.array() *= phases.array();
        coupling_step_inplace(params, state.amplitudes, dt);
    }
    return state;
}

TrotterRun propagate_trotter_auto(const HamiltonianParams& params,
                                  const QuantumState& psi, double tau) {
    constexpr int kStartSteps = 64;
    constexpr int kMaxSteps = 1 << 22;
    constexpr double kDecayTolerance = 1e-3;

    QuantumState prev = propagate_trotter(params, psi, tau, kStartSteps);
    double prev_decay = decay_probability(prev);
    for (int steps = 2 * kStartSteps; steps <= kMaxSteps; steps *= 2) {
        QuantumState cur = propagate_trotter(params, psi, tau, steps);
        const double cur_decay = decay_probability(cur);
        if (std::abs(cur_decay - prev_decay) < kDecayTolerance)
            return TrotterRun{std::move(cur), steps};
        prev = std::move(cur);
        prev_decay = cur_decay;
    }
    throw NumericError("Trotter step doubling did not stabilize the decay "
                       "probability below " + std::to_string(kDecayTolerance));
}

QuantumState diagonal_step(const HamiltonianParams& params,
                           const QuantumState& psi, double dt) {
    check_state(params, psi);
    QuantumState state = psi;
    for (std::int64_t i = 0; i < state.amplitudes.size(); ++i)
        state.amplitudes[i] *= std::exp(-kImag * diagonal_entry(params, i) * dt);
    return state;
}

QuantumState coupling_step(const HamiltonianParams& params,
                           const QuantumState& psi, double dt) {
    check_state(params, psi);
    QuantumState state = psi;
    coupling_step_inplace(params, state.amplitudes, dt);
    return state;
}

QuantumState coupling_step_direct(const HamiltonianParams& params,
                                  const QuantumState& psi, double dt) {
    check_state(params, psi);
    const int n = params.num_bits;
    const std::int64_t half = register_dim(n);
    const std::int64_t quarter = half / 2;
    const double root = std::sqrt(static_cast<double>(quarter));
    const double theta = params.coupling * root * dt;

    QuantumState state = psi;
    // Component of each (probe, ancilla) block along the uniform register
    // superposition; the generator acts only there and swaps both bits.
    Complex s[2][2];
    for (int probe = 0; probe < 2; ++probe)
        for (int anc = 0; anc < 2; ++anc)
            s[probe][anc] =
                state.amplitudes.segment(probe * half + anc * quarter, quarter).sum() /
                root;

    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    for (int probe = 0; probe < 2; ++probe)
        for (int anc = 0; anc < 2; ++anc) {
            const Complex rotated = c * s[probe][anc] - kImag * sn * s[1 - probe][1 - anc];
            const Complex delta = (rotated - s[probe][anc]) / root;
            state.amplitudes.segment(probe * half + anc * quarter, quarter).array() +=
                delta;
        }
    return state;
}

} // namespace probeq
