#include "probeq/operators.hpp"

#include <cmath>

#include "probeq/errors.hpp"

namespace probeq {

HtildeDiagonal build_htilde(const EC3Instance& inst) {
    const auto hp = build_hp_diagonal(inst);
    const std::int64_t block = std::int64_t{1} << inst.n;

    HtildeDiagonal h;
    h.num_bits = inst.n;
    h.values.resize(2 * block);
    h.values.head(block).setConstant(-1.0);
    for (std::int64_t z = 0; z < block; ++z)
        h.values[block + z] = static_cast<double>(hp[static_cast<std::size_t>(z)]);
    return h;
}

HamiltonianParams make_hamiltonian_params(const EC3Instance& inst, double omega,
                                          double coupling) {
    if (omega <= 0.0)
        throw InvalidArgument("probe frequency must be positive");
    if (coupling <= 0.0)
        throw InvalidArgument("coupling strength must be positive");
    HamiltonianParams p;
    p.omega = omega;
    p.coupling = coupling;
    p.num_bits = inst.n;
    p.htilde = build_htilde(inst);
    return p;
}

Eigen::VectorXcd apply_excitation(const Eigen::VectorXcd& reg) {
    const std::int64_t len = reg.size();
    if (len < 8 || (len & (len - 1)) != 0)
        throw InvalidArgument("register vector length must be a power of two >= 8");
    const std::int64_t block = len / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(block));

    const Complex s0 = scale * reg.head(block).sum(); // ancilla-0 block
    const Complex s1 = scale * reg.tail(block).sum(); // ancilla-1 block

    Eigen::VectorXcd out(len);
    out.head(block).setConstant(s1);
    out.tail(block).setConstant(s0);
    return out;
}

Eigen::VectorXcd apply_full_h(const HamiltonianParams& p,
                              const Eigen::VectorXcd& psi) {
    const int n = p.num_bits;
    const std::int64_t half = register_dim(n);
    const std::int64_t quarter = half / 2;
    if (psi.size() != full_dim(n))
        throw InvalidArgument("state length does not match the Hamiltonian dimension");

    Eigen::VectorXcd out(psi.size());

    // Diagonal part: probe energy plus the register diagonal.
    for (std::int64_t i = 0; i < psi.size(); ++i)
        out[i] = (probe_energy(p.omega, i, n) + p.htilde.values[i & (half - 1)]) * psi[i];

    // Coupling c * sigma_x(probe) (x) A. Both the probe and the ancilla flip;
    // the excitation operator is rank 2, so four block sums suffice.
    const double scale = 1.0 / std::sqrt(static_cast<double>(quarter));
    Complex s[2][2];
    for (int probe = 0; probe < 2; ++probe)
        for (int anc = 0; anc < 2; ++anc)
            s[probe][anc] =
                scale * psi.segment(probe * half + anc * quarter, quarter).sum();

    for (int probe = 0; probe < 2; ++probe)
        for (int anc = 0; anc < 2; ++anc) {
            const Complex add = p.coupling * s[1 - probe][1 - anc];
            out.segment(probe * half + anc * quarter, quarter).array() += add;
        }
    return out;
}

QuantumState prepare_reference(int n) {
    if (n < 3)
        throw InvalidArgument("register size must be at least 3");
    if (n > kMaxBruteForceBits)
        throw ResourceError("register size exceeds the simulator cap");

    QuantumState state;
    state.num_bits = n;
    state.amplitudes = Eigen::VectorXcd::Zero(full_dim(n));

    const std::int64_t half = register_dim(n);
    const std::int64_t quarter = half / 2;
    const double amp = 1.0 / std::sqrt(static_cast<double>(quarter));
    // probe = 1, ancilla = 0: indices [half, half + 2^n).
    state.amplitudes.segment(half, quarter).setConstant(amp);
    return state;
}

double decay_probability(const QuantumState& state) {
    const std::int64_t half = register_dim(state.num_bits);
    return state.amplitudes.head(half).squaredNorm();
}

} // namespace probeq
