#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "probeq/ec3.hpp"

namespace probeq {

using Complex = std::complex<double>;

// The simulated system is (n+2) qubits: one probe, one ancilla and the n
// register bits. Qubit significance order (most to least): probe, ancilla,
// z1, ..., zn. A full basis index therefore splits as
//   probe = index >> (n+1),  ancilla = (index >> n) & 1,  z = index & (2^n-1).

inline std::int64_t register_dim(int n) { return std::int64_t{1} << (n + 1); }
inline std::int64_t full_dim(int n) { return std::int64_t{1} << (n + 2); }

/// Normalized complex amplitude vector over the (n+2)-qubit basis.
struct QuantumState {
    int num_bits = 0; // n
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

/// Diagonal of the register Hamiltonian: -1 on the ancilla-0 block, the
/// problem-energy diagonal on the ancilla-1 block. Length 2^(n+1).
struct HtildeDiagonal {
    int num_bits = 0;
    Eigen::VectorXd values;
};

struct HamiltonianParams {
    double omega = 1.0;    // probe frequency (hbar = 1)
    double coupling = 0.002;
    int num_bits = 0;
    HtildeDiagonal htilde;
};

HtildeDiagonal build_htilde(const EC3Instance& inst);
HamiltonianParams make_hamiltonian_params(const EC3Instance& inst, double omega,
                                          double coupling);

/// Probe energy of a full basis index. The probe's excited state |1> carries
/// +omega/2 and its ground state |0> carries -omega/2, so that the decay
/// |1>|ref> -> |0>|target> conserves energy at omega = E_target - E_ref.
inline double probe_energy(double omega, std::int64_t index, int n) {
    const bool excited = (index >> (n + 1)) & 1;
    return excited ? 0.5 * omega : -0.5 * omega;
}

/// Apply the excitation operator A to a register-space vector (length
/// 2^(n+1)). A is the rank-2 operator 2^(n/2) * sigma_x(ancilla) (x) P+^n
/// with P+ the projector onto |+>: for each ancilla value the output block
/// is constant, equal to 2^(-n/2) times the sum of the opposite block.
Eigen::VectorXcd apply_excitation(const Eigen::VectorXcd& reg);

/// H psi for the full probe-coupled Hamiltonian (un-normalized result).
Eigen::VectorXcd apply_full_h(const HamiltonianParams& p,
                              const Eigen::VectorXcd& psi);

/// Probe in |1>, ancilla in |0>, register in the uniform superposition:
/// amplitude 2^(-n/2) on the 2^n basis states with probe = 1, ancilla = 0.
QuantumState prepare_reference(int n);

/// Total probability of finding the probe in |0>.
double decay_probability(const QuantumState& state);

} // namespace probeq
