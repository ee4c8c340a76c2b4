#pragma once

#include <Eigen/Dense>

#include "probeq/operators.hpp"

namespace probeq {

enum class PropagatorMethod { ExactEig, ExactKrylov, Trotter };

struct PropagatorSpec {
    PropagatorMethod method = PropagatorMethod::ExactEig;
    int trotter_steps = 0; // 0 = auto-select by doubling
    int krylov_dim = 32;
    double tolerance = 1e-10; // local error per Krylov restart
};

/// Dimension at which the exact propagator switches from a dense
/// eigendecomposition to a restarted Krylov exponential.
inline constexpr std::int64_t kDenseDimensionCap = 4096;

/// Dense eigendecomposition of the full Hamiltonian, built once and reused
/// across evolution times (the matrix is real symmetric in this basis).
class ExactPropagator {
  public:
    explicit ExactPropagator(const HamiltonianParams& params);

    QuantumState apply(const QuantumState& psi, double tau) const;

    const Eigen::VectorXd& energies() const { return energies_; }

  private:
    int num_bits_;
    Eigen::MatrixXd basis_;    // orthonormal eigenvectors, one per column
    Eigen::VectorXd energies_;
};

/// exp(-i H tau) psi. Dense eigendecomposition up to kDenseDimensionCap,
/// restarted Krylov above it.
QuantumState propagate_exact(const HamiltonianParams& params,
                             const QuantumState& psi, double tau);

/// Krylov-subspace exponential with full reorthogonalization; the step size
/// is halved until the local error estimate drops below tolerance.
QuantumState propagate_krylov(const HamiltonianParams& params,
                              const QuantumState& psi, double tau,
                              int krylov_dim, double tolerance);

/// L repetitions of diagonal_step(tau/L) followed by coupling_step(tau/L).
QuantumState propagate_trotter(const HamiltonianParams& params,
                               const QuantumState& psi, double tau, int steps);

struct TrotterRun {
    QuantumState state;
    int steps = 0;
};

/// Doubles the step count until the decay probability moves by less than
/// 1e-3 between L and 2L, and returns the run at the accepted count.
TrotterRun propagate_trotter_auto(const HamiltonianParams& params,
                                  const QuantumState& psi, double tau);

/// Phase multiplication by the diagonal part (probe energy + register
/// diagonal) for time dt.
QuantumState diagonal_step(const HamiltonianParams& params,
                           const QuantumState& psi, double dt);

/// Coupling exponential implemented as a circuit: Hadamards on every qubit
/// conjugate the generator into a conditional phase on the four basis
/// states whose rotated register bits are all zero.
QuantumState coupling_step(const HamiltonianParams& params,
                           const QuantumState& psi, double dt);

/// Same unitary evaluated directly from the rank-2 structure of the
/// excitation operator; kept as an independent cross-check path.
QuantumState coupling_step_direct(const HamiltonianParams& params,
                                  const QuantumState& psi, double dt);

/// Rough elementary-gate count for one Trotter step on hardware: the two
/// multi-controlled phases dominate at O(n^2).
inline std::int64_t estimated_gates_per_trotter_step(int n) {
    return 4 * (n + 2) + 2 * std::int64_t(n + 1) * (n + 1);
}

} // namespace probeq
