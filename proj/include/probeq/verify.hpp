#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "probeq/operators.hpp"

namespace probeq {

/// Dense comparisons are capped at this register size.
inline constexpr int kMaxVerifyBits = 6;

struct VerifyOptions {
    int num_bits = 4;
    std::uint64_t seed = 7;
    // Negative-control hook: flips the coupling sign in one probe-flip
    // direction, which must make the Hermiticity check fail.
    bool corrupt_coupling_sign = false;
};

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double deviation = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    int failures() const;
    std::string text() const;
};

/// Cross-checks the matrix-free operators against independently assembled
/// dense forms on a seeded random instance. Throws ResourceError when
/// num_bits exceeds kMaxVerifyBits.
VerifyReport run_verification(const VerifyOptions& opts);
VerifyReport run_verification(const EC3Instance& inst, const VerifyOptions& opts);

/// Uniformly random instance with distinct indices per clause.
EC3Instance random_instance(int n, int num_clauses, std::uint64_t seed);

// Dense oracles, assembled independently of the matrix-free paths.

/// Excitation operator as the normalized sum of all 2^n probe/register
/// flip patterns (one term per subset of register bits).
Eigen::MatrixXd dense_excitation_sum(int n);

/// Excitation operator as the tensor form sigma_x (x) [(I+sigma_x)/sqrt(2)]^n.
Eigen::MatrixXd dense_excitation_tensor(int n);

/// Full Hamiltonian from Kronecker products of the three terms.
Eigen::MatrixXcd dense_full_hamiltonian(const HamiltonianParams& params,
                                        bool corrupt_coupling_sign = false);

/// exp(-i t h) for Hermitian h, via full eigendecomposition.
Eigen::MatrixXcd dense_expm_hermitian(const Eigen::MatrixXcd& h, double t);

} // namespace probeq
