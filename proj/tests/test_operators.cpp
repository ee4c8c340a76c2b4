#include <doctest.h>

#include <cmath>
#include <random>

#include "probeq/errors.hpp"
#include "probeq/operators.hpp"
#include "probeq/verify.hpp"

using namespace probeq;

namespace {

std::string fixture(const std::string& name) {
    return std::string(PROBEQ_FIXTURES_DIR) + "/" + name;
}

Eigen::VectorXcd random_vector(std::int64_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (std::int64_t i = 0; i < dim; ++i)
        v[i] = Complex(gauss(rng), gauss(rng));
    return v;
}

// Register-space vector |0>_ancilla (x) |+>^n.
Eigen::VectorXcd reference_register(int n) {
    const std::int64_t block = std::int64_t{1} << n;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * block);
    v.head(block).setConstant(1.0 / std::sqrt(static_cast<double>(block)));
    return v;
}

// Register-space vector |1>_ancilla (x) (sum of solution states)/sqrt(m).
Eigen::VectorXcd solution_register(const EC3Instance& inst) {
    const auto s = brute_force_solve(inst);
    REQUIRE(s.satisfiable());
    const std::int64_t block = std::int64_t{1} << inst.n;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * block);
    const double amp = 1.0 / std::sqrt(static_cast<double>(s.minimizers.size()));
    for (const auto& a : s.minimizers)
        v[block + static_cast<std::int64_t>(a.to_index())] = amp;
    return v;
}

} // namespace

TEST_CASE("build_htilde lays out the two blocks") {
    SUBCASE("single clause on 3 bits") {
        const EC3Instance inst = parse_instance(R"({"n":3,"clauses":[[1,2,3]]})");
        const HtildeDiagonal h = build_htilde(inst);
        REQUIRE(h.values.size() == 16);
        for (int i = 0; i < 8; ++i)
            CHECK(h.values[i] == -1.0);
        const double expected[8] = {1, 0, 0, 1, 0, 1, 1, 1};
        for (int i = 0; i < 8; ++i)
            CHECK(h.values[8 + i] == expected[i]);
    }
    SUBCASE("case i: the only zero of the upper block sits at the solution") {
        const EC3Instance inst = load_instance(fixture("case_i.json"));
        const HtildeDiagonal h = build_htilde(inst);
        REQUIRE(h.values.size() == 512);
        CHECK(h.values[256 + 23] == 0.0);
        for (int i = 0; i < 256; ++i)
            if (i != 23)
                CHECK(h.values[256 + i] > 0.0);
    }
    SUBCASE("upper-block minimum equals the brute-force minimum") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 3 + static_cast<int>(rng() % 5);
            const EC3Instance inst = random_instance(n, n, rng());
            const HtildeDiagonal h = build_htilde(inst);
            const std::int64_t block = std::int64_t{1} << n;
            CHECK(h.values.tail(block).minCoeff() ==
                  static_cast<double>(brute_force_solve(inst).min_energy));
        }
    }
}

TEST_CASE("apply_excitation is the rank-2 block action") {
    SUBCASE("uniform register state maps to the flipped-ancilla uniform state") {
        for (int n : {3, 4, 6}) {
            const std::int64_t block = std::int64_t{1} << n;
            const Eigen::VectorXcd in = reference_register(n);
            const Eigen::VectorXcd out = apply_excitation(in);
            const double gain = std::sqrt(static_cast<double>(block));
            for (std::int64_t i = 0; i < block; ++i) {
                CHECK(std::abs(out[i]) < 1e-14);
                CHECK(out[block + i].real() ==
                      doctest::Approx(gain / std::sqrt(static_cast<double>(block)))
                          .epsilon(1e-12));
            }
            CHECK(out.norm() == doctest::Approx(gain).epsilon(1e-12));
        }
    }
    SUBCASE("n = 2 basis state spreads to the uniform flipped block") {
        Eigen::VectorXcd in = Eigen::VectorXcd::Zero(8);
        in[0] = 1.0; // ancilla 0, register 00
        const Eigen::VectorXcd out = apply_excitation(in);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(out[i]) < 1e-15);
            CHECK(out[4 + i].real() == doctest::Approx(0.5));
        }
        CHECK(out.norm() == doctest::Approx(1.0));
    }
    SUBCASE("sum form, tensor form and the matrix-free action all agree") {
        for (int n : {2, 3, 4}) {
            const Eigen::MatrixXd sum = dense_excitation_sum(n);
            const Eigen::MatrixXd tensor = dense_excitation_tensor(n);
            CHECK((sum - tensor).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((tensor - tensor.transpose()).cwiseAbs().maxCoeff() < 1e-12);

            const std::int64_t dim = tensor.rows();
            for (std::int64_t j = 0; j < dim; ++j) {
                Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
                basis[j] = 1.0;
                const Eigen::VectorXcd column = apply_excitation(basis);
                CHECK((column - tensor.col(j).cast<Complex>()).cwiseAbs().maxCoeff() <
                      1e-12);
            }
        }
    }
    SUBCASE("rank-1 amplification factor up to n = 10") {
        for (int n = 3; n <= 10; ++n) {
            const Eigen::VectorXcd out = apply_excitation(reference_register(n));
            CHECK(out.norm() ==
                  doctest::Approx(std::pow(2.0, 0.5 * n)).epsilon(1e-12));
        }
    }
    SUBCASE("bad shapes are rejected") {
        CHECK_THROWS_AS(apply_excitation(Eigen::VectorXcd::Zero(12)),
                        InvalidArgument);
        CHECK_THROWS_AS(apply_excitation(Eigen::VectorXcd::Zero(4)),
                        InvalidArgument);
    }
}

TEST_CASE("matrix element of the excitation operator counts solutions") {
    // |<target|A|reference>| = sqrt(m) for the published instances.
    const struct {
        const char* file;
        double m;
    } cases[] = {{"case_i.json", 1.0}, {"case_ii.json", 2.0}, {"case_iii.json", 4.0}};
    for (const auto& c : cases) {
        const EC3Instance inst = load_instance(fixture(c.file));
        const Eigen::VectorXcd bra = solution_register(inst);
        const Eigen::VectorXcd ket = apply_excitation(reference_register(inst.n));
        CHECK(std::abs(bra.dot(ket)) ==
              doctest::Approx(std::sqrt(c.m)).epsilon(1e-10));
    }
}

TEST_CASE("apply_full_h") {
    std::mt19937_64 rng(31);

    SUBCASE("agrees with the dense assembly for small registers") {
        for (int n : {3, 4}) {
            const EC3Instance inst = random_instance(n, n, rng());
            const HamiltonianParams p = make_hamiltonian_params(inst, 1.0, 0.002);
            const Eigen::MatrixXcd dense = dense_full_hamiltonian(p);
            const std::int64_t dim = full_dim(n);
            for (std::int64_t j = 0; j < dim; ++j) {
                Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
                basis[j] = 1.0;
                CHECK((apply_full_h(p, basis) - dense.col(j)).cwiseAbs().maxCoeff() <
                      1e-12);
            }
        }
    }
    SUBCASE("is Hermitian under random inner products") {
        for (int n : {4, 6}) {
            const EC3Instance inst = random_instance(n, n + 2, rng());
            const HamiltonianParams p = make_hamiltonian_params(inst, 1.0, 0.01);
            const std::int64_t dim = full_dim(n);
            for (int trial = 0; trial < 5; ++trial) {
                const Eigen::VectorXcd u = random_vector(dim, rng);
                const Eigen::VectorXcd v = random_vector(dim, rng);
                const Complex uhv = u.dot(apply_full_h(p, v));
                const Complex vhu = v.dot(apply_full_h(p, u));
                CHECK(std::abs(uhv - std::conj(vhu)) < 1e-9);
            }
        }
    }
    SUBCASE("is linear") {
        const EC3Instance inst = random_instance(5, 5, rng());
        const HamiltonianParams p = make_hamiltonian_params(inst, 1.0, 0.002);
        const std::int64_t dim = full_dim(5);
        for (int trial = 0; trial < 5; ++trial) {
            const Eigen::VectorXcd u = random_vector(dim, rng);
            const Eigen::VectorXcd v = random_vector(dim, rng);
            const Complex a(0.3, -1.1), b(-0.7, 0.2);
            const Eigen::VectorXcd lhs = apply_full_h(p, a * u + b * v);
            const Eigen::VectorXcd rhs =
                a * apply_full_h(p, u) + b * apply_full_h(p, v);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("diagonal expectation of the prepared state at omega = 1") {
        const EC3Instance inst = load_instance(fixture("case_i.json"));
        const HamiltonianParams p = make_hamiltonian_params(inst, 1.0, 0.002);
        const QuantumState psi = prepare_reference(inst.n);
        // Probe term +1/2 plus reference-block eigenvalue -1; the coupling
        // expectation vanishes because the probe flips.
        const Complex e = psi.amplitudes.dot(apply_full_h(p, psi.amplitudes));
        CHECK(e.real() == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(std::abs(e.imag()) < 1e-14);
    }
}

TEST_CASE("prepare_reference") {
    SUBCASE("n = 3 layout") {
        const QuantumState psi = prepare_reference(3);
        REQUIRE(psi.amplitudes.size() == 32);
        const double amp = 1.0 / std::sqrt(8.0);
        int nonzero = 0;
        for (std::int64_t i = 0; i < 32; ++i) {
            const bool probe = (i >> 4) & 1;
            const bool ancilla = (i >> 3) & 1;
            if (probe && !ancilla) {
                CHECK(psi.amplitudes[i].real() == doctest::Approx(amp));
                ++nonzero;
            } else {
                CHECK(std::abs(psi.amplitudes[i]) == 0.0);
            }
        }
        CHECK(nonzero == 8);
        CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("register expectation of the block diagonal is -1 for any instance") {
        std::mt19937_64 rng(37);
        for (int trial = 0; trial < 5; ++trial) {
            const int n = 3 + static_cast<int>(rng() % 5);
            const EC3Instance inst = random_instance(n, 2 * n, rng());
            const HtildeDiagonal h = build_htilde(inst);
            const QuantumState psi = prepare_reference(n);
            const std::int64_t half = register_dim(n);
            double expectation = 0.0;
            for (std::int64_t i = 0; i < psi.amplitudes.size(); ++i)
                expectation += std::norm(psi.amplitudes[i]) * h.values[i & (half - 1)];
            CHECK(expectation == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }
    SUBCASE("rejects registers that are too small") {
        CHECK_THROWS_AS(prepare_reference(2), InvalidArgument);
    }
}

TEST_CASE("decay_probability sums the probe-ground block") {
    QuantumState psi = prepare_reference(4);
    CHECK(decay_probability(psi) == doctest::Approx(0.0));
    // Move half the mass into the probe-0 block.
    const std::int64_t half = register_dim(4);
    psi.amplitudes[0] = psi.amplitudes[half];
    psi.amplitudes[half] = 0.0;
    psi.amplitudes /= psi.norm();
    CHECK(decay_probability(psi) == doctest::Approx(1.0 / 16.0));
}
