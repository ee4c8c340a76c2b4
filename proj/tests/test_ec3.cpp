#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "probeq/ec3.hpp"
#include "probeq/errors.hpp"
#include "probeq/verify.hpp"

using namespace probeq;

namespace {

std::string fixture(const std::string& name) {
    return std::string(PROBEQ_FIXTURES_DIR) + "/" + name;
}

Assignment from_bits(const std::string& s) {
    Assignment a;
    for (char c : s)
        a.bits.push_back(c == '1' ? 1 : 0);
    return a;
}

// Reference energy evaluator, written directly off the clause semantics and
// independent of the mask-based library paths.
int ref_energy(const EC3Instance& inst, std::uint64_t encoding) {
    const std::string bits = Assignment::from_index(encoding, inst.n).to_string();
    int e = 0;
    for (const auto& c : inst.clauses) {
        int ones = 0;
        for (int idx : c)
            ones += bits[static_cast<std::size_t>(idx - 1)] == '1';
        e += ones == 1 ? 0 : 1;
    }
    return e;
}

} // namespace

TEST_CASE("assignment encoding: z1 is the most significant bit") {
    const Assignment a = from_bits("00010111");
    CHECK(a.to_index() == 23);
    CHECK(Assignment::from_index(23, 8) == a);
    CHECK(Assignment::from_index(23, 8).to_string() == "00010111");

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 10);
        const std::uint64_t index = rng() & ((std::uint64_t{1} << n) - 1);
        CHECK(Assignment::from_index(index, n).to_index() == index);
    }
}

TEST_CASE("parse_instance accepts the shipped fixtures") {
    const EC3Instance inst = load_instance(fixture("case_i.json"));
    CHECK(inst.n == 8);
    REQUIRE(inst.clauses.size() == 6);
    CHECK(inst.clauses[0] == std::array<int, 3>{1, 2, 8});
    CHECK(inst.clauses[5] == std::array<int, 3>{3, 5, 8});

    const EC3Instance minimal = parse_instance(R"({"n":3,"clauses":[[1,2,3]]})");
    CHECK(minimal.n == 3);
    CHECK(minimal.clauses.size() == 1);
}

TEST_CASE("parse_instance rejects malformed documents with the clause position") {
    CHECK_THROWS_AS(parse_instance("not json"), ParseError);
    CHECK_THROWS_AS(parse_instance("{}"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n":2,"clauses":[[1,2,3]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n":4,"clauses":[]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n":4,"clauses":[[1,2]]})"), ParseError);
    CHECK_THROWS_AS(parse_instance(R"({"n":4,"clauses":[[1,2,3.5]]})"), ParseError);

    try {
        parse_instance(R"({"n":8,"clauses":[[1,1,2]]})");
        FAIL("repeated index must be rejected");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("clause 1") != std::string::npos);
        CHECK(std::string(e.what()).find("repeated") != std::string::npos);
    }
    try {
        parse_instance(R"({"n":8,"clauses":[[1,2,3],[2,4,9]]})");
        FAIL("out-of-range index must be rejected");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("clause 2") != std::string::npos);
    }
}

TEST_CASE("parse_instance keeps duplicate clauses") {
    const EC3Instance inst =
        parse_instance(R"({"n":3,"clauses":[[1,2,3],[1,2,3]]})");
    CHECK(inst.clauses.size() == 2);
    CHECK(problem_energy(inst, from_bits("000")) == 2);
}

TEST_CASE("clause_energy: satisfied iff exactly one addressed bit is set") {
    CHECK(clause_energy({1, 2, 8}, from_bits("00010111")) == 0);
    CHECK(clause_energy({1, 2, 3}, from_bits("000")) == 1);
    CHECK(clause_energy({1, 2, 3}, from_bits("111")) == 1);
    CHECK(clause_energy({1, 2, 3}, from_bits("010")) == 0);
    CHECK(clause_energy({1, 2, 3}, from_bits("011")) == 1);
}

TEST_CASE("problem_energy on the published instances") {
    const EC3Instance case_i = load_instance(fixture("case_i.json"));
    CHECK(problem_energy(case_i, from_bits("00010111")) == 0);
    CHECK(problem_energy(case_i, from_bits("00000000")) == 6);

    const EC3Instance case_ii = load_instance(fixture("case_ii.json"));
    CHECK(problem_energy(case_ii, from_bits("00110010")) == 0);
    CHECK(problem_energy(case_ii, from_bits("00010010")) == 0);
}

TEST_CASE("build_hp_diagonal matches enumeration") {
    SUBCASE("single clause on 3 bits") {
        const EC3Instance inst = parse_instance(R"({"n":3,"clauses":[[1,2,3]]})");
        const std::vector<int> expected = {1, 0, 0, 1, 0, 1, 1, 1};
        CHECK(build_hp_diagonal(inst) == expected);
    }
    SUBCASE("case i has its only zero at encoding 23") {
        const EC3Instance inst = load_instance(fixture("case_i.json"));
        const auto diag = build_hp_diagonal(inst);
        REQUIRE(diag.size() == 256);
        for (std::size_t z = 0; z < diag.size(); ++z) {
            if (z == 23)
                CHECK(diag[z] == 0);
            else
                CHECK(diag[z] > 0);
        }
    }
    SUBCASE("entries equal problem_energy and the reference evaluator") {
        std::mt19937_64 rng(5);
        for (int n : {3, 6, 10, 12}) {
            const EC3Instance inst = random_instance(n, n + 1, rng());
            const auto diag = build_hp_diagonal(inst);
            long long total = 0;
            for (std::uint64_t z = 0; z < diag.size(); ++z) {
                const int direct =
                    problem_energy(inst, Assignment::from_index(z, n));
                CHECK(diag[z] == direct);
                CHECK(diag[z] == ref_energy(inst, z));
                total += diag[z];
            }
            long long expected_total = 0;
            for (std::uint64_t z = 0; z < diag.size(); ++z)
                expected_total += ref_energy(inst, z);
            CHECK(total == expected_total);
        }
    }
}

TEST_CASE("brute_force_solve on the published instances") {
    SUBCASE("case iii: four minimizers") {
        const auto s = brute_force_solve(load_instance(fixture("case_iii.json")));
        CHECK(s.min_energy == 0);
        CHECK(s.solution_count() == 4);
        REQUIRE(s.minimizers.size() == 4);
        CHECK(s.minimizers[0].to_string() == "00001100");
        CHECK(s.minimizers[1].to_string() == "00100110");
        CHECK(s.minimizers[2].to_string() == "00110001");
        CHECK(s.minimizers[3].to_string() == "11000010");
    }
    SUBCASE("case ii: two satisfying assignments") {
        const auto s = brute_force_solve(load_instance(fixture("case_ii.json")));
        CHECK(s.degeneracies.at(0) == 2);
        CHECK(s.satisfiable());
    }
    SUBCASE("the 4-bit instance with no satisfying assignment") {
        const auto s = brute_force_solve(load_instance(fixture("unsat_4bit.json")));
        CHECK(s.min_energy == 1);
        CHECK_FALSE(s.satisfiable());
        CHECK(s.solution_count() == 0);
        REQUIRE(s.minimizers.size() == 4);
        CHECK(s.minimizers[0].to_string() == "0001");
        CHECK(s.minimizers[3].to_string() == "1000");
    }
}

TEST_CASE("spectrum properties over random instances") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const int m = 1 + static_cast<int>(rng() % (2 * n));
        EC3Instance inst = random_instance(n, m, rng());
        const auto s = brute_force_solve(inst);

        std::uint64_t total = 0;
        for (const auto& [energy, count] : s.degeneracies) {
            CHECK(energy >= 0);
            CHECK(energy <= static_cast<int>(inst.clauses.size()));
            total += count;
        }
        CHECK(total == (std::uint64_t{1} << n));
        CHECK(s.degeneracies.begin()->first == s.min_energy);
        CHECK(s.degeneracies.at(s.min_energy) == s.minimizers.size());
        for (const auto& a : s.minimizers)
            CHECK(problem_energy(inst, a) == s.min_energy);
        CHECK(std::is_sorted(s.minimizers.begin(), s.minimizers.end(),
                             [](const Assignment& a, const Assignment& b) {
                                 return a.to_index() < b.to_index();
                             }));

        // Clause order must not matter.
        EC3Instance shuffled = inst;
        std::shuffle(shuffled.clauses.begin(), shuffled.clauses.end(), rng);
        for (int probe = 0; probe < 16; ++probe) {
            const auto a = Assignment::from_index(
                rng() & ((std::uint64_t{1} << n) - 1), n);
            CHECK(problem_energy(inst, a) == problem_energy(shuffled, a));
        }
    }
}

TEST_CASE("enumeration refuses registers beyond the cap") {
    EC3Instance big;
    big.n = kMaxBruteForceBits + 1;
    big.clauses.push_back({1, 2, 3});
    CHECK_THROWS_AS(build_hp_diagonal(big), ResourceError);
    CHECK_THROWS_AS(brute_force_solve(big), ResourceError);
}

TEST_CASE("load_instance reports missing files") {
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), IoError);
}
