#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace probeq {

/// Largest register size accepted by exhaustive routines (2^n enumeration).
inline constexpr int kMaxBruteForceBits = 20;

/// A 3-bit exact cover instance: n bits and a list of clauses, each naming
/// three distinct 1-based bit indices. A clause is satisfied when exactly one
/// of its three bits is 1. Duplicate clauses are allowed and count twice.
struct EC3Instance {
    int n = 0;
    std::vector<std::array<int, 3>> clauses;
};

/// A bit string z1..zn. In the integer encoding z1 is the most significant
/// bit, so the assignment 00010111 on 8 bits encodes to 23.
struct Assignment {
    std::vector<std::uint8_t> bits; // bits[0] = z1, ..., bits[n-1] = zn

    static Assignment from_index(std::uint64_t index, int n);
    std::uint64_t to_index() const;
    std::string to_string() const;

    bool operator==(const Assignment&) const = default;
};

/// Full spectrum of the clause-violation count over all 2^n assignments.
struct SpectrumSummary {
    std::map<int, std::uint64_t> degeneracies; // energy -> multiplicity
    int min_energy = 0;
    std::vector<Assignment> minimizers; // ascending integer encoding
    int num_clauses = 0;

    bool satisfiable() const { return min_energy == 0; }
    std::uint64_t solution_count() const;
};

/// Parse the JSON instance format: {"n": int, "clauses": [[i,j,k], ...]}.
/// Throws ParseError with the offending clause position on bad input.
EC3Instance parse_instance(const std::string& text);
EC3Instance load_instance(const std::string& path);

/// 0 when exactly one of the three addressed bits is 1, otherwise 1.
int clause_energy(const std::array<int, 3>& clause, const Assignment& a);

/// Number of violated clauses (duplicates counted with multiplicity).
int problem_energy(const EC3Instance& inst, const Assignment& a);

/// Diagonal of the problem Hamiltonian: entry at the integer encoding of an
/// assignment equals its problem_energy. Length 2^n.
std::vector<int> build_hp_diagonal(const EC3Instance& inst);

/// Exhaustive enumeration of all 2^n assignments.
SpectrumSummary brute_force_solve(const EC3Instance& inst);

} // namespace probeq
