#include "probeq/ec3.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "probeq/errors.hpp"

namespace probeq {

Assignment Assignment::from_index(std::uint64_t index, int n) {
    Assignment a;
    a.bits.resize(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p)
        a.bits[static_cast<std::size_t>(p)] =
            static_cast<std::uint8_t>((index >> (n - 1 - p)) & 1u);
    return a;
}

std::uint64_t Assignment::to_index() const {
    std::uint64_t index = 0;
    for (std::uint8_t b : bits)
        index = (index << 1) | b;
    return index;
}

std::string Assignment::to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (std::uint8_t b : bits)
        s.push_back(b ? '1' : '0');
    return s;
}

std::uint64_t SpectrumSummary::solution_count() const {
    auto it = degeneracies.find(0);
    return it == degeneracies.end() ? 0 : it->second;
}

EC3Instance parse_instance(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("clauses"))
        throw ParseError("instance must be an object with fields \"n\" and \"clauses\"");
    if (!doc["n"].is_number_integer())
        throw ParseError("field \"n\" must be an integer");

    EC3Instance inst;
    inst.n = doc["n"].get<int>();
    if (inst.n < 3)
        throw ParseError("n must be at least 3, got " + std::to_string(inst.n));

    const auto& clauses = doc["clauses"];
    if (!clauses.is_array() || clauses.empty())
        throw ParseError("field \"clauses\" must be a non-empty array");

    for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
        const auto& c = clauses[ci];
        const std::string where = "clause " + std::to_string(ci + 1);
        if (!c.is_array() || c.size() != 3)
            throw ParseError(where + ": expected an array of 3 bit indices");
        std::array<int, 3> triple{};
        for (std::size_t k = 0; k < 3; ++k) {
            if (!c[k].is_number_integer())
                throw ParseError(where + ": indices must be integers");
            triple[k] = c[k].get<int>();
            if (triple[k] < 1 || triple[k] > inst.n)
                throw ParseError(where + ": index " + std::to_string(triple[k]) +
                                 " out of range [1, " + std::to_string(inst.n) + "]");
        }
        if (triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2])
            throw ParseError(where + ": repeated index in clause");
        inst.clauses.push_back(triple);
    }
    return inst;
}

EC3Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

int clause_energy(const std::array<int, 3>& clause, const Assignment& a) {
    int ones = 0;
    for (int idx : clause) {
        assert(idx >= 1 && static_cast<std::size_t>(idx) <= a.bits.size());
        ones += a.bits[static_cast<std::size_t>(idx - 1)];
    }
    return ones == 1 ? 0 : 1;
}

int problem_energy(const EC3Instance& inst, const Assignment& a) {
    assert(a.bits.size() == static_cast<std::size_t>(inst.n));
    int e = 0;
    for (const auto& c : inst.clauses)
        e += clause_energy(c, a);
    return e;
}

namespace {

void check_enumeration_cap(const EC3Instance& inst) {
    if (inst.n > kMaxBruteForceBits)
        throw ResourceError("n = " + std::to_string(inst.n) +
                            " exceeds the exhaustive-enumeration cap of " +
                            std::to_string(kMaxBruteForceBits) + " bits");
}

// Clause masks in encoding space: bit p of the assignment occupies
// position n - p in the integer index.
std::vector<std::uint64_t> clause_masks(const EC3Instance& inst) {
    std::vector<std::uint64_t> masks;
    masks.reserve(inst.clauses.size());
    for (const auto& c : inst.clauses) {
        std::uint64_t m = 0;
        for (int idx : c)
            m |= std::uint64_t{1} << (inst.n - idx);
        masks.push_back(m);
    }
    return masks;
}

} // namespace

std::vector<int> build_hp_diagonal(const EC3Instance& inst) {
    check_enumeration_cap(inst);
    const auto masks = clause_masks(inst);
    const std::uint64_t size = std::uint64_t{1} << inst.n;
    std::vector<int> diag(size, 0);
    for (std::uint64_t z = 0; z < size; ++z) {
        int e = 0;
        for (std::uint64_t m : masks)
            e += std::popcount(z & m) != 1;
        diag[z] = e;
    }
    return diag;
}

SpectrumSummary brute_force_solve(const EC3Instance& inst) {
    check_enumeration_cap(inst);
    const auto masks = clause_masks(inst);
    const std::uint64_t size = std::uint64_t{1} << inst.n;

    SpectrumSummary summary;
    summary.num_clauses = static_cast<int>(inst.clauses.size());
    summary.min_energy = summary.num_clauses + 1;

    std::vector<std::uint64_t> best;
    for (std::uint64_t z = 0; z < size; ++z) {
        int e = 0;
        for (std::uint64_t m : masks)
            e += std::popcount(z & m) != 1;
        ++summary.degeneracies[e];
        if (e < summary.min_energy) {
            summary.min_energy = e;
            best.clear();
        }
        if (e == summary.min_energy)
            best.push_back(z);
    }

    summary.minimizers.reserve(best.size());
    for (std::uint64_t z : best)
        summary.minimizers.push_back(Assignment::from_index(z, inst.n));
    return summary;
}

} // namespace probeq
