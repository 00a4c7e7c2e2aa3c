#pragma once

#include "zerosum/product.hpp"

#include <cstdint>
#include <vector>

namespace zerosum {

struct DgmReport {
    Sequence sequence;
    std::size_t n = 0;
    std::size_t lhs = 0;
    Subgroup stabilizer;
    /// Raw right-hand side, possibly nonpositive (no clamping).
    long long rhs = 0;
    bool holds = false;
};

/// H(A) = {g : gA = A} for nonempty A.
Subgroup stabilizer(const ElementSet & members, const GroupSpec & g);

/// |Pi_n(S)| >= (sum over cosets of H of min(n, v(phi_H(S))) - n + 1) |H| with H = H(Pi_n(S)).
DgmReport dgm_check(const Sequence & s, std::size_t n, const SearchOptions & options = {});

struct DgmFuzzOptions {
    std::size_t trials = 10'000;
    int max_order = 30;
    int max_len = 20;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct DgmFuzzSummary {
    std::size_t trials = 0;
    std::size_t passed = 0;
    std::vector<DgmReport> counterexamples;
};

/// The instance drawn for trial i: C_m with m in [1, max_order], |S| in
/// [1, max_len], n in [1, |S|].
std::pair<Sequence, std::size_t> dgm_instance(const DgmFuzzOptions & options, std::size_t i);

DgmFuzzSummary dgm_fuzz(const DgmFuzzOptions & options);

} // namespace zerosum
