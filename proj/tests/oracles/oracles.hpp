#pragma once

// Brute-force references used only by tests. None of this shares code with
// the search kernels: products are formed by direct left-to-right
// multiplication over explicit arrangements or subsets.

#include "zerosum/group.hpp"
#include "zerosum/sequence.hpp"

#include <map>
#include <vector>

namespace oracle {

using zerosum::Element;
using zerosum::ElementSet;
using zerosum::GroupSpec;
using zerosum::Sequence;

/// Every ordered arrangement of every length-k sub-multiset, multiplied out.
inline ElementSet factorial_subproducts(const Sequence & s, std::size_t k)
{
    const GroupSpec & g = s.group();
    std::vector<Element> support = s.support();
    std::vector<long> left;
    for (const Element & u : support)
        left.push_back(s.multiplicity(u));
    ElementSet out;
    auto walk = [&](auto && self, std::size_t depth, Element acc) -> void {
        if (depth == k) {
            out.insert(acc);
            return;
        }
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (left[i] == 0)
                continue;
            --left[i];
            self(self, depth + 1, g.mul(acc, support[i]));
            ++left[i];
        }
    };
    walk(walk, 0, g.identity());
    return out;
}

/// Commuting case: every subset of term positions of size k, summed.
inline ElementSet subset_sums(const Sequence & s, std::size_t k)
{
    const GroupSpec & g = s.group();
    std::vector<Element> terms = s.terms();
    ElementSet out;
    const std::size_t len = terms.size();
    for (unsigned long mask = 0; mask < (1UL << len); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountl(mask)) != k)
            continue;
        long sum = 0;
        int parity = 0;
        for (std::size_t i = 0; i < len; ++i)
            if (mask >> i & 1UL) {
                sum += terms[i].a;
                parity ^= terms[i].eps;
            }
        out.insert({parity, static_cast<int>(sum % g.n())});
    }
    return out;
}

/// Bounded knapsack over Z_n x Z_2 with a plain boolean table per count.
inline ElementSet knapsack(const Sequence & s, std::size_t k)
{
    const int n = s.group().n();
    // reach[j][parity][residue]
    std::vector<std::vector<std::vector<char>>> reach(k + 1, std::vector<std::vector<char>>(2, std::vector<char>(n, 0)));
    reach[0][0][0] = 1;
    for (const Element & u : s.terms())
        for (std::size_t j = k; j-- > 0;)
            for (int p = 0; p < 2; ++p)
                for (int r = 0; r < n; ++r)
                    if (reach[j][p][r])
                        reach[j + 1][p ^ u.eps][(r + u.a) % n] = 1;
    ElementSet out;
    for (int p = 0; p < 2; ++p)
        for (int r = 0; r < n; ++r)
            if (reach[k][p][r])
                out.insert({p, r});
    return out;
}

/// All groups C_n (n <= max_order) and C_n x|_s C_2 (2n <= max_order, n >= 3).
inline std::vector<GroupSpec> small_groups(int max_order)
{
    std::vector<GroupSpec> out;
    for (int n = 1; n <= max_order; ++n)
        out.push_back(GroupSpec::cyclic(n));
    for (int n = 3; 2 * n <= max_order; ++n)
        for (int s = 0; s < n; ++s)
            if ((s * s) % n == 1 % n)
                out.push_back(GroupSpec::metacyclic(n, s));
    return out;
}

} // namespace oracle
