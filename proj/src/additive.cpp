#include "zerosum/additive.hpp"

#include "zerosum/errors.hpp"
#include "zerosum/rng.hpp"

#include <algorithm>
#include <thread>

namespace zerosum {

Subgroup stabilizer(const ElementSet & members, const GroupSpec & g)
{
    return set_stabilizer(g, members);
}

namespace {

/// v_g(phi_H(S)) for every coset of H that S meets.
std::vector<long> coset_multiplicities(const Sequence & s, const Subgroup & h)
{
    const GroupSpec & g = s.group();
    std::map<Element, long> by_coset;
    if (h.is_rotation_subgroup()) {
        const Sequence image = map_sequence(s, quotient_map(g, h));
        for (const auto & [u, c] : image.counts())
            by_coset[u] += c;
    }
    else {
        // Cosets of a subgroup containing a reflection, named by their least member.
        const auto members = h.elements();
        for (const auto & [u, c] : s.counts()) {
            Element rep = g.mul(u, members.front());
            for (const Element & m : members)
                rep = std::min(rep, g.mul(u, m));
            by_coset[rep] += c;
        }
    }
    std::vector<long> out;
    for (const auto & [coset, c] : by_coset)
        out.push_back(c);
    return out;
}

} // namespace

DgmReport dgm_check(const Sequence & s, std::size_t n, const SearchOptions & options)
{
    const GroupSpec & g = s.group();
    if (!g.is_abelian())
        throw PreconditionError("the DGM bound is stated for abelian groups; " + g.literal() + " is not abelian");
    if (n < 1 || n > static_cast<std::size_t>(s.length()))
        throw PreconditionError("need 1 <= n <= |S|");
    SubproductSet sp = subproducts(s, n, options);
    long long sum = 0;
    for (long v : coset_multiplicities(s, sp.stabilizer))
        sum += std::min<long long>(static_cast<long long>(n), v);
    const long long rhs = (sum - static_cast<long long>(n) + 1) * sp.stabilizer.size();
    const std::size_t lhs = sp.members.size();
    return {s, n, lhs, sp.stabilizer, rhs, static_cast<long long>(lhs) >= rhs};
}

std::pair<Sequence, std::size_t> dgm_instance(const DgmFuzzOptions & options, std::size_t i)
{
    auto rng = trial_rng(options.seed, 0xD6A, i);
    GroupSpec g = GroupSpec::cyclic(uniform(rng, 1, options.max_order));
    const int len = uniform(rng, 1, options.max_len);
    std::vector<Element> terms;
    for (int t = 0; t < len; ++t)
        terms.push_back({0, uniform(rng, 0, g.n() - 1)});
    const auto n = static_cast<std::size_t>(uniform(rng, 1, len));
    return {Sequence(g, terms), n};
}

DgmFuzzSummary dgm_fuzz(const DgmFuzzOptions & options)
{
    const int jobs = std::max(1, options.jobs);
    std::vector<std::vector<std::pair<std::size_t, DgmReport>>> bad(jobs);
    std::vector<std::size_t> passed(jobs, 0);
    auto worker = [&](int t) {
        for (std::size_t i = static_cast<std::size_t>(t); i < options.trials; i += static_cast<std::size_t>(jobs)) {
            auto [s, n] = dgm_instance(options, i);
            DgmReport r = dgm_check(s, n);
            if (r.holds)
                ++passed[t];
            else
                bad[t].emplace_back(i, std::move(r));
        }
    };
    if (jobs == 1) {
        worker(0);
    }
    else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t)
            threads.emplace_back(worker, t);
        for (auto & th : threads)
            th.join();
    }
    std::vector<std::pair<std::size_t, DgmReport>> merged;
    for (auto & b : bad)
        for (auto & r : b)
            merged.push_back(std::move(r));
    std::sort(merged.begin(), merged.end(), [](const auto & l, const auto & r) { return l.first < r.first; });
    DgmFuzzSummary out;
    out.trials = options.trials;
    for (std::size_t p : passed)
        out.passed += p;
    for (auto & [i, r] : merged)
        out.counterexamples.push_back(std::move(r));
    return out;
}

} // namespace zerosum
