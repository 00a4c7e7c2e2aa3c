#include "zerosum/invariants.hpp"

#include "zerosum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace zerosum {

namespace {

Sequence image(const Sequence & s, const Automorphism & f)
{
    std::map<Element, long> counts;
    for (const auto & [u, c] : s.counts())
        counts[f(u, s.group())] += c;
    return Sequence(s.group(), std::move(counts));
}

/// Inverse of f as a lookup table indexed like the group.
std::vector<Element> inverse_table(const GroupSpec & g, const Automorphism & f)
{
    std::vector<Element> inv(g.order());
    for (int i = 0; i < g.order(); ++i)
        inv[g.index(f.table[i])] = g.element_at(i);
    return inv;
}

bool is_minimal_in_orbit(const Sequence & s, const std::string & key, const std::vector<Automorphism> & auts)
{
    for (std::size_t i = 1; i < auts.size(); ++i)
        if (canonical_key(image(s, auts[i])) < key)
            return false;
    return true;
}

std::optional<TemplateMatch> match_cyclic_pair(const Sequence & s)
{
    const GroupSpec & g = s.group();
    const long n = g.n();
    if (n < 2 || s.length() != 3 * n - 2 || s.counts().size() != 2)
        return std::nullopt;
    Element big{}, small{};
    for (const auto & [u, c] : s.counts()) {
        if (c == 2 * n - 1)
            big = u;
        else if (c == n - 1)
            small = u;
        else
            return std::nullopt;
    }
    if (gcd_ll(big.a - small.a, n) != 1)
        return std::nullopt;
    return TemplateMatch{TemplateKind::cyclic_pair, big.a, small.a, 0, g.y(), g.identity()};
}

/// Standard form with alpha = y, tau = x.
std::optional<TemplateMatch> match_standard(const Sequence & s)
{
    const GroupSpec & g = s.group();
    const long n = g.n();
    if (s.length() != 3 * n - 1)
        return std::nullopt;
    if (n == 3 && s.multiplicity(g.identity()) == 5 && s.multiplicity({1, 0}) == 1 && s.multiplicity({1, 1}) == 1
        && s.multiplicity({1, 2}) == 1)
        return TemplateMatch{TemplateKind::identity_reflections, 0, 0, 0, g.y(), g.x()};
    if (s.counts().size() != 3)
        return std::nullopt;
    std::optional<Element> big, small, reflection;
    for (const auto & [u, c] : s.counts()) {
        if (u.eps == 1 && c == 1)
            reflection = u;
        else if (u.eps == 0 && c == 2 * n - 1)
            big = u;
        else if (u.eps == 0 && c == n - 1)
            small = u;
        else
            return std::nullopt;
    }
    if (!big || !small || !reflection || gcd_ll(big->a - small->a, n) != 1)
        return std::nullopt;
    return TemplateMatch{TemplateKind::rotation_pair_reflection, big->a, small->a, reflection->a, g.y(), g.x()};
}

bool template_applies(const GroupSpec & g, TemplateKind kind, std::size_t length, std::size_t k)
{
    const std::size_t n = static_cast<std::size_t>(g.n());
    switch (kind) {
    case TemplateKind::cyclic_pair:
        return g.is_cyclic_kind() && n >= 2 && length == 3 * n - 2 && k == 2 * n;
    case TemplateKind::rotation_pair_reflection:
        return !g.is_abelian() && length == 3 * n - 1 && k == 2 * n;
    case TemplateKind::identity_reflections:
        return !g.is_abelian() && n == 3 && length == 8 && k == 6;
    }
    return false;
}

constexpr TemplateKind all_kinds[] = {
    TemplateKind::cyclic_pair, TemplateKind::rotation_pair_reflection, TemplateKind::identity_reflections};

/// Enumerates count vectors over the group's elements (in index order) whose
/// first positive entry is at `first`, and collects the free ones.
class Enumerator {
public:
    Enumerator(const GroupSpec & g, std::size_t length, std::size_t k, const EnumerationOptions & options)
        : g_(g), length_(length), k_(k), options_(options), auts_(automorphisms(g)), counts_(g.order(), 0)
    {
    }

    std::vector<Sequence> shard(int first)
    {
        found_.clear();
        std::fill(counts_.begin(), counts_.end(), 0);
        for (long c = static_cast<long>(length_); c >= 1; --c) {
            counts_[first] = c;
            fill(first + 1, length_ - static_cast<std::size_t>(c));
        }
        counts_[first] = 0;
        return std::move(found_);
    }

private:
    void fill(int index, std::size_t remaining)
    {
        if (remaining == 0) {
            visit();
            return;
        }
        if (index == g_.order())
            return;
        for (long c = static_cast<long>(remaining); c >= 0; --c) {
            counts_[index] = c;
            fill(index + 1, remaining - static_cast<std::size_t>(c));
        }
        counts_[index] = 0;
    }

    void visit()
    {
        std::map<Element, long> counts;
        for (int i = 0; i < g_.order(); ++i)
            if (counts_[i] > 0)
                counts.emplace(g_.element_at(i), counts_[i]);
        Sequence s(g_, std::move(counts));
        if (options_.prune && !is_minimal_in_orbit(s, canonical_key(s), auts_))
            return;
        if (is_free(s, k_, options_.search))
            found_.push_back(std::move(s));
    }

    GroupSpec g_;
    std::size_t length_;
    std::size_t k_;
    EnumerationOptions options_;
    std::vector<Automorphism> auts_;
    std::vector<long> counts_;
    std::vector<Sequence> found_;
};

void guard(const GroupSpec & g, std::size_t length, double ceiling)
{
    double estimate = enumeration_estimate(g, length);
    if (estimate > ceiling)
        throw InfeasibleSize(estimate, "enumerating length-" + std::to_string(length) + " sequences over " + g.literal()
            + " exceeds the ceiling " + std::to_string(static_cast<long long>(ceiling)));
}

} // namespace

double enumeration_estimate(const GroupSpec & g, std::size_t length)
{
    const double m = g.order();
    double log_binom = std::lgamma(static_cast<double>(length) + m) - std::lgamma(static_cast<double>(length) + 1) - std::lgamma(m);
    return std::exp(log_binom) / static_cast<double>(automorphisms(g).size());
}

bool is_free(const Sequence & s, std::size_t k, const SearchOptions & options)
{
    const std::size_t len = static_cast<std::size_t>(s.length());
    if (k != any_length)
        return k > len || !has_product_one(s, k, options).found;
    for (std::size_t j = 1; j <= len; ++j)
        if (has_product_one(s, j, options).found)
            return false;
    return true;
}

std::vector<Sequence> free_sequences(const GroupSpec & g, std::size_t length, std::size_t k, const EnumerationOptions & options)
{
    guard(g, length, options.ceiling);
    if (length == 0) {
        Sequence empty(g);
        if (is_free(empty, k, options.search))
            return {empty};
        return {};
    }
    const int shards = g.order();
    std::vector<std::vector<Sequence>> results(shards);
    const int jobs = std::clamp(options.jobs, 1, shards);
    auto worker = [&](int start) {
        Enumerator e(g, length, k, options);
        for (int first = start; first < shards; first += jobs)
            results[first] = e.shard(first);
    };
    if (jobs == 1) {
        worker(0);
    }
    else {
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t)
            threads.emplace_back(worker, t);
        for (auto & t : threads)
            t.join();
    }
    std::vector<std::pair<std::string, Sequence>> keyed;
    for (auto & shard : results)
        for (auto & s : shard)
            keyed.emplace_back(canonical_key(s), std::move(s));
    std::sort(keyed.begin(), keyed.end(), [](const auto & l, const auto & r) { return l.first < r.first; });
    std::vector<Sequence> out;
    out.reserve(keyed.size());
    for (auto & [key, s] : keyed)
        out.push_back(std::move(s));
    return out;
}

std::vector<std::string> orbit_keys(const Sequence & s)
{
    std::set<std::string> keys;
    for (const Automorphism & f : automorphisms(s.group()))
        keys.insert(canonical_key(image(s, f)));
    return {keys.begin(), keys.end()};
}

ConstantReport gao_constant(const GroupSpec & g, std::size_t length_cap, const EnumerationOptions & options)
{
    const std::size_t order = static_cast<std::size_t>(g.order());
    std::size_t start = order - 1;
    std::vector<Sequence> previous = free_sequences(g, start, order, options);
    for (std::size_t len = start + 1; len <= length_cap; ++len) {
        std::vector<Sequence> current = free_sequences(g, len, order, options);
        if (current.empty())
            return {g, Constant::gao, static_cast<int>(len), std::move(previous)};
        previous = std::move(current);
    }
    throw PreconditionError("E(" + g.literal() + ") exceeds the length cap " + std::to_string(length_cap));
}

ConstantReport davenport_constant(const GroupSpec & g, std::size_t length_cap, const EnumerationOptions & options)
{
    std::vector<Sequence> previous = free_sequences(g, 0, any_length, options);
    for (std::size_t len = 1; len <= length_cap + 1; ++len) {
        std::vector<Sequence> current = free_sequences(g, len, any_length, options);
        if (current.empty())
            return {g, Constant::davenport, static_cast<int>(len - 1), std::move(previous)};
        previous = std::move(current);
    }
    throw PreconditionError("d(" + g.literal() + ") exceeds the length cap " + std::to_string(length_cap));
}

std::optional<TemplateMatch> check_template(const Sequence & s)
{
    const GroupSpec & g = s.group();
    if (g.is_cyclic_kind())
        return match_cyclic_pair(s);
    if (g.is_abelian())
        return std::nullopt;
    for (const Automorphism & f : automorphisms(g)) {
        const auto inv = inverse_table(g, f);
        std::map<Element, long> counts;
        for (const auto & [u, c] : s.counts())
            counts[inv[g.index(u)]] += c;
        if (auto m = match_standard(Sequence(g, std::move(counts)))) {
            m->alpha = f.image_y;
            m->tau = f.image_x;
            return m;
        }
    }
    return std::nullopt;
}

Sequence template_instance(const GroupSpec & g, TemplateKind kind, int t1, int t2, int t3)
{
    const long n = g.n();
    auto residue = [&](int t) { return static_cast<int>(mod(t, n)); };
    switch (kind) {
    case TemplateKind::cyclic_pair:
        return Sequence(g, std::map<Element, long>{{{0, residue(t1)}, 2 * n - 1}, {{0, residue(t2)}, n - 1}});
    case TemplateKind::rotation_pair_reflection:
        return Sequence(g, std::map<Element, long>{{{0, residue(t1)}, 2 * n - 1}, {{0, residue(t2)}, n - 1}, {{1, residue(t3)}, 1}});
    case TemplateKind::identity_reflections:
        if (n != 3)
            throw PreconditionError("the 1^[5] t (t a) (t a^2) form needs n = 3");
        return Sequence(g, std::map<Element, long>{{g.identity(), 5}, {{1, 0}, 1}, {{1, 1}, 1}, {{1, 2}, 1}});
    }
    throw PreconditionError("unknown template");
}

std::vector<Sequence> expand_template(const GroupSpec & g, TemplateKind kind)
{
    const int n = g.n();
    std::vector<Sequence> standard;
    if (kind == TemplateKind::identity_reflections) {
        standard.push_back(template_instance(g, kind, 0, 0, 0));
    }
    else {
        const int t3_range = kind == TemplateKind::rotation_pair_reflection ? n : 1;
        for (int t1 = 0; t1 < n; ++t1)
            for (int t2 = 0; t2 < n; ++t2) {
                if (gcd_ll(t1 - t2, n) != 1)
                    continue;
                for (int t3 = 0; t3 < t3_range; ++t3)
                    standard.push_back(template_instance(g, kind, t1, t2, t3));
            }
    }
    std::map<std::string, Sequence> unique;
    for (const Automorphism & f : automorphisms(g))
        for (const Sequence & s : standard) {
            Sequence t = image(s, f);
            unique.emplace(canonical_key(t), std::move(t));
        }
    std::vector<Sequence> out;
    for (auto & [key, s] : unique)
        out.push_back(std::move(s));
    return out;
}

Classification classify_extremal(const GroupSpec & g, std::size_t length, std::size_t k, const EnumerationOptions & options)
{
    EnumerationOptions pruned = options;
    pruned.prune = true;
    std::vector<Sequence> reps = free_sequences(g, length, k, pruned);

    Classification out{g, length, k, {}, {}, 0, false};
    SearchOptions recheck = options.search;
    recheck.route = Route::reflection_split;
    std::set<std::string> closure;
    for (const Sequence & rep : reps) {
        if (!is_free(rep, k, recheck))
            throw std::logic_error("routes disagree on " + format_sequence_line(rep));
        for (auto & key : orbit_keys(rep))
            closure.insert(std::move(key));
        auto match = check_template(rep);
        if (!match || !template_applies(g, match->kind, length, k)) {
            out.unmatched.push_back(rep);
            continue;
        }
        auto family = std::find_if(out.families.begin(), out.families.end(),
            [&](const ExtremalFamily & f) { return f.kind == match->kind; });
        if (family == out.families.end()) {
            out.families.push_back({match->kind, template_name(match->kind), {}, {}});
            family = std::prev(out.families.end());
        }
        family->representatives.push_back(rep);
        family->parameters.push_back(*match);
    }
    std::sort(out.families.begin(), out.families.end(), [](const auto & l, const auto & r) { return l.kind < r.kind; });
    out.free_count = closure.size();

    std::set<std::string> expected;
    for (TemplateKind kind : all_kinds)
        if (template_applies(g, kind, length, k))
            for (const Sequence & s : expand_template(g, kind))
                expected.insert(canonical_key(s));
    out.coverage_complete = expected == closure && out.unmatched.empty();
    return out;
}

std::string template_name(TemplateKind kind)
{
    switch (kind) {
    case TemplateKind::cyclic_pair:
        return "(g^t1)^[2n-1] (g^t2)^[n-1], gcd(t1-t2, n) = 1";
    case TemplateKind::rotation_pair_reflection:
        return "(a^t1)^[2n-1] (a^t2)^[n-1] (t a^t3), gcd(t1-t2, n) = 1";
    case TemplateKind::identity_reflections:
        return "1^[5] t (t a) (t a^2)";
    }
    return "unknown";
}

std::string describe(const TemplateMatch & m)
{
    std::string kind = m.kind == TemplateKind::cyclic_pair ? "cyclic-pair"
        : m.kind == TemplateKind::rotation_pair_reflection  ? "rotation-pair-reflection"
                                                            : "identity-reflections";
    return "template=" + kind + " t1=" + std::to_string(m.t1) + " t2=" + std::to_string(m.t2) + " t3="
        + std::to_string(m.t3) + " alpha=" + format_element(m.alpha) + " tau=" + format_element(m.tau);
}

std::string constant_name(Constant c)
{
    return c == Constant::gao ? "gao" : "davenport";
}

} // namespace zerosum
