#include "zerosum/theorem_lab.hpp"

#include "zerosum/errors.hpp"
#include "zerosum/verify.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace zerosum {

namespace {

/// The main-family group with its projection onto <y^3> read as Z_{n2}.
struct Family {
    GroupSpec g;
    int n2;
    GroupMap phi;
    GroupSpec image;

    explicit Family(const GroupSpec & group)
        : g(group), n2(main_family_n2(group)), phi(projection(group, 1)), image(GroupSpec::cyclic(n2))
    {
    }

    int residue(const Element & u) const { return phi(u).a / 3; }

    Subgroup kernel() const
    {
        const std::vector<Element> gens{g.x(), {0, n2}};
        return Subgroup::generated(g, gens);
    }

    Sequence image_of(const Sequence & s) const
    {
        std::map<Element, long> counts;
        for (const auto & [u, c] : s.counts())
            counts[{0, residue(u)}] += c;
        return Sequence(image, counts);
    }
};

long x_count(const Sequence & s)
{
    long c = 0;
    for (const auto & [u, m] : s.counts())
        if (u.eps == 1)
            c += m;
    return c;
}

/// Picks terms of `pool` realising the residues in `wanted`, taking y-terms first.
Sequence lift(const Family & f, const Sequence & pool, const std::vector<Element> & wanted)
{
    std::map<Element, long> left = pool.counts();
    std::vector<Element> picked;
    for (const Element & r : wanted) {
        const Element * best = nullptr;
        for (const auto & [u, c] : left) {
            if (c == 0 || f.residue(u) != r.a)
                continue;
            if (!best || (best->eps == 1 && u.eps == 0))
                best = &u;
            if (best->eps == 0)
                break;
        }
        if (!best)
            throw std::logic_error("lift: residue " + std::to_string(r.a) + " not available");
        picked.push_back(*best);
        --left[*best];
    }
    return Sequence(f.g, picked);
}

/// An n2-term subsequence of `pool` containing h with projection sum 0, if any.
std::optional<Sequence> block_through(const Family & f, const Sequence & pool, const Element & h)
{
    const Sequence rest = remove(pool, h);
    auto w = find_product(f.image_of(rest), static_cast<std::size_t>(f.n2 - 1), {0, static_cast<int>(mod(-f.residue(h), f.n2))});
    if (!w)
        return std::nullopt;
    return with_term(lift(f, rest, w->terms), h);
}

/// One n2-term block with projection sum 0, carrying an x-term when possible.
std::optional<Sequence> pull_block(const Family & f, const Sequence & pool)
{
    for (const auto & [u, c] : pool.counts()) {
        if (u.eps != 1)
            continue;
        if (auto b = block_through(f, pool, u))
            return b;
    }
    auto w = find_product(f.image_of(pool), static_cast<std::size_t>(f.n2), f.image.identity());
    if (!w)
        return std::nullopt;
    return lift(f, pool, w->terms);
}

Element block_sigma(const Sequence & block, const Subgroup & target)
{
    ElementSet candidates;
    for (const Element & u : pi_set(block))
        if (target.contains(u))
            candidates.insert(u);
    if (candidates.empty())
        throw std::logic_error("block is not product-" + target.description());
    return default_sigma(candidates);
}

Sequence concat_all(const std::vector<Sequence> & parts, const GroupSpec & g)
{
    Sequence out(g);
    for (const Sequence & p : parts)
        out = concat(out, p);
    return out;
}

Sequence source_of(const Decomposition & d)
{
    return concat(concat_all(d.blocks, d.target.group()), d.remainder);
}

/// Arrangement of a whole block multiplying to `target`.
std::vector<Element> arrange(const Sequence & block, const Element & target)
{
    auto w = find_product(block, static_cast<std::size_t>(block.length()), target);
    if (!w)
        throw std::logic_error("block has no arrangement with product " + format_element(target));
    return w->terms;
}

Element product_of(const GroupSpec & g, const std::vector<Element> & terms)
{
    Element p = g.identity();
    for (const Element & u : terms)
        p = g.mul(p, u);
    return p;
}

std::string join_indices(const std::vector<std::size_t> & v)
{
    std::string out;
    for (std::size_t i : v)
        out += (out.empty() ? "" : ",") + std::to_string(i);
    return out;
}

} // namespace

bool in_main_family(const GroupSpec & g)
{
    if (g.kind() != GroupKind::metacyclic || g.n() % 3 != 0)
        return false;
    const int n2 = g.n() / 3;
    return n2 >= 5 && std::gcd(6, n2) == 1 && mod(g.s(), 3) == 2 && mod(g.s(), n2) == 1;
}

int main_family_n2(const GroupSpec & g)
{
    if (!in_main_family(g))
        throw PreconditionError(g.literal() + " is not C_{3 n2} x|_s C_2 with n2 >= 5, gcd(6, n2) = 1, s = -1 mod 3, s = 1 mod n2");
    return g.n() / 3;
}

GroupSpec family_group(int n2)
{
    if (n2 < 5 || std::gcd(6, n2) != 1)
        throw PreconditionError("n2 must be at least 5 and coprime to 6, got " + std::to_string(n2));
    const int n = 3 * n2;
    for (int s = 2; s < n; ++s)
        if (mod(s, 3) == 2 && mod(s, n2) == 1)
            return GroupSpec::metacyclic(n, s);
    throw std::logic_error("no twist found");
}

void check_decomposition(const Decomposition & d, const Sequence & source)
{
    if (d.blocks.size() != d.sigma.size())
        throw std::logic_error("decomposition has " + std::to_string(d.blocks.size()) + " blocks but "
            + std::to_string(d.sigma.size()) + " sigmas");
    if (!(source_of(d) == source))
        throw std::logic_error("decomposition does not reassemble its source");
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        if (!d.target.contains(d.sigma[i]))
            throw std::logic_error("sigma of block " + std::to_string(i) + " lies outside " + d.target.description());
        if (!pi_set(d.blocks[i]).contains(d.sigma[i]))
            throw std::logic_error("sigma of block " + std::to_string(i) + " is not a product of the block");
    }
}

std::size_t x_coverage(const Decomposition & d)
{
    return static_cast<std::size_t>(
        std::count_if(d.blocks.begin(), d.blocks.end(), [](const Sequence & b) { return x_count(b) > 0; }));
}

Sequence egz_extract(const Sequence & s, int m)
{
    if (m < 1 || !s.group().is_cyclic_kind() || s.group().n() != m)
        throw PreconditionError("egz_extract needs a sequence over C_" + std::to_string(m));
    if (s.length() < 2L * m - 1)
        throw PreconditionError("egz_extract needs at least " + std::to_string(2 * m - 1) + " terms, got "
            + std::to_string(s.length()));
    auto r = has_product_one(s, static_cast<std::size_t>(m), {default_budget, Route::abelian});
    if (!r.witness)
        throw std::logic_error("no zero-sum block of length m in a sequence of length 2m - 1");
    return Sequence(s.group(), r.witness->terms);
}

Decomposition extract_product_H_blocks(const Sequence & s, const Subgroup & h, int count)
{
    const Family f(s.group());
    if (!(h == f.kernel()))
        throw PreconditionError("target must be <x, y^" + std::to_string(f.n2) + ">, got " + h.description());
    if (count < 0)
        throw PreconditionError("block count must be nonnegative");
    const long need = static_cast<long>(count + 1) * f.n2 - 1;
    if (s.length() < need)
        throw PreconditionError("extracting " + std::to_string(count) + " blocks needs at least " + std::to_string(need)
            + " terms, got " + std::to_string(s.length()));
    Decomposition d{{}, s, {}, h};
    for (int i = 0; i < count; ++i) {
        auto b = pull_block(f, d.remainder);
        if (!b)
            throw std::logic_error("zero-sum extraction failed on a long enough sequence");
        d.remainder = remove(d.remainder, *b);
        d.sigma.push_back(block_sigma(*b, h));
        d.blocks.push_back(*b);
    }
    check_decomposition(d, s);
    return d;
}

Decomposition improve_x_coverage(const Decomposition & input)
{
    const Family f(input.target.group());
    const Sequence source = source_of(input);
    Decomposition d = input;

    // Donor slot: index into blocks, or blocks.size() for the remainder.
    auto slot = [&](std::size_t i) -> Sequence & { return i == d.blocks.size() ? d.remainder : d.blocks[i]; };

    auto apply = [&](std::size_t taker, std::size_t donor, const std::vector<Element> & give, const std::vector<Element> & take) {
        Sequence & t = slot(taker);
        Sequence & g = slot(donor);
        const Sequence out(f.g, give);
        const Sequence in(f.g, take);
        t = concat(remove(t, in), out);
        g = concat(remove(g, out), in);
        d.sigma[taker] = block_sigma(d.blocks[taker], d.target);
        if (donor < d.blocks.size())
            d.sigma[donor] = block_sigma(d.blocks[donor], d.target);
        check_decomposition(d, source);
    };

    auto try_move = [&](std::size_t taker) {
        const std::vector<Element> mine = d.blocks[taker].support();
        for (std::size_t donor = 0; donor <= d.blocks.size(); ++donor) {
            if (donor == taker)
                continue;
            const Sequence & g = slot(donor);
            const bool is_block = donor < d.blocks.size();
            const long gx = x_count(g);
            if (gx == 0 || (is_block && gx < 2))
                continue;
            const std::vector<Element> theirs = g.support();
            for (const Element & c : theirs) {
                if (c.eps != 1)
                    continue;
                for (const Element & b : mine)
                    if (f.residue(b) == f.residue(c)) {
                        apply(taker, donor, {c}, {b});
                        return true;
                    }
                for (const Element & c2 : theirs) {
                    if (g.multiplicity(c2) < (c2 == c ? 2 : 1))
                        continue;
                    if (is_block && gx - 1 - c2.eps < 1)
                        continue;
                    for (std::size_t i = 0; i < mine.size(); ++i)
                        for (std::size_t j = i; j < mine.size(); ++j) {
                            const Element & b1 = mine[i];
                            const Element & b2 = mine[j];
                            if (i == j && d.blocks[taker].multiplicity(b1) < 2)
                                continue;
                            if (mod(f.residue(b1) + f.residue(b2) - f.residue(c) - f.residue(c2), f.n2) != 0)
                                continue;
                            apply(taker, donor, {c, c2}, {b1, b2});
                            return true;
                        }
                }
            }
        }
        return false;
    };

    for (bool moved = true; moved;) {
        moved = false;
        for (std::size_t t = 0; t < d.blocks.size() && !moved; ++t)
            if (x_count(d.blocks[t]) == 0)
                moved = try_move(t);
    }
    return d;
}

SwapReplayResult replay_swap_argument(const Decomposition & d, std::size_t cap)
{
    const GroupSpec & g = d.target.group();
    const Family f(g);
    const int n2 = f.n2;
    if (d.blocks.size() != 7)
        throw PreconditionError("swap replay needs seven blocks, got " + std::to_string(d.blocks.size()));
    for (const Sequence & b : d.blocks) {
        if (b.length() != n2 || x_count(b) != 0)
            throw PreconditionError("swap replay needs blocks of " + std::to_string(n2) + " terms from <y>");
        long sum = 0;
        for (const auto & [u, c] : b.counts())
            sum += c * f.residue(u);
        if (mod(sum, n2) != 0)
            throw PreconditionError("swap replay needs blocks whose projection to <y^3> is product-one");
    }

    using State = std::vector<Sequence>;
    auto normalise = [](State s) {
        std::sort(s.begin(), s.end(), [](const Sequence & l, const Sequence & r) { return canonical_key(l) < canonical_key(r); });
        return s;
    };
    auto key_of = [](const State & s) {
        std::string k;
        for (const Sequence & b : s)
            k += canonical_key(b) + '|';
        return k;
    };
    // A block over <y> with zero projection sum multiplies to y^{t n2}; t is its C_3 value.
    auto c3_value = [&](const Sequence & b) {
        long sum = 0;
        for (const auto & [u, c] : b.counts())
            sum += c * u.a;
        return static_cast<int>(mod(sum, g.n()) / n2);
    };
    const GroupSpec c3 = GroupSpec::cyclic(3);

    SwapReplayResult out;
    std::vector<State> states{normalise(d.blocks)};
    std::vector<std::pair<std::size_t, std::string>> parent{{0, ""}};
    std::unordered_map<std::string, std::size_t> seen{{key_of(states[0]), 0}};

    auto finish = [&](std::size_t idx) {
        std::vector<std::string> path;
        for (std::size_t i = idx; i != 0; i = parent[i].first)
            path.push_back(parent[i].second);
        std::reverse(path.begin(), path.end());
        out.trace.insert(out.trace.end(), path.begin(), path.end());
        out.blocks = states[idx];
        out.sigma.clear();
        for (const Sequence & b : out.blocks)
            out.sigma.push_back({0, c3_value(b) * n2});
    };

    for (std::size_t head = 0; head < states.size(); ++head) {
        const State cur = states[head];
        std::vector<Element> values;
        for (const Sequence & b : cur)
            values.push_back({0, c3_value(b)});
        auto r = has_product_one(Sequence(c3, values), 6);
        out.states = states.size();
        if (r.witness) {
            finish(head);
            std::vector<bool> used(7, false);
            for (const Element & v : r.witness->terms)
                for (std::size_t i = 0; i < 7; ++i)
                    if (!used[i] && values[i] == v) {
                        used[i] = true;
                        out.selection.push_back(i);
                        break;
                    }
            out.found = true;
            out.trace.push_back("step=swap-replay result=selection states=" + std::to_string(states.size())
                + " blocks=" + join_indices(out.selection));
            return out;
        }
        // Exchange sub-blocks V, W of one or two terms with equal projection sum between two blocks.
        for (std::size_t l = 0; l < 7; ++l)
            for (std::size_t m = l + 1; m < 7; ++m) {
                const std::vector<Element> sl = cur[l].support();
                const std::vector<Element> sm = cur[m].support();
                auto subs = [&](const Sequence & b, const std::vector<Element> & sup) {
                    std::vector<std::vector<Element>> v;
                    for (std::size_t i = 0; i < sup.size(); ++i) {
                        v.push_back({sup[i]});
                        for (std::size_t j = i; j < sup.size(); ++j)
                            if (j != i || b.multiplicity(sup[i]) >= 2)
                                v.push_back({sup[i], sup[j]});
                    }
                    return v;
                };
                for (const auto & vl : subs(cur[l], sl))
                    for (const auto & vm : subs(cur[m], sm)) {
                        if (vl.size() != vm.size() || vl == vm)
                            continue;
                        long diff = 0;
                        for (const Element & u : vl)
                            diff += f.residue(u);
                        for (const Element & u : vm)
                            diff -= f.residue(u);
                        if (mod(diff, n2) != 0)
                            continue;
                        State next = cur;
                        const Sequence a(g, vl);
                        const Sequence b(g, vm);
                        next[l] = concat(remove(cur[l], a), b);
                        next[m] = concat(remove(cur[m], b), a);
                        next = normalise(next);
                        const std::string k = key_of(next);
                        if (seen.contains(k))
                            continue;
                        if (states.size() >= cap) {
                            finish(0);
                            out.exhausted = false;
                            out.trace.push_back("step=swap-replay result=rigid states=" + std::to_string(states.size())
                                + " exhausted=no");
                            return out;
                        }
                        std::string move = "step=swap lambda=" + std::to_string(l) + " mu=" + std::to_string(m) + " out="
                            + format_sequence_line(a).substr(4) + " in=" + format_sequence_line(b).substr(4);
                        seen.emplace(k, states.size());
                        parent.emplace_back(head, std::move(move));
                        states.push_back(std::move(next));
                    }
            }
    }
    finish(0);
    out.exhausted = true;
    out.states = states.size();
    out.trace.push_back("step=swap-replay result=rigid states=" + std::to_string(states.size()) + " exhausted=yes");
    return out;
}

namespace {

class Ladder {
public:
    Ladder(const Sequence & s, const SearchOptions & options, std::vector<std::string> & trace)
        : s_(s), f_(s.group()), options_(options), trace_(trace)
    {
    }

    std::optional<std::pair<std::vector<Element>, Rung>> run();

private:
    std::optional<std::vector<Element>> sigma_selection(const Decomposition & d);
    std::optional<std::vector<Element>> reflection_resplit(const Decomposition & d);
    std::optional<std::vector<Element>> conjugation(const Decomposition & d);
    std::optional<Decomposition> raise_coverage(const Decomposition & d, const Sequence & work);
    std::optional<std::vector<Element>> swap_replay(const Decomposition & d);

    std::optional<Decomposition> rebuild(std::vector<Sequence> fixed, const Sequence & pool, int more);

    const Sequence & s_;
    Family f_;
    SearchOptions options_;
    std::vector<std::string> & trace_;
};

std::optional<std::vector<Element>> Ladder::sigma_selection(const Decomposition & d)
{
    std::vector<std::vector<Element>> choices;
    std::size_t combos = 1;
    for (const Sequence & b : d.blocks) {
        std::vector<Element> c;
        for (const Element & u : pi_set(b))
            if (d.target.contains(u))
                c.push_back(u);
        combos = std::min<std::size_t>(combos * c.size(), 6562);
        choices.push_back(std::move(c));
    }
    const std::size_t limit = std::min<std::size_t>(combos, 6561);
    std::vector<std::size_t> digit(choices.size(), 0);
    std::set<std::string> tried;
    for (std::size_t step = 0; step < limit; ++step) {
        std::vector<Element> sig;
        for (std::size_t i = 0; i < choices.size(); ++i)
            sig.push_back(choices[i][digit[i]]);
        const Sequence star(f_.g, sig);
        if (tried.insert(canonical_key(star)).second) {
            auto r = has_product_one(star, 6, options_);
            if (r.witness) {
                std::vector<bool> used(sig.size(), false);
                std::vector<Element> terms;
                std::vector<std::size_t> order;
                for (const Element & v : r.witness->terms)
                    for (std::size_t i = 0; i < sig.size(); ++i)
                        if (!used[i] && sig[i] == v) {
                            used[i] = true;
                            order.push_back(i);
                            const auto part = arrange(d.blocks[i], v);
                            terms.insert(terms.end(), part.begin(), part.end());
                            break;
                        }
                trace_.push_back("step=sigma-selection combos=" + std::to_string(tried.size()) + " blocks=" + join_indices(order));
                return terms;
            }
        }
        for (std::size_t i = 0; i < digit.size(); ++i) {
            if (++digit[i] < choices[i].size())
                break;
            digit[i] = 0;
        }
    }
    trace_.push_back("step=sigma-selection result=none combos=" + std::to_string(tried.size())
        + (combos > limit ? " capped=yes" : ""));
    return std::nullopt;
}

std::optional<Decomposition> Ladder::rebuild(std::vector<Sequence> fixed, const Sequence & pool, int more)
{
    Decomposition d{{}, pool, {}, f_.kernel()};
    for (Sequence & b : fixed) {
        d.sigma.push_back(block_sigma(b, d.target));
        d.blocks.push_back(std::move(b));
    }
    for (int i = 0; i < more; ++i) {
        auto b = pull_block(f_, d.remainder);
        if (!b)
            return std::nullopt;
        d.remainder = remove(d.remainder, *b);
        d.sigma.push_back(block_sigma(*b, d.target));
        d.blocks.push_back(*b);
    }
    return improve_x_coverage(d);
}

std::optional<std::vector<Element>> Ladder::reflection_resplit(const Decomposition & d)
{
    std::vector<std::size_t> ones;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < d.blocks.size(); ++i)
        (d.sigma[i] == f_.g.identity() && ones.size() < 5 ? ones : rest).push_back(i);
    if (ones.size() < 5 || rest.size() != 3) {
        trace_.push_back("step=reflection-resplit result=shape identities=" + std::to_string(ones.size()));
        return std::nullopt;
    }
    std::vector<Sequence> tail;
    for (std::size_t i : rest)
        tail.push_back(d.blocks[i]);
    const Sequence u = concat_all(tail, f_.g);
    std::vector<Element> head;
    for (std::size_t i : ones) {
        const auto part = arrange(d.blocks[i], f_.g.identity());
        head.insert(head.end(), part.begin(), part.end());
    }

    // Terms of the three blocks lying in <y^3>: a zero-sum block of n2 of them finishes.
    std::map<Element, long> cube;
    for (const auto & [v, c] : u.counts())
        if (v.eps == 0 && v.a % 3 == 0)
            cube[v] = c;
    const Sequence z(f_.g, cube);
    if (z.length() >= 2L * f_.n2 - 1) {
        auto w = find_product(f_.image_of(z), static_cast<std::size_t>(f_.n2), f_.image.identity());
        if (w) {
            const Sequence t0 = lift(f_, z, w->terms);
            auto terms = head;
            const auto more = t0.terms();
            terms.insert(terms.end(), more.begin(), more.end());
            trace_.push_back("step=reflection-resplit move=cube-block cube-terms=" + std::to_string(z.length()));
            return terms;
        }
    }

    // Re-split the three blocks so each carries an x-term from a different class mod 3.
    std::array<std::vector<Element>, 3> by_class;
    for (const auto & [v, c] : u.counts())
        if (v.eps == 1)
            by_class[v.a % 3].push_back(v);
    for (const Element & h0 : by_class[0])
        for (const Element & h1 : by_class[1])
            for (const Element & h2 : by_class[2]) {
                const std::array<Element, 3> hs{h0, h1, h2};
                Sequence pool = u;
                std::vector<Sequence> fresh;
                bool ok = true;
                for (int i = 0; i < 2 && ok; ++i) {
                    Sequence avail = pool;
                    for (int j = i + 1; j < 3; ++j)
                        avail = remove(avail, hs[j]);
                    auto b = block_through(f_, avail, hs[i]);
                    if (!b) {
                        ok = false;
                        break;
                    }
                    pool = remove(pool, *b);
                    fresh.push_back(*b);
                }
                if (!ok)
                    continue;
                fresh.push_back(pool);
                std::vector<Sequence> blocks;
                for (std::size_t i : ones)
                    blocks.push_back(d.blocks[i]);
                blocks.insert(blocks.end(), fresh.begin(), fresh.end());
                Decomposition nd{{}, d.remainder, {}, d.target};
                for (Sequence & b : blocks) {
                    nd.sigma.push_back(block_sigma(b, d.target));
                    nd.blocks.push_back(std::move(b));
                }
                check_decomposition(nd, source_of(d));
                trace_.push_back("step=reflection-resplit move=resplit x-terms=" + format_element(h0) + ","
                    + format_element(h1) + "," + format_element(h2));
                if (auto w = sigma_selection(nd))
                    return w;
            }
    trace_.push_back("step=reflection-resplit result=none");
    return std::nullopt;
}

std::optional<std::vector<Element>> Ladder::conjugation(const Decomposition & d)
{
    const GroupSpec & g = f_.g;
    std::map<int, std::vector<std::size_t>> by_value;
    std::size_t reflections = 0;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        if (d.sigma[i].eps == 1)
            ++reflections;
        else
            by_value[d.sigma[i].a / f_.n2].push_back(i);
    }
    if (reflections != 1 || by_value.size() != 2) {
        trace_.push_back("step=conjugation result=shape");
        return std::nullopt;
    }
    auto five = by_value.begin()->second;
    auto two = std::next(by_value.begin())->second;
    if (five.size() < two.size())
        std::swap(five, two);
    if (five.size() != 5 || two.size() != 2) {
        trace_.push_back("step=conjugation result=shape");
        return std::nullopt;
    }

    // Arrangement of block i starting with h and multiplying to 1, with h dropped.
    auto after = [&](std::size_t i, const Element & h) -> std::optional<std::vector<Element>> {
        if (!pi_set(d.blocks[i]).contains(g.identity()))
            return std::nullopt;
        auto w = arrange(d.blocks[i], g.identity());
        auto it = std::find(w.begin(), w.end(), h);
        std::rotate(w.begin(), it, w.end());
        w.erase(w.begin());
        return w;
    };
    auto put = [&](std::vector<Element> & out, std::size_t i) {
        const auto part = arrange(d.blocks[i], d.sigma[i]);
        out.insert(out.end(), part.begin(), part.end());
    };
    auto attempt = [&](std::vector<Element> terms, const std::string & where) -> std::optional<std::vector<Element>> {
        if (product_of(g, terms) != g.identity())
            return std::nullopt;
        trace_.push_back("step=conjugation x-term-in=" + where);
        return terms;
    };

    for (std::size_t k = 0; k < five.size(); ++k) {
        const std::size_t i = five[k];
        for (const Element & h : d.blocks[i].support()) {
            if (h.eps != 1)
                continue;
            auto tail = after(i, h);
            if (!tail)
                continue;
            std::vector<Element> terms;
            put(terms, two[0]);
            terms.push_back(h);
            put(terms, two[1]);
            terms.insert(terms.end(), tail->begin(), tail->end());
            for (std::size_t j = 0, used = 0; j < five.size() && used < 3; ++j)
                if (j != k) {
                    put(terms, five[j]);
                    ++used;
                }
            if (auto w = attempt(terms, "five"))
                return w;
        }
    }
    for (std::size_t k = 0; k < two.size(); ++k) {
        const std::size_t i = two[k];
        for (const Element & h : d.blocks[i].support()) {
            if (h.eps != 1)
                continue;
            auto tail = after(i, h);
            if (!tail)
                continue;
            std::vector<Element> terms;
            put(terms, five[0]);
            put(terms, five[1]);
            terms.push_back(h);
            put(terms, five[2]);
            put(terms, five[3]);
            terms.insert(terms.end(), tail->begin(), tail->end());
            put(terms, two[1 - k]);
            if (auto w = attempt(terms, "two"))
                return w;
        }
    }
    trace_.push_back("step=conjugation result=none");
    return std::nullopt;
}

std::optional<std::vector<Element>> Ladder::swap_replay(const Decomposition & d)
{
    std::vector<Sequence> ys;
    for (std::size_t i = 0; i < d.blocks.size(); ++i)
        if (d.sigma[i].eps == 0)
            ys.push_back(d.blocks[i]);
    if (ys.size() != 7 || std::any_of(ys.begin(), ys.end(), [](const Sequence & b) { return x_count(b) > 0; })) {
        trace_.push_back("step=swap-replay result=shape");
        return std::nullopt;
    }
    Decomposition seven{ys, Sequence(f_.g), {}, Subgroup::rotations(f_.g, f_.n2)};
    for (const Sequence & b : seven.blocks)
        seven.sigma.push_back(block_sigma(b, seven.target));
    const SwapReplayResult r = replay_swap_argument(seven);
    trace_.insert(trace_.end(), r.trace.begin(), r.trace.end());
    if (!r.found)
        return std::nullopt;
    std::vector<Element> terms;
    for (std::size_t i : r.selection) {
        const auto part = r.blocks[i].terms();
        terms.insert(terms.end(), part.begin(), part.end());
    }
    return terms;
}

std::optional<Decomposition> Ladder::raise_coverage(const Decomposition & d, const Sequence & work)
{
    std::size_t xi = d.blocks.size();
    std::vector<Sequence> ys;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        if (d.sigma[i].eps == 1)
            xi = i;
        else
            ys.push_back(d.blocks[i]);
    }
    if (xi == d.blocks.size())
        return std::nullopt;
    const Sequence y_union = concat_all(ys, f_.g);

    auto block_with = [&](const Element & h) -> std::optional<Sequence> {
        auto w = find_product(f_.image_of(y_union), static_cast<std::size_t>(f_.n2 - 1),
            {0, static_cast<int>(mod(-f_.residue(h), f_.n2))});
        if (!w)
            return std::nullopt;
        return with_term(lift(f_, y_union, w->terms), h);
    };

    for (const Element & h : d.remainder.support()) {
        if (h.eps != 1)
            continue;
        if (auto t1 = block_with(h)) {
            trace_.push_back("step=raise-coverage source=remainder x-term=" + format_element(h));
            const Sequence pool = remove(remove(work, *t1), d.blocks[xi]);
            return rebuild({*t1, d.blocks[xi]}, pool, 6);
        }
    }
    if (x_count(d.blocks[xi]) >= 2)
        for (const Element & h : d.blocks[xi].support()) {
            if (h.eps != 1)
                continue;
            if (auto t1 = block_with(h)) {
                trace_.push_back("step=raise-coverage source=reflection-block x-term=" + format_element(h));
                return rebuild({*t1}, remove(work, *t1), 7);
            }
        }
    trace_.push_back("step=raise-coverage result=none");
    return std::nullopt;
}

std::optional<std::pair<std::vector<Element>, Rung>> Ladder::run()
{
    const int n2 = f_.n2;
    // Trim to 9 n2 - 1 terms keeping at least two x-terms.
    Sequence work = s_;
    while (work.length() > 9L * n2 - 1) {
        const auto sup = work.support();
        auto it = std::find_if(sup.rbegin(), sup.rend(), [](const Element & u) { return u.eps == 0; });
        work = remove(work, it != sup.rend() ? *it : sup.back());
    }
    Decomposition d = improve_x_coverage(extract_product_H_blocks(work, f_.kernel(), 8));
    trace_.push_back("step=extract blocks=8 coverage=" + std::to_string(x_coverage(d)));

    for (int round = 0; round < 8; ++round) {
        if (auto w = sigma_selection(d))
            return std::pair{*w, Rung::sigma_selection};
        const auto reflections = std::count_if(d.sigma.begin(), d.sigma.end(), [](const Element & u) { return u.eps == 1; });
        if (reflections >= 2) {
            trace_.push_back("step=case case=1 reflections=" + std::to_string(reflections));
            if (auto w = reflection_resplit(d))
                return std::pair{*w, Rung::reflection_resplit};
            return std::nullopt;
        }
        trace_.push_back("step=case case=2 reflections=" + std::to_string(reflections));
        if (auto w = conjugation(d))
            return std::pair{*w, Rung::conjugation};
        if (auto w = swap_replay(d))
            return std::pair{*w, Rung::swap_replay};
        auto next = raise_coverage(d, work);
        if (!next)
            return std::nullopt;
        d = *next;
        trace_.push_back("step=round round=" + std::to_string(round + 1) + " coverage=" + std::to_string(x_coverage(d)));
    }
    return std::nullopt;
}

} // namespace

BigProductResult find_big_product_one(const Sequence & s, const SearchOptions & options)
{
    const Family f(s.group());
    const int n2 = f.n2;
    const std::size_t k = 6 * static_cast<std::size_t>(n2);
    if (s.length() < 9L * n2 - 1)
        throw PreconditionError("needs at least " + std::to_string(9 * n2 - 1) + " terms, got " + std::to_string(s.length()));

    BigProductResult res;
    auto accept = [&](std::vector<Element> terms, Rung rung) {
        ProductWitness w{std::move(terms), s.group().identity()};
        const VerifyResult v = verify_witness(s, w, w.product);
        if (!v.ok || w.terms.size() != k)
            throw std::logic_error("rung " + rung_name(rung) + " produced an invalid witness: " + v.detail);
        res.witness = std::move(w);
        res.rung = rung;
        res.trace.push_back("step=witness rung=" + rung_name(rung));
        return res;
    };

    const Sequence xs = restrict(s, ReflectionPart{});
    const Sequence ys = restrict(s, RotationPart{});
    res.trace.push_back("step=start length=" + std::to_string(s.length()) + " reflections=" + std::to_string(xs.length()));
    if (xs.length() <= 1) {
        const int n = s.group().n();
        if (ys.length() >= 3L * n - 1) {
            std::map<Element, long> counts;
            for (const auto & [u, c] : ys.counts())
                counts[u] = c;
            const Sequence cyc(GroupSpec::cyclic(n), counts);
            const Sequence b1 = egz_extract(cyc, n);
            const Sequence b2 = egz_extract(remove(cyc, b1), n);
            std::vector<Element> terms = b1.terms();
            const auto more = b2.terms();
            terms.insert(terms.end(), more.begin(), more.end());
            return accept(terms, Rung::cyclic_split);
        }
        res.rung = Rung::cyclic_inverse;
        if (auto w = find_product(ys, k, s.group().identity(), options))
            return accept(w->terms, Rung::cyclic_inverse);
        res.trace.push_back("step=free rung=cyclic-inverse");
        return res;
    }

    try {
        Ladder ladder(s, options, res.trace);
        if (auto r = ladder.run())
            return accept(r->first, r->second);
    } catch (const BudgetExceeded & e) {
        res.trace.push_back(std::string("step=pipeline result=budget detail=") + e.what());
    }

    res.rung = Rung::exact_search;
    auto r = has_product_one(s, k, options);
    if (r.witness)
        return accept(r.witness->terms, Rung::exact_search);
    res.trace.push_back("step=free rung=exact-search");
    return res;
}

std::string rung_name(Rung r)
{
    switch (r) {
    case Rung::cyclic_split: return "cyclic-split";
    case Rung::cyclic_inverse: return "cyclic-inverse";
    case Rung::sigma_selection: return "sigma-selection";
    case Rung::reflection_resplit: return "reflection-resplit";
    case Rung::conjugation: return "conjugation";
    case Rung::swap_replay: return "swap-replay";
    case Rung::exact_search: return "exact-search";
    }
    return "?";
}

StructureReport singleton_pi_structure(const Sequence & s, const Factorization & f)
{
    const GroupSpec & g = s.group();
    if (g.kind() != GroupKind::metacyclic || g.n() % 2 == 0)
        throw PreconditionError("structure check needs a metacyclic group with odd n");
    if (!(factorize(g) == f))
        throw PreconditionError("factorization does not belong to " + g.literal());
    if (s.length() != f.n2)
        throw PreconditionError("structure check needs exactly n2 = " + std::to_string(f.n2) + " terms, got "
            + std::to_string(s.length()));
    const ElementSet pi = pi_set(s);
    if (pi.size() != 1)
        throw PreconditionError("pi(S) has " + std::to_string(pi.size()) + " elements, not one");

    StructureReport rep;
    rep.product = *pi.begin();
    const long xs = x_count(s);
    if (rep.product.eps == 0 && rep.product.a % f.n2 == 0) {
        if (xs == 0) {
            rep.detail = "no x-term";
            return rep;
        }
        rep.clause = StructureClause::identity_product;
        rep.holds = rep.product == g.identity();
        rep.detail = "product " + format_element(rep.product);
        return rep;
    }
    if (rep.product.eps == 1 && rep.product.a % f.n2 == 0) {
        rep.clause = StructureClause::reflection_pattern;
        std::optional<int> beta;
        bool same = true;
        bool zero = true;
        for (const auto & [u, c] : s.counts()) {
            if (u.eps == 1) {
                if (!beta)
                    beta = u.a % f.n1;
                same = same && u.a % f.n1 == *beta;
            } else {
                zero = zero && u.a % f.n1 == 0;
            }
        }
        const bool odd = xs % 2 == 1;
        const bool matches = beta && rep.product.a % f.n1 == *beta;
        rep.holds = odd && same && zero && matches;
        rep.detail = std::string("x-terms ") + std::to_string(xs) + (odd ? " (odd)" : " (even)")
            + (same ? ", x-exponents agree mod n1" : ", x-exponents differ mod n1")
            + (zero ? ", y-exponents 0 mod n1" : ", some y-exponent nonzero mod n1")
            + (matches ? ", product exponent matches" : ", product exponent differs");
        return rep;
    }
    rep.detail = "product " + format_element(rep.product) + " outside <y^n2> and x<y^n2>";
    return rep;
}

std::string clause_name(StructureClause c)
{
    switch (c) {
    case StructureClause::identity_product: return "identity-product";
    case StructureClause::reflection_pattern: return "reflection-pattern";
    case StructureClause::not_applicable: return "not-applicable";
    }
    return "?";
}

} // namespace zerosum
