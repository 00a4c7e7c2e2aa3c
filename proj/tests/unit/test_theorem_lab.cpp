#include "zerosum/errors.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/theorem_lab.hpp"
#include "zerosum/verify.hpp"

#include <doctest.h>

#include <random>

using namespace zerosum;

namespace {

// Exponent of the <y^3> component of u, computed by brute force over CRT.
int cube_part(const GroupSpec & g, const Element & u)
{
    const int n2 = g.n() / 3;
    for (int e = 0; e < g.n(); e += 3)
        if ((e - u.a) % n2 == 0)
            return e;
    return -1;
}

bool zero_projection(const Sequence & b)
{
    long sum = 0;
    for (const Element & u : b.terms())
        sum += cube_part(b.group(), u);
    return sum % b.group().n() == 0;
}

Sequence random_sequence(const GroupSpec & g, long length, std::mt19937_64 & rng)
{
    std::vector<Element> terms;
    for (long i = 0; i < length; ++i)
        terms.push_back(g.element_at(static_cast<int>(rng() % static_cast<unsigned long>(g.order()))));
    return Sequence(g, terms);
}

Sequence blocks_over_y(const GroupSpec & g, std::initializer_list<std::vector<int>> blocks, std::vector<Sequence> & out)
{
    Sequence all(g);
    for (const auto & b : blocks) {
        std::vector<Element> terms;
        for (int a : b)
            terms.push_back({0, a});
        out.emplace_back(g, terms);
        all = concat(all, out.back());
    }
    return all;
}

} // namespace

TEST_CASE("main family membership")
{
    CHECK(in_main_family(GroupSpec::metacyclic(15, 11)));
    CHECK(in_main_family(GroupSpec::metacyclic(21, 8)));
    CHECK_FALSE(in_main_family(GroupSpec::metacyclic(21, 13)));
    CHECK_FALSE(in_main_family(GroupSpec::metacyclic(15, 4)));
    CHECK_FALSE(in_main_family(GroupSpec::metacyclic(15, 1)));
    CHECK_FALSE(in_main_family(GroupSpec::metacyclic(9, 8)));
    CHECK_FALSE(in_main_family(GroupSpec::cyclic(15)));
    CHECK(family_group(5) == GroupSpec::metacyclic(15, 11));
    CHECK(family_group(7) == GroupSpec::metacyclic(21, 8));
    CHECK(family_group(11) == GroupSpec::metacyclic(33, 23));
    CHECK_THROWS_AS(family_group(6), PreconditionError);
    CHECK_THROWS_AS(main_family_n2(GroupSpec::metacyclic(15, 4)), PreconditionError);
}

TEST_CASE("zero-sum extraction over cyclic groups")
{
    for (int m = 1; m <= 9; ++m) {
        GroupSpec c = GroupSpec::cyclic(m);
        Sequence same(c, std::map<Element, long>{{c.y(), 2 * m - 1}});
        CHECK(egz_extract(same, m) == Sequence(c, std::map<Element, long>{{c.y(), m}}));
        if (m > 1) {
            Sequence mixed(c, std::map<Element, long>{{c.identity(), m - 1}, {c.y(), m}});
            const Sequence b = egz_extract(mixed, m);
            CHECK(b.length() == m);
            CHECK(b.divides(mixed));
            long sum = 0;
            for (const Element & u : b.terms())
                sum += u.a;
            CHECK(sum % m == 0);
        }
        CHECK_THROWS_AS(egz_extract(Sequence(c, std::map<Element, long>{{c.y(), 2 * m - 2}}), m), PreconditionError);
    }
    std::mt19937_64 rng(5);
    for (int m = 2; m <= 11; ++m) {
        GroupSpec c = GroupSpec::cyclic(m);
        for (int trial = 0; trial < 30; ++trial) {
            const Sequence s = random_sequence(c, 3L * m - 1, rng);
            const Sequence b1 = egz_extract(s, m);
            const Sequence rest = remove(s, b1);
            const Sequence b2 = egz_extract(rest, m);
            CHECK(b2.divides(rest));
            for (const Sequence & b : {b1, b2}) {
                long sum = 0;
                for (const Element & u : b.terms())
                    sum += u.a;
                CHECK(sum % m == 0);
                CHECK(b.length() == m);
            }
        }
    }
    CHECK_THROWS_AS(egz_extract(Sequence(GroupSpec::cyclic(4), std::map<Element, long>{{{0, 1}, 9}}), 5), PreconditionError);
}

TEST_CASE("block extraction into product-H blocks")
{
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    const std::vector<Element> gens{g.x(), {0, 5}};
    const Subgroup h = Subgroup::generated(g, gens);
    CHECK(h.size() == 6);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Sequence s = random_sequence(g, 44, rng);
        const Decomposition d = extract_product_H_blocks(s, h, 8);
        REQUIRE(d.blocks.size() == 8);
        Sequence joined = d.remainder;
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(d.blocks[i].length() == 5);
            CHECK(zero_projection(d.blocks[i]));
            CHECK(h.contains(d.sigma[i]));
            CHECK(pi_set(d.blocks[i]).contains(d.sigma[i]));
            joined = concat(joined, d.blocks[i]);
        }
        CHECK(joined == s);
        CHECK(d.remainder.length() == 4);
    }

    // Every block of a sequence inside H qualifies.
    std::vector<Element> inside;
    for (int i = 0; i < 44; ++i)
        inside.push_back(h.elements()[static_cast<std::size_t>(i) % 6]);
    const Decomposition d = extract_product_H_blocks(Sequence(g, inside), h, 8);
    CHECK(d.blocks.size() == 8);

    CHECK_THROWS_AS(extract_product_H_blocks(random_sequence(g, 43, rng), h, 8), PreconditionError);
    CHECK_THROWS_AS(extract_product_H_blocks(random_sequence(g, 44, rng), Subgroup::rotations(g, 5), 8), PreconditionError);
    CHECK_THROWS_AS(extract_product_H_blocks(random_sequence(GroupSpec::metacyclic(15, 4), 44, rng), h, 8), PreconditionError);
}

TEST_CASE("x-coverage improvement")
{
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    const std::vector<Element> gens{g.x(), {0, 5}};
    const Subgroup h = Subgroup::generated(g, gens);
    Sequence zeros(g, std::map<Element, long>{{g.identity(), 5}});
    Decomposition d{{}, Sequence(g, std::map<Element, long>{{g.x(), 3}, {{0, 1}, 1}}), {}, h};
    for (int i = 0; i < 8; ++i) {
        d.blocks.push_back(zeros);
        d.sigma.push_back(g.identity());
    }
    const Sequence source = concat(d.remainder, Sequence(g, std::map<Element, long>{{g.identity(), 40}}));
    check_decomposition(d, source);
    CHECK(x_coverage(d) == 0);
    const Decomposition better = improve_x_coverage(d);
    CHECK(x_coverage(better) == 3);
    check_decomposition(better, source);
    for (const Sequence & b : better.blocks)
        CHECK(zero_projection(b));

    // Already maximal: nothing changes.
    const Decomposition again = improve_x_coverage(better);
    CHECK(x_coverage(again) == 3);
    CHECK(again.remainder == better.remainder);

    // A pair exchange: the only x-term needs a partner to match a block's projection sum.
    Decomposition p{{}, Sequence(g, std::map<Element, long>{{{1, 1}, 1}, {{0, 1}, 1}}), {}, h};
    p.blocks.push_back(Sequence(g, std::map<Element, long>{{{0, 2}, 1}, {{0, 3}, 1}, {{0, 10}, 1}, {g.identity(), 2}}));
    p.sigma.push_back(*pi_set(p.blocks[0]).begin());
    const Sequence psource = concat(p.blocks[0], p.remainder);
    check_decomposition(p, psource);
    const Decomposition pb = improve_x_coverage(p);
    CHECK(x_coverage(pb) == 1);
    check_decomposition(pb, psource);
}

TEST_CASE("swap replay selections and rigid reports")
{
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    const Subgroup g2 = Subgroup::rotations(g, 5);
    auto make = [&](std::initializer_list<std::vector<int>> spec) {
        std::vector<Sequence> blocks;
        blocks_over_y(g, spec, blocks);
        Decomposition d{blocks, Sequence(g), {}, g2};
        for (const Sequence & b : blocks) {
            long sum = 0;
            for (const Element & u : b.terms())
                sum += u.a;
            d.sigma.push_back({0, static_cast<int>(sum % 15)});
        }
        return d;
    };
    auto c3_values = [](const std::vector<Sequence> & blocks) {
        std::vector<int> v;
        for (const Sequence & b : blocks) {
            long sum = 0;
            for (const Element & u : b.terms())
                sum += u.a;
            v.push_back(static_cast<int>(sum % 15) / 5);
        }
        return v;
    };

    SUBCASE("six identities")
    {
        const auto d = make({{0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0},
            {0, 0, 0, 0, 0}, {5, 0, 0, 0, 0}});
        const SwapReplayResult r = replay_swap_argument(d);
        CHECK(r.found);
        CHECK(r.states == 1);
        REQUIRE(r.selection.size() == 6);
        const auto v = c3_values(r.blocks);
        int total = 0;
        for (std::size_t i : r.selection)
            total += v[i];
        CHECK(total % 3 == 0);
    }
    SUBCASE("rigid five-two shape")
    {
        const auto d = make({{1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1},
            {2, 2, 2, 2, 2}, {2, 2, 2, 2, 2}});
        const SwapReplayResult r = replay_swap_argument(d);
        CHECK_FALSE(r.found);
        CHECK(r.exhausted);
        const auto v = c3_values(r.blocks);
        for (std::size_t skip = 0; skip < 7; ++skip) {
            int total = 0;
            for (std::size_t i = 0; i < 7; ++i)
                if (i != skip)
                    total += v[i];
            CHECK(total % 3 != 0);
        }
    }
    SUBCASE("one swap opens a selection")
    {
        const auto d = make({{1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1},
            {10, 0, 0, 0, 0}, {5, 5, 0, 0, 0}});
        const SwapReplayResult r = replay_swap_argument(d);
        CHECK(r.found);
        CHECK(r.states > 1);
        CHECK_FALSE(r.trace.empty());
        REQUIRE(r.selection.size() == 6);
        const auto v = c3_values(r.blocks);
        int total = 0;
        Sequence joined(g);
        for (std::size_t i : r.selection)
            total += v[i];
        for (const Sequence & b : r.blocks) {
            CHECK(zero_projection(b));
            joined = concat(joined, b);
        }
        CHECK(total % 3 == 0);
        CHECK(joined.length() == 35);
    }
    SUBCASE("a small cap stops the search")
    {
        const auto d = make({{1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1},
            {10, 0, 0, 0, 0}, {5, 5, 0, 0, 0}});
        const SwapReplayResult r = replay_swap_argument(d, 1);
        CHECK_FALSE(r.found);
        CHECK_FALSE(r.exhausted);
    }
    CHECK_THROWS_AS(replay_swap_argument(make({{1, 1, 1, 1, 1}})), PreconditionError);
    CHECK_THROWS_AS(replay_swap_argument(make({{1, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1},
                        {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}})),
        PreconditionError);
}

TEST_CASE("conjugating a rotation of order dividing n2 by a reflection")
{
    for (int n2 : {5, 7}) {
        GroupSpec g = family_group(n2);
        for (int a = 0; a < g.n(); ++a) {
            const Element h{1, a};
            for (int t = -3; t <= 3; ++t) {
                const Element r = g.pow({0, n2}, t);
                CHECK(g.mul(g.mul(h, r), g.inv(h)) == g.pow({0, n2}, static_cast<long long>(t) * g.s()));
                CHECK(g.pow({0, n2}, static_cast<long long>(t) * g.s() + t) == g.identity());
            }
        }
    }
}

TEST_CASE("big product-one witnesses")
{
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    const auto is_witness = [&](const Sequence & s, const BigProductResult & r) {
        return r.witness && r.witness->terms.size() == 30 && verify_witness(s, *r.witness, g.identity()).ok;
    };

    const Sequence ys(g, std::map<Element, long>{{g.y(), 45}});
    const BigProductResult r = find_big_product_one(ys);
    REQUIRE(is_witness(ys, r));
    CHECK(Sequence(g, r.witness->terms) == Sequence(g, std::map<Element, long>{{g.y(), 30}}));
    CHECK(r.rung == Rung::cyclic_split);

    for (int t1 = 0; t1 < 15; ++t1)
        for (int t2 = 0; t2 < 15; t2 += 4) {
            if (gcd_ll(t1 - t2, 15) != 1)
                continue;
            const Sequence base = template_instance(g, TemplateKind::rotation_pair_reflection, t1, t2, (2 * t1) % 15);
            CHECK_FALSE(find_big_product_one(base).witness);
            for (const Element & extra : g.elements()) {
                const Sequence s = with_term(base, extra);
                CHECK(is_witness(s, find_big_product_one(s)));
            }
        }

    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const Sequence s = random_sequence(g, 45, rng);
        const BigProductResult b = find_big_product_one(s);
        CHECK(is_witness(s, b));
        CHECK(b.trace.back() == "step=witness rung=" + rung_name(b.rung));
    }

    GroupSpec g7 = family_group(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Sequence s = random_sequence(g7, 63, rng);
        const BigProductResult b = find_big_product_one(s);
        REQUIRE(b.witness);
        CHECK(b.witness->terms.size() == 42);
        CHECK(verify_witness(s, *b.witness, g7.identity()).ok);
    }

    CHECK_THROWS_AS(find_big_product_one(random_sequence(g, 43, rng)), PreconditionError);
    CHECK_THROWS_AS(find_big_product_one(random_sequence(GroupSpec::metacyclic(15, 4), 45, rng)), PreconditionError);
}

TEST_CASE("singleton product structure")
{
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    const Factorization f = factorize(g);

    const Sequence two_x(g, std::map<Element, long>{{g.identity(), 3}, {g.x(), 2}});
    const StructureReport one = singleton_pi_structure(two_x, f);
    CHECK(one.clause == StructureClause::identity_product);
    CHECK(one.holds);
    CHECK(one.product == g.identity());

    for (int beta : {0, 5, 10}) {
        const Sequence s(g, std::map<Element, long>{{g.identity(), 4}, {{1, beta}, 1}});
        const StructureReport rep = singleton_pi_structure(s, f);
        CHECK(rep.clause == StructureClause::reflection_pattern);
        CHECK(rep.holds);
        CHECK(rep.product == Element{1, beta});
    }

    CHECK_THROWS_AS(singleton_pi_structure(Sequence(g, std::map<Element, long>{{g.y(), 4}, {g.x(), 1}}), f), PreconditionError);
    CHECK_THROWS_AS(singleton_pi_structure(Sequence(g, std::map<Element, long>{{g.y(), 4}}), f), PreconditionError);
    CHECK_THROWS_AS(singleton_pi_structure(two_x, Factorization{5, 3}), PreconditionError);

    // Whenever a clause applies to a random singleton-pi sequence, its conclusion holds.
    std::mt19937_64 rng(77);
    const std::vector<int> alphabet{0, 3, 5, 6, 9, 10, 12};
    int applied = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        std::vector<Element> terms;
        for (int i = 0; i < 5; ++i)
            terms.push_back({static_cast<int>(rng() % 3 == 0), alphabet[rng() % alphabet.size()]});
        const Sequence s(g, terms);
        if (pi_set(s).size() != 1)
            continue;
        const StructureReport rep = singleton_pi_structure(s, f);
        if (rep.clause != StructureClause::not_applicable) {
            ++applied;
            CHECK_MESSAGE(rep.holds, format_sequence_line(s), " ", rep.detail);
        }
    }
    CHECK(applied > 50);
}
