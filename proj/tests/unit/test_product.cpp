#include "oracles/oracles.hpp"
#include "zerosum/errors.hpp"
#include "zerosum/product.hpp"
#include "zerosum/verify.hpp"

#include <doctest.h>

#include <random>

using namespace zerosum;

namespace {

Sequence seq(const GroupSpec & g, std::map<Element, long> counts)
{
    return Sequence(g, std::move(counts));
}

Sequence random_sequence(const GroupSpec & g, std::mt19937_64 & rng, int min_len, int max_len, int support_cap = 0)
{
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_int_distribution<int> pick(0, g.order() - 1);
    std::vector<Element> pool;
    if (support_cap > 0)
        for (int i = 0; i < support_cap; ++i)
            pool.push_back(g.element_at(pick(rng)));
    std::vector<Element> terms;
    for (int i = len(rng); i > 0; --i) {
        if (pool.empty())
            terms.push_back(g.element_at(pick(rng)));
        else
            terms.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    }
    return Sequence(g, terms);
}

Element ordered_product(const GroupSpec & g, const std::vector<Element> & terms)
{
    Element acc = g.identity();
    for (const Element & u : terms)
        acc = g.mul(acc, u);
    return acc;
}

} // namespace

TEST_CASE("product sets of small sequences")
{
    GroupSpec d6 = GroupSpec::metacyclic(3, 2);
    CHECK(pi_set(seq(d6, {{d6.x(), 2}})) == ElementSet{d6.identity()});

    GroupSpec g = GroupSpec::metacyclic(15, 11);
    for (int a = 0; a < 15; a += 4)
        for (int b = 0; b < 15; b += 3) {
            if (a == b)
                continue;
            ElementSet expected{{0, (11 * a + b) % 15}, {0, (11 * b + a) % 15}};
            CHECK(pi_set(seq(g, {{{1, a}, 1}, {{1, b}, 1}})) == expected);
        }

    GroupSpec c7 = GroupSpec::cyclic(7);
    CHECK(pi_set(seq(c7, {{{0, 3}, 4}, {{0, 5}, 2}})) == ElementSet{{0, (12 + 10) % 7}});
    CHECK_THROWS_AS(pi_set(Sequence(c7)), PreconditionError);
}

TEST_CASE("subproduct sets at the ends of the range")
{
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        Sequence s = random_sequence(g, rng, 1, 15);
        CHECK(subproducts(s, 0).members == ElementSet{g.identity()});
        auto support = s.support();
        CHECK(subproducts(s, 1).members == ElementSet(support.begin(), support.end()));
        CHECK_THROWS_AS(subproducts(s, static_cast<std::size_t>(s.length()) + 1), PreconditionError);
    }
}

TEST_CASE("abelian subproducts agree with brute force and knapsack oracles")
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> order(1, 30);
    for (int i = 0; i < 2000; ++i) {
        GroupSpec g = GroupSpec::cyclic(order(rng));
        Sequence s = random_sequence(g, rng, 1, 20);
        std::size_t k = std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(s.length()))(rng);
        CAPTURE(format_sequence_file(s));
        CAPTURE(k);
        ElementSet got = subproducts(s, k).members;
        if (s.length() <= 12)
            CHECK(got == oracle::subset_sums(s, k));
        CHECK(got == oracle::knapsack(s, k));
    }
}

TEST_CASE("every route agrees with the factorial oracle")
{
    std::mt19937_64 rng(23);
    auto groups = oracle::small_groups(10);
    for (int i = 0; i < 400; ++i) {
        const GroupSpec & g = groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
        Sequence s = random_sequence(g, rng, 1, 8);
        std::size_t k = std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(s.length()))(rng);
        CAPTURE(format_sequence_file(s));
        CAPTURE(k);
        ElementSet expected = oracle::factorial_subproducts(s, k);
        CHECK(subproducts(s, k).members == expected);
        CHECK(subproducts(s, k, {default_budget, Route::state_search}).members == expected);
        CHECK(subproducts(s, k, {default_budget, Route::reflection_split}).members == expected);
        if (is_abelian_instance(s))
            CHECK(subproducts(s, k, {default_budget, Route::abelian}).members == expected);
    }
}

TEST_CASE("routes agree on long sequences with small support")
{
    std::mt19937_64 rng(29);
    for (const GroupSpec & g : {GroupSpec::metacyclic(15, 11), GroupSpec::metacyclic(21, 8), GroupSpec::metacyclic(12, 5)}) {
        for (int i = 0; i < 40; ++i) {
            Sequence s = random_sequence(g, rng, 10, 30, 4);
            std::size_t k = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(s.length()))(rng);
            CAPTURE(format_sequence_file(s));
            CAPTURE(k);
            ElementSet a = subproducts(s, k, {default_budget, Route::state_search}).members;
            ElementSet b = subproducts(s, k, {default_budget, Route::reflection_split}).members;
            CHECK(a == b);
            for (const Element & target : g.elements()) {
                auto w = find_product(s, k, target, {default_budget, Route::reflection_split});
                CHECK(w.has_value() == (a.count(target) == 1));
                if (w)
                    CHECK(verify_witness(s, *w, target).ok);
            }
        }
    }
}

TEST_CASE("abelian route refuses non-commuting input")
{
    GroupSpec d6 = GroupSpec::metacyclic(3, 2);
    CHECK_THROWS_AS(subproducts(seq(d6, {{d6.x(), 1}, {d6.y(), 1}}), 2, {default_budget, Route::abelian}), PreconditionError);
    CHECK(is_abelian_instance(seq(d6, {{d6.y(), 3}})));
    CHECK(resolve_route(seq(d6, {{d6.y(), 3}}), 2, {}) == Route::abelian);
}

TEST_CASE("product-one detection")
{
    GroupSpec d6 = GroupSpec::metacyclic(3, 2);
    auto r = has_product_one(seq(d6, {{d6.identity(), 6}}), 6);
    REQUIRE(r.found);
    CHECK(r.witness->terms == std::vector<Element>(6, d6.identity()));

    GroupSpec g = GroupSpec::metacyclic(15, 11);
    Sequence extremal = seq(g, {{{0, 1}, 29}, {{0, 2}, 14}, {{1, 7}, 1}});
    CHECK_FALSE(has_product_one(extremal, 30).found);
    CHECK_FALSE(has_product_one(extremal, 30, {default_budget, Route::state_search}).found);

    Sequence special = seq(d6, {{d6.identity(), 5}, {{1, 0}, 1}, {{1, 1}, 1}, {{1, 2}, 1}});
    CHECK_FALSE(has_product_one(special, 6).found);
}

TEST_CASE("witness properties")
{
    std::mt19937_64 rng(31);
    auto groups = oracle::small_groups(42);
    for (int i = 0; i < 500; ++i) {
        const GroupSpec & g = groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
        Sequence s = random_sequence(g, rng, 1, 24, 5);
        std::size_t k = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(s.length()))(rng);
        auto r = has_product_one(s, k);
        if (!r.found)
            continue;
        const auto & terms = r.witness->terms;
        CHECK(terms.size() == k);
        CHECK(verify_witness(s, *r.witness, g.identity()).ok);
        // Every cyclic rotation of a product-one arrangement is product-one.
        for (std::size_t shift = 0; shift < terms.size(); ++shift) {
            std::vector<Element> rotated(terms.begin() + static_cast<long>(shift), terms.end());
            rotated.insert(rotated.end(), terms.begin(), terms.begin() + static_cast<long>(shift));
            CHECK(ordered_product(g, rotated) == g.identity());
        }
        // Any supersequence keeps the product-one subsequence.
        Sequence bigger = concat(s, random_sequence(g, rng, 0, 5));
        CHECK(has_product_one(bigger, k).found);
    }
}

TEST_CASE("product sets lie in one coset of the commutator subgroup")
{
    std::mt19937_64 rng(37);
    for (const GroupSpec & g : oracle::small_groups(30)) {
        if (g.is_cyclic_kind())
            continue;
        Subgroup commutator = Subgroup::rotations(g, static_cast<int>(gcd_ll(g.n(), g.s() - 1)));
        for (int i = 0; i < 20; ++i) {
            Sequence s = random_sequence(g, rng, 1, 10);
            ElementSet pi = pi_set(s);
            const Element first_inv = g.inv(*pi.begin());
            for (const Element & u : pi)
                CHECK(commutator.contains(g.mul(first_inv, u)));
        }
    }
}

TEST_CASE("stabilizers of subproduct sets are maximal")
{
    std::mt19937_64 rng(41);
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    for (int i = 0; i < 100; ++i) {
        Sequence s = random_sequence(g, rng, 1, 20, 6);
        std::size_t k = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(s.length()))(rng);
        SubproductSet sp = subproducts(s, k);
        for (const Element & h : sp.stabilizer.elements())
            for (const Element & u : sp.members)
                CHECK(sp.members.count(g.mul(h, u)) == 1);
        for (const Element & h : g.elements()) {
            if (sp.stabilizer.contains(h))
                continue;
            bool fixes = true;
            for (const Element & u : sp.members)
                fixes &= sp.members.count(g.mul(h, u)) == 1;
            CHECK_FALSE(fixes);
        }
    }
}

TEST_CASE("budget is enforced")
{
    GroupSpec g = GroupSpec::metacyclic(15, 11);
    std::mt19937_64 rng(43);
    Sequence s = random_sequence(g, rng, 30, 30);
    CHECK_THROWS_AS(subproducts(s, 15, {1000, Route::state_search}), BudgetExceeded);
    CHECK_THROWS_AS(subproducts(s, 15, {10, Route::reflection_split}), BudgetExceeded);
    CHECK_NOTHROW(subproducts(s, 15));
}

TEST_CASE("witness verification")
{
    GroupSpec d6 = GroupSpec::metacyclic(3, 2);
    Sequence s = seq(d6, {{d6.x(), 2}, {d6.y(), 1}});
    ProductWitness w{{d6.x(), d6.y(), d6.x()}, {0, 2}};
    CHECK(verify_witness(s, w, {0, 2}).ok);

    auto bad = verify_witness(s, w, {0, 1});
    CHECK_FALSE(bad.ok);
    CHECK(bad.reason == VerifyReason::product_mismatch);

    ProductWitness extra{{d6.x(), d6.x(), d6.x()}, d6.x()};
    CHECK(verify_witness(s, extra, d6.x()).reason == VerifyReason::not_a_subsequence);

    ProductWitness invalid{{{0, 5}}, {0, 5}};
    CHECK(verify_witness(s, invalid, {0, 5}).reason == VerifyReason::invalid_element);

    // Parity matters when s = 1.
    GroupSpec ab = GroupSpec::metacyclic(4, 1);
    Sequence t = seq(ab, {{ab.x(), 1}});
    CHECK_FALSE(verify_witness(t, ProductWitness{{ab.x()}, ab.identity()}, ab.identity()).ok);

    std::string line = format_witness_line(w);
    CHECK(line == "witness k=3 target=y^2 : x y^1 x");
    ProductWitness back = parse_witness_line(line, d6);
    CHECK(back.terms == w.terms);
    CHECK(back.product == w.product);
    CHECK_THROWS_AS(parse_witness_line("witness k=2 target=y^2 : x y^1 x", d6), ParseError);
    CHECK_THROWS_AS(parse_witness_line("witness k=1 target=q : x", d6), ParseError);
}
