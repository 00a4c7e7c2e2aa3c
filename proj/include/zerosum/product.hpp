#pragma once

#include "zerosum/group.hpp"
#include "zerosum/sequence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zerosum {

inline constexpr std::uint64_t default_budget = 100'000'000;

/// Exact search routes. `automatic` picks the order-free knapsack for abelian
/// inputs, the memoised state search when its state space is small, and the
/// reflection-split knapsack otherwise. All routes return identical sets.
enum class Route { automatic, abelian, state_search, reflection_split };

struct SearchOptions {
    std::uint64_t budget = default_budget;
    Route route = Route::automatic;
};

/// An ordered arrangement of a subsequence and the product it claims.
struct ProductWitness {
    std::vector<Element> terms;
    Element product;
};

struct SubproductSet {
    std::size_t n = 0;
    ElementSet members;
    Subgroup stabilizer;
};

struct ProductOneResult {
    bool found = false;
    std::optional<ProductWitness> witness;
};

/// True when every product over the support commutes (abelian group, or
/// support inside <y>).
bool is_abelian_instance(const Sequence & s);

/// Route actually used for a length-k search over s.
Route resolve_route(const Sequence & s, std::size_t k, const SearchOptions & options);

/// pi(S): products of the full sequence over all orderings.
ElementSet pi_set(const Sequence & s, const SearchOptions & options = {});

/// Pi_n(S) and its stabilizer.
SubproductSet subproducts(const Sequence & s, std::size_t n, const SearchOptions & options = {});

/// Some length-k subsequence arranged to multiply to `target`, if one exists.
std::optional<ProductWitness> find_product(
    const Sequence & s, std::size_t k, const Element & target, const SearchOptions & options = {});

ProductOneResult has_product_one(const Sequence & s, std::size_t k, const SearchOptions & options = {});

/// Deterministic choice of sigma(S) from pi(S): the minimal element.
Element default_sigma(const ElementSet & pi);

std::string route_name(Route r);

} // namespace zerosum
