#pragma once

#include "zerosum/product.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zerosum {

/// G = C_{3 n2} x|_s C_2 with n2 >= 5, gcd(6, n2) = 1, s = -1 mod 3, s = 1 mod n2.
bool in_main_family(const GroupSpec & g);
/// n2 of a main-family group; throws PreconditionError otherwise.
int main_family_n2(const GroupSpec & g);
/// Smallest s giving the main-family group of order 6 n2.
GroupSpec family_group(int n2);

/// Partition S = T_1 ... T_k * E into blocks whose images in G/H are product-one.
struct Decomposition {
    std::vector<Sequence> blocks;
    Sequence remainder;
    /// sigma[i] in pi(blocks[i]) and in target.
    std::vector<Element> sigma;
    Subgroup target;
};

/// Throws std::logic_error when the blocks and remainder do not reassemble
/// `source` or a block is not product-H with its chosen sigma.
void check_decomposition(const Decomposition & d, const Sequence & source);

std::size_t x_coverage(const Decomposition & d);

/// An m-term subsequence of s (over C_m) with product 1; needs |s| >= 2m - 1.
Sequence egz_extract(const Sequence & s, int m);

/// `count` blocks of length n2 whose projections to <y^3> are product-one.
/// h must be <x, y^{n2}>; needs |s| >= (count + 1) n2 - 1.
Decomposition extract_product_H_blocks(const Sequence & s, const Subgroup & h, int count);

/// Exchanges terms between blocks and the remainder, preserving every block's
/// projection sum, while that raises the number of blocks holding an x-term.
Decomposition improve_x_coverage(const Decomposition & d);

struct SwapReplayResult {
    bool found = false;
    /// Final decomposition of the seven blocks (the one reaching a selection when found).
    std::vector<Sequence> blocks;
    std::vector<Element> sigma;
    /// Six block indices whose sigmas multiply to 1 (when found).
    std::vector<std::size_t> selection;
    std::size_t states = 0;
    /// Every decomposition reachable by the swap moves was explored.
    bool exhausted = false;
    std::vector<std::string> trace;
};

inline constexpr std::size_t default_swap_cap = 10'000;

/// Seven blocks over <y> of length n2, each with projection sum 0 in <y^3>.
/// Breadth-first over decompositions reached by exchanging one or two terms of
/// equal projection sum between two blocks; succeeds when some decomposition
/// has six sigmas multiplying to 1. Otherwise every explored decomposition is
/// certified (by the product engine over C_3) to have no such selection.
SwapReplayResult replay_swap_argument(const Decomposition & d, std::size_t cap = default_swap_cap);

enum class Rung { cyclic_split, cyclic_inverse, sigma_selection, reflection_resplit, conjugation, swap_replay, exact_search };

struct BigProductResult {
    /// Absent only when the exact search proves S has no such subsequence.
    std::optional<ProductWitness> witness;
    Rung rung = Rung::exact_search;
    std::vector<std::string> trace;
};

/// A product-one subsequence of length 6 n2 for |S| >= 9 n2 - 1 over a
/// main-family group. Every returned witness passes verify_witness.
BigProductResult find_big_product_one(const Sequence & s, const SearchOptions & options = {});

std::string rung_name(Rung r);

enum class StructureClause { identity_product, reflection_pattern, not_applicable };

struct StructureReport {
    StructureClause clause = StructureClause::not_applicable;
    bool holds = true;
    Element product;
    std::string detail;
};

/// For |s| = n2 with |pi(s)| = 1: checks the conclusion of whichever clause applies
/// (pi(s) in <y^{n2}> with an x-term forces pi(s) = {1}; pi(s) in x<y^{n2}> forces
/// the exponent congruences mod n1).
StructureReport singleton_pi_structure(const Sequence & s, const Factorization & f);

std::string clause_name(StructureClause c);

} // namespace zerosum
