#pragma once

#include "zerosum/group.hpp"
#include "zerosum/product.hpp"
#include "zerosum/sequence.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zerosum {

inline constexpr double default_enumeration_ceiling = 1e7;

/// Pass as k to mean "a product-one subsequence of any positive length".
inline constexpr std::size_t any_length = 0;

struct EnumerationOptions {
    double ceiling = default_enumeration_ceiling;
    int jobs = 1;
    /// Keep only the member of each automorphism orbit with minimal canonical key.
    bool prune = true;
    SearchOptions search;
};

enum class Constant { gao, davenport };

struct ConstantReport {
    GroupSpec group;
    Constant constant;
    /// E(G) for gao, d(G) for davenport.
    int value = 0;
    /// Free sequences of length E(G) - 1 (resp. d(G)), one per orbit.
    std::vector<Sequence> certificates;
};

enum class TemplateKind {
    cyclic_pair,              // (g^t1)^[2n-1] (g^t2)^[n-1]
    rotation_pair_reflection, // (a^t1)^[2n-1] (a^t2)^[n-1] (t a^t3)
    identity_reflections,     // 1^[5] t (t a) (t a^2), n = 3
};

struct TemplateMatch {
    TemplateKind kind;
    int t1 = 0;
    int t2 = 0;
    int t3 = 0;
    /// Generators realising the presentation for which s has standard form.
    Element alpha;
    Element tau;
};

struct ExtremalFamily {
    TemplateKind kind;
    std::string description;
    std::vector<Sequence> representatives;
    std::vector<TemplateMatch> parameters;
};

struct Classification {
    GroupSpec group;
    std::size_t length = 0;
    std::size_t k = 0;
    std::vector<ExtremalFamily> families;
    std::vector<Sequence> unmatched;
    /// Number of free sequences before orbit reduction.
    std::size_t free_count = 0;
    /// Free sequences and template expansions coincide as sets.
    bool coverage_complete = false;
};

/// Estimated work C(length + |G| - 1, |G| - 1) / |Aut(G)|.
double enumeration_estimate(const GroupSpec & g, std::size_t length);

/// All sequences of the given length with no product-one subsequence of
/// length k (or of any positive length for any_length), ordered by canonical key.
std::vector<Sequence> free_sequences(const GroupSpec & g, std::size_t length, std::size_t k, const EnumerationOptions & options = {});

bool is_free(const Sequence & s, std::size_t k, const SearchOptions & options = {});

/// Canonical keys of all images of s under Aut(G).
std::vector<std::string> orbit_keys(const Sequence & s);

ConstantReport gao_constant(const GroupSpec & g, std::size_t length_cap, const EnumerationOptions & options = {});
ConstantReport davenport_constant(const GroupSpec & g, std::size_t length_cap, const EnumerationOptions & options = {});

std::optional<TemplateMatch> check_template(const Sequence & s);

/// Every sequence of the given kind over g (all parameters, all generator pairs).
std::vector<Sequence> expand_template(const GroupSpec & g, TemplateKind kind);

/// Sequence of a template in standard generators (alpha = y, tau = x).
Sequence template_instance(const GroupSpec & g, TemplateKind kind, int t1, int t2, int t3);

Classification classify_extremal(const GroupSpec & g, std::size_t length, std::size_t k, const EnumerationOptions & options = {});

std::string template_name(TemplateKind kind);
std::string describe(const TemplateMatch & m);
std::string constant_name(Constant c);

} // namespace zerosum
