#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zerosum {

/// Normal form x^eps y^a of a group element.
struct Element {
    int eps = 0;
    int a = 0;

    auto operator<=>(const Element &) const = default;
};

using ElementSet = std::set<Element>;

enum class GroupKind { cyclic, metacyclic };

/// G = <x, y : x^2 = y^n = 1, yx = xy^s>, or the cyclic group <y> of order n.
///
/// Immutable after construction. The metacyclic factory rejects n < 3; quotients
/// of small order (C_2, C_2 x C_2) are built through `metacyclic_quotient`.
class GroupSpec {
public:
    static GroupSpec cyclic(int n);
    static GroupSpec metacyclic(int n, int s);
    static GroupSpec metacyclic_quotient(int n, int s);

    GroupKind kind() const { return kind_; }
    int n() const { return n_; }
    int s() const { return s_; }
    int order() const { return kind_ == GroupKind::cyclic ? n_ : 2 * n_; }
    bool is_abelian() const;
    bool is_cyclic_kind() const { return kind_ == GroupKind::cyclic; }

    bool valid(const Element & u) const;
    Element identity() const { return {}; }
    Element x() const;
    Element y() const { return {0, n_ == 1 ? 0 : 1}; }

    Element mul(const Element & u, const Element & v) const;
    Element inv(const Element & u) const;
    Element pow(const Element & u, long long k) const;
    int element_order(const Element & u) const;

    int index(const Element & u) const { return u.eps * n_ + u.a; }
    Element element_at(int i) const { return {i / n_, i % n_}; }
    std::vector<Element> elements() const;

    /// `metacyclic n=15 s=11` or `cyclic n=5`.
    std::string literal() const;

    friend bool operator==(const GroupSpec &, const GroupSpec &) = default;

private:
    GroupSpec(GroupKind kind, int n, int s) : kind_(kind), n_(n), s_(s) {}

    GroupKind kind_;
    int n_;
    int s_;
};

/// n = n1 * n2 with s = -1 mod n1, s = 1 mod n2 and gcd(n1, n2) in {1, 2}.
struct Factorization {
    int n1 = 1;
    int n2 = 1;

    bool coprime() const;
    friend bool operator==(const Factorization &, const Factorization &) = default;
};

Factorization factorize(const GroupSpec & g);

/// Subgroup stored as a membership table together with its normal-form
/// description <y^d> or <x*y^c, y^d>.
class Subgroup {
public:
    static Subgroup rotations(const GroupSpec & g, int d);
    static Subgroup generated(const GroupSpec & g, std::span<const Element> generators);
    static Subgroup from_members(const GroupSpec & g, const ElementSet & members);
    static Subgroup whole(const GroupSpec & g);
    static Subgroup trivial(const GroupSpec & g);

    const GroupSpec & group() const { return group_; }
    bool contains(const Element & u) const { return group_.valid(u) && member_[group_.index(u)]; }
    int size() const { return size_; }
    /// Smallest d > 0 with y^d in H (d divides n).
    int rotation_step() const { return step_; }
    /// Smallest c with x*y^c in H, if any reflection lies in H.
    std::optional<int> reflection_offset() const { return offset_; }
    bool is_rotation_subgroup() const { return !offset_.has_value(); }
    std::vector<Element> elements() const;
    std::string description() const;

    friend bool operator==(const Subgroup & l, const Subgroup & r)
    {
        return l.group_ == r.group_ && l.member_ == r.member_;
    }

private:
    Subgroup(GroupSpec g, std::vector<bool> member);

    GroupSpec group_;
    std::vector<bool> member_;
    int size_ = 0;
    int step_ = 1;
    std::optional<int> offset_;
};

/// The full stabilizer {g : gA = A} of a nonempty set A.
Subgroup set_stabilizer(const GroupSpec & g, const ElementSet & members);

/// A map between groups given elementwise. Homomorphism-ness is a property
/// of how it was built, checked in tests.
struct GroupMap {
    GroupSpec source;
    GroupSpec target;
    std::function<Element(const Element &)> apply;

    Element operator()(const Element & u) const { return apply(u); }
};

/// The natural map G -> G/<y^d>, with the quotient realised as (n' = d, s' = s mod d).
GroupMap quotient_map(const GroupSpec & g, const Subgroup & h);

/// Projections onto G1 = <y^{n1}> (which = 1) and G2 = <x, y^{n2}> (which = 2)
/// for a coprime factorization; both take values in G and phi1(u) * phi2(u) = u.
GroupMap projection(const GroupSpec & g, int which);

/// The isomorphism G -> C_{n2} x D_{2 n1} for coprime factorizations.
struct DirectSplit {
    GroupSpec cyclic_factor;
    GroupSpec dihedral_factor;
    std::function<std::pair<Element, Element>(const Element &)> apply;
};

DirectSplit direct_split(const GroupSpec & g);

/// Automorphism determined by the images of y and x.
struct Automorphism {
    Element image_y;
    Element image_x;
    std::vector<Element> table;

    Element operator()(const Element & u, const GroupSpec & g) const { return table[g.index(u)]; }
};

/// All automorphisms, identity first, the rest ordered by (image_y, image_x).
std::vector<Automorphism> automorphisms(const GroupSpec & g);

GroupSpec parse_group_literal(std::string_view text);
Element parse_element(std::string_view text, const GroupSpec & g);
std::string format_element(const Element & u);

long long mod(long long a, long long n);
long long gcd_ll(long long a, long long b);

} // namespace zerosum
