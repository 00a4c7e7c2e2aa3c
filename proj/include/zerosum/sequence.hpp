#pragma once

#include "zerosum/group.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zerosum {

/// A finite multiset over G, stored sparsely as element -> multiplicity.
/// Values are immutable; every operation returns a new sequence.
class Sequence {
public:
    explicit Sequence(GroupSpec g) : group_(g) {}
    Sequence(GroupSpec g, std::map<Element, long> counts);
    Sequence(GroupSpec g, std::span<const Element> terms);

    const GroupSpec & group() const { return group_; }
    const std::map<Element, long> & counts() const { return counts_; }
    long multiplicity(const Element & u) const;
    long length() const { return length_; }
    bool empty() const { return length_ == 0; }
    std::vector<Element> support() const;
    /// Terms expanded with repetition, in canonical element order.
    std::vector<Element> terms() const;
    bool divides(const Sequence & other) const;

    friend bool operator==(const Sequence & l, const Sequence & r)
    {
        return l.group_ == r.group_ && l.counts_ == r.counts_;
    }

private:
    GroupSpec group_;
    std::map<Element, long> counts_;
    long length_ = 0;
};

Sequence concat(const Sequence & a, const Sequence & b);
/// a * b^[-1]; throws NotASubsequence naming an offending element.
Sequence remove(const Sequence & a, const Sequence & b);
Sequence remove(const Sequence & a, const Element & u);
Sequence with_term(const Sequence & a, const Element & u, long times = 1);

/// Which part of G `restrict` keeps.
struct RotationPart {};   // <y>
struct ReflectionPart {}; // x<y>
struct CosetPart {
    Subgroup subgroup;
    Element representative; // keeps representative * subgroup
};
using SubsetDescriptor = std::variant<RotationPart, ReflectionPart, Subgroup, CosetPart>;

Sequence restrict(const Sequence & a, const SubsetDescriptor & part);

/// Sorted (element, multiplicity) pairs as bytes: eps (1 byte), a and the
/// multiplicity (4 bytes each, big endian). Equal keys iff equal multisets.
std::string canonical_key(const Sequence & a);

Sequence map_sequence(const Sequence & a, const GroupMap & f);

/// `seq y^1 * 29, y^2 * 14, x*y^7 * 1`
std::string format_sequence_line(const Sequence & a);
/// Group line followed by the sequence line.
std::string format_sequence_file(const Sequence & a);

Sequence parse_sequence_line(std::string_view line, const GroupSpec & g, int line_number = 1);
Sequence parse_sequence_file(std::string_view text);

} // namespace zerosum
