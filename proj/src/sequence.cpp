#include "zerosum/sequence.hpp"

#include "zerosum/errors.hpp"

#include <cctype>
#include <charconv>

namespace zerosum {

Sequence::Sequence(GroupSpec g, std::map<Element, long> counts) : group_(g)
{
    for (const auto & [u, c] : counts) {
        if (!group_.valid(u))
            throw PreconditionError(format_element(u) + " is not an element of " + group_.literal());
        if (c < 0)
            throw PreconditionError("negative multiplicity for " + format_element(u));
        if (c == 0)
            continue;
        counts_.emplace(u, c);
        length_ += c;
    }
}

Sequence::Sequence(GroupSpec g, std::span<const Element> terms) : group_(g)
{
    for (const Element & u : terms) {
        if (!group_.valid(u))
            throw PreconditionError(format_element(u) + " is not an element of " + group_.literal());
        ++counts_[u];
        ++length_;
    }
}

long Sequence::multiplicity(const Element & u) const
{
    auto it = counts_.find(u);
    return it == counts_.end() ? 0 : it->second;
}

std::vector<Element> Sequence::support() const
{
    std::vector<Element> out;
    out.reserve(counts_.size());
    for (const auto & [u, c] : counts_)
        out.push_back(u);
    return out;
}

std::vector<Element> Sequence::terms() const
{
    std::vector<Element> out;
    out.reserve(static_cast<std::size_t>(length_));
    for (const auto & [u, c] : counts_)
        out.insert(out.end(), static_cast<std::size_t>(c), u);
    return out;
}

bool Sequence::divides(const Sequence & other) const
{
    if (!(group_ == other.group_))
        return false;
    for (const auto & [u, c] : counts_)
        if (other.multiplicity(u) < c)
            return false;
    return true;
}

Sequence concat(const Sequence & a, const Sequence & b)
{
    if (!(a.group() == b.group()))
        throw GroupMismatch();
    auto counts = a.counts();
    for (const auto & [u, c] : b.counts())
        counts[u] += c;
    return Sequence(a.group(), std::move(counts));
}

Sequence remove(const Sequence & a, const Sequence & b)
{
    if (!(a.group() == b.group()))
        throw GroupMismatch();
    auto counts = a.counts();
    for (const auto & [u, c] : b.counts()) {
        auto it = counts.find(u);
        if (it == counts.end() || it->second < c)
            throw NotASubsequence(format_element(u));
        it->second -= c;
    }
    return Sequence(a.group(), std::move(counts));
}

Sequence remove(const Sequence & a, const Element & u)
{
    return remove(a, Sequence(a.group(), std::map<Element, long>{{u, 1}}));
}

Sequence with_term(const Sequence & a, const Element & u, long times)
{
    return concat(a, Sequence(a.group(), std::map<Element, long>{{u, times}}));
}

Sequence restrict(const Sequence & a, const SubsetDescriptor & part)
{
    const GroupSpec & g = a.group();
    auto keep_if = [&](auto && pred) {
        std::map<Element, long> counts;
        for (const auto & [u, c] : a.counts())
            if (pred(u))
                counts.emplace(u, c);
        return Sequence(g, std::move(counts));
    };
    if (std::holds_alternative<RotationPart>(part))
        return keep_if([](const Element & u) { return u.eps == 0; });
    if (std::holds_alternative<ReflectionPart>(part)) {
        if (g.is_cyclic_kind())
            throw PreconditionError("cyclic group has no reflection coset x<y>");
        return keep_if([](const Element & u) { return u.eps == 1; });
    }
    if (const auto * h = std::get_if<Subgroup>(&part)) {
        if (!(h->group() == g))
            throw PreconditionError("subgroup " + h->description() + " belongs to " + h->group().literal());
        return keep_if([&](const Element & u) { return h->contains(u); });
    }
    const auto & coset = std::get<CosetPart>(part);
    if (!(coset.subgroup.group() == g) || !g.valid(coset.representative))
        throw PreconditionError("coset descriptor does not belong to " + g.literal());
    const Element rep_inv = g.inv(coset.representative);
    return keep_if([&](const Element & u) { return coset.subgroup.contains(g.mul(rep_inv, u)); });
}

namespace {

void put_u32(std::string & out, unsigned long value)
{
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<char>((value >> shift) & 0xFFU));
}

} // namespace

std::string canonical_key(const Sequence & a)
{
    std::string key;
    key.reserve(a.counts().size() * 9);
    for (const auto & [u, c] : a.counts()) {
        key.push_back(static_cast<char>(u.eps));
        put_u32(key, static_cast<unsigned long>(u.a));
        put_u32(key, static_cast<unsigned long>(c));
    }
    return key;
}

Sequence map_sequence(const Sequence & a, const GroupMap & f)
{
    if (!(f.source == a.group()))
        throw GroupMismatch();
    std::map<Element, long> counts;
    for (const auto & [u, c] : a.counts())
        counts[f(u)] += c;
    return Sequence(f.target, std::move(counts));
}

std::string format_sequence_line(const Sequence & a)
{
    std::string out = "seq";
    bool first = true;
    for (const auto & [u, c] : a.counts()) {
        out += first ? " " : ", ";
        out += format_element(u) + " * " + std::to_string(c);
        first = false;
    }
    return out;
}

std::string format_sequence_file(const Sequence & a)
{
    return "group " + a.group().literal() + "\n" + format_sequence_line(a) + "\n";
}

namespace {

bool is_space(char c)
{
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::size_t skip_space(std::string_view s, std::size_t i)
{
    while (i < s.size() && is_space(s[i]))
        ++i;
    return i;
}

} // namespace

Sequence parse_sequence_line(std::string_view line, const GroupSpec & g, int line_number)
{
    auto column = [](std::size_t offset) { return static_cast<int>(offset) + 1; };
    std::size_t i = skip_space(line, 0);
    if (line.substr(i, 3) != "seq" || (i + 3 < line.size() && !is_space(line[i + 3])))
        throw ParseError(line_number, column(i), "expected 'seq'");
    i += 3;
    std::map<Element, long> counts;
    if (skip_space(line, i) == line.size())
        return Sequence(g);
    while (true) {
        std::size_t start = i;
        std::size_t end = line.find(',', start);
        if (end == std::string_view::npos)
            end = line.size();
        std::string_view term = line.substr(start, end - start);
        std::size_t star = term.rfind('*');
        std::size_t term_col = skip_space(line, start);
        if (term_col >= end)
            throw ParseError(line_number, column(term_col), "empty term");
        if (star == std::string_view::npos)
            throw ParseError(line_number, column(term_col), "expected '<element> * <multiplicity>'");
        Element u;
        try {
            u = parse_element(term.substr(0, star), g);
        }
        catch (const PreconditionError & e) {
            throw ParseError(line_number, column(term_col), e.what());
        }
        std::size_t mult_col = skip_space(line, start + star + 1);
        std::string compact;
        for (std::size_t k = start + star + 1; k < end; ++k)
            if (!is_space(line[k]))
                compact.push_back(line[k]);
        long mult = 0;
        auto [ptr, ec] = std::from_chars(compact.data(), compact.data() + compact.size(), mult);
        if (compact.empty() || ec != std::errc{} || ptr != compact.data() + compact.size() || mult < 1)
            throw ParseError(line_number, column(mult_col), "multiplicity must be an integer >= 1");
        counts[u] += mult;
        if (end == line.size())
            break;
        i = end + 1;
    }
    return Sequence(g, std::move(counts));
}

Sequence parse_sequence_file(std::string_view text)
{
    std::optional<GroupSpec> group;
    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        std::size_t first = skip_space(line, 0);
        if (first == line.size() || line[first] == '#')
            continue;
        if (!group) {
            if (line.substr(first, 5) != "group" || (first + 5 < line.size() && !is_space(line[first + 5])))
                throw ParseError(line_number, static_cast<int>(first) + 1, "expected 'group <literal>'");
            try {
                group = parse_group_literal(line.substr(first + 5));
            }
            catch (const InvalidGroup & e) {
                throw ParseError(line_number, static_cast<int>(skip_space(line, first + 5)) + 1, e.what());
            }
            continue;
        }
        Sequence out = parse_sequence_line(line, *group, line_number);
        for (std::size_t rest = pos; rest < text.size();) {
            std::size_t end = text.find('\n', rest);
            std::string_view tail = text.substr(rest, end == std::string_view::npos ? text.size() - rest : end - rest);
            ++line_number;
            std::size_t c = skip_space(tail, 0);
            if (c < tail.size() && tail[c] != '#')
                throw ParseError(line_number, static_cast<int>(c) + 1, "only one sequence per file");
            rest = end == std::string_view::npos ? text.size() : end + 1;
        }
        return out;
    }
    throw ParseError(line_number, 1, group ? "missing 'seq' line" : "missing 'group' line");
}

} // namespace zerosum
