#include "zerosum/group.hpp"

#include "zerosum/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <stdexcept>

namespace zerosum {

long long mod(long long a, long long n)
{
    long long r = a % n;
    return r < 0 ? r + n : r;
}

long long gcd_ll(long long a, long long b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

namespace {

long long inverse_mod(long long a, long long n)
{
    long long old_r = mod(a, n), r = n, old_s = 1, s = 0;
    while (r != 0) {
        long long q = old_r / r;
        long long t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1)
        throw std::logic_error("inverse_mod: not invertible");
    return mod(old_s, n);
}

void check_twist(int n, int s)
{
    long long sq = static_cast<long long>(s) * s;
    if (mod(sq - 1, n) != 0)
        throw InvalidGroup("twist must satisfy s^2 = 1 (mod n): s = " + std::to_string(s) + " gives s^2 = "
            + std::to_string(sq) + " = " + std::to_string(mod(sq, n)) + " (mod " + std::to_string(n) + ")");
}

} // namespace

GroupSpec GroupSpec::cyclic(int n)
{
    if (n < 1)
        throw InvalidGroup("cyclic group needs n >= 1, got " + std::to_string(n));
    return GroupSpec(GroupKind::cyclic, n, n == 1 ? 0 : 1);
}

GroupSpec GroupSpec::metacyclic(int n, int s)
{
    if (n < 3)
        throw InvalidGroup("metacyclic group needs n >= 3, got " + std::to_string(n));
    return metacyclic_quotient(n, s);
}

GroupSpec GroupSpec::metacyclic_quotient(int n, int s)
{
    if (n < 1)
        throw InvalidGroup("metacyclic group needs n >= 1, got " + std::to_string(n));
    int reduced = static_cast<int>(mod(s, n));
    check_twist(n, reduced);
    return GroupSpec(GroupKind::metacyclic, n, reduced);
}

bool GroupSpec::is_abelian() const
{
    return kind_ == GroupKind::cyclic || mod(s_ - 1, n_) == 0;
}

bool GroupSpec::valid(const Element & u) const
{
    if (u.a < 0 || u.a >= n_)
        return false;
    if (kind_ == GroupKind::cyclic)
        return u.eps == 0;
    return u.eps == 0 || u.eps == 1;
}

Element GroupSpec::x() const
{
    if (kind_ == GroupKind::cyclic)
        throw PreconditionError("cyclic group has no element x");
    return {1, 0};
}

Element GroupSpec::mul(const Element & u, const Element & v) const
{
    long long left = v.eps ? static_cast<long long>(u.a) * s_ : u.a;
    return {u.eps ^ v.eps, static_cast<int>(mod(left + v.a, n_))};
}

Element GroupSpec::inv(const Element & u) const
{
    if (u.eps == 0)
        return {0, static_cast<int>(mod(-u.a, n_))};
    return {1, static_cast<int>(mod(-static_cast<long long>(u.a) * s_, n_))};
}

Element GroupSpec::pow(const Element & u, long long k) const
{
    Element base = k < 0 ? inv(u) : u;
    unsigned long long e = static_cast<unsigned long long>(k < 0 ? -k : k);
    Element result = identity();
    while (e != 0) {
        if (e & 1U)
            result = mul(result, base);
        base = mul(base, base);
        e >>= 1U;
    }
    return result;
}

int GroupSpec::element_order(const Element & u) const
{
    int k = 1;
    for (Element p = u; p != identity(); p = mul(p, u))
        ++k;
    return k;
}

std::vector<Element> GroupSpec::elements() const
{
    std::vector<Element> out;
    out.reserve(order());
    for (int i = 0; i < order(); ++i)
        out.push_back(element_at(i));
    return out;
}

std::string GroupSpec::literal() const
{
    if (kind_ == GroupKind::cyclic)
        return "cyclic n=" + std::to_string(n_);
    return "metacyclic n=" + std::to_string(n_) + " s=" + std::to_string(s_);
}

bool Factorization::coprime() const
{
    return gcd_ll(n1, n2) == 1;
}

Factorization factorize(const GroupSpec & g)
{
    if (g.kind() != GroupKind::metacyclic)
        throw PreconditionError("factorize needs a metacyclic group");
    const int n = g.n();
    const long long s = g.s();
    for (int n1 = n; n1 >= 1; --n1) {
        if (n % n1 != 0)
            continue;
        int n2 = n / n1;
        if (mod(s + 1, n1) == 0 && mod(s - 1, n2) == 0) {
            long long d = gcd_ll(n1, n2);
            if (d == 1 || d == 2)
                return {n1, n2};
        }
    }
    throw std::logic_error("factorize: no admissible factorization for " + g.literal());
}

Subgroup::Subgroup(GroupSpec g, std::vector<bool> member)
    : group_(g), member_(std::move(member))
{
    size_ = static_cast<int>(std::count(member_.begin(), member_.end(), true));
    step_ = group_.n();
    for (int a = 1; a < group_.n(); ++a)
        if (member_[group_.index({0, a})]) {
            step_ = a;
            break;
        }
    if (!group_.is_cyclic_kind())
        for (int c = 0; c < group_.n(); ++c)
            if (member_[group_.index({1, c})]) {
                offset_ = c;
                break;
            }
}

Subgroup Subgroup::rotations(const GroupSpec & g, int d)
{
    if (d < 1 || g.n() % d != 0)
        throw PreconditionError("<y^" + std::to_string(d) + "> needs d dividing n = " + std::to_string(g.n()));
    std::vector<bool> member(g.order(), false);
    for (int a = 0; a < g.n(); a += d)
        member[g.index({0, a})] = true;
    return Subgroup(g, std::move(member));
}

Subgroup Subgroup::generated(const GroupSpec & g, std::span<const Element> generators)
{
    std::vector<bool> member(g.order(), false);
    std::deque<Element> queue{g.identity()};
    member[g.index(g.identity())] = true;
    while (!queue.empty()) {
        Element u = queue.front();
        queue.pop_front();
        for (const Element & gen : generators) {
            if (!g.valid(gen))
                throw PreconditionError("generator " + format_element(gen) + " is not in " + g.literal());
            Element v = g.mul(u, gen);
            if (!member[g.index(v)]) {
                member[g.index(v)] = true;
                queue.push_back(v);
            }
        }
    }
    return Subgroup(g, std::move(member));
}

Subgroup Subgroup::from_members(const GroupSpec & g, const ElementSet & members)
{
    std::vector<bool> member(g.order(), false);
    for (const Element & u : members) {
        if (!g.valid(u))
            throw PreconditionError(format_element(u) + " is not in " + g.literal());
        member[g.index(u)] = true;
    }
    if (!member[g.index(g.identity())])
        throw PreconditionError("not a subgroup: identity missing");
    for (const Element & u : members)
        for (const Element & v : members)
            if (!member[g.index(g.mul(u, v))])
                throw PreconditionError("not a subgroup: not closed under multiplication");
    return Subgroup(g, std::move(member));
}

Subgroup Subgroup::whole(const GroupSpec & g)
{
    return Subgroup(g, std::vector<bool>(g.order(), true));
}

Subgroup Subgroup::trivial(const GroupSpec & g)
{
    return rotations(g, g.n());
}

std::vector<Element> Subgroup::elements() const
{
    std::vector<Element> out;
    for (int i = 0; i < group_.order(); ++i)
        if (member_[i])
            out.push_back(group_.element_at(i));
    return out;
}

std::string Subgroup::description() const
{
    std::string rot = step_ == group_.n() ? "1" : "y^" + std::to_string(step_);
    if (!offset_)
        return "<" + rot + ">";
    return "<" + format_element({1, *offset_}) + ", " + rot + ">";
}

Subgroup set_stabilizer(const GroupSpec & g, const ElementSet & members)
{
    if (members.empty())
        throw PreconditionError("stabilizer of the empty set is not defined here");
    std::vector<bool> in_set(g.order(), false);
    for (const Element & u : members) {
        if (!g.valid(u))
            throw PreconditionError(format_element(u) + " is not in " + g.literal());
        in_set[g.index(u)] = true;
    }
    std::vector<bool> member(g.order(), false);
    for (const Element & h : g.elements()) {
        bool fixes = std::all_of(members.begin(), members.end(),
            [&](const Element & u) { return in_set[g.index(g.mul(h, u))]; });
        member[g.index(h)] = fixes;
    }
    Subgroup stab = Subgroup::from_members(g, [&] {
        ElementSet out;
        for (int i = 0; i < g.order(); ++i)
            if (member[i])
                out.insert(g.element_at(i));
        return out;
    }());
    bool full_set = static_cast<int>(members.size()) == g.order();
    if ((stab.size() == g.order()) != full_set)
        throw std::logic_error("stabilizer is the whole group exactly when the set is");
    return stab;
}

GroupMap quotient_map(const GroupSpec & g, const Subgroup & h)
{
    if (!(h.group() == g))
        throw GroupMismatch();
    if (!h.is_rotation_subgroup())
        throw PreconditionError("quotient map needs a subgroup of the form <y^d>, got " + h.description());
    const int d = h.rotation_step();
    GroupSpec target = g.is_cyclic_kind() ? GroupSpec::cyclic(d) : GroupSpec::metacyclic_quotient(d, g.s());
    return {g, target, [d](const Element & u) { return Element{u.eps, u.a % d}; }};
}

GroupMap projection(const GroupSpec & g, int which)
{
    if (which != 1 && which != 2)
        throw PreconditionError("projection index must be 1 or 2");
    Factorization f = factorize(g);
    if (!f.coprime())
        throw PreconditionError("projection needs coprime n1, n2; " + g.literal() + " has n1 = " + std::to_string(f.n1)
            + ", n2 = " + std::to_string(f.n2));
    const long long n = g.n();
    const long long n1 = f.n1;
    const long long n2 = f.n2;
    const long long n1_inv = n2 == 1 ? 0 : inverse_mod(n1 % n2, n2);
    auto first_component = [=](int a) { return n2 == 1 ? 0LL : n1 * mod(mod(a, n2) * n1_inv, n2); };
    if (which == 1)
        return {g, g, [=](const Element & u) { return Element{0, static_cast<int>(first_component(u.a))}; }};
    return {g, g, [=](const Element & u) { return Element{u.eps, static_cast<int>(mod(u.a - first_component(u.a), n))}; }};
}

DirectSplit direct_split(const GroupSpec & g)
{
    Factorization f = factorize(g);
    GroupMap p1 = projection(g, 1);
    GroupMap p2 = projection(g, 2);
    const int n1 = f.n1;
    const int n2 = f.n2;
    return {GroupSpec::cyclic(n2), GroupSpec::metacyclic_quotient(n1, static_cast<int>(mod(-1, n1))),
        [=](const Element & u) {
            Element c = p1(u);
            Element d = p2(u);
            return std::pair<Element, Element>{{0, c.a / n1}, {d.eps, d.a / n2}};
        }};
}

std::vector<Automorphism> automorphisms(const GroupSpec & g)
{
    std::vector<Automorphism> out;
    const auto elems = g.elements();
    auto bijective = [&](const std::vector<Element> & table) {
        std::vector<bool> hit(g.order(), false);
        for (const Element & u : table) {
            if (hit[g.index(u)])
                return false;
            hit[g.index(u)] = true;
        }
        return true;
    };
    if (g.is_cyclic_kind()) {
        for (const Element & alpha : elems) {
            if (g.element_order(alpha) != g.n())
                continue;
            std::vector<Element> table;
            for (int a = 0; a < g.n(); ++a)
                table.push_back(g.pow(alpha, a));
            out.push_back({alpha, g.identity(), std::move(table)});
        }
    }
    else {
        for (const Element & alpha : elems) {
            if (g.pow(alpha, g.n()) != g.identity())
                continue;
            for (const Element & tau : elems) {
                if (g.mul(tau, tau) != g.identity())
                    continue;
                if (g.mul(alpha, tau) != g.mul(tau, g.pow(alpha, g.s())))
                    continue;
                std::vector<Element> table;
                table.reserve(g.order());
                for (const Element & u : elems)
                    table.push_back(g.mul(g.pow(tau, u.eps), g.pow(alpha, u.a)));
                if (bijective(table))
                    out.push_back({alpha, tau, std::move(table)});
            }
        }
    }
    auto is_identity = [&](const Automorphism & aut) {
        for (int i = 0; i < g.order(); ++i)
            if (aut.table[i] != g.element_at(i))
                return false;
        return true;
    };
    std::stable_partition(out.begin(), out.end(), is_identity);
    return out;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::optional<long long> parse_int(std::string_view s)
{
    if (s.empty())
        return std::nullopt;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

} // namespace

GroupSpec parse_group_literal(std::string_view text)
{
    text = trim(text);
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i > start)
            tokens.push_back(text.substr(start, i - start));
    }
    if (tokens.empty())
        throw InvalidGroup("empty group literal");
    std::optional<long long> n, s;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
        auto eq = tokens[t].find('=');
        if (eq == std::string_view::npos)
            throw InvalidGroup("expected key=value, got '" + std::string(tokens[t]) + "'");
        auto key = tokens[t].substr(0, eq);
        auto value = parse_int(tokens[t].substr(eq + 1));
        if (!value)
            throw InvalidGroup("bad integer in '" + std::string(tokens[t]) + "'");
        if (key == "n")
            n = value;
        else if (key == "s")
            s = value;
        else
            throw InvalidGroup("unknown key '" + std::string(key) + "'");
    }
    if (!n)
        throw InvalidGroup("group literal needs n=<int>");
    if (tokens[0] == "cyclic") {
        if (s)
            throw InvalidGroup("cyclic group literal takes no s");
        return GroupSpec::cyclic(static_cast<int>(*n));
    }
    if (tokens[0] == "metacyclic") {
        if (!s)
            throw InvalidGroup("metacyclic group literal needs s=<int>");
        return GroupSpec::metacyclic(static_cast<int>(*n), static_cast<int>(*s));
    }
    throw InvalidGroup("unknown group kind '" + std::string(tokens[0]) + "'");
}

Element parse_element(std::string_view text, const GroupSpec & g)
{
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            compact.push_back(c);
    auto fail = [&](const std::string & why) -> Element {
        throw PreconditionError("bad element '" + std::string(trim(text)) + "': " + why);
    };
    if (compact.empty())
        return fail("empty");
    if (compact == "1")
        return g.identity();
    int eps = 0;
    std::string_view rest = compact;
    if (rest.front() == 'x') {
        if (g.is_cyclic_kind())
            return fail("x is not an element of a cyclic group");
        eps = 1;
        rest.remove_prefix(1);
        if (rest.empty())
            return {1, 0};
        if (rest.front() != '*')
            return fail("expected '*' after x");
        rest.remove_prefix(1);
    }
    if (rest.empty() || rest.front() != 'y')
        return fail("expected y");
    rest.remove_prefix(1);
    long long exponent = 1;
    if (!rest.empty()) {
        if (rest.front() != '^')
            return fail("expected '^' after y");
        auto value = parse_int(rest.substr(1));
        if (!value)
            return fail("bad exponent");
        exponent = *value;
    }
    return {eps, static_cast<int>(mod(exponent, g.n()))};
}

std::string format_element(const Element & u)
{
    if (u.eps == 0)
        return u.a == 0 ? "1" : "y^" + std::to_string(u.a);
    return u.a == 0 ? "x" : "x*y^" + std::to_string(u.a);
}

} // namespace zerosum
