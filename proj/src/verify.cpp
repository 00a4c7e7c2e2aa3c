#include "zerosum/verify.hpp"

#include "zerosum/errors.hpp"

#include <array>
#include <charconv>
#include <map>
#include <sstream>

namespace zerosum {

namespace {

using Matrix = std::array<std::array<long long, 2>, 2>;

Matrix multiply(const Matrix & l, const Matrix & r, long long n)
{
    Matrix out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            long long acc = 0;
            for (int t = 0; t < 2; ++t)
                acc = (acc + l[i][t] * r[t][j]) % n;
            out[i][j] = acc;
        }
    return out;
}

Matrix represent(const Element & u, const GroupSpec & g)
{
    const long long n = g.n();
    const long long twist = u.eps == 1 ? ((g.s() % n) + n) % n : 1 % n;
    return {{{twist, 0}, {u.a % n, 1 % n}}};
}

} // namespace

VerifyResult verify_witness(const Sequence & s, const ProductWitness & w, const Element & target)
{
    const GroupSpec & g = s.group();
    if (!g.valid(target))
        return {false, VerifyReason::invalid_element, "target " + format_element(target)};
    std::map<Element, long> used;
    for (const Element & u : w.terms) {
        if (!g.valid(u))
            return {false, VerifyReason::invalid_element, format_element(u)};
        if (++used[u] > s.multiplicity(u))
            return {false, VerifyReason::not_a_subsequence, format_element(u)};
    }

    const long long n = g.n();
    Matrix acc{{{1 % n, 0}, {0, 1 % n}}};
    int parity = 0;
    for (const Element & u : w.terms) {
        acc = multiply(acc, represent(u, g), n);
        parity ^= u.eps;
    }
    // Row [0 1] of the product matrix reads off the y-exponent.
    const Element product{parity, static_cast<int>(acc[1][0])};
    if (product != target)
        return {false, VerifyReason::product_mismatch, "product is " + format_element(product)};
    if (w.product != target)
        return {false, VerifyReason::product_mismatch, "witness claims " + format_element(w.product)};
    return {true, VerifyReason::ok, ""};
}

std::string reason_name(VerifyReason r)
{
    switch (r) {
    case VerifyReason::ok:
        return "ok";
    case VerifyReason::not_a_subsequence:
        return "not-a-subsequence";
    case VerifyReason::product_mismatch:
        return "product-mismatch";
    case VerifyReason::invalid_element:
        return "invalid-element";
    }
    return "unknown";
}

std::string format_witness_line(const ProductWitness & w)
{
    std::string out = "witness k=" + std::to_string(w.terms.size()) + " target=" + format_element(w.product) + " :";
    for (const Element & u : w.terms)
        out += " " + format_element(u);
    return out;
}

ProductWitness parse_witness_line(std::string_view line, const GroupSpec & g, int line_number)
{
    std::istringstream in{std::string(line)};
    std::string word;
    auto fail = [&](const std::string & what) {
        std::size_t at = word.empty() ? 0 : std::string(line).find(word);
        throw ParseError(line_number, static_cast<int>(at == std::string::npos ? 0 : at) + 1, what);
    };
    if (!(in >> word) || word != "witness")
        fail("expected 'witness'");
    if (!(in >> word) || word.rfind("k=", 0) != 0)
        fail("expected 'k=<int>'");
    long k = -1;
    auto [ptr, ec] = std::from_chars(word.data() + 2, word.data() + word.size(), k);
    if (ec != std::errc{} || ptr != word.data() + word.size() || k < 0)
        fail("bad length");
    if (!(in >> word) || word.rfind("target=", 0) != 0)
        fail("expected 'target=<element>'");
    ProductWitness w;
    try {
        w.product = parse_element(word.substr(7), g);
    }
    catch (const PreconditionError & e) {
        fail(e.what());
    }
    if (!(in >> word) || word != ":")
        fail("expected ':'");
    while (in >> word) {
        try {
            w.terms.push_back(parse_element(word, g));
        }
        catch (const PreconditionError & e) {
            fail(e.what());
        }
    }
    if (static_cast<long>(w.terms.size()) != k)
        throw ParseError(line_number, 1, "k=" + std::to_string(k) + " but " + std::to_string(w.terms.size()) + " terms listed");
    return w;
}

} // namespace zerosum
