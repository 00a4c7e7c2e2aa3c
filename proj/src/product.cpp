#include "zerosum/product.hpp"

#include "zerosum/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace zerosum {

namespace {

struct Item {
    Element e;
    int count;
};

std::vector<Item> items_of(const Sequence & s, std::size_t k)
{
    std::vector<Item> items;
    for (const auto & [u, c] : s.counts())
        items.push_back({u, static_cast<int>(std::min<long>(c, static_cast<long>(k)))});
    return items;
}

/// Rows of residue bitsets over Z_n, one row per DP state.
class ResidueTable {
public:
    ResidueTable(int states, int n) : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(states) * words_, 0) {}

    bool row_empty(int state) const
    {
        const std::uint64_t * row = data(state);
        return std::all_of(row, row + words_, [](std::uint64_t w) { return w == 0; });
    }

    bool test(int state, int v) const { return (data(state)[v >> 6] >> (v & 63)) & 1U; }

    void set(int state, int v) { data(state)[v >> 6] |= std::uint64_t{1} << (v & 63); }

    /// row(dst) |= row(src of other) rotated by shift.
    void or_rotated(int dst, const ResidueTable & other, int src, int shift)
    {
        std::uint64_t * out = data(dst);
        const std::uint64_t * in = other.data(src);
        if (shift == 0) {
            for (int w = 0; w < words_; ++w)
                out[w] |= in[w];
            return;
        }
        if (n_ <= 64) {
            const std::uint64_t mask = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
            const std::uint64_t w = in[0];
            out[0] |= ((w << shift) | (w >> (n_ - shift))) & mask;
            return;
        }
        for (int w = 0; w < words_; ++w) {
            std::uint64_t bits = in[w];
            while (bits != 0) {
                int b = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                int t = b + shift;
                if (t >= n_)
                    t -= n_;
                out[t >> 6] |= std::uint64_t{1} << (t & 63);
            }
        }
    }

    std::vector<int> members(int state) const
    {
        std::vector<int> out;
        for (int v = 0; v < n_; ++v)
            if (test(state, v))
                out.push_back(v);
        return out;
    }

private:
    const std::uint64_t * data(int state) const { return bits_.data() + static_cast<std::size_t>(state) * words_; }
    std::uint64_t * data(int state) { return bits_.data() + static_cast<std::size_t>(state) * words_; }

    int n_;
    int words_;
    std::vector<std::uint64_t> bits_;
};

int residue(long long v, int n)
{
    return static_cast<int>(mod(v, n));
}

/// Order-free DP over (terms used, x-parity) -> reachable exponents. Valid when
/// the terms commute: (e1, a1)(e2, a2) = (e1 ^ e2, a1 + a2).
class AbelianKnapsack {
public:
    AbelianKnapsack(const GroupSpec & g, std::vector<Item> items, int k, std::uint64_t budget)
        : g_(g), items_(std::move(items)), k_(k)
    {
        const int n = g_.n();
        std::uint64_t states = static_cast<std::uint64_t>(items_.size() + 1) * (k_ + 1) * 2;
        if (states > budget)
            throw BudgetExceeded(states);
        layers_.emplace_back(2 * (k_ + 1), n);
        layers_.back().set(state(0, 0), 0);
        for (const Item & item : items_) {
            const ResidueTable & prev = layers_.back();
            ResidueTable next(2 * (k_ + 1), n);
            for (int j = 0; j <= k_; ++j)
                for (int par = 0; par < 2; ++par) {
                    if (prev.row_empty(state(j, par)))
                        continue;
                    for (int t = 0; t <= item.count && j + t <= k_; ++t)
                        next.or_rotated(state(j + t, par ^ (item.e.eps & t & 1)), prev, state(j, par),
                            residue(static_cast<long long>(t) * item.e.a, n));
                }
            layers_.push_back(std::move(next));
        }
    }

    ElementSet finals() const
    {
        ElementSet out;
        for (int par = 0; par < 2; ++par)
            for (int v : layers_.back().members(state(k_, par)))
                out.insert({par, v});
        return out;
    }

    std::optional<std::vector<Element>> witness(const Element & target) const
    {
        if (!layers_.back().test(state(k_, target.eps), target.a))
            return std::nullopt;
        std::vector<int> taken(items_.size(), 0);
        int j = k_, par = target.eps, val = target.a;
        for (std::size_t i = items_.size(); i-- > 0;) {
            const Item & item = items_[i];
            bool found = false;
            for (int t = 0; t <= item.count && t <= j; ++t) {
                int pp = par ^ (item.e.eps & t & 1);
                int pv = residue(val - static_cast<long long>(t) * item.e.a, g_.n());
                if (layers_[i].test(state(j - t, pp), pv)) {
                    taken[i] = t;
                    j -= t;
                    par = pp;
                    val = pv;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::logic_error("abelian knapsack: broken backtrack");
        }
        std::vector<Element> terms;
        for (std::size_t i = 0; i < items_.size(); ++i)
            terms.insert(terms.end(), static_cast<std::size_t>(taken[i]), items_[i].e);
        return terms;
    }

private:
    int state(int j, int par) const { return j * 2 + par; }

    GroupSpec g_;
    std::vector<Item> items_;
    int k_;
    std::vector<ResidueTable> layers_;
};

/// Knapsack for C_n x|_s C_2 built on the normal form of an ordered product:
/// a term at position i picks up the factor s^(number of x-terms after i).
/// With m >= 1 x-terms, ceil(m/2) of them get factor 1 and floor(m/2) get s
/// (any split is realisable), and each y-term may get 1 or s freely. With
/// m = 0 every factor is 1. The DP tracks terms used, the balance
/// (#x with factor 1) - (#x with factor s), and whether x-terms or s-factored
/// y-terms were used.
class ReflectionSplit {
public:
    ReflectionSplit(const GroupSpec & g, std::vector<Item> items, int k, std::uint64_t budget)
        : g_(g), items_(std::move(items)), k_(k), span_(2 * k + 1)
    {
        const int n = g_.n();
        const long long s = g_.is_cyclic_kind() ? 1 : g_.s();
        const int states = (k_ + 1) * span_ * 3;
        remaining_x_.assign(items_.size() + 1, 0);
        for (std::size_t i = items_.size(); i-- > 0;)
            remaining_x_[i] = remaining_x_[i + 1] + (items_[i].e.eps ? items_[i].count : 0);

        layers_.emplace_back(states, n);
        layers_.back().set(state(0, 0, 0), 0);
        std::uint64_t visited = 0;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            const Item & item = items_[i];
            const ResidueTable & prev = layers_.back();
            ResidueTable next(states, n);
            const int rem_after = remaining_x_[i + 1];
            for (int j = 0; j <= k_; ++j)
                for (int d = -k_; d <= k_; ++d)
                    for (int f = 0; f < 3; ++f) {
                        const int from = state(j, d, f);
                        if (prev.row_empty(from))
                            continue;
                        if (++visited > budget)
                            throw BudgetExceeded(visited);
                        for (int p = 0; p <= item.count && j + p <= k_; ++p)
                            for (int q = 0; p + q <= item.count && j + p + q <= k_; ++q) {
                                int nd = d, nf = f;
                                if (item.e.eps) {
                                    nd = d + p - q;
                                    if (p + q > 0)
                                        nf = 2;
                                }
                                else if (q > 0) {
                                    nf = f == 2 ? 2 : 1;
                                }
                                const int left = std::min(rem_after, k_ - (j + p + q));
                                if (nd - 1 > left || -nd > left)
                                    continue;
                                if (nf == 1 && left == 0)
                                    continue;
                                long long shift = static_cast<long long>(p) * item.e.a + static_cast<long long>(q) * item.e.a * s;
                                next.or_rotated(state(j + p + q, nd, nf), prev, from, residue(shift, n));
                            }
                    }
            layers_.push_back(std::move(next));
        }
        s_ = s;
    }

    ElementSet finals() const
    {
        ElementSet out;
        const ResidueTable & last = layers_.back();
        for (int v : last.members(state(k_, 0, 0)))
            out.insert({0, v});
        for (int d = 0; d <= 1; ++d)
            for (int v : last.members(state(k_, d, 2)))
                out.insert({d, v});
        return out;
    }

    std::optional<std::vector<Element>> witness(const Element & target) const
    {
        const ResidueTable & last = layers_.back();
        int j = k_, d = target.eps, f = -1, val = target.a;
        if (target.eps == 0 && last.test(state(k_, 0, 0), val))
            f = 0;
        else if (last.test(state(k_, target.eps, 2), val))
            f = 2;
        if (f < 0)
            return std::nullopt;

        std::vector<std::pair<int, int>> split(items_.size(), {0, 0});
        const int n = g_.n();
        for (std::size_t i = items_.size(); i-- > 0;) {
            const Item & item = items_[i];
            bool found = false;
            for (int p = 0; p <= item.count && !found; ++p)
                for (int q = 0; p + q <= item.count && p + q <= j && !found; ++q) {
                    int pd = item.e.eps ? d - (p - q) : d;
                    if (pd < -k_ || pd > k_)
                        continue;
                    int pv = residue(val - (static_cast<long long>(p) * item.e.a + static_cast<long long>(q) * item.e.a * s_), n);
                    for (int pf : previous_flags(item, p, q, f)) {
                        if (layers_[i].test(state(j - p - q, pd, pf), pv)) {
                            split[i] = {p, q};
                            j -= p + q;
                            d = pd;
                            f = pf;
                            val = pv;
                            found = true;
                            break;
                        }
                    }
                }
            if (!found)
                throw std::logic_error("reflection split: broken backtrack");
        }
        return arrange(split);
    }

private:
    int state(int j, int d, int f) const { return (j * span_ + (d + k_)) * 3 + f; }

    static std::vector<int> previous_flags(const Item & item, int p, int q, int f)
    {
        if (item.e.eps) {
            if (p + q == 0)
                return {f};
            return f == 2 ? std::vector<int>{0, 1, 2} : std::vector<int>{};
        }
        if (q == 0)
            return {f};
        if (f == 1)
            return {0, 1};
        if (f == 2)
            return {2};
        return {};
    }

    /// Right to left the x-terms alternate factor 1, s, 1, ...; s-factored
    /// y-terms sit just before the last x-term, the others after it.
    std::vector<Element> arrange(const std::vector<std::pair<int, int>> & split) const
    {
        std::vector<Element> x_one, x_s, y_one, y_s;
        for (std::size_t i = 0; i < items_.size(); ++i) {
            const auto [p, q] = split[i];
            auto & ones = items_[i].e.eps ? x_one : y_one;
            auto & twisted = items_[i].e.eps ? x_s : y_s;
            ones.insert(ones.end(), static_cast<std::size_t>(p), items_[i].e);
            twisted.insert(twisted.end(), static_cast<std::size_t>(q), items_[i].e);
        }
        std::vector<Element> reversed_x;
        for (std::size_t i = 0; i < x_one.size() || i < x_s.size(); ++i) {
            if (i < x_one.size())
                reversed_x.push_back(x_one[i]);
            if (i < x_s.size())
                reversed_x.push_back(x_s[i]);
        }
        std::vector<Element> out(reversed_x.rbegin(), reversed_x.rend());
        if (!out.empty()) {
            Element last = out.back();
            out.pop_back();
            out.insert(out.end(), y_s.begin(), y_s.end());
            out.push_back(last);
        }
        out.insert(out.end(), y_one.begin(), y_one.end());
        return out;
    }

    GroupSpec g_;
    std::vector<Item> items_;
    int k_;
    int span_;
    long long s_ = 1;
    std::vector<int> remaining_x_;
    std::vector<ResidueTable> layers_;
};

/// Breadth-first search over (terms used per support element, product),
/// memoised on the pair, one parent pointer per state.
class StateSearch {
public:
    StateSearch(const GroupSpec & g, std::vector<Item> items, int k, std::uint64_t budget)
        : g_(g), items_(std::move(items)), k_(k)
    {
        const std::uint64_t order = static_cast<std::uint64_t>(g_.order());
        long double space = 1;
        for (const Item & item : items_) {
            weights_.push_back(static_cast<std::uint64_t>(space));
            space *= item.count + 1;
        }
        if (space * order > static_cast<long double>(std::uint64_t{1} << 62))
            throw BudgetExceeded(budget);

        const std::uint64_t start = key(0, g_.identity());
        parent_.emplace(start, Parent{start, -1});
        std::vector<std::uint64_t> layer{start};
        std::vector<int> used(items_.size());
        for (int depth = 0; depth < k_; ++depth) {
            std::vector<std::uint64_t> next;
            for (std::uint64_t current : layer) {
                const std::uint64_t counts_index = current / order;
                const Element product = g_.element_at(static_cast<int>(current % order));
                std::uint64_t rest = counts_index;
                for (std::size_t i = 0; i < items_.size(); ++i) {
                    used[i] = static_cast<int>(rest % (items_[i].count + 1));
                    rest /= items_[i].count + 1;
                }
                for (std::size_t i = 0; i < items_.size(); ++i) {
                    if (used[i] == items_[i].count)
                        continue;
                    std::uint64_t succ = key(counts_index + weights_[i], g_.mul(product, items_[i].e));
                    if (parent_.emplace(succ, Parent{current, static_cast<int>(i)}).second) {
                        next.push_back(succ);
                        if (parent_.size() > budget)
                            throw BudgetExceeded(parent_.size());
                    }
                }
            }
            layer = std::move(next);
        }
        final_layer_ = std::move(layer);
    }

    ElementSet finals() const
    {
        ElementSet out;
        for (std::uint64_t state : final_layer_)
            out.insert(g_.element_at(static_cast<int>(state % g_.order())));
        return out;
    }

    std::optional<std::vector<Element>> witness(const Element & target) const
    {
        for (std::uint64_t state : final_layer_) {
            if (g_.element_at(static_cast<int>(state % g_.order())) != target)
                continue;
            std::vector<Element> terms;
            for (std::uint64_t at = state; parent_.at(at).item >= 0; at = parent_.at(at).prev)
                terms.push_back(items_[parent_.at(at).item].e);
            std::reverse(terms.begin(), terms.end());
            return terms;
        }
        return std::nullopt;
    }

private:
    struct Parent {
        std::uint64_t prev;
        int item;
    };

    std::uint64_t key(std::uint64_t counts_index, const Element & product) const
    {
        return counts_index * static_cast<std::uint64_t>(g_.order()) + static_cast<std::uint64_t>(g_.index(product));
    }

    GroupSpec g_;
    std::vector<Item> items_;
    int k_;
    std::vector<std::uint64_t> weights_;
    std::unordered_map<std::uint64_t, Parent> parent_;
    std::vector<std::uint64_t> final_layer_;
};

constexpr long double state_search_ceiling = 1 << 20;

void check_length(const Sequence & s, std::size_t k)
{
    if (k > static_cast<std::size_t>(s.length()))
        throw PreconditionError("length " + std::to_string(k) + " exceeds |S| = " + std::to_string(s.length()));
}

template <typename Fn>
auto with_engine(const Sequence & s, std::size_t k, const SearchOptions & options, Fn && fn)
{
    const int kk = static_cast<int>(k);
    switch (resolve_route(s, k, options)) {
    case Route::abelian:
        return fn(AbelianKnapsack(s.group(), items_of(s, k), kk, options.budget));
    case Route::state_search:
        return fn(StateSearch(s.group(), items_of(s, k), kk, options.budget));
    default:
        return fn(ReflectionSplit(s.group(), items_of(s, k), kk, options.budget));
    }
}

} // namespace

bool is_abelian_instance(const Sequence & s)
{
    if (s.group().is_abelian())
        return true;
    return std::all_of(s.counts().begin(), s.counts().end(), [](const auto & entry) { return entry.first.eps == 0; });
}

Route resolve_route(const Sequence & s, std::size_t k, const SearchOptions & options)
{
    switch (options.route) {
    case Route::abelian:
        if (!is_abelian_instance(s))
            throw PreconditionError("abelian route requested for a non-commuting sequence");
        return Route::abelian;
    case Route::state_search:
    case Route::reflection_split:
        return options.route;
    case Route::automatic:
        break;
    }
    if (is_abelian_instance(s))
        return Route::abelian;
    long double space = s.group().order();
    for (const auto & [u, c] : s.counts())
        space *= static_cast<long double>(std::min<long>(c, static_cast<long>(k)) + 1);
    return space <= state_search_ceiling ? Route::state_search : Route::reflection_split;
}

ElementSet pi_set(const Sequence & s, const SearchOptions & options)
{
    if (s.empty())
        throw PreconditionError("pi(S) needs |S| >= 1");
    return with_engine(s, static_cast<std::size_t>(s.length()), options, [](const auto & engine) { return engine.finals(); });
}

SubproductSet subproducts(const Sequence & s, std::size_t n, const SearchOptions & options)
{
    check_length(s, n);
    ElementSet members = n == 0 ? ElementSet{s.group().identity()}
                                : with_engine(s, n, options, [](const auto & engine) { return engine.finals(); });
    Subgroup stab = set_stabilizer(s.group(), members);
    return {n, std::move(members), std::move(stab)};
}

std::optional<ProductWitness> find_product(
    const Sequence & s, std::size_t k, const Element & target, const SearchOptions & options)
{
    check_length(s, k);
    if (!s.group().valid(target))
        throw PreconditionError("target " + format_element(target) + " is not in " + s.group().literal());
    if (k == 0) {
        if (target != s.group().identity())
            return std::nullopt;
        return ProductWitness{{}, target};
    }
    auto terms = with_engine(s, k, options, [&](const auto & engine) { return engine.witness(target); });
    if (!terms)
        return std::nullopt;
    return ProductWitness{std::move(*terms), target};
}

ProductOneResult has_product_one(const Sequence & s, std::size_t k, const SearchOptions & options)
{
    auto witness = find_product(s, k, s.group().identity(), options);
    return {witness.has_value(), std::move(witness)};
}

Element default_sigma(const ElementSet & pi)
{
    if (pi.empty())
        throw PreconditionError("empty product set");
    return *pi.begin();
}

std::string route_name(Route r)
{
    switch (r) {
    case Route::automatic:
        return "automatic";
    case Route::abelian:
        return "abelian";
    case Route::state_search:
        return "state-search";
    case Route::reflection_split:
        return "reflection-split";
    }
    return "unknown";
}

} // namespace zerosum
