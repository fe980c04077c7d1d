#pragma once

// The Δ family of rooted, topped posets, searches for order-preserving onto
// maps and positive morphisms between finite posets, and the N-functions
// placed on Δ members together with their refuting valuations.

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "frames.hpp"

namespace subminimal {

struct delta_poset {
    int n = 0;
    poset order;
    int root = 0;
    int top = 0;
    std::vector<int> x;  // x[0] .. x[n+2], x[0] just below the top
    std::vector<int> y;  // y[0] .. y[n+1]
};

// Pairs (a, b) with a covered by b.
inline std::vector<std::pair<int, int>> cover_pairs(const poset& p)
{
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < p.size(); ++a)
        for (int b = 0; b < p.size(); ++b) {
            if (a == b || !p.leq(a, b))
                continue;
            const world_set between = (p.up(a) & p.down(b)) & ~(singleton(a) | singleton(b));
            if (between == 0)
                out.emplace_back(a, b);
        }
    return out;
}

// Worlds: root 0, x_i = 1+i, y_j = n+4+j, top 2n+6.
inline delta_poset build_delta(int n)
{
    if (n < 0 || 2 * n + 7 > max_world_count)
        throw std::invalid_argument("build_delta: index out of range: " + std::to_string(n));
    delta_poset d;
    d.n = n;
    d.root = 0;
    d.top = 2 * n + 6;
    for (int i = 0; i <= n + 2; ++i)
        d.x.push_back(1 + i);
    for (int j = 0; j <= n + 1; ++j)
        d.y.push_back(n + 4 + j);

    std::vector<std::pair<int, int>> pairs{{d.root, d.x[n + 2]}, {d.root, d.y[n + 1]},
                                           {d.x[0], d.top}, {d.y[0], d.top}};
    for (int i = 0; i < n + 2; ++i)
        pairs.emplace_back(d.x[i + 1], d.x[i]);
    for (int j = 0; j < n + 1; ++j)
        pairs.emplace_back(d.y[j + 1], d.y[j]);
    for (int i = 0; i <= n; ++i)
        pairs.emplace_back(d.y[i + 1], d.x[i]);
    for (int i = 1; i <= n; ++i)
        pairs.emplace_back(d.x[i + 1], d.y[i]);
    d.order = poset::from_pairs(2 * n + 7, pairs);
    return d;
}

namespace detail {

// Backtracking over total maps source -> target with forward checking.
// Worlds are assigned in index order and values tried in ascending order, so
// the first map found is lexicographically least.
class onto_search {
public:
    onto_search(const poset& target, const poset& source) : f_(target), g_(source) {}

    std::optional<std::vector<int>> run()
    {
        if (g_.size() < f_.size() || f_.size() == 0)
            return std::nullopt;
        std::vector<world_set> cand(g_.size(), f_.all());
        // the root and top of the source must cover those of the target
        if (auto r = g_.root(); r && f_.root())
            cand[*r] = singleton(*f_.root());
        if (auto t = g_.top(); t && f_.top())
            cand[*t] = singleton(*f_.top());
        map_.assign(g_.size(), -1);
        if (step(0, cand))
            return map_;
        return std::nullopt;
    }

private:
    bool step(int s, const std::vector<world_set>& cand)
    {
        if (s == g_.size())
            return true;
        world_set options = cand[s];
        while (options) {
            const int v = std::countr_zero(options);
            options &= options - 1;
            map_[s] = v;
            std::vector<world_set> next = cand;
            bool alive = true;
            world_set reachable = 0, covered = 0;
            for (int u = 0; u <= s; ++u)
                covered |= singleton(map_[u]);
            for (int u = s + 1; u < g_.size() && alive; ++u) {
                if (g_.leq(s, u))
                    next[u] &= f_.up(v);
                if (g_.leq(u, s))
                    next[u] &= f_.down(v);
                alive = next[u] != 0;
                reachable |= next[u];
            }
            if (!alive || !subset_of(f_.all() & ~covered, reachable))
                continue;
            if (std::popcount(f_.all() & ~covered) > g_.size() - s - 1)
                continue;
            if (step(s + 1, next))
                return true;
        }
        map_[s] = -1;
        return false;
    }

    const poset& f_;
    const poset& g_;
    std::vector<int> map_;
};

} // namespace detail

// Least (in lexicographic order over source worlds) order-preserving map from
// g_source onto f_target, if one exists.
inline std::optional<std::vector<int>> order_onto(const poset& f_target, const poset& g_source)
{
    return detail::onto_search(f_target, g_source).run();
}

inline bool is_order_preserving_onto(const poset& f_target, const poset& g_source, const std::vector<int>& map)
{
    if (static_cast<int>(map.size()) != g_source.size())
        return false;
    world_set image = 0;
    for (int a = 0; a < g_source.size(); ++a) {
        if (map[a] < 0 || map[a] >= f_target.size())
            return false;
        image |= singleton(map[a]);
        for (int b = 0; b < g_source.size(); ++b)
            if (g_source.leq(a, b) && !f_target.leq(map[a], map[b]))
                return false;
    }
    return image == f_target.all();
}

using partial_map = std::vector<std::optional<int>>;

inline bool is_positive_morphism(const poset& f_target, const poset& g_source, const partial_map& map)
{
    if (static_cast<int>(map.size()) != g_source.size())
        return false;
    world_set dom = 0, image = 0;
    for (int a = 0; a < g_source.size(); ++a)
        if (map[a]) {
            if (*map[a] < 0 || *map[a] >= f_target.size())
                return false;
            dom |= singleton(a);
            image |= singleton(*map[a]);
        }
    if (g_source.downward_closure(dom) != dom || image != f_target.all())
        return false;
    for (int a = 0; a < g_source.size(); ++a) {
        if (!map[a])
            continue;
        world_set reached = 0;
        for (int b = 0; b < g_source.size(); ++b)
            if (map[b] && g_source.leq(a, b)) {
                if (!f_target.leq(*map[a], *map[b]))
                    return false;
                reached |= singleton(*map[b]);
            }
        if (reached != f_target.up(*map[a]))
            return false;
    }
    return true;
}

namespace detail {

// Assigns source worlds from the top down. Once everything above a world is
// settled, its value v must satisfy f[up(a) ∩ dom] = up(v), which leaves
// few options.
class positive_search {
public:
    positive_search(const poset& target, const poset& source) : f_(target), g_(source)
    {
        for (int a = 0; a < g_.size(); ++a)
            order_.push_back(a);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](int a, int b) { return std::popcount(g_.up(a)) < std::popcount(g_.up(b)); });
    }

    std::optional<partial_map> run()
    {
        if (f_.size() == 0)
            return std::nullopt;
        map_.assign(g_.size(), std::nullopt);
        if (step(0))
            return map_;
        return std::nullopt;
    }

private:
    bool step(std::size_t k)
    {
        if (k == order_.size()) {
            world_set image = 0;
            for (const auto& v : map_)
                if (v)
                    image |= singleton(*v);
            return image == f_.all();
        }
        const int a = order_[k];
        world_set above = 0;
        bool some_defined = false;
        for (int b = 0; b < g_.size(); ++b)
            if (b != a && g_.leq(a, b) && map_[b]) {
                above |= singleton(*map_[b]);
                some_defined = true;
            }
        for (int v = 0; v < f_.size(); ++v) {
            const world_set strict = f_.up(v) & ~singleton(v);
            if (!subset_of(above, f_.up(v)) || !subset_of(strict, above))
                continue;
            map_[a] = v;
            if (step(k + 1))
                return true;
        }
        map_[a] = std::nullopt;
        // the domain is downward closed, so a defined world above forces a in
        return !some_defined && step(k + 1);
    }

    const poset& f_;
    const poset& g_;
    std::vector<int> order_;
    partial_map map_;
};

} // namespace detail

// A positive morphism from g_source onto f_target: a partial p-morphism with
// downward-closed domain. Decides f_target ⪯ g_source.
inline std::optional<partial_map> positive_morphism(const poset& f_target, const poset& g_source)
{
    return detail::positive_search(f_target, g_source).run();
}

// Sends every point outside the domain to the top of the target.
inline std::vector<int> extend_positive(const partial_map& pm, const poset& f_target)
{
    const auto top = f_target.top();
    if (!top)
        throw std::invalid_argument("extend_positive: target has no top");
    std::vector<int> out;
    out.reserve(pm.size());
    for (const auto& v : pm)
        out.push_back(v.value_or(*top));
    return out;
}

// Pairwise incomparability under "is an order-preserving image of".
inline bool antichain_check(const std::vector<poset>& posets)
{
    for (std::size_t i = 0; i < posets.size(); ++i)
        for (std::size_t j = 0; j < posets.size(); ++j)
            if (i != j && order_onto(posets[i], posets[j]))
                return false;
    return true;
}

// Same with positive morphisms.
inline bool positive_antichain_check(const std::vector<poset>& posets)
{
    for (std::size_t i = 0; i < posets.size(); ++i)
        for (std::size_t j = 0; j < posets.size(); ++j)
            if (i != j && positive_morphism(posets[i], posets[j]))
                return false;
    return true;
}

enum class delta_variant { base, nef, sub_nef, copc };

inline const char* variant_name(delta_variant v)
{
    switch (v) {
    case delta_variant::base: return "base";
    case delta_variant::nef: return "nef";
    case delta_variant::sub_nef: return "sub_nef";
    case delta_variant::copc: return "copc";
    }
    return "?";
}

inline std::optional<delta_variant> parse_variant(std::string_view s)
{
    for (delta_variant v : {delta_variant::base, delta_variant::nef, delta_variant::sub_nef, delta_variant::copc})
        if (s == variant_name(v))
            return v;
    return std::nullopt;
}

// base and copc are both the constant map onto {t}.
inline nframe n_variant(const delta_poset& d, delta_variant v)
{
    const world_set all = d.order.all();
    const world_set off_root = all & ~singleton(d.root);
    const world_set top = singleton(d.top);
    ntable table;
    for (world_set x : enumerate_upsets(d.order)) {
        switch (v) {
        case delta_variant::base:
        case delta_variant::copc: table[x] = top; break;
        case delta_variant::nef: table[x] = x == off_root ? all : off_root; break;
        case delta_variant::sub_nef: table[x] = x == all ? all : off_root; break;
        }
    }
    return nframe(d.order, table);
}

// The valuation used to refute the base or nef formulas at the root.
inline valuation theta_valuation(const delta_poset& d, delta_variant v)
{
    switch (v) {
    case delta_variant::base: return {{"p", singleton(d.top)}};
    case delta_variant::nef: return {{"p", singleton(d.top)}, {"q", d.order.all() & ~singleton(d.root)}};
    default: throw std::invalid_argument("theta_valuation: only base and nef are covered");
    }
}

// base: p -> ~p holds everywhere and ~p fails at the root.
// nef: p -> q holds everywhere, ~q holds at the root and ~p fails there.
inline bool theta_refutation_check(const delta_poset& d, delta_variant v, const valuation& val)
{
    const nmodel m(n_variant(d, v), val);
    const formula p = formula::var("p"), q = formula::var("q");
    const world_set all = d.order.all();
    switch (v) {
    case delta_variant::base:
        return eval(m, formula::imp(p, formula::neg(p))) == all && !contains(eval(m, formula::neg(p)), d.root);
    case delta_variant::nef:
        return eval(m, formula::imp(p, q)) == all && contains(eval(m, formula::neg(q)), d.root) &&
               !contains(eval(m, formula::neg(p)), d.root);
    default: throw std::invalid_argument("theta_refutation_check: only base and nef are covered");
    }
}

inline bool theta_refutation_check(const delta_poset& d, delta_variant v)
{
    return theta_refutation_check(d, v, theta_valuation(d, v));
}

} // namespace subminimal
