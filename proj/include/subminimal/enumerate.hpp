#pragma once

// Exhaustive enumeration of small posets and of all N-functions on a poset,
// and brute-force isomorphism search.

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "frames.hpp"

namespace subminimal {

// Visits every partial order on n labelled worlds in ascending order of
// relation_bits(). Practical for n <= 5. Return false to stop.
template <class Visitor>
void for_each_labelled_poset(int n, Visitor&& visit)
{
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                slots.emplace_back(i, j);
    const std::uint64_t count = std::uint64_t{1} << slots.size();
    std::vector<world_set> up(n);
    for (std::uint64_t pattern = 0; pattern < count; ++pattern) {
        for (int w = 0; w < n; ++w)
            up[w] = singleton(w);
        bool ok = true;
        for (std::size_t k = 0; k < slots.size(); ++k)
            if ((pattern >> k) & 1U) {
                auto [i, j] = slots[k];
                if (i > j && contains(up[j], i)) {
                    ok = false;
                    break;
                }
                up[i] |= singleton(j);
            }
        if (!ok)
            continue;
        // transitivity and antisymmetry
        for (int w = 0; w < n && ok; ++w)
            for (int v = 0; v < n && ok; ++v)
                if (v != w && contains(up[w], v))
                    ok = subset_of(up[v], up[w]) && !contains(up[v], w);
        if (!ok)
            continue;
        if (!visit(poset::from_successors(up)))
            return;
    }
}

inline std::vector<poset> labelled_posets(int n)
{
    std::vector<poset> out;
    for_each_labelled_poset(n, [&](const poset& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

// Every bijection perm with a <= b iff perm[a] <=' perm[b]. Return false to
// stop.
template <class Visitor>
void for_each_poset_isomorphism(const poset& a, const poset& b, Visitor&& visit)
{
    const int n = a.size();
    if (b.size() != n)
        return;
    auto signature = [](const poset& p, int w) {
        return std::pair{std::popcount(p.up(w)), std::popcount(p.down(w))};
    };
    std::vector<int> perm(n, -1);
    world_set used = 0;
    std::function<bool(int)> extend = [&](int w) -> bool {
        if (w == n)
            return visit(static_cast<const std::vector<int>&>(perm));
        for (int img = 0; img < n; ++img) {
            if (contains(used, img) || signature(a, w) != signature(b, img))
                continue;
            bool ok = true;
            for (int u = 0; u < w && ok; ++u)
                ok = a.leq(u, w) == b.leq(perm[u], img) && a.leq(w, u) == b.leq(img, perm[u]);
            if (!ok)
                continue;
            perm[w] = img;
            used |= singleton(img);
            if (!extend(w + 1))
                return false;
            used &= ~singleton(img);
            perm[w] = -1;
        }
        return true;
    };
    extend(0);
}

inline std::optional<std::vector<int>> find_poset_isomorphism(const poset& a, const poset& b)
{
    std::optional<std::vector<int>> found;
    for_each_poset_isomorphism(a, b, [&](const std::vector<int>& perm) {
        found = perm;
        return false;
    });
    return found;
}

// Frame isomorphism: a poset isomorphism carrying N to N. With
// admissible_only, N is compared on nonempty upsets only (top frames).
inline std::optional<std::vector<int>> find_nframe_isomorphism(const nframe& a, const nframe& b,
                                                               bool admissible_only = false)
{
    std::optional<std::vector<int>> found;
    for_each_poset_isomorphism(a.order(), b.order(), [&](const std::vector<int>& perm) {
        for (world_set x : a.upsets()) {
            if (admissible_only && x == 0)
                continue;
            if (poset::map_set(a.n(x), perm) != b.n(poset::map_set(x, perm)))
                return true;
        }
        found = perm;
        return false;
    });
    return found;
}

// Posets on n worlds up to isomorphism. Each class is represented by a
// naturally labelled member (i <= j implies i <= j as integers). Built by
// adding a new maximal world above a downset of each smaller representative.
inline std::vector<poset> posets_up_to_isomorphism(int n)
{
    if (n == 1)
        return {poset::antichain(1)};
    std::vector<poset> out;
    for (const poset& base : posets_up_to_isomorphism(n - 1)) {
        // downsets of base: complements of upsets
        for (world_set ups : enumerate_upsets(base)) {
            const world_set below = base.all() & ~ups;
            std::vector<world_set> up(n);
            for (int w = 0; w < n - 1; ++w)
                up[w] = base.up(w) | (contains(below, w) ? singleton(n - 1) : 0);
            up[n - 1] = singleton(n - 1);
            poset candidate = poset::from_successors(up);
            bool fresh = true;
            for (const poset& seen : out)
                if (seen.relation_bits() == candidate.relation_bits() ||
                    find_poset_isomorphism(seen, candidate)) {
                    fresh = false;
                    break;
                }
            if (fresh)
                out.push_back(std::move(candidate));
        }
    }
    return out;
}

// All valid N-functions on p, sorted lexicographically by their image
// vectors (upsets in ascending order).
//
// By locality, whether w is in N(X) depends only on X & R(w), so an
// N-function is a choice of bits b(w, U) for upsets U within R(w), subject
// to upward closure: w <= v and b(w, U) imply b(v, U & R(v)).
inline std::vector<nframe> enumerate_nframes(const poset& p, std::size_t limit = 50'000'000)
{
    const int n = p.size();
    const auto ups = enumerate_upsets(p);
    struct slot {
        int world;
        world_set local;
    };
    // worlds from the top down, so all strict successors are decided first
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::popcount(p.up(a)) < std::popcount(p.up(b)); });
    std::vector<slot> slots;
    for (int w : order)
        for (world_set u : ups)
            if (subset_of(u, p.up(w)))
                slots.push_back({w, u});
    std::vector<std::vector<std::uint8_t>> bit(n, std::vector<std::uint8_t>(std::size_t{1} << n, 0));

    std::vector<nframe> out;
    std::function<void(std::size_t)> assign = [&](std::size_t k) {
        if (out.size() > limit)
            throw invalid_structure("too many N-functions to enumerate");
        if (k == slots.size()) {
            std::vector<world_set> images(ups.size(), 0);
            for (std::size_t i = 0; i < ups.size(); ++i)
                for (int w = 0; w < n; ++w)
                    if (bit[w][ups[i] & p.up(w)])
                        images[i] |= singleton(w);
            out.push_back(nframe::from_images(p, std::move(images)));
            return;
        }
        const auto [w, u] = slots[k];
        bool allowed = true;
        for (int v = 0; v < n && allowed; ++v)
            if (v != w && p.leq(w, v))
                allowed = bit[v][u & p.up(v)] != 0;
        bit[w][u] = 0;
        assign(k + 1);
        if (allowed) {
            bit[w][u] = 1;
            assign(k + 1);
            bit[w][u] = 0;
        }
    };
    assign(0);
    std::sort(out.begin(), out.end(),
              [](const nframe& a, const nframe& b) { return a.images() < b.images(); });
    return out;
}

} // namespace subminimal
