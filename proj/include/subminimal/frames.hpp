#pragma once

// Finite posets, N-frames and N-models.
//
// Worlds are indices 0..n-1 and sets of worlds are bitmasks (bit i = world i).
// An N-frame pairs a poset with a total map N on its upsets satisfying
//     N(X) & Y == N(X & Y) & Y        for all upsets X, Y.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "syntax.hpp"

namespace subminimal {

using world_set = std::uint32_t;

inline constexpr int max_world_count = 20;

class invalid_structure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline world_set full_set(int n) { return n >= 32 ? ~world_set{0} : (world_set{1} << n) - 1; }
inline bool contains(world_set s, int w) { return (s >> w) & 1U; }
inline world_set singleton(int w) { return world_set{1} << w; }
inline bool subset_of(world_set a, world_set b) { return (a & ~b) == 0; }

class poset {
public:
    poset() = default;

    // up[w] is R(w) = {v : w <= v}. Checks reflexivity, transitivity and
    // antisymmetry.
    static poset from_successors(std::vector<world_set> up)
    {
        const int n = static_cast<int>(up.size());
        check_size(n);
        for (int w = 0; w < n; ++w) {
            if (!contains(up[w], w))
                throw invalid_structure("order is not reflexive at world " + std::to_string(w));
            if (!subset_of(up[w], full_set(n)))
                throw invalid_structure("order mentions a world out of range");
        }
        for (int w = 0; w < n; ++w)
            for (int v = 0; v < n; ++v)
                if (contains(up[w], v) && !subset_of(up[v], up[w]))
                    throw invalid_structure("order is not transitive");
        for (int w = 0; w < n; ++w)
            for (int v = w + 1; v < n; ++v)
                if (contains(up[w], v) && contains(up[v], w))
                    throw invalid_structure("order is not antisymmetric");
        return poset(std::move(up));
    }

    // Reflexive-transitive closure of the given pairs (i <= j).
    static poset from_pairs(int n, std::span<const std::pair<int, int>> pairs)
    {
        check_size(n);
        std::vector<world_set> up(n);
        for (int w = 0; w < n; ++w)
            up[w] = singleton(w);
        for (auto [i, j] : pairs) {
            if (i < 0 || j < 0 || i >= n || j >= n)
                throw invalid_structure("order pair out of range");
            up[i] |= singleton(j);
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (int w = 0; w < n; ++w) {
                world_set next = up[w];
                for (int v = 0; v < n; ++v)
                    if (contains(up[w], v))
                        next |= up[v];
                if (next != up[w]) {
                    up[w] = next;
                    changed = true;
                }
            }
        }
        return from_successors(std::move(up));
    }

    static poset from_pairs(int n, std::initializer_list<std::pair<int, int>> pairs)
    {
        return from_pairs(n, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
    }

    // 0 < 1 < ... < n-1
    static poset chain(int n)
    {
        std::vector<world_set> up(n);
        for (int w = 0; w < n; ++w)
            up[w] = full_set(n) & ~(singleton(w) - 1);
        return poset(std::move(up));
    }

    static poset antichain(int n)
    {
        std::vector<world_set> up(n);
        for (int w = 0; w < n; ++w)
            up[w] = singleton(w);
        return poset(std::move(up));
    }

    int size() const { return static_cast<int>(up_.size()); }
    world_set all() const { return full_set(size()); }
    world_set up(int w) const { return up_[w]; }
    world_set down(int w) const { return down_[w]; }
    bool leq(int a, int b) const { return contains(up_[a], b); }

    bool is_upset(world_set x) const
    {
        for (int w = 0; w < size(); ++w)
            if (contains(x, w) && !subset_of(up_[w], x))
                return false;
        return true;
    }

    world_set upward_closure(world_set x) const
    {
        world_set out = 0;
        for (int w = 0; w < size(); ++w)
            if (contains(x, w))
                out |= up_[w];
        return out;
    }

    world_set downward_closure(world_set x) const
    {
        world_set out = 0;
        for (int w = 0; w < size(); ++w)
            if (contains(x, w))
                out |= down_[w];
        return out;
    }

    std::optional<int> root() const
    {
        for (int w = 0; w < size(); ++w)
            if (up_[w] == all())
                return w;
        return std::nullopt;
    }

    std::optional<int> top() const
    {
        for (int w = 0; w < size(); ++w)
            if (down_[w] == all())
                return w;
        return std::nullopt;
    }

    // Bit (i*n + j) is set iff i <= j.
    std::uint64_t relation_bits() const
    {
        std::uint64_t bits = 0;
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j)
                if (leq(i, j))
                    bits |= std::uint64_t{1} << (i * size() + j);
        return bits;
    }

    // All pairs i < j (strictly) of the order, sorted.
    std::vector<std::pair<int, int>> strict_pairs() const
    {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j)
                if (i != j && leq(i, j))
                    out.emplace_back(i, j);
        return out;
    }

    // Image of the order under a permutation: world w becomes perm[w].
    poset relabel(std::span<const int> perm) const
    {
        std::vector<world_set> up(size());
        for (int w = 0; w < size(); ++w)
            up[perm[w]] = map_set(up_[w], perm);
        return poset(std::move(up));
    }

    static world_set map_set(world_set x, std::span<const int> perm)
    {
        world_set out = 0;
        for (int w = 0; w < static_cast<int>(perm.size()); ++w)
            if (contains(x, w))
                out |= singleton(perm[w]);
        return out;
    }

    friend bool operator==(const poset& a, const poset& b) { return a.up_ == b.up_; }

private:
    explicit poset(std::vector<world_set> up) : up_(std::move(up)), down_(up_.size(), 0)
    {
        for (int w = 0; w < size(); ++w)
            for (int v = 0; v < size(); ++v)
                if (contains(up_[w], v))
                    down_[v] |= singleton(w);
    }

    static void check_size(int n)
    {
        if (n < 1 || n > max_world_count)
            throw invalid_structure("world count must be in 1.." + std::to_string(max_world_count));
    }

    std::vector<world_set> up_;
    std::vector<world_set> down_;
};

// All upsets of p, ascending by bitmask, each exactly once.
inline std::vector<world_set> enumerate_upsets(const poset& p)
{
    std::vector<world_set> out;
    // Grow from each upset by adding a world whose successors are all present;
    // a sorted set keeps the output deduplicated.
    std::set<world_set> seen{0};
    std::vector<world_set> frontier{0};
    while (!frontier.empty()) {
        std::vector<world_set> next;
        for (world_set x : frontier)
            for (int w = 0; w < p.size(); ++w)
                if (!contains(x, w) && subset_of(p.up(w) & ~singleton(w), x)) {
                    const world_set y = x | singleton(w);
                    if (seen.insert(y).second)
                        next.push_back(y);
                }
        frontier = std::move(next);
    }
    out.assign(seen.begin(), seen.end());
    return out;
}

// Heyting implication on upsets: {w : R(w) & x is contained in y}.
inline world_set heyting_implication(const poset& p, world_set x, world_set y)
{
    world_set out = 0;
    for (int w = 0; w < p.size(); ++w)
        if (subset_of(p.up(w) & x, y))
            out |= singleton(w);
    return out;
}

// Raw N-table keyed by upset bitmask.
using ntable = std::map<world_set, world_set>;

struct locality_violation {
    world_set x;
    world_set y;
};

// Checks totality of the table, upward closure of its values and the
// locality law for all pairs of upsets. Malformed tables throw; a locality
// failure is returned with its witness pair.
inline std::optional<locality_violation> check_nframe(const poset& p, const ntable& table)
{
    const auto ups = enumerate_upsets(p);
    for (world_set x : ups) {
        auto it = table.find(x);
        if (it == table.end())
            throw invalid_structure("N-table has no entry for upset " + std::to_string(x));
        if (!p.is_upset(it->second))
            throw invalid_structure("N-table value for " + std::to_string(x) + " is not an upset");
    }
    for (const auto& [key, value] : table)
        if (!p.is_upset(key))
            throw invalid_structure("N-table key " + std::to_string(key) + " is not an upset");
    for (world_set x : ups)
        for (world_set y : ups)
            if ((table.at(x) & y) != (table.at(x & y) & y))
                return locality_violation{x, y};
    return std::nullopt;
}

class nframe {
public:
    nframe() = default;

    // Throws invalid_structure unless the table is a valid N-function.
    nframe(poset order, const ntable& table) : order_(std::move(order))
    {
        if (auto v = check_nframe(order_, table))
            throw invalid_structure("N violates locality at X=" + std::to_string(v->x) +
                                    ", Y=" + std::to_string(v->y));
        init_upsets();
        for (std::size_t i = 0; i < upsets_.size(); ++i)
            image_[i] = table.at(upsets_[i]);
    }

    // images[i] is N of the i-th upset in ascending order. Unchecked; used by
    // enumerators that only produce valid frames.
    static nframe from_images(poset order, std::vector<world_set> images)
    {
        nframe f;
        f.order_ = std::move(order);
        f.init_upsets();
        if (images.size() != f.upsets_.size())
            throw invalid_structure("image vector size does not match upset count");
        f.image_ = std::move(images);
        return f;
    }

    template <class Fn>
    static nframe from_function(poset order, Fn&& n_of)
    {
        nframe f;
        f.order_ = std::move(order);
        f.init_upsets();
        for (std::size_t i = 0; i < f.upsets_.size(); ++i)
            f.image_[i] = n_of(f.upsets_[i]);
        return f;
    }

    const poset& order() const { return order_; }
    int size() const { return order_.size(); }
    const std::vector<world_set>& upsets() const { return upsets_; }
    const std::vector<world_set>& images() const { return image_; }

    int upset_index(world_set x) const
    {
        const int i = x < slot_.size() ? slot_[x] : -1;
        if (i < 0)
            throw invalid_structure("N applied to a non-upset " + std::to_string(x));
        return i;
    }

    world_set n(world_set x) const { return image_[upset_index(x)]; }

    ntable table() const
    {
        ntable t;
        for (std::size_t i = 0; i < upsets_.size(); ++i)
            t.emplace(upsets_[i], image_[i]);
        return t;
    }

    friend bool operator==(const nframe& a, const nframe& b)
    {
        return a.order_ == b.order_ && a.image_ == b.image_;
    }

private:
    void init_upsets()
    {
        upsets_ = enumerate_upsets(order_);
        image_.assign(upsets_.size(), 0);
        slot_.assign(std::size_t{1} << order_.size(), -1);
        for (std::size_t i = 0; i < upsets_.size(); ++i)
            slot_[upsets_[i]] = static_cast<int>(i);
    }

    poset order_;
    std::vector<world_set> upsets_;
    std::vector<world_set> image_;
    std::vector<int> slot_;
};

// w in N(X) iff w in N(X & R(w)), for all upsets X and worlds w.
inline bool satisfies_pointwise_locality(const nframe& f)
{
    for (world_set x : f.upsets())
        for (int w = 0; w < f.size(); ++w)
            if (contains(f.n(x), w) != contains(f.n(x & f.order().up(w)), w))
                return false;
    return true;
}

inline bool satisfies_locality(const nframe& f)
{
    for (world_set x : f.upsets())
        for (world_set y : f.upsets())
            if ((f.n(x) & y) != (f.n(x & y) & y))
                return false;
    return true;
}

using valuation = std::map<std::string, world_set>;

class nmodel {
public:
    nmodel() = default;
    nmodel(nframe frame, valuation v) : frame_(std::move(frame)), valuation_(std::move(v))
    {
        for (const auto& [name, set] : valuation_)
            if (!frame_.order().is_upset(set))
                throw invalid_structure("valuation of '" + name + "' is not an upset");
    }

    const nframe& frame() const { return frame_; }
    const poset& order() const { return frame_.order(); }
    const valuation& values() const { return valuation_; }

    // Unassigned variables are false everywhere.
    world_set value_of(const std::string& name) const
    {
        auto it = valuation_.find(name);
        return it == valuation_.end() ? 0 : it->second;
    }

private:
    nframe frame_;
    valuation valuation_;
};

// Truth set of a formula; always an upset.
inline world_set eval(const nmodel& m, const formula& f)
{
    switch (f.op()) {
    case connective::var: return m.value_of(f.name());
    case connective::top: return m.order().all();
    case connective::conj: return eval(m, f.left()) & eval(m, f.right());
    case connective::disj: return eval(m, f.left()) | eval(m, f.right());
    case connective::imp: return heyting_implication(m.order(), eval(m, f.left()), eval(m, f.right()));
    case connective::neg: return m.frame().n(eval(m, f.operand()));
    default: break;
    }
    throw std::logic_error("eval: connective outside the propositional language");
}

// Visits every valuation of the given variables into upsets of the frame, in
// lexicographic order (first variable most significant, upsets ascending).
// The visitor returns false to stop early.
template <class Visitor>
void for_each_valuation(const nframe& frame, const std::vector<std::string>& vars, Visitor&& visit)
{
    const auto& ups = frame.upsets();
    std::vector<std::size_t> digits(vars.size(), 0);
    valuation v;
    for (const auto& name : vars)
        v[name] = ups[0];
    while (true) {
        if (!visit(static_cast<const valuation&>(v)))
            return;
        std::size_t i = vars.size();
        while (i > 0) {
            --i;
            if (++digits[i] < ups.size()) {
                v[vars[i]] = ups[digits[i]];
                break;
            }
            digits[i] = 0;
            v[vars[i]] = ups[0];
            if (i == 0)
                return;
        }
        if (vars.empty())
            return;
    }
}

struct refutation {
    valuation values;
    int world;
};

// Least refuting valuation and world on the frame, if any.
inline std::optional<refutation> find_refutation(const nframe& frame, const formula& f)
{
    const auto var_set = variables(f);
    const std::vector<std::string> vars(var_set.begin(), var_set.end());
    std::optional<refutation> found;
    for_each_valuation(frame, vars, [&](const valuation& v) {
        const nmodel m(frame, v);
        const world_set truth = eval(m, f);
        if (truth != frame.order().all()) {
            found = refutation{v, std::countr_one(truth)};
            return false;
        }
        return true;
    });
    return found;
}

inline bool frame_validates(const nframe& frame, const formula& f) { return !find_refutation(frame, f); }

enum class logic { n, nef, copc, mpc };

inline const char* logic_name(logic l)
{
    switch (l) {
    case logic::n: return "N";
    case logic::nef: return "NeF";
    case logic::copc: return "CoPC";
    case logic::mpc: return "MPC";
    }
    return "?";
}

inline std::optional<logic> parse_logic(std::string_view s)
{
    std::string lower;
    for (char c : s)
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "n")
        return logic::n;
    if (lower == "nef")
        return logic::nef;
    if (lower == "copc")
        return logic::copc;
    if (lower == "mpc")
        return logic::mpc;
    return std::nullopt;
}

// Axiom added to positive logic (N) or to N (the others).
inline formula axiom_scheme(logic l)
{
    switch (l) {
    case logic::n: return parse_formula("(p <-> q) -> (~p <-> ~q)");
    case logic::nef: return parse_formula("(p & ~p) -> ~q");
    case logic::copc: return parse_formula("(p -> q) -> (~q -> ~p)");
    case logic::mpc: return parse_formula("(p -> ~p) -> ~p");
    }
    throw std::logic_error("unknown logic");
}

// X & N(X) is contained in N(Y) for all upsets X, Y.
inline bool has_negative_ex_falso(const nframe& f)
{
    world_set contradictions = 0;
    world_set everywhere = f.order().all();
    for (world_set x : f.upsets()) {
        contradictions |= x & f.n(x);
        everywhere &= f.n(x);
    }
    return subset_of(contradictions, everywhere);
}

inline bool is_antitone(const nframe& f)
{
    for (world_set x : f.upsets())
        for (world_set y : f.upsets())
            if (subset_of(x, y) && !subset_of(f.n(y), f.n(x)))
                return false;
    return true;
}

// Membership of a valid N-frame in the frame class of a logic. NeF and CoPC
// use their first-order conditions, MPC the validity of its axiom.
inline bool frame_class(const nframe& f, logic l)
{
    switch (l) {
    case logic::n: return true;
    case logic::nef: return has_negative_ex_falso(f);
    case logic::copc: return is_antitone(f);
    case logic::mpc: return frame_validates(f, axiom_scheme(logic::mpc));
    }
    return false;
}

inline bool frame_class_by_scheme(const nframe& f, logic l)
{
    switch (l) {
    case logic::n: return frame_validates(f, axiom_scheme(logic::n));
    case logic::nef: return frame_validates(f, axiom_scheme(logic::nef));
    case logic::copc:
        return frame_validates(f, axiom_scheme(logic::nef)) && frame_validates(f, axiom_scheme(logic::copc));
    case logic::mpc: return frame_validates(f, axiom_scheme(logic::mpc));
    }
    return false;
}

// ---------------------------------------------------------------------------
// Neighbourhood presentation: n(w) = {X upset : w in N(X)}.

struct neighbourhood_frame {
    poset order;
    std::vector<std::set<world_set>> neighbourhoods;

    friend bool operator==(const neighbourhood_frame&, const neighbourhood_frame&) = default;
};

inline neighbourhood_frame to_neighbourhood(const nframe& f)
{
    neighbourhood_frame out{f.order(), std::vector<std::set<world_set>>(f.size())};
    for (world_set x : f.upsets())
        for (int w = 0; w < f.size(); ++w)
            if (contains(f.n(x), w))
                out.neighbourhoods[w].insert(x);
    return out;
}

// Requires monotone neighbourhoods (w <= v implies n(w) within n(v)) and
// X in n(w) iff X & R(w) in n(w); throws invalid_structure otherwise.
inline nframe from_neighbourhood(const neighbourhood_frame& nf)
{
    const poset& p = nf.order;
    if (static_cast<int>(nf.neighbourhoods.size()) != p.size())
        throw invalid_structure("one neighbourhood set per world required");
    for (int w = 0; w < p.size(); ++w)
        for (world_set x : nf.neighbourhoods[w])
            if (!p.is_upset(x))
                throw invalid_structure("neighbourhood of world " + std::to_string(w) + " has a non-upset");
    const auto ups = enumerate_upsets(p);
    for (int w = 0; w < p.size(); ++w)
        for (int v = 0; v < p.size(); ++v)
            if (p.leq(w, v))
                for (world_set x : nf.neighbourhoods[w])
                    if (!nf.neighbourhoods[v].contains(x))
                        throw invalid_structure("neighbourhood function is not monotone at " +
                                                std::to_string(w) + " <= " + std::to_string(v));
    for (int w = 0; w < p.size(); ++w)
        for (world_set x : ups)
            if (nf.neighbourhoods[w].contains(x) != nf.neighbourhoods[w].contains(x & p.up(w)))
                throw invalid_structure("neighbourhood of world " + std::to_string(w) + " is not local");
    return nframe::from_function(p, [&](world_set x) {
        world_set out = 0;
        for (int w = 0; w < p.size(); ++w)
            if (nf.neighbourhoods[w].contains(x))
                out |= singleton(w);
        return out;
    });
}

} // namespace subminimal
