#pragma once

// Finite N-algebras: Heyting lattices with a compatible unary negation, the
// prime-filter duality with top frames, and algebraic filtration.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "enumerate.hpp"
#include "filtration.hpp"
#include "frames.hpp"
#include "syntax.hpp"

namespace subminimal {

// Subsets of algebra elements; algebras have at most 64 elements.
using element_set = std::uint64_t;
inline constexpr int max_algebra_size = 64;

inline element_set element_bit(int a) { return element_set{1} << a; }
inline bool has_element(element_set s, int a) { return (s >> a) & 1U; }

struct n_algebra {
    int size = 0;
    std::vector<std::vector<int>> meet, join, imp;
    std::vector<int> neg;
    int one = 0;

    bool leq(int a, int b) const { return meet[a][b] == a; }

    // Least element; requires a lattice.
    int zero() const
    {
        int z = one;
        for (int a = 0; a < size; ++a)
            z = meet[z][a];
        return z;
    }

    friend bool operator==(const n_algebra&, const n_algebra&) = default;
};

struct algebra_violation {
    std::string law;
    int x = -1, y = -1, z = -1;
};

// Shape errors throw; a failed law is returned with its witness.
inline std::optional<algebra_violation> check_nalgebra(const n_algebra& a)
{
    const int n = a.size;
    if (n < 1 || n > max_algebra_size)
        throw invalid_structure("algebra size must be in 1.." + std::to_string(max_algebra_size));
    auto square = [n](const std::vector<std::vector<int>>& t) {
        if (static_cast<int>(t.size()) != n)
            return false;
        for (const auto& row : t) {
            if (static_cast<int>(row.size()) != n)
                return false;
            for (int v : row)
                if (v < 0 || v >= n)
                    return false;
        }
        return true;
    };
    if (!square(a.meet) || !square(a.join) || !square(a.imp) || static_cast<int>(a.neg.size()) != n ||
        a.one < 0 || a.one >= n)
        throw invalid_structure("algebra tables are not total");
    for (int v : a.neg)
        if (v < 0 || v >= n)
            throw invalid_structure("negation table out of range");

    for (int x = 0; x < n; ++x) {
        if (a.meet[x][x] != x)
            return algebra_violation{"meet idempotence", x};
        if (a.join[x][x] != x)
            return algebra_violation{"join idempotence", x};
        if (a.meet[x][a.one] != x)
            return algebra_violation{"one is the top", x};
        for (int y = 0; y < n; ++y) {
            if (a.meet[x][y] != a.meet[y][x])
                return algebra_violation{"meet commutativity", x, y};
            if (a.join[x][y] != a.join[y][x])
                return algebra_violation{"join commutativity", x, y};
            if (a.meet[x][a.join[x][y]] != x)
                return algebra_violation{"absorption", x, y};
            if (a.join[x][a.meet[x][y]] != x)
                return algebra_violation{"absorption", x, y};
            for (int z = 0; z < n; ++z) {
                if (a.meet[a.meet[x][y]][z] != a.meet[x][a.meet[y][z]])
                    return algebra_violation{"meet associativity", x, y, z};
                if (a.join[a.join[x][y]][z] != a.join[x][a.join[y][z]])
                    return algebra_violation{"join associativity", x, y, z};
                if (a.leq(a.meet[x][y], z) != a.leq(x, a.imp[y][z]))
                    return algebra_violation{"residuation", x, y, z};
            }
            if (a.meet[x][a.neg[y]] != a.meet[x][a.neg[a.meet[x][y]]])
                return algebra_violation{"compatibility", x, y};
        }
    }
    return std::nullopt;
}

inline bool satisfies_compatibility(const n_algebra& a)
{
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            if (a.meet[x][a.neg[y]] != a.meet[x][a.neg[a.meet[x][y]]])
                return false;
    return true;
}

// Algebra on the given upsets of a frame (closed under ∩, ∪, → and N).
// Element i is elements[i].
struct set_algebra {
    n_algebra algebra;
    std::vector<world_set> elements;
};

inline set_algebra algebra_of_upsets(const nframe& f, std::vector<world_set> elements)
{
    const int n = static_cast<int>(elements.size());
    if (n > max_algebra_size)
        throw invalid_structure("too many elements for an algebra");
    std::map<world_set, int> index;
    for (int i = 0; i < n; ++i)
        index[elements[i]] = i;
    auto at = [&](world_set x) {
        auto it = index.find(x);
        if (it == index.end())
            throw invalid_structure("upset family is not closed under the operations");
        return it->second;
    };
    const poset& p = f.order();
    n_algebra a;
    a.size = n;
    a.meet.assign(n, std::vector<int>(n));
    a.join = a.imp = a.meet;
    a.neg.resize(n);
    for (int i = 0; i < n; ++i) {
        a.neg[i] = at(f.n(elements[i]));
        for (int j = 0; j < n; ++j) {
            a.meet[i][j] = at(elements[i] & elements[j]);
            a.join[i][j] = at(elements[i] | elements[j]);
            a.imp[i][j] = at(heyting_implication(p, elements[i], elements[j]));
        }
    }
    a.one = at(p.all());
    return {a, elements};
}

// All upsets, the empty one included.
inline set_algebra upset_algebra(const nframe& f) { return algebra_of_upsets(f, f.upsets()); }

// A finite frame with a greatest world t that lies in N(X) for every
// nonempty upset X, so that N maps admissible sets to admissible sets.
inline bool is_top_frame(const nframe& f)
{
    const auto t = f.order().top();
    if (!t)
        return false;
    for (world_set x : f.upsets())
        if (x != 0 && !contains(f.n(x), *t))
            return false;
    return true;
}

// The algebra of admissible sets of a top frame: the nonempty upsets.
inline set_algebra admissible_algebra(const nframe& f)
{
    if (!is_top_frame(f))
        throw invalid_structure("not a top frame");
    std::vector<world_set> nonempty;
    for (world_set x : f.upsets())
        if (x != 0)
            nonempty.push_back(x);
    return algebra_of_upsets(f, nonempty);
}

// Prime filters, the improper one included. In a finite distributive lattice
// these are the principal filters of join-prime elements, the least element
// counting as join-prime. Ordered by generating element index.
inline std::vector<element_set> prime_filters(const n_algebra& a)
{
    std::vector<element_set> out;
    for (int j = 0; j < a.size; ++j) {
        bool prime = true;
        for (int b = 0; b < a.size && prime; ++b)
            for (int c = 0; c < a.size && prime; ++c)
                if (a.leq(j, a.join[b][c]) && !a.leq(j, b) && !a.leq(j, c))
                    prime = false;
        if (!prime)
            continue;
        element_set up = 0;
        for (int b = 0; b < a.size; ++b)
            if (a.leq(j, b))
                up |= element_bit(b);
        out.push_back(up);
    }
    return out;
}

struct algebra_dual {
    nframe frame;
    std::vector<element_set> filters;   // world i is filters[i]

    // â: the worlds containing a.
    world_set hat(int a) const
    {
        world_set out = 0;
        for (std::size_t w = 0; w < filters.size(); ++w)
            if (has_element(filters[w], a))
                out |= singleton(static_cast<int>(w));
        return out;
    }
};

// Prime filters ordered by inclusion, N_A(X) = {w : some ¬a in w has
// R(w) ∩ â = R(w) ∩ X}, on every upset X.
inline algebra_dual dual_frame(const n_algebra& a)
{
    if (auto v = check_nalgebra(a))
        throw invalid_structure("not an N-algebra: " + v->law);
    algebra_dual d;
    d.filters = prime_filters(a);
    const int n = static_cast<int>(d.filters.size());
    if (n > max_world_count)
        throw invalid_structure("dual frame too large");
    std::vector<world_set> up(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if ((d.filters[i] & ~d.filters[j]) == 0)
                up[i] |= singleton(j);
    const poset p = poset::from_successors(up);
    std::vector<world_set> hats(a.size);
    for (int e = 0; e < a.size; ++e)
        hats[e] = d.hat(e);
    d.frame = nframe::from_function(p, [&](world_set x) {
        world_set out = 0;
        for (int w = 0; w < n; ++w)
            for (int e = 0; e < a.size; ++e)
                if (has_element(d.filters[w], a.neg[e]) && (hats[e] & p.up(w)) == (x & p.up(w))) {
                    out |= singleton(w);
                    break;
                }
        return out;
    });
    return d;
}

// Bijection on elements preserving every operation and the unit.
inline std::optional<std::vector<int>> find_algebra_isomorphism(const n_algebra& a, const n_algebra& b)
{
    if (a.size != b.size)
        return std::nullopt;
    const int n = a.size;
    auto below = [](const n_algebra& x, int e) {
        int c = 0;
        for (int f = 0; f < x.size; ++f)
            c += x.leq(f, e);
        return c;
    };
    std::vector<int> map(n, -1), order(n);
    for (int i = 0; i < n; ++i)
        order[i] = i;
    std::vector<char> used(n, 0);
    std::optional<std::vector<int>> found;
    std::function<bool(int)> extend = [&](int k) -> bool {
        if (k == n) {
            for (int x = 0; x < n; ++x) {
                if (map[a.neg[x]] != b.neg[map[x]])
                    return false;
                for (int y = 0; y < n; ++y)
                    if (map[a.meet[x][y]] != b.meet[map[x]][map[y]] || map[a.join[x][y]] != b.join[map[x]][map[y]] ||
                        map[a.imp[x][y]] != b.imp[map[x]][map[y]])
                        return false;
            }
            found = map;
            return true;
        }
        const int x = order[k];
        for (int img = 0; img < n; ++img) {
            if (used[img] || below(a, x) != below(b, img) || (x == a.one) != (img == b.one))
                continue;
            bool ok = true;
            for (int j = 0; j < k && ok; ++j) {
                const int y = order[j];
                ok = a.leq(x, y) == b.leq(img, map[y]) && a.leq(y, x) == b.leq(map[y], img);
            }
            if (!ok)
                continue;
            map[x] = img;
            used[img] = 1;
            if (extend(k + 1))
                return true;
            used[img] = 0;
            map[x] = -1;
        }
        return false;
    };
    extend(0);
    return found;
}

// Top frames: f ≅ dual of its admissible algebra, N compared on admissible
// sets. The embedding a ↦ â must also be injective and carry ¬ to N.
inline bool duality_check(const nframe& f)
{
    const set_algebra adm = admissible_algebra(f);
    const algebra_dual d = dual_frame(adm.algebra);
    if (!find_nframe_isomorphism(f, d.frame, true))
        return false;
    std::set<world_set> seen;
    for (int e = 0; e < adm.algebra.size; ++e) {
        if (!seen.insert(d.hat(e)).second)
            return false;
        if (d.frame.n(d.hat(e)) != d.hat(adm.algebra.neg[e]))
            return false;
    }
    return true;
}

// Algebras: a ≅ algebra of admissible sets of its dual, and α is an embedding.
inline bool duality_check(const n_algebra& a)
{
    const algebra_dual d = dual_frame(a);
    const poset& p = d.frame.order();
    std::set<world_set> seen;
    for (int x = 0; x < a.size; ++x) {
        const world_set hx = d.hat(x);
        if (!seen.insert(hx).second)
            return false;
        if (d.frame.n(hx) != d.hat(a.neg[x]))
            return false;
        for (int y = 0; y < a.size; ++y) {
            const world_set hy = d.hat(y);
            if (d.hat(a.meet[x][y]) != (hx & hy) || d.hat(a.join[x][y]) != (hx | hy) ||
                d.hat(a.imp[x][y]) != heyting_implication(p, hx, hy))
                return false;
        }
    }
    if (d.hat(a.one) != p.all())
        return false;
    if (!is_top_frame(d.frame))
        return false;
    return find_algebra_isomorphism(a, admissible_algebra(d.frame).algebra).has_value();
}

// Some s ≠ 1 lies above every element other than 1.
inline bool subdirectly_irreducible(const n_algebra& a)
{
    for (int s = 0; s < a.size; ++s) {
        if (s == a.one)
            continue;
        bool top = true;
        for (int x = 0; x < a.size && top; ++x)
            if (x != a.one && !a.leq(x, s))
                top = false;
        if (top)
            return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Algebraic semantics and filtration.

using algebra_valuation = std::map<std::string, int>;

inline int alg_eval(const n_algebra& a, const algebra_valuation& mu, const formula& f)
{
    switch (f.op()) {
    case connective::var: {
        auto it = mu.find(f.name());
        if (it == mu.end())
            throw std::invalid_argument("no value for variable '" + f.name() + "'");
        return it->second;
    }
    case connective::top: return a.one;
    case connective::conj: return a.meet[alg_eval(a, mu, f.left())][alg_eval(a, mu, f.right())];
    case connective::disj: return a.join[alg_eval(a, mu, f.left())][alg_eval(a, mu, f.right())];
    case connective::imp: return a.imp[alg_eval(a, mu, f.left())][alg_eval(a, mu, f.right())];
    case connective::neg: return a.neg[alg_eval(a, mu, f.operand())];
    default: break;
    }
    throw std::logic_error("alg_eval: connective outside the propositional language");
}

struct algebraic_filtration {
    n_algebra algebra;            // on indices 0..|L|-1
    std::vector<int> elements;    // index in L -> element of the source algebra
    algebra_valuation mu;         // valuation into L indices
};

// The (∧, ∨, 1)-closure of μ[Σ] ∪ {1}, ascending.
inline std::vector<int> generated_sublattice(const n_algebra& a, const algebra_valuation& mu,
                                             const std::set<formula>& sigma)
{
    std::set<int> s{a.one};
    for (const formula& f : sigma)
        s.insert(alg_eval(a, mu, f));
    bool grown = true;
    while (grown) {
        grown = false;
        const std::vector<int> cur(s.begin(), s.end());
        for (int x : cur)
            for (int y : cur)
                grown |= s.insert(a.meet[x][y]).second | s.insert(a.join[x][y]).second;
    }
    return {s.begin(), s.end()};
}

// L must contain 1 and μ[Σ] and be closed under ∧ and ∨. Then
// a →_L b = ⋁{s ∈ L : a ∧ s ≤ b} and ¬_L a = ⋁{s ∈ L : s ≤ ¬a}, where an
// empty join is the least element of L.
inline algebraic_filtration general_algebraic_filtration(const n_algebra& a, const algebra_valuation& mu,
                                                         const std::set<formula>& sigma, std::vector<int> lattice)
{
    if (!is_subformula_closed(sigma))
        throw std::invalid_argument("filtration set must be closed under subformulas");
    std::sort(lattice.begin(), lattice.end());
    lattice.erase(std::unique(lattice.begin(), lattice.end()), lattice.end());
    std::map<int, int> index;
    for (std::size_t i = 0; i < lattice.size(); ++i)
        index[lattice[i]] = static_cast<int>(i);
    if (!index.contains(a.one))
        throw std::invalid_argument("sublattice must contain the unit");
    for (const formula& f : sigma)
        if (!index.contains(alg_eval(a, mu, f)))
            throw std::invalid_argument("sublattice misses the value of " + to_string(f));
    for (int x : lattice)
        for (int y : lattice)
            if (!index.contains(a.meet[x][y]) || !index.contains(a.join[x][y]))
                throw std::invalid_argument("not closed under meet and join");

    const int n = static_cast<int>(lattice.size());
    int least = lattice[0];
    for (int x : lattice)
        least = a.meet[least][x];
    auto join_of = [&](auto pred) {
        int acc = least;
        for (int s : lattice)
            if (pred(s))
                acc = a.join[acc][s];
        return acc;
    };
    algebraic_filtration r;
    r.elements = lattice;
    n_algebra& l = r.algebra;
    l.size = n;
    l.meet.assign(n, std::vector<int>(n));
    l.join = l.imp = l.meet;
    l.neg.resize(n);
    l.one = index.at(a.one);
    for (int i = 0; i < n; ++i) {
        const int x = lattice[i];
        l.neg[i] = index.at(join_of([&](int s) { return a.leq(s, a.neg[x]); }));
        for (int j = 0; j < n; ++j) {
            const int y = lattice[j];
            l.meet[i][j] = index.at(a.meet[x][y]);
            l.join[i][j] = index.at(a.join[x][y]);
            l.imp[i][j] = index.at(join_of([&](int s) { return a.leq(a.meet[x][s], y); }));
        }
    }
    for (const formula& f : sigma)
        if (f.is(connective::var))
            r.mu[f.name()] = index.at(mu.at(f.name()));
    return r;
}

inline algebraic_filtration sublattice_filtration(const n_algebra& a, const algebra_valuation& mu,
                                                  const std::set<formula>& sigma)
{
    return general_algebraic_filtration(a, mu, sigma, generated_sublattice(a, mu, sigma));
}

// The model on the dual frame with V(p) = (μ p)^, its greatest filtration
// through Σ, and the least algebraic filtration S. Checks that worlds are
// identified exactly when they meet S alike, that the quotient order is
// inclusion of traces on S, and that [w] ↦ w ∩ S is an order isomorphism
// onto the prime filters of S.
inline bool least_filtration_correspondence(const n_algebra& a, const algebra_valuation& mu,
                                            const std::set<formula>& sigma)
{
    const algebra_dual d = dual_frame(a);
    valuation v;
    for (const formula& f : sigma)
        if (f.is(connective::var))
            v[f.name()] = d.hat(mu.at(f.name()));
    const nmodel m(d.frame, v);
    const filtration_result g = greatest_filtration(m, sigma);
    const algebraic_filtration s = sublattice_filtration(a, mu, sigma);

    element_set s_mask = 0;
    for (int e : s.elements)
        s_mask |= element_bit(e);
    const int n = static_cast<int>(d.filters.size());
    for (int w = 0; w < n; ++w)
        for (int u = 0; u < n; ++u) {
            const element_set tw = d.filters[w] & s_mask, tu = d.filters[u] & s_mask;
            if ((g.pi[w] == g.pi[u]) != (tw == tu))
                return false;
            if (g.quotient.order().leq(g.pi[w], g.pi[u]) != ((tw & ~tu) == 0))
                return false;
        }

    // traces as prime filters of S, in S indices
    std::vector<element_set> traces(g.quotient.order().size(), 0);
    for (int w = 0; w < n; ++w) {
        element_set t = 0;
        for (std::size_t i = 0; i < s.elements.size(); ++i)
            if (has_element(d.filters[w], s.elements[i]))
                t |= element_bit(static_cast<int>(i));
        traces[g.pi[w]] = t;
    }
    const auto primes = prime_filters(s.algebra);
    if (primes.size() != traces.size())
        return false;
    for (element_set t : traces)
        if (std::find(primes.begin(), primes.end(), t) == primes.end())
            return false;
    return true;
}

} // namespace subminimal
