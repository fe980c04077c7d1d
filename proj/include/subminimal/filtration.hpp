#pragma once

// Filtrations of N-models through a subformula-closed set of formulas.

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "frames.hpp"
#include "syntax.hpp"

namespace subminimal {

struct filtration_result {
    nmodel quotient;
    std::vector<int> pi;         // world -> class index
    std::vector<formula> sigma;  // ascending

    // Worlds whose class lies in x.
    world_set preimage(world_set x) const
    {
        world_set out = 0;
        for (std::size_t w = 0; w < pi.size(); ++w)
            if (contains(x, pi[w]))
                out |= singleton(static_cast<int>(w));
        return out;
    }

    // Classes meeting the world set s.
    world_set image(world_set s) const
    {
        world_set out = 0;
        for (std::size_t w = 0; w < pi.size(); ++w)
            if (contains(s, static_cast<int>(w)))
                out |= singleton(pi[w]);
        return out;
    }
};

namespace detail {

inline std::vector<formula> checked_sigma(const std::set<formula>& sigma)
{
    if (!is_subformula_closed(sigma))
        throw std::invalid_argument("filtration set must be closed under subformulas");
    return {sigma.begin(), sigma.end()};
}

// Bit i of the result is set iff world w satisfies sigma[i]; one mask per world.
inline std::vector<std::vector<bool>> signatures(const nmodel& m, const std::vector<formula>& sigma)
{
    std::vector<std::vector<bool>> sig(m.order().size(), std::vector<bool>(sigma.size()));
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const world_set t = eval(m, sigma[i]);
        for (int w = 0; w < m.order().size(); ++w)
            sig[w][i] = contains(t, w);
    }
    return sig;
}

inline bool sig_subset(const std::vector<bool>& a, const std::vector<bool>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i])
            return false;
    return true;
}

} // namespace detail

// Classes are numbered by their least world. The order is inclusion of
// Σ-signatures. N of the quotient is the largest upset-valued local function
// meeting condition (c): [w] is in N(X) iff for every class d above [w], every
// upset X' agreeing with X on R(d) and every u in d, u is in N(π⁻¹X').
inline filtration_result greatest_filtration(const nmodel& m, const std::set<formula>& sigma_set)
{
    filtration_result r;
    r.sigma = detail::checked_sigma(sigma_set);
    const auto sig = detail::signatures(m, r.sigma);
    const int n = m.order().size();

    std::vector<int> rep;
    r.pi.assign(n, -1);
    for (int w = 0; w < n; ++w) {
        for (std::size_t c = 0; c < rep.size(); ++c)
            if (sig[rep[c]] == sig[w]) {
                r.pi[w] = static_cast<int>(c);
                break;
            }
        if (r.pi[w] < 0) {
            r.pi[w] = static_cast<int>(rep.size());
            rep.push_back(w);
        }
    }
    const int k = static_cast<int>(rep.size());
    std::vector<world_set> up(k, 0);
    for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d)
            if (detail::sig_subset(sig[rep[c]], sig[rep[d]]))
                up[c] |= singleton(d);
    const poset q = poset::from_successors(up);

    std::vector<world_set> members(k, 0);
    for (int w = 0; w < n; ++w)
        members[r.pi[w]] |= singleton(w);

    const auto ups = enumerate_upsets(q);
    // good[d][U]: every member of d lies in N(π⁻¹X') for each upset X' with X' & R(d) = U
    std::vector<std::vector<char>> good(k, std::vector<char>(std::size_t{1} << k, 1));
    for (int d = 0; d < k; ++d)
        for (world_set x : ups)
            if (!subset_of(members[d], m.frame().n(r.preimage(x))))
                good[d][x & q.up(d)] = 0;

    const nframe frame = nframe::from_function(q, [&](world_set x) {
        world_set out = 0;
        for (int c = 0; c < k; ++c) {
            bool in = true;
            for (int d = 0; d < k && in; ++d)
                if (q.leq(c, d))
                    in = good[d][x & q.up(d)] != 0;
            if (in)
                out |= singleton(c);
        }
        return out;
    });

    valuation v;
    for (const formula& f : r.sigma)
        if (f.is(connective::var))
            v[f.name()] = r.image(m.value_of(f.name()));
    r.quotient = nmodel(frame, v);
    return r;
}

inline filtration_result greatest_filtration(const nmodel& m, const formula& f)
{
    return greatest_filtration(m, subformula_closure(f));
}

struct filtration_violation {
    char condition;                 // 'a', 'b', 'c' or 'd'
    int w = -1;
    int v = -1;                     // second world for (a) and (b)
    world_set x = 0;                // quotient upset for (c)
    std::optional<formula> phi;     // formula for (b) and (d)
};

// Throws std::invalid_argument unless π is onto the quotient, its classes are
// exactly the Σ-agreement classes, and V* is the image of V on Σ variables.
inline void check_filtration_shape(const nmodel& m, const filtration_result& r)
{
    const int n = m.order().size();
    const int k = r.quotient.order().size();
    if (static_cast<int>(r.pi.size()) != n)
        throw std::invalid_argument("projection has wrong length");
    world_set hit = 0;
    for (int c : r.pi) {
        if (c < 0 || c >= k)
            throw std::invalid_argument("projection out of range");
        hit |= singleton(c);
    }
    if (hit != r.quotient.order().all())
        throw std::invalid_argument("projection is not onto");
    const auto sig = detail::signatures(m, r.sigma);
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
            if ((sig[w] == sig[v]) != (r.pi[w] == r.pi[v]))
                throw std::invalid_argument("projection classes differ from Σ-agreement");
    for (const formula& f : r.sigma)
        if (f.is(connective::var) && r.quotient.value_of(f.name()) != r.image(m.value_of(f.name())))
            throw std::invalid_argument("quotient valuation of '" + f.name() + "' is not the image");
}

inline std::optional<filtration_violation> check_conditions(const nmodel& m, const filtration_result& r)
{
    check_filtration_shape(m, r);
    const int n = m.order().size();
    const poset& q = r.quotient.order();
    const nframe& nq = r.quotient.frame();

    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
            if (m.order().leq(w, v) && !q.leq(r.pi[w], r.pi[v]))
                return filtration_violation{'a', w, v, 0, std::nullopt};

    std::vector<world_set> truth;
    for (const formula& f : r.sigma)
        truth.push_back(eval(m, f));
    for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
            if (q.leq(r.pi[w], r.pi[v]))
                for (std::size_t i = 0; i < r.sigma.size(); ++i)
                    if (contains(truth[i], w) && !contains(truth[i], v))
                        return filtration_violation{'b', w, v, 0, r.sigma[i]};

    for (world_set x : nq.upsets()) {
        const world_set back = m.frame().n(r.preimage(x));
        for (int w = 0; w < n; ++w)
            if (contains(nq.n(x), r.pi[w]) && !contains(back, w))
                return filtration_violation{'c', w, -1, x, std::nullopt};
    }

    for (std::size_t i = 0; i < r.sigma.size(); ++i) {
        if (!r.sigma[i].is(connective::neg))
            continue;
        const formula& psi = r.sigma[i].operand();
        const world_set vpsi = eval(m, psi);
        const world_set target = nq.n(r.image(vpsi));
        for (int w = 0; w < n; ++w)
            if (contains(m.frame().n(vpsi), w) && !contains(target, r.pi[w]))
                return filtration_violation{'d', w, -1, 0, psi};
    }
    return std::nullopt;
}

struct filtration_counterexample {
    formula phi;
    int world;
};

// w in V(φ) iff π(w) in V*(φ), for all φ in Σ. Requires conditions (a)-(d).
inline std::optional<filtration_counterexample> filtration_theorem_check(const nmodel& m,
                                                                         const filtration_result& r)
{
    if (check_conditions(m, r))
        throw std::invalid_argument("not a filtration: conditions (a)-(d) fail");
    for (const formula& f : r.sigma) {
        const world_set orig = eval(m, f);
        const world_set quot = eval(r.quotient, f);
        for (int w = 0; w < m.order().size(); ++w)
            if (contains(orig, w) != contains(quot, r.pi[w]))
                return filtration_counterexample{f, w};
    }
    return std::nullopt;
}

// Whether the greatest filtration dominates `other`: its order contains the
// other order, and on every upset X of the greatest order, N* of `other` is
// contained in N of the greatest filtration. Throws std::invalid_argument if
// `other` is not a filtration of m through sigma.
inline bool greatest_among(const nmodel& m, const std::set<formula>& sigma, const filtration_result& other)
{
    if (std::vector<formula>(sigma.begin(), sigma.end()) != other.sigma)
        throw std::invalid_argument("filtration is through a different set");
    if (check_conditions(m, other))
        throw std::invalid_argument("not a filtration: conditions (a)-(d) fail");
    const filtration_result g = greatest_filtration(m, sigma);
    const int k = g.quotient.order().size();
    // class of other -> class of g
    std::vector<int> to_g(k, -1);
    for (std::size_t w = 0; w < g.pi.size(); ++w)
        to_g[other.pi[w]] = g.pi[w];
    std::vector<int> from_g(k, -1);
    for (int c = 0; c < k; ++c)
        from_g[to_g[c]] = c;

    const poset& qo = other.quotient.order();
    const poset& qg = g.quotient.order();
    for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d)
            if (qo.leq(c, d) && !qg.leq(to_g[c], to_g[d]))
                return false;
    for (world_set x : g.quotient.frame().upsets()) {
        const world_set xo = poset::map_set(x, from_g);
        if (!subset_of(poset::map_set(other.quotient.frame().n(xo), to_g), g.quotient.frame().n(x)))
            return false;
    }
    return true;
}

} // namespace subminimal
