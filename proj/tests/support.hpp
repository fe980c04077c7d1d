#pragma once

// Test-only generators and reference semantics. The reference evaluators
// work world by world from the textbook truth clauses and share no code with
// the library's bitset evaluators.

#include <random>
#include <string>
#include <vector>

#include "subminimal/frames.hpp"
#include "subminimal/syntax.hpp"

namespace test {

using namespace subminimal;

template <class F>
F random_basic_formula(std::mt19937& rng, int depth, const std::vector<std::string>& vars, bool modal)
{
    std::uniform_int_distribution<int> leaf(0, static_cast<int>(vars.size()));
    if (depth == 0 || std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
        const int k = leaf(rng);
        if (k == static_cast<int>(vars.size())) {
            if (modal && std::uniform_int_distribution<int>(0, 1)(rng) == 0)
                return F::bot();
            return F::top();
        }
        return F::var(vars[k]);
    }
    const int kind = std::uniform_int_distribution<int>(0, modal ? 5 : 3)(rng);
    switch (kind) {
    case 0: return F::conj(random_basic_formula<F>(rng, depth - 1, vars, modal), random_basic_formula<F>(rng, depth - 1, vars, modal));
    case 1: return F::disj(random_basic_formula<F>(rng, depth - 1, vars, modal), random_basic_formula<F>(rng, depth - 1, vars, modal));
    case 2: return F::imp(random_basic_formula<F>(rng, depth - 1, vars, modal), random_basic_formula<F>(rng, depth - 1, vars, modal));
    case 3:
        if (modal)
            return F::bbox(random_basic_formula<F>(rng, depth - 1, vars, modal));
        return F::neg(random_basic_formula<F>(rng, depth - 1, vars, modal));
    case 4: return F::box(random_basic_formula<F>(rng, depth - 1, vars, modal));
    default: return F::bbox(random_basic_formula<F>(rng, depth - 1, vars, modal));
    }
}

inline formula random_formula(std::mt19937& rng, int depth, const std::vector<std::string>& vars)
{
    return random_basic_formula<formula>(rng, depth, vars, false);
}

inline modal_formula random_modal_formula(std::mt19937& rng, int depth, const std::vector<std::string>& vars)
{
    return random_basic_formula<modal_formula>(rng, depth, vars, true);
}

// Random order: a random DAG on a random labelling, closed reflexively and
// transitively.
inline poset random_poset(std::mt19937& rng, int n)
{
    std::vector<int> label(n);
    for (int i = 0; i < n; ++i)
        label[i] = i;
    std::shuffle(label.begin(), label.end(), rng);
    std::bernoulli_distribution edge(0.4);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (edge(rng))
                pairs.emplace_back(label[i], label[j]);
    return poset::from_pairs(n, pairs);
}

inline world_set random_upset(std::mt19937& rng, const poset& p)
{
    const world_set raw = std::uniform_int_distribution<world_set>(0, p.all())(rng);
    // half the time use the largest upset inside raw, otherwise the closure
    if (std::bernoulli_distribution(0.5)(rng)) {
        world_set out = 0;
        for (int w = 0; w < p.size(); ++w)
            if (subset_of(p.up(w), raw))
                out |= singleton(w);
        return out;
    }
    return p.upward_closure(raw);
}

// Random local choices b(w, U), then the largest upward closed N below them:
// w in N(X) iff b(v, X & R(v)) for every v >= w.
inline nframe random_nframe(std::mt19937& rng, const poset& p)
{
    const auto ups = enumerate_upsets(p);
    std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.3, 0.95)(rng));
    std::vector<std::vector<char>> bit(p.size(), std::vector<char>(std::size_t{1} << p.size(), 0));
    for (int w = 0; w < p.size(); ++w)
        for (world_set u : ups)
            if (subset_of(u, p.up(w)))
                bit[w][u] = coin(rng);
    return nframe::from_function(p, [&](world_set x) {
        world_set out = 0;
        for (int w = 0; w < p.size(); ++w) {
            bool in = true;
            for (int v = 0; v < p.size() && in; ++v)
                if (p.leq(w, v))
                    in = bit[v][x & p.up(v)] != 0;
            if (in)
                out |= singleton(w);
        }
        return out;
    });
}

inline nmodel random_nmodel(std::mt19937& rng, int max_worlds, const std::vector<std::string>& vars)
{
    const int n = std::uniform_int_distribution<int>(1, max_worlds)(rng);
    const poset p = random_poset(rng, n);
    valuation v;
    for (const auto& name : vars)
        v[name] = random_upset(rng, p);
    return nmodel(random_nframe(rng, p), v);
}

// Pointwise satisfaction, straight from the truth clauses.
inline bool holds(const nmodel& m, int w, const formula& f)
{
    const poset& p = m.order();
    switch (f.op()) {
    case connective::var: return contains(m.value_of(f.name()), w);
    case connective::top: return true;
    case connective::conj: return holds(m, w, f.left()) && holds(m, w, f.right());
    case connective::disj: return holds(m, w, f.left()) || holds(m, w, f.right());
    case connective::imp:
        for (int v = 0; v < p.size(); ++v)
            if (p.leq(w, v) && holds(m, v, f.left()) && !holds(m, v, f.right()))
                return false;
        return true;
    case connective::neg: {
        world_set truth = 0;
        for (int v = 0; v < p.size(); ++v)
            if (holds(m, v, f.operand()))
                truth |= singleton(v);
        return contains(m.frame().n(truth), w);
    }
    default: break;
    }
    throw std::logic_error("holds: bad connective");
}

inline world_set truth_set(const nmodel& m, const formula& f)
{
    world_set out = 0;
    for (int w = 0; w < m.order().size(); ++w)
        if (holds(m, w, f))
            out |= singleton(w);
    return out;
}

// The separating frame: worlds w=0 < v=1, N(empty) = N(W) = {v}, N({v}) = W.
inline nframe two_point_frame()
{
    return nframe(poset::from_pairs(2, {{0, 1}}), ntable{{0b00, 0b10}, {0b10, 0b11}, {0b11, 0b10}});
}

} // namespace test
