#pragma once

// Generators for bi-modal frames and the derivation fixtures, shared by the
// unit tests and the acceptance run.

#include <random>
#include <vector>

#include "subminimal/modal.hpp"
#include "subminimal/proof.hpp"

namespace test {

using namespace subminimal;

inline std::vector<world_set> preorder_closure(int size, std::vector<world_set> succ)
{
    for (int w = 0; w < size; ++w)
        succ[w] |= singleton(w);
    for (bool changed = true; changed;) {
        changed = false;
        for (int w = 0; w < size; ++w) {
            world_set next = succ[w];
            for (int v = 0; v < size; ++v)
                if (contains(succ[w], v))
                    next |= succ[v];
            changed = changed || next != succ[w];
            succ[w] = next;
        }
    }
    return succ;
}

// All reflexive transitive relations on size worlds.
inline std::vector<std::vector<world_set>> all_preorders(int size)
{
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (i != j)
                slots.emplace_back(i, j);
    std::vector<std::vector<world_set>> out;
    for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << slots.size()); ++pattern) {
        std::vector<world_set> succ(size, 0);
        for (std::size_t k = 0; k < slots.size(); ++k)
            if ((pattern >> k) & 1U)
                succ[slots[k].first] |= singleton(slots[k].second);
        for (int w = 0; w < size; ++w)
            succ[w] |= singleton(w);
        if (preorder_closure(size, succ) == succ)
            out.push_back(succ);
    }
    return out;
}

// Every table on every preorder, filtered by the frame check. size <= 2.
inline std::vector<ns4_frame> all_ns4_frames(int size)
{
    std::vector<ns4_frame> out;
    const std::size_t subsets = std::size_t{1} << size;
    for (const auto& succ : all_preorders(size)) {
        std::vector<world_set> ups;
        for (world_set x = 0; x < subsets; ++x)
            if (is_upward_closed(succ, x))
                ups.push_back(x);
        std::vector<std::size_t> digit(subsets, 0);
        while (true) {
            ns4_frame f{size, succ, std::vector<world_set>(subsets)};
            for (std::size_t x = 0; x < subsets; ++x)
                f.n[x] = ups[digit[x]];
            if (!ns4_check_frame(f))
                out.push_back(f);
            std::size_t i = 0;
            while (i < subsets && ++digit[i] == ups.size())
                digit[i++] = 0;
            if (i == subsets)
                break;
        }
    }
    return out;
}

// A valid frame built from random local neighbourhoods: each world accepts
// some subsets of R(w), acceptance is pushed up the preorder, and
// N(X) = {w : X ∩ R(w) accepted at w}.
inline ns4_frame random_ns4_frame(std::mt19937& rng, int size, double density = 0.4)
{
    std::vector<world_set> succ(size, 0);
    std::bernoulli_distribution edge(0.3), accept(density);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (i != j && edge(rng))
                succ[i] |= singleton(j);
    succ = preorder_closure(size, succ);
    const std::size_t subsets = std::size_t{1} << size;
    // accepted[w][Y] for Y ⊆ R(w)
    std::vector<std::vector<bool>> accepted(size, std::vector<bool>(subsets, false));
    for (int w = 0; w < size; ++w)
        for (world_set y = 0; y < subsets; ++y)
            if (subset_of(y, succ[w]))
                accepted[w][y] = accept(rng);
    for (bool changed = true; changed;) {
        changed = false;
        for (int w = 0; w < size; ++w)
            for (int v = 0; v < size; ++v)
                if (v != w && contains(succ[w], v))
                    for (world_set y = 0; y < subsets; ++y)
                        if (accepted[w][y] && !accepted[v][y & succ[v]]) {
                            accepted[v][y & succ[v]] = true;
                            changed = true;
                        }
    }
    ns4_frame f{size, succ, std::vector<world_set>(subsets, 0)};
    for (world_set x = 0; x < subsets; ++x)
        for (int w = 0; w < size; ++w)
            if (accepted[w][x & succ[w]])
                f.n[x] |= singleton(w);
    return f;
}

// Pointwise truth from the clauses; unassigned variables are false.
inline bool ns4_holds(const ns4_frame& f, const modal_valuation& v, int w, const modal_formula& phi)
{
    auto truth = [&](const modal_formula& g) {
        world_set out = 0;
        for (int u = 0; u < f.size; ++u)
            if (ns4_holds(f, v, u, g))
                out |= singleton(u);
        return out;
    };
    switch (phi.op()) {
    case connective::var: {
        auto it = v.find(phi.name());
        return it != v.end() && contains(it->second, w);
    }
    case connective::top: return true;
    case connective::bot: return false;
    case connective::conj: return ns4_holds(f, v, w, phi.left()) && ns4_holds(f, v, w, phi.right());
    case connective::disj: return ns4_holds(f, v, w, phi.left()) || ns4_holds(f, v, w, phi.right());
    case connective::imp: return !ns4_holds(f, v, w, phi.left()) || ns4_holds(f, v, w, phi.right());
    case connective::box:
        for (int u = 0; u < f.size; ++u)
            if (contains(f.succ[w], u) && !ns4_holds(f, v, u, phi.operand()))
                return false;
        return true;
    case connective::bbox: return contains(f.n[truth(phi.operand())], w);
    default: break;
    }
    throw std::logic_error("ns4_holds: bad connective");
}

inline modal_nframe random_modal_nframe(std::mt19937& rng, int size)
{
    modal_nframe f{size, std::vector<world_set>(std::size_t{1} << size)};
    std::uniform_int_distribution<world_set> any(0, full_set(size));
    for (auto& image : f.n)
        image = any(rng);
    return f;
}

// All tables on size worlds. size <= 2.
inline std::vector<modal_nframe> all_modal_nframes(int size)
{
    const std::size_t subsets = std::size_t{1} << size;
    std::vector<modal_nframe> out;
    std::vector<world_set> digit(subsets, 0);
    while (true) {
        out.push_back({size, digit});
        std::size_t i = 0;
        while (i < subsets && digit[i] == full_set(size))
            digit[i++] = 0;
        if (i == subsets)
            return out;
        ++digit[i];
    }
}

inline proof_line line(const char* f, const char* rule, std::vector<int> refs = {})
{
    return {parse_modal_formula(f), rule, std::move(refs)};
}

struct proof_fixture {
    const char* name;
    hilbert_proof proof;
    modal_formula goal;
};

// The translated N axiom in NS4.
inline proof_fixture ns4_n_axiom()
{
    hilbert_proof p;
    p.system = proof_system::ns4;
    p.lines = {
        line("[]([]p <-> []q) -> ([n][]p <-> [n][]q)", "cong"),
        line("[][]([]p <-> []q) -> []([n][]p <-> [n][]q)", "nec", {1}),
        line("[]([]p <-> []q) -> [][]([]p <-> []q)", "4"),
        line("[]([]p <-> []q) -> []([n][]p <-> [n][]q)", "taut", {3, 2}),
        line("[]([]([]p <-> []q) -> []([n][]p <-> [n][]q))", "nec", {4}),
    };
    return {"NS4 derivation of the translated N axiom", p,
            godel_translate(parse_formula("(p <-> q) -> (~p <-> ~q)"))};
}

// R1 derived in NS4 from its premise.
inline proof_fixture ns4_r1()
{
    hilbert_proof p;
    p.system = proof_system::ns4;
    p.premises = {parse_modal_formula("[n]p1 -> (q <-> r)")};
    p.lines = {
        line("[n]p1 -> (q <-> r)", "premise"),
        line("[n]p1 -> [][n]p1", "pers"),
        line("[n]p1 -> [][n]p1", "taut", {2}),
        line("[n]p1 -> [][n]p1", "box-conj", {3}),
        line("[][n]p1 -> [](q <-> r)", "nec", {1}),
        line("[](q <-> r) -> ([n]q <-> [n]r)", "cong"),
        line("[][n]p1 -> ([n]q <-> [n]r)", "taut", {5, 6}),
        line("[n]p1 -> ([n]q <-> [n]r)", "taut", {4, 7}),
    };
    return {"NS4 derivation of R1", p, rn_rule(1).second};
}

// The translated contraposition axiom in CoS4.
inline proof_fixture cos4_contraposition()
{
    hilbert_proof p;
    p.system = proof_system::cos4;
    p.lines = {
        line("[]([]p -> []q) -> ([n][]q -> [n][]p)", "contra"),
        line("[][]([]p -> []q) -> []([n][]q -> [n][]p)", "nec", {1}),
        line("[]([]p -> []q) -> [][]([]p -> []q)", "4"),
        line("[]([]p -> []q) -> []([n][]q -> [n][]p)", "taut", {3, 2}),
        line("[]([]([]p -> []q) -> []([n][]q -> [n][]p))", "nec", {4}),
    };
    return {"CoS4 derivation of the translated contraposition axiom", p,
            godel_translate(parse_formula("(p -> q) -> (~q -> ~p)"))};
}

inline std::vector<proof_fixture> proof_fixtures() { return {ns4_n_axiom(), ns4_r1(), cos4_contraposition()}; }

namespace detail {

// Swaps the first modal operator met in pre-order.
inline modal_formula swap_first_modality(const modal_formula& f, bool& done)
{
    using M = modal_formula;
    if (done)
        return f;
    if (f.is(connective::box) || f.is(connective::bbox)) {
        done = true;
        return f.is(connective::box) ? M::bbox(f.operand()) : M::box(f.operand());
    }
    if (f.is_binary()) {
        M l = swap_first_modality(f.left(), done);
        M r = swap_first_modality(f.right(), done);
        switch (f.op()) {
        case connective::conj: return M::conj(l, r);
        case connective::disj: return M::disj(l, r);
        default: return M::imp(l, r);
        }
    }
    return f;
}

} // namespace detail

// Single-line edits: another rule, first modality swapped, p renamed,
// a box added around the line, first reference redirected.
inline std::vector<hilbert_proof> single_line_mutations(const hilbert_proof& p)
{
    std::vector<hilbert_proof> out;
    for (std::size_t k = 0; k < p.lines.size(); ++k) {
        const proof_line& l = p.lines[k];
        auto with = [&](proof_line changed) {
            hilbert_proof q = p;
            q.lines[k] = std::move(changed);
            out.push_back(std::move(q));
        };
        proof_line r = l;
        r.rule = l.rule == "taut" ? "mp" : l.rule == "T" ? "4" : "T";
        with(r);

        bool done = false;
        proof_line s = l;
        s.formula = detail::swap_first_modality(l.formula, done);
        if (done)
            with(s);

        proof_line v = l;
        v.formula = substitute(l.formula, substitution<bimodal_language>{{"p", modal_formula::var("s")},
                                                                          {"p1", modal_formula::var("s")}});
        if (v.formula != l.formula)
            with(v);

        proof_line b = l;
        b.formula = modal_formula::box(l.formula);
        with(b);

        if (!l.refs.empty()) {
            proof_line f = l;
            f.refs[0] = l.refs[0] == 1 ? 2 : 1;
            with(f);
        }
    }
    return out;
}

} // namespace test
