#pragma once

// Bi-modal semantics: frames with a preorder and an N-function on all
// subsets, the lift of N-frames into them, the orderless frames for the
// ■-fragment, and the conditions Eₙ with their rule counterparts Rₙ.

#include <bit>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "frames.hpp"
#include "syntax.hpp"

namespace subminimal {

// Subset-indexed tables need 2^size entries.
inline constexpr int max_modal_worlds = 12;

inline void check_modal_size(int n)
{
    if (n < 1 || n > max_modal_worlds)
        throw std::invalid_argument("modal frames support 1.." + std::to_string(max_modal_worlds) + " worlds");
}

// succ[w] = R(w). n[X] for every subset X, indexed by bitmask. Unchecked;
// see ns4_check_frame.
struct ns4_frame {
    int size = 0;
    std::vector<world_set> succ;
    std::vector<world_set> n;

    world_set all() const { return full_set(size); }
};

struct ns4_violation {
    enum kind_t { not_preorder, not_upward_closed, not_local } kind;
    world_set x = 0;  // the subset involved (unused for not_preorder)
    int w = 0;
};

inline const char* violation_name(ns4_violation::kind_t k)
{
    switch (k) {
    case ns4_violation::not_preorder: return "not-preorder";
    case ns4_violation::not_upward_closed: return "not-upward-closed";
    case ns4_violation::not_local: return "not-local";
    }
    return "?";
}

inline bool is_preorder(int size, const std::vector<world_set>& succ)
{
    if (static_cast<int>(succ.size()) != size)
        return false;
    for (int w = 0; w < size; ++w) {
        if (!contains(succ[w], w) || !subset_of(succ[w], full_set(size)))
            return false;
        for (int v = 0; v < size; ++v)
            if (contains(succ[w], v) && !subset_of(succ[v], succ[w]))
                return false;
    }
    return true;
}

inline bool is_upward_closed(const std::vector<world_set>& succ, world_set x)
{
    for (std::size_t w = 0; w < succ.size(); ++w)
        if (contains(x, static_cast<int>(w)) && !subset_of(succ[w], x))
            return false;
    return true;
}

inline std::optional<ns4_violation> ns4_check_frame(const ns4_frame& f)
{
    check_modal_size(f.size);
    if (!is_preorder(f.size, f.succ))
        return ns4_violation{ns4_violation::not_preorder, 0, 0};
    if (f.n.size() != (std::size_t{1} << f.size))
        throw std::invalid_argument("ns4 frame: table must have 2^size entries");
    for (world_set x = 0; x <= f.all(); ++x) {
        if (!subset_of(f.n[x], f.all()) || !is_upward_closed(f.succ, f.n[x]))
            return ns4_violation{ns4_violation::not_upward_closed, x, 0};
        for (int w = 0; w < f.size; ++w)
            if (contains(f.n[x], w) != contains(f.n[x & f.succ[w]], w))
                return ns4_violation{ns4_violation::not_local, x, w};
    }
    return std::nullopt;
}

// Frames for the contraposition companion: a partial order, the NS4
// conditions, and N antitone on all subsets.
inline bool cos4_check_frame(const ns4_frame& f)
{
    if (ns4_check_frame(f))
        return false;
    for (int w = 0; w < f.size; ++w)
        for (int v = w + 1; v < f.size; ++v)
            if (contains(f.succ[w], v) && contains(f.succ[v], w))
                return false;
    for (world_set x = 0; x <= f.all(); ++x)
        for (int w = 0; w < f.size; ++w)
            if (!contains(x, w) && !subset_of(f.n[x | singleton(w)], f.n[x]))
                return false;
    return true;
}

using modal_valuation = std::map<std::string, world_set>;

struct ns4_model {
    ns4_frame frame;
    modal_valuation values;
};

// Unassigned variables are false everywhere.
inline world_set ns4_eval(const ns4_model& m, const modal_formula& f)
{
    const world_set all = m.frame.all();
    switch (f.op()) {
    case connective::var: {
        auto it = m.values.find(f.name());
        return it == m.values.end() ? 0 : it->second;
    }
    case connective::top: return all;
    case connective::bot: return 0;
    case connective::conj: return ns4_eval(m, f.left()) & ns4_eval(m, f.right());
    case connective::disj: return ns4_eval(m, f.left()) | ns4_eval(m, f.right());
    case connective::imp: return (~ns4_eval(m, f.left()) | ns4_eval(m, f.right())) & all;
    case connective::box: {
        const world_set inner = ns4_eval(m, f.operand());
        world_set out = 0;
        for (int w = 0; w < m.frame.size; ++w)
            if (subset_of(m.frame.succ[w], inner))
                out |= singleton(w);
        return out;
    }
    case connective::bbox: return m.frame.n[ns4_eval(m, f.operand())];
    case connective::neg: break;
    }
    throw std::logic_error("ns4_eval: negation is not part of the bi-modal language");
}

// Calls visit(valuation) for every assignment of subsets of {0..size-1} to
// vars. Return false from visit to stop; the result tells whether it ran to
// the end.
template <class Visitor>
bool for_each_subset_valuation(int size, const std::vector<std::string>& vars, Visitor&& visit)
{
    const world_set all = full_set(size);
    std::vector<world_set> digit(vars.size(), 0);
    while (true) {
        modal_valuation v;
        for (std::size_t i = 0; i < vars.size(); ++i)
            v[vars[i]] = digit[i];
        if (!visit(static_cast<const modal_valuation&>(v)))
            return false;
        std::size_t i = 0;
        while (i < digit.size() && digit[i] == all)
            digit[i++] = 0;
        if (i == digit.size())
            return true;
        ++digit[i];
    }
}

inline bool ns4_frame_validates(const ns4_frame& f, const modal_formula& phi)
{
    const auto names = variables(phi);
    ns4_model m{f, {}};
    return for_each_subset_valuation(f.size, {names.begin(), names.end()}, [&](const modal_valuation& v) {
        m.values = v;
        return ns4_eval(m, phi) == f.all();
    });
}

// N*(X) = {w : X ∩ R(w) = Y ∩ R(w) and w ∈ N(Y) for some upset Y}.
inline ns4_frame lift_nstar(const nframe& fr)
{
    const poset& p = fr.order();
    check_modal_size(p.size());
    ns4_frame out;
    out.size = p.size();
    for (int w = 0; w < p.size(); ++w)
        out.succ.push_back(p.up(w));
    out.n.assign(std::size_t{1} << p.size(), 0);
    for (world_set x = 0; x <= p.all(); ++x)
        for (int w = 0; w < p.size(); ++w)
            for (world_set y : fr.upsets())
                if ((x & p.up(w)) == (y & p.up(w)) && contains(fr.n(y), w)) {
                    out.n[x] |= singleton(w);
                    break;
                }
    return out;
}

inline ns4_model lift_model(const nmodel& m)
{
    return {lift_nstar(m.frame()), modal_valuation(m.values().begin(), m.values().end())};
}

struct translation_counterexample {
    int world;
    world_set source_truth;      // truth set in the N-model
    world_set translated_truth;  // truth set of the translation in the lift
};

// Compares f in m with its translation in an already lifted model.
inline std::optional<translation_counterexample> translation_preservation(const nmodel& m, const ns4_model& lifted,
                                                                          const formula& f)
{
    const world_set a = eval(m, f);
    const world_set b = ns4_eval(lifted, godel_translate(f));
    if (a == b)
        return std::nullopt;
    return translation_counterexample{std::countr_zero(a ^ b), a, b};
}

inline std::optional<translation_counterexample> translation_preservation(const nmodel& m, const formula& f)
{
    return translation_preservation(m, lift_model(m), f);
}

// Orderless frames for the ■-fragment: n[X] for every subset X.
struct modal_nframe {
    int size = 0;
    std::vector<world_set> n;

    world_set all() const { return full_set(size); }
};

// Every intersection of k images of N (k = 0 gives W).
inline std::set<world_set> image_meets(const modal_nframe& f, int k)
{
    std::set<world_set> out{f.all()};
    const std::set<world_set> images(f.n.begin(), f.n.end());
    for (int i = 0; i < k; ++i) {
        std::set<world_set> next;
        for (world_set m : out)
            for (world_set z : images)
                next.insert(m & z);
        out = std::move(next);
    }
    return out;
}

// Eₙ: N(X) ∩ M = N(X ∩ M) ∩ M where M = N(Z₁) ∩ ... ∩ N(Zₙ).
inline bool en_check(const modal_nframe& f, int n)
{
    if (n < 0)
        throw std::invalid_argument("en_check: n must be non-negative");
    check_modal_size(f.size);
    for (world_set m : image_meets(f, n))
        for (world_set x = 0; x <= f.all(); ++x)
            if ((f.n[x] & m) != (f.n[x & m] & m))
                return false;
    return true;
}

// Truth sets in an orderless frame. □ has no meaning here.
inline world_set nmodal_eval(const modal_nframe& f, const modal_valuation& v, const modal_formula& phi)
{
    switch (phi.op()) {
    case connective::var: {
        auto it = v.find(phi.name());
        return it == v.end() ? 0 : it->second;
    }
    case connective::top: return f.all();
    case connective::bot: return 0;
    case connective::conj: return nmodal_eval(f, v, phi.left()) & nmodal_eval(f, v, phi.right());
    case connective::disj: return nmodal_eval(f, v, phi.left()) | nmodal_eval(f, v, phi.right());
    case connective::imp: return (~nmodal_eval(f, v, phi.left()) | nmodal_eval(f, v, phi.right())) & f.all();
    case connective::bbox: return f.n[nmodal_eval(f, v, phi.operand())];
    default: break;
    }
    throw std::invalid_argument("nmodal_eval: only the {&, |, ->, [n]} fragment is interpreted");
}

// Premise and conclusion of Rₙ over p1..pn, q, r.
inline std::pair<modal_formula, modal_formula> rn_rule(int n)
{
    using M = modal_formula;
    M guard = M::top();
    for (int i = 1; i <= n; ++i) {
        const M b = M::bbox(M::var("p" + std::to_string(i)));
        guard = i == 1 ? b : M::conj(guard, b);
    }
    const M q = M::var("q"), r = M::var("r");
    return {M::imp(guard, M::iff(q, r)), M::imp(guard, M::iff(M::bbox(q), M::bbox(r)))};
}

// The frame validates Rₙ: under every valuation, a globally true premise
// gives a globally true conclusion.
inline bool rn_validity(const modal_nframe& f, int n)
{
    if (n < 0)
        throw std::invalid_argument("rn_validity: n must be non-negative");
    check_modal_size(f.size);
    const auto [premise, conclusion] = rn_rule(n);
    std::vector<std::string> vars{"q", "r"};
    for (int i = 1; i <= n; ++i)
        vars.push_back("p" + std::to_string(i));
    return for_each_subset_valuation(f.size, vars, [&](const modal_valuation& v) {
        return nmodal_eval(f, v, premise) != f.all() || nmodal_eval(f, v, conclusion) == f.all();
    });
}

} // namespace subminimal
