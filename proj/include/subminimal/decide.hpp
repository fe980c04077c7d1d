#pragma once

// Decision procedures. For N the search space is the set of Σ-types (subsets
// of the subformula closure) ordered by inclusion; types are eliminated until
// the survivors carry a model satisfying the truth lemma. That set is exactly
// the set of types realised by a filtration of the canonical model, so the
// procedure is complete as well as sound. MPC reduces to N by reading ¬a as
// a → f for a fresh variable f. NeF and CoPC have no such bound: theoremhood
// is only reported when backed by a certificate.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "frames.hpp"
#include "search.hpp"
#include "syntax.hpp"

namespace subminimal {

enum class decision_status { theorem, refuted, no_countermodel_up_to_bound };

inline const char* status_name(decision_status s)
{
    switch (s) {
    case decision_status::theorem: return "theorem";
    case decision_status::refuted: return "refuted";
    case decision_status::no_countermodel_up_to_bound: return "no-countermodel-up-to-bound";
    }
    return "?";
}

struct decision {
    decision_status status;
    std::optional<countermodel> witness;
    // For theorems: what justifies the verdict.
    std::string certificate;
};

struct decide_options {
    std::size_t max_types = std::size_t{1} << 12;
    int search_bound = 3;   // countermodel search for NeF and CoPC
    search_limits limits;
};

namespace detail {

// Σ-types as bitmasks over the closure. Σ is limited to 64 members.
class type_space {
public:
    type_space(const formula& f, const decide_options& opt) : target_(f)
    {
        const auto closure = subformula_closure(f);
        sigma_.assign(closure.begin(), closure.end());
        if (sigma_.size() > 64)
            throw resource_exhausted("subformula closure has more than 64 members");
        std::stable_sort(sigma_.begin(), sigma_.end(),
                         [](const formula& a, const formula& b) { return a.size() < b.size(); });
        for (std::size_t i = 0; i < sigma_.size(); ++i)
            index_[sigma_[i]] = static_cast<int>(i);
        std::vector<int> primes;
        for (std::size_t i = 0; i < sigma_.size(); ++i) {
            const formula& g = sigma_[i];
            if (g.is(connective::var) || g.is(connective::imp) || g.is(connective::neg))
                primes.push_back(static_cast<int>(i));
            if (g.is(connective::imp))
                imps_.push_back(static_cast<int>(i));
            if (g.is(connective::neg))
                negs_.push_back(static_cast<int>(i));
        }
        std::vector<int> kl(sigma_.size(), -1), kr(sigma_.size(), -1);
        for (std::size_t i = 0; i < sigma_.size(); ++i)
            if (sigma_[i].is_binary()) {
                kl[i] = index_.at(sigma_[i].left());
                kr[i] = index_.at(sigma_[i].right());
            }
        for (int i : imps_) {
            left_.push_back(index_.at(sigma_[i].left()));
            right_.push_back(index_.at(sigma_[i].right()));
        }
        for (int a : negs_)
            operand_.push_back(index_.at(sigma_[a].operand()));
        if (primes.size() >= 63 || (std::uint64_t{1} << primes.size()) > opt.max_types)
            throw resource_exhausted("decision needs " + std::to_string(primes.size()) +
                                     " independent subformulas; type limit is " + std::to_string(opt.max_types));
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << primes.size()); ++a) {
            opt.limits.check();
            std::uint64_t t = 0;
            for (std::size_t j = 0; j < primes.size(); ++j)
                if ((a >> j) & 1U)
                    t |= bit(primes[j]);
            for (std::size_t i = 0; i < sigma_.size(); ++i) {
                const formula& g = sigma_[i];
                bool in = contains_type(t, static_cast<int>(i));
                switch (g.op()) {
                case connective::top: in = true; break;
                case connective::conj: in = contains_type(t, kl[i]) && contains_type(t, kr[i]); break;
                case connective::disj: in = contains_type(t, kl[i]) || contains_type(t, kr[i]); break;
                default: break;
                }
                if (in)
                    t |= bit(static_cast<int>(i));
            }
            bool ok = true;
            for (int i : imps_)
                if (contains_type(t, i) && contains_type(t, kl[i]) && !contains_type(t, kr[i]))
                    ok = false;
            if (ok)
                types_.push_back(t);
        }
        index_types();
    }

    // Removes types until every survivor has its implication witnesses and
    // its negations respect agreement of operands above it.
    void eliminate(const search_limits& limits)
    {
        std::vector<char> alive(types_.size(), 1);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < types_.size(); ++i) {
                if (!alive[i])
                    continue;
                limits.check();
                if (!good(i, alive)) {
                    alive[i] = 0;
                    changed = true;
                }
            }
        }
        std::vector<std::uint64_t> kept;
        for (std::size_t i = 0; i < types_.size(); ++i)
            if (alive[i])
                kept.push_back(types_[i]);
        types_ = std::move(kept);
        index_types();
    }

    const std::vector<std::uint64_t>& types() const { return types_; }
    bool has(std::uint64_t t, const formula& g) const { return contains_type(t, index_.at(g)); }

    // A small set of surviving types containing `root`, closed under choosing
    // one implication witness and one negation separator where needed.
    std::vector<std::uint64_t> small_model(std::uint64_t root) const
    {
        std::vector<std::uint64_t> chosen{root};
        for (std::size_t k = 0; k < chosen.size(); ++k) {
            const std::uint64_t s = chosen[k];
            auto present = [&](auto pred) {
                for (std::uint64_t u : chosen)
                    if (is_sub(s, u) && pred(u))
                        return true;
                return false;
            };
            auto add_first = [&](auto pred) {
                for (std::uint64_t u : types_)
                    if (is_sub(s, u) && pred(u)) {
                        chosen.push_back(u);
                        return;
                    }
            };
            for (int i : imps_) {
                if (contains_type(s, i))
                    continue;
                auto wit = [&](std::uint64_t u) { return has(u, sigma_[i].left()) && !has(u, sigma_[i].right()); };
                if (!present(wit))
                    add_first(wit);
            }
            for (int a : negs_)
                for (int b : negs_) {
                    if (!contains_type(s, a) || contains_type(s, b))
                        continue;
                    auto sep = [&](std::uint64_t u) {
                        return has(u, sigma_[a].operand()) != has(u, sigma_[b].operand());
                    };
                    if (!present(sep))
                        add_first(sep);
                }
        }
        return chosen;
    }

    // Model on the given types ordered by inclusion, root first.
    nmodel build_model(const std::vector<std::uint64_t>& ts, const std::optional<std::string>& falsum) const
    {
        const int n = static_cast<int>(ts.size());
        if (n > max_world_count)
            throw resource_exhausted("countermodel would need " + std::to_string(n) + " worlds");
        std::vector<world_set> up(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (is_sub(ts[i], ts[j]))
                    up[i] |= singleton(j);
        const poset p = poset::from_successors(up);
        auto truth = [&](const formula& g) {
            world_set out = 0;
            for (int i = 0; i < n; ++i)
                if (has(ts[i], g))
                    out |= singleton(i);
            return out;
        };
        valuation v;
        for (const formula& g : sigma_)
            if (g.is(connective::var))
                v[g.name()] = truth(g);
        if (falsum) {
            const world_set fv = v.count(*falsum) ? v.at(*falsum) : 0;
            v.erase(*falsum);
            return nmodel(nframe::from_function(p, [&](world_set x) { return heyting_implication(p, x, fv); }), v);
        }
        std::vector<std::pair<int, world_set>> negs;
        for (int a : negs_)
            negs.emplace_back(a, truth(sigma_[a].operand()));
        return nmodel(nframe::from_function(p, [&](world_set x) {
                          world_set out = 0;
                          for (int i = 0; i < n; ++i)
                              for (const auto& [a, va] : negs)
                                  if (contains_type(ts[i], a) && (x & p.up(i)) == (va & p.up(i))) {
                                      out |= singleton(i);
                                      break;
                                  }
                          return out;
                      }),
                      v);
    }

private:
    static std::uint64_t bit(int i) { return std::uint64_t{1} << i; }
    static bool contains_type(std::uint64_t t, int i) { return (t >> i) & 1U; }
    static bool is_sub(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

    bool good(std::size_t i, const std::vector<char>& alive) const
    {
        const std::uint64_t t = types_[i];
        std::uint64_t need = 0;
        for (std::size_t k = 0; k < imps_.size(); ++k)
            if (!contains_type(t, imps_[k]))
                need |= bit(static_cast<int>(k));
        std::uint64_t witnessed = 0;
        std::vector<std::uint64_t> patterns;   // operand memberships above t
        for (std::size_t j = 0; j < types_.size(); ++j) {
            if (!alive[j] || !is_sub(t, types_[j]))
                continue;
            witnessed |= witness_[j];
            if (std::find(patterns.begin(), patterns.end(), pattern_[j]) == patterns.end())
                patterns.push_back(pattern_[j]);
        }
        if ((witnessed & need) != need)
            return false;
        for (std::size_t a = 0; a < negs_.size(); ++a)
            for (std::size_t b = 0; b < negs_.size(); ++b) {
                if (!contains_type(t, negs_[a]) || contains_type(t, negs_[b]))
                    continue;
                bool separated = false;
                for (std::uint64_t pat : patterns)
                    if (((pat >> a) & 1U) != ((pat >> b) & 1U)) {
                        separated = true;
                        break;
                    }
                if (!separated)
                    return false;
            }
        return true;
    }

    // Per type: which implications it witnesses, and which negation operands it contains.
    void index_types()
    {
        witness_.assign(types_.size(), 0);
        pattern_.assign(types_.size(), 0);
        for (std::size_t j = 0; j < types_.size(); ++j) {
            const std::uint64_t u = types_[j];
            for (std::size_t k = 0; k < imps_.size(); ++k)
                if (contains_type(u, left_[k]) && !contains_type(u, right_[k]))
                    witness_[j] |= bit(static_cast<int>(k));
            for (std::size_t a = 0; a < negs_.size(); ++a)
                if (contains_type(u, operand_[a]))
                    pattern_[j] |= bit(static_cast<int>(a));
        }
    }

    formula target_;
    std::vector<formula> sigma_;
    std::map<formula, int> index_;
    std::vector<int> imps_;
    std::vector<int> negs_;
    std::vector<int> left_, right_, operand_;
    std::vector<std::uint64_t> types_;
    std::vector<std::uint64_t> witness_, pattern_;
};

inline std::string fresh_variable(const formula& f)
{
    const auto used = variables(f);
    std::string name = "falsum";
    for (int i = 0; used.contains(name); ++i)
        name = "falsum" + std::to_string(i);
    return name;
}

// ¬a becomes a → f.
inline formula negation_as_implication(const formula& g, const formula& f)
{
    switch (g.op()) {
    case connective::conj: return formula::conj(negation_as_implication(g.left(), f), negation_as_implication(g.right(), f));
    case connective::disj: return formula::disj(negation_as_implication(g.left(), f), negation_as_implication(g.right(), f));
    case connective::imp: return formula::imp(negation_as_implication(g.left(), f), negation_as_implication(g.right(), f));
    case connective::neg: return formula::imp(negation_as_implication(g.operand(), f), f);
    default: return g;
    }
}

// Countermodel in N for f, or none if f is a theorem of N. With `falsum`,
// the model's N is X → V(falsum), and falsum itself is dropped.
inline std::optional<countermodel> refute_by_types(const formula& f, const decide_options& opt,
                                                   const std::optional<std::string>& falsum = std::nullopt)
{
    type_space space(f, opt);
    space.eliminate(opt.limits);
    for (std::uint64_t t : space.types())
        if (!space.has(t, f)) {
            const nmodel m = space.build_model(space.small_model(t), falsum);
            return countermodel{m, 0};
        }
    return std::nullopt;
}

} // namespace detail

// Exact decision for N and MPC. A refutation carries a re-checked witness.
inline decision decide_exact(logic l, const formula& f, const decide_options& opt = {})
{
    if (l != logic::n && l != logic::mpc)
        throw std::invalid_argument("exact decision is available for N and MPC only");
    std::optional<countermodel> cm;
    if (l == logic::n) {
        cm = detail::refute_by_types(f, opt);
    } else {
        const std::string name = detail::fresh_variable(f);
        cm = detail::refute_by_types(detail::negation_as_implication(f, formula::var(name)), opt, name);
    }
    if (!cm)
        return {decision_status::theorem, std::nullopt, l == logic::n ? "N" : "MPC"};
    if (!verify_countermodel(l, f, *cm))
        throw std::logic_error("internal error: countermodel failed verification");
    return {decision_status::refuted, cm, ""};
}

// The decision procedure for every logic. For NeF and CoPC a theorem verdict
// needs a certificate: f is a theorem of N, or N proves A → f for a single
// instance A of an axiom of the logic whose variables are sent to members
// of the closure of f or to ⊤. Otherwise a bounded countermodel search runs.
inline decision decide(logic l, const formula& f, const decide_options& opt = {})
{
    if (l == logic::n || l == logic::mpc)
        return decide_exact(l, f, opt);

    if (!detail::refute_by_types(f, opt))
        return {decision_status::theorem, std::nullopt, "N"};

    std::vector<logic> axioms{logic::nef};
    if (l == logic::copc)
        axioms.push_back(logic::copc);
    std::vector<formula> fillers{formula::top()};
    for (const formula& g : subformula_closure(f))
        if (g != formula::top())
            fillers.push_back(g);
    for (logic ax : axioms)
        for (const formula& a : fillers)
            for (const formula& b : fillers) {
                opt.limits.check();
                const formula inst = substitute(axiom_scheme(ax), {{"p", a}, {"q", b}});
                try {
                    if (!detail::refute_by_types(formula::imp(inst, f), opt))
                        return {decision_status::theorem, std::nullopt, "N proves (" + to_string(inst) + ") -> goal"};
                } catch (const resource_exhausted&) {
                    // too large an instance; try the next one
                    opt.limits.check();
                }
            }

    if (auto cm = countermodel_search(l, f, opt.search_bound, opt.limits))
        return {decision_status::refuted, cm, ""};
    return {decision_status::no_countermodel_up_to_bound, std::nullopt, ""};
}

} // namespace subminimal
