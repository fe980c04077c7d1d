#pragma once

// Line-by-line checker for Hilbert derivations in the bi-modal systems.
// Lines are numbered from 1 and may only cite earlier lines.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace subminimal {

enum class proof_system { ns4, cos4 };

inline const char* system_name(proof_system s) { return s == proof_system::ns4 ? "NS4" : "CoS4"; }

inline std::optional<proof_system> parse_system(std::string_view s)
{
    if (s == "NS4" || s == "ns4")
        return proof_system::ns4;
    if (s == "CoS4" || s == "cos4")
        return proof_system::cos4;
    return std::nullopt;
}

// Rules:
//   taut        classical tautology once box subformulas are read as atoms;
//               with refs, the cited lines tautologically imply the line
//   K T 4       S4 axioms
//   cong        [](p <-> q) -> ([n]p <-> [n]q)            (NS4 only)
//   pers        [n]p -> [][n]p
//   contra      [](p -> q) -> ([n]q -> [n]p)              (CoS4 only)
//   mp i j      line j is (line i) -> this line
//   nec i       this line is [](line i); or line i is A -> B and this line
//               is []A -> []B
//   box-conj i  equal to line i once [](a & b) and []a & []b are identified
//   premise     one of the stated premises
struct proof_line {
    modal_formula formula;
    std::string rule;
    std::vector<int> refs;
};

struct hilbert_proof {
    proof_system system = proof_system::ns4;
    std::vector<proof_line> lines;
    std::vector<modal_formula> premises;
};

struct proof_error {
    int line;  // 1-based; 0 for a problem with the proof as a whole
    std::string reason;
};

inline const std::vector<std::string>& rule_names()
{
    static const std::vector<std::string> names{"taut", "K",  "T",   "4",        "cong",
                                                "pers", "contra", "mp", "nec", "box-conj", "premise"};
    return names;
}

namespace detail {

inline const std::map<std::string, modal_formula>& axiom_schemes()
{
    static const std::map<std::string, modal_formula> schemes{
        {"K", parse_modal_formula("[](p -> q) -> ([]p -> []q)")},
        {"T", parse_modal_formula("[]p -> p")},
        {"4", parse_modal_formula("[]p -> [][]p")},
        {"cong", parse_modal_formula("[](p <-> q) -> ([n]p <-> [n]q)")},
        {"pers", parse_modal_formula("[n]p -> [][n]p")},
        {"contra", parse_modal_formula("[](p -> q) -> ([n]q -> [n]p)")},
    };
    return schemes;
}

inline bool axiom_allowed(proof_system s, const std::string& rule)
{
    if (rule == "cong")
        return s == proof_system::ns4;
    if (rule == "contra")
        return s == proof_system::cos4;
    return rule == "K" || rule == "T" || rule == "4" || rule == "pers";
}

// Binds schema variables to subformulas of f consistently.
inline bool match(const modal_formula& schema, const modal_formula& f, std::map<std::string, modal_formula>& bind)
{
    if (schema.is(connective::var)) {
        auto [it, fresh] = bind.try_emplace(schema.name(), f);
        return fresh || it->second == f;
    }
    if (schema.op() != f.op())
        return false;
    if (schema.is_binary())
        return match(schema.left(), f.left(), bind) && match(schema.right(), f.right(), bind);
    if (schema.is_unary())
        return match(schema.operand(), f.operand(), bind);
    return true;
}

inline void collect_atoms(const modal_formula& f, std::set<modal_formula>& atoms)
{
    if (f.is(connective::var) || f.is(connective::box) || f.is(connective::bbox)) {
        atoms.insert(f);
        return;
    }
    if (f.is_binary()) {
        collect_atoms(f.left(), atoms);
        collect_atoms(f.right(), atoms);
    }
}

inline bool classical_value(const modal_formula& f, const std::map<modal_formula, bool>& atoms)
{
    switch (f.op()) {
    case connective::top: return true;
    case connective::bot: return false;
    case connective::conj: return classical_value(f.left(), atoms) && classical_value(f.right(), atoms);
    case connective::disj: return classical_value(f.left(), atoms) || classical_value(f.right(), atoms);
    case connective::imp: return !classical_value(f.left(), atoms) || classical_value(f.right(), atoms);
    default: return atoms.at(f);
    }
}

// Modal subformulas are split over conjunctions first, so that the
// identification of []a & []b with [](a & b) is built in.
inline bool is_tautology(const modal_formula& raw)
{
    const modal_formula f = split_box_conjunctions(raw);
    std::set<modal_formula> atom_set;
    collect_atoms(f, atom_set);
    const std::vector<modal_formula> atoms(atom_set.begin(), atom_set.end());
    if (atoms.size() > 20)
        throw std::invalid_argument("taut: too many atoms to truth-table");
    std::map<modal_formula, bool> value;
    for (std::uint32_t row = 0; row < (std::uint32_t{1} << atoms.size()); ++row) {
        for (std::size_t i = 0; i < atoms.size(); ++i)
            value[atoms[i]] = (row >> i) & 1U;
        if (!classical_value(f, value))
            return false;
    }
    return true;
}

} // namespace detail

inline std::optional<proof_error> check_proof(const hilbert_proof& p, const std::optional<modal_formula>& goal = {})
{
    using M = modal_formula;
    for (std::size_t k = 0; k < p.lines.size(); ++k) {
        const int number = static_cast<int>(k) + 1;
        const proof_line& line = p.lines[k];
        auto fail = [&](std::string why) { return proof_error{number, line.rule + ": " + std::move(why)}; };
        for (int r : line.refs)
            if (r < 1 || r >= number)
                return fail("reference " + std::to_string(r) + " is not an earlier line");
        auto ref = [&](std::size_t i) -> const M& { return p.lines[line.refs[i] - 1].formula; };
        auto want_refs = [&](std::size_t n) { return line.refs.size() == n; };

        if (line.rule == "taut") {
            M claim = line.formula;
            for (auto it = line.refs.rbegin(); it != line.refs.rend(); ++it)
                claim = M::imp(p.lines[*it - 1].formula, claim);
            if (!detail::is_tautology(claim))
                return fail(line.refs.empty() ? "not a tautology" : "does not follow tautologically");
        } else if (detail::axiom_schemes().contains(line.rule)) {
            if (!want_refs(0))
                return fail("axioms take no references");
            if (!detail::axiom_allowed(p.system, line.rule))
                return fail(std::string("not an axiom of ") + system_name(p.system));
            std::map<std::string, M> bind;
            if (!detail::match(detail::axiom_schemes().at(line.rule), line.formula, bind))
                return fail("not an instance of the scheme");
        } else if (line.rule == "mp") {
            if (!want_refs(2))
                return fail("needs two references");
            if (ref(1) != M::imp(ref(0), line.formula))
                return fail("second reference is not (first) -> (this line)");
        } else if (line.rule == "nec") {
            if (!want_refs(1))
                return fail("needs one reference");
            const M& src = ref(0);
            const bool plain = line.formula == M::box(src);
            const bool monotone = src.is(connective::imp) &&
                                  line.formula == M::imp(M::box(src.left()), M::box(src.right()));
            if (!plain && !monotone)
                return fail("neither [](A) nor []A -> []B from A -> B");
        } else if (line.rule == "box-conj") {
            if (!want_refs(1))
                return fail("needs one reference");
            if (!equal_up_to_box_conjunction(ref(0), line.formula))
                return fail("differs beyond the box/conjunction identification");
        } else if (line.rule == "premise") {
            if (!want_refs(0))
                return fail("premises take no references");
            if (std::find(p.premises.begin(), p.premises.end(), line.formula) == p.premises.end())
                return fail("not a stated premise");
        } else {
            return fail("unknown rule");
        }
    }
    if (goal) {
        if (p.lines.empty())
            return proof_error{0, "empty proof"};
        if (!equal_up_to_box_conjunction(p.lines.back().formula, *goal))
            return proof_error{static_cast<int>(p.lines.size()), "last line is not the goal"};
    }
    return std::nullopt;
}

} // namespace subminimal
