#pragma once

// Formula syntax for the propositional language of subminimal negation
// (p, T, &, |, ->, ~) and the bi-modal language (p, F, T, &, |, ->, [], [n]).

#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subminimal {

enum class connective : std::uint8_t { var, top, bot, conj, disj, imp, neg, box, bbox };

struct propositional_language {
    static constexpr const char* name = "prop";
    static constexpr bool allows(connective c)
    {
        return c != connective::bot && c != connective::box && c != connective::bbox;
    }
};

struct bimodal_language {
    static constexpr const char* name = "modal";
    static constexpr bool allows(connective c) { return c != connective::neg; }
};

template <class Language>
class basic_formula;

template <class Language>
struct formula_node {
    connective op;
    std::string name;
    std::shared_ptr<const formula_node> left;
    std::shared_ptr<const formula_node> right;
    std::size_t hash;
    std::size_t size;
    int depth;
};

// Immutable, structurally compared formula tree. Copies share nodes.
template <class Language>
class basic_formula {
public:
    using node_type = formula_node<Language>;
    using language = Language;

    static basic_formula var(std::string name)
    {
        return make(connective::var, std::move(name), nullptr, nullptr);
    }
    static basic_formula top() { return make(connective::top, {}, nullptr, nullptr); }
    static basic_formula bot() { return make(connective::bot, {}, nullptr, nullptr); }
    static basic_formula conj(const basic_formula& l, const basic_formula& r)
    {
        return make(connective::conj, {}, l.node_, r.node_);
    }
    static basic_formula disj(const basic_formula& l, const basic_formula& r)
    {
        return make(connective::disj, {}, l.node_, r.node_);
    }
    static basic_formula imp(const basic_formula& l, const basic_formula& r)
    {
        return make(connective::imp, {}, l.node_, r.node_);
    }
    static basic_formula neg(const basic_formula& f)
    {
        if constexpr (Language::allows(connective::neg))
            return make(connective::neg, {}, f.node_, nullptr);
        else
            return imp(f, bot());
    }
    static basic_formula box(const basic_formula& f) { return make(connective::box, {}, f.node_, nullptr); }
    static basic_formula bbox(const basic_formula& f) { return make(connective::bbox, {}, f.node_, nullptr); }

    // a <-> b is sugar for (a -> b) & (b -> a).
    static basic_formula iff(const basic_formula& l, const basic_formula& r)
    {
        return conj(imp(l, r), imp(r, l));
    }

    basic_formula() : basic_formula(top()) {}

    connective op() const { return node_->op; }
    const std::string& name() const { return node_->name; }
    bool is(connective c) const { return node_->op == c; }
    bool is_binary() const { return node_->right != nullptr; }
    bool is_unary() const { return node_->left != nullptr && node_->right == nullptr; }

    // Operand of a unary node, or left operand of a binary node.
    basic_formula left() const { return basic_formula{node_->left}; }
    basic_formula right() const { return basic_formula{node_->right}; }
    basic_formula operand() const { return left(); }

    std::size_t hash() const { return node_->hash; }
    std::size_t size() const { return node_->size; }
    int depth() const { return node_->depth; }

    friend bool operator==(const basic_formula& a, const basic_formula& b)
    {
        return equal_nodes(a.node_.get(), b.node_.get());
    }

    friend std::strong_ordering operator<=>(const basic_formula& a, const basic_formula& b)
    {
        return compare_nodes(a.node_.get(), b.node_.get());
    }

private:
    explicit basic_formula(std::shared_ptr<const node_type> n) : node_(std::move(n)) {}

    static basic_formula make(connective op, std::string name, std::shared_ptr<const node_type> l,
                              std::shared_ptr<const node_type> r)
    {
        if (!Language::allows(op))
            throw std::invalid_argument(std::string("connective not in language ") + Language::name);
        std::size_t h = std::hash<int>{}(static_cast<int>(op)) * 0x9e3779b97f4a7c15ULL;
        h ^= std::hash<std::string>{}(name) + 0x9e3779b9 + (h << 6) + (h >> 2);
        std::size_t size = 1;
        int depth = 0;
        for (const auto* child : {l.get(), r.get()}) {
            if (child == nullptr)
                continue;
            h ^= child->hash + 0x9e3779b9 + (h << 6) + (h >> 2);
            size += child->size;
            depth = std::max(depth, child->depth + 1);
        }
        return basic_formula{std::make_shared<const node_type>(
            node_type{op, std::move(name), std::move(l), std::move(r), h, size, depth})};
    }

    static bool equal_nodes(const node_type* a, const node_type* b)
    {
        if (a == b)
            return true;
        if (a == nullptr || b == nullptr)
            return false;
        if (a->hash != b->hash || a->op != b->op || a->size != b->size || a->name != b->name)
            return false;
        return equal_nodes(a->left.get(), b->left.get()) && equal_nodes(a->right.get(), b->right.get());
    }

    static std::strong_ordering compare_nodes(const node_type* a, const node_type* b)
    {
        if (a == b)
            return std::strong_ordering::equal;
        if (a == nullptr)
            return std::strong_ordering::less;
        if (b == nullptr)
            return std::strong_ordering::greater;
        if (auto c = a->op <=> b->op; c != 0)
            return c;
        if (auto c = a->name <=> b->name; c != 0)
            return c;
        if (auto c = compare_nodes(a->left.get(), b->left.get()); c != 0)
            return c;
        return compare_nodes(a->right.get(), b->right.get());
    }

    std::shared_ptr<const node_type> node_;
};

using formula = basic_formula<propositional_language>;
using modal_formula = basic_formula<bimodal_language>;

template <class L>
struct formula_hash {
    std::size_t operator()(const basic_formula<L>& f) const { return f.hash(); }
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(connective c)
{
    switch (c) {
    case connective::conj: return 4;
    case connective::disj: return 3;
    case connective::imp: return 2;
    default: return 5;
    }
}

template <class L>
void print(const basic_formula<L>& f, int required, std::string& out)
{
    const int own = precedence(f.op());
    const bool parens = own < required;
    if (parens)
        out += '(';
    switch (f.op()) {
    case connective::var: out += f.name(); break;
    case connective::top: out += 'T'; break;
    case connective::bot: out += 'F'; break;
    case connective::neg: out += '~'; print(f.operand(), 5, out); break;
    case connective::box: out += "[]"; print(f.operand(), 5, out); break;
    case connective::bbox: out += "[n]"; print(f.operand(), 5, out); break;
    case connective::conj:
        print(f.left(), 4, out);
        out += " & ";
        print(f.right(), 5, out);
        break;
    case connective::disj:
        print(f.left(), 3, out);
        out += " | ";
        print(f.right(), 4, out);
        break;
    case connective::imp:
        print(f.left(), 3, out);
        out += " -> ";
        print(f.right(), 2, out);
        break;
    }
    if (parens)
        out += ')';
}

} // namespace detail

template <class L>
std::string to_string(const basic_formula<L>& f)
{
    std::string out;
    detail::print(f, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t position, const std::string& message)
        : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
          position_(position)
    {
    }
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

namespace detail {

template <class L>
class parser {
public:
    using F = basic_formula<L>;

    explicit parser(std::string_view text) : text_(text) {}

    F parse_all()
    {
        F f = parse_iff();
        skip_space();
        if (pos_ != text_.size())
            throw parse_error(pos_, "unexpected trailing input");
        return f;
    }

private:
    static constexpr bool modal = L::allows(connective::box);

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(std::string_view token)
    {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    F parse_iff()
    {
        F lhs = parse_imp();
        if (accept("<->"))
            return F::iff(lhs, parse_iff());
        return lhs;
    }

    F parse_imp()
    {
        F lhs = parse_disj();
        if (accept("->"))
            return F::imp(lhs, parse_imp());
        return lhs;
    }

    F parse_disj()
    {
        F lhs = parse_conj();
        while (accept("|"))
            lhs = F::disj(lhs, parse_conj());
        return lhs;
    }

    F parse_conj()
    {
        F lhs = parse_unary();
        while (accept("&"))
            lhs = F::conj(lhs, parse_unary());
        return lhs;
    }

    F parse_unary()
    {
        skip_space();
        const std::size_t start = pos_;
        if (accept("~"))
            return F::neg(parse_unary());
        if (accept("[]")) {
            if constexpr (modal)
                return F::box(parse_unary());
            else
                throw parse_error(start, "'[]' is not part of the propositional language");
        }
        if (accept("[n]")) {
            if constexpr (modal)
                return F::bbox(parse_unary());
            else
                throw parse_error(start, "'[n]' is not part of the propositional language");
        }
        if (accept("(")) {
            F inner = parse_iff();
            if (!accept(")"))
                throw parse_error(pos_, "expected ')'");
            return inner;
        }
        return parse_atom();
    }

    F parse_atom()
    {
        skip_space();
        if (pos_ >= text_.size())
            throw parse_error(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == 'T') {
            ++pos_;
            return F::top();
        }
        if (c == 'F') {
            if constexpr (modal) {
                ++pos_;
                return F::bot();
            } else {
                throw parse_error(pos_, "falsum is not part of the propositional language");
            }
        }
        if (c >= 'a' && c <= 'z') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return F::var(std::string(text_.substr(start, pos_ - start)));
        }
        throw parse_error(pos_, std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline formula parse_formula(std::string_view text)
{
    return detail::parser<propositional_language>(text).parse_all();
}

inline modal_formula parse_modal_formula(std::string_view text)
{
    return detail::parser<bimodal_language>(text).parse_all();
}

// ---------------------------------------------------------------------------
// Structural operations

template <class L>
std::set<std::string> variables(const basic_formula<L>& f)
{
    std::set<std::string> out;
    std::function<void(const basic_formula<L>&)> walk = [&](const basic_formula<L>& g) {
        if (g.is(connective::var))
            out.insert(g.name());
        else if (g.is_binary()) {
            walk(g.left());
            walk(g.right());
        } else if (g.is_unary())
            walk(g.operand());
    };
    walk(f);
    return out;
}

template <class L>
void add_subformulas(const basic_formula<L>& f, std::set<basic_formula<L>>& into)
{
    if (!into.insert(f).second)
        return;
    if (f.is_binary()) {
        add_subformulas(f.left(), into);
        add_subformulas(f.right(), into);
    } else if (f.is_unary()) {
        add_subformulas(f.operand(), into);
    }
}

// Least set containing f and closed under immediate subformulas.
template <class L>
std::set<basic_formula<L>> subformula_closure(const basic_formula<L>& f)
{
    std::set<basic_formula<L>> out;
    add_subformulas(f, out);
    return out;
}

template <class L>
std::set<basic_formula<L>> subformula_closure(const std::set<basic_formula<L>>& fs)
{
    std::set<basic_formula<L>> out;
    for (const auto& f : fs)
        add_subformulas(f, out);
    return out;
}

template <class L>
bool is_subformula_closed(const std::set<basic_formula<L>>& fs)
{
    for (const auto& f : fs) {
        if (f.is_binary() && (!fs.contains(f.left()) || !fs.contains(f.right())))
            return false;
        if (f.is_unary() && !fs.contains(f.operand()))
            return false;
    }
    return true;
}

template <class L>
using substitution = std::map<std::string, basic_formula<L>>;

// Simultaneous substitution of variables.
template <class L>
basic_formula<L> substitute(const basic_formula<L>& f, const substitution<L>& map)
{
    using F = basic_formula<L>;
    switch (f.op()) {
    case connective::var: {
        auto it = map.find(f.name());
        return it == map.end() ? f : it->second;
    }
    case connective::top:
    case connective::bot: return f;
    case connective::conj: return F::conj(substitute(f.left(), map), substitute(f.right(), map));
    case connective::disj: return F::disj(substitute(f.left(), map), substitute(f.right(), map));
    case connective::imp: return F::imp(substitute(f.left(), map), substitute(f.right(), map));
    case connective::neg: return F::neg(substitute(f.operand(), map));
    case connective::box: return F::box(substitute(f.operand(), map));
    case connective::bbox: return F::bbox(substitute(f.operand(), map));
    }
    return f;
}

// Goedel translation extended with (~a)^ = [n](a^). The source language has
// no falsum, so the output never contains F.
inline modal_formula godel_translate(const formula& f)
{
    using M = modal_formula;
    switch (f.op()) {
    case connective::var: return M::box(M::var(f.name()));
    case connective::top: return M::top();
    case connective::conj: return M::conj(godel_translate(f.left()), godel_translate(f.right()));
    case connective::disj: return M::disj(godel_translate(f.left()), godel_translate(f.right()));
    case connective::imp:
        return M::box(M::imp(godel_translate(f.left()), godel_translate(f.right())));
    case connective::neg: return M::bbox(godel_translate(f.operand()));
    default: break;
    }
    throw std::logic_error("godel_translate: connective outside the propositional language");
}

// Rewrites every [](a & b) into []a & []b, innermost first. Two modal
// formulas are equal up to the box/conjunction identification iff their
// normal forms coincide.
inline modal_formula split_box_conjunctions(const modal_formula& f)
{
    using M = modal_formula;
    switch (f.op()) {
    case connective::var:
    case connective::top:
    case connective::bot: return f;
    case connective::conj: return M::conj(split_box_conjunctions(f.left()), split_box_conjunctions(f.right()));
    case connective::disj: return M::disj(split_box_conjunctions(f.left()), split_box_conjunctions(f.right()));
    case connective::imp: return M::imp(split_box_conjunctions(f.left()), split_box_conjunctions(f.right()));
    case connective::bbox: return M::bbox(split_box_conjunctions(f.operand()));
    case connective::box: {
        const M inner = split_box_conjunctions(f.operand());
        if (inner.is(connective::conj))
            return M::conj(split_box_conjunctions(M::box(inner.left())),
                           split_box_conjunctions(M::box(inner.right())));
        return M::box(inner);
    }
    default: break;
    }
    return f;
}

inline bool equal_up_to_box_conjunction(const modal_formula& a, const modal_formula& b)
{
    return split_box_conjunctions(a) == split_box_conjunctions(b);
}

} // namespace subminimal
