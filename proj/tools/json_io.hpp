#pragma once

// JSON encodings of the library's structures. Bitmasks are unsigned
// integers with bit i standing for world i; map keys holding bitmasks are
// their decimal strings.

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "subminimal/algebra.hpp"
#include "subminimal/antichain.hpp"
#include "subminimal/modal.hpp"
#include "subminimal/proof.hpp"

namespace subminimal::io {

using json = nlohmann::json;

class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw format_error(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline world_set mask_of(const json& j, int worlds)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw format_error("bitmask must be a non-negative integer");
    const auto v = j.get<unsigned long long>();
    if (v > full_set(worlds))
        throw format_error("bitmask " + std::to_string(v) + " names a world out of range");
    return static_cast<world_set>(v);
}

inline world_set mask_key(const std::string& key, int worlds)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(key, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != key.size() || key.empty())
        throw format_error("key '" + key + "' is not a decimal bitmask");
    if (v > full_set(worlds))
        throw format_error("bitmask " + key + " names a world out of range");
    return static_cast<world_set>(v);
}

inline int world_count(const json& j, int cap)
{
    const json& w = field(j, "worlds");
    if (!w.is_number_integer() || w.get<int>() < 1 || w.get<int>() > cap)
        throw format_error("'worlds' must be an integer in 1.." + std::to_string(cap));
    return w.get<int>();
}

inline std::vector<std::pair<int, int>> pairs_of(const json& j, int worlds)
{
    if (!j.is_array())
        throw format_error("relation must be an array of [i, j] pairs");
    std::vector<std::pair<int, int>> out;
    for (const json& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            throw format_error("relation entries must be [i, j] integer pairs");
        const int a = p[0].get<int>(), b = p[1].get<int>();
        if (a < 0 || b < 0 || a >= worlds || b >= worlds)
            throw format_error("relation pair out of range");
        out.emplace_back(a, b);
    }
    return out;
}

// Strict pairs i < j of the order, in ascending order: canonical output.
inline json order_to_json(const poset& p)
{
    json out = json::array();
    for (auto [a, b] : p.strict_pairs())
        out.push_back({a, b});
    return out;
}

inline json table_to_json(const std::vector<world_set>& keys, const std::vector<world_set>& values)
{
    json out = json::object();
    for (std::size_t i = 0; i < keys.size(); ++i)
        out[std::to_string(keys[i])] = values[i];
    return out;
}

inline json frame_to_json(const nframe& f)
{
    return {{"worlds", f.size()}, {"leq", order_to_json(f.order())}, {"N", table_to_json(f.upsets(), f.images())}};
}

inline json model_to_json(const nmodel& m)
{
    json out = frame_to_json(m.frame());
    out["valuation"] = json::object();
    for (const auto& [name, set] : m.values())
        out["valuation"][name] = set;
    return out;
}

inline poset order_from_json(const json& j, int worlds)
{
    const auto pairs = j.contains("leq") ? pairs_of(j.at("leq"), worlds) : std::vector<std::pair<int, int>>{};
    try {
        return poset::from_pairs(worlds, pairs);
    } catch (const invalid_structure& e) {
        throw format_error(e.what());
    }
}

// Missing upsets in "N" are an error; extra keys must be upsets.
inline ntable table_from_json(const json& j, const poset& p)
{
    const json& n = field(j, "N");
    if (!n.is_object())
        throw format_error("'N' must be an object");
    ntable t;
    for (const auto& [key, value] : n.items()) {
        const world_set x = mask_key(key, p.size());
        if (!p.is_upset(x))
            throw format_error("'N' key " + key + " is not an upset");
        t[x] = mask_of(value, p.size());
    }
    for (world_set x : enumerate_upsets(p))
        if (!t.contains(x))
            throw format_error("'N' has no entry for upset " + std::to_string(x));
    return t;
}

// Raw pieces, so that callers can report locality violations themselves.
struct frame_input {
    poset order;
    ntable table;
};

inline frame_input frame_input_from_json(const json& j)
{
    const int worlds = world_count(j, max_world_count);
    poset p = order_from_json(j, worlds);
    ntable t = table_from_json(j, p);
    return {std::move(p), std::move(t)};
}

inline nframe frame_from_json(const json& j)
{
    frame_input in = frame_input_from_json(j);
    try {
        return nframe(std::move(in.order), in.table);
    } catch (const invalid_structure& e) {
        throw format_error(e.what());
    }
}

inline nmodel model_from_json(const json& j)
{
    nframe f = frame_from_json(j);
    valuation v;
    if (j.contains("valuation")) {
        if (!j.at("valuation").is_object())
            throw format_error("'valuation' must be an object");
        for (const auto& [name, value] : j.at("valuation").items())
            v[name] = mask_of(value, f.size());
    }
    try {
        return nmodel(std::move(f), std::move(v));
    } catch (const invalid_structure& e) {
        throw format_error(e.what());
    }
}

inline json algebra_to_json(const n_algebra& a)
{
    return {{"size", a.size}, {"meet", a.meet}, {"join", a.join}, {"imp", a.imp}, {"neg", a.neg}, {"one", a.one}};
}

inline n_algebra algebra_from_json(const json& j)
{
    n_algebra a;
    try {
        a.size = field(j, "size").get<int>();
        a.meet = field(j, "meet").get<std::vector<std::vector<int>>>();
        a.join = field(j, "join").get<std::vector<std::vector<int>>>();
        a.imp = field(j, "imp").get<std::vector<std::vector<int>>>();
        a.neg = field(j, "neg").get<std::vector<int>>();
        a.one = field(j, "one").get<int>();
    } catch (const json::exception& e) {
        throw format_error(std::string("algebra: ") + e.what());
    }
    if (a.size < 1 || a.size > max_algebra_size)
        throw format_error("algebra size out of range");
    auto square = [&](const std::vector<std::vector<int>>& t) {
        if (static_cast<int>(t.size()) != a.size)
            return false;
        for (const auto& row : t) {
            if (static_cast<int>(row.size()) != a.size)
                return false;
            for (int v : row)
                if (v < 0 || v >= a.size)
                    return false;
        }
        return true;
    };
    if (!square(a.meet) || !square(a.join) || !square(a.imp) || static_cast<int>(a.neg.size()) != a.size ||
        a.one < 0 || a.one >= a.size)
        throw format_error("algebra tables must be size x size with entries in range");
    for (int v : a.neg)
        if (v < 0 || v >= a.size)
            throw format_error("algebra negation entry out of range");
    return a;
}

inline json ns4_frame_to_json(const ns4_frame& f)
{
    json rel = json::array();
    for (int w = 0; w < f.size; ++w)
        for (int v = 0; v < f.size; ++v)
            if (w != v && contains(f.succ[w], v))
                rel.push_back({w, v});
    json n = json::object();
    for (std::size_t x = 0; x < f.n.size(); ++x)
        n[std::to_string(x)] = f.n[x];
    return {{"worlds", f.size}, {"rel", rel}, {"N", n}};
}

// Subset-indexed table; every subset needs an entry.
inline std::vector<world_set> subset_table_from_json(const json& j, int worlds)
{
    const json& n = field(j, "N");
    if (!n.is_object())
        throw format_error("'N' must be an object");
    std::vector<world_set> table(std::size_t{1} << worlds);
    std::vector<bool> seen(table.size(), false);
    for (const auto& [key, value] : n.items()) {
        const world_set x = mask_key(key, worlds);
        table[x] = mask_of(value, worlds);
        seen[x] = true;
    }
    for (std::size_t x = 0; x < seen.size(); ++x)
        if (!seen[x])
            throw format_error("'N' has no entry for subset " + std::to_string(x));
    return table;
}

// The relation is closed reflexively and transitively.
inline ns4_frame ns4_frame_from_json(const json& j)
{
    ns4_frame f;
    f.size = world_count(j, max_modal_worlds);
    f.succ.assign(f.size, 0);
    if (j.contains("rel"))
        for (auto [a, b] : pairs_of(j.at("rel"), f.size))
            f.succ[a] |= singleton(b);
    for (int w = 0; w < f.size; ++w)
        f.succ[w] |= singleton(w);
    for (bool changed = true; changed;) {
        changed = false;
        for (int w = 0; w < f.size; ++w) {
            world_set next = f.succ[w];
            for (int v = 0; v < f.size; ++v)
                if (contains(f.succ[w], v))
                    next |= f.succ[v];
            changed = changed || next != f.succ[w];
            f.succ[w] = next;
        }
    }
    f.n = subset_table_from_json(j, f.size);
    return f;
}

inline modal_nframe modal_nframe_from_json(const json& j)
{
    modal_nframe f;
    f.size = world_count(j, max_modal_worlds);
    f.n = subset_table_from_json(j, f.size);
    return f;
}

inline std::vector<proof_line> proof_lines_from_json(const json& j)
{
    if (!j.is_array())
        throw format_error("a proof is an array of lines");
    std::vector<proof_line> out;
    for (const json& l : j) {
        proof_line line;
        try {
            line.formula = parse_modal_formula(field(l, "formula").get<std::string>());
            line.rule = field(l, "rule").get<std::string>();
            if (l.contains("refs"))
                line.refs = l.at("refs").get<std::vector<int>>();
        } catch (const json::exception& e) {
            throw format_error(std::string("proof line: ") + e.what());
        }
        out.push_back(std::move(line));
    }
    return out;
}

inline json proof_to_json(const std::vector<proof_line>& lines)
{
    json out = json::array();
    for (const proof_line& l : lines)
        out.push_back({{"formula", to_string(l.formula)}, {"rule", l.rule}, {"refs", l.refs}});
    return out;
}

} // namespace subminimal::io
