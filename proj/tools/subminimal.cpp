// Command-line front end. Every command prints one JSON document on stdout.
// Exit status: 0 success, 1 refuted or violation, 2 usage or input error,
// 3 search limit reached.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json_io.hpp"
#include "subminimal/decide.hpp"
#include "subminimal/filtration.hpp"

using namespace subminimal;
using io::json;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct options {
    bool pretty = false;
    int max_worlds = 3;
    long timeout_ms = 0;

    search_limits limits() const
    {
        return timeout_ms > 0 ? search_limits::with_timeout(std::chrono::milliseconds(timeout_ms)) : search_limits{};
    }
};

int emit(const options& o, const json& j, int code)
{
    std::cout << (o.pretty ? j.dump(2) : j.dump()) << '\n';
    return code;
}

// A file path, "-" for stdin, or inline JSON.
json load(const std::string& source)
{
    std::string text;
    if (source == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else if (!source.empty() && (source.front() == '{' || source.front() == '[')) {
        text = source;
    } else {
        std::ifstream in(source);
        if (!in)
            throw usage_error("cannot open " + source);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw usage_error(std::string("invalid JSON: ") + e.what());
    }
}

logic logic_arg(const std::string& s)
{
    if (auto l = parse_logic(s))
        return *l;
    throw usage_error("unknown logic '" + s + "' (expected n, nef, copc or mpc)");
}

json witness_json(const countermodel& c)
{
    json j = io::model_to_json(c.model);
    j["world"] = c.world;
    return j;
}

int cmd_parse(const options& o, const std::string& text, bool modal)
{
    json out;
    if (modal) {
        const modal_formula f = parse_modal_formula(text);
        out = {{"formula", to_string(f)}, {"language", "modal"}, {"size", f.size()}, {"depth", f.depth()},
               {"variables", variables(f)}};
    } else {
        const formula f = parse_formula(text);
        out = {{"formula", to_string(f)}, {"language", "prop"}, {"size", f.size()}, {"depth", f.depth()},
               {"variables", variables(f)}};
    }
    return emit(o, out, 0);
}

int cmd_decide(const options& o, const std::string& logic_name, const std::string& text)
{
    const logic l = logic_arg(logic_name);
    const formula f = parse_formula(text);
    decide_options opt;
    opt.search_bound = o.max_worlds;
    opt.limits = o.limits();
    const decision d = decide(l, f, opt);
    json out{{"logic", logic_name}, {"formula", to_string(f)}, {"status", status_name(d.status)}};
    if (!d.certificate.empty())
        out["certificate"] = d.certificate;
    if (d.status == decision_status::no_countermodel_up_to_bound)
        out["bound"] = o.max_worlds;
    if (d.witness) {
        if (!verify_countermodel(l, f, *d.witness))
            throw std::logic_error("witness failed to re-verify");
        out["witness"] = witness_json(*d.witness);
    }
    return emit(o, out, d.status == decision_status::refuted ? 1 : 0);
}

int cmd_countermodel(const options& o, const std::string& logic_name, const std::string& text)
{
    const logic l = logic_arg(logic_name);
    const formula f = parse_formula(text);
    const auto c = countermodel_search(l, f, o.max_worlds, o.limits());
    json out{{"logic", logic_name}, {"formula", to_string(f)}, {"bound", o.max_worlds}};
    if (!c) {
        out["status"] = "no-countermodel-up-to-bound";
        return emit(o, out, 0);
    }
    if (!verify_countermodel(l, f, *c))
        throw std::logic_error("witness failed to re-verify");
    out["status"] = "refuted";
    out["witness"] = witness_json(*c);
    return emit(o, out, 1);
}

int cmd_check_frame(const options& o, const std::string& source, const std::string& logic_name)
{
    const io::frame_input in = io::frame_input_from_json(load(source));
    json out;
    if (auto v = check_nframe(in.order, in.table)) {
        out = {{"status", "violation"}, {"law", "locality"}, {"x", v->x}, {"y", v->y}};
        return emit(o, out, 1);
    }
    const nframe f(in.order, in.table);
    out = {{"status", "ok"}};
    if (!logic_name.empty()) {
        const logic l = logic_arg(logic_name);
        const bool member = frame_class(f, l);
        out["logic"] = logic_name;
        out["member"] = member;
        if (!member) {
            out["status"] = "violation";
            if (auto r = find_refutation(f, axiom_scheme(l)))
                out["witness"] = witness_json({nmodel(f, r->values), r->world});
            return emit(o, out, 1);
        }
    }
    return emit(o, out, 0);
}

int cmd_filtrate(const options& o, const std::string& source, const std::string& sigma)
{
    const nmodel m = io::model_from_json(load(source));
    const filtration_result r = greatest_filtration(m, parse_formula(sigma));
    json out = io::model_to_json(r.quotient);
    out["pi"] = r.pi;
    json s = json::array();
    for (const formula& f : r.sigma)
        s.push_back(to_string(f));
    out["sigma"] = s;
    if (filtration_theorem_check(m, r))
        throw std::logic_error("filtration theorem failed");
    return emit(o, out, 0);
}

int cmd_algebra_dual(const options& o, const std::string& source)
{
    const n_algebra a = io::algebra_from_json(load(source));
    if (auto v = check_nalgebra(a))
        return emit(o, {{"status", "violation"}, {"law", v->law}, {"x", v->x}, {"y", v->y}, {"z", v->z}}, 1);
    const algebra_dual d = dual_frame(a);
    json filters = json::array();
    for (element_set s : d.filters) {
        json members = json::array();
        for (int e = 0; e < a.size; ++e)
            if (has_element(s, e))
                members.push_back(e);
        filters.push_back(members);
    }
    json out = io::frame_to_json(d.frame);
    out["filters"] = filters;
    json hats = json::array();
    for (int e = 0; e < a.size; ++e)
        hats.push_back(d.hat(e));
    out["hat"] = hats;
    return emit(o, out, 0);
}

int cmd_algebra_check(const options& o, const std::string& source)
{
    const n_algebra a = io::algebra_from_json(load(source));
    if (auto v = check_nalgebra(a))
        return emit(o, {{"status", "violation"}, {"law", v->law}, {"x", v->x}, {"y", v->y}, {"z", v->z}}, 1);
    const json out{{"status", "ok"},
                   {"subdirectly_irreducible", subdirectly_irreducible(a)},
                   {"duality", duality_check(a)}};
    return emit(o, out, 0);
}

algebra_valuation valuation_arg(const std::vector<std::string>& items, int size)
{
    algebra_valuation mu;
    for (const std::string& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw usage_error("valuation entries look like p=3");
        int v = -1;
        try {
            v = std::stoi(item.substr(eq + 1));
        } catch (const std::exception&) {
        }
        if (v < 0 || v >= size)
            throw usage_error("valuation value out of range in '" + item + "'");
        mu[item.substr(0, eq)] = v;
    }
    return mu;
}

int cmd_algebra_filtrate(const options& o, const std::string& source, const std::string& sigma_text,
                         const std::vector<std::string>& mu_items)
{
    const n_algebra a = io::algebra_from_json(load(source));
    if (auto v = check_nalgebra(a))
        return emit(o, {{"status", "violation"}, {"law", v->law}, {"x", v->x}, {"y", v->y}, {"z", v->z}}, 1);
    const auto sigma = subformula_closure(parse_formula(sigma_text));
    const algebra_valuation mu = valuation_arg(mu_items, a.size);
    for (const formula& f : sigma)
        if (f.is(connective::var) && !mu.contains(f.name()))
            throw usage_error("no value given for '" + f.name() + "'");
    const algebraic_filtration r = sublattice_filtration(a, mu, sigma);
    json out = io::algebra_to_json(r.algebra);
    out["elements"] = r.elements;
    out["valuation"] = json(r.mu);
    out["correspondence"] = least_filtration_correspondence(a, mu, sigma);
    return emit(o, out, 0);
}

int cmd_antichain(const options& o, int max_n)
{
    if (max_n < 0 || 2 * max_n + 7 > max_world_count)
        throw usage_error("--max-n must lie in 0..6");
    std::vector<poset> d;
    for (int n = 0; n <= max_n; ++n)
        d.push_back(build_delta(n).order);
    json leq = json::array(), positive = json::array();
    for (int i = 0; i <= max_n; ++i) {
        json row_leq = json::array(), row_pos = json::array();
        for (int j = 0; j <= max_n; ++j) {
            o.limits().check();
            // entry [i][j]: Δ_i is an image of Δ_j
            row_leq.push_back(order_onto(d[i], d[j]).has_value());
            row_pos.push_back(positive_morphism(d[i], d[j]).has_value());
        }
        leq.push_back(row_leq);
        positive.push_back(row_pos);
    }
    const json out{{"max_n", max_n},
                   {"leq", leq},
                   {"positive", positive},
                   {"antichain", antichain_check(d)},
                   {"positive_antichain", positive_antichain_check(d)}};
    return emit(o, out, 0);
}

int cmd_translate(const options& o, const std::string& text)
{
    const formula f = parse_formula(text);
    return emit(o, {{"formula", to_string(f)}, {"translation", to_string(godel_translate(f))}}, 0);
}

json ns4_violation_json(const ns4_violation& v)
{
    return {{"status", "violation"}, {"law", violation_name(v.kind)}, {"x", v.x}, {"world", v.w}};
}

int cmd_ns4_valid(const options& o, const std::string& source, const std::string& text)
{
    const ns4_frame f = io::ns4_frame_from_json(load(source));
    if (auto v = ns4_check_frame(f))
        return emit(o, ns4_violation_json(*v), 1);
    const modal_formula phi = parse_modal_formula(text);
    const auto names = variables(phi);
    std::optional<modal_valuation> refuting;
    ns4_model m{f, {}};
    for_each_subset_valuation(f.size, {names.begin(), names.end()}, [&](const modal_valuation& v) {
        m.values = v;
        if (ns4_eval(m, phi) != f.all()) {
            refuting = v;
            return false;
        }
        return true;
    });
    json out{{"formula", to_string(phi)}, {"status", refuting ? "refuted" : "ok"}};
    if (refuting) {
        m.values = *refuting;
        out["valuation"] = json(*refuting);
        out["world"] = std::countr_zero(~ns4_eval(m, phi) & f.all());
    }
    return emit(o, out, refuting ? 1 : 0);
}

int cmd_check_proof(const options& o, const std::string& source, const std::string& system,
                    const std::vector<std::string>& premises, const std::string& goal)
{
    hilbert_proof p;
    const auto s = parse_system(system);
    if (!s)
        throw usage_error("unknown system '" + system + "' (expected NS4 or CoS4)");
    p.system = *s;
    p.lines = io::proof_lines_from_json(load(source));
    for (const std::string& text : premises)
        p.premises.push_back(parse_modal_formula(text));
    std::optional<modal_formula> g;
    if (!goal.empty())
        g = parse_modal_formula(goal);
    json out{{"system", system_name(p.system)}, {"lines", p.lines.size()}};
    if (auto err = check_proof(p, g)) {
        out["status"] = "violation";
        out["line"] = err->line;
        out["reason"] = err->reason;
        return emit(o, out, 1);
    }
    out["status"] = "ok";
    return emit(o, out, 0);
}

int cmd_en_rn(const options& o, const std::string& source, int n, bool rule)
{
    if (n < 0)
        throw usage_error("--n must be non-negative");
    const modal_nframe f = io::modal_nframe_from_json(load(source));
    const bool holds = rule ? rn_validity(f, n) : en_check(f, n);
    const json out{{"condition", (rule ? "R" : "E") + std::to_string(n)}, {"status", holds ? "ok" : "violation"}};
    return emit(o, out, holds ? 0 : 1);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Subminimal negation logics: decision, frames, filtration, duality and modal companions"};
    app.require_subcommand(1);
    app.fallthrough();
    options o;
    app.add_flag("--pretty", o.pretty, "indent the JSON output");
    app.add_option("--max-worlds", o.max_worlds, "bound for countermodel searches (1..5)")->check(CLI::Range(1, 5));
    app.add_option("--timeout-ms", o.timeout_ms, "abandon searches after this many milliseconds")
        ->check(CLI::NonNegativeNumber);

    std::string formula_text, logic_name, source, sigma, system = "NS4", goal;
    std::vector<std::string> premises, mu_items;
    bool modal = false;
    int max_n = 3, n = 1;

    auto* parse = app.add_subcommand("parse", "parse and print a formula");
    parse->add_flag("--modal", modal, "use the bi-modal language");
    parse->add_option("formula", formula_text)->required();

    auto* decide_cmd = app.add_subcommand("decide", "decide a formula in a logic");
    decide_cmd->add_option("--logic", logic_name, "n, nef, copc or mpc")->required();
    decide_cmd->add_option("formula", formula_text)->required();

    auto* counter = app.add_subcommand("countermodel", "bounded countermodel search");
    counter->add_option("--logic", logic_name, "n, nef, copc or mpc")->required();
    counter->add_option("formula", formula_text)->required();

    auto* check = app.add_subcommand("check-frame", "check locality and, optionally, a frame class");
    check->add_option("frame", source, "frame JSON: file, '-' or inline")->required();
    check->add_option("--logic", logic_name, "also check membership in this logic's frame class");

    auto* filtrate = app.add_subcommand("filtrate", "greatest filtration of a model");
    filtrate->add_option("--model", source, "model JSON")->required();
    filtrate->add_option("--sigma", sigma, "formula whose subformulas form the filter set")->required();

    auto* algebra = app.add_subcommand("algebra", "N-algebras");
    algebra->require_subcommand(1);
    auto* dual = algebra->add_subcommand("dual", "dual frame of prime filters");
    dual->add_option("algebra", source)->required();
    auto* acheck = algebra->add_subcommand("check", "N-algebra laws, subdirect irreducibility, duality");
    acheck->add_option("algebra", source)->required();
    auto* afilt = algebra->add_subcommand("filtrate", "least algebraic filtration");
    afilt->add_option("algebra", source)->required();
    afilt->add_option("--sigma", sigma)->required();
    afilt->add_option("--valuation", mu_items, "entries like p=3")->expected(0, -1);

    auto* anti = app.add_subcommand("antichain", "pairwise comparison of the Δ posets");
    anti->add_option("--max-n", max_n, "largest index")->check(CLI::Range(0, 6));

    auto* translate = app.add_subcommand("translate", "translation into the bi-modal language");
    translate->add_option("formula", formula_text)->required();

    auto* ns4 = app.add_subcommand("ns4", "bi-modal frames and proofs");
    ns4->require_subcommand(1);
    auto* valid = ns4->add_subcommand("valid", "validity of a formula on an NS4 frame");
    valid->add_option("frame", source)->required();
    valid->add_option("formula", formula_text)->required();
    auto* proof = ns4->add_subcommand("check-proof", "check a Hilbert derivation");
    proof->add_option("proof", source)->required();
    proof->add_option("--system", system, "NS4 or CoS4");
    proof->add_option("--premise", premises, "a premise formula; repeatable");
    proof->add_option("--goal", goal, "formula the last line must derive");
    auto* en = ns4->add_subcommand("en", "condition E_n on an orderless frame");
    en->add_option("frame", source)->required();
    en->add_option("--n", n)->required();
    auto* rn = ns4->add_subcommand("rn", "validity of the rule R_n on an orderless frame");
    rn->add_option("frame", source)->required();
    rn->add_option("--n", n)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*parse)
            return cmd_parse(o, formula_text, modal);
        if (*decide_cmd)
            return cmd_decide(o, logic_name, formula_text);
        if (*counter)
            return cmd_countermodel(o, logic_name, formula_text);
        if (*check)
            return cmd_check_frame(o, source, logic_name);
        if (*filtrate)
            return cmd_filtrate(o, source, sigma);
        if (*dual)
            return cmd_algebra_dual(o, source);
        if (*acheck)
            return cmd_algebra_check(o, source);
        if (*afilt)
            return cmd_algebra_filtrate(o, source, sigma, mu_items);
        if (*anti)
            return cmd_antichain(o, max_n);
        if (*translate)
            return cmd_translate(o, formula_text);
        if (*valid)
            return cmd_ns4_valid(o, source, formula_text);
        if (*proof)
            return cmd_check_proof(o, source, system, premises, goal);
        if (*en)
            return cmd_en_rn(o, source, n, false);
        if (*rn)
            return cmd_en_rn(o, source, n, true);
    } catch (const resource_exhausted& e) {
        return emit(o, {{"status", "resource-exhausted"}, {"error", e.what()}}, 3);
    } catch (const parse_error& e) {
        return emit(o, {{"status", "error"}, {"error", e.what()}}, 2);
    } catch (const usage_error& e) {
        return emit(o, {{"status", "error"}, {"error", e.what()}}, 2);
    } catch (const io::format_error& e) {
        return emit(o, {{"status", "error"}, {"error", e.what()}}, 2);
    } catch (const std::invalid_argument& e) {
        return emit(o, {{"status", "error"}, {"error", e.what()}}, 2);
    }
    return 2;
}
