#include <catch_amalgamated.hpp>

#include "corpus.hpp"
#include "subminimal/algebra.hpp"
#include "support.hpp"

using namespace subminimal;

namespace {

// Prime filters by brute force over all element subsets.
std::vector<element_set> prime_filters_by_subsets(const n_algebra& a)
{
    std::vector<element_set> out;
    for (element_set f = 1; f < (element_set{1} << a.size); ++f) {
        bool ok = has_element(f, a.one);
        for (int x = 0; x < a.size && ok; ++x)
            for (int y = 0; y < a.size && ok; ++y) {
                if (has_element(f, x) && a.leq(x, y) && !has_element(f, y))
                    ok = false;
                if (has_element(f, x) && has_element(f, y) && !has_element(f, a.meet[x][y]))
                    ok = false;
                if (has_element(f, a.join[x][y]) && !has_element(f, x) && !has_element(f, y))
                    ok = false;
            }
        if (ok)
            out.push_back(f);
    }
    return out;
}

n_algebra chain_algebra(int n, std::vector<int> neg)
{
    n_algebra a;
    a.size = n;
    a.meet.assign(n, std::vector<int>(n));
    a.join = a.imp = a.meet;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            a.meet[x][y] = std::min(x, y);
            a.join[x][y] = std::max(x, y);
            a.imp[x][y] = x <= y ? n - 1 : y;
        }
    a.neg = std::move(neg);
    a.one = n - 1;
    return a;
}

const std::vector<n_algebra>& corpus()
{
    static const std::vector<n_algebra> c = test::algebra_corpus(3);
    return c;
}

} // namespace

TEST_CASE("unary operations on the 2-chain are all compatible")
{
    for (int n0 = 0; n0 < 2; ++n0)
        for (int n1 = 0; n1 < 2; ++n1) {
            const n_algebra a = chain_algebra(2, {n0, n1});
            // x ∧ ¬y = x ∧ ¬(x ∧ y): trivial at x = 0, and at x = 1 both sides are ¬y
            CHECK_FALSE(check_nalgebra(a));
        }
}

TEST_CASE("compatibility on the 3-chain matches a direct count")
{
    int compatible = 0;
    for (int a0 = 0; a0 < 3; ++a0)
        for (int a1 = 0; a1 < 3; ++a1)
            for (int a2 = 0; a2 < 3; ++a2) {
                const n_algebra a = chain_algebra(3, {a0, a1, a2});
                // x = 1 (middle): min(1, ¬y) must equal min(1, ¬min(1, y)), i.e. only
                // y = 2 versus y = 1 matters: min(1, a2) == min(1, a1)
                const bool expected = std::min(1, a2) == std::min(1, a1);
                CHECK(satisfies_compatibility(a) == expected);
                CHECK(!check_nalgebra(a) == expected);
                compatible += expected;
            }
    CHECK(compatible == 15);
}

TEST_CASE("check_nalgebra finds a broken residuation cell")
{
    set_algebra u = upset_algebra(test::two_point_frame());
    REQUIRE_FALSE(check_nalgebra(u.algebra));
    u.algebra.imp[2][0] = 2;   // W -> ∅ set to W
    const auto v = check_nalgebra(u.algebra);
    REQUIRE(v);
    CHECK(v->law == "residuation");
    n_algebra bad = u.algebra;
    bad.neg.pop_back();
    CHECK_THROWS_AS(check_nalgebra(bad), invalid_structure);
}

TEST_CASE("upset algebras")
{
    const poset one = poset::antichain(1);
    const set_algebra single = upset_algebra(nframe::from_function(one, [](world_set) { return world_set{1}; }));
    CHECK(single.algebra.size == 2);

    const set_algebra two = upset_algebra(test::two_point_frame());
    CHECK(two.elements == std::vector<world_set>{0b00, 0b10, 0b11});
    CHECK(two.algebra.neg == std::vector<int>{1, 2, 1});
    CHECK(two.algebra.one == 2);
    CHECK(two.algebra.leq(0, 1));
    CHECK(two.algebra.leq(1, 2));

    for (int n = 1; n <= 3; ++n)
        for (const poset& p : labelled_posets(n))
            for (const nframe& f : enumerate_nframes(p))
                REQUIRE_FALSE(check_nalgebra(upset_algebra(f).algebra));
}

TEST_CASE("compatibility of the upset algebra is locality of the frame")
{
    for (int n = 1; n <= 3; ++n)
        for (const poset& p : labelled_posets(n)) {
            const auto ups = enumerate_upsets(p);
            if (ups.size() > 6)
                continue;
            std::vector<std::size_t> digit(ups.size(), 0);
            while (true) {
                std::vector<world_set> images(ups.size());
                for (std::size_t i = 0; i < ups.size(); ++i)
                    images[i] = ups[digit[i]];
                const nframe f = nframe::from_images(p, images);
                REQUIRE(satisfies_compatibility(upset_algebra(f).algebra) == satisfies_locality(f));
                std::size_t i = 0;
                while (i < digit.size() && ++digit[i] == ups.size())
                    digit[i++] = 0;
                if (i == digit.size())
                    break;
            }
        }
}

TEST_CASE("prime filters")
{
    CHECK(prime_filters(chain_algebra(2, {1, 1})).size() == 2);
    const auto two = upset_algebra(test::two_point_frame()).algebra;
    CHECK(prime_filters(two).size() == 3);
    for (const n_algebra& a : corpus()) {
        auto lib = prime_filters(a);
        auto oracle = prime_filters_by_subsets(a);
        std::sort(lib.begin(), lib.end());
        REQUIRE(lib == oracle);
        const element_set all = (element_set{1} << a.size) - 1;
        REQUIRE(std::find(lib.begin(), lib.end(), all) != lib.end());
    }
}

TEST_CASE("dual frame of the 2-chain algebra with constant negation 1")
{
    const algebra_dual d = dual_frame(chain_algebra(2, {1, 1}));
    // world 0 is the improper filter, world 1 is {1}
    CHECK(d.filters == std::vector<element_set>{0b11, 0b10});
    CHECK(d.frame.order().leq(1, 0));
    CHECK(d.frame.order().top() == 0);
    CHECK(d.frame.table() == ntable{{0b00, 0b00}, {0b01, 0b11}, {0b11, 0b11}});
    CHECK_FALSE(check_nframe(d.frame.order(), d.frame.table()));
}

TEST_CASE("dual frames are valid and N_A(â) = (¬a)^")
{
    for (const n_algebra& a : corpus()) {
        const algebra_dual d = dual_frame(a);
        REQUIRE_FALSE(check_nframe(d.frame.order(), d.frame.table()));
        REQUIRE(is_top_frame(d.frame));
        for (int e = 0; e < a.size; ++e)
            REQUIRE(d.frame.n(d.hat(e)) == d.hat(a.neg[e]));
    }
}

TEST_CASE("duality round trips")
{
    const poset one = poset::antichain(1);
    CHECK(duality_check(nframe::from_function(one, [](world_set x) { return x | 1U; })));
    CHECK(duality_check(test::two_point_frame()));
    for (const nframe& f : test::top_frames(3))
        REQUIRE(duality_check(f));
    for (const n_algebra& a : corpus())
        REQUIRE(duality_check(a));
}

TEST_CASE("the dual of the upset algebra of the two-point frame adds a top")
{
    const n_algebra a = upset_algebra(test::two_point_frame()).algebra;
    const algebra_dual d = dual_frame(a);
    CHECK(d.frame.size() == 3);
    CHECK(d.frame.order().root());
    CHECK(d.frame.order().top());
}

TEST_CASE("subdirect irreducibility")
{
    CHECK(subdirectly_irreducible(chain_algebra(2, {1, 1})));
    const poset ac = poset::antichain(2);
    const n_algebra diamond = upset_algebra(nframe::from_function(ac, [&](world_set) { return ac.all(); })).algebra;
    CHECK_FALSE(subdirectly_irreducible(diamond));
    for (const n_algebra& a : corpus())
        REQUIRE(subdirectly_irreducible(a) == dual_frame(a).frame.order().root().has_value());
}

TEST_CASE("sublattice filtration examples")
{
    // whole carrier: S = A
    const n_algebra two = upset_algebra(test::two_point_frame()).algebra;
    const std::set<formula> pq{parse_formula("p"), parse_formula("q")};
    const auto whole = sublattice_filtration(two, {{"p", 0}, {"q", 1}}, pq);
    CHECK(whole.elements == std::vector<int>{0, 1, 2});
    CHECK(whole.algebra == two);

    // 4-element chain, Σ = {p}, μ(p) = m = 1
    const n_algebra c4 = chain_algebra(4, {3, 0, 0, 0});
    REQUIRE_FALSE(check_nalgebra(c4));
    const auto s = sublattice_filtration(c4, {{"p", 1}}, {parse_formula("p")});
    CHECK(s.elements == std::vector<int>{1, 3});
    // ¬m = ¬1 = 0: no member of {1, 3} lies below it, so the empty join gives m
    CHECK(s.elements[s.algebra.neg[0]] == 1);
    CHECK(s.elements[s.algebra.neg[1]] == 1);
    CHECK_FALSE(c4.leq(s.elements[s.algebra.neg[0]], c4.neg[1]));

    CHECK_THROWS_AS(general_algebraic_filtration(c4, {{"p", 1}}, {parse_formula("p")}, {3}), std::invalid_argument);
    CHECK_THROWS_AS(general_algebraic_filtration(c4, {{"p", 1}}, {parse_formula("p")}, {1, 2}), std::invalid_argument);
}

TEST_CASE("algebraic filtration theorem and leastness over the corpus")
{
    const auto sigmas = test::small_sigmas(3);
    REQUIRE(sigmas.size() > 10);
    int instances = 0;
    for (const n_algebra& a : corpus()) {
        if (a.size > 6)
            continue;
        for (std::size_t si = 0; si < sigmas.size(); si += 6) {
            const auto& sigma = sigmas[si];
            test::for_each_algebra_valuation(a, sigma, [&](const algebra_valuation& mu) {
                const auto s = sublattice_filtration(a, mu, sigma);
                REQUIRE_FALSE(check_nalgebra(s.algebra));
                for (const formula& f : sigma)
                    REQUIRE(s.elements[alg_eval(s.algebra, s.mu, f)] == alg_eval(a, mu, f));
                for (std::size_t i = 0; i < s.elements.size(); ++i) {
                    const int x = s.elements[i];
                    const int ns = s.elements[s.algebra.neg[i]];
                    bool some_below = false;
                    for (int e : s.elements)
                        some_below = some_below || a.leq(e, a.neg[x]);
                    if (some_below)
                        REQUIRE(a.leq(ns, a.neg[x]));
                    for (const formula& f : sigma)
                        if (f.is(connective::neg) && alg_eval(a, mu, f.operand()) == x)
                            REQUIRE(ns == a.neg[x]);
                }
                // every sublattice L with 1 and μ[Σ] is a filtration containing S
                for (element_set l = 1; l < (element_set{1} << a.size); ++l) {
                    std::vector<int> members;
                    for (int e = 0; e < a.size; ++e)
                        if (has_element(l, e))
                            members.push_back(e);
                    try {
                        const auto r = general_algebraic_filtration(a, mu, sigma, members);
                        for (int e : s.elements)
                            REQUIRE(has_element(l, e));
                        for (const formula& f : sigma)
                            REQUIRE(r.elements[alg_eval(r.algebra, r.mu, f)] == alg_eval(a, mu, f));
                    } catch (const std::invalid_argument&) {
                        // not a sublattice, or misses 1 or μ[Σ]
                    }
                }
                ++instances;
            });
        }
    }
    CHECK(instances > 100);
}

TEST_CASE("least filtration corresponds to the greatest model filtration")
{
    const auto sigmas = test::small_sigmas(3);
    for (const n_algebra& a : corpus()) {
        if (a.size > 5)
            continue;
        for (const auto& sigma : sigmas)
            test::for_each_algebra_valuation(a, sigma, [&](const algebra_valuation& mu) {
                REQUIRE(least_filtration_correspondence(a, mu, sigma));
            });
    }
    // μ constant 1: one class
    const n_algebra two = upset_algebra(test::two_point_frame()).algebra;
    CHECK(least_filtration_correspondence(two, {{"p", 2}}, {parse_formula("p")}));
}
