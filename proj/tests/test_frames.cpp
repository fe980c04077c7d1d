#include <catch_amalgamated.hpp>

#include <random>

#include "subminimal/enumerate.hpp"
#include "subminimal/frames.hpp"
#include "subminimal/search.hpp"
#include "support.hpp"

using namespace subminimal;

namespace {

poset two_chain() { return poset::from_pairs(2, {{0, 1}}); }

// Upsets by filtering all subsets; independent of the library enumerator.
std::vector<world_set> upsets_by_filter(const poset& p)
{
    std::vector<world_set> out;
    for (world_set x = 0; x <= p.all(); ++x)
        if (p.is_upset(x))
            out.push_back(x);
    return out;
}

} // namespace

TEST_CASE("poset construction checks the order laws")
{
    CHECK_THROWS_AS(poset::from_successors({0b01, 0b01}), invalid_structure);   // reflexivity
    CHECK_THROWS_AS(poset::from_successors({0b11, 0b11}), invalid_structure);   // antisymmetry
    CHECK_THROWS_AS(poset::from_successors({0b011, 0b110, 0b100}), invalid_structure); // transitivity
    CHECK_THROWS_AS(poset::from_pairs(2, {{0, 1}, {1, 0}}), invalid_structure);
    const poset c = poset::chain(3);
    CHECK(c.leq(0, 2));
    CHECK_FALSE(c.leq(2, 0));
    CHECK(c.root() == 0);
    CHECK(c.top() == 2);
    CHECK_FALSE(poset::antichain(2).root());
}

TEST_CASE("enumerate_upsets")
{
    CHECK(enumerate_upsets(two_chain()) == std::vector<world_set>{0b00, 0b10, 0b11});
    CHECK(enumerate_upsets(poset::antichain(2)).size() == 4);
    CHECK(enumerate_upsets(poset::antichain(1)) == std::vector<world_set>{0, 1});
    for (int n = 1; n <= 4; ++n)
        for (const poset& p : labelled_posets(n))
            CHECK(enumerate_upsets(p) == upsets_by_filter(p));
}

TEST_CASE("labelled poset counts")
{
    // number of labelled partial orders on n points
    CHECK(labelled_posets(1).size() == 1);
    CHECK(labelled_posets(2).size() == 3);
    CHECK(labelled_posets(3).size() == 19);
    CHECK(labelled_posets(4).size() == 219);
    // and up to isomorphism
    CHECK(posets_up_to_isomorphism(3).size() == 5);
    CHECK(posets_up_to_isomorphism(4).size() == 16);
    CHECK(posets_up_to_isomorphism(5).size() == 63);
}

TEST_CASE("check_nframe")
{
    const poset p = two_chain();
    CHECK_FALSE(check_nframe(p, test::two_point_frame().table()));
    CHECK_FALSE(check_nframe(p, ntable{{0b00, 0b11}, {0b10, 0b11}, {0b11, 0b11}}));

    // N(empty) = W, N({v}) = N(W) = empty satisfies locality: every pair with
    // X & Y != X has Y disjoint from the images involved.
    CHECK_FALSE(check_nframe(p, ntable{{0b00, 0b11}, {0b10, 0b00}, {0b11, 0b00}}));

    // N({v}) = W but N(W) = empty breaks locality at X = W, Y = {v}.
    const auto bad = check_nframe(p, ntable{{0b00, 0b00}, {0b10, 0b11}, {0b11, 0b00}});
    REQUIRE(bad);
    CHECK(bad->x == 0b11);
    CHECK(bad->y == 0b10);
    CHECK_THROWS_AS(nframe(p, ntable{{0b00, 0b00}, {0b10, 0b11}, {0b11, 0b00}}), invalid_structure);

    // malformed tables
    CHECK_THROWS_AS(check_nframe(p, ntable{{0b00, 0b00}, {0b11, 0b00}}), invalid_structure);
    CHECK_THROWS_AS(check_nframe(p, ntable{{0b00, 0b01}, {0b10, 0b00}, {0b11, 0b00}}), invalid_structure);
}

TEST_CASE("locality agrees with its pointwise form and with brute force")
{
    for (int n = 1; n <= 3; ++n)
        for (const poset& p : labelled_posets(n)) {
            const auto ups = enumerate_upsets(p);
            if (ups.size() > 6)
                continue; // the 3-antichain: 8^8 tables
            // every total upset-valued table
            std::vector<std::size_t> digit(ups.size(), 0);
            while (true) {
                std::vector<world_set> images(ups.size());
                for (std::size_t i = 0; i < ups.size(); ++i)
                    images[i] = ups[digit[i]];
                const nframe f = nframe::from_images(p, images);
                CHECK(satisfies_locality(f) == satisfies_pointwise_locality(f));
                std::size_t i = 0;
                while (i < digit.size() && ++digit[i] == ups.size())
                    digit[i++] = 0;
                if (i == digit.size())
                    break;
            }
        }
    for (int n = 1; n <= 4; ++n)
        for (const poset& p : labelled_posets(n))
            for (const nframe& f : enumerate_nframes(p)) {
                REQUIRE(satisfies_pointwise_locality(f));
                REQUIRE(satisfies_locality(f));
            }
}

TEST_CASE("enumerate_nframes produces every valid table exactly once")
{
    for (int n = 1; n <= 3; ++n)
        for (const poset& p : labelled_posets(n)) {
            const auto ups = enumerate_upsets(p);
            if (ups.size() > 6)
                continue; // the 3-antichain: 8^8 tables
            std::size_t valid = 0;
            std::vector<std::size_t> digit(ups.size(), 0);
            while (true) {
                ntable t;
                for (std::size_t i = 0; i < ups.size(); ++i)
                    t[ups[i]] = ups[digit[i]];
                if (!check_nframe(p, t))
                    ++valid;
                std::size_t i = 0;
                while (i < digit.size() && ++digit[i] == ups.size())
                    digit[i++] = 0;
                if (i == digit.size())
                    break;
            }
            const auto frames = enumerate_nframes(p);
            CHECK(frames.size() == valid);
            for (std::size_t i = 1; i < frames.size(); ++i)
                CHECK(frames[i - 1].images() < frames[i].images());
        }
}

TEST_CASE("eval on the two-point frame")
{
    const nframe f = test::two_point_frame();
    CHECK(eval(nmodel(f, {}), formula::top()) == 0b11);
    CHECK(eval(nmodel(f, {{"q", 0b10}}), parse_formula("~q")) == 0b11);
    CHECK(eval(nmodel(f, {{"p", 0b00}, {"q", 0b10}}), parse_formula("(p -> q) -> (~q -> ~p)")) == 0b10);
    CHECK_THROWS_AS(nmodel(f, {{"p", 0b01}}), invalid_structure);
}

TEST_CASE("eval agrees with the pointwise oracle and is persistent")
{
    std::mt19937 rng(2024);
    const std::vector<std::string> vars{"p", "q", "r"};
    for (int i = 0; i < 1500; ++i) {
        const nmodel m = test::random_nmodel(rng, 4, vars);
        const formula f = test::random_formula(rng, 4, vars);
        const world_set t = eval(m, f);
        CHECK(t == test::truth_set(m, f));
        CHECK(m.order().is_upset(t));
    }
}

TEST_CASE("frame validity and frame classes on the two-point frame")
{
    const nframe f = test::two_point_frame();
    CHECK(frame_validates(f, axiom_scheme(logic::n)));
    CHECK(frame_validates(f, axiom_scheme(logic::nef)));
    CHECK_FALSE(frame_validates(f, axiom_scheme(logic::copc)));
    CHECK(frame_class(f, logic::nef));
    CHECK_FALSE(frame_class(f, logic::copc));

    const auto r = find_refutation(f, axiom_scheme(logic::copc));
    REQUIRE(r);
    CHECK_FALSE(contains(eval(nmodel(f, r->values), axiom_scheme(logic::copc)), r->world));
}

TEST_CASE("frame classes on constant frames")
{
    // constant {top}
    const poset c = poset::chain(3);
    const nframe top_const = nframe::from_function(c, [](world_set) { return world_set{0b100}; });
    CHECK(frame_class(top_const, logic::copc));
    const nframe everything = nframe::from_function(c, [&](world_set) { return c.all(); });
    CHECK(frame_class(everything, logic::mpc));
    CHECK(frame_validates(everything, axiom_scheme(logic::mpc)));
}

TEST_CASE("first-order conditions match scheme validity on frames up to 3 worlds")
{
    for (int n = 1; n <= 3; ++n)
        for (const poset& p : labelled_posets(n))
            for (const nframe& f : enumerate_nframes(p)) {
                REQUIRE(frame_validates(f, axiom_scheme(logic::n)));
                REQUIRE(frame_class(f, logic::nef) == frame_class_by_scheme(f, logic::nef));
                REQUIRE(frame_class(f, logic::copc) == frame_class_by_scheme(f, logic::copc));
                // the class inclusions
                if (frame_class(f, logic::mpc))
                    REQUIRE(frame_class(f, logic::copc));
                if (frame_class(f, logic::copc))
                    REQUIRE(frame_class(f, logic::nef));
            }
}

TEST_CASE("neighbourhood presentation round trips")
{
    const nframe f = test::two_point_frame();
    CHECK(from_neighbourhood(to_neighbourhood(f)) == f);

    const poset c = poset::chain(2);
    const auto all_n = to_neighbourhood(nframe::from_function(c, [&](world_set) { return c.all(); }));
    for (const auto& hood : all_n.neighbourhoods)
        CHECK(hood == std::set<world_set>{0b00, 0b10, 0b11});

    for (int n = 1; n <= 3; ++n)
        for (const poset& p : labelled_posets(n))
            for (const nframe& g : enumerate_nframes(p)) {
                const auto hood = to_neighbourhood(g);
                REQUIRE(from_neighbourhood(hood) == g);
                REQUIRE(to_neighbourhood(from_neighbourhood(hood)) == hood);
            }

    // non-monotone: {v} in n(w) but not in n(v)
    neighbourhood_frame broken{two_chain(), {{0b10}, {}}};
    CHECK_THROWS_AS(from_neighbourhood(broken), invalid_structure);
    // non-local at v: W in n(v) but W & R(v) = {v} is not
    neighbourhood_frame nonlocal{two_chain(), {{}, {0b11}}};
    CHECK_THROWS_AS(from_neighbourhood(nonlocal), invalid_structure);
}

TEST_CASE("countermodel search")
{
    const auto sep = countermodel_search(logic::nef, axiom_scheme(logic::copc), 2);
    REQUIRE(sep);
    CHECK(verify_countermodel(logic::nef, axiom_scheme(logic::copc), *sep));
    CHECK(find_nframe_isomorphism(sep->model.frame(), test::two_point_frame()));

    CHECK_FALSE(countermodel_search(logic::n, axiom_scheme(logic::n), 3));

    const auto mpc = countermodel_search(logic::copc, axiom_scheme(logic::mpc), 3);
    REQUIRE(mpc);
    CHECK(verify_countermodel(logic::copc, axiom_scheme(logic::mpc), *mpc));
    CHECK(is_antitone(mpc->model.frame()));

    CHECK_THROWS_AS(countermodel_search(logic::n, formula::top(), 0), std::invalid_argument);
}

TEST_CASE("countermodel search is sound and monotone in the bound")
{
    std::mt19937 rng(99);
    for (int i = 0; i < 25; ++i) {
        const formula f = test::random_formula(rng, 3, {"p", "q"});
        for (logic l : {logic::n, logic::nef, logic::copc}) {
            const auto small = countermodel_search(l, f, 2);
            const auto large = countermodel_search(l, f, 3);
            if (small) {
                CHECK(verify_countermodel(l, f, *small));
                REQUIRE(large);
                // least witness: the larger bound finds the same one
                CHECK(large->model.frame() == small->model.frame());
                CHECK(large->world == small->world);
            }
            if (large)
                CHECK(verify_countermodel(l, f, *large));
        }
    }
}
