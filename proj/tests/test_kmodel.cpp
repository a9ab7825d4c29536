#include "doctest.h"

#include "lamtest/kmodel.hpp"

using namespace lamtest;

namespace {

Element E(const Model& m, const char* text) { return parse_element(m, text); }

}  // namespace

TEST_CASE("leq on built-in models") {
    auto norm = builtin("norm");
    CHECK(leq(norm, E(norm, "p"), E(norm, "q")));
    CHECK_FALSE(leq(norm, E(norm, "q"), E(norm, "p")));

    auto dinf = builtin("dinf");
    // * = {} -> * and {*} dominates the empty antichain.
    CHECK(leq(dinf, E(dinf, "{*} -> *"), E(dinf, "*")));
    CHECK_FALSE(leq(dinf, E(dinf, "*"), E(dinf, "{*} -> *")));

    auto park = builtin("park");
    CHECK(leq(park, E(park, "*"), E(park, "*")));
}

TEST_CASE("antichain_leq and normalize_antichain") {
    auto norm = builtin("norm");
    auto p = E(norm, "p"), q = E(norm, "q");
    CHECK(antichain_leq(norm, {}, {q}));
    CHECK(antichain_leq(norm, {p}, {q}));
    CHECK_FALSE(antichain_leq(norm, {q}, {p}));
    CHECK(normalize_antichain(norm, {p, q}) == Antichain{q});
    CHECK(normalize_antichain(norm, {p}) == Antichain{p});
    CHECK(normalize_antichain(norm, {}).empty());

    auto dinf = builtin("dinf");
    CHECK_FALSE(antichain_leq(dinf, {E(dinf, "*")}, {}));
}

TEST_CASE("fold and unfold") {
    auto dinf = builtin("dinf");
    auto star = E(dinf, "*");
    CHECK(fold(dinf, {}, star) == star);
    auto arrow = fold(dinf, {star}, star);
    CHECK_FALSE(arrow.is_atom());
    CHECK(print(dinf, arrow) == "{*} -> *");

    auto park = builtin("park");
    CHECK(fold(park, {E(park, "*")}, E(park, "*")).is_atom());
    auto [heads, tail] = unfold(park, E(park, "*"), 4);
    CHECK(heads.size() == 4);
    for (const auto& h : heads) CHECK(h == Antichain{E(park, "*")});
    CHECK(tail == E(park, "*"));

    auto norm = builtin("norm");
    auto [h1, t1] = unfold(norm, E(norm, "p"), 1);
    CHECK(h1 == std::vector<Antichain>{{E(norm, "q")}});
    CHECK(t1 == E(norm, "p"));
    auto [h0, t0] = unfold(norm, E(norm, "q"), 0);
    CHECK(h0.empty());
    CHECK(t0 == E(norm, "q"));
}

TEST_CASE("hf unfolding puts the next level after f(n) empty antichains") {
    BuiltinParams params;
    params.f = {2};
    params.levels = 3;
    auto hf = builtin("hf", params);
    auto [heads, tail] = unfold(hf, E(hf, "a1_1"), 3);
    REQUIRE(heads.size() == 3);
    CHECK(heads[0].empty());
    CHECK(heads[1].empty());
    CHECK(heads[2] == Antichain{E(hf, "a2_1")});
    CHECK(tail == E(hf, "*"));
    // The top level references a level that is not materialized.
    CHECK_THROWS_AS(unfold(hf, E(hf, "a3_1"), 3), ResourceError);
}

TEST_CASE("builtins match the example definitions") {
    auto omega = builtin("omega");
    CHECK(omega.atom_count() == 6);
    auto [h, t] = unfold1(omega, E(omega, "3"));
    CHECK(h == Antichain{E(omega, "0"), E(omega, "1"), E(omega, "2")});
    CHECK(t == E(omega, "3"));

    BuiltinParams z;
    z.lo = -2;
    z.hi = 2;
    auto zed = builtin("zed", z);
    auto [hz, tz] = unfold1(zed, E(zed, "0"));
    CHECK(hz == Antichain{E(zed, "1")});
    CHECK(tz == E(zed, "0"));
    CHECK_THROWS_AS(unfold1(zed, E(zed, "2")), ResourceError);

    CHECK_THROWS(builtin("nosuch"));
    CHECK_THROWS(builtin("hf"));
}

TEST_CASE("load_model validates the K-model invariants") {
    const char* norm_text =
        "# Norm\n"
        "atoms: p q\n"
        "order: p < q\n"
        "arrow: {p} q = q\n"
        "arrow: {q} p = p\n";
    CHECK(load_model(norm_text) == builtin("norm"));

    CHECK_THROWS_AS(load_model("atoms: p q\narrow: {} p = p\n"), ModelError);
    CHECK_THROWS_AS(load_model("atoms: p q\norder: p < q\norder: q < p\narrow: {} p = p\narrow: {} q = q\n"),
                    ModelError);
    // Two distinct domain points with the same image.
    CHECK_THROWS_AS(load_model("atoms: p\narrow: {} p = p\narrow: {p} p = p\n"), ModelError);
    // p < q in the base order but the preimages are ordered the other way.
    CHECK_THROWS_AS(load_model("atoms: p q\norder: p < q\narrow: {} p = q\narrow: {} q = p\n"), ModelError);
    CHECK_THROWS_AS(load_model("atoms: p\nbogus line\n"), ParseError);
}

TEST_CASE("enumerate_elements") {
    auto norm = builtin("norm");
    CHECK(enumerate_elements(norm, 0, 2) == std::vector<Element>{E(norm, "p"), E(norm, "q")});

    auto dinf = builtin("dinf");
    auto d1 = enumerate_elements(dinf, 1, 1);
    CHECK(d1 == std::vector<Element>{E(dinf, "*"), E(dinf, "{*} -> *")});
    CHECK(enumerate_elements(dinf, 2, 2).size() == 6);

    // Norm at depth 1 width 1: p, q, {} -> p, {} -> q, {p} -> p, {q} -> q.
    CHECK(enumerate_elements(norm, 1, 1).size() == 6);
}

TEST_CASE("order laws on enumerated windows") {
    for (auto name : {"dinf", "park", "norm"}) {
        auto m = builtin(name);
        auto pool = enumerate_elements(m, 2, 2);
        for (const auto& a : pool) {
            CHECK(leq(m, a, a));
            auto [h, t] = unfold1(m, a);
            CHECK(fold(m, h, t) == a);
            for (const auto& b : pool) {
                if (a != b && leq(m, a, b)) CHECK_FALSE(leq(m, b, a));
                if (!a.is_atom() && !b.is_atom())
                    CHECK(leq(m, a, b) == (antichain_leq(m, b.head(), a.head()) && leq(m, a.tail(), b.tail())));
            }
        }
        // Transitivity on a smaller slice keeps the cubic loop cheap.
        auto small = enumerate_elements(m, 1, 2);
        for (const auto& a : small)
            for (const auto& b : small)
                for (const auto& c : small)
                    if (leq(m, a, b) && leq(m, b, c)) CHECK(leq(m, a, c));
    }
}

TEST_CASE("GSpec parsing and evaluation") {
    auto g = parse_gspec("table 2,3");
    CHECK(g(0) == 2);
    CHECK(g(1) == 3);
    CHECK(g(7) == 3);
    CHECK(g.str() == "table 2,3");
    CHECK(parse_gspec("affine 2 1")(3) == 7);
    CHECK(parse_gspec("const 1")(100) == 1);
    CHECK_THROWS(parse_gspec("sqrt 2"));
}
