#include "doctest.h"

#include "lamtest/syntax.hpp"

using namespace lamtest;

namespace {

const Model& norm() {
    static const Model m = builtin("norm");
    return m;
}

Expr P(const char* text, Sort s = Sort::Any) { return parse(norm(), text, s); }

}  // namespace

TEST_CASE("parse builds the expected constructors") {
    auto id = P("\\x. x");
    REQUIRE(id->kind == Kind::Lam);
    CHECK(id->name == "x");
    CHECK(id->left->kind == Kind::Var);

    auto t = P("tau<p>(\\x.x)");
    REQUIRE(t->kind == Kind::Tau);
    CHECK(t->point == atom(norm(), "p"));
    CHECK(t->left->kind == Kind::Lam);

    auto eb = P("eb<{p}>");
    REQUIRE(eb->kind == Kind::TSum);
    REQUIRE(eb->summands.size() == 1);
    CHECK(is_eps(eb->summands[0].body));

    CHECK(P("0")->kind == Kind::Sum);
    CHECK(P("0", Sort::Term)->kind == Kind::TSum);
    CHECK(P("x 0")->right->kind == Kind::TSum);
    CHECK(P("tau<p>(x) * 0")->kind == Kind::Prod);

    CHECK_THROWS_AS(P(""), ParseError);
    CHECK_THROWS_AS(P("tau<r>(x)"), ParseError);
    CHECK_THROWS_AS(P("x * y"), ParseError);
    CHECK_THROWS_AS(P("x + y"), ParseError);
    CHECK_THROWS_AS(P("(x"), ParseError);
}

TEST_CASE("print and parse round trip") {
    const char* samples[] = {
        "\\x. x",
        "\\x y. x (y y)",
        "tau<p>(\\x. x)",
        "tau<{q} -> q>(x y) * (tau<q>(z) + tau<p>(z))",
        "tb<q>(eps) + tb<p>(tau<p>(x))",
        "(\\x. x x) (\\x. x x)",
        "Jg[const 1](3)",
        "Jg[table 2,3](0) eb<{p}>",
        "x (tb<p>(eps) + tb<q>(0))",
        "eps",
        "0",
    };
    for (auto s : samples) {
        auto e = P(s);
        auto printed = print(norm(), e);
        auto again = P(printed.c_str());
        CHECK_MESSAGE(alpha_eq(e, again), s);
        CHECK(print(norm(), again) == printed);
    }
    CHECK(print(norm(), P("Jg[const 1](3)")) == "Jg[const 1](3)");
}

TEST_CASE("alpha equivalence and multiset laws") {
    CHECK(alpha_eq(P("\\x. x"), P("\\y. y")));
    CHECK_FALSE(alpha_eq(P("\\x. \\y. x"), P("\\y. \\x. x")));
    CHECK(alpha_eq(P("tau<p>(x) + tau<q>(y)"), P("tau<q>(y) + tau<p>(x)")));
    CHECK(alpha_eq(P("tau<p>(x) + (tau<q>(y) + tau<q>(z))"), P("(tau<p>(x) + tau<q>(y)) + tau<q>(z)")));
    CHECK(alpha_eq(P("tau<p>(x) + 0"), P("tau<p>(x)")));
    CHECK(alpha_eq(P("tau<p>(x) * eps"), P("tau<p>(x)")));
    // Sum members under a binder are compared up to renaming of the binder.
    CHECK(alpha_eq(P("\\x. tb<p>(tau<p>(x) + tau<q>(y))"), P("\\z. tb<p>(tau<q>(y) + tau<p>(z))")));
    CHECK_FALSE(alpha_eq(P("tau<p>(x)"), P("tau<q>(x)")));
}

TEST_CASE("capture avoiding substitution") {
    CHECK(alpha_eq(subst(P("\\y. x"), "x", P("z")), P("\\y. z")));
    auto r = subst(P("\\z. x"), "x", P("z"));
    REQUIRE(r->kind == Kind::Lam);
    CHECK(r->name != "z");
    CHECK(alpha_eq(r, P("\\w. z")));
    auto eb = eps_bar({atom(norm(), "p")});
    CHECK(alpha_eq(subst(P("tau<q>(x y)"), "x", eb), tau(atom(norm(), "q"), app(eb, var("y")))));
    // Bound occurrences are untouched.
    CHECK(alpha_eq(subst(P("\\x. x"), "x", P("y")), P("\\x. x")));
    // Simultaneous substitution does not substitute into the replacement.
    std::map<std::string, Expr> sigma{{"x", var("y")}, {"y", var("x")}};
    CHECK(alpha_eq(subst(P("x y"), sigma), P("y x")));
}

TEST_CASE("substitution is compositional") {
    // (M[N/x])[L/y] = M[L/y][N[L/y]/x] when x is not free in L and x != y.
    const char* ms[] = {"\\z. x (y z)", "x y", "tb<p>(tau<q>(x) * tau<p>(y))", "\\y. x y", "\\x. y x"};
    const char* ns[] = {"y", "\\w. w y", "z"};
    const char* ls[] = {"z", "\\u. u", "w z"};
    for (auto m : ms)
        for (auto n : ns)
            for (auto l : ls) {
                auto M = P(m), N = P(n), L = P(l);
                auto lhs = subst(subst(M, "x", N), "y", L);
                auto rhs = subst(subst(M, "y", L), "x", subst(N, "y", L));
                CHECK_MESSAGE(alpha_eq(lhs, rhs), m << " " << n << " " << l);
                auto fv = subst(M, "x", N)->fv;
                for (const auto& v : fv) CHECK(((free_in(v, M) && v != "x") || free_in(v, N)));
            }
}

TEST_CASE("combinators and the counterexample family") {
    CHECK(alpha_eq(combinator("I"), P("\\x. x")));
    CHECK(alpha_eq(church(0), P("\\f x. x")));
    CHECK(alpha_eq(church(2), P("\\f x. f (f x)")));
    CHECK(alpha_eq(combinator("S"), P("\\u f x. u f (f x)")));
    CHECK(alpha_eq(combinator("Omega"), P("(\\x. x x) (\\y. y y)")));
    CHECK_THROWS(combinator("K"));

    CHECK(alpha_eq(build_G(GSpec::constant(1), 0), P("\\u e x1. e (u x1)")));
    CHECK(alpha_eq(build_G(GSpec::constant(0), 4), P("\\u e. e")));
    auto g = build_G(GSpec::from_table({2, 3}), 1);
    int binders = 0;
    for (Expr e = g; e->kind == Kind::Lam; e = e->left) ++binders;
    CHECK(binders == 5);
    CHECK(g->fv.empty());
}

TEST_CASE("hole filling is literal") {
    auto c = P("(\\y. []) w");
    auto filled = fill(c, var("y"));
    CHECK(alpha_eq(filled, P("(\\y. y) w")));
}

TEST_CASE("judgments") {
    auto j = parse_judgment(norm(), "x:{p, q}, y:{} |- x y : p");
    REQUIRE(j.env.size() == 2);
    CHECK(j.env[0].second == Antichain{atom(norm(), "q")});
    CHECK(j.env[1].second.empty());
    CHECK(j.point == atom(norm(), "p"));
    auto t = parse_judgment(norm(), "|- eps");
    CHECK_FALSE(t.point);
    CHECK(is_eps(t.subject));
    CHECK_THROWS_AS(parse_judgment(norm(), "|- x : p"), ParseError);
    CHECK_THROWS_AS(parse_judgment(norm(), "x : p"), ParseError);
    CHECK(print(norm(), j) == "x:{q}, y:{} |- x y : p");
}
