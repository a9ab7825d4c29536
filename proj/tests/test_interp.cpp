#include "doctest.h"

#include "lamtest/interp.hpp"

using namespace lamtest;

namespace {

Judgment J(const Model& m, const char* text) { return parse_judgment(m, text); }

// Direct reading of the interpretation of I: a -> alpha with alpha below a member of a.
bool in_identity(const Model& m, const Element& e) {
    auto [a, alpha] = unfold1(m, e);
    for (const auto& b : a)
        if (leq(m, alpha, b)) return true;
    return false;
}

}  // namespace

TEST_CASE("derivability of the spec examples") {
    auto norm = builtin("norm");
    auto v = derivable(norm, J(norm, "|- \\x. x : p"), 4);
    REQUIRE(v.yes());
    CHECK(check_derivation(norm, *v.derivation));
    CHECK(print(norm, *v.derivation).find("sub") != std::string::npos);
    CHECK_FALSE(derivable(norm, J(norm, "|- \\x. x : q"), 4).yes());
    CHECK(derivable(norm, J(norm, "x:{p}, y:{q} |- eps"), 0).yes());
    for (std::size_t d = 0; d < 6; ++d) CHECK_FALSE(derivable(norm, J(norm, "|- 0 : p"), d).yes());
    CHECK_FALSE(derivable(norm, J(norm, "|- Omega : p"), 8).yes());
}

TEST_CASE("witnesses re-check declaratively and tampering is caught") {
    auto norm = builtin("norm");
    const char* judgments[] = {
        "x:{p}, z:{q} |- x z : p",
        "x:{q}, z:{} |- tau<p>(x) * (tau<q>(x) + tau<p>(z))",
        "|- (\\x. x) eb<{q}> : p",
        "y:{q}, w:{p} |- tb<p>(tau<q>(y)) + tb<q>(eps) : p",
        "|- church(2) : {{q} -> q} -> {q} -> q",
    };
    for (const char* text : judgments) {
        auto j = J(norm, text);
        auto v = derivable(norm, j, 6);
        INFO(std::string(text));
        REQUIRE(v.yes());
        CHECK(check_derivation(norm, *v.derivation));
        CHECK(print(norm, v.derivation->conclusion) == print(norm, j));
        auto bad = *v.derivation;
        bad.conclusion.point = bad.conclusion.point ? std::optional<Element>(parse_element(norm, "{} -> q"))
                                                    : std::optional<Element>(parse_element(norm, "q"));
        CHECK_FALSE(check_derivation(norm, bad));
    }
}

TEST_CASE("tau lemma: a term has a point iff the test at that point is derivable") {
    auto norm = builtin("norm");
    auto pool = enumerate_elements(norm, 1, 1);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto m = random_term(seed, 8, norm, pool, Sort::Term);
        Env env;
        for (const auto& x : m->fv) env.emplace_back(x, Antichain{pool[seed % pool.size()]});
        for (const auto& alpha : pool) {
            auto a = derivable(norm, Judgment{env, m, alpha}, 6).yes();
            auto b = derivable(norm, Judgment{env, tau(alpha, m), std::nullopt}, 6).yes();
            CHECK(a == b);
        }
    }
}

TEST_CASE("interpretation windows") {
    auto dinf = builtin("dinf");
    auto pts = interp_points(dinf, combinator("I"), {}, Window{1, 1});
    CHECK(pts.count({{}, parse_element(dinf, "{*} -> *")}) == 1);
    for (auto model : {builtin("dinf"), builtin("norm")}) {
        const Window w{2, 2};
        auto id = interp_points(model, combinator("I"), {}, w);
        std::set<Point> oracle;
        for (const auto& e : enumerate_elements(model, w.depth, w.width))
            if (in_identity(model, e)) oracle.emplace(std::vector<Antichain>{}, e);
        CHECK(id == oracle);
        CHECK(interp_points(model, church(1), {}, w) == id);
        CHECK(interp_points(model, combinator("Omega"), {}, w).empty());
    }
    CHECK_THROWS_AS(interp_points(dinf, var("x"), {}), std::invalid_argument);
}

TEST_CASE("operational membership") {
    auto norm = builtin("norm");
    auto t = member_op(norm, combinator("I"), {}, parse_element(norm, "p"), 100);
    CHECK(t.converged);
    CHECK(t.steps.size() == 2);
    CHECK_FALSE(member_op(norm, combinator("Omega"), {}, parse_element(norm, "p"), 200).converged);
    auto p = parse_element(norm, "p");
    CHECK(member_op(norm, var("x"), {{"x", {p}}}, p, 10).converged);
}

TEST_CASE("typed substitution agrees on small cases") {
    auto norm = builtin("norm");
    auto p = parse_element(norm, "p"), q = parse_element(norm, "q");
    CHECK(typed_subst_check(norm, {}, "x", {p}, var("x"), p, 6));
    CHECK(typed_subst_check(norm, {{"y", {q}}}, "x", {p}, var("y"), p, 6));
    auto xz = app(var("x"), var("z"));
    auto a = Antichain{fold(norm, {q}, p)};
    for (const auto& alpha : enumerate_elements(norm, 2, 2))
        for (const auto& c : enumerate_antichains(norm, enumerate_elements(norm, 1, 1), 1))
            CHECK(typed_subst_check(norm, {{"z", c}}, "x", a, xz, alpha, 6));
}

TEST_CASE("separating contexts") {
    auto dinf = builtin("dinf");
    auto P = [&](const char* s) { return parse(dinf, s, Sort::Term); };
    auto check_sep = [&](const Expr& m, const Expr& n) {
        auto c = separating_context(m, n, 200);
        REQUIRE(c);
        CHECK(head_converges(dinf, fill(*c, m), 200).converged);
        CHECK_FALSE(head_converges(dinf, fill(*c, n), 200).converged);
        return *c;
    };
    // Different head variables.
    auto c1 = check_sep(P("\\x. x"), P("\\x. y"));
    CHECK(c1->kind == Kind::App);
    // Different numbers of arguments after eta expansion.
    check_sep(P("\\x. x"), P("\\x y. x y y"));
    check_sep(P("\\x y. x y y"), P("\\x. x"));
    // Same head and arity, separated inside an argument.
    check_sep(P("x (\\y. y)"), P("x (\\y. z)"));
    check_sep(P("x a (\\u v. v)"), P("x a (\\u v. u)"));
    // A diverging right side is separated by the hole itself.
    CHECK((*separating_context(P("\\x. x"), P("Omega"), 100))->kind == Kind::Hole);
    CHECK_FALSE(separating_context(P("\\x. x y"), P("\\x. x y"), 50));
    CHECK_THROWS_AS(separating_context(P("Omega"), P("\\x. x"), 50), std::invalid_argument);
}
