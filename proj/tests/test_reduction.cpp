#include "doctest.h"

#include "lamtest/reduction.hpp"

#include <set>

using namespace lamtest;

namespace {

std::vector<std::string> rules_of(const Trace& t) {
    std::vector<std::string> r;
    for (const auto& s : t.steps) r.push_back(rule_name(s.redex.rule));
    return r;
}

using Rules = std::vector<std::string>;

}  // namespace

TEST_CASE("golden traces of the worked examples") {
    auto dinf = builtin("dinf");
    auto t1 = head_converges(dinf, parse(dinf, "tau<*>((\\x y. x y) eb<{*}>)"), 100);
    CHECK(t1.converged);
    CHECK(rules_of(t1) == Rules{"beta", "tau", "tbar", "tautbar"});
    CHECK(is_eps(t1.last()));

    auto t2 = head_converges(dinf, parse(dinf, "tau<*>((\\x y. y x) eb<{*}>)"), 100);
    CHECK_FALSE(t2.converged);
    CHECK(rules_of(t2) == Rules{"beta", "tau", "tbar", "tautbar"});
    CHECK(is_zero(t2.last()));
    CHECK(t2.last()->is_test());

    auto park = builtin("park");
    auto t3 = head_converges(park, parse(park, "tau<*>(\\x. x x)"), 100);
    CHECK(t3.converged);
    CHECK(rules_of(t3) == Rules{"tau", "tbar", "tautbar", "tautbar"});

    auto norm = builtin("norm");
    auto t4 = head_converges(norm, parse(norm, "tau<p>(\\x. x)"), 100);
    CHECK(t4.converged);
    CHECK(rules_of(t4) == Rules{"tau", "tautbar"});
    auto t5 = head_converges(norm, parse(norm, "tau<q>(\\x. x)"), 100);
    CHECK_FALSE(t5.converged);
    CHECK(is_zero(t5.last()));
}

TEST_CASE("single steps of the main rules") {
    auto norm = builtin("norm");
    auto P = [&](const char* s) { return parse(norm, s); };
    CHECK(is_eps(step(norm, P("tau<p>(eb<{q}>)"), {}, Rule::TauTBar)));
    CHECK(is_zero(step(norm, P("tau<q>(eb<{p}>)"), {}, Rule::TauTBar)));
    // p = {q} -> p, so tbar_p(Q) N contracts to tbar_p(Q * tau_q(N)).
    CHECK(alpha_eq(step(norm, P("tb<p>(eps) y"), {}, Rule::TBar), P("tb<p>(tau<q>(y))")));
    CHECK(alpha_eq(step(norm, P("(\\x. x) y"), {}, Rule::Beta), P("y")));
    CHECK_THROWS_AS(step(norm, P("x y"), {}, Rule::Beta), std::invalid_argument);
    CHECK(alpha_eq(step(norm, P("tau<p>(x) * (tau<q>(y) + tau<q>(z))"), {}, Rule::ProdSum),
                   P("tau<p>(x) * tau<q>(y) + tau<p>(x) * tau<q>(z)")));
    CHECK(alpha_eq(step(norm, P("tb<p>(tau<q>(y) + tau<q>(z))"), {0}, Rule::TBarSum),
                   P("tb<p>(tau<q>(y)) + tb<p>(tau<q>(z))")));
    CHECK(is_zero(step(norm, P("tb<p>(0)"), {0}, Rule::TBarSum)));
    auto d = step(norm, P("Jg[const 1](0)"), {}, Rule::DeltaJg);
    CHECK(alpha_eq(d, app(build_G(GSpec::constant(1), 0), jg(GSpec::constant(1), 1))));

    auto dinf = builtin("dinf");
    auto r = redexes(dinf, parse(dinf, "eb<{*}> eb<{*}>"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].rule == Rule::TBar);
    CHECK(r[0].path.empty());
}

TEST_CASE("combinators reduce as in the examples") {
    auto dinf = builtin("dinf");
    auto f = var("f");
    auto t = app(combinator("Theta"), f);
    auto s1 = step(dinf, t, {0}, Rule::Beta);
    auto s2 = step(dinf, s1, {}, Rule::Beta);
    CHECK(alpha_eq(s2, app(f, t)));
    CHECK(alpha_eq(step(dinf, app(combinator("I"), var("y")), {}, Rule::Beta), var("y")));
}

TEST_CASE("head successors") {
    auto norm = builtin("norm");
    auto P = [&](const char* s) { return parse(norm, s); };
    CHECK(head_successors(norm, P("\\x. (\\y. y) x")).size() == 1);
    CHECK(head_successors(norm, P("tau<p>((\\x. x) y) + tau<q>((\\x. x) z)")).size() == 2);
    CHECK(head_successors(norm, P("tau<p>(x ((\\z. z) y))")).empty());
    // The argument of a variable headed application is not in head position.
    CHECK(head_successors(norm, P("x ((\\z. z) y)")).empty());
}

TEST_CASE("may-head-normal forms") {
    auto norm = builtin("norm");
    auto P = [&](const char* s) { return parse(norm, s); };
    CHECK(is_mhnf(P("\\x. y ((\\z. z) z)")));
    CHECK_FALSE(is_mhnf(parse(norm, "0", Sort::Term)));
    CHECK_FALSE(is_mhnf(P("0")));
    CHECK(is_mhnf(P("\\x. tb<p>(tau<q>(y)) + tb<q>(tau<p>((\\z. z) y))")));
    CHECK_FALSE(is_hnf(P("\\x. tb<p>(tau<q>(y)) + tb<q>(tau<p>((\\z. z) y))")));
    CHECK(is_hnf(P("eps")));
    CHECK(is_mhnf(P("tau<p>(x) + tau<q>((\\z. z) y)")));
    CHECK_FALSE(is_mhnf(P("tau<p>(\\x. x)")));
    CHECK_FALSE(is_mhnf(P("Jg[const 1](0)")));
}

TEST_CASE("trace serialization") {
    auto norm = builtin("norm");
    auto t = head_converges(norm, parse(norm, "tau<p>(I eb<{p}>)"), 10);
    auto text = serialize(norm, t);
    CHECK(text == "1  beta@0  tau<p>(tb<p>(eps))\n2  tautbar@root  eps\nVERDICT converged(2)\n");
    auto ex = head_converges(norm, parse(norm, "tau<q>(\\x. x)"), 10);
    auto etext = serialize(norm, ex, Format::Tsv);
    CHECK(etext.find("VERDICT\texhausted(10)") != std::string::npos);
    CHECK(serialize(norm, ex).find("no mhnf within fuel 10") != std::string::npos);
}

TEST_CASE("full parallel reduct") {
    auto norm = builtin("norm");
    auto P = [&](const char* s) { return parse(norm, s); };
    CHECK(alpha_eq(full_parallel_reduct(norm, P("x")), P("x")));
    CHECK(is_zero(full_parallel_reduct(norm, P("tau<q>(eb<{p}>)"))));
    CHECK(alpha_eq(full_parallel_reduct(norm, P("(\\x. x x) ((\\y. y) z)")), P("z z")));
    CHECK(par_reduces(norm, P("(\\x. x) (\\y. y)"), P("\\y. y")));
    auto e = P("tau<p>((\\x. x) eb<{p}>) + tau<q>(x)");
    CHECK(par_reduces(norm, e, e));
    // A flat product may be reduced as any bracketing of its factors.
    auto flat = P("(tau<p>(x) + eps) * tau<q>(y) * tau<q>(z)");
    auto grouped = P("(tau<p>(x) * tau<q>(y) + tau<q>(y)) * tau<q>(z)");
    CHECK(par_reduces(norm, flat, grouped, ParMode::Literal));
    CHECK(par_reduces(norm, flat, grouped));
    CHECK_FALSE(par_reduces(norm, flat, P("tau<p>(x) * tau<q>(y)")));
}

TEST_CASE("dead parts are erased only in the modulo mode") {
    auto norm = builtin("norm");
    auto P = [&](const char* s) { return parse(norm, s); };
    CHECK(is_zero(erase_dead(P("0 * tau<q>(x)"))));
    CHECK(alpha_eq(erase_dead(P("tb<p>(0 * tau<q>(x)) + tb<q>(eps)")), P("tb<q>(eps)")));
    // The inner prod-sum fork of this expression reaches its maximal parallel
    // reduct only once the product with a factor 0 is read as 0.
    auto e = P("(0 * tau<p>(y) + tau<q>(\\y. 0)) * tau<{q} -> q>(x x)");
    Expr f;
    for (const auto& s : full_successors(norm, e))
        if (s.redex.rule == Rule::ProdSum && s.redex.path.size() == 2) f = s.result;
    REQUIRE(f);
    auto plus = full_parallel_reduct(norm, e);
    CHECK_FALSE(par_reduces(norm, f, plus, ParMode::Literal));
    CHECK(par_reduces(norm, f, plus));
}

TEST_CASE("random terms are deterministic and canonical") {
    auto norm = builtin("norm");
    auto pool = enumerate_elements(norm, 1, 1);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto a = random_term(seed, 1 + seed % 30, norm, pool);
        auto b = random_term(seed, 1 + seed % 30, norm, pool);
        CHECK(print(norm, a) == print(norm, b));
        // Reparsing the printed form yields the same canonical expression.
        CHECK(print(norm, parse(norm, print(norm, a))) == print(norm, a));
    }
    auto one = random_term(3, 1, norm, pool, Sort::Test);
    CHECK((is_eps(one) || is_zero(one)));
    auto pure = random_term(11, 20, norm, {});
    CHECK(pure->is_term());
}

TEST_CASE("strong confluence kernel on small random expressions") {
    auto norm = builtin("norm");
    auto pool = enumerate_elements(norm, 1, 1);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto e = random_term(seed, 12, norm, pool);
        auto plus = full_parallel_reduct(norm, e);
        for (const auto& s : full_successors(norm, e))
            CHECK_MESSAGE(par_reduces(norm, s.result, plus), print(norm, e) << " via " << rule_name(s.redex.rule));
    }
}
