#include "doctest.h"

#include "lamtest/hyper.hpp"

#include <random>

using namespace lamtest;

namespace {

std::vector<Element> atoms_of(const Model& m, std::initializer_list<const char*> names) {
    std::vector<Element> out;
    for (const char* n : names) out.push_back(atom(m, n));
    return out;
}

std::vector<std::string> rules_of(const Trace& t) {
    std::vector<std::string> r;
    for (const auto& s : t.steps) r.push_back(rule_name(s.redex.rule));
    return r;
}

}  // namespace

TEST_CASE("hyperimmunity condition on the example chains") {
    const auto g1 = GSpec::constant(1);
    auto park = builtin("park");
    CHECK(check_condition(park, g1, atoms_of(park, {"*", "*", "*"})));
    auto norm = builtin("norm");
    CHECK(check_condition(norm, g1, atoms_of(norm, {"p", "q", "p"})));
    CHECK_FALSE(check_condition(norm, g1, atoms_of(norm, {"p", "p"})));
    auto dinf = builtin("dinf");
    CHECK_FALSE(check_condition(dinf, g1, atoms_of(dinf, {"*", "*"})));
    CHECK_THROWS_AS(check_condition(dinf, g1, {}), std::invalid_argument);
    auto zed = builtin("zed");
    CHECK_THROWS_AS(check_condition(zed, g1, atoms_of(zed, {"5", "5"})), ResourceError);
}

TEST_CASE("probe classifies the built-in models") {
    const auto g1 = GSpec::constant(1);
    struct Case {
        const char* model;
        std::size_t depth;
        std::optional<std::size_t> period;
    };
    for (const Case c : {Case{"park", 3, 1}, Case{"norm", 4, 2}, Case{"zed", 10, 1}, Case{"dinf", 10, {}},
                         Case{"omega", 10, {}}}) {
        INFO(c.model);
        auto m = builtin(c.model);
        auto w = probe(m, g1, c.depth);
        REQUIRE(w.has_value() == c.period.has_value());
        if (!w) continue;
        CHECK(w->lasso->period == *c.period);
        CHECK(w->slots.size() + 1 == w->chain.size());
        // The witness re-validates over its prefix and two unrollings.
        CHECK(check_condition(m, g1, w->chain));
        CHECK(check_condition(m, g1, unroll(m, *w, 2)));
    }
    auto zed = builtin("zed");
    CHECK(probe(zed, g1, 10)->lasso->shift == 1);
    // Affine g never closes a lasso, even with slope zero.
    CHECK_FALSE(probe(builtin("park"), GSpec::affine(0, 1), 6));
    // A table closes a lasso only inside its repeated tail.
    auto t = probe(builtin("norm"), GSpec::from_table({3, 1}), 6);
    REQUIRE(t);
    CHECK(t->lasso->start >= 1);
}

TEST_CASE("lassos from arrow elements descend to base atoms") {
    const auto g1 = GSpec::constant(1);
    for (const char* name : {"park", "norm", "zed", "dinf", "omega"}) {
        auto m = builtin(name);
        for (const auto& e : enumerate_elements(m, 1, 1)) {
            if (e.is_atom()) continue;
            std::optional<ChainWitness> w;
            try {
                w = probe(m, g1, 8, std::vector<Element>{e});
            } catch (const ResourceError&) {
                continue;
            }
            if (!w) continue;
            INFO(name << " from " << print(m, e));
            for (std::size_t i = w->lasso->start; i < w->chain.size(); ++i) CHECK(w->chain[i].is_atom());
        }
    }
}

TEST_CASE("probe of H^f against the pointwise comparison") {
    auto ones = probe_hf({1}, GSpec::constant(2), 5);
    CHECK(ones.witness);
    CHECK(ones.pointwise);
    CHECK(ones.witness->chain.size() == 6);
    CHECK_FALSE(probe_hf({5}, GSpec::constant(2), 5).witness);
    CHECK_FALSE(probe_hf({1, 2, 3}, GSpec::from_table({1, 2, 3}), 4).witness);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        std::vector<std::uint64_t> f, g;
        for (int k = 0; k < 5; ++k) {
            f.push_back(rng() % 3);
            g.push_back(rng() % 4);
        }
        auto r = probe_hf(f, GSpec::from_table(g), 5);
        CHECK(r.witness.has_value() == r.pointwise);
    }
}

TEST_CASE("counterexample runs on the non-hyperimmune models") {
    const auto g1 = GSpec::constant(1);
    for (const auto& [name, period] : {std::pair{"norm", 2}, std::pair{"park", 1}}) {
        INFO(name);
        auto m = builtin(name);
        auto r = run_counterexample(m, g1, Element::atom(0), 2000);
        CHECK(r.i_trace.converged);
        CHECK(rules_of(r.i_trace) == std::vector<std::string>{"beta", "tautbar"});
        CHECK_FALSE(r.jg_trace.converged);
        REQUIRE(r.cycle);
        CHECK(r.cycle->period == static_cast<std::uint64_t>(period));
        auto text = print(m, r);
        for (const char* section : {"WITNESS", "I-TRACE", "JG-VERDICT", "SHIFT-CYCLE"})
            CHECK(text.find(section) != std::string::npos);
        // No late convergence when the fuel grows.
        CHECK_FALSE(run_counterexample(m, g1, Element::atom(0), 4000).jg_trace.converged);
    }
    CHECK_THROWS_AS(run_counterexample(builtin("dinf"), g1, Element::atom(0), 100), std::invalid_argument);
}

TEST_CASE("cefact replay") {
    const auto g1 = GSpec::constant(1);
    auto norm = builtin("norm");
    auto p = atom(norm, "p"), q = atom(norm, "q");
    for (std::uint64_t n = 0; n < 3; ++n) {
        auto t = cefact_trace(norm, g1, n, p, {p});
        CHECK(rules_of(t) == std::vector<std::string>{"delta-Jg", "beta", "beta", "tau", "tbar", "tautbar"});
        CHECK(alpha_eq(t.last(), tau(q, app(jg(g1, n + 1), eps_bar({q})))));
    }
    CHECK(is_zero(cefact_trace(norm, g1, 0, p, {}).last()));
    auto dinf = builtin("dinf");
    auto t = cefact_trace(dinf, g1, 0, parse_element(dinf, "{*} -> *"), {atom(dinf, "*")});
    CHECK(is_eps(t.last()));
    // Two arguments are fed and two tbar steps follow.
    auto g2 = GSpec::constant(2);
    auto t2 = cefact_trace(norm, g2, 0, p, {p, q});
    CHECK(rules_of(t2).size() == 3 + 2 + 2 + 1);
}

TEST_CASE("Jg behaves as the identity on the D-infinity window") {
    auto r = jg_identity_window(GSpec::constant(1), 0, {2, 2}, 5000);
    CHECK(r.ok);
    CHECK(r.converged > 0);
    CHECK(r.converged < r.pairs);
    CHECK(jg_identity_window(GSpec::from_table({2, 1}), 0, {1, 2}, 2000).ok);
}
