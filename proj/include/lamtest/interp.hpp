#pragma once

#include "lamtest/reduction.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lamtest {

// Finite window onto the model: elements up to arrow depth and antichains
// up to width. The application rule guesses its antichain from it.
struct Window {
    int depth = 2;
    int width = 2;
};

// A derivation in the declarative system of intersection types for tests.
// Rule names: var, weak, sub, lam, app, tbar-sum, tau, sum, prod, and
// delta-Jg for the equation Jg(n) = G_n Jg(n+1).
struct Derivation {
    std::string rule;
    Judgment conclusion;
    std::vector<Derivation> premises;
};

struct TypeVerdict {
    std::optional<Derivation> derivation;
    std::size_t bound = 0;  // the depth searched
    bool yes() const { return derivation.has_value(); }
};

// Bounded search in the syntax directed reformulation of the type system.
// depth bounds the number of lam, app and delta-Jg nodes along a branch;
// test rules, axioms, subsumption and weakening are free. A found
// derivation is expanded into the declarative rules.
TypeVerdict derivable(const Model& m, const Judgment& j, std::size_t depth, const Window& w = {});
// Re-validates every node of a derivation against the declarative rules.
bool check_derivation(const Model& m, const Derivation& d);
std::string print(const Model& m, const Derivation& d);

using Point = std::pair<std::vector<Antichain>, Element>;
// All (a, alpha) of the window with vars : a |- M : alpha derivable.
std::set<Point> interp_points(const Model& m, const Expr& term, const std::vector<std::string>& vars,
                              const Window& w = {}, std::size_t depth = 64);

using Env = std::vector<std::pair<std::string, Antichain>>;

// tau_alpha(M[eb_a/x]) head converges within fuel; the trace is the witness.
Trace member_op(const Model& m, const Expr& term, const Env& env, const Element& alpha, std::uint64_t fuel);

// Whether derivability of env, x:a |- M : alpha and env |- M[eb_a/x] : alpha agree.
bool typed_subst_check(const Model& m, const Env& env, const std::string& x, const Antichain& a,
                       const Expr& term, const Element& alpha, std::size_t depth, const Window& w = {});

// A context C of pure lambda terms with C[M] head converging and C[N]
// exhausting its fuel, following the case analysis on head normal forms.
// Every returned context has been validated by running both fillings.
// Throws std::invalid_argument when M has no head normal form within fuel.
std::optional<Expr> separating_context(const Expr& m_term, const Expr& n_term, std::uint64_t fuel);

}  // namespace lamtest
