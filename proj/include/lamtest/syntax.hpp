#pragma once

#include "lamtest/kmodel.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lamtest {

enum class Kind {
    Var,   // term
    Lam,   // term
    App,   // term
    TSum,  // term: sum of tbar_alpha(Q), empty is the term 0
    Jg,    // term: the opaque counterexample symbol Jg[g](n)
    Hole,  // term: context hole
    Sum,   // test, empty is the test 0
    Prod,  // test, empty is eps
    Tau,   // test
};

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Summand {
    Element point;
    Expr body;  // a test
};

struct Node {
    Kind kind;
    std::string name;               // Var name or Lam binder
    Expr left;                      // Lam body, App function, Tau body
    Expr right;                     // App argument
    Element point;                  // Tau point
    std::vector<Summand> summands;  // TSum
    std::vector<Expr> children;     // Sum, Prod
    GSpec g;                        // Jg
    std::uint64_t index = 0;        // Jg numeral
    std::vector<std::string> fv;    // sorted free variables
    std::size_t size = 1;
    mutable std::string key_cache;  // alpha invariant key, filled on first use

    bool is_term() const { return kind <= Kind::Hole; }
    bool is_test() const { return !is_term(); }
    bool is_sum() const { return kind == Kind::Sum; }  // test sums, including 0
};

// Smart constructors. They maintain the canonical representation:
// nested sums and products are flattened, units are dropped, singleton
// sums and products collapse to their element, children are sorted.
Expr var(std::string name);
Expr lam(std::string binder, Expr body);
Expr lams(const std::vector<std::string>& binders, Expr body);
Expr app(Expr fn, Expr arg);
Expr apps(Expr head, const std::vector<Expr>& args);
Expr tsum(std::vector<Summand> summands);
Expr tbar(Element point, Expr test);
Expr jg(GSpec g, std::uint64_t n);
Expr hole();
Expr sum(std::vector<Expr> tests);
Expr prod(std::vector<Expr> tests);
Expr tau(Element point, Expr term);
Expr zero_term();
Expr zero_test();
Expr eps();
Expr eps_bar(const Antichain& a);
// Sum of terms that are all tbar-sums.
Expr term_sum(const std::vector<Expr>& terms);

bool is_zero(const Expr& e);  // either 0
bool is_eps(const Expr& e);
bool free_in(const std::string& x, const Expr& e);

// Combinators of the calculus.
Expr combinator(std::string_view name);  // I, S, Theta, Omega
Expr church(std::uint64_t n);
Expr build_G(const GSpec& g, std::uint64_t n);

// Capture avoiding substitution; simultaneous for the map form.
Expr subst(const Expr& e, const std::string& x, const Expr& n);
Expr subst(const Expr& e, const std::map<std::string, Expr>& sigma);
// Literal hole filling, capture permitted.
Expr fill(const Expr& context, const Expr& e);
std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid);

// Alpha invariant canonical key; equal keys iff alpha equivalent modulo
// multiset order.
std::string key(const Expr& e);
bool alpha_eq(const Expr& a, const Expr& b);

enum class Sort { Any, Term, Test };
Expr parse(const Model& m, std::string_view text, Sort expected = Sort::Any);
std::string print(const Model& m, const Expr& e);

// Judgments: "x:{e,...}, y:{...} |- M : e" or "... |- Q".
struct Judgment {
    std::vector<std::pair<std::string, Antichain>> env;
    Expr subject;
    std::optional<Element> point;  // absent for test judgments
};
Judgment parse_judgment(const Model& m, std::string_view text);
std::string print(const Model& m, const Judgment& j);

// Subterm addressing: Lam body 0, App function 0 and argument 1, Tau body 0,
// Sum and Prod child i, TSum summand i, and below a summand 0 is its test.
using Path = std::vector<int>;
std::string print_path(const Path& p);

}  // namespace lamtest
