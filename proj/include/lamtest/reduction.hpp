#pragma once

#include "lamtest/syntax.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lamtest {

// Rules of the calculus. The order is the tie-break order used by the
// breadth-first searches.
enum class Rule { Beta, TBar, Tau, TauTBar, ProdSum, TBarSum, DeltaJg };

std::string rule_name(Rule r);  // beta, tbar, tau, tautbar, prod-sum, tbar-sum, delta-Jg

struct Redex {
    Path path;
    Rule rule;
    auto operator<=>(const Redex& o) const {
        if (auto c = rule <=> o.rule; c != 0) return c;
        return path <=> o.path;
    }
    bool operator==(const Redex&) const = default;
};

struct Successor {
    Redex redex;
    Expr result;
};

// Every redex under the free contextual closure, sorted by (rule, path).
std::vector<Redex> redexes(const Model& m, const Expr& e);
// Contract the redex at path. Throws std::invalid_argument when the rule
// does not apply there.
Expr step(const Model& m, const Expr& e, const Path& path, Rule rule);
std::vector<Successor> full_successors(const Model& m, const Expr& e);
// One step head reduction; the relation may branch on sums and products.
std::vector<Successor> head_successors(const Model& m, const Expr& e);

bool is_hnf(const Expr& e);
bool is_mhnf(const Expr& e);

enum class Strategy { Head, Full };

struct TraceStep {
    Redex redex;
    Expr result;
};

struct Trace {
    Expr start;
    std::vector<TraceStep> steps;
    bool converged = false;
    std::uint64_t fuel = 0;
    bool capped = false;  // the state cap stopped the search early
    std::size_t states = 0;
    Expr last() const { return steps.empty() ? start : steps.back().result; }
};

// Breadth-first search for a may-head-normal form within fuel steps. On
// success the trace is a shortest witness. Otherwise the trace follows the
// first state of the deepest explored level. A cap of 0 uses max_states().
Trace head_converges(const Model& m, const Expr& e, std::uint64_t fuel, Strategy s = Strategy::Head,
                     std::size_t cap = 0);

// The state cap read from LAMTEST_MAX_STATES, default 200000.
std::size_t max_states();

enum class Format { Human, Tsv };
std::string serialize(const Model& m, const Trace& t, Format f = Format::Human);

// Maximal parallel reduct.
Expr full_parallel_reduct(const Model& m, const Expr& e);
// All one step parallel reducts, bounded by cap (ResourceError beyond it).
std::vector<Expr> parallel_reducts(const Model& m, const Expr& e, std::size_t cap = 200000);
// Literal compares reducts syntactically. ModuloDead first erases dead
// parts: a product with a factor 0 becomes 0 (one distribution step) and
// tbar summands over 0 are dropped (one tbar-sum step).
enum class ParMode { Literal, ModuloDead };
Expr erase_dead(const Expr& e);
bool par_reduces(const Model& m, const Expr& e, const Expr& f, ParMode mode = ParMode::ModuloDead);

// Deterministic generator of canonical expressions for property tests.
// With an empty pool only pure lambda terms are produced.
Expr random_term(std::uint64_t seed, std::size_t size, const Model& m, const std::vector<Element>& pool,
                 Sort sort = Sort::Any);

}  // namespace lamtest
