#pragma once

#include "lamtest/interp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lamtest {

// A chain alpha_0, alpha_1, ... with alpha_{n+1} in the slot-th antichain of
// the g(n)-fold unfolding of alpha_n. A lasso closes the chain:
// chain[start + period] is chain[start] renamed by the model's shift
// automorphism applied `shift` times (0 for an exact repetition).
struct ChainWitness {
    struct Lasso {
        std::size_t start = 0;
        std::size_t period = 0;
        std::size_t shift = 0;
    };
    std::vector<Element> chain;
    std::vector<std::size_t> slots;  // one per consecutive pair, 1-based
    std::optional<Lasso> lasso;
    GSpec g;
};

// Whether every consecutive pair of the chain satisfies the hyperimmunity
// condition for g. Throws ResourceError when an unfolding leaves the window.
bool check_condition(const Model& m, const GSpec& g, const std::vector<Element>& chain);

// The chain extended by `times` further periods of its lasso.
std::vector<Element> unroll(const Model& m, const ChainWitness& w, std::size_t times);

// Depth-first search for a lasso over chains of at most depth steps, rooted
// at the atoms or at the given start set. nullopt means no witness within
// the window. Lassos are accepted only where g is constant over the cycle.
std::optional<ChainWitness> probe(const Model& m, const GSpec& g, std::size_t depth,
                                  const std::optional<std::vector<Element>>& start = std::nullopt);

struct HfProbe {
    std::optional<ChainWitness> witness;  // a chain of depth steps from a0_1
    bool pointwise = false;               // g(n) >= f(n) + 1 for every n < depth
};
// Probe of the model H^f with the given f table, started at a0_1. The chain
// elements never repeat, so a witness is a chain reaching the full depth.
HfProbe probe_hf(const std::vector<std::uint64_t>& f, const GSpec& g, std::size_t depth);

struct ShiftCycle {
    std::size_t first = 0;   // trace positions of the two related states
    std::size_t second = 0;
    std::uint64_t period = 0;  // increase of the Jg numerals
};

// The first pair of states on the trace that are equal once every Jg
// numeral of the earlier one is increased by the same positive amount.
std::optional<ShiftCycle> find_shift_cycle(const Trace& t);

struct CounterexampleReport {
    ChainWitness witness;
    Trace i_trace;   // tau_a0(I eb_{a0})
    Trace jg_trace;  // tau_a0(Jg(0) eb_{a0})
    std::optional<ShiftCycle> cycle;
};

// Throws std::invalid_argument when probe finds no witness from alpha0.
CounterexampleReport run_counterexample(const Model& m, const GSpec& g, const Element& alpha0,
                                        std::uint64_t fuel, std::size_t probe_depth = 10);
std::string print(const Model& m, const CounterexampleReport& r, Format f = Format::Human);

// The right-hand side of the Jg unfolding lemma, built from unfoldings of
// alpha and the members of b.
Expr cefact_rhs(const Model& m, const GSpec& g, std::uint64_t n, const Element& alpha, const Antichain& b);
// Head reduction of tau_alpha(Jg(n) eb_b) up to the root tau-tbar step.
// Throws std::logic_error when the reached test differs from cefact_rhs.
Trace cefact_trace(const Model& m, const GSpec& g, std::uint64_t n, const Element& alpha, const Antichain& b);

struct JgWindowResult {
    bool ok = true;
    std::size_t pairs = 0;
    std::size_t converged = 0;
    std::vector<std::string> mismatches;
};
// On D-infinity: tau_alpha(Jg(n) eb_{a0}) converges within fuel iff some
// member of a0 dominates alpha, for every alpha and a0 of the window.
JgWindowResult jg_identity_window(const GSpec& g, std::uint64_t n, const Window& w, std::uint64_t fuel);

}  // namespace lamtest
