#pragma once

#include "lamtest/reduction.hpp"

#include <string>
#include <vector>

namespace lamtest {

// Random expressions are random_term(s, 1 + s % max_size, model, pool) for
// consecutive seeds s starting at seed.
struct FuzzConfig {
    std::size_t count = 100;
    std::uint64_t seed = 0;
    std::size_t max_size = 30;
    std::vector<Element> pool;
};

struct SuiteReport {
    std::string name;
    std::size_t cases = 0;    // expressions that entered the suite
    std::size_t checks = 0;   // individual property checks
    std::size_t skipped = 0;  // expressions whose selection search hit its state cap
    std::vector<std::uint64_t> failing_seeds;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// Every one-step reduct F of E satisfies F =>par E+ (modulo dead parts), and
// every two reducts meet after at most `join_rounds` iterations of the
// maximal parallel reduct.
SuiteReport confluence_suite(const Model& m, const FuzzConfig& c, std::size_t join_rounds = 10);

// Expressions whose full-strategy search reaches an mhnf within full_fuel
// steps; head reduction must reach one within factor * full_fuel steps.
// Expressions whose full search exceeds full_cap states are skipped.
SuiteReport standardization_suite(const Model& m, const FuzzConfig& c, std::uint64_t full_fuel = 20,
                                  std::uint64_t factor = 4, std::size_t full_cap = 20000);

// Expressions with a head mhnf within fuel steps, n the length of the
// shortest one; every one-step reduct must head converge within n steps.
// Expressions whose selection search exceeds cap states are skipped.
SuiteReport invariance_suite(const Model& m, const FuzzConfig& c, std::uint64_t fuel = 30, std::size_t cap = 20000);

std::string print(const SuiteReport& r, Format f = Format::Human);

}  // namespace lamtest
