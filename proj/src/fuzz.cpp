#include "lamtest/fuzz.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace lamtest {

namespace {

Expr sample(const Model& m, const FuzzConfig& c, std::uint64_t s) {
    return random_term(s, 1 + s % std::max<std::size_t>(c.max_size, 1), m, c.pool);
}

void fail(SuiteReport& r, std::uint64_t seed, std::string what) {
    if (r.failing_seeds.empty() || r.failing_seeds.back() != seed) r.failing_seeds.push_back(seed);
    r.failures.push_back("seed " + std::to_string(seed) + ": " + std::move(what));
}

// Keys of the iterated maximal parallel reducts, dead parts erased.
std::vector<std::string> orbit(const Model& m, Expr e, std::size_t rounds) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k <= rounds; ++k) {
        out.push_back(key(erase_dead(e)));
        e = full_parallel_reduct(m, e);
        if (e->size > 20000) break;
    }
    return out;
}

// Scanning stops after this many seeds per requested case.
constexpr std::uint64_t kScanFactor = 50;

}  // namespace

SuiteReport confluence_suite(const Model& m, const FuzzConfig& c, std::size_t join_rounds) {
    SuiteReport r;
    r.name = "confluence";
    for (std::uint64_t s = c.seed; s < c.seed + c.count; ++s) {
        const auto e = sample(m, c, s);
        ++r.cases;
        try {
            const auto plus = full_parallel_reduct(m, e);
            const auto succ = full_successors(m, e);
            std::vector<std::vector<std::string>> orbits;
            for (const auto& f : succ) {
                ++r.checks;
                if (!par_reduces(m, f.result, plus))
                    fail(r, s, print(m, e) + " via " + rule_name(f.redex.rule) + "@" + print_path(f.redex.path) +
                                   " does not reach E+ in one parallel step");
                orbits.push_back(orbit(m, f.result, join_rounds));
            }
            for (std::size_t i = 0; i < orbits.size(); ++i)
                for (std::size_t j = i + 1; j < orbits.size(); ++j) {
                    ++r.checks;
                    std::set<std::string> a(orbits[i].begin(), orbits[i].end());
                    bool met = std::any_of(orbits[j].begin(), orbits[j].end(),
                                           [&](const std::string& k) { return a.count(k) > 0; });
                    if (!met) fail(r, s, print(m, e) + " has two reducts that do not join");
                }
        } catch (const ResourceError& ex) {
            fail(r, s, print(m, e) + ": " + ex.what());
        }
    }
    return r;
}

SuiteReport standardization_suite(const Model& m, const FuzzConfig& c, std::uint64_t full_fuel,
                                  std::uint64_t factor, std::size_t full_cap) {
    SuiteReport r;
    r.name = "standardization";
    for (std::uint64_t s = c.seed; r.cases < c.count && s < c.seed + kScanFactor * c.count; ++s) {
        const auto e = sample(m, c, s);
        const auto full = head_converges(m, e, full_fuel, Strategy::Full, full_cap);
        if (full.capped) {
            ++r.skipped;
            continue;
        }
        if (!full.converged) continue;
        ++r.cases;
        ++r.checks;
        const auto head = head_converges(m, e, factor * full_fuel);
        if (!head.converged)
            fail(r, s, print(m, e) + " reaches an mhnf in " + std::to_string(full.steps.size()) +
                           " full steps but not in " + std::to_string(factor * full_fuel) + " head steps");
    }
    return r;
}

SuiteReport invariance_suite(const Model& m, const FuzzConfig& c, std::uint64_t fuel, std::size_t cap) {
    SuiteReport r;
    r.name = "invariance";
    for (std::uint64_t s = c.seed; r.cases < c.count && s < c.seed + kScanFactor * c.count; ++s) {
        const auto e = sample(m, c, s);
        const auto h = head_converges(m, e, fuel, Strategy::Head, cap);
        if (h.capped) {
            ++r.skipped;
            continue;
        }
        if (!h.converged) continue;
        ++r.cases;
        const auto n = h.steps.size();
        for (const auto& f : full_successors(m, e)) {
            ++r.checks;
            if (!head_converges(m, f.result, n).converged)
                fail(r, s, print(m, e) + " converges in " + std::to_string(n) + " head steps but its reduct via " +
                               rule_name(f.redex.rule) + "@" + print_path(f.redex.path) + " does not");
        }
    }
    return r;
}

std::string print(const SuiteReport& r, Format f) {
    std::ostringstream out;
    if (f == Format::Tsv) {
        out << "SUITE\t" << r.name << "\tcases=" << r.cases << "\tchecks=" << r.checks << "\tskipped=" << r.skipped
            << "\tfailures=" << r.failures.size() << "\n";
        for (const auto& s : r.failing_seeds) out << "FAIL\t" << r.name << "\tseed=" << s << "\n";
    } else {
        out << r.name << ": " << r.cases << " cases, " << r.checks << " checks, " << r.skipped << " skipped, "
            << r.failures.size() << " failures\n";
        for (const auto& x : r.failures) out << "  " << x << "\n";
    }
    return out.str();
}

}  // namespace lamtest
