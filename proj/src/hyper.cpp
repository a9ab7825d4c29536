#include "lamtest/hyper.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lamtest {

bool check_condition(const Model& m, const GSpec& g, const std::vector<Element>& chain) {
    if (chain.empty()) throw std::invalid_argument("empty chain");
    for (std::size_t n = 0; n + 1 < chain.size(); ++n) {
        auto [heads, rest] = unfold(m, chain[n], g(n));
        bool found = false;
        for (const auto& a : heads)
            if (std::find(a.begin(), a.end(), chain[n + 1]) != a.end()) found = true;
        if (!found) return false;
    }
    return true;
}

namespace {

Element shifted(const Model& m, Element e, std::size_t times) {
    for (std::size_t i = 0; i < times; ++i) e = rename_atoms(m, e, *m.shift());
    return e;
}

// g is constant on every index the lasso revisits.
bool phase_ok(const GSpec& g, std::size_t start) {
    if (g.kind == GSpec::Kind::Affine) return false;
    return g.constant_from(start);
}

}  // namespace

std::vector<Element> unroll(const Model& m, const ChainWitness& w, std::size_t times) {
    auto chain = w.chain;
    if (!w.lasso) return chain;
    const auto& l = *w.lasso;
    for (std::size_t t = 0; t < times; ++t)
        for (std::size_t i = 0; i < l.period; ++i) {
            const std::size_t src = chain.size() - l.period;
            chain.push_back(shifted(m, chain[src], l.shift));
        }
    return chain;
}

namespace {

struct ChainSearch {
    const Model& m;
    const GSpec& g;
    std::size_t depth;
    bool full_depth_wins;  // accept a chain of depth steps without a lasso
    bool exceeded = false;
    std::vector<Element> chain;
    std::vector<std::size_t> slots;

    std::optional<ChainWitness::Lasso> closes() const {
        const std::size_t n = chain.size() - 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!phase_ok(g, i)) continue;
            if (chain[n] == chain[i]) return ChainWitness::Lasso{i, n - i, 0};
            if (!m.shift()) continue;
            Element e = chain[i];
            for (int s = 1; s < m.atom_count(); ++s) {
                try {
                    e = rename_atoms(m, e, *m.shift());
                } catch (const ResourceError&) {
                    break;
                }
                if (e == chain[n]) return ChainWitness::Lasso{i, n - i, static_cast<std::size_t>(s)};
            }
        }
        return std::nullopt;
    }

    std::optional<ChainWitness> dfs() {
        const std::size_t n = chain.size() - 1;
        if (n > 0)
            if (auto l = closes()) return ChainWitness{chain, slots, l, g};
        if (n == depth) {
            if (full_depth_wins) return ChainWitness{chain, slots, std::nullopt, g};
            return std::nullopt;
        }
        std::vector<Antichain> heads;
        try {
            heads = unfold(m, chain[n], g(n)).first;
        } catch (const ResourceError&) {
            exceeded = true;
            return std::nullopt;
        }
        std::vector<Element> tried;
        for (std::size_t k = 0; k < heads.size(); ++k)
            for (const auto& next : heads[k]) {
                if (std::find(tried.begin(), tried.end(), next) != tried.end()) continue;
                tried.push_back(next);
                chain.push_back(next);
                slots.push_back(k + 1);
                auto r = dfs();
                chain.pop_back();
                slots.pop_back();
                if (r) return r;
            }
        return std::nullopt;
    }
};

std::optional<ChainWitness> search(const Model& m, const GSpec& g, std::size_t depth,
                                   const std::vector<Element>& roots, bool full_depth_wins) {
    if (depth < 1) throw std::invalid_argument("probe depth must be at least 1");
    ChainSearch s{m, g, depth, full_depth_wins, false, {}, {}};
    for (const auto& r : roots) {
        s.chain = {r};
        s.slots.clear();
        if (auto w = s.dfs()) return w;
    }
    if (s.exceeded) throw ResourceError("probe left the materialized window of model " + m.name());
    return std::nullopt;
}

}  // namespace

std::optional<ChainWitness> probe(const Model& m, const GSpec& g, std::size_t depth,
                                  const std::optional<std::vector<Element>>& start) {
    std::vector<Element> roots;
    if (start) roots = *start;
    else
        for (int i = 0; i < m.atom_count(); ++i) roots.push_back(Element::atom(i));
    return search(m, g, depth, roots, false);
}

HfProbe probe_hf(const std::vector<std::uint64_t>& f, const GSpec& g, std::size_t depth) {
    BuiltinParams p;
    p.f = f;
    p.levels = static_cast<long>(depth);
    auto m = builtin("hf", p);
    HfProbe r;
    r.witness = search(m, g, depth, {atom(m, "a0_1")}, true);
    r.pointwise = true;
    for (std::size_t n = 0; n < depth; ++n) {
        const auto fn = n < f.size() ? f[n] : f.back();
        if (g(n) < fn + 1) r.pointwise = false;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Counterexample

namespace {

Expr map_numerals(const Expr& e, const std::function<std::uint64_t(std::uint64_t)>& f) {
    switch (e->kind) {
        case Kind::Var:
        case Kind::Hole: return e;
        case Kind::Jg: return jg(e->g, f(e->index));
        case Kind::Lam: return lam(e->name, map_numerals(e->left, f));
        case Kind::App: return app(map_numerals(e->left, f), map_numerals(e->right, f));
        case Kind::Tau: return tau(e->point, map_numerals(e->left, f));
        case Kind::TSum: {
            std::vector<Summand> s;
            for (const auto& x : e->summands) s.push_back({x.point, map_numerals(x.body, f)});
            return tsum(std::move(s));
        }
        case Kind::Sum:
        case Kind::Prod: {
            std::vector<Expr> c;
            for (const auto& x : e->children) c.push_back(map_numerals(x, f));
            return e->kind == Kind::Sum ? sum(std::move(c)) : prod(std::move(c));
        }
    }
    return e;
}

std::optional<std::uint64_t> min_numeral(const Expr& e) {
    std::optional<std::uint64_t> best;
    std::function<void(const Expr&)> go = [&](const Expr& x) {
        if (x->kind == Kind::Jg) best = best ? std::min(*best, x->index) : x->index;
        for (const auto& c : {x->left, x->right})
            if (c) go(c);
        for (const auto& c : x->children) go(c);
        for (const auto& s : x->summands) go(s.body);
    };
    go(e);
    return best;
}

}  // namespace

std::optional<ShiftCycle> find_shift_cycle(const Trace& t) {
    std::vector<Expr> states{t.start};
    for (const auto& s : t.steps) states.push_back(s.result);
    std::map<std::string, std::vector<std::size_t>> by_shape;
    for (std::size_t j = 0; j < states.size(); ++j) {
        const auto nj = min_numeral(states[j]);
        if (!nj) continue;
        auto shape = key(map_numerals(states[j], [](std::uint64_t) { return std::uint64_t{0}; }));
        auto& earlier = by_shape[shape];
        for (auto i : earlier) {
            const auto ni = *min_numeral(states[i]);
            if (*nj <= ni) continue;
            const auto d = *nj - ni;
            if (key(map_numerals(states[i], [d](std::uint64_t n) { return n + d; })) == key(states[j]))
                return ShiftCycle{i, j, d};
        }
        earlier.push_back(j);
    }
    return std::nullopt;
}

CounterexampleReport run_counterexample(const Model& m, const GSpec& g, const Element& alpha0,
                                        std::uint64_t fuel, std::size_t probe_depth) {
    auto w = probe(m, g, probe_depth, std::vector<Element>{alpha0});
    if (!w) throw std::invalid_argument("no hyperimmunity witness starts at " + print(m, alpha0));
    CounterexampleReport r;
    r.witness = *w;
    const Expr arg = eps_bar({alpha0});
    r.i_trace = head_converges(m, tau(alpha0, app(combinator("I"), arg)), fuel);
    r.jg_trace = head_converges(m, tau(alpha0, app(jg(g, 0), arg)), fuel);
    if (!r.jg_trace.converged) r.cycle = find_shift_cycle(r.jg_trace);
    return r;
}

std::string print(const Model& m, const CounterexampleReport& r, Format f) {
    const std::string sep = f == Format::Tsv ? "\t" : "  ";
    std::ostringstream out;
    out << "WITNESS" << sep << "g=" << r.witness.g.str() << sep << "chain=";
    for (std::size_t i = 0; i < r.witness.chain.size(); ++i)
        out << (i ? "," : "") << print(m, r.witness.chain[i]);
    if (r.witness.lasso)
        out << sep << "lasso=" << r.witness.lasso->start << "+" << r.witness.lasso->period
            << sep << "shift=" << r.witness.lasso->shift;
    out << "\nI-TRACE\n" << serialize(m, r.i_trace, f);
    out << "JG-VERDICT" << sep << "fuel=" << r.jg_trace.fuel << sep
        << (r.jg_trace.converged ? "converged(" + std::to_string(r.jg_trace.steps.size()) + ")" : "exhausted")
        << sep << "states=" << r.jg_trace.states << (r.jg_trace.capped ? sep + "capped" : "") << "\n";
    if (r.cycle)
        out << "SHIFT-CYCLE" << sep << "period=" << r.cycle->period << sep << "steps=" << r.cycle->first << ".."
            << r.cycle->second << "\n";
    return out.str();
}

Expr cefact_rhs(const Model& m, const GSpec& g, std::uint64_t n, const Element& alpha, const Antichain& b) {
    const auto k = g(n);
    auto [as, alpha1] = unfold(m, alpha, k);
    std::vector<Expr> addends;
    for (const auto& beta : b) {
        auto [bs, beta1] = unfold(m, beta, k);
        if (!leq(m, alpha1, beta1)) continue;
        std::vector<Expr> factors;
        for (std::size_t i = 0; i < k; ++i)
            for (const auto& gamma : bs[i]) factors.push_back(tau(gamma, app(jg(g, n + 1), eps_bar(as[i]))));
        addends.push_back(prod(std::move(factors)));
    }
    return sum(std::move(addends));
}

Trace cefact_trace(const Model& m, const GSpec& g, std::uint64_t n, const Element& alpha, const Antichain& b) {
    Trace t;
    t.start = tau(alpha, app(jg(g, n), eps_bar(b)));
    Expr cur = t.start;
    const std::size_t limit = 4 + 3 * g(n) + 8;
    for (std::size_t i = 0;; ++i) {
        if (i > limit) throw std::logic_error("cefact replay did not reach the root tau-tbar step");
        auto succ = head_successors(m, cur);
        if (succ.size() != 1) throw std::logic_error("cefact replay branched or stopped before its last step");
        t.steps.push_back({succ[0].redex, succ[0].result});
        cur = succ[0].result;
        if (succ[0].redex.rule == Rule::TauTBar && succ[0].redex.path.empty()) break;
    }
    t.fuel = t.steps.size();
    t.states = t.steps.size() + 1;
    t.converged = is_mhnf(cur);
    if (!alpha_eq(cur, cefact_rhs(m, g, n, alpha, b)))
        throw std::logic_error("cefact replay ended in a different shape");
    return t;
}

JgWindowResult jg_identity_window(const GSpec& g, std::uint64_t n, const Window& w, std::uint64_t fuel) {
    const auto m = builtin("dinf");
    const auto pool = enumerate_elements(m, w.depth, w.width);
    JgWindowResult r;
    for (const auto& a0 : enumerate_antichains(m, pool, w.width))
        for (const auto& alpha : pool) {
            ++r.pairs;
            bool dominated = false;
            for (const auto& beta : a0)
                if (leq(m, alpha, beta)) dominated = true;
            const bool conv = head_converges(m, tau(alpha, app(jg(g, n), eps_bar(a0))), fuel).converged;
            r.converged += conv;
            if (conv != dominated) {
                r.ok = false;
                r.mismatches.push_back("alpha=" + print(m, alpha) + " a0=" + print(m, a0) +
                                       (conv ? " converges" : " does not converge"));
            }
        }
    return r;
}

}  // namespace lamtest
