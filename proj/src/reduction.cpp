#include "lamtest/reduction.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace lamtest {

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::Beta: return "beta";
        case Rule::TBar: return "tbar";
        case Rule::Tau: return "tau";
        case Rule::TauTBar: return "tautbar";
        case Rule::ProdSum: return "prod-sum";
        case Rule::TBarSum: return "tbar-sum";
        case Rule::DeltaJg: return "delta-Jg";
    }
    return "?";
}

namespace {

// The summands of a test seen as a sum: the children of a Sum, or the test itself.
std::vector<Expr> addends(const Expr& q) {
    if (q->kind == Kind::Sum) return q->children;
    return {q};
}

bool has_sum_child(const Expr& e) {
    return std::any_of(e->children.begin(), e->children.end(), [](const Expr& c) { return c->kind == Kind::Sum; });
}

// Contractions of the main and distributive rules at the root of e.
Expr contract_beta(const Expr& e) { return subst(e->left->left, e->left->name, e->right); }

Expr contract_tbar(const Model& m, const Expr& e) {
    std::vector<Summand> out;
    for (const auto& s : e->left->summands) {
        auto [a, alpha] = unfold1(m, s.point);
        std::vector<Expr> factors{s.body};
        for (const auto& g : a) factors.push_back(tau(g, e->right));
        out.push_back({alpha, prod(std::move(factors))});
    }
    return tsum(std::move(out));
}

Expr contract_tau(const Model& m, const Expr& e) {
    auto [a, alpha] = unfold1(m, e->point);
    const auto& lamb = e->left;
    return tau(alpha, subst(lamb->left, lamb->name, eps_bar(a)));
}

Expr contract_tautbar(const Model& m, const Expr& e) {
    std::vector<Expr> kept;
    for (const auto& s : e->left->summands)
        if (leq(m, e->point, s.point)) kept.push_back(s.body);
    return sum(std::move(kept));
}

// Sum over all choices of one addend per factor of the product of the choices.
Expr distribute(const std::vector<std::vector<Expr>>& factors) {
    std::vector<std::vector<Expr>> acc{{}};
    for (const auto& options : factors) {
        std::vector<std::vector<Expr>> next;
        for (const auto& partial : acc)
            for (const auto& o : options) {
                auto p = partial;
                p.push_back(o);
                next.push_back(std::move(p));
            }
        acc = std::move(next);
    }
    std::vector<Expr> terms;
    for (auto& p : acc) terms.push_back(prod(std::move(p)));
    return sum(std::move(terms));
}

Expr contract_prodsum(const Expr& e) {
    std::vector<std::vector<Expr>> factors;
    for (const auto& c : e->children) factors.push_back(addends(c));
    return distribute(factors);
}

Expr contract_delta(const Expr& e) { return app(build_G(e->g, e->index), jg(e->g, e->index + 1)); }

// The TSum obtained by splitting summand i over the addends of its body.
Expr contract_tbarsum(const Expr& ts, std::size_t i) {
    std::vector<Summand> out;
    for (std::size_t k = 0; k < ts->summands.size(); ++k) {
        if (k != i) {
            out.push_back(ts->summands[k]);
            continue;
        }
        for (const auto& q : ts->summands[i].body->children) out.push_back({ts->summands[i].point, q});
    }
    return tsum(std::move(out));
}

// Rebuild e with the subexpression at path[pos..] replaced by fn(subexpression).
Expr replace_at(const Expr& e, const Path& path, std::size_t pos, const std::function<Expr(const Expr&)>& fn) {
    if (pos == path.size()) return fn(e);
    const int i = path[pos];
    auto bad = [] { throw std::invalid_argument("invalid position"); };
    switch (e->kind) {
        case Kind::Lam:
            if (i != 0) bad();
            return lam(e->name, replace_at(e->left, path, pos + 1, fn));
        case Kind::App:
            if (i == 0) return app(replace_at(e->left, path, pos + 1, fn), e->right);
            if (i == 1) return app(e->left, replace_at(e->right, path, pos + 1, fn));
            bad();
            break;
        case Kind::Tau:
            if (i != 0) bad();
            return tau(e->point, replace_at(e->left, path, pos + 1, fn));
        case Kind::Sum:
        case Kind::Prod: {
            if (i < 0 || static_cast<std::size_t>(i) >= e->children.size()) bad();
            auto ch = e->children;
            ch[i] = replace_at(ch[i], path, pos + 1, fn);
            return e->kind == Kind::Sum ? sum(std::move(ch)) : prod(std::move(ch));
        }
        case Kind::TSum: {
            if (i < 0 || static_cast<std::size_t>(i) >= e->summands.size() || pos + 1 >= path.size() ||
                path[pos + 1] != 0)
                bad();
            auto s = e->summands;
            s[i].body = replace_at(s[i].body, path, pos + 2, fn);
            return tsum(std::move(s));
        }
        default: bad();
    }
    return e;
}

const Expr& node_at(const Expr& e, const Path& path, std::size_t end) {
    const Expr* cur = &e;
    for (std::size_t pos = 0; pos < end; ++pos) {
        const Expr& n = *cur;
        const int i = path[pos];
        switch (n->kind) {
            case Kind::Lam:
            case Kind::Tau: cur = &n->left; break;
            case Kind::App: cur = i == 0 ? &n->left : &n->right; break;
            case Kind::Sum:
            case Kind::Prod:
                if (i < 0 || static_cast<std::size_t>(i) >= n->children.size())
                    throw std::invalid_argument("invalid position");
                cur = &n->children[i];
                break;
            case Kind::TSum:
                if (i < 0 || static_cast<std::size_t>(i) >= n->summands.size() || pos + 1 >= end)
                    throw std::invalid_argument("invalid position");
                cur = &n->summands[i].body;
                ++pos;
                break;
            default: throw std::invalid_argument("invalid position");
        }
    }
    return *cur;
}

void collect_redexes(const Expr& e, Path& p, std::vector<Redex>& out) {
    switch (e->kind) {
        case Kind::Var:
        case Kind::Hole: return;
        case Kind::Jg: out.push_back({p, Rule::DeltaJg}); return;
        case Kind::Lam:
            p.push_back(0);
            collect_redexes(e->left, p, out);
            p.pop_back();
            return;
        case Kind::App:
            if (e->left->kind == Kind::Lam) out.push_back({p, Rule::Beta});
            if (e->left->kind == Kind::TSum) out.push_back({p, Rule::TBar});
            for (int i : {0, 1}) {
                p.push_back(i);
                collect_redexes(i == 0 ? e->left : e->right, p, out);
                p.pop_back();
            }
            return;
        case Kind::Tau:
            if (e->left->kind == Kind::Lam) out.push_back({p, Rule::Tau});
            if (e->left->kind == Kind::TSum) out.push_back({p, Rule::TauTBar});
            p.push_back(0);
            collect_redexes(e->left, p, out);
            p.pop_back();
            return;
        case Kind::TSum:
            for (std::size_t i = 0; i < e->summands.size(); ++i) {
                p.push_back(static_cast<int>(i));
                if (e->summands[i].body->kind == Kind::Sum) out.push_back({p, Rule::TBarSum});
                p.push_back(0);
                collect_redexes(e->summands[i].body, p, out);
                p.pop_back();
                p.pop_back();
            }
            return;
        case Kind::Sum:
        case Kind::Prod:
            if (e->kind == Kind::Prod && has_sum_child(e)) out.push_back({p, Rule::ProdSum});
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                p.push_back(static_cast<int>(i));
                collect_redexes(e->children[i], p, out);
                p.pop_back();
            }
            return;
    }
}

// Head redexes following the head contextual rules.
void collect_head(const Expr& e, Path& p, std::vector<Redex>& out) {
    auto descend = [&](int i, const Expr& sub) {
        p.push_back(i);
        collect_head(sub, p, out);
        p.pop_back();
    };
    switch (e->kind) {
        case Kind::Var:
        case Kind::Hole: return;
        case Kind::Jg: out.push_back({p, Rule::DeltaJg}); return;
        case Kind::Lam: descend(0, e->left); return;
        case Kind::App:
            if (e->left->kind == Kind::Lam)
                out.push_back({p, Rule::Beta});
            else if (e->left->kind == Kind::TSum)
                out.push_back({p, Rule::TBar});
            else if (e->left->kind == Kind::App || e->left->kind == Kind::Jg)
                descend(0, e->left);
            return;
        case Kind::Tau:
            if (e->left->kind == Kind::Lam)
                out.push_back({p, Rule::Tau});
            else if (e->left->kind == Kind::TSum)
                out.push_back({p, Rule::TauTBar});
            else if (e->left->kind == Kind::App || e->left->kind == Kind::Jg)
                descend(0, e->left);
            return;
        case Kind::TSum:
            for (std::size_t i = 0; i < e->summands.size(); ++i) {
                p.push_back(static_cast<int>(i));
                const auto& body = e->summands[i].body;
                if (body->kind == Kind::Sum)
                    out.push_back({p, Rule::TBarSum});
                else
                    descend(0, body);
                p.pop_back();
            }
            return;
        case Kind::Sum:
            for (std::size_t i = 0; i < e->children.size(); ++i) descend(static_cast<int>(i), e->children[i]);
            return;
        case Kind::Prod:
            if (has_sum_child(e)) out.push_back({p, Rule::ProdSum});
            for (std::size_t i = 0; i < e->children.size(); ++i)
                if (e->children[i]->kind != Kind::Sum) descend(static_cast<int>(i), e->children[i]);
            return;
    }
}

std::vector<Successor> successors_of(const Model& m, const Expr& e, std::vector<Redex> rs) {
    std::sort(rs.begin(), rs.end());
    std::vector<Successor> out;
    out.reserve(rs.size());
    for (auto& r : rs) {
        auto result = step(m, e, r.path, r.rule);
        out.push_back({std::move(r), std::move(result)});
    }
    return out;
}

Expr spine_head(Expr e) {
    while (e->kind == Kind::App) e = e->left;
    return e;
}

// A product of tau tests on variable headed applications, including eps.
bool hnf_product(const Expr& q) {
    auto atomic = [](const Expr& t) { return t->kind == Kind::Tau && spine_head(t->left)->kind == Kind::Var; };
    if (q->kind == Kind::Prod) return std::all_of(q->children.begin(), q->children.end(), atomic);
    return atomic(q);
}

}  // namespace

std::vector<Redex> redexes(const Model&, const Expr& e) {
    std::vector<Redex> out;
    Path p;
    collect_redexes(e, p, out);
    std::sort(out.begin(), out.end());
    return out;
}

Expr step(const Model& m, const Expr& e, const Path& path, Rule rule) {
    auto reject = [&] { throw std::invalid_argument(rule_name(rule) + " does not apply at " + print_path(path)); };
    if (rule == Rule::TBarSum) {
        if (path.empty()) reject();
        const auto i = static_cast<std::size_t>(path.back());
        Path parent(path.begin(), path.end() - 1);
        const auto& ts = node_at(e, parent, parent.size());
        if (ts->kind != Kind::TSum || i >= ts->summands.size() || ts->summands[i].body->kind != Kind::Sum) reject();
        return replace_at(e, parent, 0, [i](const Expr& n) { return contract_tbarsum(n, i); });
    }
    const auto& target = node_at(e, path, path.size());
    switch (rule) {
        case Rule::Beta:
            if (target->kind != Kind::App || target->left->kind != Kind::Lam) reject();
            return replace_at(e, path, 0, contract_beta);
        case Rule::TBar:
            if (target->kind != Kind::App || target->left->kind != Kind::TSum) reject();
            return replace_at(e, path, 0, [&](const Expr& n) { return contract_tbar(m, n); });
        case Rule::Tau:
            if (target->kind != Kind::Tau || target->left->kind != Kind::Lam) reject();
            return replace_at(e, path, 0, [&](const Expr& n) { return contract_tau(m, n); });
        case Rule::TauTBar:
            if (target->kind != Kind::Tau || target->left->kind != Kind::TSum) reject();
            return replace_at(e, path, 0, [&](const Expr& n) { return contract_tautbar(m, n); });
        case Rule::ProdSum:
            if (target->kind != Kind::Prod || !has_sum_child(target)) reject();
            return replace_at(e, path, 0, contract_prodsum);
        case Rule::DeltaJg:
            if (target->kind != Kind::Jg) reject();
            return replace_at(e, path, 0, contract_delta);
        case Rule::TBarSum: break;
    }
    reject();
    return e;
}

std::vector<Successor> full_successors(const Model& m, const Expr& e) { return successors_of(m, e, redexes(m, e)); }

std::vector<Successor> head_successors(const Model& m, const Expr& e) {
    std::vector<Redex> rs;
    Path p;
    collect_head(e, p, rs);
    return successors_of(m, e, std::move(rs));
}

bool is_hnf(const Expr& e) {
    if (e->is_test()) {
        if (e->kind == Kind::Sum)
            return !e->children.empty() && std::all_of(e->children.begin(), e->children.end(), hnf_product);
        return hnf_product(e);
    }
    Expr body = e;
    while (body->kind == Kind::Lam) body = body->left;
    if (spine_head(body)->kind == Kind::Var) return true;
    if (body->kind == Kind::TSum)
        return !body->summands.empty() && std::all_of(body->summands.begin(), body->summands.end(),
                                                      [](const Summand& s) { return hnf_product(s.body); });
    return false;
}

bool is_mhnf(const Expr& e) {
    if (e->is_test()) {
        auto parts = addends(e);
        return std::any_of(parts.begin(), parts.end(), hnf_product);
    }
    Expr body = e;
    while (body->kind == Kind::Lam) body = body->left;
    if (spine_head(body)->kind == Kind::Var) return true;
    if (body->kind == Kind::TSum)
        return std::any_of(body->summands.begin(), body->summands.end(),
                           [](const Summand& s) { return hnf_product(s.body); });
    return false;
}

std::size_t max_states() {
    if (const char* v = std::getenv("LAMTEST_MAX_STATES")) {
        char* end = nullptr;
        auto n = std::strtoull(v, &end, 10);
        if (end != v && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return 200000;
}

Trace head_converges(const Model& m, const Expr& e, std::uint64_t fuel, Strategy strategy, std::size_t cap_in) {
    struct State {
        Expr e;
        long parent;
        Redex redex;
    };
    std::vector<State> states{{e, -1, {}}};
    std::unordered_set<std::string> seen{key(e)};
    const auto cap = cap_in ? cap_in : max_states();
    Trace t;
    t.start = e;
    t.fuel = fuel;

    auto finish = [&](long idx, bool converged) {
        std::vector<TraceStep> rev;
        for (long i = idx; states[i].parent >= 0; i = states[i].parent) rev.push_back({states[i].redex, states[i].e});
        t.steps.assign(rev.rbegin(), rev.rend());
        t.converged = converged;
        t.states = states.size();
        return t;
    };

    if (is_mhnf(e)) return finish(0, true);
    std::vector<long> frontier{0};
    long deepest = 0;
    for (std::uint64_t depth = 0; depth < fuel && !frontier.empty(); ++depth) {
        std::vector<long> next;
        for (long idx : frontier) {
            auto succ = strategy == Strategy::Head ? head_successors(m, states[idx].e)
                                                   : full_successors(m, states[idx].e);
            for (auto& s : succ) {
                if (!seen.insert(key(s.result)).second) continue;
                states.push_back({s.result, idx, s.redex});
                const long id = static_cast<long>(states.size()) - 1;
                if (is_mhnf(s.result)) return finish(id, true);
                next.push_back(id);
                if (states.size() >= cap) {
                    t.capped = true;
                    return finish(id, false);
                }
            }
        }
        if (!next.empty()) deepest = next.front();
        frontier = std::move(next);
    }
    return finish(deepest, false);
}

std::string serialize(const Model& m, const Trace& t, Format f) {
    const std::string sep = f == Format::Tsv ? "\t" : "  ";
    std::string out;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto& s = t.steps[i];
        out += std::to_string(i + 1) + sep + rule_name(s.redex.rule) + "@" + print_path(s.redex.path) + sep +
               print(m, s.result) + "\n";
    }
    if (t.converged) {
        out += "VERDICT" + sep.substr(0, 1) + "converged(" + std::to_string(t.steps.size()) + ")\n";
    } else {
        if (f == Format::Human) {
            out += "no mhnf within fuel " + std::to_string(t.fuel);
            if (t.capped) out += " (state cap " + std::to_string(max_states()) + " reached)";
            out += "\n";
        }
        out += "VERDICT" + sep.substr(0, 1) + "exhausted(" + std::to_string(t.fuel) + ")\n";
    }
    return out;
}

// ---------------------------------------------------------------- parallel reduction

Expr full_parallel_reduct(const Model& m, const Expr& e) {
    auto plus = [&m](const Expr& x) { return full_parallel_reduct(m, x); };
    switch (e->kind) {
        case Kind::Var:
        case Kind::Hole: return e;
        case Kind::Jg: return contract_delta(e);
        case Kind::Lam: return lam(e->name, plus(e->left));
        case Kind::App: {
            const auto& fn = e->left;
            if (fn->kind == Kind::Lam) return subst(plus(fn->left), fn->name, plus(e->right));
            if (fn->kind == Kind::TSum) {
                auto arg = plus(e->right);
                std::vector<Summand> out;
                for (const auto& s : fn->summands) {
                    auto [a, alpha] = unfold1(m, s.point);
                    for (const auto& q : addends(plus(s.body))) {
                        std::vector<Expr> factors{q};
                        for (const auto& g : a) factors.push_back(tau(g, arg));
                        out.push_back({alpha, prod(std::move(factors))});
                    }
                }
                return tsum(std::move(out));
            }
            return app(plus(fn), plus(e->right));
        }
        case Kind::Tau: {
            const auto& body = e->left;
            if (body->kind == Kind::Lam) {
                auto [a, alpha] = unfold1(m, e->point);
                return tau(alpha, subst(plus(body->left), body->name, eps_bar(a)));
            }
            if (body->kind == Kind::TSum) {
                std::vector<Expr> kept;
                for (const auto& s : body->summands)
                    if (leq(m, e->point, s.point)) kept.push_back(plus(s.body));
                return sum(std::move(kept));
            }
            return tau(e->point, plus(body));
        }
        case Kind::TSum: {
            std::vector<Summand> out;
            for (const auto& s : e->summands)
                for (const auto& q : addends(s.body)) out.push_back({s.point, plus(q)});
            return tsum(std::move(out));
        }
        case Kind::Sum: {
            std::vector<Expr> ch;
            for (const auto& c : e->children) ch.push_back(plus(c));
            return sum(std::move(ch));
        }
        case Kind::Prod: {
            std::vector<std::vector<Expr>> factors;
            for (const auto& c : e->children) {
                std::vector<Expr> opts;
                for (const auto& q : addends(c)) opts.push_back(plus(q));
                factors.push_back(std::move(opts));
            }
            return distribute(factors);
        }
    }
    return e;
}

namespace {

// Set partitions of items into non-empty blocks. The empty list has two
// readings as a sum: no addend at all, or the single addend 0.
std::vector<std::vector<std::vector<Expr>>> groupings(const std::vector<Expr>& items) {
    if (items.empty()) return {{}, {{}}};
    std::vector<std::vector<std::vector<Expr>>> acc{{}};
    for (const auto& it : items) {
        std::vector<std::vector<std::vector<Expr>>> next;
        for (const auto& part : acc) {
            for (std::size_t b = 0; b < part.size(); ++b) {
                auto p = part;
                p[b].push_back(it);
                next.push_back(std::move(p));
            }
            auto p = part;
            p.push_back({it});
            next.push_back(std::move(p));
        }
        acc = std::move(next);
    }
    return acc;
}

}  // namespace

Expr erase_dead(const Expr& e);

namespace {

class ParallelEnumerator {
public:
    ParallelEnumerator(const Model& m, std::size_t cap, bool erase) : m_(m), cap_(cap), erase_(erase) {}

    const std::vector<Expr>& reducts(const Expr& e) {
        auto k = key(e);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        auto r = compute(e);
        return memo_.emplace(std::move(k), std::move(r)).first->second;
    }

private:
    const Model& m_;
    std::size_t cap_;
    bool erase_;
    std::unordered_map<std::string, std::vector<Expr>> memo_;
    std::unordered_map<std::string, std::vector<std::vector<Expr>>> dmemo_;

    struct Collector {
        std::vector<Expr> items;
        std::unordered_set<std::string> seen;
        std::size_t cap;
        bool erase;
        void add(const Expr& y) {
            const Expr x = erase ? erase_dead(y) : y;
            if (seen.insert(key(x)).second) {
                items.push_back(x);
                if (items.size() > cap) throw ResourceError("parallel reduct enumeration exceeded its cap");
            }
        }
    };

    // Every way of reducing a sum of tests given as a list of addends into
    // a list of blocks, each block replaced by one of its reducts.
    std::vector<std::vector<Expr>> block_reducts(const std::vector<Expr>& items) {
        std::vector<std::vector<Expr>> out;
        for (const auto& part : groupings(items)) {
            std::vector<std::vector<Expr>> acc{{}};
            for (const auto& block : part) {
                const auto& rs = reducts(sum(block));
                std::vector<std::vector<Expr>> next;
                for (const auto& a : acc)
                    for (const auto& r : rs) {
                        auto x = a;
                        x.push_back(r);
                        next.push_back(std::move(x));
                    }
                acc = std::move(next);
                if (acc.size() > cap_) throw ResourceError("parallel reduct enumeration exceeded its cap");
            }
            out.insert(out.end(), acc.begin(), acc.end());
        }
        return out;
    }

    // The ways a test Q may reduce to a sum of addends in one parallel step:
    // its addends grouped into blocks that reduce separately, or one reduct
    // of Q taken whole or split into its addends.
    const std::vector<std::vector<Expr>>& decompositions(const Expr& q) {
        auto k = key(q);
        if (auto it = dmemo_.find(k); it != dmemo_.end()) return it->second;
        std::vector<std::vector<Expr>> out;
        std::unordered_set<std::string> seen;
        auto add = [&](std::vector<Expr> l) {
            std::vector<std::string> ks;
            for (const auto& x : l) ks.push_back(key(x));
            std::sort(ks.begin(), ks.end());
            std::string joined;
            for (const auto& x : ks) joined += x + "|";
            if (seen.insert(joined).second) out.push_back(std::move(l));
            if (out.size() > cap_) throw ResourceError("parallel reduct enumeration exceeded its cap");
        };
        if (q->kind == Kind::Sum)
            for (auto& l : block_reducts(q->children)) add(std::move(l));
        for (const auto& r : reducts(q)) {
            add({r});
            add(addends(r));
        }
        return dmemo_.emplace(std::move(k), std::move(out)).first->second;
    }

    template <class F>
    void cartesian(const std::vector<std::vector<Expr>>& options, F&& emit) {
        std::vector<Expr> cur;
        std::size_t count = 0;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == options.size()) {
                if (++count > cap_) throw ResourceError("parallel reduct enumeration exceeded its cap");
                emit(cur);
                return;
            }
            for (const auto& o : options[i]) {
                cur.push_back(o);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
    }

    std::vector<Expr> compute(const Expr& e) {
        Collector out{{}, {}, cap_, erase_};
        switch (e->kind) {
            case Kind::Var:
            case Kind::Hole: out.add(e); break;
            case Kind::Jg:
                out.add(e);
                out.add(contract_delta(e));
                break;
            case Kind::Lam:
                for (const auto& b : reducts(e->left)) out.add(lam(e->name, b));
                break;
            case Kind::App: {
                const auto& fn = e->left;
                const auto args = reducts(e->right);
                for (const auto& f : reducts(fn))
                    for (const auto& a : args) out.add(app(f, a));
                if (fn->kind == Kind::Lam)
                    for (const auto& b : reducts(fn->left))
                        for (const auto& a : args) out.add(subst(b, fn->name, a));
                if (fn->kind == Kind::TSum) {
                    // For each summand, the lists of non-sum blocks its body may reduce to.
                    std::vector<std::vector<std::vector<Expr>>> per;
                    std::vector<std::pair<Antichain, Element>> unfolded;
                    for (const auto& s : fn->summands) {
                        unfolded.push_back(unfold1(m_, s.point));
                        std::vector<std::vector<Expr>> lists;
                        per.push_back(decompositions(s.body));
                    }
                    for (const auto& a : args) {
                        std::vector<std::size_t> idx(per.size(), 0);
                        std::function<void(std::size_t, std::vector<Summand>&)> rec = [&](std::size_t i,
                                                                                        std::vector<Summand>& acc) {
                            if (i == per.size()) {
                                out.add(tsum(acc));
                                return;
                            }
                            const auto& [head, alpha] = unfolded[i];
                            for (const auto& blocks : per[i]) {
                                const auto before = acc.size();
                                for (const auto& q : blocks) {
                                    std::vector<Expr> factors{q};
                                    for (const auto& g : head) factors.push_back(tau(g, a));
                                    acc.push_back({alpha, prod(std::move(factors))});
                                }
                                rec(i + 1, acc);
                                acc.resize(before);
                            }
                        };
                        std::vector<Summand> acc;
                        rec(0, acc);
                    }
                }
                break;
            }
            case Kind::Tau: {
                const auto& body = e->left;
                for (const auto& b : reducts(body)) out.add(tau(e->point, b));
                if (body->kind == Kind::Lam) {
                    auto [a, alpha] = unfold1(m_, e->point);
                    auto eb = eps_bar(a);
                    for (const auto& b : reducts(body->left)) out.add(tau(alpha, subst(b, body->name, eb)));
                }
                if (body->kind == Kind::TSum) {
                    std::vector<std::vector<Expr>> options;
                    for (const auto& s : body->summands)
                        if (leq(m_, e->point, s.point)) options.push_back(reducts(s.body));
                    cartesian(options, [&](const std::vector<Expr>& c) { out.add(sum(c)); });
                }
                break;
            }
            case Kind::TSum: {
                std::vector<std::vector<std::vector<Summand>>> per;
                for (const auto& s : e->summands) {
                    std::vector<std::vector<Summand>> lists;
                    for (const auto& blocks : decompositions(s.body)) {
                        std::vector<Summand> l;
                        for (const auto& q : blocks) l.push_back({s.point, q});
                        lists.push_back(std::move(l));
                    }
                    per.push_back(std::move(lists));
                }
                std::function<void(std::size_t, std::vector<Summand>&)> rec = [&](std::size_t i,
                                                                                std::vector<Summand>& acc) {
                    if (i == per.size()) {
                        out.add(tsum(acc));
                        return;
                    }
                    for (const auto& l : per[i]) {
                        const auto before = acc.size();
                        acc.insert(acc.end(), l.begin(), l.end());
                        rec(i + 1, acc);
                        acc.resize(before);
                    }
                };
                std::vector<Summand> acc;
                rec(0, acc);
                break;
            }
            case Kind::Sum: {
                std::vector<std::vector<Expr>> options;
                for (const auto& c : e->children) options.push_back(reducts(c));
                cartesian(options, [&](const std::vector<Expr>& c) { out.add(sum(c)); });
                break;
            }
            case Kind::Prod: {
                if (e->children.empty()) {
                    out.add(e);
                    break;
                }
                // Products are flattened, so every bracketing of the factors
                // is a candidate: each block reads as a list of addends and
                // the result distributes.
                for (const auto& part : groupings(e->children)) {
                    if (part.size() == 1 && e->children.size() > 1) continue;
                    std::vector<const std::vector<std::vector<Expr>>*> per;
                    for (const auto& block : part) per.push_back(&decompositions(prod(block)));
                    std::vector<std::vector<Expr>> chosen;
                    std::function<void(std::size_t)> rec = [&](std::size_t i) {
                        if (i == per.size()) {
                            out.add(distribute(chosen));
                            return;
                        }
                        for (const auto& l : *per[i]) {
                            chosen.push_back(l);
                            rec(i + 1);
                            chosen.pop_back();
                        }
                    };
                    rec(0);
                }
                break;
            }
        }
        return std::move(out.items);
    }
};

}  // namespace

std::vector<Expr> parallel_reducts(const Model& m, const Expr& e, std::size_t cap) {
    ParallelEnumerator en(m, cap, false);
    return en.reducts(e);
}

Expr erase_dead(const Expr& e) {
    switch (e->kind) {
        case Kind::Var:
        case Kind::Hole:
        case Kind::Jg: return e;
        case Kind::Lam: return lam(e->name, erase_dead(e->left));
        case Kind::App: return app(erase_dead(e->left), erase_dead(e->right));
        case Kind::Tau: return tau(e->point, erase_dead(e->left));
        case Kind::TSum: {
            std::vector<Summand> out;
            for (const auto& s : e->summands) {
                auto b = erase_dead(s.body);
                if (!is_zero(b)) out.push_back({s.point, b});
            }
            return tsum(std::move(out));
        }
        case Kind::Sum: {
            std::vector<Expr> out;
            for (const auto& c : e->children) out.push_back(erase_dead(c));
            return sum(std::move(out));
        }
        case Kind::Prod: {
            std::vector<Expr> out;
            for (const auto& c : e->children) {
                auto x = erase_dead(c);
                if (is_zero(x)) return zero_test();
                out.push_back(x);
            }
            return prod(std::move(out));
        }
    }
    return e;
}

namespace {

// Decides whether some parallel reduct of an expression equals a given
// target, modulo dead addends. Both sides are erased. The search follows the
// shape of the target and enumerates reducts only for the pieces that a
// substitution or a distribution mixes into the result.
class ParallelMatcher {
public:
    ParallelMatcher(const Model& m, std::size_t cap) : m_(m), en_(m, cap, true) {}

    bool can(const Expr& e, const Expr& t) {
        if (key(e) == key(t)) return true;
        auto k = key(e) + "\x1f" + key(t);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        const bool r = compute(e, t);
        memo_.emplace(std::move(k), r);
        return r;
    }

private:
    const Model& m_;
    ParallelEnumerator en_;
    std::unordered_map<std::string, bool> memo_;
    std::size_t fresh_ = 0;

    bool in(const Expr& e, const Expr& t) {
        const auto target = key(t);
        for (const auto& r : en_.reducts(e))
            if (key(r) == target) return true;
        return false;
    }

    // Some reduct of e vanishes when erased inside a sum.
    bool can_vanish(const Expr& e) {
        for (const auto& r : en_.reducts(e))
            if (is_zero(r)) return true;
        return false;
    }

    // Whether some reduct of a test may have several addends.
    static bool multi(const Expr& q) {
        switch (q->kind) {
            case Kind::Sum: return q->children.size() > 1 || std::any_of(q->children.begin(), q->children.end(), multi);
            case Kind::Prod: return std::any_of(q->children.begin(), q->children.end(), multi);
            case Kind::Tau: return q->left->kind == Kind::TSum;
            default: return false;
        }
    }

    // Children reduce separately and their reducts are summed: distribute
    // the addends of the target over the children.
    bool assign(const std::vector<Expr>& children, const Expr& t) {
        const auto targets = is_zero(t) ? std::vector<Expr>{} : addends(t);
        std::vector<bool> many;
        for (const auto& c : children) many.push_back(multi(c));
        std::vector<std::vector<Expr>> groups(children.size());
        std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
            if (i == targets.size()) {
                for (std::size_t c = 0; c < children.size(); ++c) {
                    if (groups[c].empty()) {
                        if (!can(children[c], zero_test()) && !can_vanish(children[c])) return false;
                    } else if ((many[c] || groups[c].size() > 1) && !can(children[c], sum(groups[c]))) {
                        return false;
                    }
                }
                return true;
            }
            for (std::size_t c = 0; c < children.size(); ++c) {
                if (!many[c] && (!groups[c].empty() || !can(children[c], targets[i]))) continue;
                groups[c].push_back(targets[i]);
                const bool ok = rec(i + 1);
                groups[c].pop_back();
                if (ok) return true;
            }
            return false;
        };
        return rec(0);
    }

    bool compute(const Expr& e, const Expr& t) {
        switch (e->kind) {
            case Kind::Var:
            case Kind::Hole: return false;
            case Kind::Jg: return key(erase_dead(contract_delta(e))) == key(t);
            case Kind::Lam: {
                if (t->kind != Kind::Lam) return false;
                if (t->name == e->name) return can(e->left, t->left);
                const auto z = var("_m" + std::to_string(fresh_++));
                return can(subst(e->left, e->name, z), subst(t->left, t->name, z));
            }
            case Kind::App: {
                const auto& fn = e->left;
                if (t->kind == Kind::App && can(fn, t->left) && can(e->right, t->right)) return true;
                if (fn->kind == Kind::Lam) {
                    const auto target = key(t);
                    for (const auto& b : en_.reducts(fn->left)) {
                        if (!free_in(fn->name, b)) {
                            if (key(b) == target) return true;
                            continue;
                        }
                        for (const auto& a : en_.reducts(e->right))
                            if (key(erase_dead(subst(b, fn->name, a))) == target) return true;
                    }
                    return false;
                }
                if (fn->kind == Kind::TSum) return in(e, t);
                return false;
            }
            case Kind::Tau: {
                const auto& body = e->left;
                if (t->kind == Kind::Tau && t->point == e->point && can(body, t->left)) return true;
                if (body->kind == Kind::Lam) {
                    auto [a, alpha] = unfold1(m_, e->point);
                    if (t->kind != Kind::Tau || !(t->point == alpha)) return false;
                    auto eb = eps_bar(a);
                    const auto target = key(t);
                    for (const auto& b : en_.reducts(body->left))
                        if (key(erase_dead(tau(alpha, subst(b, body->name, eb)))) == target) return true;
                    return false;
                }
                if (body->kind == Kind::TSum) {
                    if (!t->is_test()) return false;
                    std::vector<Expr> kept;
                    for (const auto& s : body->summands)
                        if (leq(m_, e->point, s.point)) kept.push_back(s.body);
                    return assign(kept, t);
                }
                return false;
            }
            case Kind::Sum:
                if (!t->is_test()) return false;
                return assign(e->children, t);
            case Kind::Prod:
                if (t->kind == Kind::Prod && t->children.size() == e->children.size() &&
                    !has_sum_child(t)) {
                    // Factors reducing one to one onto the factors of the target.
                    std::vector<bool> used(t->children.size(), false);
                    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
                        if (i == e->children.size()) return true;
                        for (std::size_t j = 0; j < t->children.size(); ++j) {
                            if (used[j] || !can(e->children[i], t->children[j])) continue;
                            used[j] = true;
                            const bool ok = rec(i + 1);
                            used[j] = false;
                            if (ok) return true;
                        }
                        return false;
                    };
                    if (rec(0)) return true;
                }
                return in(e, t);
            case Kind::TSum: return in(e, t);
        }
        return false;
    }
};

}  // namespace

bool par_reduces(const Model& m, const Expr& e, const Expr& f, ParMode mode) {
    if (mode == ParMode::ModuloDead) {
        ParallelMatcher pm(m, 200000);
        return pm.can(erase_dead(e), erase_dead(f));
    }
    const auto target = key(f);
    ParallelEnumerator en(m, 200000, false);
    for (const auto& r : en.reducts(e))
        if (key(r) == target) return true;
    return false;
}

// ---------------------------------------------------------------- random expressions

namespace {

class Generator {
public:
    Generator(std::uint64_t seed, const std::vector<Element>& pool) : rng_(seed), pool_(pool) {}

    Expr term(std::size_t size, std::vector<std::string>& bound) {
        if (size <= 1) {
            if (!pool_.empty() && pick(8) == 0) return zero_term();
            return var(variable(bound));
        }
        const auto choices = pool_.empty() ? 2u : 3u;
        switch (size == 2 ? 0 : pick(choices)) {
            case 0: {
                std::string x = names_[pick(names_.size())];
                bound.push_back(x);
                auto body = term(size - 1, bound);
                bound.pop_back();
                return lam(x, body);
            }
            case 1: {
                const auto left = 1 + pick(size - 2);
                auto fn = term(left, bound);
                auto arg = term(size - 1 - left, bound);
                return app(fn, arg);
            }
            default: {
                const auto n = size >= 5 ? 1 + pick(2) : 1;
                std::vector<Summand> s;
                std::size_t budget = (size - 1) / n;
                for (std::size_t i = 0; i < n; ++i) s.push_back({point(), test(std::max<std::size_t>(1, budget), bound)});
                return tsum(std::move(s));
            }
        }
    }

    Expr test(std::size_t size, std::vector<std::string>& bound) {
        if (size <= 1 || pool_.empty()) return pick(3) == 0 ? zero_test() : eps();
        switch (pick(5)) {
            case 0: {
                const auto left = 1 + pick(size - 1);
                auto a = test(left, bound);
                auto b = test(std::max<std::size_t>(1, size - left), bound);
                return sum({a, b});
            }
            case 1: {
                const auto left = 1 + pick(size - 1);
                auto a = test(left, bound);
                auto b = test(std::max<std::size_t>(1, size - left), bound);
                return prod({a, b});
            }
            default: return tau(point(), term(size - 1, bound));
        }
    }

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

private:
    std::mt19937_64 rng_;
    const std::vector<Element>& pool_;
    std::vector<std::string> names_{"x", "y", "z"};

    std::string variable(const std::vector<std::string>& bound) {
        if (!bound.empty() && pick(4) != 0) return bound[pick(bound.size())];
        return names_[pick(names_.size())];
    }
    Element point() { return pool_[pick(pool_.size())]; }
};

}  // namespace

Expr random_term(std::uint64_t seed, std::size_t size, const Model&, const std::vector<Element>& pool, Sort sort) {
    Generator gen(seed, pool);
    std::vector<std::string> bound;
    if (sort == Sort::Any) sort = (!pool.empty() && gen.pick(2) == 0) ? Sort::Test : Sort::Term;
    if (sort == Sort::Test && pool.empty()) sort = Sort::Term;
    return sort == Sort::Term ? gen.term(std::max<std::size_t>(1, size), bound)
                              : gen.test(std::max<std::size_t>(1, size), bound);
}

}  // namespace lamtest
