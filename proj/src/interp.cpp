#include "lamtest/interp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace lamtest {

namespace {

// Environments are kept sorted by variable name and hold only non-empty
// antichains of variables free in the subject.
Env restrict(const Env& env, const Expr& e) {
    Env out;
    for (const auto& [x, a] : env)
        if (!a.empty() && std::binary_search(e->fv.begin(), e->fv.end(), x)) out.emplace_back(x, a);
    std::sort(out.begin(), out.end());
    return out;
}

const Antichain* lookup(const Env& env, const std::string& x) {
    for (const auto& [y, a] : env)
        if (y == x) return &a;
    return nullptr;
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    std::string rule;
    Env env;
    Expr subject;
    std::optional<Element> point;
    std::vector<NodePtr> premises;
};

NodePtr node(std::string rule, Env env, Expr subject, std::optional<Element> point,
             std::vector<NodePtr> premises = {}) {
    return std::make_shared<const Node>(
        Node{std::move(rule), std::move(env), std::move(subject), std::move(point), std::move(premises)});
}

// Weakening up to env when the node was derived in a smaller one.
NodePtr lift(const NodePtr& n, const Env& env) {
    if (n->env == env) return n;
    return node("weak", env, n->subject, n->point, {n});
}

// Subsumption from the derived point down to alpha.
NodePtr lower(const NodePtr& n, const Element& alpha) {
    if (*n->point == alpha) return n;
    return node("sub", n->env, n->subject, alpha, {n});
}

Derivation to_derivation(const NodePtr& n) {
    Derivation d{n->rule, Judgment{n->env, n->subject, n->point}, {}};
    for (const auto& p : n->premises) d.premises.push_back(to_derivation(p));
    return d;
}

class Searcher {
public:
    Searcher(const Model& m, const Window& w) : m_(m) {
        pool_ = enumerate_elements(m, w.depth, w.width);
        width_ = w.width;
    }

    // env is restricted to the subject.
    NodePtr derive(const Env& env, const Expr& e, const std::optional<Element>& alpha, std::size_t d) {
        auto k = std::make_tuple(env, key(e), alpha, d);
        if (auto it = memo_.find(k); it != memo_.end()) return it->second;
        auto r = compute(env, e, alpha, d);
        memo_.emplace(std::move(k), r);
        return r;
    }

    // Derivation of e : alpha in the (possibly larger) environment env.
    NodePtr derive_in(const Env& env, const Expr& e, const std::optional<Element>& alpha, std::size_t d) {
        auto r = derive(restrict(env, e), e, alpha, d);
        return r ? lift(r, env) : nullptr;
    }

private:
    NodePtr compute(const Env& env, const Expr& e, const std::optional<Element>& alpha, std::size_t d) {
        switch (e->kind) {
            case Kind::Tau: {
                auto p = derive_in(env, e->left, e->point, d);
                return p ? node("tau", env, e, std::nullopt, {p}) : nullptr;
            }
            case Kind::Sum:
                for (const auto& c : e->children)
                    if (auto p = derive_in(env, c, std::nullopt, d)) return node("sum", env, e, std::nullopt, {p});
                return nullptr;
            case Kind::Prod: {
                std::vector<NodePtr> ps;
                for (const auto& c : e->children) {
                    auto p = derive_in(env, c, std::nullopt, d);
                    if (!p) return nullptr;
                    ps.push_back(p);
                }
                return node("prod", env, e, std::nullopt, std::move(ps));
            }
            case Kind::Var: {
                const auto* a = lookup(env, e->name);
                if (!a) return nullptr;
                for (const auto& beta : *a)
                    if (leq(m_, *alpha, beta)) {
                        auto v = node("var", Env{{e->name, *a}}, e, beta);
                        return lower(lift(v, env), *alpha);
                    }
                return nullptr;
            }
            case Kind::TSum:
                for (const auto& s : e->summands)
                    if (leq(m_, *alpha, s.point))
                        if (auto p = derive_in(env, s.body, std::nullopt, d))
                            return lower(node("tbar-sum", env, e, s.point, {p}), *alpha);
                return nullptr;
            case Kind::Lam: {
                if (d == 0) return nullptr;
                auto [a, rest] = unfold1(m_, *alpha);
                Env inner = env;
                inner.emplace_back(e->name, a);
                std::sort(inner.begin(), inner.end());
                auto p = derive_in(inner, e->left, rest, d - 1);
                return p ? node("lam", env, e, *alpha, {p}) : nullptr;
            }
            case Kind::Jg: {
                if (d == 0) return nullptr;
                auto p = derive_in(env, app(build_G(e->g, e->index), jg(e->g, e->index + 1)), alpha, d - 1);
                return p ? node("delta-Jg", env, e, *alpha, {p}) : nullptr;
            }
            case Kind::App: return application(env, e, *alpha, d);
            case Kind::Hole: return nullptr;
        }
        return nullptr;
    }

    NodePtr application(const Env& env, const Expr& e, const Element& alpha, std::size_t d) {
        std::vector<Expr> args;
        Expr h = e;
        while (h->kind == Kind::App) {
            args.push_back(h->right);
            h = h->left;
        }
        std::reverse(args.begin(), args.end());
        const std::size_t k = args.size();
        if (h->kind == Kind::Var || h->kind == Kind::TSum) {
            if (d < k) return nullptr;
            // The head type is forced up to its argument antichains, which are
            // taken minimal: those of the unfolded environment point.
            std::vector<std::pair<Element, Expr>> heads;  // point available at the head, test under it
            if (h->kind == Kind::Var) {
                if (const auto* a = lookup(env, h->name))
                    for (const auto& b : *a) heads.emplace_back(b, nullptr);
            } else {
                for (const auto& s : h->summands) heads.emplace_back(s.point, s.body);
            }
            for (const auto& [beta, test] : heads) {
                auto [cs, gamma] = unfold(m_, beta, k);
                if (!leq(m_, alpha, gamma)) continue;
                auto r = spine(env, e, h, args, cs, beta, test, alpha, d);
                if (r) return r;
            }
            return nullptr;
        }
        if (d == 0) return nullptr;
        // Guess the argument antichain among the points of the window that
        // the argument has.
        std::vector<Element> has;
        for (const auto& beta : pool_)
            if (derive_in(env, e->right, beta, d - 1)) has.push_back(beta);
        // A larger b gives a smaller point b -> alpha for the function, so
        // only antichains of maximal points of the largest admissible size
        // need to be tried.
        const auto maxes = normalize_antichain(m_, has);
        std::vector<Antichain> candidates;
        if (maxes.size() <= static_cast<std::size_t>(width_)) candidates.push_back(maxes);
        else
            for (auto& b : enumerate_antichains(m_, maxes, width_))
                if (b.size() == static_cast<std::size_t>(width_)) candidates.push_back(std::move(b));
        for (const auto& b : candidates) {
            auto f = derive_in(env, e->left, fold(m_, b, alpha), d - 1);
            if (!f) continue;
            std::vector<NodePtr> ps{f};
            for (const auto& beta : b) ps.push_back(derive_in(env, e->right, beta, d - 1));
            return node("app", env, e, alpha, std::move(ps));
        }
        return nullptr;
    }

    NodePtr spine(const Env& env, const Expr& e, const Expr& h, const std::vector<Expr>& args,
                  const std::vector<Antichain>& cs, const Element& beta, const Expr& test, const Element& alpha,
                  std::size_t d) {
        const std::size_t k = args.size();
        // Argument i sits under k - i application nodes.
        std::vector<std::vector<NodePtr>> argd(k);
        for (std::size_t i = 0; i < k; ++i)
            for (const auto& c : cs[i]) {
                auto p = derive_in(env, args[i], c, d - (k - i));
                if (!p) return nullptr;
                argd[i].push_back(p);
            }
        NodePtr cur;
        const Element head_point = fold_all(m_, cs, alpha);
        if (h->kind == Kind::Var) {
            auto v = node("var", Env{{h->name, *lookup(env, h->name)}}, h, beta);
            cur = lower(lift(v, env), head_point);
        } else {
            auto p = derive_in(env, test, std::nullopt, d - k);
            if (!p) return nullptr;
            cur = lower(node("tbar-sum", env, h, beta, {p}), head_point);
        }
        Expr sub = h;
        for (std::size_t i = 0; i < k; ++i) {
            sub = app(sub, args[i]);
            std::vector<Antichain> rest(cs.begin() + static_cast<long>(i) + 1, cs.end());
            std::vector<NodePtr> ps{cur};
            ps.insert(ps.end(), argd[i].begin(), argd[i].end());
            cur = node("app", env, sub, fold_all(m_, rest, alpha), std::move(ps));
        }
        (void)e;
        return cur;
    }

    const Model& m_;
    std::vector<Element> pool_;
    int width_ = 2;
    std::map<std::tuple<Env, std::string, std::optional<Element>, std::size_t>, NodePtr> memo_;
};

Env sorted_env(Env env) {
    std::sort(env.begin(), env.end());
    return env;
}

bool same_subject(const Expr& a, const Expr& b) { return key(a) == key(b); }

bool check_node(const Model& m, const Derivation& d) {
    const auto& c = d.conclusion;
    const auto& ps = d.premises;
    const Env env = sorted_env(c.env);
    auto env_of = [](const Derivation& p) { return sorted_env(p.conclusion.env); };
    auto is_term = c.subject->is_term();
    if (is_term != c.point.has_value()) return false;
    for (const auto& p : ps)
        if (!check_node(m, p)) return false;
    const auto& r = d.rule;
    if (r == "var") {
        return ps.empty() && c.subject->kind == Kind::Var && env.size() == 1 && env[0].first == c.subject->name &&
               std::find(env[0].second.begin(), env[0].second.end(), *c.point) != env[0].second.end();
    }
    if (r == "weak") {
        if (ps.size() != 1 || !same_subject(ps[0].conclusion.subject, c.subject) || ps[0].conclusion.point != c.point)
            return false;
        for (const auto& b : env_of(ps[0]))
            if (std::find(env.begin(), env.end(), b) == env.end()) return false;
        return true;
    }
    if (r == "sub") {
        return ps.size() == 1 && same_subject(ps[0].conclusion.subject, c.subject) && env_of(ps[0]) == env &&
               is_term && ps[0].conclusion.point && leq(m, *c.point, *ps[0].conclusion.point);
    }
    if (r == "lam") {
        if (ps.size() != 1 || c.subject->kind != Kind::Lam) return false;
        const auto inner = env_of(ps[0]);
        if (inner.size() != env.size() + 1) return false;
        std::optional<std::pair<std::string, Antichain>> bound;
        for (const auto& b : inner)
            if (std::find(env.begin(), env.end(), b) == env.end()) {
                if (bound) return false;
                bound = b;
            }
        if (!bound || lookup(env, bound->first)) return false;
        return alpha_eq(c.subject, lam(bound->first, ps[0].conclusion.subject)) &&
               *c.point == fold(m, bound->second, *ps[0].conclusion.point);
    }
    if (r == "app") {
        if (ps.empty() || c.subject->kind != Kind::App) return false;
        for (const auto& p : ps)
            if (env_of(p) != env) return false;
        if (!same_subject(ps[0].conclusion.subject, c.subject->left)) return false;
        std::vector<Element> b;
        for (std::size_t i = 1; i < ps.size(); ++i) {
            if (!same_subject(ps[i].conclusion.subject, c.subject->right)) return false;
            b.push_back(*ps[i].conclusion.point);
        }
        auto a = normalize_antichain(m, b);
        if (a.size() != b.size()) return false;
        return ps[0].conclusion.point && *ps[0].conclusion.point == fold(m, a, *c.point);
    }
    if (r == "tbar-sum") {
        if (ps.size() != 1 || c.subject->kind != Kind::TSum || env_of(ps[0]) != env) return false;
        for (const auto& s : c.subject->summands)
            if (s.point == *c.point && same_subject(s.body, ps[0].conclusion.subject)) return true;
        return false;
    }
    if (r == "tau") {
        return ps.size() == 1 && c.subject->kind == Kind::Tau && env_of(ps[0]) == env &&
               same_subject(ps[0].conclusion.subject, c.subject->left) && ps[0].conclusion.point == c.subject->point;
    }
    if (r == "sum") {
        if (ps.size() != 1 || c.subject->kind != Kind::Sum || env_of(ps[0]) != env) return false;
        for (const auto& ch : c.subject->children)
            if (same_subject(ch, ps[0].conclusion.subject)) return true;
        return false;
    }
    if (r == "prod") {
        std::vector<Expr> kids;
        if (c.subject->kind == Kind::Prod) kids = c.subject->children;
        else return false;
        if (ps.size() != kids.size()) return false;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (env_of(ps[i]) != env || !same_subject(ps[i].conclusion.subject, kids[i])) return false;
        return true;
    }
    if (r == "delta-Jg") {
        if (ps.size() != 1 || c.subject->kind != Kind::Jg || env_of(ps[0]) != env) return false;
        const auto& s = c.subject;
        return same_subject(ps[0].conclusion.subject, app(build_G(s->g, s->index), jg(s->g, s->index + 1))) &&
               ps[0].conclusion.point == c.point;
    }
    return false;
}

void print_into(const Model& m, const Derivation& d, int indent, std::ostringstream& out) {
    out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << d.rule << "  " << print(m, d.conclusion) << '\n';
    for (const auto& p : d.premises) print_into(m, p, indent + 1, out);
}

}  // namespace

TypeVerdict derivable(const Model& m, const Judgment& j, std::size_t depth, const Window& w) {
    Searcher s(m, w);
    Env env = sorted_env(j.env);
    TypeVerdict v;
    v.bound = depth;
    if (auto r = s.derive_in(env, j.subject, j.point, depth)) {
        auto d = to_derivation(r);
        // Report the environment in the order it was given.
        if (d.conclusion.env != j.env) {
            if (d.rule == "weak") d.conclusion.env = j.env;
            else d = Derivation{"weak", j, {std::move(d)}};
        }
        v.derivation = std::move(d);
    }
    return v;
}

bool check_derivation(const Model& m, const Derivation& d) { return check_node(m, d); }

std::string print(const Model& m, const Derivation& d) {
    std::ostringstream out;
    print_into(m, d, 0, out);
    return out.str();
}

std::set<Point> interp_points(const Model& m, const Expr& term, const std::vector<std::string>& vars,
                              const Window& w, std::size_t depth) {
    for (const auto& x : term->fv)
        if (std::find(vars.begin(), vars.end(), x) == vars.end())
            throw std::invalid_argument("free variable " + x + " is not listed");
    const auto pool = enumerate_elements(m, w.depth, w.width);
    const auto antichains = enumerate_antichains(m, pool, w.width);
    Searcher s(m, w);
    std::set<Point> out;
    std::vector<Antichain> as(vars.size());
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == vars.size()) {
            Env env;
            for (std::size_t k = 0; k < vars.size(); ++k) env.emplace_back(vars[k], as[k]);
            std::sort(env.begin(), env.end());
            for (const auto& alpha : pool)
                if (s.derive_in(env, term, alpha, depth)) out.emplace(as, alpha);
            return;
        }
        for (const auto& a : antichains) {
            as[i] = a;
            go(i + 1);
        }
    };
    go(0);
    return out;
}

Trace member_op(const Model& m, const Expr& term, const Env& env, const Element& alpha, std::uint64_t fuel) {
    std::map<std::string, Expr> sigma;
    for (const auto& [x, a] : env) sigma[x] = eps_bar(a);
    return head_converges(m, tau(alpha, subst(term, sigma)), fuel);
}

bool typed_subst_check(const Model& m, const Env& env, const std::string& x, const Antichain& a,
                       const Expr& term, const Element& alpha, std::size_t depth, const Window& w) {
    Env with;
    for (const auto& b : env)
        if (b.first != x) with.push_back(b);
    Env without = with;
    with.emplace_back(x, a);
    auto lhs = derivable(m, Judgment{with, term, alpha}, depth, w).yes();
    auto rhs = derivable(m, Judgment{without, subst(term, x, eps_bar(a)), alpha}, depth, w).yes();
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Separating contexts

namespace {

void names_of(const Expr& e, std::vector<std::string>& out) {
    if (e->kind == Kind::Var || e->kind == Kind::Lam) out.push_back(e->name);
    for (const auto& c : {e->left, e->right})
        if (c) names_of(c, out);
    for (const auto& c : e->children) names_of(c, out);
    for (const auto& s : e->summands) names_of(s.body, out);
}

struct Hnf {
    std::vector<std::string> binders;
    std::string head;
    std::vector<Expr> args;
};

std::optional<Hnf> decompose(Expr e) {
    Hnf h;
    while (e->kind == Kind::Lam) {
        h.binders.push_back(e->name);
        e = e->left;
    }
    while (e->kind == Kind::App) {
        h.args.push_back(e->right);
        e = e->left;
    }
    if (e->kind != Kind::Var) return std::nullopt;
    h.head = e->name;
    std::reverse(h.args.begin(), h.args.end());
    return h;
}

const Model& pure_model() {
    static const Model m = builtin("dinf");
    return m;
}

class Separator {
public:
    explicit Separator(std::uint64_t fuel) : fuel_(fuel) {}

    std::optional<Expr> run(const Expr& M, const Expr& N, std::uint64_t budget, bool top) {
        if (++visited_ > 20000) return std::nullopt;
        auto tm = head_converges(pure_model(), M, fuel_);
        if (!tm.converged) {
            if (top) throw std::invalid_argument("the first term has no head normal form within fuel");
            return std::nullopt;
        }
        auto tn = head_converges(pure_model(), N, fuel_);
        if (!tn.converged) return validated(hole(), M, N);
        auto hm = decompose(tm.last());
        auto hn = decompose(tn.last());
        if (!hm || !hn) return std::nullopt;

        std::vector<std::string> avoid;
        names_of(M, avoid);
        names_of(N, avoid);
        names_of(tm.last(), avoid);
        names_of(tn.last(), avoid);
        auto fresh = [&](const std::string& base) {
            auto n = fresh_name(base, avoid);
            avoid.push_back(n);
            return n;
        };

        // Eta-equalize: apply both to as many fresh variables as the longer
        // abstraction prefix.
        const std::size_t lm = std::max(hm->binders.size(), hn->binders.size());
        std::vector<std::string> vs;
        for (std::size_t i = 0; i < lm; ++i) vs.push_back(fresh("v"));
        std::vector<Expr> vvars;
        for (const auto& v : vs) vvars.push_back(var(v));
        auto expand = [&](const Hnf& h) {
            std::map<std::string, Expr> sigma;
            for (std::size_t i = 0; i < h.binders.size(); ++i) sigma[h.binders[i]] = vvars[i];
            Hnf out;
            out.head = sigma.count(h.head) ? sigma[h.head]->name : h.head;
            for (const auto& a : h.args) out.args.push_back(subst(a, sigma));
            for (std::size_t i = h.binders.size(); i < lm; ++i) out.args.push_back(vvars[i]);
            return out;
        };
        const Hnf em = expand(*hm);
        const Hnf en = expand(*hn);
        const Expr omega = combinator("Omega");
        const Expr id = combinator("I");
        auto frame = [&](const std::string& y, const Expr& P, const std::vector<Expr>& extra) {
            return apps(app(lam(y, apps(hole(), vvars)), P), extra);
        };

        if (em.head != en.head) return validated(frame(en.head, omega, {}), M, N);

        const std::size_t k = em.args.size(), k2 = en.args.size();
        if (k != k2) {
            const std::size_t K = std::max(k, k2);
            std::vector<std::string> zs;
            for (std::size_t i = 0; i <= K; ++i) zs.push_back(fresh("z"));
            const Expr P = lams(zs, var(zs.back()));
            const std::size_t r = (k > k2 ? k - k2 : k2 - k) + 1;
            std::vector<Expr> as(r, id);
            if (k > k2) {
                // M selects the first extra argument, which discards the rest.
                std::vector<std::string> ws;
                for (std::size_t i = 0; i + 1 < r; ++i) ws.push_back(fresh("w"));
                as[0] = lams(ws, var(fresh("x")));
                as[r - 1] = omega;
            } else {
                as[0] = omega;
            }
            return validated(frame(em.head, P, as), M, N);
        }

        if (budget == 0) return std::nullopt;
        for (std::size_t i = 0; i < k; ++i) {
            std::optional<Expr> inner;
            try {
                inner = run(em.args[i], en.args[i], budget - 1, false);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (!inner) continue;
            std::vector<std::string> local = avoid;
            names_of(*inner, local);
            std::vector<std::string> zs;
            for (std::size_t j = 0; j < k; ++j) {
                zs.push_back(fresh_name("z", local));
                local.push_back(zs.back());
            }
            const Expr P = lams(zs, fill(*inner, var(zs[i])));
            if (auto c = validated(frame(em.head, P, {}), M, N)) return c;
            // Substituting into the inner context renames the binders it uses
            // to capture free variables of the argument, so also try running
            // the inner context around the selected argument.
            if (auto c = validated(fill(*inner, frame(em.head, lams(zs, var(zs[i])), {})), M, N)) return c;
        }
        return std::nullopt;
    }

private:
    std::optional<Expr> validated(const Expr& c, const Expr& M, const Expr& N) const {
        if (!head_converges(pure_model(), fill(c, M), fuel_).converged) return std::nullopt;
        if (head_converges(pure_model(), fill(c, N), fuel_).converged) return std::nullopt;
        return c;
    }

    std::uint64_t fuel_;
    std::size_t visited_ = 0;
};

}  // namespace

std::optional<Expr> separating_context(const Expr& m_term, const Expr& n_term, std::uint64_t fuel) {
    Separator s(fuel);
    return s.run(m_term, n_term, fuel, true);
}

}  // namespace lamtest
