#include "lamtest/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace lamtest {

namespace {

std::vector<std::string> merge_fv(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::shared_ptr<Node> make(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

std::string element_key(const Element& e) {
    if (e.is_atom()) return "a" + std::to_string(e.atom_index());
    std::string s = "{";
    for (std::size_t i = 0; i < e.head().size(); ++i) {
        if (i) s += ",";
        s += element_key(e.head()[i]);
    }
    return s + "}>" + element_key(e.tail());
}

bool binds_any(const Node& n, const std::vector<std::string>& env) {
    for (const auto& x : n.fv)
        if (std::find(env.begin(), env.end(), x) != env.end()) return true;
    return false;
}

std::string key_in(const Expr& e, std::vector<std::string>& env);

std::string local_key(const Expr& e) {
    if (e->key_cache.empty()) {
        std::vector<std::string> env;
        e->key_cache = key_in(e, env);
    }
    return e->key_cache;
}

std::string key_in(const Expr& e, std::vector<std::string>& env) {
    if (!env.empty() && !binds_any(*e, env)) return local_key(e);
    if (env.empty() && !e->key_cache.empty()) return e->key_cache;
    auto sorted_join = [](std::vector<std::string> parts) {
        std::sort(parts.begin(), parts.end());
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ",";
            s += parts[i];
        }
        return s;
    };
    switch (e->kind) {
        case Kind::Var:
            for (std::size_t i = env.size(); i-- > 0;)
                if (env[i] == e->name) return "#" + std::to_string(env.size() - 1 - i);
            return "$" + e->name;
        case Kind::Lam: {
            env.push_back(e->name);
            std::string s = "L(" + key_in(e->left, env) + ")";
            env.pop_back();
            return s;
        }
        case Kind::App: return "A(" + key_in(e->left, env) + "," + key_in(e->right, env) + ")";
        case Kind::TSum: {
            std::vector<std::string> parts;
            for (const auto& s : e->summands)
                parts.push_back("b" + element_key(s.point) + "(" + key_in(s.body, env) + ")");
            return "T[" + sorted_join(parts) + "]";
        }
        case Kind::Sum:
        case Kind::Prod: {
            std::vector<std::string> parts;
            for (const auto& c : e->children) parts.push_back(key_in(c, env));
            return (e->kind == Kind::Sum ? "S[" : "P[") + sorted_join(parts) + "]";
        }
        case Kind::Tau: return "u" + element_key(e->point) + "(" + key_in(e->left, env) + ")";
        case Kind::Jg: return "J" + e->g.str() + ":" + std::to_string(e->index);
        case Kind::Hole: return "H";
    }
    return "";
}

std::string summand_key(const Summand& s) { return "b" + element_key(s.point) + "(" + local_key(s.body) + ")"; }

}  // namespace

std::string key(const Expr& e) { return local_key(e); }

bool alpha_eq(const Expr& a, const Expr& b) { return a == b || key(a) == key(b); }

// ---------------------------------------------------------------- constructors

Expr var(std::string name) {
    auto n = make(Kind::Var);
    n->fv = {name};
    n->name = std::move(name);
    return n;
}

Expr lam(std::string binder, Expr body) {
    if (!body->is_term()) throw std::invalid_argument("lambda body must be a term");
    auto n = make(Kind::Lam);
    n->fv = body->fv;
    n->fv.erase(std::remove(n->fv.begin(), n->fv.end(), binder), n->fv.end());
    n->size = body->size + 1;
    n->name = std::move(binder);
    n->left = std::move(body);
    return n;
}

Expr lams(const std::vector<std::string>& binders, Expr body) {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = lam(*it, body);
    return body;
}

Expr app(Expr fn, Expr arg) {
    if (!fn->is_term() || !arg->is_term()) throw std::invalid_argument("application of a non-term");
    auto n = make(Kind::App);
    n->fv = merge_fv(fn->fv, arg->fv);
    n->size = fn->size + arg->size + 1;
    n->left = std::move(fn);
    n->right = std::move(arg);
    return n;
}

Expr apps(Expr head, const std::vector<Expr>& args) {
    for (const auto& a : args) head = app(head, a);
    return head;
}

Expr tsum(std::vector<Summand> summands) {
    auto n = make(Kind::TSum);
    for (const auto& s : summands) {
        if (!s.body->is_test()) throw std::invalid_argument("tbar body must be a test");
        n->fv = merge_fv(n->fv, s.body->fv);
        n->size += s.body->size + 1;
    }
    std::vector<std::pair<std::string, Summand>> keyed;
    for (auto& s : summands) keyed.emplace_back(summand_key(s), std::move(s));
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [k, s] : keyed) n->summands.push_back(std::move(s));
    return n;
}

Expr tbar(Element point, Expr test) { return tsum({Summand{std::move(point), std::move(test)}}); }

Expr term_sum(const std::vector<Expr>& terms) {
    std::vector<Summand> all;
    for (const auto& t : terms) {
        if (t->kind != Kind::TSum) throw std::invalid_argument("only tbar-sums can be added as terms");
        all.insert(all.end(), t->summands.begin(), t->summands.end());
    }
    return tsum(std::move(all));
}

Expr jg(GSpec g, std::uint64_t index) {
    auto n = make(Kind::Jg);
    n->g = std::move(g);
    n->index = index;
    return n;
}

Expr hole() { return make(Kind::Hole); }

namespace {

Expr multiset(Kind k, std::vector<Expr> items) {
    std::vector<Expr> flat;
    for (auto& c : items) {
        if (!c->is_test()) throw std::invalid_argument("sums and products of tests only");
        if (c->kind == k)
            flat.insert(flat.end(), c->children.begin(), c->children.end());
        else
            flat.push_back(std::move(c));
    }
    if (flat.size() == 1) return flat[0];
    auto n = make(k);
    for (const auto& c : flat) {
        n->fv = merge_fv(n->fv, c->fv);
        n->size += c->size;
    }
    std::vector<std::pair<std::string, Expr>> keyed;
    for (auto& c : flat) keyed.emplace_back(key(c), std::move(c));
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [kk, c] : keyed) n->children.push_back(std::move(c));
    return n;
}

}  // namespace

Expr sum(std::vector<Expr> tests) { return multiset(Kind::Sum, std::move(tests)); }
Expr prod(std::vector<Expr> tests) { return multiset(Kind::Prod, std::move(tests)); }

Expr tau(Element point, Expr term) {
    if (!term->is_term()) throw std::invalid_argument("tau body must be a term");
    auto n = make(Kind::Tau);
    n->fv = term->fv;
    n->size = term->size + 1;
    n->point = std::move(point);
    n->left = std::move(term);
    return n;
}

Expr zero_term() { return tsum({}); }
Expr zero_test() { return make(Kind::Sum); }
Expr eps() { return make(Kind::Prod); }

Expr eps_bar(const Antichain& a) {
    std::vector<Summand> s;
    for (const auto& x : a) s.push_back({x, eps()});
    return tsum(std::move(s));
}

bool is_zero(const Expr& e) {
    return (e->kind == Kind::Sum && e->children.empty()) || (e->kind == Kind::TSum && e->summands.empty());
}

bool is_eps(const Expr& e) { return e->kind == Kind::Prod && e->children.empty(); }

bool free_in(const std::string& x, const Expr& e) { return std::binary_search(e->fv.begin(), e->fv.end(), x); }

// ---------------------------------------------------------------- combinators

Expr combinator(std::string_view name) {
    auto v = [](const char* s) { return var(s); };
    if (name == "I") return lam("x", v("x"));
    if (name == "S") return lams({"u", "f", "x"}, app(app(v("u"), v("f")), app(v("f"), v("x"))));
    if (name == "Omega") {
        auto d = lam("x", app(v("x"), v("x")));
        return app(d, d);
    }
    if (name == "Theta") {
        auto t = lams({"u", "v"}, app(v("v"), app(app(v("u"), v("u")), v("v"))));
        return app(t, t);
    }
    throw std::invalid_argument("unknown combinator: " + std::string(name));
}

Expr church(std::uint64_t n) {
    Expr body = var("x");
    for (std::uint64_t i = 0; i < n; ++i) body = app(var("f"), body);
    return lams({"f", "x"}, body);
}

Expr build_G(const GSpec& g, std::uint64_t n) {
    const auto k = g(n);
    std::vector<std::string> binders{"u", "e"};
    Expr body = var("e");
    for (std::uint64_t i = 1; i <= k; ++i) {
        std::string x = "x" + std::to_string(i);
        binders.push_back(x);
        body = app(body, app(var("u"), var(x)));
    }
    return lams(binders, body);
}

// ---------------------------------------------------------------- substitution

std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid) {
    std::string name = base + "'";
    while (std::find(avoid.begin(), avoid.end(), name) != avoid.end()) name += "'";
    return name;
}

Expr subst(const Expr& e, const std::map<std::string, Expr>& sigma_in) {
    std::map<std::string, Expr> sigma;
    for (const auto& x : e->fv)
        if (auto it = sigma_in.find(x); it != sigma_in.end()) sigma.emplace(x, it->second);
    if (sigma.empty()) return e;
    switch (e->kind) {
        case Kind::Var: return sigma.at(e->name);
        case Kind::Lam: {
            std::vector<std::string> range;
            for (const auto& [x, t] : sigma) range = merge_fv(range, t->fv);
            std::string binder = e->name;
            if (std::binary_search(range.begin(), range.end(), binder)) {
                auto avoid = merge_fv(range, e->left->fv);
                for (const auto& [x, t] : sigma) avoid.push_back(x);
                binder = fresh_name(e->name, avoid);
                sigma[e->name] = var(binder);
            }
            return lam(binder, subst(e->left, sigma));
        }
        case Kind::App: return app(subst(e->left, sigma), subst(e->right, sigma));
        case Kind::TSum: {
            std::vector<Summand> s;
            for (const auto& x : e->summands) s.push_back({x.point, subst(x.body, sigma)});
            return tsum(std::move(s));
        }
        case Kind::Sum:
        case Kind::Prod: {
            std::vector<Expr> c;
            for (const auto& x : e->children) c.push_back(subst(x, sigma));
            return e->kind == Kind::Sum ? sum(std::move(c)) : prod(std::move(c));
        }
        case Kind::Tau: return tau(e->point, subst(e->left, sigma));
        case Kind::Jg:
        case Kind::Hole: return e;
    }
    return e;
}

Expr subst(const Expr& e, const std::string& x, const Expr& n) { return subst(e, std::map<std::string, Expr>{{x, n}}); }

Expr fill(const Expr& c, const Expr& e) {
    switch (c->kind) {
        case Kind::Hole: return e;
        case Kind::Var:
        case Kind::Jg: return c;
        case Kind::Lam: return lam(c->name, fill(c->left, e));
        case Kind::App: return app(fill(c->left, e), fill(c->right, e));
        case Kind::TSum: {
            std::vector<Summand> s;
            for (const auto& x : c->summands) s.push_back({x.point, fill(x.body, e)});
            return tsum(std::move(s));
        }
        case Kind::Sum:
        case Kind::Prod: {
            std::vector<Expr> ch;
            for (const auto& x : c->children) ch.push_back(fill(x, e));
            return c->kind == Kind::Sum ? sum(std::move(ch)) : prod(std::move(ch));
        }
        case Kind::Tau: return tau(c->point, fill(c->left, e));
    }
    return c;
}

// ---------------------------------------------------------------- printing

namespace {

void print_into(const Model& m, const Expr& e, int prec, std::string& out) {
    auto paren = [&](bool need, auto&& body) {
        if (need) out += "(";
        body();
        if (need) out += ")";
    };
    switch (e->kind) {
        case Kind::Var: out += e->name; return;
        case Kind::Hole: out += "[]"; return;
        case Kind::Jg: out += "Jg[" + e->g.str() + "](" + std::to_string(e->index) + ")"; return;
        case Kind::Lam:
            paren(prec > 0, [&] {
                out += "\\" + e->name;
                Expr body = e->left;
                while (body->kind == Kind::Lam) {
                    out += " " + body->name;
                    body = body->left;
                }
                out += ". ";
                print_into(m, body, 0, out);
            });
            return;
        case Kind::App:
            paren(prec > 2, [&] {
                print_into(m, e->left, 2, out);
                out += " ";
                print_into(m, e->right, 3, out);
            });
            return;
        case Kind::TSum:
            if (e->summands.empty()) {
                out += "0";
                return;
            }
            paren(prec > 0 && e->summands.size() > 1, [&] {
                for (std::size_t i = 0; i < e->summands.size(); ++i) {
                    if (i) out += " + ";
                    out += "tb<" + print(m, e->summands[i].point) + ">(";
                    print_into(m, e->summands[i].body, 0, out);
                    out += ")";
                }
            });
            return;
        case Kind::Sum:
            if (e->children.empty()) {
                out += "0";
                return;
            }
            paren(prec > 0, [&] {
                for (std::size_t i = 0; i < e->children.size(); ++i) {
                    if (i) out += " + ";
                    print_into(m, e->children[i], 1, out);
                }
            });
            return;
        case Kind::Prod:
            if (e->children.empty()) {
                out += "eps";
                return;
            }
            paren(prec > 1, [&] {
                for (std::size_t i = 0; i < e->children.size(); ++i) {
                    if (i) out += " * ";
                    print_into(m, e->children[i], 2, out);
                }
            });
            return;
        case Kind::Tau:
            out += "tau<" + print(m, e->point) + ">(";
            print_into(m, e->left, 0, out);
            out += ")";
            return;
    }
}

}  // namespace

std::string print(const Model& m, const Expr& e) {
    std::string out;
    print_into(m, e, 0, out);
    return out;
}

std::string print_path(const Path& p) {
    if (p.empty()) return "root";
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ".";
        s += std::to_string(p[i]);
    }
    return s;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Raw {
    enum K { Var, Lam, App, Plus, Times, Tau, TBar, EBar, Eps, Zero, Const, Hole } k;
    std::size_t pos = 0;
    std::string name;
    std::vector<std::string> binders;
    std::vector<Raw> kids;
    Element point;
    Antichain anti;
    Expr value;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

const std::set<std::string, std::less<>> kKeywords{"tau", "tb", "eb", "eps", "I", "S", "Theta",
                                                     "Omega", "church", "G", "Jg"};

class Parser {
public:
    Parser(const Model& m, std::string_view text) : m_(m), c_{text} {}

    Raw parse_all() {
        Raw r = parse_sum();
        if (!c_.eof()) c_.fail("unexpected input");
        return r;
    }

    Cursor& cursor() { return c_; }

    Raw parse_sum() {
        std::size_t pos = here();
        std::vector<Raw> items{parse_prod()};
        while (c_.accept("+")) items.push_back(parse_prod());
        if (items.size() == 1) return std::move(items[0]);
        Raw r{Raw::Plus, pos};
        r.kids = std::move(items);
        return r;
    }

private:
    const Model& m_;
    Cursor c_;

    std::size_t here() {
        c_.skip_ws();
        return c_.pos;
    }

    Raw parse_prod() {
        std::size_t pos = here();
        std::vector<Raw> items{parse_app()};
        while (c_.accept("*")) items.push_back(parse_app());
        if (items.size() == 1) return std::move(items[0]);
        Raw r{Raw::Times, pos};
        r.kids = std::move(items);
        return r;
    }

    bool atom_starts() {
        char ch = c_.peek();
        if (ch == '(' || ch == '\\' || ch == '[') return true;
        if (ch == '0') return true;
        return ident_start(ch);
    }

    Raw parse_app() {
        if (c_.peek() == '\\') return parse_lam();
        std::size_t pos = here();
        Raw head = parse_atom();
        while (!c_.eof() && atom_starts()) {
            Raw arg = c_.peek() == '\\' ? parse_lam() : parse_atom();
            Raw a{Raw::App, pos};
            a.kids.push_back(std::move(head));
            a.kids.push_back(std::move(arg));
            head = std::move(a);
        }
        return head;
    }

    Raw parse_lam() {
        std::size_t pos = here();
        c_.expect("\\");
        Raw r{Raw::Lam, pos};
        while (ident_start(c_.peek())) {
            std::string name = ident();
            if (kKeywords.count(name)) c_.fail("reserved word '" + name + "' used as a binder");
            r.binders.push_back(name);
        }
        if (r.binders.empty()) c_.fail("expected a binder");
        c_.expect(".");
        r.kids.push_back(parse_sum());
        return r;
    }

    std::string ident() {
        c_.skip_ws();
        std::size_t start = c_.pos;
        if (!ident_start(c_.peek())) c_.fail("expected an identifier");
        while (c_.pos < c_.text.size() && ident_char(c_.text[c_.pos])) ++c_.pos;
        return std::string(c_.text.substr(start, c_.pos - start));
    }

    std::uint64_t number() {
        c_.skip_ws();
        std::size_t start = c_.pos;
        while (c_.pos < c_.text.size() && std::isdigit(static_cast<unsigned char>(c_.text[c_.pos]))) ++c_.pos;
        if (start == c_.pos) c_.fail("expected a number");
        return std::stoull(std::string(c_.text.substr(start, c_.pos - start)));
    }

    GSpec gspec() {
        c_.expect("[");
        std::size_t start = c_.pos;
        auto close = c_.text.find(']', start);
        if (close == std::string_view::npos) c_.fail("unterminated g specification");
        GSpec g;
        try {
            g = parse_gspec(c_.text.substr(start, close - start));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), start);
        }
        c_.pos = close + 1;
        return g;
    }

    std::uint64_t paren_number() {
        c_.expect("(");
        auto n = number();
        c_.expect(")");
        return n;
    }

    Raw parse_atom() {
        std::size_t pos = here();
        char ch = c_.peek();
        if (ch == '(') {
            c_.expect("(");
            Raw r = parse_sum();
            c_.expect(")");
            return r;
        }
        if (ch == '[') {
            c_.expect("[");
            c_.expect("]");
            return Raw{Raw::Hole, pos};
        }
        if (ch == '0') {
            ++c_.pos;
            if (c_.pos < c_.text.size() && ident_char(c_.text[c_.pos])) c_.fail("unexpected digits");
            return Raw{Raw::Zero, pos};
        }
        std::string name = ident();
        if (name == "tau" || name == "tb") {
            c_.expect("<");
            Element e = parse_element(m_, c_);
            c_.expect(">");
            c_.expect("(");
            Raw r{name == "tau" ? Raw::Tau : Raw::TBar, pos};
            r.point = e;
            r.kids.push_back(parse_sum());
            c_.expect(")");
            return r;
        }
        if (name == "eb") {
            c_.expect("<");
            Raw r{Raw::EBar, pos};
            r.anti = parse_antichain(m_, c_);
            c_.expect(">");
            return r;
        }
        if (name == "eps") return Raw{Raw::Eps, pos};
        Raw r{Raw::Const, pos};
        if (name == "I" || name == "S" || name == "Theta" || name == "Omega") {
            r.value = combinator(name);
        } else if (name == "church") {
            r.value = church(paren_number());
        } else if (name == "G") {
            GSpec g = gspec();
            r.value = build_G(g, paren_number());
        } else if (name == "Jg") {
            GSpec g = gspec();
            r.value = jg(g, paren_number());
        } else {
            r.k = Raw::Var;
            r.name = name;
        }
        return r;
    }
};

Sort infer(const Raw& r) {
    switch (r.k) {
        case Raw::Var:
        case Raw::Lam:
        case Raw::App:
        case Raw::TBar:
        case Raw::EBar:
        case Raw::Const:
        case Raw::Hole: return Sort::Term;
        case Raw::Tau:
        case Raw::Eps:
        case Raw::Times: return Sort::Test;
        case Raw::Zero: return Sort::Any;
        case Raw::Plus:
            for (const auto& k : r.kids)
                if (auto s = infer(k); s != Sort::Any) return s;
            return Sort::Any;
    }
    return Sort::Any;
}

Expr elaborate(const Raw& r, Sort want) {
    if (want == Sort::Any) want = infer(r);
    if (want == Sort::Any) want = Sort::Test;
    Sort have = infer(r);
    if (have != Sort::Any && have != want)
        throw ParseError(want == Sort::Term ? "expected a term, found a test" : "expected a test, found a term", r.pos);
    switch (r.k) {
        case Raw::Var: return var(r.name);
        case Raw::Const: return r.value;
        case Raw::Hole: return hole();
        case Raw::Lam: return lams(r.binders, elaborate(r.kids[0], Sort::Term));
        case Raw::App: return app(elaborate(r.kids[0], Sort::Term), elaborate(r.kids[1], Sort::Term));
        case Raw::TBar: return tbar(r.point, elaborate(r.kids[0], Sort::Test));
        case Raw::EBar: return eps_bar(r.anti);
        case Raw::Tau: return tau(r.point, elaborate(r.kids[0], Sort::Term));
        case Raw::Eps: return eps();
        case Raw::Zero: return want == Sort::Term ? zero_term() : zero_test();
        case Raw::Times: {
            std::vector<Expr> kids;
            for (const auto& k : r.kids) kids.push_back(elaborate(k, Sort::Test));
            return prod(std::move(kids));
        }
        case Raw::Plus: {
            std::vector<Expr> kids;
            for (const auto& k : r.kids) kids.push_back(elaborate(k, want));
            if (want == Sort::Test) return sum(std::move(kids));
            for (std::size_t i = 0; i < kids.size(); ++i)
                if (kids[i]->kind != Kind::TSum) throw ParseError("only tbar-sums can be added as terms", r.kids[i].pos);
            return term_sum(kids);
        }
    }
    return nullptr;
}

}  // namespace

Expr parse(const Model& m, std::string_view text, Sort expected) {
    Parser p(m, text);
    if (p.cursor().eof()) throw ParseError("empty expression", 0);
    return elaborate(p.parse_all(), expected);
}

Judgment parse_judgment(const Model& m, std::string_view text) {
    auto turnstile = text.find("|-");
    if (turnstile == std::string_view::npos) throw ParseError("expected '|-' in judgment", 0);
    Judgment j;
    Cursor c{text.substr(0, turnstile)};
    while (!c.eof()) {
        c.skip_ws();
        std::size_t start = c.pos;
        while (c.pos < c.text.size() && ident_char(c.text[c.pos])) ++c.pos;
        if (c.pos == start) c.fail("expected a variable in the environment");
        std::string name(c.text.substr(start, c.pos - start));
        c.expect(":");
        j.env.emplace_back(name, parse_antichain(m, c));
        if (!c.accept(",")) break;
    }
    if (!c.eof()) c.fail("malformed environment");
    std::string_view rest = text.substr(turnstile + 2);
    auto colon = rest.rfind(':');
    try {
        if (colon == std::string_view::npos) {
            j.subject = parse(m, rest, Sort::Test);
        } else {
            j.subject = parse(m, rest.substr(0, colon), Sort::Term);
            j.point = parse_element(m, rest.substr(colon + 1));
        }
    } catch (const ParseError& e) {
        throw ParseError(e.detail, turnstile + 2 + e.position);
    }
    for (const auto& x : j.subject->fv) {
        bool bound = std::any_of(j.env.begin(), j.env.end(), [&](const auto& b) { return b.first == x; });
        if (!bound) throw ParseError("free variable " + x + " is not bound by the environment", turnstile);
    }
    return j;
}

std::string print(const Model& m, const Judgment& j) {
    std::string s;
    for (std::size_t i = 0; i < j.env.size(); ++i) {
        if (i) s += ", ";
        s += j.env[i].first + ":" + print(m, j.env[i].second);
    }
    s += s.empty() ? "|- " : " |- ";
    s += print(m, j.subject);
    if (j.point) s += " : " + print(m, *j.point);
    return s;
}

}  // namespace lamtest
