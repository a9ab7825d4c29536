#include "lamtest/kmodel.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace lamtest {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Element Element::atom(int index) {
    auto n = std::make_shared<ElementNode>();
    n->atom = index;
    n->hash = mix(17, static_cast<std::size_t>(index));
    Element e;
    e.node_ = std::move(n);
    return e;
}

Element Element::arrow(Antichain head, Element tail) {
    auto n = std::make_shared<ElementNode>();
    std::size_t h = mix(31, tail.hash());
    int depth = tail.depth();
    for (const auto& x : head) {
        h = mix(h, x.hash());
        depth = std::max(depth, x.depth());
    }
    n->head = std::move(head);
    n->tail = std::move(tail);
    n->depth = depth + 1;
    n->hash = h;
    Element e;
    e.node_ = std::move(n);
    return e;
}

int compare(const Element& a, const Element& b) {
    if (a.node_ == b.node_) return 0;
    if (a.is_atom() != b.is_atom()) return a.is_atom() ? -1 : 1;
    if (a.is_atom()) return a.atom_index() < b.atom_index() ? -1 : (a.atom_index() > b.atom_index() ? 1 : 0);
    if (int c = compare(a.head(), b.head()); c != 0) return c;
    return compare(a.tail(), b.tail());
}

int compare(const Antichain& a, const Antichain& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (int c = compare(a[i], b[i]); c != 0) return c;
    return 0;
}

// ---------------------------------------------------------------- GSpec

GSpec GSpec::constant(std::uint64_t k) {
    GSpec g;
    g.kind = Kind::Const;
    g.k = k;
    return g;
}

GSpec GSpec::from_table(std::vector<std::uint64_t> values) {
    if (values.empty()) throw std::invalid_argument("empty g table");
    GSpec g;
    g.kind = Kind::Table;
    g.table = std::move(values);
    return g;
}

GSpec GSpec::affine(std::uint64_t a, std::uint64_t b) {
    GSpec g;
    g.kind = Kind::Affine;
    g.a = a;
    g.b = b;
    return g;
}

std::uint64_t GSpec::operator()(std::uint64_t n) const {
    switch (kind) {
        case Kind::Const: return k;
        case Kind::Table: return n < table.size() ? table[n] : table.back();
        case Kind::Affine: return a * n + b;
    }
    return 0;
}

bool GSpec::constant_from(std::uint64_t n) const {
    switch (kind) {
        case Kind::Const: return true;
        case Kind::Table: return n + 1 >= table.size();
        case Kind::Affine: return a == 0;
    }
    return false;
}

std::string GSpec::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Const: os << "const " << k; break;
        case Kind::Table:
            os << "table ";
            for (std::size_t i = 0; i < table.size(); ++i) os << (i ? "," : "") << table[i];
            break;
        case Kind::Affine: os << "affine " << a << " " << b; break;
    }
    return os.str();
}

GSpec parse_gspec(std::string_view text) {
    std::string s(text);
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::string kind;
    in >> kind;
    auto numbers = [&] {
        std::vector<std::uint64_t> v;
        long long x;
        while (in >> x) {
            if (x < 0) throw std::invalid_argument("negative value in g specification");
            v.push_back(static_cast<std::uint64_t>(x));
        }
        if (!in.eof()) throw std::invalid_argument("malformed g specification: " + std::string(text));
        return v;
    };
    if (kind == "const") {
        auto v = numbers();
        if (v.size() != 1) throw std::invalid_argument("const expects one value");
        return GSpec::constant(v[0]);
    }
    if (kind == "table") {
        auto v = numbers();
        if (v.empty()) throw std::invalid_argument("table expects values");
        return GSpec::from_table(std::move(v));
    }
    if (kind == "affine") {
        auto v = numbers();
        if (v.size() != 2) throw std::invalid_argument("affine expects two values");
        return GSpec::affine(v[0], v[1]);
    }
    throw std::invalid_argument("unknown g specification: " + std::string(text));
}

// ---------------------------------------------------------------- Model

std::optional<int> Model::find_atom(std::string_view name) const {
    auto it = atom_index_.find(name);
    if (it == atom_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Model::lookup(const Antichain& head, const Element& tail) const {
    auto it = j_.find({head, tail});
    if (it == j_.end()) return std::nullopt;
    return it->second;
}

namespace {

bool atoms_antichain_leq(const std::vector<std::vector<bool>>& order, const Antichain& a,
                         const Antichain& b) {
    for (const auto& x : a) {
        bool found = false;
        for (const auto& y : b)
            if (order[x.atom_index()][y.atom_index()]) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

}  // namespace

Model Model::make(std::string name, std::vector<std::string> atoms,
                  const std::vector<std::pair<int, int>>& strict_order, std::vector<Entry> entries,
                  bool windowed, std::optional<std::vector<int>> shift) {
    Model m;
    m.name_ = std::move(name);
    m.atoms_ = std::move(atoms);
    const int n = static_cast<int>(m.atoms_.size());
    for (int i = 0; i < n; ++i)
        if (!m.atom_index_.emplace(m.atoms_[i], i).second)
            throw ModelError("duplicate atom " + m.atoms_[i]);

    m.order_.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) m.order_[i][i] = true;
    for (auto [a, b] : strict_order) m.order_[a][b] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (m.order_[i][k])
                for (int j = 0; j < n; ++j)
                    if (m.order_[k][j]) m.order_[i][j] = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m.order_[i][j] && m.order_[j][i])
                throw ModelError("order is not antisymmetric: " + m.atoms_[i] + " and " + m.atoms_[j]);

    m.preimage_.assign(n, std::nullopt);
    for (auto& e : entries) {
        if (!e.tail.is_atom()) throw ModelError("j entry tail must be an atom");
        std::sort(e.head.begin(), e.head.end());
        for (std::size_t i = 0; i < e.head.size(); ++i) {
            if (!e.head[i].is_atom()) throw ModelError("j entry antichain must contain atoms");
            for (std::size_t k = 0; k < i; ++k) {
                int x = e.head[i].atom_index(), y = e.head[k].atom_index();
                if (x == y || m.order_[x][y] || m.order_[y][x])
                    throw ModelError("j entry head for " + m.atoms_[e.image] + " is not an antichain");
            }
        }
        if (!m.j_.emplace(std::make_pair(e.head, e.tail), e.image).second)
            throw ModelError("j is not a function: duplicate domain point");
        if (m.preimage_[e.image]) throw ModelError("j is not injective: two entries map to " + m.atoms_[e.image]);
        m.preimage_[e.image] = e;
    }
    if (!windowed)
        for (int i = 0; i < n; ++i)
            if (!m.preimage_[i]) throw ModelError("j is not surjective: atom " + m.atoms_[i] + " has no preimage");

    for (const auto& e1 : entries)
        for (const auto& e2 : entries) {
            bool img = m.order_[e1.image][e2.image];
            bool dom = atoms_antichain_leq(m.order_, e2.head, e1.head) &&
                       m.order_[e1.tail.atom_index()][e2.tail.atom_index()];
            if (img != dom)
                throw ModelError("j is not an order isomorphism between " + m.atoms_[e1.image] + " and " +
                                 m.atoms_[e2.image]);
        }
    m.entries_ = std::move(entries);
    std::sort(m.entries_.begin(), m.entries_.end(),
              [](const Entry& a, const Entry& b) { return a.image < b.image; });
    m.shift_ = std::move(shift);
    m.windowed_ = windowed;
    return m;
}

bool operator==(const Model& a, const Model& b) {
    if (a.atoms_ != b.atoms_ || a.order_ != b.order_ || a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
        const auto& x = a.entries_[i];
        const auto& y = b.entries_[i];
        if (x.image != y.image || compare(x.head, y.head) != 0 || x.tail != y.tail) return false;
    }
    return true;
}

// ---------------------------------------------------------------- order

std::pair<Antichain, Element> unfold1(const Model& m, const Element& alpha) {
    if (!alpha.is_atom()) return {alpha.head(), alpha.tail()};
    if (alpha.atom_index() >= m.atom_count()) throw ModelError("element does not belong to model " + m.name());
    const auto& pre = m.preimage(alpha.atom_index());
    if (!pre)
        throw ResourceError("unfolding atom " + m.atoms()[alpha.atom_index()] +
                            " leaves the materialized window of model " + m.name());
    return {pre->head, pre->tail};
}

bool leq(const Model& m, const Element& a, const Element& b) {
    if (a.is_atom() && b.is_atom()) {
        if (a.atom_index() >= m.atom_count() || b.atom_index() >= m.atom_count())
            throw ModelError("element does not belong to model " + m.name());
        return m.atom_leq(a.atom_index(), b.atom_index());
    }
    auto [ha, ta] = unfold1(m, a);
    auto [hb, tb] = unfold1(m, b);
    return antichain_leq(m, hb, ha) && leq(m, ta, tb);
}

bool antichain_leq(const Model& m, const Antichain& a, const Antichain& b) {
    for (const auto& x : a) {
        bool found = false;
        for (const auto& y : b)
            if (leq(m, x, y)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

Antichain normalize_antichain(const Model& m, std::vector<Element> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    Antichain out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < s.size() && !dominated; ++k)
            if (k != i && leq(m, s[i], s[k])) dominated = true;
        if (!dominated) out.push_back(s[i]);
    }
    return out;
}

Element fold(const Model& m, const Antichain& a, const Element& alpha) {
    if (alpha.is_atom() && std::all_of(a.begin(), a.end(), [](const Element& e) { return e.is_atom(); }))
        if (auto img = m.lookup(a, alpha)) return Element::atom(*img);
    return Element::arrow(a, alpha);
}

std::pair<std::vector<Antichain>, Element> unfold(const Model& m, const Element& alpha, std::size_t k) {
    std::vector<Antichain> heads;
    Element cur = alpha;
    for (std::size_t i = 0; i < k; ++i) {
        auto [h, t] = unfold1(m, cur);
        heads.push_back(std::move(h));
        cur = t;
    }
    return {std::move(heads), cur};
}

Element fold_all(const Model& m, const std::vector<Antichain>& heads, const Element& tail) {
    Element cur = tail;
    for (auto it = heads.rbegin(); it != heads.rend(); ++it) cur = fold(m, *it, cur);
    return cur;
}

// ---------------------------------------------------------------- built-ins

namespace {

Element A(int i) { return Element::atom(i); }

Model make_omega(const BuiltinParams& p) {
    if (p.lo != 0 || p.hi < 0) throw std::invalid_argument("omega range must be 0..hi");
    std::vector<std::string> atoms;
    std::vector<Model::Entry> entries;
    for (long n = 0; n <= p.hi; ++n) {
        atoms.push_back(std::to_string(n));
        Antichain below;
        for (long k = 0; k < n; ++k) below.push_back(A(static_cast<int>(k)));
        entries.push_back({below, A(static_cast<int>(n)), static_cast<int>(n)});
    }
    return Model::make("omega", atoms, {}, entries, false);
}

Model make_zed(const BuiltinParams& p) {
    if (p.hi < p.lo) throw std::invalid_argument("empty zed range");
    std::vector<std::string> atoms;
    std::vector<Model::Entry> entries;
    const int n = static_cast<int>(p.hi - p.lo + 1);
    for (long v = p.lo; v <= p.hi; ++v) atoms.push_back(std::to_string(v));
    std::vector<int> shift(n, -1);
    for (int i = 0; i + 1 < n; ++i) {
        entries.push_back({{A(i + 1)}, A(i), i});
        shift[i] = i + 1;
    }
    return Model::make("zed", atoms, {}, entries, true, shift);
}

Model make_hf(const BuiltinParams& p) {
    if (p.f.empty()) throw std::invalid_argument("hf requires a table for f");
    if (p.levels < 1) throw std::invalid_argument("hf requires at least one level");
    auto f = [&](long n) { return n < static_cast<long>(p.f.size()) ? p.f[n] : p.f.back(); };
    std::vector<std::string> atoms{"*"};
    std::vector<std::vector<int>> index(p.levels + 1);
    for (long n = 0; n <= p.levels; ++n)
        for (std::uint64_t j = 1; j <= f(n) + 1; ++j) {
            index[n].push_back(static_cast<int>(atoms.size()));
            atoms.push_back("a" + std::to_string(n) + "_" + std::to_string(j));
        }
    std::vector<Model::Entry> entries{{{}, A(0), 0}};
    for (long n = 0; n <= p.levels; ++n) {
        const auto& ix = index[n];
        for (std::size_t j = 0; j + 1 < ix.size(); ++j) entries.push_back({{}, A(ix[j + 1]), ix[j]});
        if (n < p.levels) entries.push_back({{A(index[n + 1][0])}, A(0), ix.back()});
    }
    // Every a^n_j sits below *: ({a^{n+1}_1}, *) is below ({}, *) in the
    // function space, and j must reflect that.
    std::vector<std::pair<int, int>> order;
    for (int i = 1; i < static_cast<int>(atoms.size()); ++i) order.emplace_back(i, 0);
    return Model::make("hf", atoms, order, entries, true);
}

}  // namespace

std::vector<std::string> builtin_names() { return {"dinf", "park", "norm", "omega", "zed", "hf"}; }

Model builtin(std::string_view name, const BuiltinParams& p) {
    if (name == "dinf") return Model::make("dinf", {"*"}, {}, {{{}, A(0), 0}}, false);
    if (name == "park") return Model::make("park", {"*"}, {}, {{{A(0)}, A(0), 0}}, false);
    if (name == "norm")
        return Model::make("norm", {"p", "q"}, {{0, 1}}, {{{A(0)}, A(1), 1}, {{A(1)}, A(0), 0}}, false);
    if (name == "omega") return make_omega(p);
    if (name == "zed") return make_zed(p);
    if (name == "hf") return make_hf(p);
    throw std::invalid_argument("unknown built-in model: " + std::string(name));
}

Model load_model(std::string_view text) {
    std::vector<std::string> atoms;
    std::vector<std::pair<std::string, std::string>> order;
    struct RawEntry {
        std::vector<std::string> head;
        std::string tail, image;
        std::size_t line;
    };
    std::vector<RawEntry> raw;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0, offset = 0;
    bool have_atoms = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t line_offset = offset;
        offset += line.size() + 1;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto colon = line.find(':');
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (trimmed.empty()) continue;
        if (colon == std::string::npos) throw ParseError("expected 'key:' on line " + std::to_string(lineno), line_offset);
        std::string key = line.substr(0, colon);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        std::string rest = line.substr(colon + 1);
        if (key == "atoms") {
            std::istringstream ws(rest);
            std::string a;
            while (ws >> a) atoms.push_back(a);
            have_atoms = true;
        } else if (key == "order") {
            auto lt = rest.find('<');
            if (lt == std::string::npos) throw ParseError("expected 'a < b' on line " + std::to_string(lineno), line_offset);
            std::istringstream l(rest.substr(0, lt)), r(rest.substr(lt + 1));
            std::string a, b, extra;
            if (!(l >> a) || !(r >> b) || (l >> extra) || (r >> extra))
                throw ParseError("malformed order line " + std::to_string(lineno), line_offset);
            order.emplace_back(a, b);
        } else if (key == "arrow") {
            auto open = rest.find('{'), close = rest.find('}'), eq = rest.find('=');
            if (open == std::string::npos || close == std::string::npos || eq == std::string::npos || close < open ||
                eq < close)
                throw ParseError("expected '{a,...} tail = image' on line " + std::to_string(lineno), line_offset);
            RawEntry e;
            e.line = lineno;
            std::string inside = rest.substr(open + 1, close - open - 1);
            std::replace(inside.begin(), inside.end(), ',', ' ');
            std::istringstream hs(inside);
            std::string a;
            while (hs >> a) e.head.push_back(a);
            std::istringstream ts(rest.substr(close + 1, eq - close - 1)), is(rest.substr(eq + 1));
            std::string extra;
            if (!(ts >> e.tail) || (ts >> extra) || !(is >> e.image) || (is >> extra))
                throw ParseError("malformed arrow line " + std::to_string(lineno), line_offset);
            raw.push_back(std::move(e));
        } else {
            throw ParseError("unknown key '" + key + "' on line " + std::to_string(lineno), line_offset);
        }
    }
    if (!have_atoms || atoms.empty()) throw ModelError("model has no atoms");
    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < atoms.size(); ++i) idx[atoms[i]] = static_cast<int>(i);
    auto get = [&](const std::string& a) {
        auto it = idx.find(a);
        if (it == idx.end()) throw ModelError("unknown atom " + a);
        return it->second;
    };
    std::vector<std::pair<int, int>> strict;
    for (auto& [a, b] : order) strict.emplace_back(get(a), get(b));
    std::vector<Model::Entry> entries;
    for (auto& e : raw) {
        Antichain head;
        for (auto& a : e.head) head.push_back(A(get(a)));
        entries.push_back({head, A(get(e.tail)), get(e.image)});
    }
    return Model::make("custom", atoms, strict, entries, false);
}

// ---------------------------------------------------------------- enumeration

std::vector<Antichain> enumerate_antichains(const Model& m, const std::vector<Element>& pool, int width,
                                            std::size_t cap) {
    std::vector<Antichain> out{{}};
    std::vector<std::vector<bool>> comparable(pool.size(), std::vector<bool>(pool.size(), false));
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t k = 0; k < pool.size(); ++k)
            comparable[i][k] = i == k || leq(m, pool[i], pool[k]) || leq(m, pool[k], pool[i]);
    std::vector<std::vector<std::size_t>> idx_frontier{{}};
    for (int size = 1; size <= width; ++size) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& combo : idx_frontier) {
            std::size_t start = combo.empty() ? 0 : combo.back() + 1;
            for (std::size_t i = start; i < pool.size(); ++i) {
                bool ok = true;
                for (auto c : combo)
                    if (comparable[c][i]) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                auto extended = combo;
                extended.push_back(i);
                Antichain a;
                for (auto c : extended) a.push_back(pool[c]);
                std::sort(a.begin(), a.end());
                out.push_back(std::move(a));
                if (out.size() > cap) throw ResourceError("antichain enumeration exceeds cap");
                next.push_back(std::move(extended));
            }
        }
        idx_frontier = std::move(next);
        if (idx_frontier.empty()) break;
    }
    return out;
}

std::vector<Element> enumerate_elements(const Model& m, int depth, int width, std::size_t cap) {
    std::vector<Element> level;
    for (int i = 0; i < m.atom_count(); ++i) level.push_back(A(i));
    for (int d = 1; d <= depth; ++d) {
        std::set<Element> next(level.begin(), level.end());
        auto heads = enumerate_antichains(m, level, width, cap * 4);
        for (const auto& h : heads)
            for (const auto& t : level) {
                next.insert(fold(m, h, t));
                if (next.size() > cap) throw ResourceError("element enumeration exceeds cap");
            }
        level.assign(next.begin(), next.end());
    }
    return level;
}

// ---------------------------------------------------------------- text

Element atom(const Model& m, std::string_view name) {
    auto i = m.find_atom(name);
    if (!i) throw ModelError("unknown atom '" + std::string(name) + "' in model " + m.name());
    return A(*i);
}

std::string print(const Model& m, const Antichain& a) {
    std::string s = "{";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ", ";
        s += print(m, a[i]);
    }
    return s + "}";
}

std::string print(const Model& m, const Element& e) {
    if (e.is_atom()) {
        if (e.atom_index() >= m.atom_count()) throw ModelError("element does not belong to model " + m.name());
        return m.atoms()[e.atom_index()];
    }
    return print(m, e.head()) + " -> " + print(m, e.tail());
}

Element rename_atoms(const Model& m, const Element& e, const std::vector<int>& map) {
    if (e.is_atom()) {
        int t = map[e.atom_index()];
        if (t < 0) throw ResourceError("shift leaves the materialized window of model " + m.name());
        return A(t);
    }
    std::vector<Element> head;
    for (const auto& x : e.head()) head.push_back(rename_atoms(m, x, map));
    std::sort(head.begin(), head.end());
    return fold(m, head, rename_atoms(m, e.tail(), map));
}

void Cursor::skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

bool Cursor::eof() {
    skip_ws();
    return pos >= text.size();
}

char Cursor::peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
}

bool Cursor::accept(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) == tok) {
        pos += tok.size();
        return true;
    }
    return false;
}

void Cursor::expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
}

void Cursor::fail(const std::string& msg) const { throw ParseError(msg, pos); }

namespace {

bool atom_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*' || c == '\'';
}

}  // namespace

Antichain parse_antichain(const Model& m, Cursor& c) {
    c.expect("{");
    std::vector<Element> items;
    if (!c.accept("}")) {
        do items.push_back(parse_element(m, c));
        while (c.accept(","));
        c.expect("}");
    }
    return normalize_antichain(m, std::move(items));
}

Element parse_element(const Model& m, Cursor& c) {
    char ch = c.peek();
    if (ch == '{') {
        Antichain head = parse_antichain(m, c);
        c.expect("->");
        Element tail = parse_element(m, c);
        return fold(m, head, tail);
    }
    if (ch == '(') {
        c.expect("(");
        Element e = parse_element(m, c);
        c.expect(")");
        return e;
    }
    std::size_t start = c.pos;
    if (ch == '-' && c.pos + 1 < c.text.size() && std::isdigit(static_cast<unsigned char>(c.text[c.pos + 1])))
        ++c.pos;
    while (c.pos < c.text.size() && atom_char(c.text[c.pos])) ++c.pos;
    if (c.pos == start) c.fail("expected an element");
    std::string_view name = c.text.substr(start, c.pos - start);
    auto i = m.find_atom(name);
    if (!i) throw ParseError("unknown element name '" + std::string(name) + "' for model " + m.name(), start);
    return A(*i);
}

Element parse_element(const Model& m, std::string_view text) {
    Cursor c{text};
    Element e = parse_element(m, c);
    if (!c.eof()) c.fail("trailing input after element");
    return e;
}

Antichain parse_antichain(const Model& m, std::string_view text) {
    Cursor c{text};
    Antichain a = parse_antichain(m, c);
    if (!c.eof()) c.fail("trailing input after antichain");
    return a;
}

}  // namespace lamtest
