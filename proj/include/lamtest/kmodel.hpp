#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lamtest {

// Raised when an element or antichain does not belong to the model at hand,
// or when a model description violates the K-model invariants.
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a bounded computation leaves its window (materialized atom
// range, enumeration cap, state cap).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at offset " + std::to_string(pos)), detail(msg), position(pos) {}
    std::string detail;
    std::size_t position;
};

class Element;
using Antichain = std::vector<Element>;  // sorted, duplicate free, pairwise incomparable
struct ElementNode;

// A point of the web: an atom of the base model or an arrow a -> alpha.
// Elements are immutable values compared structurally.
class Element {
public:
    Element() = default;
    static Element atom(int index);
    static Element arrow(Antichain head, Element tail);

    bool valid() const { return node_ != nullptr; }
    bool is_atom() const;
    int atom_index() const;
    const Antichain& head() const;
    const Element& tail() const;
    int depth() const;
    std::size_t hash() const;

    friend int compare(const Element& a, const Element& b);
    friend bool operator==(const Element& a, const Element& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Element& a, const Element& b) { return compare(a, b) != 0; }
    friend bool operator<(const Element& a, const Element& b) { return compare(a, b) < 0; }

private:
    std::shared_ptr<const ElementNode> node_;
};

struct ElementNode {
    int atom = -1;
    Antichain head;
    Element tail;
    int depth = 0;
    std::size_t hash = 0;
};

inline bool Element::is_atom() const { return node_->atom >= 0; }
inline int Element::atom_index() const { return node_->atom; }
inline const Antichain& Element::head() const { return node_->head; }
inline const Element& Element::tail() const { return node_->tail; }
inline int Element::depth() const { return node_->depth; }
inline std::size_t Element::hash() const { return node_->hash; }

int compare(const Antichain& a, const Antichain& b);

// Total function N -> N given finitely.
struct GSpec {
    enum class Kind { Const, Table, Affine };
    Kind kind = Kind::Const;
    std::uint64_t k = 1;
    std::vector<std::uint64_t> table;
    std::uint64_t a = 0;
    std::uint64_t b = 0;

    static GSpec constant(std::uint64_t k);
    static GSpec from_table(std::vector<std::uint64_t> values);
    static GSpec affine(std::uint64_t a, std::uint64_t b);

    std::uint64_t operator()(std::uint64_t n) const;
    // g is constant on [n, infinity).
    bool constant_from(std::uint64_t n) const;
    std::string str() const;
    friend bool operator==(const GSpec&, const GSpec&) = default;
};

GSpec parse_gspec(std::string_view text);

struct BuiltinParams {
    long lo = 0;                    // omega and zed atom range
    long hi = 5;
    std::vector<std::uint64_t> f;   // hf table, tail repeats the last value
    long levels = 6;                // hf levels materialized
};

class Model {
public:
    struct Entry {
        Antichain head;   // over atoms
        Element tail;     // an atom
        int image;        // atom index
    };

    const std::string& name() const { return name_; }
    const std::vector<std::string>& atoms() const { return atoms_; }
    int atom_count() const { return static_cast<int>(atoms_.size()); }
    std::optional<int> find_atom(std::string_view name) const;
    bool atom_leq(int a, int b) const { return order_[a][b]; }
    const std::vector<Entry>& entries() const { return entries_; }
    // The j entry whose image is the atom, if materialized.
    const std::optional<Entry>& preimage(int atom) const { return preimage_[atom]; }
    std::optional<int> lookup(const Antichain& head, const Element& tail) const;
    // Atom renaming that is an automorphism of the full (unwindowed) model.
    const std::optional<std::vector<int>>& shift() const { return shift_; }
    bool windowed() const { return windowed_; }

    // Construction with validation of every K-model invariant that is
    // checkable inside the window.
    static Model make(std::string name, std::vector<std::string> atoms,
                      const std::vector<std::pair<int, int>>& strict_order,
                      std::vector<Entry> entries, bool windowed,
                      std::optional<std::vector<int>> shift = std::nullopt);

    friend bool operator==(const Model& a, const Model& b);

private:
    std::string name_;
    std::vector<std::string> atoms_;
    std::map<std::string, int, std::less<>> atom_index_;
    std::vector<std::vector<bool>> order_;
    std::vector<Entry> entries_;
    std::vector<std::optional<Entry>> preimage_;
    std::map<std::pair<Antichain, Element>, int> j_;
    std::optional<std::vector<int>> shift_;
    bool windowed_ = false;
};

bool leq(const Model& m, const Element& a, const Element& b);
bool antichain_leq(const Model& m, const Antichain& a, const Antichain& b);
Antichain normalize_antichain(const Model& m, std::vector<Element> s);
Element fold(const Model& m, const Antichain& a, const Element& alpha);
std::pair<Antichain, Element> unfold1(const Model& m, const Element& alpha);
std::pair<std::vector<Antichain>, Element> unfold(const Model& m, const Element& alpha, std::size_t k);
Element fold_all(const Model& m, const std::vector<Antichain>& heads, const Element& tail);

Model builtin(std::string_view name, const BuiltinParams& params = {});
std::vector<std::string> builtin_names();
Model load_model(std::string_view text);

std::vector<Element> enumerate_elements(const Model& m, int depth, int width,
                                        std::size_t cap = 200000);
// All antichains of size at most width drawn from pool, smallest first.
std::vector<Antichain> enumerate_antichains(const Model& m, const std::vector<Element>& pool,
                                            int width, std::size_t cap = 2000000);

Element atom(const Model& m, std::string_view name);
std::string print(const Model& m, const Element& e);
std::string print(const Model& m, const Antichain& a);
Element parse_element(const Model& m, std::string_view text);
Antichain parse_antichain(const Model& m, std::string_view text);
// Renames atoms through a map; used for the shift automorphism.
Element rename_atoms(const Model& m, const Element& e, const std::vector<int>& map);

// Cursor based parsing shared with the expression parser.
struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    void skip_ws();
    bool eof();
    char peek();
    bool accept(std::string_view tok);
    void expect(std::string_view tok);
    [[noreturn]] void fail(const std::string& msg) const;
};
Element parse_element(const Model& m, Cursor& c);
Antichain parse_antichain(const Model& m, Cursor& c);

}  // namespace lamtest
