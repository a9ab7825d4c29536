// Command-line front end: reduce, member, typecheck, probe, counterexample,
// fuzz and models. Exit codes: 0 on a positive verdict, 2 on a negative or
// bounded-out verdict, 1 on usage, parse or model errors.

#include "lamtest/fuzz.hpp"
#include "lamtest/hyper.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lamtest;

namespace {

struct Options {
    std::string model = "dinf";
    std::string model_file;
    std::uint64_t fuel = 1000;
    int depth = 2;
    int width = 2;
    std::uint64_t seed = 0;
    std::string format = "human";
    std::string strategy = "head";
    std::string g = "const 1";
    std::string range;
    std::string f;
    std::size_t search_depth = 20;
    std::string alpha;
    std::string suite = "all";
    std::size_t count = 100;
    std::size_t size = 30;
    std::string input;
};

std::vector<std::uint64_t> parse_table(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        out.push_back(std::stoull(item, &used));
        if (item.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument("bad table entry " + item);
    }
    if (out.empty()) throw std::invalid_argument("empty table");
    return out;
}

BuiltinParams params(const Options& o) {
    BuiltinParams p;
    if (!o.range.empty()) {
        auto dots = o.range.find("..");
        if (dots == std::string::npos) throw std::invalid_argument("--range expects lo..hi");
        p.lo = std::stol(o.range.substr(0, dots));
        p.hi = std::stol(o.range.substr(dots + 2));
    }
    if (!o.f.empty()) p.f = parse_table(o.f);
    else p.f = {1};
    return p;
}

Model load(const Options& o) {
    if (!o.model_file.empty()) {
        std::ifstream in(o.model_file);
        if (!in) throw std::invalid_argument("cannot read model file " + o.model_file);
        std::stringstream buf;
        buf << in.rdbuf();
        return load_model(buf.str());
    }
    return builtin(o.model, params(o));
}

Format format_of(const Options& o) { return o.format == "tsv" ? Format::Tsv : Format::Human; }

void print_derivation_tsv(const Model& m, const Derivation& d, int level) {
    std::cout << "NODE\t" << level << '\t' << d.rule << '\t' << print(m, d.conclusion) << '\n';
    for (const auto& p : d.premises) print_derivation_tsv(m, p, level + 1);
}

int cmd_reduce(const Options& o) {
    auto m = load(o);
    auto e = parse(m, o.input);
    auto t = head_converges(m, e, o.fuel, o.strategy == "full" ? Strategy::Full : Strategy::Head);
    std::cout << serialize(m, t, format_of(o));
    return t.converged ? 0 : 2;
}

int cmd_member(const Options& o) {
    auto m = load(o);
    auto j = parse_judgment(m, o.input);
    if (!j.point) throw std::invalid_argument("member needs a term judgment with a point");
    auto t = member_op(m, j.subject, j.env, *j.point, o.fuel);
    const bool tsv = format_of(o) == Format::Tsv;
    if (t.converged) std::cout << (tsv ? "MEMBER\tyes\tsteps=" : "Yes, converges in ") << t.steps.size() << '\n';
    else std::cout << (tsv ? "MEMBER\tno-within-bounds\tfuel=" : "NoWithinBounds, fuel ") << o.fuel << '\n';
    std::cout << serialize(m, t, format_of(o));
    return t.converged ? 0 : 2;
}

int cmd_typecheck(const Options& o) {
    auto m = load(o);
    auto j = parse_judgment(m, o.input);
    auto v = derivable(m, j, o.search_depth, Window{o.depth, o.width});
    const bool tsv = format_of(o) == Format::Tsv;
    if (!v.yes()) {
        std::cout << (tsv ? "TYPE\tno-within-bounds\tdepth=" : "NoWithinBounds, derivation depth ") << v.bound << '\n';
        return 2;
    }
    if (!check_derivation(m, *v.derivation)) throw std::logic_error("derivation failed its declarative re-check");
    if (tsv) {
        std::cout << "TYPE\tyes\tdepth=" << v.bound << '\n';
        print_derivation_tsv(m, *v.derivation, 0);
    } else {
        std::cout << "Yes\n" << print(m, *v.derivation);
    }
    return 0;
}

void print_witness(const Model& m, const ChainWitness& w, Format f) {
    const std::string sep = f == Format::Tsv ? "\t" : "  ";
    std::cout << "WITNESS" << sep << "g=" << w.g.str() << sep << "chain=";
    for (std::size_t i = 0; i < w.chain.size(); ++i) std::cout << (i ? "," : "") << print(m, w.chain[i]);
    std::cout << sep << "slots=";
    for (std::size_t i = 0; i < w.slots.size(); ++i) std::cout << (i ? "," : "") << w.slots[i];
    if (w.lasso) std::cout << sep << "lasso=" << w.lasso->start << "+" << w.lasso->period << sep << "shift=" << w.lasso->shift;
    std::cout << '\n';
}

int cmd_probe(const Options& o) {
    const auto g = parse_gspec(o.g);
    const auto f = format_of(o);
    const std::size_t depth = static_cast<std::size_t>(o.depth);
    if (o.model_file.empty() && o.model == "hf") {
        auto table = o.f.empty() ? std::vector<std::uint64_t>{1} : parse_table(o.f);
        auto r = probe_hf(table, g, depth);
        BuiltinParams p;
        p.f = table;
        p.levels = static_cast<long>(depth);
        auto m = builtin("hf", p);
        if (r.witness) print_witness(m, *r.witness, f);
        else std::cout << (f == Format::Tsv ? "EXHAUSTED\tdepth=" : "EXHAUSTED  no witness to depth ") << depth << '\n';
        std::cout << (f == Format::Tsv ? "POINTWISE\t" : "POINTWISE  g(n) >= f(n)+1 on the window: ")
                  << (r.pointwise ? "yes" : "no") << '\n';
        return r.witness ? 0 : 2;
    }
    auto m = load(o);
    auto w = probe(m, g, depth);
    if (!w) {
        std::cout << (f == Format::Tsv ? "EXHAUSTED\tdepth=" : "EXHAUSTED  no witness to depth ") << depth
                  << (f == Format::Tsv ? "" : " (evidence, not proof, of hyperimmunity)") << '\n';
        return 2;
    }
    print_witness(m, *w, f);
    if (f == Format::Human) std::cout << "refuted: the chain closes into a lasso, so g bounds an infinite chain\n";
    return 0;
}

int cmd_counterexample(const Options& o) {
    auto m = load(o);
    const auto g = parse_gspec(o.g);
    const Element alpha = o.alpha.empty() ? Element::atom(0) : parse_element(m, o.alpha);
    auto r = run_counterexample(m, g, alpha, o.fuel, static_cast<std::size_t>(std::max(o.depth, 10)));
    std::cout << print(m, r, format_of(o));
    return r.i_trace.converged && !r.jg_trace.converged ? 0 : 2;
}

int cmd_fuzz(const Options& o) {
    auto m = load(o);
    FuzzConfig c;
    c.count = o.count;
    c.seed = o.seed;
    c.max_size = o.size;
    if (o.width > 0) c.pool = enumerate_elements(m, o.depth, o.width);
    std::vector<SuiteReport> rs;
    if (o.suite == "all" || o.suite == "confluence") rs.push_back(confluence_suite(m, c));
    if (o.suite == "all" || o.suite == "standardization") rs.push_back(standardization_suite(m, c));
    if (o.suite == "all" || o.suite == "invariance") rs.push_back(invariance_suite(m, c));
    if (rs.empty()) throw std::invalid_argument("unknown suite " + o.suite);
    bool ok = true;
    for (const auto& r : rs) {
        std::cout << print(r, format_of(o));
        ok = ok && r.ok();
    }
    return ok ? 0 : 2;
}

int cmd_models(const Options& o) {
    for (const auto& name : builtin_names()) {
        auto m = builtin(name, params(o));
        if (format_of(o) == Format::Tsv) std::cout << "MODEL\t" << name << "\tatoms=" << m.atom_count() << '\n';
        else std::cout << name << "  " << m.atom_count() << " atoms" << (m.windowed() ? ", windowed" : "") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lambda calculus with tests over K-models"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--model", o.model, "built-in model name")->check(CLI::IsMember(builtin_names()));
    app.add_option("--model-file", o.model_file, "model description file");
    app.add_option("--fuel", o.fuel, "step bound for reductions");
    app.add_option("--depth", o.depth, "arrow depth of the element window; probe depth for probe")->check(CLI::NonNegativeNumber);
    app.add_option("--width", o.width, "antichain width of the element window")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", o.seed, "first random seed");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"human", "tsv"}));
    app.add_option("--range", o.range, "atom range lo..hi for omega and zed");
    app.add_option("--f", o.f, "comma separated f table for hf");

    auto* reduce = app.add_subcommand("reduce", "reduce an expression to an mhnf");
    reduce->add_option("--strategy", o.strategy, "head or full")->check(CLI::IsMember({"head", "full"}));
    reduce->add_option("expression", o.input)->required();

    auto* member = app.add_subcommand("member", "operational membership of a point in a term");
    member->add_option("judgment", o.input)->required();

    auto* typecheck = app.add_subcommand("typecheck", "search an intersection type derivation");
    typecheck->add_option("--search-depth", o.search_depth, "bound on lam, app and delta-Jg nodes per branch");
    typecheck->add_option("judgment", o.input)->required();

    auto* probe_cmd = app.add_subcommand("probe", "search a chain witnessing non-hyperimmunity");
    probe_cmd->add_option("--g", o.g, "bounding function: const k, table a,b,..., affine a b");

    auto* ce = app.add_subcommand("counterexample", "run I against Jg(0) at the witness head");
    ce->add_option("--g", o.g, "bounding function");
    ce->add_option("--alpha", o.alpha, "head of the chain, default the first atom");

    auto* fuzz = app.add_subcommand("fuzz", "random property suites over the reduction");
    fuzz->add_option("--suite", o.suite, "all, confluence, standardization or invariance")
        ->check(CLI::IsMember({"all", "confluence", "standardization", "invariance"}));
    fuzz->add_option("--count", o.count, "number of cases per suite");
    fuzz->add_option("--size", o.size, "maximal expression size");

    auto* models = app.add_subcommand("models", "list built-in models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*reduce) {
            if (o.input.find_first_not_of(" \t\n") == std::string::npos) throw std::invalid_argument("empty expression");
            return cmd_reduce(o);
        }
        if (*member) return cmd_member(o);
        if (*typecheck) return cmd_typecheck(o);
        if (*probe_cmd) return cmd_probe(o);
        if (*ce) return cmd_counterexample(o);
        if (*fuzz) return cmd_fuzz(o);
        if (*models) return cmd_models(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
