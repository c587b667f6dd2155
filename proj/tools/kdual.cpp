// kdual: batch front end for workspace documents.
//
//   kdual <command> <document.json> [entity names...] [options]
//
// Exit status: 0 ok, 1 validation failure, 2 inexact window, 3 parse error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kdual/adjunction.hpp"
#include "kdual/ez.hpp"
#include "kdual/hochschild.hpp"
#include "kdual/random_category.hpp"
#include "kdual/random_coalgebra.hpp"
#include "kdual/workspace.hpp"

using namespace kdual;
using oj = nlohmann::ordered_json;

namespace {

struct Options {
    std::string command, document;
    std::vector<std::string> entities;
    std::string field, window, mode = "exact", out = "text";
    std::optional<std::size_t> weight_cap;
    std::uint64_t seed = 20240607;
    std::size_t random = 0;
};

struct Settings {
    std::optional<std::size_t> weight_cap;
    std::optional<std::pair<int, int>> window;
    bool stabilize = false;
    std::size_t cutoff = 0;
};

constexpr std::size_t basis_limit = 200000;

void guard_size(const GradedQuiver& letters, std::size_t cap) {
    if (count_composable_words(letters, cap, basis_limit + 1) > basis_limit)
        throw CapExceeded("more than " + std::to_string(basis_limit) + " words of length <= " + std::to_string(cap) +
                          "; lower --weight-cap");
}

const std::vector<std::string> commands = {"validate", "bar",  "cobar",    "materialize", "adjoint-check", "conv",
                                           "mc-enum",  "mc-cat", "ihom", "ez-check",    "hh",            "hh-vs-mc"};

std::pair<int, int> parse_window(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw ParseError("--degree-window expects a..b, got '" + s + "'");
    try {
        int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
        if (a > b) throw ParseError("--degree-window: empty window '" + s + "'");
        return {a, b};
    } catch (const std::logic_error&) {
        throw ParseError("--degree-window expects integers a..b, got '" + s + "'");
    }
}

oj dims_json(const std::map<int, std::size_t>& dims) {
    oj out = oj::object();
    for (auto& [n, d] : dims) out["H^" + std::to_string(n)] = d;
    return out;
}

oj report_json(const Report& r) {
    oj out;
    out["ok"] = r.ok;
    if (!r.ok) out["failure"] = r.failure;
    return out;
}

std::pair<int, int> window_or(const Settings& s, std::pair<int, int> fallback) { return s.window.value_or(fallback); }

template <Field K>
class Runner {
public:
    Runner(const Options& opt, Workspace<K> ws, Settings s) : opt_(opt), ws_(std::move(ws)), s_(s) {}

    oj run() {
        const std::string& c = opt_.command;
        if (c == "validate") return validate();
        if (c == "bar") return bar();
        if (c == "cobar") return cobar();
        if (c == "materialize") return materialize();
        if (c == "adjoint-check") return adjoint_check();
        if (c == "conv") return conv();
        if (c == "mc-enum") return mc_enum();
        if (c == "mc-cat") return mc_cat();
        if (c == "ihom") return ihom();
        if (c == "ez-check") return ez_check();
        if (c == "hh") return hh(false);
        return hh(true);
    }

private:
    std::size_t cap(std::size_t fallback) const { return s_.weight_cap.value_or(fallback); }

    std::string arg(std::size_t i, const std::string& what) const {
        if (i < opt_.entities.size()) return opt_.entities[i];
        if (opt_.entities.empty()) {
            if (what.rfind("category", 0) == 0 && ws_.categories.size() == 1) return ws_.categories.begin()->first;
            if (what == "coalgebra" && ws_.coalgebras.size() == 1) return ws_.coalgebras.begin()->first;
        }
        if (opt_.entities.size() == 1 && i == 1 && what == "category" && ws_.categories.size() == 1)
            return ws_.categories.begin()->first;
            throw ParseError("'" + opt_.command + "' needs a " + what + " name as argument " + std::to_string(i + 1));
        return opt_.entities[i];
    }

    [[noreturn]] void infinite_field() const {
        throw Error("'" + opt_.command + "' enumerates over the field and needs f2, f3 or f5");
    }

    oj validate() {
        oj out;
        bool ok = true;
        auto wanted = [&](const std::string& n) {
            return opt_.entities.empty() ||
                   std::find(opt_.entities.begin(), opt_.entities.end(), n) != opt_.entities.end();
        };
        oj items = oj::array();
        auto add = [&](const std::string& kind, const std::string& name, const Report& r) {
            oj e;
            e["kind"] = kind;
            e["name"] = name;
            e["ok"] = r.ok;
            if (!r.ok) e["failure"] = r.failure;
            ok = ok && r.ok;
            items.push_back(e);
        };
        for (auto& [n, c] : ws_.categories)
            if (wanted(n)) add("category", n, validate_category(c));
        for (auto& [n, c] : ws_.coalgebras)
            if (wanted(n)) add("coalgebra", n, validate_coalgebra(c));
        for (auto& [n, f] : ws_.functors)
            if (wanted(n)) add("functor", n, validate_functor(f.functor, ws_.category(f.source), ws_.category(f.target)));
        for (auto& [n, m] : ws_.mc_elements)
            if (wanted(n)) {
                auto r = mc_check(ws_.coalgebra(m.coalgebra), ws_.category(m.category), m.element);
                add("mc element", n, r.ok ? Report::pass() : Report::fail("the MC equation has a nonzero residual"));
            }
        out["entities"] = items;
        if (opt_.random > 0) {
            Rng rng(opt_.seed);
            std::size_t passed = 0, total = 0;
            for (std::size_t t = 0; t < opt_.random; ++t) {
                passed += validate_category(random_dg_category<K>(rng, 4)).ok;
                passed += validate_category(random_curved_category<K>(rng, 4)).ok;
                passed += validate_coalgebra(random_coalgebra<K>(rng, 4, t % 2 == 1)).ok;
                total += 3;
            }
            out["random"] = {{"seed", opt_.seed}, {"instances", total}, {"passed", passed}};
            ok = ok && passed == total;
        }
        out["ok"] = ok;
        return out;
    }

    oj bar() {
        const std::string name = arg(0, "category");
        const auto& d = ws_.category(name);
        oj out;
        out["category"] = name;
        BarConstruction<K> b(d);
        if (b.is_final()) {
            out["result"] = "B of the zero category is the final coalgebra *";
            out["ok"] = true;
            return out;
        }
        guard_size(b.letters(), cap(3));
        auto m = b.materialize(cap(3));
        auto lw = b.longest_word();
        out["letters"] = b.letters().num_arrows();
        out["longest_word"] = lw ? oj(*lw) : oj(nullptr);
        out["weight_cap"] = cap(3);
        out["exact"] = m.exact;
        out["dimension"] = m.coalgebra.dim();
        std::map<int, std::size_t> by_degree;
        for (auto& a : m.coalgebra.reduced.arrows()) ++by_degree[a.degree];
        oj deg = oj::object();
        for (auto& [n, k] : by_degree) deg["degree " + std::to_string(n)] = k;
        out["elements_by_degree"] = deg;
        out["curved"] = m.coalgebra.is_curved();
        auto r = validate_coalgebra(m.coalgebra);
        out["d_squared_is_curvature_coaction"] = report_json(r);
        out["ok"] = r.ok;
        return out;
    }

    oj cobar() {
        const std::string name = arg(0, "coalgebra");
        const auto& c = ws_.coalgebra(name);
        oj out;
        out["coalgebra"] = name;
        CobarConstruction<K> o(c);
        if (o.is_zero_category()) {
            out["result"] = "the cobar construction of * is the zero category";
            out["ok"] = true;
            return out;
        }
        out["letters"] = o.letters().num_arrows();
        auto lw = longest_word(o.letters());
        out["longest_word"] = lw ? oj(*lw) : oj(nullptr);
        auto r = o.check_d_squared(cap(3));
        out["d_squared_zero_up_to_length"] = cap(3);
        out["d_squared_zero"] = report_json(r);
        if (s_.window) {
            auto [lo, hi] = *s_.window;
            oj homs = oj::array();
            for (std::size_t x = 0; x < c.num_objects(); ++x)
                for (std::size_t y = 0; y < c.num_objects(); ++y)
                    homs.push_back({{"from", c.reduced.object_name(x)},
                                    {"to", c.reduced.object_name(y)},
                                    {"homology", dims_json(o.hom_homology(x, y, lo, hi))}});
            out["window"] = {lo, hi};
            out["hom_homology"] = homs;
        }
        out["ok"] = r.ok;
        return out;
    }

    oj materialize() {
        const std::string name = arg(0, "category or coalgebra");
        oj out;
        Workspace<K> result;
        if (ws_.categories.count(name)) {
            BarConstruction<K> b(ws_.category(name));
            if (!b.is_final()) guard_size(b.letters(), cap(3));
            auto m = b.materialize(cap(3));
            result.coalgebras["B(" + name + ")"] = m.coalgebra;
            out["construction"] = "bar";
            out["exact"] = m.exact;
        } else if (ws_.coalgebras.count(name)) {
            CobarConstruction<K> o(ws_.coalgebra(name));
            if (!o.is_zero_category()) guard_size(o.letters(), cap(3));
            auto m = o.materialize(cap(3));
            result.categories["Omega(" + name + ")"] = m.category;
            out["construction"] = "cobar";
            out["exact"] = m.exact;
            out["honest"] = m.honest;
        } else {
            throw ValidationError("no category or coalgebra named '" + name + "'");
        }
        out["entity"] = name;
        out["cap"] = cap(3);
        out["document"] = workspace_json(result);
        out["ok"] = true;
        return out;
    }

    oj adjoint_check() {
        if constexpr (!FiniteField<K>) {
            infinite_field();
        } else {
            const std::string cn = arg(0, "coalgebra");
            const std::string dn = arg(1, "category");
            auto r = check_adjunction(ws_.coalgebra(cn), ws_.category(dn));
            oj out;
            out["coalgebra"] = cn;
            out["category"] = dn;
            out["functors_from_cobar"] = r.functors;
            out["mc_elements"] = r.mc_elements;
            out["morphisms_into_bar"] = r.bar_morphisms;
            out["transports_inverse"] = report_json(r.transports);
            out["ok"] = r.ok();
            return out;
        }
    }

    oj conv() {
        const std::string cn = arg(0, "coalgebra");
        const std::string dn = arg(1, "category");
        auto u = convolution_category(expand(ws_.coalgebra(cn), true), ws_.category(dn));
        oj out;
        out["coalgebra"] = cn;
        out["category"] = dn;
        out["zero"] = u.category.zero;
        out["objects"] = u.category.num_objects();
        out["arrows"] = u.category.num_arrows();
        out["unital"] = u.category.is_unital();
        out["curved"] = u.category.is_curved();
        auto r = validate_category(u.category);
        out["axioms"] = report_json(r);
        out["ok"] = r.ok;
        return out;
    }

    oj mc_enum() {
        if constexpr (!FiniteField<K>) {
            infinite_field();
        } else {
            const std::string cn = arg(0, "coalgebra");
            const std::string dn = arg(1, "category");
            const auto& c = ws_.coalgebra(cn);
            const auto& d = ws_.category(dn);
            auto all = mc_enumerate(c, d);
            oj out;
            out["coalgebra"] = cn;
            out["category"] = dn;
            out["count"] = all.size();
            oj list = oj::array();
            for (std::size_t i = 0; i < all.size(); ++i) {
                oj vals = oj::array();
                for (std::size_t j = 0; j < c.dim(); ++j)
                    for (auto& [e, k] : all[i].xi[j]) vals.push_back({c.label(j), d.label(e), k.to_string()});
                list.push_back({{"name", mc_element_name(c, d, all[i], i)}, {"values", vals}});
            }
            out["elements"] = list;
            out["ok"] = true;
            return out;
        }
    }

    /// Declared MC elements over (c, d), or all of them over a finite field.
    std::vector<std::pair<std::string, McElement<K>>> mc_objects(const std::string& cn, const std::string& dn) const {
        std::vector<std::pair<std::string, McElement<K>>> out;
        for (auto& [n, m] : ws_.mc_elements)
            if (m.coalgebra == cn && m.category == dn) out.push_back({n, m.element});
        if (!out.empty()) return out;
        if constexpr (FiniteField<K>) {
            const auto& c = ws_.coalgebra(cn);
            const auto& d = ws_.category(dn);
            auto all = mc_enumerate(c, d);
            for (std::size_t i = 0; i < all.size(); ++i) out.push_back({mc_element_name(c, d, all[i], i), all[i]});
            return out;
        } else {
            throw Error("no MC elements are declared over (" + cn + ", " + dn + ") and enumeration needs a finite field");
        }
    }

    oj mc_cat() {
        const std::string cn = arg(0, "coalgebra");
        const std::string dn = arg(1, "category");
        const auto& c = ws_.coalgebra(cn);
        const auto& d = ws_.category(dn);
        auto objs = mc_objects(cn, dn);
        auto [lo, hi] = window_or(s_, {-1, 1});
        oj out;
        out["coalgebra"] = cn;
        out["category"] = dn;
        oj names = oj::array();
        for (auto& [n, m] : objs) names.push_back(n);
        out["objects"] = names;
        out["window"] = {lo, hi};
        oj homs = oj::array();
        for (auto& [n1, m1] : objs)
            for (auto& [n2, m2] : objs)
                homs.push_back({{"from", n1}, {"to", n2}, {"homology", dims_json(mc_hom_homology(c, d, m1, m2, lo, hi))}});
        out["hom_homology"] = homs;
        out["ok"] = true;
        return out;
    }

    oj ihom() {
        if constexpr (!FiniteField<K>) {
            infinite_field();
        } else {
            const std::string cn = arg(0, "coalgebra");
            const std::string dn = arg(1, "category");
            auto h = internal_hom(ws_.coalgebra(cn), ws_.category(dn));
            oj out;
            out["coalgebra"] = cn;
            out["category"] = dn;
            out["mc_objects"] = h.mc.num_objects();
            out["mc_arrows"] = h.mc.num_arrows();
            out["bar_letters"] = h.bar.is_final() ? 0 : h.bar.letters().num_arrows();
            if (!h.bar.is_final()) guard_size(h.bar.letters(), cap(2));
            auto m = h.bar.materialize(cap(2));
            out["weight_cap"] = cap(2);
            out["internal_hom_dimension"] = m.coalgebra.final ? 0 : m.coalgebra.dim();
            out["exact"] = m.exact;
            auto r = m.coalgebra.final ? Report::pass() : validate_coalgebra(m.coalgebra);
            out["axioms"] = report_json(r);
            out["ok"] = r.ok;
            return out;
        }
    }

    oj ez_check() {
        const std::string cn = arg(0, "coalgebra");
        const std::string en = arg(1, "coalgebra");
        const auto& c = ws_.coalgebra(cn);
        const auto& e = ws_.coalgebra(en);
        const bool graded = c.is_curved() || e.is_curved();
        auto [lo, hi] = window_or(s_, {-4, 0});
        auto r = ez_compare(c, e, lo, hi, cap(4), graded);
        oj out;
        out["coalgebras"] = {cn, en};
        out["associated_graded"] = graded;
        out["window"] = {lo, hi};
        out["weight_cap"] = cap(4);
        out["functor"] = report_json(r.functor);
        out["chain_map"] = report_json(r.chain_map);
        out["shuffles"] = report_json(r.shuffles);
        const auto tensor = tensor_coalgebras(c, e);
        const auto& q = tensor.reduced;
        oj pairs = oj::array();
        for (auto& [xy, dims] : r.source_window)
            pairs.push_back({{"from", q.object_name(xy.first)},
                             {"to", q.object_name(xy.second)},
                             {"tensor_cobar", dims_json(dims)},
                             {"cobar_tensor", dims_json(r.target_window.at(xy))}});
        out["homology"] = pairs;
        out["verdict"] = r.dims_equal() ? "dims equal on window" : "dims differ";
        out["ok"] = r.ok();
        return out;
    }

    struct Bimodule {
        const Category<K>* d;
        const Category<K>* d2;
        DgFunctor<K> f, g;
        std::string label;
    };

    Bimodule bimodule() const {
        const std::string a = arg(0, "category or functor");
        if (ws_.categories.count(a)) {
            const auto& d = ws_.category(a);
            return {&d, &d, identity_functor(d), identity_functor(d), a};
        }
        const auto& f = ws_.functor(a);
        const auto& g = ws_.functor(arg(1, "functor"));
        if (f.source != g.source || f.target != g.target)
            throw ValidationError("functors '" + a + "' and '" + opt_.entities[1] + "' have different source or target");
        return {&ws_.category(f.source), &ws_.category(f.target), f.functor, g.functor, a + ", " + opt_.entities[1]};
    }

    oj hh(bool vs_mc) {
        auto b = bimodule();
        auto [lo, hi] = window_or(s_, {0, 4});
        oj out;
        out["coefficients"] = b.label;
        out["window"] = {lo, hi};
        if (vs_mc) {
            auto r = hh_vs_mc_homs(*b.d, *b.d2, b.f, b.g, lo, hi);
            out["hochschild"] = dims_json(r.hochschild);
            out["mc_homs"] = dims_json(r.mc_homs);
            out["bar_weight"] = r.bar_weight;
            out["verdict"] = r.equal() ? "equal in every degree" : "differ";
            out["ok"] = r.equal();
            return out;
        }
        auto r = hh_cohomology(*b.d, *b.d2, b.f, b.g, lo, hi, {s_.stabilize, s_.cutoff});
        out["mode"] = s_.stabilize ? "stabilize" : "exact";
        out["dims"] = dims_json(r.dims);
        out["max_weight"] = r.max_weight;
        if (s_.stabilize) {
            out["dims_next_cutoff"] = dims_json(r.dims_next);
            out["stable"] = r.stable;
        }
        out["ok"] = true;
        return out;
    }

    const Options& opt_;
    Workspace<K> ws_;
    Settings s_;
};

// ---- text rendering of structured results -------------------------------

std::string scalar_text(const oj& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_null()) return "unbounded";
    return v.dump();
}

bool scalar_list(const oj& v) {
    if (!v.is_array()) return false;
    for (auto& e : v)
        if (e.is_structured()) return false;
    return true;
}

void render(const oj& j, const std::string& indent, std::ostream& os) {
    for (auto& [k, v] : j.items()) {
        if (!v.is_structured()) {
            os << indent << k << ": " << scalar_text(v) << "\n";
        } else if (scalar_list(v)) {
            os << indent << k << ":";
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : " ") << scalar_text(v[i]);
            os << "\n";
        } else if (v.is_object()) {
            os << indent << k << ":\n";
            render(v, indent + "  ", os);
        } else {
            os << indent << k << ":\n";
            for (auto& e : v) {
                if (e.is_object()) {
                    std::ostringstream item;
                    render(e, indent + "    ", item);
                    std::string s = item.str();
                    s.replace(indent.size() + 2, 2, "- ");
                    os << s;
                } else if (scalar_list(e)) {
                    os << indent << "  -";
                    for (auto& x : e) os << " " << scalar_text(x);
                    os << "\n";
                } else {
                    os << indent << "  - " << e.dump() << "\n";
                }
            }
        }
    }
}

template <Field K>
oj run_with(const Options& opt, const std::string& text, Settings s) {
    auto ws = parse_workspace<K>(text);
    if (!s.weight_cap) s.weight_cap = ws.weight_cap;
    if (!s.window && ws.degree_window) s.window = ws.degree_window;
    oj out;
    out["command"] = opt.command;
    out["field"] = field_name(field_tag<K>());
    const oj body = Runner<K>(opt, std::move(ws), s).run();
    for (auto& [k, v] : body.items()) out[k] = v;
    return out;
}

int emit(const Options& opt, const oj& result, int status) {
    if (opt.out == "json") {
        std::string text;
        detail::compact_dump(result, text, 0);
        std::cout << text << "\n";
    } else if (result.contains("document") && status == 0) {
        oj summary = result;
        summary.erase("document");
        render(summary, "", std::cout);
        std::string doc;
        detail::compact_dump(result["document"], doc, 0);
        std::cout << "document:\n" << doc << "\n";
    } else {
        render(result, "", status == 0 || !result.contains("error") ? std::cout : std::cerr);
    }
    return status;
}

int fail(const Options& opt, const std::string& kind, const std::string& message, int status,
         std::optional<std::pair<std::size_t, std::size_t>> where = std::nullopt) {
    oj out;
    out["command"] = opt.command;
    out["ok"] = false;
    oj err;
    err["kind"] = kind;
    err["message"] = message;
    if (where) {
        err["line"] = where->first;
        err["column"] = where->second;
    }
    out["error"] = err;
    return emit(opt, out, status);
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Exact computations for Koszul duality of dg categories and pointed curved coalgebras"};
    app.add_option("command", opt.command, "Command")->required()->check(CLI::IsMember(commands));
    app.add_option("document", opt.document, "Workspace document (JSON)")->required();
    app.add_option("entities", opt.entities, "Entity names the command acts on");
    app.add_option("--field", opt.field, "Ground field")->check(CLI::IsMember({"q", "f2", "f3", "f5"}));
    app.add_option("--weight-cap", opt.weight_cap, "Weight (word length) cap for materialized constructions");
    app.add_option("--degree-window", opt.window, "Degree window a..b");
    app.add_option("--mode", opt.mode, "exact or stabilize:W (Hochschild)");
    app.add_option("--seed", opt.seed, "Seed for random instances");
    app.add_option("--random", opt.random, "validate: also check this many random instances of each kind");
    app.add_option("--out", opt.out, "Output format")->check(CLI::IsMember({"json", "text"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        std::ifstream in(opt.document);
        if (!in) throw ParseError("cannot read '" + opt.document + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();

        Settings s;
        s.weight_cap = opt.weight_cap;
        if (!opt.window.empty()) s.window = parse_window(opt.window);
        if (opt.mode.rfind("stabilize:", 0) == 0) {
            s.stabilize = true;
            try {
                s.cutoff = std::stoul(opt.mode.substr(10));
            } catch (const std::logic_error&) {
                throw ParseError("--mode stabilize:W needs an integer W");
            }
        } else if (opt.mode != "exact") {
            throw ParseError("--mode is exact or stabilize:W, got '" + opt.mode + "'");
        }

        auto declared = declared_field(text);
        FieldTag field = declared.value_or(FieldTag::q);
        if (!opt.field.empty()) {
            auto want = *field_from_name(opt.field);
            if (declared && *declared != want)
                throw ParseError("field mismatch: --field " + opt.field + " but the document is over " + field_name(*declared));
            field = want;
        }
        oj result;
        switch (field) {
            case FieldTag::q: result = run_with<Q>(opt, text, s); break;
            case FieldTag::f2: result = run_with<F2>(opt, text, s); break;
            case FieldTag::f3: result = run_with<F3>(opt, text, s); break;
            case FieldTag::f5: result = run_with<F5>(opt, text, s); break;
        }
        return emit(opt, result, result.value("ok", false) ? 0 : 1);
    } catch (const ParseError& e) {
        std::optional<std::pair<std::size_t, std::size_t>> where;
        if (e.line()) where = std::pair{e.line(), e.column()};
        return fail(opt, "parse", e.what(), 3, where);
    } catch (const InexactWindow& e) {
        return fail(opt, "inexact window", e.what(), 2);
    } catch (const CapExceeded& e) {
        return fail(opt, "cap exceeded", e.what(), 1);
    } catch (const Error& e) {
        return fail(opt, "validation", e.what(), 1);
    } catch (const std::exception& e) {
        return fail(opt, "validation", e.what(), 1);
    }
}
