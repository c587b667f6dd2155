#pragma once

/**
 * @file workspace.hpp
 * @brief JSON workspace documents: named categories, coalgebras, functors and
 * MC elements over one declared field.
 *
 *     {
 *       "field": "f3",
 *       "weight_cap": 4, "degree_window": [0, 4],
 *       "categories": [{"name": "A", "objects": ["*"],
 *                       "arrows": [{"name": "1", "src": "*", "tgt": "*", "degree": 0}, ...],
 *                       "units": {"*": {"1": "1"}},
 *                       "differential": [["t", "x", "1"]],          // d t = 1·x
 *                       "composition": [["x", "x", "y", "-1"]],      // x∘x = -y
 *                       "curvature": {"*": {"c": "1"}}}],
 *       "coalgebras": [{"name": "C", "objects": ["o"],
 *                       "elements": [{"name": "w", "src": "o", "tgt": "o", "degree": -1}],
 *                       "comult": [["c", "w", "w", "1"]],            // Δ̄c ∋ w⊗w
 *                       "differential": [["c", "u", "1"]],
 *                       "curvature": {"u": "1"}}],
 *       "functors": [{"name": "F", "source": "A", "target": "B",
 *                     "objects": {"*": "*"}, "arrows": [["x", "x", "1"]]}],
 *       "mc_elements": [{"name": "xi", "coalgebra": "C", "category": "A",
 *                        "objects": {"o": "*"}, "values": [["w", "x", "1"]]}]
 *     }
 *
 * Coefficients are integers or strings "p/q". A category with "zero": true is
 * 𝟎 and a coalgebra with "final": true is the final object *. Any entity may
 * repeat "field"; it must agree with the document.
 */

#include <algorithm>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

#include "kdual/category.hpp"
#include "kdual/coalgebra.hpp"
#include "kdual/mc.hpp"

namespace kdual {

enum class FieldTag { q, f2, f3, f5 };

inline std::string field_name(FieldTag f) {
    switch (f) {
        case FieldTag::q: return "q";
        case FieldTag::f2: return "f2";
        case FieldTag::f3: return "f3";
        case FieldTag::f5: return "f5";
    }
    return "?";
}

inline std::optional<FieldTag> field_from_name(const std::string& s) {
    if (s == "q") return FieldTag::q;
    if (s == "f2") return FieldTag::f2;
    if (s == "f3") return FieldTag::f3;
    if (s == "f5") return FieldTag::f5;
    return std::nullopt;
}

template <Field K>
constexpr FieldTag field_tag() {
    if constexpr (K::characteristic == 0) return FieldTag::q;
    else if constexpr (K::characteristic == 2) return FieldTag::f2;
    else if constexpr (K::characteristic == 3) return FieldTag::f3;
    else return FieldTag::f5;
}

template <Field K>
struct NamedFunctor {
    std::string source, target;
    DgFunctor<K> functor;
};

template <Field K>
struct NamedMcElement {
    std::string coalgebra, category;
    McElement<K> element;
};

template <Field K>
struct Workspace {
    std::optional<std::size_t> weight_cap;
    std::optional<std::pair<int, int>> degree_window;
    std::map<std::string, Category<K>> categories;
    std::map<std::string, PointedCoalgebra<K>> coalgebras;
    std::map<std::string, NamedFunctor<K>> functors;
    std::map<std::string, NamedMcElement<K>> mc_elements;

    const Category<K>& category(const std::string& name) const {
        auto it = categories.find(name);
        if (it == categories.end()) throw ValidationError("no category named '" + name + "'");
        return it->second;
    }
    const PointedCoalgebra<K>& coalgebra(const std::string& name) const {
        auto it = coalgebras.find(name);
        if (it == coalgebras.end()) throw ValidationError("no coalgebra named '" + name + "'");
        return it->second;
    }
    const NamedFunctor<K>& functor(const std::string& name) const {
        auto it = functors.find(name);
        if (it == functors.end()) throw ValidationError("no functor named '" + name + "'");
        return it->second;
    }
    const NamedMcElement<K>& mc_element(const std::string& name) const {
        auto it = mc_elements.find(name);
        if (it == mc_elements.end()) throw ValidationError("no MC element named '" + name + "'");
        return it->second;
    }
};

namespace detail {

/// 1-based line and column (in code points) of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
            ++col;
        }
    }
    return {line, col};
}

/// JSON pointer -> byte offset of the value, for documents nlohmann already accepted.
class SourceMap {
public:
    explicit SourceMap(const std::string& text) : text_(text) {
        std::size_t pos = 0;
        skip_ws(pos);
        if (pos < text_.size()) value(pos, "");
    }

    std::pair<std::size_t, std::size_t> locate(std::string pointer) const {
        for (;;) {
            auto it = offsets_.find(pointer);
            if (it != offsets_.end()) return line_column(text_, it->second);
            if (pointer.empty()) return {1, 1};
            pointer.erase(pointer.rfind('/'));
        }
    }

private:
    void skip_ws(std::size_t& p) const {
        while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    }
    std::string string(std::size_t& p) const {
        std::string out;
        ++p;
        while (p < text_.size() && text_[p] != '"') {
            if (text_[p] == '\\' && p + 1 < text_.size()) {
                ++p;
                if (text_[p] == 'u') {
                    out += "\\u";  // keys with \u escapes are located by their parent
                    ++p;
                    continue;
                }
                static const std::map<char, char> esc = {{'n', '\n'}, {'t', '\t'}, {'r', '\r'}, {'b', '\b'}, {'f', '\f'}};
                auto it = esc.find(text_[p]);
                out += it == esc.end() ? text_[p] : it->second;
            } else {
                out += text_[p];
            }
            ++p;
        }
        ++p;
        return out;
    }
    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }
    void value(std::size_t& p, const std::string& pointer) {
        offsets_[pointer] = p;
        char c = text_[p];
        if (c == '{') {
            ++p;
            for (;;) {
                skip_ws(p);
                if (text_[p] == '}') break;
                std::string key = string(p);
                skip_ws(p);
                ++p;  // ':'
                skip_ws(p);
                value(p, pointer + "/" + escape(key));
                skip_ws(p);
                if (text_[p] == ',') ++p;
            }
            ++p;
        } else if (c == '[') {
            ++p;
            for (std::size_t i = 0;; ++i) {
                skip_ws(p);
                if (text_[p] == ']') break;
                value(p, pointer + "/" + std::to_string(i));
                skip_ws(p);
                if (text_[p] == ',') ++p;
            }
            ++p;
        } else if (c == '"') {
            string(p);
        } else {
            while (p < text_.size() && !std::isspace(static_cast<unsigned char>(text_[p])) && text_[p] != ',' &&
                   text_[p] != ']' && text_[p] != '}')
                ++p;
        }
    }

    const std::string& text_;
    std::map<std::string, std::size_t> offsets_;
};

template <Field K>
class WorkspaceReader {
    using json = nlohmann::json;

public:
    WorkspaceReader(const std::string& text, const json& doc) : map_(text), doc_(doc) {}

    Workspace<K> read() {
        Workspace<K> ws;
        if (!doc_.is_object()) fail("", "a workspace document is a JSON object");
        for (auto& [k, v] : doc_.items())
            if (!known_top_.count(k)) fail("/" + k, "unknown key '" + k + "'");
        if (doc_.contains("weight_cap")) {
            const json& w = doc_["weight_cap"];
            if (!w.is_number_unsigned()) fail("/weight_cap", "weight_cap must be a non-negative integer");
            ws.weight_cap = w.get<std::size_t>();
        }
        if (doc_.contains("degree_window")) {
            const json& w = doc_["degree_window"];
            if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer() ||
                w[0].get<int>() > w[1].get<int>())
                fail("/degree_window", "degree_window must be [lo, hi] with lo ≤ hi");
            ws.degree_window = std::pair{w[0].get<int>(), w[1].get<int>()};
        }
        for_each_entity("categories", [&](const json& e, const std::string& at, const std::string& name) {
            ws.categories.emplace(name, read_category(e, at));
        });
        for_each_entity("coalgebras", [&](const json& e, const std::string& at, const std::string& name) {
            ws.coalgebras.emplace(name, read_coalgebra(e, at));
        });
        for_each_entity("functors", [&](const json& e, const std::string& at, const std::string& name) {
            ws.functors.emplace(name, read_functor(ws, e, at));
        });
        for_each_entity("mc_elements", [&](const json& e, const std::string& at, const std::string& name) {
            ws.mc_elements.emplace(name, read_mc(ws, e, at));
        });
        return ws;
    }

private:
    [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
        auto [line, col] = map_.locate(pointer);
        throw ParseError(msg, line, col);
    }

    const json& get(const json& obj, const std::string& at, const std::string& key) const {
        if (!obj.contains(key)) fail(at, "missing field '" + key + "'");
        return obj[key];
    }
    std::string get_string(const json& obj, const std::string& at, const std::string& key) const {
        const json& v = get(obj, at, key);
        if (!v.is_string()) fail(at + "/" + key, "'" + key + "' must be a string");
        return v.get<std::string>();
    }

    template <class F>
    void for_each_entity(const std::string& kind, F&& visit) {
        if (!doc_.contains(kind)) return;
        const json& list = doc_[kind];
        if (!list.is_array()) fail("/" + kind, "'" + kind + "' must be an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string at = "/" + kind + "/" + std::to_string(i);
            const json& e = list[i];
            if (!e.is_object()) fail(at, "entities are JSON objects");
            std::string name = get_string(e, at, "name");
            if (!seen.insert(name).second) fail(at + "/name", "duplicate name '" + name + "' in " + kind);
            if (e.contains("field")) {
                const json& f = e["field"];
                if (!f.is_string() || f.get<std::string>() != field_name(field_tag<K>()))
                    fail(at + "/field", "field mismatch: '" + name + "' declares " + f.dump() + " but the document uses " +
                                            field_name(field_tag<K>()));
            }
            visit(e, at, name);
        }
    }

    K coefficient(const json& v, const std::string& at) const {
        std::string s;
        if (v.is_number_integer()) s = v.dump();
        else if (v.is_string()) s = v.get<std::string>();
        else fail(at, "coefficients are integers or strings like \"-2/3\"");
        try {
            return K::from_rational(parse_rational(s));
        } catch (const std::exception& e) {
            fail(at, std::string("bad coefficient: ") + e.what());
        }
    }

    int degree(const json& v, const std::string& at) const {
        if (!v.is_number_integer()) fail(at, "degree must be an integer");
        return v.get<int>();
    }

    std::size_t object_ref(const GradedQuiver& q, const json& v, const std::string& at, const std::string& owner) const {
        if (!v.is_string()) fail(at, "object references are strings");
        auto o = q.find_object(v.get<std::string>());
        if (!o) fail(at, "undeclared object '" + v.get<std::string>() + "' in '" + owner + "'");
        return *o;
    }
    std::size_t arrow_ref(const GradedQuiver& q, const json& v, const std::string& at, const std::string& owner) const {
        if (!v.is_string()) fail(at, "arrow references are strings");
        auto a = q.find_arrow(v.get<std::string>());
        if (!a) fail(at, "undeclared arrow '" + v.get<std::string>() + "' in '" + owner + "'");
        return *a;
    }

    GradedQuiver read_quiver(const json& e, const std::string& at, const std::string& owner, const std::string& list) const {
        const json& objs = get(e, at, "objects");
        if (!objs.is_array()) fail(at + "/objects", "'objects' must be an array of names");
        GradedQuiver q;
        for (std::size_t i = 0; i < objs.size(); ++i) {
            const std::string p = at + "/objects/" + std::to_string(i);
            if (!objs[i].is_string()) fail(p, "object names are strings");
            if (q.find_object(objs[i].get<std::string>())) fail(p, "duplicate object '" + objs[i].get<std::string>() + "'");
            q.add_object(objs[i].get<std::string>());
        }
        if (!e.contains(list)) return q;
        const json& arrows = e[list];
        if (!arrows.is_array()) fail(at + "/" + list, "'" + list + "' must be an array");
        for (std::size_t i = 0; i < arrows.size(); ++i) {
            const std::string p = at + "/" + list + "/" + std::to_string(i);
            const json& a = arrows[i];
            if (!a.is_object()) fail(p, "basis elements are objects with name, src, tgt, degree");
            std::string name = get_string(a, p, "name");
            if (q.find_arrow(name)) fail(p + "/name", "duplicate basis element '" + name + "' in '" + owner + "'");
            q.add_arrow(name, object_ref(q, get(a, p, "src"), p + "/src", owner),
                        object_ref(q, get(a, p, "tgt"), p + "/tgt", owner), degree(get(a, p, "degree"), p + "/degree"));
        }
        return q;
    }

    /// Rows of a triplet list with `refs` leading names and a trailing coefficient.
    template <class F>
    void triplets(const json& e, const std::string& at, const std::string& key, std::size_t refs, F&& row) const {
        if (!e.contains(key)) return;
        const json& list = e[key];
        if (!list.is_array()) fail(at + "/" + key, "'" + key + "' must be an array of rows");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = at + "/" + key + "/" + std::to_string(i);
            if (!list[i].is_array() || list[i].size() != refs + 1)
                fail(p, "rows of '" + key + "' have " + std::to_string(refs) + " names and a coefficient");
            row(list[i], p);
        }
    }

    Vec<K> vector(const GradedQuiver& q, const json& v, const std::string& at, const std::string& owner) const {
        if (!v.is_object()) fail(at, "vectors are objects {basis element: coefficient}");
        Vec<K> out;
        for (auto& [k, c] : v.items()) {
            auto a = q.find_arrow(k);
            if (!a) fail(at + "/" + k, "undeclared arrow '" + k + "' in '" + owner + "'");
            out.add(*a, coefficient(c, at + "/" + k));
        }
        return out;
    }

    Category<K> read_category(const json& e, const std::string& at) const {
        const std::string name = e["name"].get<std::string>();
        if (e.value("zero", false)) return zero_category<K>();
        Category<K> c = make_category<K>(read_quiver(e, at, name, "arrows"));
        const GradedQuiver& q = c.quiver;
        triplets(e, at, "differential", 2, [&](const json& r, const std::string& p) {
            c.differential[arrow_ref(q, r[0], p + "/0", name)].add(arrow_ref(q, r[1], p + "/1", name),
                                                                   coefficient(r[2], p + "/2"));
        });
        triplets(e, at, "composition", 3, [&](const json& r, const std::string& p) {
            std::size_t g = arrow_ref(q, r[0], p + "/0", name), f = arrow_ref(q, r[1], p + "/1", name);
            if (q.arrow(f).tgt != q.arrow(g).src) fail(p, "composition row with non-composable arrows in '" + name + "'");
            Vec<K> v = c.compose_basis(g, f);
            v.add(arrow_ref(q, r[2], p + "/2", name), coefficient(r[3], p + "/3"));
            c.add_composition(g, f, v);
        });
        if (e.contains("units") && !e["units"].is_null()) {
            const json& u = e["units"];
            if (!u.is_object()) fail(at + "/units", "'units' maps each object to a vector");
            std::vector<Vec<K>> units(q.num_objects());
            for (auto& [obj, v] : u.items()) {
                auto x = q.find_object(obj);
                if (!x) fail(at + "/units/" + obj, "undeclared object '" + obj + "' in '" + name + "'");
                units[*x] = vector(q, v, at + "/units/" + obj, name);
            }
            if (u.size() != q.num_objects()) fail(at + "/units", "'units' must give a unit for every object of '" + name + "'");
            c.units = std::move(units);
        }
        if (e.contains("curvature")) {
            const json& h = e["curvature"];
            if (!h.is_object()) fail(at + "/curvature", "'curvature' maps objects to vectors");
            c.curvature.assign(q.num_objects(), {});
            for (auto& [obj, v] : h.items()) {
                auto x = q.find_object(obj);
                if (!x) fail(at + "/curvature/" + obj, "undeclared object '" + obj + "' in '" + name + "'");
                c.curvature[*x] = vector(q, v, at + "/curvature/" + obj, name);
            }
        }
        return c;
    }

    PointedCoalgebra<K> read_coalgebra(const json& e, const std::string& at) const {
        const std::string name = e["name"].get<std::string>();
        if (e.value("final", false)) return final_coalgebra<K>();
        PointedCoalgebra<K> c = make_coalgebra<K>(read_quiver(e, at, name, "elements"));
        const GradedQuiver& q = c.reduced;
        triplets(e, at, "comult", 3, [&](const json& r, const std::string& p) {
            add_term(c.comult[arrow_ref(q, r[0], p + "/0", name)], arrow_ref(q, r[1], p + "/1", name),
                     arrow_ref(q, r[2], p + "/2", name), coefficient(r[3], p + "/3"));
        });
        triplets(e, at, "differential", 2, [&](const json& r, const std::string& p) {
            c.differential[arrow_ref(q, r[0], p + "/0", name)].add(arrow_ref(q, r[1], p + "/1", name),
                                                                   coefficient(r[2], p + "/2"));
        });
        if (e.contains("curvature")) {
            const json& h = e["curvature"];
            if (!h.is_object()) fail(at + "/curvature", "'curvature' maps elements to coefficients");
            for (auto& [el, k] : h.items()) {
                auto i = q.find_arrow(el);
                if (!i) fail(at + "/curvature/" + el, "undeclared element '" + el + "' in '" + name + "'");
                c.curvature[*i] = coefficient(k, at + "/curvature/" + el);
            }
        }
        return c;
    }

    std::vector<std::size_t> object_assignment(const GradedQuiver& from, const GradedQuiver& to, const json& e,
                                               const std::string& at, const std::string& owner) const {
        const json& m = get(e, at, "objects");
        if (!m.is_object()) fail(at + "/objects", "'objects' maps source objects to target objects");
        std::vector<std::optional<std::size_t>> out(from.num_objects());
        for (auto& [k, v] : m.items()) {
            auto x = from.find_object(k);
            if (!x) fail(at + "/objects/" + k, "undeclared object '" + k + "' in '" + owner + "'");
            out[*x] = object_ref(to, v, at + "/objects/" + k, owner);
        }
        std::vector<std::size_t> r;
        for (std::size_t x = 0; x < out.size(); ++x) {
            if (!out[x]) fail(at + "/objects", "object '" + from.object_name(x) + "' is not mapped by '" + owner + "'");
            r.push_back(*out[x]);
        }
        return r;
    }

    NamedFunctor<K> read_functor(const Workspace<K>& ws, const json& e, const std::string& at) const {
        const std::string name = e["name"].get<std::string>();
        NamedFunctor<K> f;
        f.source = get_string(e, at, "source");
        f.target = get_string(e, at, "target");
        if (!ws.categories.count(f.source)) fail(at + "/source", "undeclared category '" + f.source + "' in '" + name + "'");
        if (!ws.categories.count(f.target)) fail(at + "/target", "undeclared category '" + f.target + "' in '" + name + "'");
        const auto& s = ws.categories.at(f.source);
        const auto& t = ws.categories.at(f.target);
        f.functor.object_map = object_assignment(s.quiver, t.quiver, e, at, name);
        f.functor.arrow_map.assign(s.num_arrows(), {});
        triplets(e, at, "arrows", 2, [&](const json& r, const std::string& p) {
            f.functor.arrow_map[arrow_ref(s.quiver, r[0], p + "/0", name)].add(arrow_ref(t.quiver, r[1], p + "/1", name),
                                                                               coefficient(r[2], p + "/2"));
        });
        return f;
    }

    NamedMcElement<K> read_mc(const Workspace<K>& ws, const json& e, const std::string& at) const {
        const std::string name = e["name"].get<std::string>();
        NamedMcElement<K> m;
        m.coalgebra = get_string(e, at, "coalgebra");
        m.category = get_string(e, at, "category");
        if (!ws.coalgebras.count(m.coalgebra))
            fail(at + "/coalgebra", "undeclared coalgebra '" + m.coalgebra + "' in '" + name + "'");
        if (!ws.categories.count(m.category))
            fail(at + "/category", "undeclared category '" + m.category + "' in '" + name + "'");
        const auto& c = ws.coalgebras.at(m.coalgebra);
        const auto& d = ws.categories.at(m.category);
        m.element.object_map = object_assignment(c.reduced, d.quiver, e, at, name);
        m.element.xi.assign(c.dim(), {});
        triplets(e, at, "values", 2, [&](const json& r, const std::string& p) {
            m.element.xi[arrow_ref(c.reduced, r[0], p + "/0", name)].add(arrow_ref(d.quiver, r[1], p + "/1", name),
                                                                         coefficient(r[2], p + "/2"));
        });
        return m;
    }

    SourceMap map_;
    const json& doc_;
    inline static const std::set<std::string> known_top_ = {"field",      "weight_cap", "degree_window", "categories",
                                                            "coalgebras", "functors",   "mc_elements"};
};

inline nlohmann::json parse_json(const std::string& text) {
    bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank) return nlohmann::json::object();
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string what = e.what();
        auto colon = what.find("syntax error");
        throw ParseError(colon == std::string::npos ? what : what.substr(colon), line, col);
    }
}

}  // namespace detail

/// The field a document declares, if any; throws ParseError on bad JSON or an unknown field.
inline std::optional<FieldTag> declared_field(const std::string& text) {
    auto doc = detail::parse_json(text);
    if (!doc.is_object() || !doc.contains("field")) return std::nullopt;
    const auto& f = doc["field"];
    auto tag = f.is_string() ? field_from_name(f.get<std::string>()) : std::nullopt;
    if (!tag) {
        auto [line, col] = detail::SourceMap(text).locate("/field");
        throw ParseError("unknown field " + f.dump() + " (expected q, f2, f3 or f5)", line, col);
    }
    return tag;
}

/// The declared field, or q.
inline FieldTag document_field(const std::string& text) { return declared_field(text).value_or(FieldTag::q); }

/// A document without a "field" key is read over K.
template <Field K>
Workspace<K> parse_workspace(const std::string& text) {
    auto declared = declared_field(text);
    if (declared && *declared != field_tag<K>()) {
        auto [line, col] = detail::SourceMap(text).locate("/field");
        throw ParseError("field mismatch: the document is over " + field_name(*declared) + ", not " +
                             field_name(field_tag<K>()),
                         line, col);
    }
    auto doc = detail::parse_json(text);
    return detail::WorkspaceReader<K>(text, doc).read();
}

namespace detail {

template <Field K>
nlohmann::ordered_json vector_json(const GradedQuiver& q, const Vec<K>& v) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (auto& [i, k] : v) out[q.label(i)] = k.to_string();
    return out;
}

inline nlohmann::ordered_json quiver_json(const GradedQuiver& q, nlohmann::ordered_json& e, const std::string& list) {
    e["objects"] = q.objects();
    auto arrows = nlohmann::ordered_json::array();
    for (auto& a : q.arrows())
        arrows.push_back({{"name", a.name}, {"src", q.object_name(a.src)}, {"tgt", q.object_name(a.tgt)}, {"degree", a.degree}});
    e[list] = arrows;
    return e;
}

}  // namespace detail

template <Field K>
nlohmann::ordered_json category_json(const std::string& name, const Category<K>& c) {
    using oj = nlohmann::ordered_json;
    oj e;
    e["name"] = name;
    if (c.zero) {
        e["zero"] = true;
        return e;
    }
    const GradedQuiver& q = c.quiver;
    detail::quiver_json(q, e, "arrows");
    if (c.units) {
        oj u = oj::object();
        for (std::size_t x = 0; x < c.num_objects(); ++x) u[q.object_name(x)] = detail::vector_json(q, (*c.units)[x]);
        e["units"] = u;
    }
    oj d = oj::array();
    for (std::size_t a = 0; a < c.num_arrows(); ++a)
        for (auto& [b, k] : c.differential[a]) d.push_back({q.label(a), q.label(b), k.to_string()});
    e["differential"] = d;
    oj comp = oj::array();
    for (auto& [gf, v] : c.composition)
        for (auto& [h, k] : v) comp.push_back({q.label(gf.first), q.label(gf.second), q.label(h), k.to_string()});
    e["composition"] = comp;
    if (c.is_curved()) {
        oj h = oj::object();
        for (std::size_t x = 0; x < c.num_objects(); ++x)
            if (!c.curvature[x].is_zero()) h[q.object_name(x)] = detail::vector_json(q, c.curvature[x]);
        e["curvature"] = h;
    }
    return e;
}

template <Field K>
nlohmann::ordered_json coalgebra_json(const std::string& name, const PointedCoalgebra<K>& c) {
    using oj = nlohmann::ordered_json;
    oj e;
    e["name"] = name;
    if (c.final) {
        e["final"] = true;
        return e;
    }
    const GradedQuiver& q = c.reduced;
    detail::quiver_json(q, e, "elements");
    oj delta = oj::array(), d = oj::array();
    for (std::size_t i = 0; i < c.dim(); ++i) {
        for (auto& [lr, k] : c.comult[i]) delta.push_back({q.label(i), q.label(lr.first), q.label(lr.second), k.to_string()});
        for (auto& [j, k] : c.differential[i]) d.push_back({q.label(i), q.label(j), k.to_string()});
    }
    e["comult"] = delta;
    e["differential"] = d;
    if (c.is_curved()) {
        oj h = oj::object();
        for (std::size_t i = 0; i < c.dim(); ++i)
            if (!c.h(i).is_zero()) h[q.label(i)] = c.h(i).to_string();
        e["curvature"] = h;
    }
    return e;
}

/// Canonical form: entities sorted by name, every field written out, coefficients as strings.
template <Field K>
nlohmann::ordered_json workspace_json(const Workspace<K>& ws) {
    using oj = nlohmann::ordered_json;
    oj doc;
    doc["field"] = field_name(field_tag<K>());
    if (ws.weight_cap) doc["weight_cap"] = *ws.weight_cap;
    if (ws.degree_window) doc["degree_window"] = {ws.degree_window->first, ws.degree_window->second};
    oj cats = oj::array(), coas = oj::array(), funs = oj::array(), mcs = oj::array();
    for (auto& [n, c] : ws.categories) cats.push_back(category_json(n, c));
    for (auto& [n, c] : ws.coalgebras) coas.push_back(coalgebra_json(n, c));
    for (auto& [n, f] : ws.functors) {
        const auto& s = ws.categories.at(f.source).quiver;
        const auto& t = ws.categories.at(f.target).quiver;
        oj e;
        e["name"] = n;
        e["source"] = f.source;
        e["target"] = f.target;
        oj om = oj::object();
        for (std::size_t x = 0; x < s.num_objects(); ++x) om[s.object_name(x)] = t.object_name(f.functor.object_map[x]);
        e["objects"] = om;
        oj am = oj::array();
        for (std::size_t a = 0; a < s.num_arrows(); ++a)
            for (auto& [b, k] : f.functor.arrow_map[a]) am.push_back({s.label(a), t.label(b), k.to_string()});
        e["arrows"] = am;
        funs.push_back(e);
    }
    for (auto& [n, m] : ws.mc_elements) {
        const auto& c = ws.coalgebras.at(m.coalgebra).reduced;
        const auto& d = ws.categories.at(m.category).quiver;
        oj e;
        e["name"] = n;
        e["coalgebra"] = m.coalgebra;
        e["category"] = m.category;
        oj om = oj::object();
        for (std::size_t x = 0; x < c.num_objects(); ++x) om[c.object_name(x)] = d.object_name(m.element.object_map[x]);
        e["objects"] = om;
        oj vals = oj::array();
        for (std::size_t i = 0; i < c.num_arrows(); ++i)
            for (auto& [b, k] : m.element.xi[i]) vals.push_back({c.label(i), d.label(b), k.to_string()});
        e["values"] = vals;
        mcs.push_back(e);
    }
    doc["categories"] = cats;
    doc["coalgebras"] = coas;
    doc["functors"] = funs;
    doc["mc_elements"] = mcs;
    return doc;
}

namespace detail {

/// Two-space indentation, with arrays of scalars and flat objects kept on one line.
inline void compact_dump(const nlohmann::ordered_json& j, std::string& out, int indent) {
    auto flat = [](const nlohmann::ordered_json& v) {
        if (!v.is_structured()) return true;
        for (auto& e : v)
            if (e.is_structured()) return false;
        return true;
    };
    if (flat(j)) {
        if (j.is_object()) {
            out += "{";
            bool first = true;
            for (auto& [k, v] : j.items()) {
                out += (first ? "" : ", ") + nlohmann::ordered_json(k).dump() + ": " + v.dump();
                first = false;
            }
            out += "}";
        } else if (j.is_array()) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
            out += "]";
        } else {
            out += j.dump();
        }
        return;
    }
    const std::string pad(indent + 2, ' ');
    bool first = true;
    if (j.is_object()) {
        out += "{\n";
        for (auto& [k, v] : j.items()) {
            out += (first ? "" : ",\n") + pad + nlohmann::ordered_json(k).dump() + ": ";
            compact_dump(v, out, indent + 2);
            first = false;
        }
        out += "\n" + std::string(indent, ' ') + "}";
    } else {
        out += "[\n";
        for (auto& v : j) {
            out += (first ? "" : ",\n") + pad;
            compact_dump(v, out, indent + 2);
            first = false;
        }
        out += "\n" + std::string(indent, ' ') + "]";
    }
}

}  // namespace detail

template <Field K>
std::string print_workspace(const Workspace<K>& ws) {
    std::string out;
    detail::compact_dump(workspace_json(ws), out, 0);
    return out + "\n";
}

}  // namespace kdual
