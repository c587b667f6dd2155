#pragma once

/**
 * @file category.hpp
 * @brief Finite dg and curved categories, dg functors, tensor products and opposites.
 *
 * Conventions (used throughout the library):
 *  - cohomological grading, differentials of degree +1;
 *  - composition is written in functional order, `compose(g, f)` = g∘f for
 *    f: x -> y and g: y -> z;
 *  - Leibniz rule d(g∘f) = dg∘f + (-1)^{|g|} g∘df;
 *  - curvature: d²f = h_y∘f - f∘h_x for f: x -> y.
 */

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kdual/complex.hpp"
#include "kdual/quiver.hpp"

namespace kdual {

/**
 * A finite (possibly curved, possibly non-unital) graded category.
 *
 * All structure is stored on the basis of `quiver`: `differential[a]` is d(a),
 * `composition[{g, f}]` is g∘f (absent means zero), `units[x]` is the identity
 * of x and `curvature[x]` the curvature element h_x (empty vector: none).
 */
template <Field K>
struct Category {
    GradedQuiver quiver;
    std::vector<Vec<K>> differential;
    std::map<std::pair<std::size_t, std::size_t>, Vec<K>> composition;
    std::optional<std::vector<Vec<K>>> units;
    std::vector<Vec<K>> curvature;
    /// The category 𝟎: one object and only the zero morphism.
    bool zero = false;

    std::size_t num_objects() const { return quiver.num_objects(); }
    std::size_t num_arrows() const { return quiver.num_arrows(); }
    bool is_curved() const {
        for (auto& h : curvature)
            if (!h.is_zero()) return true;
        return false;
    }
    bool is_unital() const { return units.has_value(); }

    const Vec<K>& compose_basis(std::size_t g, std::size_t f) const {
        static const Vec<K> none;
        auto it = composition.find({g, f});
        return it == composition.end() ? none : it->second;
    }
    /// Bilinear extension of composition to vectors.
    Vec<K> compose(const Vec<K>& g, const Vec<K>& f) const {
        Vec<K> out;
        for (auto& [i, a] : g)
            for (auto& [j, b] : f) {
                const auto& c = compose_basis(i, j);
                if (!c.is_zero()) out.axpy(a * b, c);
            }
        return out;
    }
    Vec<K> d(const Vec<K>& v) const {
        Vec<K> out;
        for (auto& [i, a] : v) out.axpy(a, differential.at(i));
        return out;
    }
    Vec<K> unit(std::size_t x) const { return units ? units->at(x) : Vec<K>{}; }
    Vec<K> curvature_at(std::size_t x) const { return curvature.empty() ? Vec<K>{} : curvature.at(x); }

    /// Sets g∘f for basis arrows (accumulating).
    void add_composition(std::size_t g, std::size_t f, const Vec<K>& value) {
        if (value.is_zero()) return;
        auto& slot = composition[{g, f}];
        slot += value;
        if (slot.is_zero()) composition.erase({g, f});
    }

    std::string label(std::size_t a) const { return quiver.label(a); }
    std::string format(const Vec<K>& v) const {
        return v.format([&](std::size_t i) { return quiver.label(i); });
    }
};

/// Degree of basis arrow a.
template <Field K>
int deg(const Category<K>& c, std::size_t a) {
    return c.quiver.arrow(a).degree;
}

/// An empty category shell on the given quiver (no differential or composition yet).
template <Field K>
Category<K> make_category(GradedQuiver q) {
    Category<K> c;
    c.differential.assign(q.num_arrows(), Vec<K>{});
    c.quiver = std::move(q);
    return c;
}

/// 𝐤: one object with its identity.
template <Field K>
Category<K> ground_category(const std::string& object = "*") {
    GradedQuiver q({object});
    q.add_arrow("1", 0, 0, 0);
    auto c = make_category<K>(std::move(q));
    c.add_composition(0, 0, Vec<K>::unit(0));
    c.units = std::vector<Vec<K>>{Vec<K>::unit(0)};
    return c;
}

/// 𝟎: one object and a single zero morphism.
template <Field K>
Category<K> zero_category() {
    auto c = make_category<K>(GradedQuiver({"0"}));
    c.units = std::vector<Vec<K>>{Vec<K>{}};
    c.zero = true;
    return c;
}

/// ∅: no objects.
template <Field K>
Category<K> empty_category() {
    auto c = make_category<K>(GradedQuiver{});
    c.units = std::vector<Vec<K>>{};
    return c;
}

namespace detail {

template <Field K>
std::string slot_check(const Category<K>& c, const Vec<K>& v, std::size_t src, std::size_t tgt, int degree) {
    for (auto& [i, k] : v) {
        const Arrow& a = c.quiver.arrow(i);
        if (a.src != src || a.tgt != tgt || a.degree != degree) return a.name;
    }
    return {};
}

}  // namespace detail

/**
 * Verifies every defining identity of a (curved) category on the full basis.
 * Structural problems (sizes, slots, degrees, missing units) are reported
 * before identity failures.
 */
template <Field K>
Report validate_category(const Category<K>& c) {
    const GradedQuiver& q = c.quiver;
    const std::size_t n = q.num_arrows();
    if (c.zero) {
        if (q.num_objects() != 1 || n != 0) return Report::fail("𝟎 must have one object and no nonzero arrows");
        return Report::pass();
    }
    if (c.differential.size() != n) return Report::fail("differential table has the wrong size");
    if (c.units && c.units->size() != q.num_objects()) return Report::fail("unit table has the wrong size");
    if (!c.curvature.empty() && c.curvature.size() != q.num_objects())
        return Report::fail("curvature table has the wrong size");

    for (std::size_t a = 0; a < n; ++a) {
        const Arrow& ar = q.arrow(a);
        if (auto bad = detail::slot_check(c, c.differential[a], ar.src, ar.tgt, ar.degree + 1); !bad.empty())
            return Report::fail("d(" + ar.name + ") leaves its slot or has the wrong degree (term " + bad + ")");
    }
    for (auto& [key, val] : c.composition) {
        const Arrow& g = q.arrow(key.first);
        const Arrow& f = q.arrow(key.second);
        if (f.tgt != g.src) return Report::fail("composition defined on non-composable pair " + g.name + "∘" + f.name);
        if (auto bad = detail::slot_check(c, val, f.src, g.tgt, f.degree + g.degree); !bad.empty())
            return Report::fail(g.name + "∘" + f.name + " leaves its slot or has the wrong degree (term " + bad + ")");
    }
    if (c.units) {
        for (std::size_t x = 0; x < q.num_objects(); ++x) {
            const Vec<K>& u = (*c.units)[x];
            if (u.is_zero())
                return Report::fail("object '" + q.object_name(x) + "' has a zero unit (only 𝟎 may)");
            if (auto bad = detail::slot_check(c, u, x, x, 0); !bad.empty())
                return Report::fail("unit of '" + q.object_name(x) + "' is not a degree-0 endomorphism");
        }
    }
    for (std::size_t x = 0; x < c.curvature.size(); ++x)
        if (auto bad = detail::slot_check(c, c.curvature[x], x, x, 2); !bad.empty())
            return Report::fail("curvature at '" + q.object_name(x) + "' is not a degree-2 endomorphism");

    // Identities.
    if (c.units) {
        for (std::size_t x = 0; x < q.num_objects(); ++x)
            if (!c.d(c.unit(x)).is_zero()) return Report::fail("d(unit) ≠ 0 at object '" + q.object_name(x) + "'");
        for (std::size_t a = 0; a < n; ++a) {
            const Arrow& ar = q.arrow(a);
            Vec<K> f = Vec<K>::unit(a);
            if (!(c.compose(c.unit(ar.tgt), f) == f) || !(c.compose(f, c.unit(ar.src)) == f))
                return Report::fail("unit law fails on " + ar.name);
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        const Arrow& ar = q.arrow(a);
        Vec<K> f = Vec<K>::unit(a);
        Vec<K> lhs = c.d(c.d(f));
        Vec<K> rhs = c.compose(c.curvature_at(ar.tgt), f) - c.compose(f, c.curvature_at(ar.src));
        if (!(lhs == rhs))
            return Report::fail(c.is_curved() ? "d²f ≠ h_y f - f h_x at " + ar.name : "d² ≠ 0 at " + ar.name);
    }
    for (std::size_t x = 0; x < c.curvature.size(); ++x)
        if (!c.d(c.curvature[x]).is_zero()) return Report::fail("d(h) ≠ 0 at object '" + q.object_name(x) + "'");

    // Arrows grouped by source for composable enumeration.
    std::vector<std::vector<std::size_t>> by_src(q.num_objects());
    for (std::size_t a = 0; a < n; ++a) by_src[q.arrow(a).src].push_back(a);

    for (std::size_t f = 0; f < n; ++f)
        for (std::size_t g : by_src[q.arrow(f).tgt]) {
            Vec<K> vf = Vec<K>::unit(f), vg = Vec<K>::unit(g);
            Vec<K> lhs = c.d(c.compose_basis(g, f));
            Vec<K> rhs = c.compose(c.d(vg), vf);
            rhs.axpy(sign<K>(deg(c, g)), c.compose(vg, c.d(vf)));
            if (!(lhs == rhs)) return Report::fail("Leibniz rule fails on " + q.label(g) + "∘" + q.label(f));
        }
    for (std::size_t f = 0; f < n; ++f)
        for (std::size_t g : by_src[q.arrow(f).tgt])
            for (std::size_t h : by_src[q.arrow(g).tgt]) {
                Vec<K> lhs = c.compose(c.compose_basis(h, g), Vec<K>::unit(f));
                Vec<K> rhs = c.compose(Vec<K>::unit(h), c.compose_basis(g, f));
                if (!(lhs == rhs))
                    return Report::fail("associativity fails on " + q.label(h) + "∘" + q.label(g) + "∘" + q.label(f));
            }
    return Report::pass();
}

/// Strict dg functor: object map plus images of basis arrows.
template <Field K>
struct DgFunctor {
    std::vector<std::size_t> object_map;
    std::vector<Vec<K>> arrow_map;

    Vec<K> apply(const Vec<K>& v) const {
        Vec<K> out;
        for (auto& [i, k] : v) out.axpy(k, arrow_map.at(i));
        return out;
    }
};

template <Field K>
DgFunctor<K> identity_functor(const Category<K>& c) {
    DgFunctor<K> f;
    for (std::size_t x = 0; x < c.num_objects(); ++x) f.object_map.push_back(x);
    for (std::size_t a = 0; a < c.num_arrows(); ++a) f.arrow_map.push_back(Vec<K>::unit(a));
    return f;
}

/// Checks slots, degrees, and commutation with d, composition and units.
template <Field K>
Report validate_functor(const DgFunctor<K>& F, const Category<K>& src, const Category<K>& tgt) {
    if (F.object_map.size() != src.num_objects()) return Report::fail("functor object map has the wrong size");
    if (F.arrow_map.size() != src.num_arrows()) return Report::fail("functor arrow map has the wrong size");
    for (auto o : F.object_map)
        if (o >= tgt.num_objects()) return Report::fail("functor object map leaves the target");
    if (tgt.zero) return Report::pass();
    for (std::size_t a = 0; a < src.num_arrows(); ++a) {
        const Arrow& ar = src.quiver.arrow(a);
        if (auto bad = detail::slot_check(tgt, F.arrow_map[a], F.object_map[ar.src], F.object_map[ar.tgt], ar.degree);
            !bad.empty())
            return Report::fail("image of '" + ar.name + "' leaves its slot");
        if (!(F.apply(src.differential[a]) == tgt.d(F.arrow_map[a])))
            return Report::fail("functor does not commute with d on '" + ar.name + "'");
    }
    for (std::size_t f = 0; f < src.num_arrows(); ++f)
        for (std::size_t g = 0; g < src.num_arrows(); ++g) {
            if (src.quiver.arrow(f).tgt != src.quiver.arrow(g).src) continue;
            if (!(F.apply(src.compose_basis(g, f)) == tgt.compose(F.arrow_map[g], F.arrow_map[f])))
                return Report::fail("functor does not preserve " + src.label(g) + "∘" + src.label(f));
        }
    if (src.units) {
        for (std::size_t x = 0; x < src.num_objects(); ++x)
            if (!(F.apply(src.unit(x)) == tgt.unit(F.object_map[x])))
                return Report::fail("functor does not preserve the unit of '" + src.quiver.object_name(x) + "'");
    }
    return Report::pass();
}

template <Field K>
DgFunctor<K> compose_functors(const DgFunctor<K>& G, const DgFunctor<K>& F) {
    DgFunctor<K> out;
    for (auto o : F.object_map) out.object_map.push_back(G.object_map.at(o));
    for (auto& v : F.arrow_map) out.arrow_map.push_back(G.apply(v));
    return out;
}

/**
 * D ⊗ E with (f⊗g)∘(f'⊗g') = (-1)^{|g||f'|} (f∘f') ⊗ (g∘g') and
 * d(f⊗g) = df⊗g + (-1)^{|f|} f⊗dg. 𝟎 ⊗ D = D ⊗ 𝟎 = 𝟎.
 */
template <Field K>
Category<K> tensor_dg(const Category<K>& d, const Category<K>& e) {
    if (d.zero || e.zero) return zero_category<K>();
    auto out = make_category<K>(quiver_tensor(d.quiver, e.quiver));
    const std::size_t ne = e.num_arrows();
    auto idx = [ne](std::size_t a, std::size_t b) { return lex_index(a, b, ne); };
    auto tensor_vec = [&](const Vec<K>& x, const Vec<K>& y, K scale) {
        Vec<K> r;
        for (auto& [i, a] : x)
            for (auto& [j, b] : y) r.add(idx(i, j), scale * a * b);
        return r;
    };
    for (std::size_t a = 0; a < d.num_arrows(); ++a)
        for (std::size_t b = 0; b < ne; ++b) {
            Vec<K> v = tensor_vec(d.differential[a], Vec<K>::unit(b), K(1));
            v += tensor_vec(Vec<K>::unit(a), e.differential[b], sign<K>(deg(d, a)));
            out.differential[idx(a, b)] = v;
        }
    for (auto& [kd, vd] : d.composition)
        for (auto& [ke, ve] : e.composition) {
            // (f⊗g)∘(f'⊗g') with f = kd.first, f' = kd.second, g = ke.first, g' = ke.second
            K s = sign<K>(static_cast<long long>(deg(e, ke.first)) * deg(d, kd.second));
            out.add_composition(idx(kd.first, ke.first), idx(kd.second, ke.second), tensor_vec(vd, ve, s));
        }
    if (d.units && e.units) {
        std::vector<Vec<K>> u;
        for (std::size_t x = 0; x < d.num_objects(); ++x)
            for (std::size_t y = 0; y < e.num_objects(); ++y) u.push_back(tensor_vec(d.unit(x), e.unit(y), K(1)));
        out.units = std::move(u);
    }
    if ((d.is_curved() || e.is_curved()) && d.units && e.units) {
        for (std::size_t x = 0; x < d.num_objects(); ++x)
            for (std::size_t y = 0; y < e.num_objects(); ++y)
                out.curvature.push_back(tensor_vec(d.curvature_at(x), e.unit(y), K(1)) +
                                        tensor_vec(d.unit(x), e.curvature_at(y), K(1)));
    }
    return out;
}

/// D^op: arrows reversed, g ∘op f = (-1)^{|f||g|} f∘g. An involution on the nose.
template <Field K>
Category<K> opposite(const Category<K>& d) {
    if (d.zero) return d;
    GradedQuiver q(d.quiver.objects());
    for (auto& a : d.quiver.arrows()) q.add_arrow(a.name, a.tgt, a.src, a.degree);
    auto out = make_category<K>(std::move(q));
    out.differential = d.differential;
    for (auto& [key, val] : d.composition) {
        // key = (g, f) meaning g∘f in D; in D^op this is f ∘op g.
        K s = sign<K>(static_cast<long long>(deg(d, key.first)) * deg(d, key.second));
        out.add_composition(key.second, key.first, val.scaled(s));
    }
    out.units = d.units;
    if (d.is_curved()) {
        // (D^op) inherits d; d²f = h_x f - f h_y in op-notation needs h ↦ -h.
        for (auto& h : d.curvature) out.curvature.push_back(-h);
    }
    return out;
}

/// The hom complex D(x, y) restricted to degrees [lo, hi].
template <Field K>
BoundedComplex<K> hom_complex(const Category<K>& c, std::size_t x, std::size_t y, int lo, int hi,
                              Boundary boundary = Boundary::zero_outside) {
    BoundedComplex<K> out;
    out.lo = lo;
    out.boundary = boundary;
    std::vector<std::vector<std::size_t>> idx;
    for (int n = lo; n <= hi; ++n) {
        idx.push_back(c.quiver.slot(x, y, n));
        std::vector<std::string> names;
        for (auto a : idx.back()) names.push_back(c.label(a));
        out.bases.push_back(std::move(names));
    }
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        std::map<std::size_t, std::size_t> pos;
        for (std::size_t r = 0; r < idx[i + 1].size(); ++r) pos[idx[i + 1][r]] = r;
        std::vector<Vec<K>> cols;
        for (auto a : idx[i]) {
            Vec<K> col;
            for (auto& [b, k] : c.differential[a]) col.add(pos.at(b), k);
            cols.push_back(std::move(col));
        }
        out.differential.push_back(SparseMatrix<K>::from_columns(idx[i + 1].size(), std::move(cols)));
    }
    return out;
}

/// Cohomology dimensions of D(x, y) in degrees [lo, hi]; exact since D is finite.
template <Field K>
std::map<int, std::size_t> hom_homology(const Category<K>& c, std::size_t x, std::size_t y, int lo, int hi) {
    if (c.is_curved()) throw ValidationError("hom homology requested on a curved category");
    if (c.zero) {
        std::map<int, std::size_t> z;
        for (int n = lo; n <= hi; ++n) z[n] = 0;
        return z;
    }
    return homology_dims(hom_complex(c, x, y, lo - 1, hi + 1, Boundary::interior_only));
}

/**
 * Transports the structure of `c` along a slot-preserving change of basis:
 * the new basis vector j is Σ_i p[j][i] e_i, and `p_inv` is the inverse map
 * (old basis vector i in terms of the new basis).
 */
template <Field K>
Category<K> change_basis(const Category<K>& c, const std::vector<Vec<K>>& p, const std::vector<Vec<K>>& p_inv) {
    auto to_new = [&](const Vec<K>& v) {
        Vec<K> r;
        for (auto& [i, k] : v) r.axpy(k, p_inv.at(i));
        return r;
    };
    Category<K> out = c;
    out.composition.clear();
    for (std::size_t j = 0; j < c.num_arrows(); ++j) out.differential[j] = to_new(c.d(p[j]));
    for (std::size_t g = 0; g < c.num_arrows(); ++g)
        for (std::size_t f = 0; f < c.num_arrows(); ++f) {
            if (c.quiver.arrow(f).tgt != c.quiver.arrow(g).src) continue;
            out.add_composition(g, f, to_new(c.compose(p[g], p[f])));
        }
    if (c.units) {
        std::vector<Vec<K>> u;
        for (auto& v : *c.units) u.push_back(to_new(v));
        out.units = std::move(u);
    }
    for (auto& h : out.curvature) h = to_new(h);
    return out;
}

}  // namespace kdual
