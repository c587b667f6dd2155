#pragma once

/**
 * @file mc.hpp
 * @brief Maurer–Cartan elements, the categories MC*(C, D) and the internal
 * hom uHom(C, BD) = B MC*(C, D).
 *
 * An MC element is an object map f: Ob C -> Ob D with a degree-1 cochain
 * ξ on C̄, ξ(c) ∈ D(f src c, f tgt c), such that for every c
 *
 *     d ξ(c) + ξ(d c) + Σ (-1)^{|c'|} ξ(c') ξ(c'') + h(c)·1_{f x} = 0.
 */

#include <functional>

#include "kdual/bar.hpp"
#include "kdual/convolution.hpp"
#include "kdual/enumerate.hpp"

namespace kdual {

template <Field K>
struct McElement {
    std::vector<std::size_t> object_map;
    std::vector<Vec<K>> xi;  // one D-vector per basis element of C̄
    bool operator==(const McElement&) const = default;
};

template <Field K>
struct McCheck {
    bool ok = true;
    std::vector<Vec<K>> residual;  // per basis element of C̄
};

namespace detail {

template <Field K>
void require_mc_target(const Category<K>& d) {
    if (d.is_curved()) throw ValidationError("MC elements need an uncurved target category");
    if (!d.units) throw ValidationError("MC elements need a unital target category");
}

template <Field K>
Vec<K> mc_residual_at(const PointedCoalgebra<K>& c, const Category<K>& d, const McElement<K>& m, std::size_t i) {
    Vec<K> r = d.d(m.xi[i]);
    for (auto& [j, k] : c.differential[i]) r.axpy(k, m.xi[j]);
    for (auto& [lr, k] : c.comult[i]) {
        if (m.xi[lr.first].is_zero() || m.xi[lr.second].is_zero()) continue;
        r.axpy(sign<K>(c.deg(lr.first)) * k, d.compose(m.xi[lr.first], m.xi[lr.second]));
    }
    if (!c.h(i).is_zero()) r.axpy(c.h(i), d.unit(m.object_map[c.reduced.arrow(i).src]));
    return r;
}

}  // namespace detail

/// Checks shape and degrees, then evaluates the MC residual on every basis element.
template <Field K>
McCheck<K> mc_check(const PointedCoalgebra<K>& c, const Category<K>& d, const McElement<K>& m) {
    if (c.final) throw ValidationError("the final coalgebra has no MC elements");
    detail::require_mc_target(d);
    if (m.object_map.size() != c.num_objects()) throw ValidationError("MC element: object map has the wrong length");
    for (auto o : m.object_map)
        if (o >= d.num_objects()) throw ValidationError("MC element: object map leaves the category");
    if (m.xi.size() != c.dim()) throw ValidationError("MC element: cochain has the wrong length");
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const Arrow& a = c.reduced.arrow(i);
        for (auto& [e, k] : m.xi[i]) {
            const Arrow& ea = d.quiver.arrow(e);
            if (ea.src != m.object_map[a.src] || ea.tgt != m.object_map[a.tgt])
                throw ValidationError("MC element: value on '" + a.name + "' leaves its hom space");
            if (ea.degree != a.degree + 1)
                throw ValidationError("MC element: cochain does not have degree 1 (value on '" + a.name + "')");
        }
    }
    McCheck<K> out;
    for (std::size_t i = 0; i < c.dim(); ++i) {
        out.residual.push_back(detail::mc_residual_at(c, d, m, i));
        if (!out.residual.back().is_zero()) out.ok = false;
    }
    return out;
}

struct McEnumOptions {
    /// Largest number of unknown coordinates assigned at once (one filtration level).
    std::size_t level_dimension_cap = 22;
    std::size_t object_cap = 1u << 12;
    std::size_t result_cap = 1u << 20;
};

/**
 * All MC elements, by object map and then filtration level of C̄: in an
 * adapted basis, the MC equation on a level-L element only involves ξ on
 * levels ≤ L, so each level is enumerated and pruned before the next.
 */
template <Field K>
std::vector<McElement<K>> mc_enumerate(const PointedCoalgebra<K>& c0, const Category<K>& d,
                                       const McEnumOptions& opt = {}) {
    if constexpr (!FiniteField<K>) {
        throw Error("MC enumeration is refused over an infinite field; check explicit elements with mc_check");
    } else {
        if (c0.final) throw ValidationError("the final coalgebra has no MC elements");
        detail::require_mc_target(d);
        std::vector<McElement<K>> out;
        if (d.zero) {
            // D = 𝟎 has only the zero morphism; curvature terms vanish there
            out.push_back({std::vector<std::size_t>(c0.num_objects(), 0), std::vector<Vec<K>>(c0.dim())});
            return out;
        }
        auto ab = filtration_adapted_basis(c0);
        PointedCoalgebra<K> c = change_basis(c0, ab.p, ab.p_inv);
        const std::size_t n = c.dim();
        std::vector<std::vector<std::size_t>> levels;
        for (std::size_t i = 0; i < n; ++i) {
            if (levels.size() < ab.level[i]) levels.resize(ab.level[i]);
            levels[ab.level[i] - 1].push_back(i);
        }
        ObjectMaps maps(c.num_objects(), d.num_objects(), opt.object_cap);
        const auto elems = K::elements();
        for (std::size_t fi = 0; fi < maps.size(); ++fi) {
            McElement<K> m{maps[fi], std::vector<Vec<K>>(n)};
            std::function<void(std::size_t)> rec = [&](std::size_t l) {
                if (l == levels.size()) {
                    if (out.size() >= opt.result_cap) throw CapExceeded("MC enumeration exceeds the result cap");
                    McElement<K> orig{m.object_map, std::vector<Vec<K>>(n)};
                    for (std::size_t i = 0; i < n; ++i)
                        for (auto& [j, k] : ab.p_inv[i]) orig.xi[i].axpy(k, m.xi[j]);
                    out.push_back(std::move(orig));
                    return;
                }
                // coordinates: (element, D arrow)
                std::vector<std::pair<std::size_t, std::size_t>> coords;
                for (auto i : levels[l]) {
                    const Arrow& a = c.reduced.arrow(i);
                    for (auto e : d.quiver.slot(m.object_map[a.src], m.object_map[a.tgt], a.degree + 1))
                        coords.push_back({i, e});
                }
                if (coords.size() > opt.level_dimension_cap)
                    throw CapExceeded("MC enumeration: " + std::to_string(coords.size()) +
                                      " unknowns on one filtration level exceed the cap");
                std::vector<std::size_t> digit(coords.size(), 0);
                for (;;) {
                    for (auto i : levels[l]) m.xi[i] = {};
                    for (std::size_t k = 0; k < coords.size(); ++k)
                        m.xi[coords[k].first].add(coords[k].second, elems[digit[k]]);
                    bool good = true;
                    for (auto i : levels[l])
                        if (!detail::mc_residual_at(c, d, m, i).is_zero()) {
                            good = false;
                            break;
                        }
                    if (good) rec(l + 1);
                    std::size_t k = 0;
                    while (k < digit.size() && ++digit[k] == elems.size()) digit[k++] = 0;
                    if (k == digit.size()) break;
                }
                for (auto i : levels[l]) m.xi[i] = {};
            };
            rec(0);
        }
        return out;
    }
}

template <Field K>
std::string mc_element_name(const PointedCoalgebra<K>& c, const Category<K>& d, const McElement<K>& m,
                            std::size_t ordinal) {
    return object_map_name(c.reduced, d.quiver, m.object_map) + "#" + std::to_string(ordinal);
}

/**
 * MC*(C, D): objects are the given MC elements, Hom(ξ, ξ') = Hom_{C,D}(f, f')
 * in the counital convolution category, with differential
 * d^{[ξ,ξ']} φ = ∂φ + ξ'⋆φ - (-1)^{|φ|} φ⋆ξ.
 */
template <Field K>
struct McCategory {
    Category<K> category;
    std::vector<McElement<K>> objects;
    ConvolutionCategory<K> convolution;
    std::vector<std::size_t> convolution_arrow;  // arrow of MC* -> arrow of {C, D}
};

template <Field K>
McCategory<K> mc_category(const PointedCoalgebra<K>& c, const Category<K>& d, std::vector<McElement<K>> objects,
                          bool verify = true) {
    if (c.final) throw ValidationError("the final coalgebra has no MC category");
    detail::require_mc_target(d);
    for (std::size_t i = 0; i < objects.size(); ++i)
        if (!mc_check(c, d, objects[i]).ok)
            throw ValidationError("object " + mc_element_name(c, d, objects[i], i) + " fails the MC equation");
    McCategory<K> out;
    out.objects = std::move(objects);
    out.convolution = convolution_category(expand(c, true), d);
    const auto& U = out.convolution;
    if (U.category.zero) {
        out.category = zero_category<K>();
        return out;
    }
    ObjectMaps maps(c.num_objects(), d.num_objects());
    const std::size_t n = out.objects.size(), off = c.num_objects();
    std::vector<std::size_t> fmap(n);
    std::vector<Vec<K>> xi(n);
    GradedQuiver q;
    for (std::size_t i = 0; i < n; ++i) {
        q.add_object(mc_element_name(c, d, out.objects[i], i));
        fmap[i] = maps.index_of(out.objects[i].object_map);
        std::vector<Vec<K>> full(off + c.dim());
        for (std::size_t j = 0; j < c.dim(); ++j) full[off + j] = out.objects[i].xi[j];
        xi[i] = U.from_cochain(fmap[i], fmap[i], full);
    }
    // arrows of Hom(i, j), and the inverse lookup per (i, j, U arrow)
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> local;
    std::vector<std::vector<std::size_t>> from(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (auto a : U.category.quiver.hom(fmap[i], fmap[j])) {
                local[{i, j, a}] = q.add_arrow(std::to_string(i) + "=>" + std::to_string(j) + ":" + U.category.label(a),
                                               i, j, U.category.quiver.arrow(a).degree);
                out.convolution_arrow.push_back(a);
                from[i].push_back(local[{i, j, a}]);
            }
    auto& cat = out.category;
    cat = make_category<K>(std::move(q));
    auto lift = [&](std::size_t i, std::size_t j, const Vec<K>& v) {
        Vec<K> r;
        for (auto& [a, k] : v) r.add(local.at({i, j, a}), k);
        return r;
    };
    for (std::size_t a = 0; a < cat.num_arrows(); ++a) {
        const Arrow& ar = cat.quiver.arrow(a);
        const std::size_t u = out.convolution_arrow[a];
        Vec<K> phi = Vec<K>::unit(u);
        Vec<K> dv = U.category.differential[u];
        dv += U.category.compose(xi[ar.tgt], phi);
        dv.axpy(-sign<K>(ar.degree), U.category.compose(phi, xi[ar.src]));
        cat.differential[a] = lift(ar.src, ar.tgt, dv);
        for (std::size_t b : from[ar.tgt]) {
            const Vec<K>& v = U.category.compose_basis(out.convolution_arrow[b], u);
            if (!v.is_zero()) cat.add_composition(b, a, lift(ar.src, cat.quiver.arrow(b).tgt, v));
        }
    }
    std::vector<Vec<K>> units;
    for (std::size_t i = 0; i < n; ++i) units.push_back(lift(i, i, U.category.unit(fmap[i])));
    cat.units = std::move(units);
    if (verify) {
        auto r = validate_category(cat);
        if (!r.ok) throw ValidationError("MC category is not an honest dg category: " + r.failure);
    }
    return out;
}

/**
 * The complex Hom(ξ, ξ') of MC*(C, D) on degrees [lo-1, hi+1] (interior-only),
 * built directly from cochains c ↦ φ(c) on the counital basis without
 * materializing the rest of the category.
 */
template <Field K>
BoundedComplex<K> mc_hom_complex(const PointedCoalgebra<K>& c, const Category<K>& d, const McElement<K>& xi,
                                 const McElement<K>& xi2, int lo, int hi) {
    if (c.final) throw ValidationError("the final coalgebra has no MC category");
    detail::require_mc_target(d);
    for (auto* m : {&xi, &xi2})
        if (!mc_check(c, d, *m).ok) throw ValidationError("MC hom complex: an endpoint fails the MC equation");
    auto e = expand(c, true);
    const std::size_t off = c.num_objects();
    auto value = [&](const McElement<K>& m, std::size_t i) { return i < off ? Vec<K>{} : m.xi[i - off]; };
    using Cell = std::pair<std::size_t, std::size_t>;  // (coalgebra element, D arrow)
    std::map<int, std::vector<Cell>> cells;
    for (int n = lo - 1; n <= hi + 1; ++n) cells[n];
    for (std::size_t i = 0; i < e.dim(); ++i) {
        const Arrow& ca = e.basis.arrow(i);
        for (auto a : d.quiver.hom(xi.object_map[ca.src], xi2.object_map[ca.tgt])) {
            int n = d.quiver.arrow(a).degree - ca.degree;
            if (n >= lo - 1 && n <= hi + 1) cells[n].push_back({i, a});
        }
    }
    std::vector<std::vector<std::pair<std::size_t, K>>> d_transpose(e.dim());
    std::map<std::size_t, std::vector<std::tuple<std::size_t, std::size_t, K>>> as_left, as_right;  // (other, c, coef)
    for (std::size_t j = 0; j < e.dim(); ++j) {
        for (auto& [i, k] : e.d[j]) d_transpose[i].push_back({j, k});
        for (auto& [lr, k] : e.delta[j]) {
            as_left[lr.first].push_back({lr.second, j, k});
            as_right[lr.second].push_back({lr.first, j, k});
        }
    }
    BoundedComplex<K> cx;
    cx.lo = lo - 1;
    cx.boundary = Boundary::interior_only;
    for (int n = lo - 1; n <= hi + 1; ++n) {
        std::vector<std::string> names;
        for (auto& [i, a] : cells[n]) names.push_back(e.basis.label(i) + "^*" + d.label(a));
        cx.bases.push_back(std::move(names));
    }
    for (int n = lo - 1; n <= hi; ++n) {
        std::map<Cell, std::size_t> row;
        for (auto& cell : cells[n + 1]) row.emplace(cell, row.size());
        std::vector<Vec<K>> cols;
        for (auto& [i, a] : cells[n]) {
            Vec<K> col;
            auto put = [&](std::size_t at, const Vec<K>& v, K s) {
                for (auto& [b, k] : v) col.add(row.at({at, b}), s * k);
            };
            const Vec<K> phi = Vec<K>::unit(a);
            put(i, d.differential[a], K(1));
            for (auto& [j, k] : d_transpose[i]) put(j, phi, -(sign<K>(n) * k));
            // ξ'⋆φ: c with Δc ∋ c'⊗c_i
            for (auto& [left, j, k] : as_right[i])
                put(j, d.compose(value(xi2, left), phi), sign<K>(static_cast<long long>(n) * e.deg(left)) * k);
            // -(-1)^n φ⋆ξ: c with Δc ∋ c_i⊗c''
            for (auto& [right, j, k] : as_left[i])
                put(j, d.compose(phi, value(xi, right)), -(sign<K>(n) * sign<K>(e.deg(i)) * k));
            cols.push_back(std::move(col));
        }
        cx.differential.push_back(SparseMatrix<K>::from_columns(row.size(), std::move(cols)));
    }
    return cx;
}

template <Field K>
std::map<int, std::size_t> mc_hom_homology(const PointedCoalgebra<K>& c, const Category<K>& d, const McElement<K>& xi,
                                           const McElement<K>& xi2, int lo, int hi) {
    return homology_dims(mc_hom_complex(c, d, xi, xi2, lo, hi));
}

/// MC*(C, D) on every MC element.
template <FiniteField K>
McCategory<K> mc_category(const PointedCoalgebra<K>& c, const Category<K>& d, const McEnumOptions& opt = {}) {
    return mc_category(c, d, mc_enumerate(c, d, opt));
}

/**
 * MC elements of C ⊗ C' in D computed in two stages: first the MC elements
 * φ of C' in D, then the MC elements of C in MC*(C', D), which pairs each
 * φ-twisted category object with a ψ solving the twisted equation.
 */
template <FiniteField K>
std::vector<McElement<K>> mc_enumerate_two_stage(const PointedCoalgebra<K>& c, const PointedCoalgebra<K>& c2,
                                                 const Category<K>& d, const McEnumOptions& opt = {}) {
    auto inner = mc_category(c2, d, opt);
    return mc_enumerate(c, inner.category, opt);
}

/**
 * uHom(C, BD) = B MC*(C, D), returned as the bar construction of the MC
 * category. uHom(*, -) is the zero coalgebra (bar of the empty category);
 * D = 𝟎 and C = 0 both give MC* = 𝟎 and hence *.
 */
template <FiniteField K>
struct InternalHom {
    Category<K> mc;
    BarConstruction<K> bar;
};

template <FiniteField K>
InternalHom<K> internal_hom(const PointedCoalgebra<K>& c, const Category<K>& d, const McEnumOptions& opt = {}) {
    if (c.final) return {empty_category<K>(), BarConstruction<K>(empty_category<K>())};
    auto m = mc_category(c, d, opt);
    return {m.category, BarConstruction<K>(m.category)};
}

}  // namespace kdual
