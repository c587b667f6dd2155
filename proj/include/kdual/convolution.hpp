#pragma once

/**
 * @file convolution.hpp
 * @brief Convolution categories {C, D} and the interchange {C, {C', D}} ≅ {C ⊗ C', D}.
 *
 * The coalgebra side is an ExpandedCoalgebra: either the full coalgebra C
 * (grouplikes included, counital) or its reduced part C̄ (non-counital). An
 * arrow f -> g of {C, D} is spanned by elementary maps c*⊗e with
 * e ∈ D(f src c, g tgt c), of degree |e| - |c|. With Δc = Σ c'⊗c'':
 *
 *     (φ⋆ψ)(c) = Σ (-1)^{|ψ||c'|} φ(c') ψ(c'')
 *     ∂φ       = d_D φ - (-1)^{|φ|} φ d_C
 *     H_f(c)   = h_C(c)·1_{f x}  (+ h_D(f x)·ε(c) when D is curved)
 *     1_f      = Σ_x x* ⊗ 1_{f x}   (counital C, unital D)
 */

#include <map>
#include <tuple>

#include "kdual/category.hpp"
#include "kdual/coalgebra.hpp"

namespace kdual {

template <Field K>
struct ExpandedCoalgebra {
    GradedQuiver basis;  // objects of C; arrows = basis elements (grouplikes first when counital)
    std::vector<Tensor2<K>> delta;
    std::vector<Vec<K>> d;
    std::vector<K> h;
    std::vector<bool> grouplike;
    bool counital = false;

    std::size_t dim() const { return basis.num_arrows(); }
    int deg(std::size_t i) const { return basis.arrow(i).degree; }
    bool is_curved() const {
        for (auto& k : h)
            if (!k.is_zero()) return true;
        return false;
    }
    /// ε(c): coefficient of the grouplike, only for grouplike basis elements.
    bool has_counit(std::size_t i) const { return counital && grouplike[i]; }
};

/// Full (counital) or reduced view of a pointed coalgebra.
template <Field K>
ExpandedCoalgebra<K> expand(const PointedCoalgebra<K>& c, bool counital) {
    if (c.final) throw ValidationError("the final coalgebra has no convolution category");
    ExpandedCoalgebra<K> e;
    e.counital = counital;
    e.basis = GradedQuiver(c.reduced.objects());
    const std::size_t off = counital ? c.num_objects() : 0;
    if (counital)
        for (std::size_t x = 0; x < c.num_objects(); ++x) {
            e.basis.add_arrow(c.reduced.object_name(x), x, x, 0);
            Tensor2<K> t;
            add_term(t, x, x, K(1));
            e.delta.push_back(t);
            e.d.push_back({});
            e.h.push_back(K(0));
            e.grouplike.push_back(true);
        }
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const Arrow& a = c.reduced.arrow(i);
        e.basis.add_arrow(a.name, a.src, a.tgt, a.degree);
        Tensor2<K> t;
        if (counital) {
            add_term(t, a.tgt, off + i, K(1));
            add_term(t, off + i, a.src, K(1));
        }
        for (auto& [lr, k] : c.comult[i]) add_term(t, off + lr.first, off + lr.second, k);
        e.delta.push_back(std::move(t));
        Vec<K> dv;
        for (auto& [j, k] : c.differential[i]) dv.add(off + j, k);
        e.d.push_back(std::move(dv));
        e.h.push_back(c.h(i));
        e.grouplike.push_back(false);
    }
    return e;
}

/**
 * A ⊗ B with Koszul-signed Δ, Leibniz d and h(a⊗b) = h(a)ε(b) + ε(a)h(b).
 * Basis element (i, j) has index lex_index(i, j, |B|). A curved factor needs
 * a counital partner.
 */
template <Field K>
ExpandedCoalgebra<K> tensor_expanded(const ExpandedCoalgebra<K>& a, const ExpandedCoalgebra<K>& b) {
    if (a.is_curved() && !b.counital) throw ValidationError("tensor: curved factor needs a counital partner");
    if (b.is_curved() && !a.counital) throw ValidationError("tensor: curved factor needs a counital partner");
    ExpandedCoalgebra<K> t;
    t.counital = a.counital && b.counital;
    t.basis = quiver_tensor(a.basis, b.basis);
    const std::size_t nb = b.dim();
    auto idx = [nb](std::size_t i, std::size_t j) { return lex_index(i, j, nb); };
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            Tensor2<K> dl;
            for (auto& [l1, k1] : a.delta[i])
                for (auto& [l2, k2] : b.delta[j]) {
                    K s = sign<K>(static_cast<long long>(a.deg(l1.second)) * b.deg(l2.first));
                    add_term(dl, idx(l1.first, l2.first), idx(l1.second, l2.second), s * k1 * k2);
                }
            t.delta.push_back(std::move(dl));
            Vec<K> dv;
            for (auto& [p, k] : a.d[i]) dv.add(idx(p, j), k);
            for (auto& [p, k] : b.d[j]) dv.add(idx(i, p), sign<K>(a.deg(i)) * k);
            t.d.push_back(std::move(dv));
            K h(0);
            if (b.has_counit(j)) h += a.h[i];
            if (a.has_counit(i)) h += b.h[j];
            t.h.push_back(h);
            t.grouplike.push_back(a.grouplike[i] && b.grouplike[j]);
        }
    return t;
}

/// Elementary basis map of a convolution category.
struct ConvolutionBasis {
    std::size_t from_map, to_map;  // object maps (indices)
    std::size_t element;           // coalgebra basis element c
    std::size_t arrow;             // D arrow e
};

template <Field K>
struct ConvolutionCategory {
    Category<K> category;
    std::vector<std::vector<std::size_t>> object_maps;
    std::vector<ConvolutionBasis> basis;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, std::size_t> index;  // (f, g, c, e)

    /// Arrow index of c*⊗e in Hom(f, g), if it exists.
    std::optional<std::size_t> find(std::size_t f, std::size_t g, std::size_t c, std::size_t e) const {
        auto it = index.find({f, g, c, e});
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
    /// The arrow of Hom(f, g) given by a cochain: value[c] ∈ D(f src c, g tgt c).
    Vec<K> from_cochain(std::size_t f, std::size_t g, const std::vector<Vec<K>>& value) const {
        Vec<K> v;
        for (std::size_t c = 0; c < value.size(); ++c)
            for (auto& [e, k] : value[c]) v.add(index.at({f, g, c, e}), k);
        return v;
    }
    /// Inverse of from_cochain.
    std::vector<Vec<K>> to_cochain(const Vec<K>& v, std::size_t elements) const {
        std::vector<Vec<K>> out(elements);
        for (auto& [i, k] : v) out[basis[i].element].add(basis[i].arrow, k);
        return out;
    }
};

/**
 * {C, D}. Units exist when C is counital and D unital. Curvature η f h_C needs
 * D unital when C is curved; h_D f ε needs C counital when D is curved.
 */
template <Field K>
ConvolutionCategory<K> convolution_category(const ExpandedCoalgebra<K>& c, const Category<K>& d,
                                            std::size_t object_cap = 1u << 12) {
    ConvolutionCategory<K> out;
    const GradedQuiver& cq = c.basis;
    ObjectMaps maps(cq.num_objects(), d.num_objects(), object_cap);
    GradedQuiver q;
    for (std::size_t k = 0; k < maps.size(); ++k) {
        out.object_maps.push_back(maps[k]);
        q.add_object(object_map_name(cq, d.quiver, out.object_maps.back()));
    }
    if (d.zero || cq.num_objects() == 0) {
        // every hom vanishes: 𝟎 when there is exactly one object map
        out.category = make_category<K>(std::move(q));
        if (maps.size() == 1) {
            out.category.zero = true;
            out.category.units = std::vector<Vec<K>>{Vec<K>{}};
        }
        return out;
    }
    if (c.is_curved() && !d.units) throw ValidationError("convolution: curved coalgebra needs a unital category");
    if (d.is_curved() && !c.counital) throw ValidationError("convolution: curved category needs a counital coalgebra");

    for (std::size_t f = 0; f < maps.size(); ++f)
        for (std::size_t g = 0; g < maps.size(); ++g)
            for (std::size_t i = 0; i < c.dim(); ++i) {
                const Arrow& ca = cq.arrow(i);
                std::size_t s = out.object_maps[f][ca.src], t = out.object_maps[g][ca.tgt];
                for (auto e : d.quiver.hom(s, t)) {
                    const Arrow& ea = d.quiver.arrow(e);
                    out.index[{f, g, i, e}] = q.add_arrow(q.object_name(f) + "=>" + q.object_name(g) + ":" +
                                                              ca.name + "^*" + ea.name,
                                                          f, g, ea.degree - ca.degree);
                    out.basis.push_back({f, g, i, e});
                }
            }
    auto& cat = out.category;
    cat = make_category<K>(std::move(q));

    // transpose of Δ: (c1, c2) -> [(c, coef)]
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, K>>> cotimes;
    for (std::size_t i = 0; i < c.dim(); ++i)
        for (auto& [lr, k] : c.delta[i]) cotimes[lr].push_back({i, k});

    // composition φ⋆ψ for φ: g -> h, ψ: f -> g
    std::vector<std::vector<std::size_t>> by_src(cat.num_objects());
    for (std::size_t a = 0; a < out.basis.size(); ++a) by_src[out.basis[a].from_map].push_back(a);
    for (std::size_t psi = 0; psi < out.basis.size(); ++psi) {
        const auto& bp = out.basis[psi];
        const int dpsi = cat.quiver.arrow(psi).degree;
        for (std::size_t phi : by_src[bp.to_map]) {
            const auto& bf = out.basis[phi];
            auto it = cotimes.find({bf.element, bp.element});
            if (it == cotimes.end()) continue;
            const Vec<K>& prod = d.compose_basis(bf.arrow, bp.arrow);
            if (prod.is_zero()) continue;
            K s = sign<K>(static_cast<long long>(dpsi) * c.deg(bf.element));
            Vec<K> v;
            for (auto& [ci, coef] : it->second)
                for (auto& [e, k] : prod) v.add(out.index.at({bp.from_map, bf.to_map, ci, e}), s * coef * k);
            cat.add_composition(phi, psi, v);
        }
    }
    // differential
    std::vector<std::vector<std::pair<std::size_t, K>>> d_transpose(c.dim());  // c -> [(c', [c : d c'])]
    for (std::size_t j = 0; j < c.dim(); ++j)
        for (auto& [i, k] : c.d[j]) d_transpose[i].push_back({j, k});
    for (std::size_t a = 0; a < out.basis.size(); ++a) {
        const auto& b = out.basis[a];
        const int dphi = cat.quiver.arrow(a).degree;
        Vec<K> v;
        for (auto& [e, k] : d.differential[b.arrow]) v.add(out.index.at({b.from_map, b.to_map, b.element, e}), k);
        for (auto& [j, k] : d_transpose[b.element])
            v.add(out.index.at({b.from_map, b.to_map, j, b.arrow}), -(sign<K>(dphi) * k));
        cat.differential[a] = std::move(v);
    }
    // units and curvature
    if (c.counital && d.units) {
        std::vector<Vec<K>> units;
        for (std::size_t f = 0; f < maps.size(); ++f) {
            Vec<K> u;
            for (std::size_t i = 0; i < c.dim(); ++i) {
                if (!c.grouplike[i]) continue;
                std::size_t x = cq.arrow(i).src;
                for (auto& [e, k] : d.unit(out.object_maps[f][x])) u.add(out.index.at({f, f, i, e}), k);
            }
            units.push_back(std::move(u));
        }
        cat.units = std::move(units);
    }
    if (c.is_curved() || d.is_curved()) {
        cat.curvature.assign(maps.size(), {});
        for (std::size_t f = 0; f < maps.size(); ++f)
            for (std::size_t i = 0; i < c.dim(); ++i) {
                std::size_t x = cq.arrow(i).src;
                std::size_t fx = out.object_maps[f][x];
                if (!c.h[i].is_zero())
                    for (auto& [e, k] : d.unit(fx)) cat.curvature[f].add(out.index.at({f, f, i, e}), c.h[i] * k);
                if (c.has_counit(i))
                    for (auto& [e, k] : d.curvature_at(fx)) cat.curvature[f].add(out.index.at({f, f, i, e}), k);
            }
    }
    return out;
}

/// Which hypothesis of the interchange statement an instance satisfies.
enum class InterchangeCase { counital_outer_uncurved_target, uncurved_inner_and_target, both_counital };

template <Field K>
bool interchange_applies(InterchangeCase h, const ExpandedCoalgebra<K>& c, const ExpandedCoalgebra<K>& c2,
                         const Category<K>& d) {
    switch (h) {
        case InterchangeCase::counital_outer_uncurved_target:
            return c.counital && !d.is_curved() && (!c.is_curved() || c2.counital);
        case InterchangeCase::uncurved_inner_and_target:
            return !c2.is_curved() && !d.is_curved() && (!c.is_curved() || c2.counital);
        case InterchangeCase::both_counital:
            return c.counital && c2.counital;
    }
    return false;
}

/**
 * Builds both sides of {C, {C', D}} ≅ {C ⊗ C', D} and checks that the
 * currying bijection c*⊗(c'*⊗e) ↔ (c⊗c')*⊗e is an isomorphism of curved
 * categories: objects, degrees, composition, differential, curvature and units.
 */
template <Field K>
Report check_interchange(const ExpandedCoalgebra<K>& c, const ExpandedCoalgebra<K>& c2, const Category<K>& d) {
    auto inner = convolution_category(c2, d);
    auto left = convolution_category(c, inner.category);
    auto right = convolution_category(tensor_expanded(c, c2), d);
    const auto& L = left.category;
    const auto& R = right.category;
    if (L.num_objects() != R.num_objects()) return Report::fail("object counts differ");
    if (L.num_arrows() != R.num_arrows()) return Report::fail("hom dimensions differ");
    if (L.zero != R.zero) return Report::fail("one side is 𝟎 and the other is not");
    // objects: F: Ob C -> Ob{C',D} corresponds to (x, x') ↦ F(x)(x')
    const std::size_t n2 = c2.basis.num_objects();
    std::vector<std::size_t> obj(L.num_objects());
    ObjectMaps right_maps(c.basis.num_objects() * n2, d.num_objects());
    for (std::size_t f = 0; f < L.num_objects(); ++f) {
        std::vector<std::size_t> curried;
        for (auto inner_obj : left.object_maps[f])
            for (auto y : inner.object_maps[inner_obj]) curried.push_back(y);
        obj[f] = right_maps.index_of(curried);
    }
    std::vector<std::size_t> arrows(L.num_arrows());
    for (std::size_t a = 0; a < L.num_arrows(); ++a) {
        const auto& b = left.basis[a];
        const auto& ib = inner.basis[b.arrow];
        std::size_t ci = lex_index(b.element, ib.element, c2.dim());
        auto r = right.find(obj[b.from_map], obj[b.to_map], ci, ib.arrow);
        if (!r) return Report::fail("currying does not match arrow " + L.label(a));
        arrows[a] = *r;
    }
    if (!is_slot_isomorphism(L.quiver, R.quiver, obj, arrows)) return Report::fail("currying is not slot-preserving");
    auto map = [&](const Vec<K>& v) {
        Vec<K> r;
        for (auto& [i, k] : v) r.add(arrows[i], k);
        return r;
    };
    for (std::size_t a = 0; a < L.num_arrows(); ++a) {
        if (!(map(L.differential[a]) == R.differential[arrows[a]]))
            return Report::fail("differentials differ on " + L.label(a));
        for (std::size_t b = 0; b < L.num_arrows(); ++b)
            if (!(map(L.compose_basis(a, b)) == R.compose_basis(arrows[a], arrows[b])))
                return Report::fail("compositions differ on " + L.label(a) + "∘" + L.label(b));
    }
    for (std::size_t f = 0; f < L.num_objects(); ++f) {
        if (!(map(L.curvature_at(f)) == R.curvature_at(obj[f])))
            return Report::fail("curvatures differ at object " + L.quiver.object_name(f));
        if (L.units.has_value() != R.units.has_value()) return Report::fail("only one side is unital");
        if (L.units && !(map(L.unit(f)) == R.unit(obj[f])))
            return Report::fail("units differ at object " + L.quiver.object_name(f));
    }
    return Report::pass();
}

}  // namespace kdual
