#pragma once

/**
 * @file adjunction.hpp
 * @brief Hom(C, BD) ≅ MC(C̄, D) ≅ Hom(ΩC, D): transports, independent
 * enumerations of the outer sets, and the counit ΩBD -> D.
 */

#include <functional>

#include "kdual/cobar.hpp"
#include "kdual/complex.hpp"
#include "kdual/mc.hpp"

namespace kdual {

/// A dg functor ΩC -> D, determined by an object map and the images of the generators s⁻¹c.
template <Field K>
struct CobarFunctor {
    std::vector<std::size_t> object_map;
    std::vector<Vec<K>> generator_image;
    bool operator==(const CobarFunctor&) const = default;
};

/// F(w) for a word of generators (w[0] applied last); the empty word at x goes to 1_{fx}.
template <Field K>
Vec<K> evaluate_word(const Category<K>& d, const CobarFunctor<K>& f, const Word& w, std::size_t src) {
    if (w.empty()) return d.unit(f.object_map[src]);
    Vec<K> v = f.generator_image[w.back()];
    for (std::size_t i = w.size() - 1; i-- > 0 && !v.is_zero();) v = d.compose(f.generator_image[w[i]], v);
    return v;
}

/// F commutes with d on every generator (which is all a semi-free source requires).
template <Field K>
Report check_cobar_functor(const CobarConstruction<K>& omega, const Category<K>& d, const CobarFunctor<K>& f) {
    const auto& c = omega.coalgebra();
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const Arrow& a = c.reduced.arrow(i);
        for (auto& [e, k] : f.generator_image[i]) {
            const Arrow& ea = d.quiver.arrow(e);
            if (ea.src != f.object_map[a.src] || ea.tgt != f.object_map[a.tgt] || ea.degree != a.degree + 1)
                return Report::fail("image of generator s-" + a.name + " leaves its slot");
        }
        Vec<K> lhs = d.d(f.generator_image[i]);
        Vec<K> rhs;
        for (auto& [w, k] : omega.d_letter(i)) rhs.axpy(k, evaluate_word(d, f, w, a.src));
        if (!(lhs == rhs)) return Report::fail("functor does not commute with d on s-" + a.name);
    }
    return Report::pass();
}

/// The functor of an MC element: s⁻¹c ↦ ξ(c).
template <Field K>
CobarFunctor<K> functor_from_mc(const PointedCoalgebra<K>& c, const Category<K>& d, const McElement<K>& m) {
    if (!mc_check(c, d, m).ok) throw ValidationError("functor_from_mc: element fails the MC equation");
    return {m.object_map, m.xi};
}

template <Field K>
McElement<K> mc_from_functor(const CobarFunctor<K>& f) {
    return {f.object_map, f.generator_image};
}

/// The functor as a DgFunctor on a materialization of ΩC (units first, then words).
template <Field K>
DgFunctor<K> materialized_functor(const typename CobarConstruction<K>::Materialized& m, const Category<K>& d,
                                  const CobarFunctor<K>& f) {
    DgFunctor<K> out;
    out.object_map = f.object_map;
    const std::size_t n = m.category.num_objects();
    for (std::size_t x = 0; x < n; ++x) out.arrow_map.push_back(d.unit(f.object_map[x]));
    for (auto& w : m.words) out.arrow_map.push_back(evaluate_word(d, f, w, 0));
    return out;
}

/**
 * Hom(ΩC, D) by brute force over generator images: every assignment of
 * each s⁻¹c to its slot is tried and kept when F d = d F on generators.
 */
template <FiniteField K>
std::vector<CobarFunctor<K>> enumerate_cobar_functors(const PointedCoalgebra<K>& c, const Category<K>& d,
                                                      std::size_t dimension_cap = 22) {
    std::vector<CobarFunctor<K>> out;
    if (c.final) {
        if (d.zero) out.push_back({});
        return out;
    }
    CobarConstruction<K> omega(c);
    ObjectMaps maps(c.num_objects(), d.num_objects());
    const auto elems = K::elements();
    for (std::size_t fi = 0; fi < maps.size(); ++fi) {
        CobarFunctor<K> f{maps[fi], std::vector<Vec<K>>(c.dim())};
        std::vector<std::pair<std::size_t, std::size_t>> coords;
        for (std::size_t i = 0; i < c.dim(); ++i) {
            const Arrow& a = c.reduced.arrow(i);
            for (auto e : d.quiver.slot(f.object_map[a.src], f.object_map[a.tgt], a.degree + 1))
                coords.push_back({i, e});
        }
        if (coords.size() > dimension_cap) throw CapExceeded("functor enumeration: too many generator coordinates");
        std::vector<std::size_t> digit(coords.size(), 0);
        for (;;) {
            for (auto& g : f.generator_image) g = {};
            for (std::size_t k = 0; k < coords.size(); ++k)
                f.generator_image[coords[k].first].add(coords[k].second, elems[digit[k]]);
            if (d.zero || check_cobar_functor(omega, d, f).ok) out.push_back(f);
            std::size_t k = 0;
            while (k < digit.size() && ++digit[k] == elems.size()) digit[k++] = 0;
            if (k == digit.size()) break;
        }
    }
    return out;
}

/**
 * The coalgebra morphism C -> B_{≤W}D of an MC element:
 * f(c) = Σ_n Σ [sπξ(c_1)|…|sπξ(c_n)] over Δ̄^{(n)}(c) = Σ c_1⊗…⊗c_n, and a = ε∘ξ.
 * W must be at least the nilpotency length of C.
 */
template <Field K>
CoalgebraMorphism<K> morphism_from_mc(const PointedCoalgebra<K>& c, const BarConstruction<K>& bar,
                                      const typename BarConstruction<K>::Materialized& bd, const McElement<K>& m) {
    const std::size_t len = nilpotency_length(c);
    if (bd.weight_cap < len) throw InexactWindow("bar weight cap below the nilpotency length of the coalgebra");
    CoalgebraMorphism<K> out;
    out.object_map = m.object_map;
    std::vector<Vec<K>> pi(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) {
        auto [p, eps] = bar.split(m.xi[i]);
        pi[i] = std::move(p);
        K a(0);
        for (auto& [x, k] : eps) a += k;
        out.twist.push_back(a);
    }
    for (std::size_t i = 0; i < c.dim(); ++i) {
        Vec<K> img;
        for (std::size_t n = 1; n <= len; ++n)
            for (auto& [w, k] : iterated_delta(c, i, n)) {
                // expand the tensor product of the π-images letter by letter
                WordVec<K> acc;
                add_term(acc, Word{}, k);
                for (auto ci : w) {
                    WordVec<K> next;
                    for (auto& [pw, pk] : acc)
                        for (auto& [l, lk] : pi[ci]) {
                            Word nw = pw;
                            nw.push_back(l);
                            add_term(next, nw, pk * lk);
                        }
                    acc = std::move(next);
                }
                for (auto& [bw, bk] : acc) img.add(bd.index.at(bw), bk);
            }
        out.arrow_map.push_back(std::move(img));
    }
    return out;
}

/// Inverse transport: ξ(c) = a(c)·1_{f x} + the weight-one component of f(c), read in D.
template <Field K>
McElement<K> mc_from_morphism(const PointedCoalgebra<K>& c, const BarConstruction<K>& bar,
                              const typename BarConstruction<K>::Materialized& bd, const CoalgebraMorphism<K>& f) {
    McElement<K> m{f.object_map, std::vector<Vec<K>>(c.dim())};
    const auto& d = bar.category();
    for (std::size_t i = 0; i < c.dim(); ++i) {
        for (auto& [j, k] : f.arrow_map[i]) {
            const Word& w = bd.words[j];
            if (w.size() == 1) m.xi[i].axpy(k, bar.complement_vector(w[0]));
        }
        if (!f.a(i).is_zero()) m.xi[i].axpy(f.a(i), d.unit(f.object_map[c.reduced.arrow(i).src]));
    }
    return m;
}

/// Hom(C, BD) through B_{≤W}D with W the nilpotency length of C (weight-exact).
template <FiniteField K>
std::vector<CoalgebraMorphism<K>> enumerate_bar_morphisms(const PointedCoalgebra<K>& c, const BarConstruction<K>& bar,
                                                          const typename BarConstruction<K>::Materialized& bd) {
    if (!c.final && bd.weight_cap < nilpotency_length(c))
        throw InexactWindow("bar weight cap below the nilpotency length of the coalgebra");
    return enumerate_morphisms(c, bd.coalgebra);
}

/// The three sides of the adjunction, each enumerated on its own, and the transport checks.
template <FiniteField K>
struct AdjunctionReport {
    std::size_t functors = 0, mc_elements = 0, bar_morphisms = 0;
    Report transports;
    bool ok() const { return functors == mc_elements && mc_elements == bar_morphisms && transports.ok; }
};

template <FiniteField K>
AdjunctionReport<K> check_adjunction(const PointedCoalgebra<K>& c, const Category<K>& d) {
    AdjunctionReport<K> r;
    if (d.zero || c.final) {
        // B𝟎 = * and Ω* = 𝟎: each side is a point or empty with nothing to transport
        r.functors = enumerate_cobar_functors(c, d).size();
        r.mc_elements = c.final ? r.functors : mc_enumerate(c, d).size();
        r.bar_morphisms = enumerate_morphisms(c, BarConstruction<K>(d).materialize(1).coalgebra).size();
        r.transports = Report::pass();
        return r;
    }
    auto functors = enumerate_cobar_functors(c, d);
    auto mcs = mc_enumerate(c, d);
    BarConstruction<K> bar(d);
    auto bd = bar.materialize(std::max<std::size_t>(1, nilpotency_length(c)));
    auto morphisms = enumerate_bar_morphisms(c, bar, bd);
    r.functors = functors.size();
    r.mc_elements = mcs.size();
    r.bar_morphisms = morphisms.size();
    CobarConstruction<K> omega(c);
    for (auto& m : mcs) {
        auto f = functor_from_mc(c, d, m);
        if (!check_cobar_functor(omega, d, f).ok) return r.transports = Report::fail("MC element gives no functor"), r;
        if (std::find(functors.begin(), functors.end(), f) == functors.end())
            return r.transports = Report::fail("transported functor missing from the enumeration"), r;
        if (!(mc_from_functor(f) == m)) return r.transports = Report::fail("functor round trip differs"), r;
        auto g = morphism_from_mc(c, bar, bd, m);
        if (auto v = validate_morphism(g, c, bd.coalgebra); !v.ok)
            return r.transports = Report::fail("transported morphism invalid: " + v.failure), r;
        if (std::find(morphisms.begin(), morphisms.end(), g) == morphisms.end())
            return r.transports = Report::fail("transported morphism missing from the enumeration"), r;
        if (!(mc_from_morphism(c, bar, bd, g) == m)) return r.transports = Report::fail("morphism round trip differs"), r;
    }
    for (auto& g : morphisms) {
        auto m = mc_from_morphism(c, bar, bd, g);
        if (!mc_check(c, d, m).ok) return r.transports = Report::fail("morphism gives no MC element"), r;
        if (!(morphism_from_mc(c, bar, bd, m) == g)) return r.transports = Report::fail("morphism round trip differs"), r;
    }
    r.transports = Report::pass();
    return r;
}

/**
 * Compares hom homology of ΩBD with D through the counit ΩBD -> D
 * (s⁻¹[sa] ↦ ā, longer bar words ↦ 0).
 *
 * When BD is finite the comparison is on the degree window [lo, hi]. When it
 * is not, but the bar differential preserves bar weight and the curvature
 * vanishes, ΩBD splits as a sum of finite complexes P_N (total bar weight N);
 * each P_N with N ≤ weight_cap is computed in full and the window becomes
 * bigraded: degrees [lo, hi] and weight ≤ weight_cap.
 */
template <Field K>
struct CounitComparison {
    bool weight_graded = false;
    std::size_t weight_cap = 0;
    int lo = 0, hi = 0;
    Report functor;
    std::map<std::pair<std::size_t, std::size_t>, std::map<int, std::size_t>> omega_dims, target_dims;
    /// weight_graded only: per (x, y), the weights N ≥ 2 whose piece has nonzero homology.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> nonacyclic_pieces;
    bool match() const { return functor.ok && omega_dims == target_dims; }
};

namespace detail {

/// Composable sequences of cobar letters from x to y whose bar weights sum to n.
template <Field K>
std::vector<Word> weight_words(const typename BarConstruction<K>::Materialized& bd, std::size_t x, std::size_t y,
                               std::size_t n) {
    std::vector<Word> out;
    const auto& q = bd.coalgebra.reduced;
    std::function<void(Word&, std::size_t, std::size_t)> rec = [&](Word& w, std::size_t at, std::size_t left) {
        // w is built right to left: at is the current target object
        if (left == 0) {
            if (at == y) out.emplace_back(w.rbegin(), w.rend());
            return;
        }
        for (std::size_t l = 0; l < q.num_arrows(); ++l) {
            const Arrow& a = q.arrow(l);
            if (a.src != at || bd.words[l].size() > left) continue;
            w.push_back(l);
            rec(w, a.tgt, left - bd.words[l].size());
            w.pop_back();
        }
    };
    Word w;
    rec(w, x, n);
    if (n == 0 && x != y) out.clear();
    return out;
}

}  // namespace detail

template <Field K>
CounitComparison<K> counit_comparison(const Category<K>& d, int lo, int hi, std::size_t weight_cap = 6) {
    CounitComparison<K> out;
    out.lo = lo;
    out.hi = hi;
    BarConstruction<K> bar(d);
    const std::size_t n = d.num_objects();
    auto longest = bar.longest_word();
    out.weight_graded = !longest;
    out.weight_cap = longest ? *longest : weight_cap;
    auto bd = bar.materialize(std::max<std::size_t>(1, out.weight_cap));
    std::vector<std::size_t> id(n);
    for (std::size_t x = 0; x < n; ++x) id[x] = x;
    McElement<K> tau{id, bar.counit_cochain(bd)};
    CobarConstruction<K> omega(bd.coalgebra);
    out.functor = mc_check(bd.coalgebra, d, tau).ok ? check_cobar_functor(omega, d, CobarFunctor<K>{id, tau.xi})
                                                     : Report::fail("counit cochain fails the MC equation");
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) out.target_dims[{x, y}] = hom_homology(d, x, y, lo, hi);
    if (!out.weight_graded) {
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) out.omega_dims[{x, y}] = omega.hom_homology(x, y, lo, hi);
        return out;
    }
    for (std::size_t i = 0; i < bd.words.size(); ++i) {
        if (!bd.coalgebra.h(i).is_zero())
            throw InexactWindow("counit comparison: BD is infinite and curved, so it has no weight grading");
        for (auto& [j, k] : bd.coalgebra.differential[i])
            if (bd.words[j].size() != bd.words[i].size())
                throw InexactWindow("counit comparison: BD is infinite and its differential changes bar weight");
    }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            auto& dims = out.omega_dims[{x, y}];
            for (int k = lo; k <= hi; ++k) dims[k] = 0;
            for (std::size_t wgt = 0; wgt <= weight_cap; ++wgt) {
                auto words = detail::weight_words<K>(bd, x, y, wgt);
                if (words.empty()) continue;
                std::map<int, std::vector<Word>> by_degree;
                for (auto& w : words) by_degree[word_degree(omega.letters(), w)].push_back(w);
                BoundedComplex<K> cx;
                cx.lo = by_degree.begin()->first - 1;
                const int top = by_degree.rbegin()->first + 1;
                for (int k = cx.lo; k <= top; ++k) {
                    std::vector<std::string> names;
                    for (auto& w : by_degree[k]) names.push_back(w.empty() ? "1" : word_name(omega.letters(), w));
                    cx.bases.push_back(std::move(names));
                }
                for (int k = cx.lo; k < top; ++k) {
                    std::map<Word, std::size_t> row;
                    for (auto& w : by_degree[k + 1]) row.emplace(w, row.size());
                    std::vector<Vec<K>> cols;
                    for (auto& w : by_degree[k]) {
                        Vec<K> col;
                        for (auto& [dw, c] : omega.d_word(w)) {
                            auto it = row.find(dw);
                            if (it == row.end()) throw ValidationError("cobar differential leaves a weight piece");
                            col.add(it->second, c);
                        }
                        cols.push_back(std::move(col));
                    }
                    cx.differential.push_back(SparseMatrix<K>::from_columns(row.size(), std::move(cols)));
                }
                bool acyclic = true;
                for (auto& [k, dim] : homology_dims(cx)) {
                    if (dim) acyclic = false;
                    if (k >= lo && k <= hi) dims[k] += dim;
                }
                if (wgt >= 2 && !acyclic) out.nonacyclic_pieces[{x, y}].push_back(wgt);
            }
        }
    return out;
}

}  // namespace kdual
