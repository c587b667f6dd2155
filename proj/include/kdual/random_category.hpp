#pragma once

/**
 * @file random_category.hpp
 * @brief Random finite dg and curved categories.
 *
 * Dg categories are free categories truncated at word length 2 on random
 * generators whose differential lands in words of closed generators, so d²
 * vanishes generator by generator. A random slot-wise change of basis then
 * hides the monomial structure. Curved categories come from twisting a dg
 * category by an arbitrary degree-1 endomorphism per object.
 */

#include <utility>

#include "kdual/free.hpp"
#include "kdual/random.hpp"

namespace kdual {

template <Field K>
GeneratorQuiver<K> random_generator_quiver(Rng& rng, std::size_t max_objects = 2, std::size_t max_generators = 3,
                                           int dlo = -1, int dhi = 1) {
    GeneratorQuiver<K> v;
    auto n_gen = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(max_generators)));
    v.generators = random_quiver(rng, max_objects, n_gen, dlo, dhi, "g");
    const GradedQuiver& g = v.generators;
    v.d.assign(n_gen, {});
    std::vector<bool> closed(n_gen);
    for (std::size_t a = 0; a < n_gen; ++a) closed[a] = uniform_int(rng, 0, 1) == 1;
    std::vector<Word> closed_words;
    for (auto& w : composable_words(g, 2)) {
        bool ok = true;
        for (auto l : w) ok = ok && closed[l];
        if (ok) closed_words.push_back(w);
    }
    for (std::size_t a = 0; a < n_gen; ++a) {
        if (closed[a]) continue;
        const Arrow& ar = g.arrow(a);
        for (auto& w : closed_words)
            if (word_src(g, w) == ar.src && word_tgt(g, w) == ar.tgt && word_degree(g, w) == ar.degree + 1)
                add_term(v.d[a], w, random_scalar<K>(rng));
    }
    return v;
}

/// Slot-preserving random change of basis: returns (P, P⁻¹) as columns.
template <Field K>
std::pair<std::vector<Vec<K>>, std::vector<Vec<K>>> random_basis_change(Rng& rng, const GradedQuiver& q) {
    std::vector<Vec<K>> p(q.num_arrows()), pinv(q.num_arrows());
    for (auto& [slot, idx] : q.slots()) {
        const std::size_t n = idx.size();
        SparseMatrix<K> m(n, n);
        for (;;) {
            m = SparseMatrix<K>(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m.set(i, j, random_scalar<K>(rng));
            if (rank(m) == n) break;
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (auto& [i, k] : m.column(j)) p[idx[j]].add(idx[i], k);
            auto col = *solve(m, Vec<K>::unit(j));
            for (auto& [i, k] : col) pinv[idx[j]].add(idx[i], k);
        }
    }
    return {p, pinv};
}

/**
 * Random dg category with at most `max_reduced` non-unit basis arrows. When
 * `monomial` is set the word basis is kept, so the non-unit arrows span a
 * subcategory closed under d (an augmented category).
 */
template <Field K>
Category<K> random_dg_category(Rng& rng, std::size_t max_reduced = 4, bool monomial = false,
                               std::size_t max_objects = 2) {
    for (;;) {
        auto v = random_generator_quiver<K>(rng, max_objects, std::min<std::size_t>(3, max_reduced));
        auto c = free_category(v, std::size_t{2});
        if (c.num_arrows() - c.num_objects() > max_reduced) continue;
        if (monomial) return c;
        auto [p, pinv] = random_basis_change<K>(rng, c.quiver);
        return change_basis(c, p, pinv);
    }
}

/**
 * Twists `c` by ξ (a degree-1 endomorphism per object): d'f = df + ξ_y f - (-1)^{|f|} f ξ_x
 * and h_x = dξ_x + ξ_x². Any ξ works; the result is curved unless ξ happens to be MC.
 */
template <Field K>
Category<K> twist_category(const Category<K>& c, const std::vector<Vec<K>>& xi) {
    Category<K> out = c;
    for (std::size_t a = 0; a < c.num_arrows(); ++a) {
        const Arrow& ar = c.quiver.arrow(a);
        Vec<K> f = Vec<K>::unit(a);
        out.differential[a] += c.compose(xi[ar.tgt], f);
        out.differential[a].axpy(-sign<K>(ar.degree), c.compose(f, xi[ar.src]));
    }
    out.curvature.assign(c.num_objects(), Vec<K>{});
    for (std::size_t x = 0; x < c.num_objects(); ++x)
        out.curvature[x] = c.d(xi[x]) + c.compose(xi[x], xi[x]);
    return out;
}

/// Random curved category: a monomial random category with a degree-1 loop, twisted
/// by a random combination of its degree-1 non-unit endomorphisms.
template <Field K>
Category<K> random_curved_category(Rng& rng, std::size_t max_reduced = 4) {
    for (;;) {
        auto c = random_dg_category<K>(rng, max_reduced, true, 1);
        std::vector<Vec<K>> xi(c.num_objects());
        bool any = false;
        for (std::size_t x = 0; x < c.num_objects(); ++x)
            for (auto a : c.quiver.slot(x, x, 1)) {
                xi[x].add(a, random_scalar<K>(rng));
                any = any || !xi[x].is_zero();
            }
        if (!any) continue;
        auto t = twist_category(c, xi);
        if (t.is_curved()) return t;
    }
}

}  // namespace kdual
