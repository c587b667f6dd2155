#pragma once

/**
 * @file random_coalgebra.hpp
 * @brief Random pointed curved coalgebras, built as linear duals of random
 * augmented (possibly curved) categories.
 */

#include "kdual/coalgebra.hpp"
#include "kdual/random_category.hpp"

namespace kdual {

/**
 * Linear dual of an augmented category whose units are the basis arrows
 * 0..n-1 (as produced by free_category). The dual basis e* of a non-unit
 * arrow e: x -> y lies in C̄(x, y) in degree -|e|, and
 *
 *     Δ̄(e_k*) = Σ μ_{ij}^k (-1)^{|e_i||e_j|} e_i* ⊗ e_j*    (e_i∘e_j = Σ μ_{ij}^k e_k)
 *     d(e_k*) = -Σ (-1)^{|e_i|} [e_k : d e_i] e_i*
 *     h(e_k*) = [e_k : h_x].
 */
template <Field K>
PointedCoalgebra<K> dual_coalgebra(const Category<K>& d) {
    const std::size_t n = d.num_objects();
    for (std::size_t x = 0; x < n; ++x)
        if (!(d.unit(x) == Vec<K>::unit(x))) throw ValidationError("dual_coalgebra expects units as the first arrows");
    GradedQuiver q(d.quiver.objects());
    for (std::size_t a = n; a < d.num_arrows(); ++a) {
        const Arrow& ar = d.quiver.arrow(a);
        q.add_arrow(ar.name + "*", ar.src, ar.tgt, -ar.degree);
    }
    auto c = make_coalgebra<K>(std::move(q));
    auto reduced = [&](std::size_t a) {
        if (a < n) throw ValidationError("dual_coalgebra: category is not augmented");
        return a - n;
    };
    for (auto& [gf, v] : d.composition) {
        if (gf.first < n || gf.second < n) continue;
        K s = sign<K>(static_cast<long long>(deg(d, gf.first)) * deg(d, gf.second));
        for (auto& [k, mu] : v) add_term(c.comult[reduced(k)], gf.first - n, gf.second - n, s * mu);
    }
    for (std::size_t i = n; i < d.num_arrows(); ++i)
        for (auto& [k, coef] : d.differential[i])
            c.differential[reduced(k)].add(i - n, -sign<K>(deg(d, i)) * coef);
    for (std::size_t x = 0; x < d.curvature.size(); ++x)
        for (auto& [k, coef] : d.curvature[x]) c.curvature[reduced(k)] += coef;
    return c;
}

/// Random coalgebra of reduced dimension ≤ max_dim; curved when requested.
template <Field K>
PointedCoalgebra<K> random_coalgebra(Rng& rng, std::size_t max_dim = 4, bool curved = false,
                                     bool change_of_basis = true) {
    auto cat = curved ? random_curved_category<K>(rng, max_dim) : random_dg_category<K>(rng, max_dim, true);
    auto c = dual_coalgebra(cat);
    if (!change_of_basis) return c;
    auto [p, pinv] = random_basis_change<K>(rng, c.reduced);
    return change_basis(c, p, pinv);
}

}  // namespace kdual
