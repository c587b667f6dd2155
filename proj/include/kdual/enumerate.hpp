#pragma once

/**
 * @file enumerate.hpp
 * @brief Exhaustive enumeration over finite fields: vectors of a subspace and
 * curved coalgebra morphisms.
 */

#include <functional>
#include <numeric>

#include "kdual/coalgebra.hpp"

namespace kdual {

/// Calls `visit` with every linear combination of `basis` (q^{|basis|} calls).
template <FiniteField K>
void for_each_combination(const std::vector<Vec<K>>& basis, const Vec<K>& offset,
                          const std::function<void(const Vec<K>&)>& visit) {
    const auto elems = K::elements();
    std::vector<std::size_t> digit(basis.size(), 0);
    for (;;) {
        Vec<K> v = offset;
        for (std::size_t i = 0; i < basis.size(); ++i) v.axpy(elems[digit[i]], basis[i]);
        visit(v);
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == elems.size()) digit[i++] = 0;
        if (i == digit.size()) return;
    }
}

struct MorphismEnumOptions {
    /// Only maps with a = 0.
    bool strict = false;
    /// Ignore d and h: count maps of graded coalgebras.
    bool graded_only = false;
    std::size_t object_cap = 1u << 16;
    std::size_t result_cap = 1u << 22;
};

/**
 * All curved coalgebra morphisms C -> E over a finite field. C is first moved
 * to a filtration-adapted basis so that, element by element, comultiplicativity
 * is an affine condition on f(c) whose solutions are enumerated directly; d and
 * h conditions are checked as soon as every element they involve is assigned.
 */
template <FiniteField K>
std::vector<CoalgebraMorphism<K>> enumerate_morphisms(const PointedCoalgebra<K>& c0, const PointedCoalgebra<K>& e,
                                                      const MorphismEnumOptions& opt = {}) {
    std::vector<CoalgebraMorphism<K>> out;
    if (e.final) {
        out.push_back({});
        return out;
    }
    if (c0.final) return out;
    auto ab = filtration_adapted_basis(c0);
    PointedCoalgebra<K> c = change_basis(c0, ab.p, ab.p_inv);
    const std::size_t n = c.dim();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ab.level[a] < ab.level[b]; });
    std::vector<std::size_t> pos(n);
    for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;

    // conditions on element i (d and h) become checkable at step ready[i]
    std::vector<std::vector<std::size_t>> checks_at(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = pos[i];
        for (auto& [lr, k] : c.comult[i]) r = std::max({r, pos[lr.first], pos[lr.second]});
        for (auto& [j, k] : c.differential[i]) r = std::max(r, pos[j]);
        checks_at[r].push_back(i);
    }

    // rows of Δ̄_E on a slot: index pairs of E
    auto delta_matrix = [&](const std::vector<std::size_t>& slot, std::map<std::pair<std::size_t, std::size_t>, std::size_t>& rows) {
        std::vector<Vec<K>> cols;
        for (auto s : slot) {
            Vec<K> col;
            for (auto& [lr, k] : e.comult[s]) {
                auto it = rows.try_emplace(lr, rows.size()).first;
                col.add(it->second, k);
            }
            cols.push_back(std::move(col));
        }
        return cols;
    };

    ObjectMaps maps(c.num_objects(), e.num_objects(), opt.object_cap);
    const auto elems = K::elements();
    for (std::size_t om = 0; om < maps.size(); ++om) {
        CoalgebraMorphism<K> m;
        m.object_map = maps[om];
        m.arrow_map.assign(n, {});
        m.twist.assign(n, K(0));

        auto condition_holds = [&](std::size_t i) {
            if (opt.graded_only) return true;
            Vec<K> dl = e.d(m.arrow_map[i]);
            Vec<K> dr = m.apply(c.differential[i]);
            for (auto& [lr, k] : c.comult[i]) {
                dr.axpy(-(k * m.a(lr.first)), m.arrow_map[lr.second]);
                dr.axpy(sign<K>(c.deg(lr.first)) * k * m.a(lr.second), m.arrow_map[lr.first]);
            }
            if (!(dl == dr)) return false;
            K hl = e.h(m.arrow_map[i]);
            K hr = c.h(i) + m.a(c.differential[i]);
            for (auto& [lr, k] : c.comult[i]) hr += sign<K>(c.deg(lr.first)) * k * m.a(lr.first) * m.a(lr.second);
            return hl == hr;
        };

        std::function<void(std::size_t)> step = [&](std::size_t k) {
            if (k == n) {
                if (out.size() >= opt.result_cap) throw CapExceeded("morphism enumeration exceeds its cap");
                out.push_back(m);
                return;
            }
            const std::size_t i = order[k];
            const Arrow& ar = c.reduced.arrow(i);
            const auto& slot = e.reduced.slot(m.object_map[ar.src], m.object_map[ar.tgt], ar.degree);
            // affine solution set of Δ̄_E x = (f⊗f)Δ̄c inside the slot
            std::map<std::pair<std::size_t, std::size_t>, std::size_t> rows;
            auto cols = delta_matrix(slot, rows);
            Tensor2<K> target;
            for (auto& [lr, kk] : c.comult[i])
                for (auto& [p, kp] : m.arrow_map[lr.first])
                    for (auto& [r, kr] : m.arrow_map[lr.second]) add_term(target, p, r, kk * kp * kr);
            Vec<K> rhs;
            bool reachable = true;
            for (auto& [lr, kk] : target) {
                auto it = rows.find(lr);
                if (it == rows.end()) {
                    reachable = false;
                    break;
                }
                rhs.add(it->second, kk);
            }
            if (!reachable) return;
            auto mat = SparseMatrix<K>::from_columns(rows.size(), cols);
            auto x0 = solve(mat, rhs);
            if (!x0) return;
            auto ker = kernel_basis(mat);
            auto lift = [&](const Vec<K>& local) {
                Vec<K> v;
                for (auto& [j, a] : local) v.add(slot[j], a);
                return v;
            };
            std::vector<Vec<K>> ker_global;
            for (auto& v : ker) ker_global.push_back(lift(v));
            const bool twistable = !opt.strict && m.object_map[ar.src] == m.object_map[ar.tgt] && ar.degree == -1;
            for_each_combination<K>(ker_global, lift(*x0), [&](const Vec<K>& fx) {
                m.arrow_map[i] = fx;
                for (std::size_t t = 0; t < (twistable ? elems.size() : 1); ++t) {
                    m.twist[i] = twistable ? elems[t] : K(0);
                    bool ok = true;
                    for (auto j : checks_at[k])
                        if (!condition_holds(j)) {
                            ok = false;
                            break;
                        }
                    if (ok) step(k + 1);
                }
            });
            m.arrow_map[i] = {};
            m.twist[i] = K(0);
        };
        step(0);
    }
    // back to the original basis of C: f(e_i) = Σ_j p_inv[i]_j f(p_j)
    for (auto& m : out) {
        CoalgebraMorphism<K> orig;
        orig.object_map = m.object_map;
        for (std::size_t i = 0; i < n; ++i) {
            orig.arrow_map.push_back(m.apply(ab.p_inv[i]));
            orig.twist.push_back(m.a(ab.p_inv[i]));
        }
        m = std::move(orig);
    }
    return out;
}

}  // namespace kdual
