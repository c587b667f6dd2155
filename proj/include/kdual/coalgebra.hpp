#pragma once

/**
 * @file coalgebra.hpp
 * @brief Pointed curved coalgebras with split coradical, curved morphisms,
 * tensor products and cofree (tensor) coalgebras.
 *
 * A pointed curved coalgebra is stored as C = k[Ob] ⊕ C̄. The reduced part
 * C̄ is a graded quiver whose arrows are the basis; an element c of C̄(x, y)
 * has full comultiplication
 *
 *     Δc = y ⊗ c + c ⊗ x + Δ̄c,     Δ̄c = Σ c' ⊗ c''
 *
 * with c'' in C̄(x, m) and c' in C̄(m, y), matching functional order. The
 * differential maps C̄ to C̄ and kills the grouplikes. The curvature is the
 * functional h: C̄ -> k of degree 2 (so supported on degree -2 endomorphism
 * elements), read as h(c)·x in C₀. Identities:
 *
 *     d²c = Σ c'·h(c'') - h(c')·c''
 *     h∘d = 0
 *     Δ̄d = (d⊗1 + 1⊗d)Δ̄ with the Koszul sign (-1)^{|c'|} on 1⊗d
 *     Δ̄ coassociative.
 */

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kdual/quiver.hpp"
#include "kdual/words.hpp"

namespace kdual {

/// Element of C̄ ⊗ C̄ in basis pairs (left, right).
template <Field K>
using Tensor2 = std::map<std::pair<std::size_t, std::size_t>, K>;

template <Field K>
void add_term(Tensor2<K>& t, std::size_t l, std::size_t r, const K& k) {
    if (k.is_zero()) return;
    auto [it, inserted] = t.try_emplace({l, r}, k);
    if (!inserted) {
        it->second += k;
        if (it->second.is_zero()) t.erase(it);
    }
}

template <Field K>
struct PointedCoalgebra {
    /// The formal final object *; all other fields are ignored.
    bool final = false;
    GradedQuiver reduced;
    std::vector<Tensor2<K>> comult;
    std::vector<Vec<K>> differential;
    std::vector<K> curvature;

    std::size_t num_objects() const { return reduced.num_objects(); }
    std::size_t dim() const { return reduced.num_arrows(); }
    bool is_zero() const { return !final && reduced.num_objects() == 0; }
    bool is_curved() const {
        for (auto& h : curvature)
            if (!h.is_zero()) return true;
        return false;
    }
    K h(std::size_t c) const { return curvature.empty() ? K(0) : curvature.at(c); }
    int deg(std::size_t c) const { return reduced.arrow(c).degree; }

    Vec<K> d(const Vec<K>& v) const {
        Vec<K> out;
        for (auto& [i, a] : v) out.axpy(a, differential.at(i));
        return out;
    }
    K h(const Vec<K>& v) const {
        K s(0);
        for (auto& [i, a] : v) s += a * h(i);
        return s;
    }
    Tensor2<K> delta(const Vec<K>& v) const {
        Tensor2<K> out;
        for (auto& [i, a] : v)
            for (auto& [lr, k] : comult.at(i)) add_term(out, lr.first, lr.second, a * k);
        return out;
    }
    std::string label(std::size_t c) const { return reduced.label(c); }
};

/// Shell with no comultiplication, differential or curvature on the given quiver.
template <Field K>
PointedCoalgebra<K> make_coalgebra(GradedQuiver q) {
    PointedCoalgebra<K> c;
    c.comult.assign(q.num_arrows(), {});
    c.differential.assign(q.num_arrows(), {});
    c.curvature.assign(q.num_arrows(), K(0));
    c.reduced = std::move(q);
    return c;
}

/// 𝐤: one grouplike and nothing else.
template <Field K>
PointedCoalgebra<K> ground_coalgebra(const std::string& object = "*") {
    return make_coalgebra<K>(GradedQuiver({object}));
}

template <Field K>
PointedCoalgebra<K> zero_coalgebra() {
    return make_coalgebra<K>(GradedQuiver{});
}

template <Field K>
PointedCoalgebra<K> final_coalgebra() {
    PointedCoalgebra<K> c;
    c.final = true;
    return c;
}

/// One grouplike and primitives of the given degrees, with optional curvature values.
template <Field K>
PointedCoalgebra<K> primitive_coalgebra(const std::vector<int>& degrees, const std::vector<K>& curvature = {},
                                        const std::string& prefix = "w") {
    GradedQuiver q({"o"});
    for (std::size_t i = 0; i < degrees.size(); ++i)
        q.add_arrow(degrees.size() == 1 ? prefix : prefix + std::to_string(i), 0, 0, degrees[i]);
    auto c = make_coalgebra<K>(std::move(q));
    for (std::size_t i = 0; i < curvature.size(); ++i) c.curvature[i] = curvature[i];
    return c;
}

namespace detail {

template <Field K>
using Tensor3 = std::map<std::tuple<std::size_t, std::size_t, std::size_t>, K>;

template <Field K>
void add3(Tensor3<K>& t, std::size_t a, std::size_t b, std::size_t c, const K& k) {
    if (k.is_zero()) return;
    auto [it, inserted] = t.try_emplace({a, b, c}, k);
    if (!inserted) {
        it->second += k;
        if (it->second.is_zero()) t.erase(it);
    }
}

}  // namespace detail

/// Checks every defining identity; structural problems are reported first.
template <Field K>
Report validate_coalgebra(const PointedCoalgebra<K>& c) {
    if (c.final) return Report::pass();
    const GradedQuiver& q = c.reduced;
    const std::size_t n = q.num_arrows();
    if (c.comult.size() != n || c.differential.size() != n || (!c.curvature.empty() && c.curvature.size() != n))
        return Report::fail("coalgebra tables have the wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        const Arrow& a = q.arrow(i);
        for (auto& [lr, k] : c.comult[i]) {
            const Arrow &l = q.arrow(lr.first), &r = q.arrow(lr.second);
            if (r.src != a.src || l.tgt != a.tgt || l.src != r.tgt)
                return Report::fail("Δ̄(" + a.name + ") has a term " + l.name + "⊗" + r.name +
                                    " outside the cotensor product");
            if (l.degree + r.degree != a.degree)
                return Report::fail("Δ̄(" + a.name + ") has a term " + l.name + "⊗" + r.name + " of the wrong degree");
        }
        for (auto& [j, k] : c.differential[i]) {
            const Arrow& b = q.arrow(j);
            if (b.src != a.src || b.tgt != a.tgt || b.degree != a.degree + 1)
                return Report::fail("d(" + a.name + ") leaves its slot or has the wrong degree (term " + b.name + ")");
        }
        if (!c.h(i).is_zero() && (a.src != a.tgt || a.degree != -2))
            return Report::fail("curvature is nonzero on '" + a.name +
                                "', which is not a degree -2 endomorphism element");
    }
    // coassociativity of Δ̄
    for (std::size_t i = 0; i < n; ++i) {
        detail::Tensor3<K> left, right;
        for (auto& [lr, k] : c.comult[i]) {
            for (auto& [lr2, k2] : c.comult[lr.first]) detail::add3(left, lr2.first, lr2.second, lr.second, k * k2);
            for (auto& [lr2, k2] : c.comult[lr.second]) detail::add3(right, lr.first, lr2.first, lr2.second, k * k2);
        }
        if (left != right) return Report::fail("Δ̄ is not coassociative on '" + q.label(i) + "'");
    }
    // coderivation
    for (std::size_t i = 0; i < n; ++i) {
        Tensor2<K> lhs = c.delta(c.differential[i]);
        Tensor2<K> rhs;
        for (auto& [lr, k] : c.comult[i]) {
            for (auto& [j, kd] : c.differential[lr.first]) add_term(rhs, j, lr.second, k * kd);
            K s = sign<K>(c.deg(lr.first));
            for (auto& [j, kd] : c.differential[lr.second]) add_term(rhs, lr.first, j, s * k * kd);
        }
        if (lhs != rhs) return Report::fail("d is not a coderivation of Δ̄ on '" + q.label(i) + "'");
    }
    // curvature identities
    for (std::size_t i = 0; i < n; ++i) {
        if (!c.h(c.differential[i]).is_zero()) return Report::fail("h∘d ≠ 0 on '" + q.label(i) + "'");
        Vec<K> lhs = c.d(c.differential[i]);
        Vec<K> rhs;
        for (auto& [lr, k] : c.comult[i]) {
            rhs.add(lr.first, k * c.h(lr.second));
            rhs.add(lr.second, -(k * c.h(lr.first)));
        }
        if (!(lhs == rhs))
            return Report::fail(c.is_curved() ? "d² differs from the curvature term on '" + q.label(i) + "'"
                                              : "d² ≠ 0 on '" + q.label(i) + "'");
    }
    return Report::pass();
}

/// Iterated reduced comultiplication Δ̄^{(k)}(c) into k tensor factors (Δ̄^{(1)} = id).
template <Field K>
WordVec<K> iterated_delta(const PointedCoalgebra<K>& c, std::size_t elem, std::size_t k) {
    WordVec<K> cur;
    add_term(cur, Word{elem}, K(1));
    for (std::size_t step = 1; step < k && !cur.empty(); ++step) {
        WordVec<K> next;
        for (auto& [w, a] : cur)
            for (auto& [lr, b] : c.comult[w.back()]) {
                Word nw(w.begin(), w.end() - 1);
                nw.push_back(lr.first);
                nw.push_back(lr.second);
                add_term(next, nw, a * b);
            }
        cur = std::move(next);
    }
    return cur;
}

/// Coradical filtration level of each basis element: the largest k with Δ̄^{(k)}(c) ≠ 0.
template <Field K>
std::vector<std::size_t> filtration_levels(const PointedCoalgebra<K>& c) {
    std::vector<std::size_t> out(c.dim(), 0);
    for (std::size_t i = 0; i < c.dim(); ++i) {
        std::size_t k = 1;
        while (!iterated_delta(c, i, k + 1).empty()) {
            ++k;
            if (k > c.dim() + 1) throw ValidationError("coalgebra is not conilpotent at '" + c.label(i) + "'");
        }
        out[i] = k;
    }
    return out;
}

/// Largest filtration level (0 when C̄ = 0).
template <Field K>
std::size_t nilpotency_length(const PointedCoalgebra<K>& c) {
    std::size_t m = 0;
    for (auto l : filtration_levels(c)) m = std::max(m, l);
    return m;
}

/**
 * Curved coalgebra morphism (f, a): C -> E. `arrow_map[c]` is f(c) in Ē and
 * `twist[c]` is the scalar a(c) ∈ E₀(f x, f y); it vanishes on grouplikes and
 * unless |c| = -1 and f x = f y.
 *
 *     d f(c) = f(dc) - Σ a(c') f(c'') + Σ (-1)^{|c'|} f(c') a(c'')
 *     h(f(c)) = h(c) + a(dc) + Σ (-1)^{|c'|} a(c') a(c'')
 */
template <Field K>
struct CoalgebraMorphism {
    std::vector<std::size_t> object_map;
    std::vector<Vec<K>> arrow_map;
    std::vector<K> twist;

    Vec<K> apply(const Vec<K>& v) const {
        Vec<K> out;
        for (auto& [i, k] : v) out.axpy(k, arrow_map.at(i));
        return out;
    }
    K a(std::size_t c) const { return twist.empty() ? K(0) : twist.at(c); }
    K a(const Vec<K>& v) const {
        K s(0);
        for (auto& [i, k] : v) s += k * a(i);
        return s;
    }
    bool operator==(const CoalgebraMorphism&) const = default;
};

template <Field K>
CoalgebraMorphism<K> identity_morphism(const PointedCoalgebra<K>& c) {
    CoalgebraMorphism<K> m;
    for (std::size_t x = 0; x < c.num_objects(); ++x) m.object_map.push_back(x);
    for (std::size_t i = 0; i < c.dim(); ++i) m.arrow_map.push_back(Vec<K>::unit(i));
    m.twist.assign(c.dim(), K(0));
    return m;
}

template <Field K>
Report validate_morphism(const CoalgebraMorphism<K>& m, const PointedCoalgebra<K>& c, const PointedCoalgebra<K>& e) {
    if (e.final) return Report::pass();
    if (c.final) return Report::fail("no morphism out of the final object into a non-final coalgebra");
    if (m.object_map.size() != c.num_objects() || m.arrow_map.size() != c.dim() ||
        (!m.twist.empty() && m.twist.size() != c.dim()))
        return Report::fail("morphism tables have the wrong size");
    for (auto o : m.object_map)
        if (o >= e.num_objects()) return Report::fail("object map leaves the target");
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const Arrow& a = c.reduced.arrow(i);
        for (auto& [j, k] : m.arrow_map[i]) {
            const Arrow& b = e.reduced.arrow(j);
            if (b.src != m.object_map[a.src] || b.tgt != m.object_map[a.tgt] || b.degree != a.degree)
                return Report::fail("f(" + a.name + ") leaves its slot (term " + b.name + ")");
        }
        if (!m.a(i).is_zero() && (m.object_map[a.src] != m.object_map[a.tgt] || a.degree != -1))
            return Report::fail("a is nonzero on '" + a.name + "', which has degree ≠ -1 or is not sent to an endomorphism");
    }
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const std::string& name = c.reduced.arrow(i).name;
        // comultiplicativity: Δ̄_E f = (f⊗f) Δ̄_C
        Tensor2<K> lhs = e.delta(m.arrow_map[i]), rhs;
        for (auto& [lr, k] : c.comult[i])
            for (auto& [p, kp] : m.arrow_map[lr.first])
                for (auto& [r, kr] : m.arrow_map[lr.second]) add_term(rhs, p, r, k * kp * kr);
        if (lhs != rhs) return Report::fail("f does not commute with Δ̄ on '" + name + "'");

        Vec<K> dl = e.d(m.arrow_map[i]);
        Vec<K> dr = m.apply(c.differential[i]);
        for (auto& [lr, k] : c.comult[i]) {
            dr.axpy(-(k * m.a(lr.first)), m.arrow_map[lr.second]);
            dr.axpy(sign<K>(c.deg(lr.first)) * k * m.a(lr.second), m.arrow_map[lr.first]);
        }
        if (!(dl == dr)) return Report::fail("f does not intertwine the differentials on '" + name + "'");

        K hl = e.h(m.arrow_map[i]);
        K hr = c.h(i) + m.a(c.differential[i]);
        for (auto& [lr, k] : c.comult[i]) hr += sign<K>(c.deg(lr.first)) * k * m.a(lr.first) * m.a(lr.second);
        if (!(hl == hr)) return Report::fail("curvature compatibility fails on '" + name + "'");
    }
    return Report::pass();
}

/// (g, b) ∘ (f, a) = (g∘f, b∘f + a).
template <Field K>
CoalgebraMorphism<K> compose_morphisms(const CoalgebraMorphism<K>& g, const CoalgebraMorphism<K>& f) {
    if (f.arrow_map.size() != f.twist.size() && !f.twist.empty())
        throw ValidationError("malformed morphism");
    CoalgebraMorphism<K> out;
    for (auto o : f.object_map) {
        if (o >= g.object_map.size()) throw ValidationError("composed morphisms do not share a boundary");
        out.object_map.push_back(g.object_map[o]);
    }
    for (std::size_t i = 0; i < f.arrow_map.size(); ++i) {
        out.arrow_map.push_back(g.apply(f.arrow_map[i]));
        out.twist.push_back(g.a(f.arrow_map[i]) + f.a(i));
    }
    return out;
}

/**
 * C ⊗ E with Δ(c⊗e) = Σ (-1)^{|c₂||e₁|} (c₁⊗e₁) ⊗ (c₂⊗e₂), d(c⊗e) = dc⊗e + (-1)^{|c|} c⊗de,
 * h = h⊗ε + ε⊗h. The reduced part is C₀⊗Ē ⊕ C̄⊗E₀ ⊕ C̄⊗Ē, listed in that order.
 * * absorbs.
 */
template <Field K>
PointedCoalgebra<K> tensor_coalgebras(const PointedCoalgebra<K>& c, const PointedCoalgebra<K>& e) {
    if (c.final || e.final) return final_coalgebra<K>();
    const GradedQuiver &qc = c.reduced, &qe = e.reduced;
    const std::size_t nx = qc.num_objects(), ny = qe.num_objects();
    const std::size_t nc = qc.num_arrows(), ne = qe.num_arrows();

    // Full basis: index < nx/ny is a grouplike, otherwise reduced element (index - n_objects).
    struct Full {
        std::size_t src, tgt;
        int degree;
        bool grouplike;
        std::string name;
    };
    auto full_basis = [](const GradedQuiver& q) {
        std::vector<Full> b;
        for (std::size_t x = 0; x < q.num_objects(); ++x) b.push_back({x, x, 0, true, q.object_name(x)});
        for (auto& a : q.arrows()) b.push_back({a.src, a.tgt, a.degree, false, a.name});
        return b;
    };
    auto fc = full_basis(qc), fe = full_basis(qe);
    auto full_delta = [](const PointedCoalgebra<K>& co, const std::vector<Full>& fb, std::size_t i) {
        Tensor2<K> t;
        const std::size_t no = co.num_objects();
        if (fb[i].grouplike) {
            add_term(t, i, i, K(1));
            return t;
        }
        add_term(t, fb[i].tgt, i, K(1));
        add_term(t, i, fb[i].src, K(1));
        for (auto& [lr, k] : co.comult[i - no]) add_term(t, lr.first + no, lr.second + no, k);
        return t;
    };

    GradedQuiver q;
    for (auto& x : qc.objects())
        for (auto& y : qe.objects()) q.add_object(pair_name(x, y));
    // map (full c index, full e index) -> reduced index of the tensor, for non-grouplike pairs
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> idx;
    auto add = [&](std::size_t i, std::size_t j) {
        idx[{i, j}] = q.add_arrow(pair_name(fc[i].name, fe[j].name), lex_index(fc[i].src, fe[j].src, ny),
                                  lex_index(fc[i].tgt, fe[j].tgt, ny), fc[i].degree + fe[j].degree);
    };
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t j = ny; j < ny + ne; ++j) add(x, j);
    for (std::size_t i = nx; i < nx + nc; ++i)
        for (std::size_t y = 0; y < ny; ++y) add(i, y);
    for (std::size_t i = nx; i < nx + nc; ++i)
        for (std::size_t j = ny; j < ny + ne; ++j) add(i, j);

    auto out = make_coalgebra<K>(q);
    for (auto& [ij, t] : idx) {
        auto [i, j] = ij;
        Tensor2<K> dc = full_delta(c, fc, i), de = full_delta(e, fe, j);
        for (auto& [c12, kc] : dc)
            for (auto& [e12, ke] : de) {
                auto l = idx.find({c12.first, e12.first});
                auto r = idx.find({c12.second, e12.second});
                if (l == idx.end() || r == idx.end()) continue;  // a grouplike factor: trivial term
                K s = sign<K>(static_cast<long long>(fc[c12.second].degree) * fe[e12.first].degree);
                add_term(out.comult[t], l->second, r->second, s * kc * ke);
            }
        if (!fc[i].grouplike)
            for (auto& [a, k] : c.differential[i - nx]) out.differential[t].add(idx.at({a + nx, j}), k);
        if (!fe[j].grouplike) {
            K s = sign<K>(fc[i].degree);
            for (auto& [b, k] : e.differential[j - ny]) out.differential[t].add(idx.at({i, b + ny}), s * k);
        }
        if (!fc[i].grouplike && fe[j].grouplike) out.curvature[t] = c.h(i - nx);
        if (fc[i].grouplike && !fe[j].grouplike) out.curvature[t] = e.h(j - ny);
    }
    return out;
}

/**
 * Tensor coalgebra T_{Q₀}Q̄ cut at word length `weight_cap`: basis = composable
 * words, Δ̄ = deconcatenation, d = 0, h = 0. Words of length ≤ W form a
 * subcoalgebra, so the truncation is honest.
 */
template <Field K>
PointedCoalgebra<K> cofree_coalgebra(const GradedQuiver& qbar, std::size_t weight_cap,
                                     std::vector<Word>* words_out = nullptr) {
    auto words = composable_words(qbar, weight_cap);
    GradedQuiver q(qbar.objects());
    std::map<Word, std::size_t> index;
    for (auto& w : words)
        index[w] = q.add_arrow("[" + word_name(qbar, w, "|") + "]", word_src(qbar, w), word_tgt(qbar, w),
                               word_degree(qbar, w));
    auto out = make_coalgebra<K>(std::move(q));
    for (auto& w : words)
        for (std::size_t k = 1; k < w.size(); ++k) {
            Word l(w.begin(), w.begin() + k), r(w.begin() + k, w.end());
            add_term(out.comult[index[w]], index.at(l), index.at(r), K(1));
        }
    if (words_out) *words_out = words;
    return out;
}

/// Cofree coalgebra on an augmented quiver: Q̄ = ker ε with the kernel basis returned by validate_augmented.
template <Field K>
PointedCoalgebra<K> cofree_coalgebra(const AugmentedQuiver<K>& a, std::size_t weight_cap) {
    auto rep = validate_augmented(a);
    if (!rep.report.ok) throw ValidationError(rep.report.failure);
    GradedQuiver qbar(a.quiver.objects());
    for (std::size_t k = 0; k < rep.reduced_basis.size(); ++k) {
        const auto& v = rep.reduced_basis[k];
        const Arrow& ar = a.quiver.arrow(v.begin()->first);
        std::string name = v.nnz() == 1 && v.begin()->second == K(1) ? ar.name : "k" + std::to_string(k);
        qbar.add_arrow(name, ar.src, ar.tgt, ar.degree);
    }
    return cofree_coalgebra<K>(qbar, weight_cap);
}

/**
 * Transports a coalgebra along a change of basis whose new vectors are each
 * slot-homogeneous (they may be reordered). New element j takes the slot of
 * p[j]; it keeps the old name when p[j] is an old basis element.
 */
template <Field K>
PointedCoalgebra<K> change_basis(const PointedCoalgebra<K>& c, const std::vector<Vec<K>>& p,
                                 const std::vector<Vec<K>>& p_inv) {
    if (c.final) return c;
    auto to_new = [&](const Vec<K>& v) {
        Vec<K> r;
        for (auto& [i, k] : v) r.axpy(k, p_inv.at(i));
        return r;
    };
    GradedQuiver q(c.reduced.objects());
    for (std::size_t j = 0; j < c.dim(); ++j) {
        if (p[j].is_zero()) throw ValidationError("change of basis has a zero vector");
        const Arrow& lead = c.reduced.arrow(p[j].begin()->first);
        for (auto& [i, k] : p[j]) {
            const Arrow& a = c.reduced.arrow(i);
            if (a.src != lead.src || a.tgt != lead.tgt || a.degree != lead.degree)
                throw ValidationError("change of basis mixes slots");
        }
        bool plain = p[j].nnz() == 1 && p[j].begin()->second == K(1);
        q.add_arrow(plain ? lead.name : "[" + p[j].format([&](std::size_t i) { return c.label(i); }) + "]", lead.src,
                    lead.tgt, lead.degree);
    }
    PointedCoalgebra<K> out = c;
    out.reduced = std::move(q);
    for (std::size_t j = 0; j < c.dim(); ++j) {
        out.differential[j] = to_new(c.d(p[j]));
        out.curvature[j] = c.h(p[j]);
        Tensor2<K> t;
        for (auto& [lr, k] : c.delta(p[j]))
            for (auto& [l, kl] : p_inv[lr.first])
                for (auto& [r, kr] : p_inv[lr.second]) add_term(t, l, r, k * kl * kr);
        out.comult[j] = std::move(t);
    }
    return out;
}

/// Basis of C̄ adapted to the coradical filtration, with the level of each new basis vector.
template <Field K>
struct AdaptedBasis {
    std::vector<Vec<K>> p;      // new basis vectors in old coordinates
    std::vector<Vec<K>> p_inv;  // old basis vectors in new coordinates
    std::vector<std::size_t> level;
};

template <Field K>
AdaptedBasis<K> filtration_adapted_basis(const PointedCoalgebra<K>& c) {
    const std::size_t n = c.dim();
    AdaptedBasis<K> out;
    std::vector<std::size_t> levels;
    for (std::size_t k = 1; out.p.size() < n; ++k) {
        if (k > n + 1) throw ValidationError("coalgebra is not conilpotent");
        // matrix of Δ̄^{(k+1)}: columns are basis elements, rows are words
        std::map<Word, std::size_t> rows;
        std::vector<Vec<K>> cols;
        for (std::size_t i = 0; i < n; ++i) {
            Vec<K> col;
            for (auto& [w, a] : iterated_delta(c, i, k + 1)) {
                auto it = rows.try_emplace(w, rows.size()).first;
                col.add(it->second, a);
            }
            cols.push_back(std::move(col));
        }
        auto ker = kernel_basis(SparseMatrix<K>::from_columns(rows.size(), cols));
        for (auto& v : ker) {
            auto trial = out.p;
            trial.push_back(v);
            if (rank(SparseMatrix<K>::from_columns(n, trial)) == trial.size()) {
                out.p.push_back(v);
                out.level.push_back(k);
            }
        }
    }
    auto m = SparseMatrix<K>::from_columns(n, out.p);
    for (std::size_t i = 0; i < n; ++i) out.p_inv.push_back(*solve(m, Vec<K>::unit(i)));
    return out;
}

}  // namespace kdual
