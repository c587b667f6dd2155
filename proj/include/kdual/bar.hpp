#pragma once

/**
 * @file bar.hpp
 * @brief The bar construction B D = T_{D₀}(D̄[1]) of a dg category, with an
 * explicit splitting D = D₀ ⊕ D̄.
 *
 * A splitting picks, for each object x, a pivot arrow p in End(x)₀ with
 * nonzero unit coefficient and scalars λ_j for the other degree-0
 * endomorphism arrows j of x. The complement D̄ has basis ē_j = e_j + λ_j·1_x
 * for those j, and e_j for every arrow outside End(x)₀.
 *
 * Bar words [sa_n|...|sa_1] (a_1 applied first) have degree Σ(|a_i| - 1);
 * Δ̄ is deconcatenation. The differential is the coderivation with weight-one
 * components
 *
 *     [sa]    ↦ -[s π(da)]
 *     [sa|sb] ↦ (-1)^{|a|} [s π(ab)]
 *
 * and the curvature is h[sa] = -ε(da), h[sa|sb] = (-1)^{|a|} ε(ab).
 */

#include <optional>

#include "kdual/category.hpp"
#include "kdual/coalgebra.hpp"

namespace kdual {

template <Field K>
struct Splitting {
    std::vector<std::size_t> pivot;           // per object, an arrow index
    std::map<std::size_t, K> lambda;          // per non-pivot degree-0 endo arrow; absent means 0
};

/// Pivot = first arrow of End(x)₀ with nonzero unit coefficient; all λ = 0.
template <Field K>
Splitting<K> default_splitting(const Category<K>& d) {
    Splitting<K> s;
    for (std::size_t x = 0; x < d.num_objects(); ++x) {
        const Vec<K>& u = d.unit(x);
        if (u.is_zero()) throw ValidationError("bar construction needs a nonzero unit at '" + d.quiver.object_name(x) + "'");
        s.pivot.push_back(u.begin()->first);
    }
    return s;
}

template <Field K>
class BarConstruction {
public:
    BarConstruction(Category<K> d, std::optional<Splitting<K>> splitting = std::nullopt) : d_(std::move(d)) {
        if (d_.zero) {
            final_ = true;
            return;
        }
        if (d_.is_curved()) throw ValidationError("bar construction is defined for dg categories, not curved ones");
        if (!d_.units) throw ValidationError("bar construction needs a unital category");
        s_ = splitting ? *splitting : default_splitting(d_);
        const std::size_t n = d_.num_objects();
        if (s_.pivot.size() != n) throw ValidationError("splitting: one pivot per object is required");
        is_pivot_.assign(d_.num_arrows(), false);
        for (std::size_t x = 0; x < n; ++x) {
            std::size_t p = s_.pivot[x];
            const Arrow& a = d_.quiver.arrow(p);
            if (a.src != x || a.tgt != x || a.degree != 0 || d_.unit(x).get(p).is_zero())
                throw ValidationError("splitting not complementary to the unit at '" + d_.quiver.object_name(x) + "'");
            is_pivot_[p] = true;
        }
        for (auto& [j, l] : s_.lambda) {
            const Arrow& a = d_.quiver.arrow(j);
            if (is_pivot_[j] || a.src != a.tgt || a.degree != 0)
                throw ValidationError("splitting: λ given for an arrow that is not a non-pivot degree-0 endomorphism");
        }
        letters_ = GradedQuiver(d_.quiver.objects());
        for (std::size_t a = 0; a < d_.num_arrows(); ++a) {
            if (is_pivot_[a]) continue;
            const Arrow& ar = d_.quiver.arrow(a);
            letter_index_[a] = letters_.add_arrow("s" + ar.name, ar.src, ar.tgt, ar.degree - 1);
            letter_arrow_.push_back(a);
        }
    }

    bool is_final() const { return final_; }
    bool is_zero() const { return !final_ && d_.num_objects() == 0; }
    const Category<K>& category() const { return d_; }
    const Splitting<K>& splitting() const { return s_; }
    /// Quiver of bar letters s ē_j (degree |e_j| - 1).
    const GradedQuiver& letters() const { return letters_; }
    /// The D-arrow underlying letter i.
    std::size_t letter_arrow(std::size_t i) const { return letter_arrow_.at(i); }

    /// The complement vector ē of letter i, in D coordinates.
    Vec<K> complement_vector(std::size_t letter) const {
        std::size_t j = letter_arrow_.at(letter);
        Vec<K> v = Vec<K>::unit(j);
        auto it = s_.lambda.find(j);
        if (it != s_.lambda.end()) v.axpy(it->second, d_.unit(d_.quiver.arrow(j).src));
        return v;
    }

    /// v = Σ_x ε_x(v)·1_x + π(v); returns π(v) in letter coordinates and ε per object.
    std::pair<Vec<K>, std::map<std::size_t, K>> split(const Vec<K>& v) const {
        Vec<K> pi;
        std::map<std::size_t, K> eps;
        std::map<std::size_t, Vec<K>> endo0;  // per object, its End(x)₀ component
        for (auto& [i, k] : v) {
            const Arrow& a = d_.quiver.arrow(i);
            if (a.src == a.tgt && a.degree == 0)
                endo0[a.src].add(i, k);
            else
                pi.add(letter_index_.at(i), k);
        }
        for (auto& [x, w] : endo0) {
            const Vec<K>& u = d_.unit(x);
            std::size_t p = s_.pivot[x];
            K beta = w.get(p) / u.get(p);
            K alpha = beta;
            std::map<std::size_t, K> c;
            for (auto a : d_.quiver.slot(x, x, 0)) {
                if (a == p) continue;
                K cj = w.get(a) - beta * u.get(a);
                if (cj.is_zero()) continue;
                pi.add(letter_index_.at(a), cj);
                auto it = s_.lambda.find(a);
                if (it != s_.lambda.end()) alpha -= cj * it->second;
            }
            if (!alpha.is_zero()) eps[x] = alpha;
        }
        return {pi, eps};
    }

    /// True when D̄ is closed under d and composition (then the curvature vanishes).
    bool augmented() const {
        for (std::size_t i = 0; i < letters_.num_arrows(); ++i) {
            if (!split(d_.d(complement_vector(i))).second.empty()) return false;
            for (std::size_t j = 0; j < letters_.num_arrows(); ++j)
                if (letters_.arrow(j).tgt == letters_.arrow(i).src &&
                    !split(d_.compose(complement_vector(i), complement_vector(j))).second.empty())
                    return false;
        }
        return true;
    }

    /// Letter degree |a| - 1 shifted back to the degree of a.
    int arrow_degree(std::size_t letter) const { return letters_.arrow(letter).degree + 1; }

    /// Bar differential of a word, as a combination of words.
    WordVec<K> d_word(const Word& w) const {
        WordVec<K> out;
        int left = 0;  // Σ (|a_j| - 1) over letters left of the block
        for (std::size_t i = 0; i < w.size(); ++i) {
            K s = sign<K>(left);
            // internal: -[s π(d a_i)]
            auto [pi1, e1] = split(d_.d(complement_vector(w[i])));
            for (auto& [l, k] : pi1) add_term(out, replace(w, i, 1, l), -(s * k));
            if (i + 1 < w.size()) {
                // composition of a = w[i] (left) and b = w[i+1]
                auto [pi2, e2] = split(d_.compose(complement_vector(w[i]), complement_vector(w[i + 1])));
                K s2 = s * sign<K>(arrow_degree(w[i]));
                for (auto& [l, k] : pi2) add_term(out, replace(w, i, 2, l), s2 * k);
            }
            left += letters_.arrow(w[i]).degree;
        }
        return out;
    }

    /// Curvature of a word.
    K h_word(const Word& w) const {
        if (w.size() == 1) {
            auto [pi, e] = split(d_.d(complement_vector(w[0])));
            K s(0);
            for (auto& [x, k] : e) s -= k;
            return s;
        }
        if (w.size() == 2) {
            auto [pi, e] = split(d_.compose(complement_vector(w[0]), complement_vector(w[1])));
            K s(0);
            for (auto& [x, k] : e) s += k;
            return sign<K>(arrow_degree(w[0])) * s;
        }
        return K(0);
    }

    /// Longest composable word of letters, or nullopt when unbounded.
    std::optional<std::size_t> longest_word() const { return kdual::longest_word(letters_); }

    struct Materialized {
        PointedCoalgebra<K> coalgebra;
        std::vector<Word> words;  // basis element i of the coalgebra is words[i]
        std::map<Word, std::size_t> index;
        std::size_t weight_cap = 0;
        bool exact = false;  // no word was cut off
    };

    /**
     * Weight ≤ W part. Deconcatenation and d never raise weight, so it is a
     * subcoalgebra and validates on its own.
     */
    Materialized materialize(std::size_t weight_cap) const {
        Materialized m;
        m.weight_cap = weight_cap;
        if (final_) {
            m.coalgebra = final_coalgebra<K>();
            m.exact = true;
            return m;
        }
        m.words = composable_words(letters_, weight_cap);
        GradedQuiver q(letters_.objects());
        for (auto& w : m.words)
            m.index[w] = q.add_arrow("[" + word_name(letters_, w, "|") + "]", word_src(letters_, w),
                                     word_tgt(letters_, w), word_degree(letters_, w));
        m.coalgebra = make_coalgebra<K>(std::move(q));
        for (auto& w : m.words) {
            std::size_t i = m.index[w];
            for (std::size_t k = 1; k < w.size(); ++k)
                add_term(m.coalgebra.comult[i], m.index.at(Word(w.begin(), w.begin() + k)),
                         m.index.at(Word(w.begin() + k, w.end())), K(1));
            for (auto& [dw, c] : d_word(w)) m.coalgebra.differential[i].add(m.index.at(dw), c);
            m.coalgebra.curvature[i] = h_word(w);
        }
        auto lw = longest_word();
        m.exact = lw && *lw <= weight_cap;
        return m;
    }

    /// Counit twisting cochain τ: B_{≤W}D -> D, [sa] ↦ ā, longer words ↦ 0.
    std::vector<Vec<K>> counit_cochain(const Materialized& m) const {
        std::vector<Vec<K>> tau;
        for (auto& w : m.words) tau.push_back(w.size() == 1 ? complement_vector(w[0]) : Vec<K>{});
        return tau;
    }

private:
    static Word replace(const Word& w, std::size_t at, std::size_t len, std::size_t letter) {
        Word out(w.begin(), w.begin() + at);
        out.push_back(letter);
        out.insert(out.end(), w.begin() + at + len, w.end());
        return out;
    }

    Category<K> d_;
    bool final_ = false;
    Splitting<K> s_;
    std::vector<bool> is_pivot_;
    GradedQuiver letters_;
    std::map<std::size_t, std::size_t> letter_index_;
    std::vector<std::size_t> letter_arrow_;
};

}  // namespace kdual
