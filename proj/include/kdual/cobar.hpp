#pragma once

/**
 * @file cobar.hpp
 * @brief The cobar construction Ω C = T_{C₀}(C̄[-1]) of a pointed curved coalgebra.
 *
 * Letters s⁻¹c have degree |c| + 1; words compose by concatenation. On a
 * letter,
 *
 *     d(s⁻¹c) = -s⁻¹(dc) - Σ (-1)^{|c'|} s⁻¹c' s⁻¹c'' - h(c)·1_x,
 *
 * extended as a derivation. The empty word at x is the unit 1_x.
 */

#include <optional>

#include "kdual/category.hpp"
#include "kdual/coalgebra.hpp"
#include "kdual/complex.hpp"

namespace kdual {

/// Combination of words at a fixed hom pair; the empty word is the unit.
template <Field K>
class CobarConstruction {
public:
    explicit CobarConstruction(PointedCoalgebra<K> c) : c_(std::move(c)) {
        if (c_.final) return;
        letters_ = GradedQuiver(c_.reduced.objects());
        for (auto& a : c_.reduced.arrows()) letters_.add_arrow("s-" + a.name, a.src, a.tgt, a.degree + 1);
    }

    bool is_zero_category() const { return c_.final; }
    bool is_empty() const { return !c_.final && c_.num_objects() == 0; }
    const PointedCoalgebra<K>& coalgebra() const { return c_; }
    const GradedQuiver& letters() const { return letters_; }

    WordVec<K> d_letter(std::size_t c) const {
        WordVec<K> out;
        for (auto& [j, k] : c_.differential[c]) add_term(out, Word{j}, -k);
        for (auto& [lr, k] : c_.comult[c]) add_term(out, Word{lr.first, lr.second}, -(sign<K>(c_.deg(lr.first)) * k));
        if (!c_.h(c).is_zero()) add_term(out, Word{}, -c_.h(c));
        return out;
    }

    /// d of a word (symbolic, untruncated).
    WordVec<K> d_word(const Word& w) const {
        WordVec<K> out;
        int left = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            K s = sign<K>(left);
            for (auto& [dw, k] : d_letter(w[i])) {
                Word nw(w.begin(), w.begin() + i);
                nw.insert(nw.end(), dw.begin(), dw.end());
                nw.insert(nw.end(), w.begin() + i + 1, w.end());
                add_term(out, nw, s * k);
            }
            left += letters_.arrow(w[i]).degree;
        }
        return out;
    }

    WordVec<K> d(const WordVec<K>& v) const {
        WordVec<K> out;
        for (auto& [w, k] : v) add_scaled(out, d_word(w), k);
        return out;
    }

    /// Checks d² = 0 exactly on every word of length ≤ max_len (no truncation is involved).
    Report check_d_squared(std::size_t max_len) const {
        if (c_.final) return Report::pass();
        for (auto& w : composable_words(letters_, max_len)) {
            auto dd = d(d_word(w));
            if (!dd.empty()) return Report::fail("d² ≠ 0 on the cobar word " + word_name(letters_, w));
        }
        return Report::pass();
    }

    /**
     * Bound on the length of words whose degree lies in [lo, hi], from interval
     * arithmetic on letter degrees and from the longest composable word.
     * nullopt when words of unbounded length have degree in the window.
     */
    std::optional<std::size_t> length_bound(int lo, int hi) const {
        auto lw = kdual::longest_word(letters_);
        if (lw) return *lw;
        auto sup = letters_.degree_support();
        if (!sup) return 0;
        auto [dmin, dmax] = *sup;
        if (dmin >= 1) return static_cast<std::size_t>(std::max(0, hi) / dmin);
        if (dmax <= -1) return static_cast<std::size_t>(std::max(0, -lo) / -dmax);
        return std::nullopt;
    }

    struct Materialized {
        Category<K> category;
        std::vector<Word> words;  // arrow num_objects + i is words[i]
        std::map<Word, std::size_t> index;
        std::size_t length_cap = 0;
        bool exact = false;  // no word was cut off
        bool honest = true;  // the truncation is a dg category (false only for curved C)
    };

    /**
     * Quotient by words longer than L. For uncurved C, d never shortens words,
     * so this is a dg category. With curvature it is not, which is recorded in
     * `honest`; use check_d_squared and hom_complex for curved inputs.
     */
    Materialized materialize(std::size_t length_cap) const {
        Materialized m;
        m.length_cap = length_cap;
        if (c_.final) {
            m.category = zero_category<K>();
            m.exact = true;
            return m;
        }
        m.honest = !c_.is_curved();
        m.words = composable_words(letters_, length_cap);
        GradedQuiver q(letters_.objects());
        const std::size_t n = q.num_objects();
        for (std::size_t x = 0; x < n; ++x) q.add_arrow("1_" + q.object_name(x), x, x, 0);
        for (auto& w : m.words)
            m.index[w] = q.add_arrow(word_name(letters_, w), word_src(letters_, w), word_tgt(letters_, w),
                                     word_degree(letters_, w));
        m.category = make_category<K>(std::move(q));
        auto& cat = m.category;
        std::vector<Vec<K>> units;
        for (std::size_t x = 0; x < n; ++x) {
            units.push_back(Vec<K>::unit(x));
            cat.add_composition(x, x, Vec<K>::unit(x));
        }
        cat.units = std::move(units);
        for (auto& w : m.words) {
            std::size_t i = m.index[w];
            cat.add_composition(word_tgt(letters_, w), i, Vec<K>::unit(i));
            cat.add_composition(i, word_src(letters_, w), Vec<K>::unit(i));
            cat.differential[i] = to_vec(m, d_word(w), word_src(letters_, w));
        }
        for (auto& w2 : m.words)
            for (auto& w1 : m.words) {
                if (word_src(letters_, w2) != word_tgt(letters_, w1)) continue;
                auto it = m.index.find(concat(w2, w1));
                if (it != m.index.end()) cat.add_composition(m.index[w2], m.index[w1], Vec<K>::unit(it->second));
            }
        auto lw = kdual::longest_word(letters_);
        m.exact = lw && *lw <= length_cap;
        return m;
    }

    /// Words (including the unit when x = y) from x to y of each degree in [lo, hi].
    std::map<int, std::vector<Word>> words_by_degree(std::size_t x, std::size_t y, int lo, int hi,
                                                     std::size_t max_len) const {
        std::map<int, std::vector<Word>> out;
        for (int n = lo; n <= hi; ++n) out[n];
        if (x == y && lo <= 0 && 0 <= hi) out[0].push_back(Word{});
        for (auto& w : composable_words(letters_, max_len)) {
            int dg = word_degree(letters_, w);
            if (word_src(letters_, w) == x && word_tgt(letters_, w) == y && dg >= lo && dg <= hi)
                out[dg].push_back(w);
        }
        return out;
    }

    /**
     * Hom complex ΩC(x, y) on degrees [lo-1, hi+1] (interior-only), exact
     * when every word with degree in that range is enumerated. Throws
     * InexactWindow otherwise. `max_len` overrides the computed bound.
     */
    BoundedComplex<K> hom_complex(std::size_t x, std::size_t y, int lo, int hi,
                                  std::optional<std::size_t> max_len = std::nullopt) const {
        auto bound = length_bound(lo - 1, hi + 1);
        if (!bound) throw InexactWindow("cobar hom complex: words of unbounded length have degree in the window");
        std::size_t len = max_len ? *max_len : *bound;
        if (len < *bound) throw InexactWindow("cobar hom complex: length cap below the exactness bound");
        auto words = words_by_degree(x, y, lo - 1, hi + 1, len);
        BoundedComplex<K> cx;
        cx.lo = lo - 1;
        cx.boundary = Boundary::interior_only;
        for (int n = lo - 1; n <= hi + 1; ++n) {
            std::vector<std::string> names;
            for (auto& w : words[n]) names.push_back(w.empty() ? "1_" + letters_.object_name(x) : word_name(letters_, w));
            cx.bases.push_back(std::move(names));
        }
        for (int n = lo - 1; n <= hi; ++n) {
            std::map<Word, std::size_t> row;
            for (auto& w : words[n + 1]) row.emplace(w, row.size());
            std::vector<Vec<K>> cols;
            for (auto& w : words[n]) {
                Vec<K> col;
                for (auto& [dw, k] : d_word(w)) col.add(row.at(dw), k);
                cols.push_back(std::move(col));
            }
            cx.differential.push_back(SparseMatrix<K>::from_columns(row.size(), std::move(cols)));
        }
        return cx;
    }

    std::map<int, std::size_t> hom_homology(std::size_t x, std::size_t y, int lo, int hi) const {
        if (c_.final) {
            std::map<int, std::size_t> z;
            for (int n = lo; n <= hi; ++n) z[n] = 0;
            return z;
        }
        return homology_dims(hom_complex(x, y, lo, hi));
    }

    /// Word combination at src -> Vec over the materialized basis (dropping cut words).
    Vec<K> to_vec(const Materialized& m, const WordVec<K>& v, std::size_t src) const {
        Vec<K> r;
        for (auto& [w, k] : v) {
            if (w.empty()) {
                r.add(src, k);
                continue;
            }
            auto it = m.index.find(w);
            if (it != m.index.end()) r.add(it->second, k);
        }
        return r;
    }

private:
    PointedCoalgebra<K> c_;
    GradedQuiver letters_;
};

}  // namespace kdual
