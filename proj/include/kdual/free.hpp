#pragma once

/**
 * @file free.hpp
 * @brief Free dg categories on a quiver of generators, truncated by path length.
 */

#include <optional>

#include "kdual/category.hpp"
#include "kdual/words.hpp"

namespace kdual {

/**
 * Generators with a differential. `d[a]` is a combination of nonempty words
 * in the generators of degree |a| + 1; units never appear in d.
 */
template <Field K>
struct GeneratorQuiver {
    GradedQuiver generators;
    std::vector<WordVec<K>> d;
};

/// d extended to words as a derivation (Koszul sign from the letters to the left).
template <Field K>
WordVec<K> derivation_on_word(const GradedQuiver& q, const std::vector<WordVec<K>>& d, const Word& w) {
    WordVec<K> out;
    int left = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        K s = sign<K>(left);
        for (auto& [dw, c] : d[w[i]]) {
            Word nw(w.begin(), w.begin() + i);
            nw.insert(nw.end(), dw.begin(), dw.end());
            nw.insert(nw.end(), w.begin() + i + 1, w.end());
            add_term(out, nw, s * c);
        }
        left += q.arrow(w[i]).degree;
    }
    return out;
}

struct FreeCategoryInfo {
    std::size_t length_cap = 0;
    bool exact = false;  // no composable word was cut off
    std::vector<Word> words;  // arrow i >= num_objects is words[i - num_objects]
};

/**
 * The free dg category on `v`, modulo words longer than `length_cap`.
 * Words longer than the cap form a dg ideal because d never shortens a word,
 * so the quotient is an honest dg category; `info.exact` records whether
 * anything was cut. Without a cap the quiver must be acyclic.
 */
template <Field K>
Category<K> free_category(const GeneratorQuiver<K>& v, std::optional<std::size_t> length_cap = std::nullopt,
                          FreeCategoryInfo* info = nullptr) {
    const GradedQuiver& g = v.generators;
    if (v.d.size() != g.num_arrows()) throw ValidationError("free category: differential table has the wrong size");
    for (std::size_t a = 0; a < g.num_arrows(); ++a)
        for (auto& [w, c] : v.d[a]) {
            if (w.empty()) throw ValidationError("free category: d(" + g.label(a) + ") has a unit component");
            if (!composable(g, w) || word_src(g, w) != g.arrow(a).src || word_tgt(g, w) != g.arrow(a).tgt ||
                word_degree(g, w) != g.arrow(a).degree + 1)
                throw ValidationError("free category: d(" + g.label(a) + ") leaves its slot");
        }
    auto longest = longest_word(g);
    std::size_t cap;
    if (length_cap) {
        cap = *length_cap;
    } else {
        if (!longest)
            throw CapExceeded("free category: paths of bounded degree are unbounded in length; a length cap is required");
        cap = *longest;
    }
    auto words = composable_words(g, cap);

    GradedQuiver q(g.objects());
    for (std::size_t x = 0; x < g.num_objects(); ++x) q.add_arrow("1_" + g.object_name(x), x, x, 0);
    std::map<Word, std::size_t> index;
    for (auto& w : words) index[w] = q.add_arrow(word_name(g, w), word_src(g, w), word_tgt(g, w), word_degree(g, w));

    auto out = make_category<K>(std::move(q));
    auto to_vec = [&](const WordVec<K>& wv) {
        Vec<K> r;
        for (auto& [w, c] : wv) {
            auto it = index.find(w);
            if (it != index.end()) r.add(it->second, c);
        }
        return r;
    };
    const std::size_t n = g.num_objects();
    std::vector<Vec<K>> units;
    for (std::size_t x = 0; x < n; ++x) {
        units.push_back(Vec<K>::unit(x));
        out.add_composition(x, x, Vec<K>::unit(x));
    }
    for (auto& w : words) {
        std::size_t i = index[w];
        out.differential[i] = to_vec(derivation_on_word(g, v.d, w));
        out.add_composition(word_tgt(g, w), i, Vec<K>::unit(i));
        out.add_composition(i, word_src(g, w), Vec<K>::unit(i));
    }
    for (auto& w2 : words)
        for (auto& w1 : words) {
            if (word_src(g, w2) != word_tgt(g, w1) || w1.size() + w2.size() > cap) continue;
            auto it = index.find(concat(w2, w1));
            if (it != index.end()) out.add_composition(index[w2], index[w1], Vec<K>::unit(it->second));
        }
    out.units = std::move(units);
    if (info) {
        info->length_cap = cap;
        info->exact = longest && *longest <= cap;
        info->words = words;
    }
    return out;
}

/// The path category of the quiver x --a--> y (degree 0).
template <Field K>
Category<K> a2_category() {
    GeneratorQuiver<K> v;
    v.generators = GradedQuiver({"x", "y"});
    v.generators.add_arrow("a", 0, 1, 0);
    v.d.resize(1);
    return free_category(v);
}

/// k[x]/x² on one object, with x in the given degree and d = 0.
template <Field K>
Category<K> dual_numbers(int degree = 0) {
    GeneratorQuiver<K> v;
    v.generators = GradedQuiver({"*"});
    v.generators.add_arrow("x", 0, 0, degree);
    v.d.resize(1);
    return free_category(v, std::size_t{1});
}

}  // namespace kdual
