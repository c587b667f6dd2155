#pragma once

/**
 * @file words.hpp
 * @brief Composable words in a graded quiver.
 *
 * A word (a_n, ..., a_1) is stored left to right and read functionally:
 * a_1 is applied first, so tgt(a_i) = src(a_{i+1}) and the word runs from
 * src(a_1) to tgt(a_n). The empty word at an object stands for its unit.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kdual/quiver.hpp"

namespace kdual {

using Word = std::vector<std::size_t>;

/// Linear combination of words.
template <Field K>
using WordVec = std::map<Word, K>;

template <Field K>
void add_term(WordVec<K>& v, const Word& w, const K& k) {
    if (k.is_zero()) return;
    auto [it, inserted] = v.try_emplace(w, k);
    if (!inserted) {
        it->second += k;
        if (it->second.is_zero()) v.erase(it);
    }
}

template <Field K>
void add_scaled(WordVec<K>& v, const WordVec<K>& x, const K& k) {
    for (auto& [w, c] : x) add_term(v, w, c * k);
}

inline Word concat(const Word& left, const Word& right) {
    Word w = left;
    w.insert(w.end(), right.begin(), right.end());
    return w;
}

inline int word_degree(const GradedQuiver& q, const Word& w) {
    int d = 0;
    for (auto a : w) d += q.arrow(a).degree;
    return d;
}

/// Source of a nonempty word (source of its rightmost letter).
inline std::size_t word_src(const GradedQuiver& q, const Word& w) { return q.arrow(w.back()).src; }
inline std::size_t word_tgt(const GradedQuiver& q, const Word& w) { return q.arrow(w.front()).tgt; }

inline bool composable(const GradedQuiver& q, const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (q.arrow(w[i + 1]).tgt != q.arrow(w[i]).src) return false;
    return true;
}

inline std::string word_name(const GradedQuiver& q, const Word& w, const std::string& sep = "*") {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += sep;
        s += q.arrow(w[i]).name;
    }
    return s;
}

/// All nonempty composable words of length 1..max_len, ordered by length then lexicographically.
inline std::vector<Word> composable_words(const GradedQuiver& q, std::size_t max_len) {
    std::vector<Word> out;
    std::vector<Word> layer;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) layer.push_back({a});
    for (std::size_t len = 1; len <= max_len && !layer.empty(); ++len) {
        out.insert(out.end(), layer.begin(), layer.end());
        if (len == max_len) break;
        // extend on the left: new letter b with src(b) = tgt(word)
        std::vector<Word> next;
        for (auto& w : layer)
            for (std::size_t b = 0; b < q.num_arrows(); ++b)
                if (q.arrow(b).src == word_tgt(q, w)) {
                    Word nw{b};
                    nw.insert(nw.end(), w.begin(), w.end());
                    next.push_back(std::move(nw));
                }
        std::sort(next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

/// Number of composable words of length 1..max_len, saturating at `limit`.
inline std::size_t count_composable_words(const GradedQuiver& q, std::size_t max_len, std::size_t limit) {
    // ending[x]: words of the current length with target x
    std::vector<std::size_t> ending(q.num_objects(), 0);
    for (auto& a : q.arrows()) ending[a.tgt] = std::min(limit, ending[a.tgt] + 1);
    std::size_t total = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        for (auto n : ending) total = std::min(limit, total + n);
        if (total >= limit || len == max_len) break;
        std::vector<std::size_t> next(q.num_objects(), 0);
        for (auto& a : q.arrows()) next[a.tgt] = std::min(limit, next[a.tgt] + ending[a.src]);
        ending = std::move(next);
    }
    return total;
}

/// True when composable words of every length exist (the quiver has an oriented cycle).
inline bool has_cycle(const GradedQuiver& q) {
    const std::size_t n = q.num_objects();
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto& a : q.arrows()) adj[a.src].push_back(a.tgt);
    std::vector<int> state(n, 0);
    std::function<bool(std::size_t)> visit = [&](std::size_t x) {
        state[x] = 1;
        for (auto y : adj[x]) {
            if (state[y] == 1) return true;
            if (state[y] == 0 && visit(y)) return true;
        }
        state[x] = 2;
        return false;
    };
    for (std::size_t x = 0; x < n; ++x)
        if (state[x] == 0 && visit(x)) return true;
    return false;
}

/// Length of the longest composable word, or nullopt when unbounded.
inline std::optional<std::size_t> longest_word(const GradedQuiver& q) {
    if (has_cycle(q)) return std::nullopt;
    const std::size_t n = q.num_objects();
    // longest path ending at each object, by relaxation over a DAG
    std::vector<std::size_t> best(n, 0);
    for (std::size_t round = 0; round < n + 1; ++round)
        for (auto& a : q.arrows()) best[a.tgt] = std::max(best[a.tgt], best[a.src] + 1);
    std::size_t m = 0;
    for (auto b : best) m = std::max(m, b);
    return m;
}

}  // namespace kdual
