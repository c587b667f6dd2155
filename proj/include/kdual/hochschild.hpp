#pragma once

/**
 * @file hochschild.hpp
 * @brief Hochschild cochains of a dg category D with coefficients in the
 * twisted bimodule M(x, y) = D'(F x, G y).
 *
 * A cochain of weight p sends a composable word [sa_p|…|sa_1] (a_1 applied
 * first, |sa| = |a| - 1) to M(src a_1, tgt a_p); its total degree is
 * |φ(w)| - |w|. The letters a are either a complement of the units (reduced)
 * or all basis arrows (unreduced). With ξ_F = F on letters,
 *
 *     dφ = d_{D'}φ - (-1)^{|φ|} φ∘d_B + ξ_G⋆φ - (-1)^{|φ|} φ⋆ξ_F,
 *     (ξ_G⋆φ)[sa|w] = (-1)^{|φ||sa|} G(a)∘φ(w),   (φ⋆ξ_F)[w|sa] = (-1)^{|w|} φ(w)∘F(a),
 *
 * where d_B has components [sa] ↦ -[s d a] and [sa|sb] ↦ (-1)^{|a|}[s ab]
 * (projected to the letters in the reduced case).
 */

#include <set>

#include "kdual/bar.hpp"
#include "kdual/complex.hpp"
#include "kdual/mc.hpp"

namespace kdual {

enum class HhNormalization { reduced, unreduced };

/// Weights p whose cochains can reach total degree n, from degree supports.
struct WeightAnalysis {
    bool divergent = false;
    std::set<std::size_t> weights;
    std::string note;
};

/**
 * Letters in degrees [dlo, dhi] (unshifted), coefficients in [mlo, mhi],
 * words of length ≤ longest (nullopt: unbounded). A weight-p cochain has
 * degree in [mlo + p(1 - dhi), mhi + p(1 - dlo)].
 */
inline WeightAnalysis hh_weight_analysis(std::optional<std::pair<int, int>> letter_support,
                                         std::optional<std::pair<int, int>> coefficient_support,
                                         std::optional<std::size_t> longest, int n) {
    WeightAnalysis out;
    if (!coefficient_support) return out;  // M = 0
    auto [mlo, mhi] = *coefficient_support;
    if (!letter_support) {
        if (mlo <= n && n <= mhi) out.weights.insert(0);
        return out;
    }
    auto [dlo, dhi] = *letter_support;
    std::optional<long long> bound = longest ? std::optional<long long>(static_cast<long long>(*longest)) : std::nullopt;
    auto tighten = [&](long long b) { bound = bound ? std::min(*bound, b) : b; };
    if (1 - dhi > 0) tighten(std::max<long long>(-1, (n - mlo) / (1 - dhi)));
    if (1 - dlo < 0) tighten(std::max<long long>(-1, (mhi - n) / (dlo - 1)));
    if (!bound) {
        out.divergent = true;
        out.note = "infinitely many weights reach degree " + std::to_string(n) +
                   "; use the stabilize mode with a weight cutoff";
        return out;
    }
    for (long long p = 0; p <= *bound; ++p)
        if (mlo + p * (1 - dhi) <= n && n <= mhi + p * (1 - dlo)) out.weights.insert(static_cast<std::size_t>(p));
    return out;
}

template <Field K>
struct HhResult {
    std::map<int, std::size_t> dims;
    bool exact = true;
    /// stabilize mode only: dims with cutoff W + 1, and whether they agree with cutoff W
    std::map<int, std::size_t> dims_next;
    bool stable = true;
    std::size_t max_weight = 0;
};

template <Field K>
class HochschildComplex {
public:
    struct Letter {
        Vec<K> vec;
        std::size_t src, tgt;
        int degree;  // unshifted
    };
    struct Cochain {
        Word word;
        std::size_t src;  // object, needed for the empty word
        std::size_t value;  // D' arrow
        auto operator<=>(const Cochain&) const = default;
    };

    HochschildComplex(const Category<K>& d, const Category<K>& d2, DgFunctor<K> f, DgFunctor<K> g,
                      HhNormalization norm = HhNormalization::reduced)
        : d_(d), d2_(d2), f_(std::move(f)), g_(std::move(g)), norm_(norm) {
        if (d_.is_curved() || d2_.is_curved()) throw ValidationError("Hochschild complex needs uncurved categories");
        if (d_.zero || d2_.zero) throw ValidationError("Hochschild complex of 𝟎 is not modelled");
        letters_q_ = GradedQuiver(d_.quiver.objects());
        if (norm_ == HhNormalization::reduced) {
            bar_.emplace(d_);
            for (std::size_t l = 0; l < bar_->letters().num_arrows(); ++l) {
                const Arrow& a = bar_->letters().arrow(l);
                add_letter(bar_->complement_vector(l), a.src, a.tgt, a.degree + 1, bar_->letters().label(l));
            }
        } else {
            for (std::size_t a = 0; a < d_.num_arrows(); ++a) {
                const Arrow& ar = d_.quiver.arrow(a);
                add_letter(Vec<K>::unit(a), ar.src, ar.tgt, ar.degree, "s" + ar.name);
            }
        }
    }

    const GradedQuiver& letters() const { return letters_q_; }
    int word_deg(const Word& w) const { return word_degree(letters_q_, w); }

    /// Letter coordinates of a D-vector (the unit part is dropped in the reduced case).
    Vec<K> project(const Vec<K>& v) const { return norm_ == HhNormalization::reduced ? bar_->split(v).first : v; }

    WordVec<K> d_bar(const Word& w) const {
        WordVec<K> out;
        int left = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            K s = sign<K>(left);
            for (auto& [l, k] : project(d_.d(letters_[w[i]].vec))) add_term(out, replace(w, i, 1, l), -(s * k));
            if (i + 1 < w.size()) {
                K s2 = s * sign<K>(letters_[w[i]].degree);
                for (auto& [l, k] : project(d_.compose(letters_[w[i]].vec, letters_[w[i + 1]].vec)))
                    add_term(out, replace(w, i, 2, l), s2 * k);
            }
            left += letters_q_.arrow(w[i]).degree;
        }
        return out;
    }

    WeightAnalysis analysis(int n) const {
        std::optional<std::pair<int, int>> ls;
        for (auto& l : letters_) ls = ls ? std::pair{std::min(ls->first, l.degree), std::max(ls->second, l.degree)}
                                         : std::pair{l.degree, l.degree};
        return hh_weight_analysis(ls, d2_.quiver.degree_support(), longest_word(letters_q_), n);
    }

    /**
     * Complex on degrees [lo-1, hi+1] built from cochains of weight ≤ cutoff
     * (all weights reaching those degrees in exact mode). Cochains of weight
     * above the cutoff form a subcomplex, so this is a quotient complex.
     */
    BoundedComplex<K> complex(int lo, int hi, std::size_t cutoff) const {
        // words by length up to cutoff + 1
        std::vector<std::vector<Word>> by_len(cutoff + 2);
        for (std::size_t x = 0; x < d_.num_objects(); ++x) by_len[0].push_back(Word{});
        for (auto& w : composable_words(letters_q_, cutoff + 1)) by_len[w.size()].push_back(w);
        std::map<int, std::vector<Cochain>> basis;
        for (int n = lo - 1; n <= hi + 1; ++n) basis[n];
        for (std::size_t p = 0; p <= cutoff; ++p)
            for (std::size_t k = 0; k < by_len[p].size(); ++k) {
                const Word& w = by_len[p][k];
                std::size_t src = p == 0 ? k : word_src(letters_q_, w), tgt = p == 0 ? k : word_tgt(letters_q_, w);
                for (auto m : d2_.quiver.hom(f_.object_map[src], g_.object_map[tgt])) {
                    int n = d2_.quiver.arrow(m).degree - word_deg(w);
                    if (n >= lo - 1 && n <= hi + 1) basis[n].push_back({w, src, m});
                }
            }
        // reverse of d_B on words of length ≤ cutoff
        std::map<Word, std::vector<std::pair<Word, K>>> d_bar_inverse;
        for (std::size_t p = 1; p <= cutoff; ++p)
            for (auto& u : by_len[p])
                for (auto& [w, k] : d_bar(u)) d_bar_inverse[w].push_back({u, k});

        BoundedComplex<K> cx;
        cx.lo = lo - 1;
        cx.boundary = Boundary::interior_only;
        for (int n = lo - 1; n <= hi + 1; ++n) {
            std::vector<std::string> names;
            for (auto& c : basis[n])
                names.push_back((c.word.empty() ? "[]" : "[" + word_name(letters_q_, c.word, "|") + "]") + "->" +
                                d2_.label(c.value));
            cx.bases.push_back(std::move(names));
        }
        for (int n = lo - 1; n <= hi; ++n) {
            std::map<Cochain, std::size_t> row;
            for (auto& c : basis[n + 1]) row.emplace(c, row.size());
            std::vector<Vec<K>> cols;
            for (auto& c : basis[n]) {
                Vec<K> col;
                auto put = [&](const Word& u, std::size_t src, const Vec<K>& v, K scale) {
                    if (u.size() > cutoff) return;
                    for (auto& [m, k] : v) col.add(row.at({u, src, m}), scale * k);
                };
                put(c.word, c.src, d2_.differential[c.value], K(1));
                if (auto it = d_bar_inverse.find(c.word); it != d_bar_inverse.end())
                    for (auto& [u, k] : it->second) put(u, c.src, Vec<K>::unit(c.value), -(sign<K>(n) * k));
                const std::size_t tgt = c.word.empty() ? c.src : word_tgt(letters_q_, c.word);
                for (std::size_t l = 0; l < letters_.size(); ++l) {
                    const Letter& L = letters_[l];
                    if (L.src == tgt) {
                        Word u{l};
                        u.insert(u.end(), c.word.begin(), c.word.end());
                        put(u, c.src, d2_.compose(g_.apply(L.vec), Vec<K>::unit(c.value)),
                            sign<K>(static_cast<long long>(n) * (L.degree - 1)));
                    }
                    if (L.tgt == c.src) {
                        Word u = c.word;
                        u.push_back(l);
                        put(u, L.src, d2_.compose(Vec<K>::unit(c.value), f_.apply(L.vec)),
                            -(sign<K>(n) * sign<K>(word_deg(c.word))));
                    }
                }
                cols.push_back(std::move(col));
            }
            cx.differential.push_back(SparseMatrix<K>::from_columns(row.size(), std::move(cols)));
        }
        return cx;
    }

    /// Exact cohomology on [lo, hi]; throws InexactWindow when some degree has divergent weights.
    HhResult<K> cohomology(int lo, int hi) const {
        HhResult<K> r;
        std::size_t cutoff = 0;
        for (int n = lo - 1; n <= hi + 1; ++n) {
            auto a = analysis(n);
            if (a.divergent) throw InexactWindow("Hochschild complex: " + a.note);
            if (!a.weights.empty()) cutoff = std::max(cutoff, *a.weights.rbegin());
        }
        r.max_weight = cutoff;
        r.dims = homology_dims(complex(lo, hi, cutoff));
        return r;
    }

    /// Dims with weight cutoffs W and W + 1 and whether they agree.
    HhResult<K> stabilized(int lo, int hi, std::size_t w) const {
        HhResult<K> r;
        r.exact = false;
        r.max_weight = w;
        r.dims = homology_dims(complex(lo, hi, w));
        r.dims_next = homology_dims(complex(lo, hi, w + 1));
        r.stable = r.dims == r.dims_next;
        return r;
    }

private:
    void add_letter(Vec<K> v, std::size_t src, std::size_t tgt, int degree, const std::string& name) {
        letters_.push_back({std::move(v), src, tgt, degree});
        letters_q_.add_arrow(name, src, tgt, degree - 1);
    }
    static Word replace(const Word& w, std::size_t at, std::size_t len, std::size_t letter) {
        Word out(w.begin(), w.begin() + at);
        out.push_back(letter);
        out.insert(out.end(), w.begin() + at + len, w.end());
        return out;
    }

    const Category<K>& d_;
    const Category<K>& d2_;
    DgFunctor<K> f_, g_;
    HhNormalization norm_;
    std::optional<BarConstruction<K>> bar_;
    std::vector<Letter> letters_;
    GradedQuiver letters_q_;
};

struct HhMode {
    bool stabilize = false;
    std::size_t cutoff = 0;
};

template <Field K>
HhResult<K> hh_cohomology(const Category<K>& d, const Category<K>& d2, const DgFunctor<K>& f, const DgFunctor<K>& g,
                          int lo, int hi, HhMode mode = {}, HhNormalization norm = HhNormalization::reduced) {
    HochschildComplex<K> h(d, d2, f, g, norm);
    return mode.stabilize ? h.stabilized(lo, hi, mode.cutoff) : h.cohomology(lo, hi);
}

/// HH*(D, D) with identity coefficients.
template <Field K>
HhResult<K> hh_cohomology(const Category<K>& d, int lo, int hi, HhMode mode = {},
                          HhNormalization norm = HhNormalization::reduced) {
    auto id = identity_functor(d);
    return hh_cohomology(d, d, id, id, lo, hi, mode, norm);
}

template <Field K>
struct HhVsMc {
    std::map<int, std::size_t> hochschild, mc_homs;
    std::size_t bar_weight = 0;
    bool equal() const { return hochschild == mc_homs; }
};

/**
 * Compares HH*(D, _F D'_G) with the homology of Hom(ξ_F, ξ_G) in MC*(BD, D'),
 * where ξ_F = F∘τ on a bar construction cut at the largest weight the
 * window needs (so both sides are exact).
 */
template <Field K>
HhVsMc<K> hh_vs_mc_homs(const Category<K>& d, const Category<K>& d2, const DgFunctor<K>& f, const DgFunctor<K>& g,
                        int lo, int hi) {
    HhVsMc<K> out;
    auto hh = hh_cohomology(d, d2, f, g, lo, hi);
    out.hochschild = hh.dims;
    out.bar_weight = std::max<std::size_t>(1, hh.max_weight);
    BarConstruction<K> bar(d);
    auto bd = bar.materialize(out.bar_weight);
    auto tau = bar.counit_cochain(bd);
    auto twist = [&](const DgFunctor<K>& fn) {
        McElement<K> m{fn.object_map, {}};
        for (auto& t : tau) m.xi.push_back(fn.apply(t));
        return m;
    };
    out.mc_homs = mc_hom_homology(bd.coalgebra, d2, twist(f), twist(g), lo, hi);
    return out;
}

}  // namespace kdual
