#pragma once

/**
 * @file quiver.hpp
 * @brief Finite graded k-quivers: tensor product, internal hom, augmentations.
 *
 * A quiver has a finite ordered object set and a finite list of basis
 * arrows, each living in one slot (source, target, degree). Linear data
 * over a quiver (differentials, compositions, maps) is expressed in terms
 * of the global arrow index.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "kdual/error.hpp"
#include "kdual/elimination.hpp"

namespace kdual {

struct Arrow {
    std::string name;
    std::size_t src = 0;
    std::size_t tgt = 0;
    int degree = 0;
    bool operator==(const Arrow&) const = default;
};

/// Slot key: (source object, target object, degree).
using Slot = std::tuple<std::size_t, std::size_t, int>;

class GradedQuiver {
public:
    GradedQuiver() = default;
    explicit GradedQuiver(std::vector<std::string> objects) {
        for (auto& o : objects) add_object(std::move(o));
    }

    std::size_t add_object(std::string name) {
        if (object_index_.count(name)) throw ValidationError("duplicate object '" + name + "'");
        object_index_.emplace(name, objects_.size());
        objects_.push_back(std::move(name));
        return objects_.size() - 1;
    }

    std::size_t add_arrow(std::string name, std::size_t src, std::size_t tgt, int degree) {
        if (src >= objects_.size() || tgt >= objects_.size())
            throw ValidationError("arrow '" + name + "' refers to an unknown object");
        if (arrow_index_.count(name)) throw ValidationError("duplicate arrow name '" + name + "'");
        arrow_index_.emplace(name, arrows_.size());
        slots_[{src, tgt, degree}].push_back(arrows_.size());
        arrows_.push_back({std::move(name), src, tgt, degree});
        return arrows_.size() - 1;
    }
    std::size_t add_arrow(std::string name, const std::string& src, const std::string& tgt, int degree) {
        return add_arrow(std::move(name), object(src), object(tgt), degree);
    }

    std::size_t num_objects() const { return objects_.size(); }
    std::size_t num_arrows() const { return arrows_.size(); }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const Arrow& arrow(std::size_t i) const { return arrows_.at(i); }
    const std::string& object_name(std::size_t i) const { return objects_.at(i); }

    std::size_t object(const std::string& name) const {
        auto it = object_index_.find(name);
        if (it == object_index_.end()) throw ValidationError("unknown object '" + name + "'");
        return it->second;
    }
    std::optional<std::size_t> find_object(const std::string& name) const {
        auto it = object_index_.find(name);
        if (it == object_index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t arrow_index(const std::string& name) const {
        auto it = arrow_index_.find(name);
        if (it == arrow_index_.end()) throw ValidationError("unknown arrow '" + name + "'");
        return it->second;
    }
    std::optional<std::size_t> find_arrow(const std::string& name) const {
        auto it = arrow_index_.find(name);
        if (it == arrow_index_.end()) return std::nullopt;
        return it->second;
    }

    /// Basis arrows of V(src, tgt) in the given degree, in insertion order.
    const std::vector<std::size_t>& slot(std::size_t src, std::size_t tgt, int degree) const {
        static const std::vector<std::size_t> empty;
        auto it = slots_.find({src, tgt, degree});
        return it == slots_.end() ? empty : it->second;
    }
    /// All basis arrows of V(src, tgt), any degree.
    std::vector<std::size_t> hom(std::size_t src, std::size_t tgt) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < arrows_.size(); ++i)
            if (arrows_[i].src == src && arrows_[i].tgt == tgt) out.push_back(i);
        return out;
    }
    const std::map<Slot, std::vector<std::size_t>>& slots() const { return slots_; }

    /// Degrees in which some arrow lives; empty when there are no arrows.
    std::optional<std::pair<int, int>> degree_support() const {
        if (arrows_.empty()) return std::nullopt;
        auto [lo, hi] = std::minmax_element(arrows_.begin(), arrows_.end(),
                                            [](const Arrow& a, const Arrow& b) { return a.degree < b.degree; });
        return std::pair{lo->degree, hi->degree};
    }

    /// Homogeneous degree of a vector, or nullopt for zero / mixed vectors.
    template <Field K>
    std::optional<int> degree_of(const Vec<K>& v) const {
        std::optional<int> d;
        for (auto& [i, k] : v) {
            if (d && *d != arrows_.at(i).degree) return std::nullopt;
            d = arrows_.at(i).degree;
        }
        return d;
    }

    std::string label(std::size_t i) const { return arrows_.at(i).name; }

    bool operator==(const GradedQuiver& o) const { return objects_ == o.objects_ && arrows_ == o.arrows_; }

private:
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::unordered_map<std::string, std::size_t> object_index_;
    std::unordered_map<std::string, std::size_t> arrow_index_;
    std::map<Slot, std::vector<std::size_t>> slots_;
};

inline std::string pair_name(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

/// Index of the product object/arrow (i, j) in a lexicographic product of sizes (m, n).
constexpr std::size_t lex_index(std::size_t i, std::size_t j, std::size_t n) { return i * n + j; }

/**
 * V ⊗ W: objects are pairs, (V⊗W)((x,x'),(y,y')) = V(x,y) ⊗ W(x',y').
 * Objects and arrows are both ordered lexicographically, so arrow (a, b)
 * has index lex_index(a, b, |W|).
 */
inline GradedQuiver quiver_tensor(const GradedQuiver& v, const GradedQuiver& w) {
    GradedQuiver out;
    for (auto& x : v.objects())
        for (auto& y : w.objects()) out.add_object(pair_name(x, y));
    const std::size_t nw = w.num_objects();
    for (auto& a : v.arrows())
        for (auto& b : w.arrows())
            out.add_arrow(pair_name(a.name, b.name), lex_index(a.src, b.src, nw), lex_index(a.tgt, b.tgt, nw),
                          a.degree + b.degree);
    return out;
}

/// Arrow relabeling (U⊗V)⊗W -> U⊗(V⊗W); entry i is the image of arrow i.
inline std::vector<std::size_t> associator_relabeling(const GradedQuiver& u, const GradedQuiver& v,
                                                      const GradedQuiver& w) {
    const std::size_t nv = v.num_arrows(), nw = w.num_arrows();
    std::vector<std::size_t> out(u.num_arrows() * nv * nw);
    for (std::size_t a = 0; a < u.num_arrows(); ++a)
        for (std::size_t b = 0; b < nv; ++b)
            for (std::size_t c = 0; c < nw; ++c)
                out[lex_index(lex_index(a, b, nv), c, nw)] = lex_index(a, lex_index(b, c, nw), nv * nw);
    return out;
}

/// True when `relabel` is a bijection on arrows and objects compatible with slots,
/// with objects matched through `object_relabel`.
inline bool is_slot_isomorphism(const GradedQuiver& from, const GradedQuiver& to,
                                const std::vector<std::size_t>& object_relabel,
                                const std::vector<std::size_t>& relabel) {
    if (from.num_arrows() != to.num_arrows() || from.num_objects() != to.num_objects()) return false;
    if (relabel.size() != from.num_arrows() || object_relabel.size() != from.num_objects()) return false;
    std::vector<bool> hit(to.num_arrows(), false), ohit(to.num_objects(), false);
    for (auto o : object_relabel) {
        if (o >= to.num_objects() || ohit[o]) return false;
        ohit[o] = true;
    }
    for (std::size_t i = 0; i < relabel.size(); ++i) {
        auto j = relabel[i];
        if (j >= to.num_arrows() || hit[j]) return false;
        hit[j] = true;
        const Arrow &a = from.arrow(i), &b = to.arrow(j);
        if (object_relabel[a.src] != b.src || object_relabel[a.tgt] != b.tgt || a.degree != b.degree) return false;
    }
    return true;
}

/// The unit quiver 𝐤: one object "*" and its identity arrow in degree 0.
inline GradedQuiver unit_quiver() {
    GradedQuiver q({"*"});
    q.add_arrow("1", 0, 0, 0);
    return q;
}

/// Object maps Ob V -> Ob W enumerated in lexicographic (base |W|) order.
class ObjectMaps {
public:
    ObjectMaps(std::size_t domain, std::size_t codomain, std::size_t cap = 1u << 20)
        : domain_(domain), codomain_(codomain) {
        count_ = 1;
        for (std::size_t i = 0; i < domain; ++i) {
            count_ *= codomain;
            if (count_ > cap) throw CapExceeded("too many object maps (" + std::to_string(codomain) + "^" +
                                                std::to_string(domain) + " exceeds cap)");
        }
    }
    std::size_t size() const { return count_; }
    /// The k-th map as a vector of images.
    std::vector<std::size_t> operator[](std::size_t k) const {
        std::vector<std::size_t> f(domain_);
        for (std::size_t i = domain_; i-- > 0;) {
            f[i] = k % codomain_;
            k /= codomain_;
        }
        return f;
    }
    /// Inverse of operator[].
    std::size_t index_of(const std::vector<std::size_t>& f) const {
        std::size_t k = 0;
        for (auto x : f) k = k * codomain_ + x;
        return k;
    }

private:
    std::size_t domain_, codomain_, count_;
};

inline std::string object_map_name(const GradedQuiver& v, const GradedQuiver& w, const std::vector<std::size_t>& f) {
    std::string s = "[";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += ",";
        s += v.object_name(i) + "->" + w.object_name(f[i]);
    }
    return s + "]";
}

/// Basis element of an internal-hom arrow space: the elementary map sending
/// basis arrow `from` of V to basis arrow `to` of W.
struct ElementaryMap {
    std::size_t from;
    std::size_t to;
};

/**
 * uHom(V, W): objects are all object maps f: Ob V -> Ob W; the arrows from f
 * to g in degree n are ⊕_{x,y} Hom_n(V(x,y), W(fx, gy)), spanned by elementary
 * maps of degree |to| - |from|.
 */
inline GradedQuiver quiver_internal_hom(const GradedQuiver& v, const GradedQuiver& w,
                                        std::vector<ElementaryMap>* elementary = nullptr,
                                        std::size_t object_cap = 1u << 16) {
    ObjectMaps maps(v.num_objects(), w.num_objects(), object_cap);
    GradedQuiver out;
    std::vector<std::vector<std::size_t>> images;
    for (std::size_t k = 0; k < maps.size(); ++k) {
        images.push_back(maps[k]);
        out.add_object(object_map_name(v, w, images.back()));
    }
    for (std::size_t fi = 0; fi < maps.size(); ++fi)
        for (std::size_t gi = 0; gi < maps.size(); ++gi)
            for (std::size_t a = 0; a < v.num_arrows(); ++a) {
                const Arrow& va = v.arrow(a);
                for (std::size_t b = 0; b < w.num_arrows(); ++b) {
                    const Arrow& wb = w.arrow(b);
                    if (wb.src != images[fi][va.src] || wb.tgt != images[gi][va.tgt]) continue;
                    out.add_arrow(out.object_name(fi) + "=>" + out.object_name(gi) + ":" + va.name + "^*" + wb.name,
                                  fi, gi, wb.degree - va.degree);
                    if (elementary) elementary->push_back({a, b});
                }
            }
    return out;
}

/// Degree-zero quiver map: object map plus, per arrow, its image vector.
template <Field K>
struct QuiverMap {
    std::vector<std::size_t> object_map;
    std::vector<Vec<K>> arrow_map;

    Report check(const GradedQuiver& v, const GradedQuiver& w) const {
        if (object_map.size() != v.num_objects()) return Report::fail("object map has wrong length");
        for (auto o : object_map)
            if (o >= w.num_objects()) return Report::fail("object map leaves the target");
        if (arrow_map.size() != v.num_arrows()) return Report::fail("arrow map has wrong length");
        for (std::size_t a = 0; a < v.num_arrows(); ++a) {
            const Arrow& va = v.arrow(a);
            for (auto& [b, k] : arrow_map[a]) {
                const Arrow& wb = w.arrow(b);
                if (wb.src != object_map[va.src] || wb.tgt != object_map[va.tgt] || wb.degree != va.degree)
                    return Report::fail("image of '" + va.name + "' leaves its slot (contains '" + wb.name + "')");
            }
        }
        return Report::pass();
    }
};

/**
 * Number of degree-zero quiver maps V -> W over a finite field of size q,
 * counted as a power of q per object map: returns the list of exponents,
 * one entry per object map.
 */
inline std::vector<std::size_t> quiver_map_exponents(const GradedQuiver& v, const GradedQuiver& w,
                                                     std::size_t object_cap = 1u << 16) {
    ObjectMaps maps(v.num_objects(), w.num_objects(), object_cap);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < maps.size(); ++k) {
        auto f = maps[k];
        std::size_t e = 0;
        for (auto& a : v.arrows()) e += w.slot(f[a.src], f[a.tgt], a.degree).size();
        out.push_back(e);
    }
    return out;
}

/// Augmented quiver: k[Ob V] --unit--> V --augmentation--> k[Ob V].
template <Field K>
struct AugmentedQuiver {
    GradedQuiver quiver;
    std::vector<Vec<K>> unit;          // per object, a degree-0 vector in V(x,x)
    std::vector<Vec<K>> augmentation;  // per arrow, a vector over objects (coefficient of x in ε(a))
};

template <Field K>
struct AugmentationReport {
    Report report;
    /// Basis arrows spanning the chosen complement of the units inside ker ε,
    /// expressed as vectors over the quiver basis.
    std::vector<Vec<K>> reduced_basis;
};

/// Checks ε∘η = id and returns a basis of the reduced quiver ker ε.
template <Field K>
AugmentationReport<K> validate_augmented(const AugmentedQuiver<K>& a) {
    const GradedQuiver& q = a.quiver;
    AugmentationReport<K> out;
    if (a.unit.size() != q.num_objects() || a.augmentation.size() != q.num_arrows()) {
        out.report = Report::fail("augmented quiver: unit/augmentation table has the wrong size");
        return out;
    }
    for (std::size_t i = 0; i < q.num_arrows(); ++i) {
        const Arrow& ar = q.arrow(i);
        for (auto& [o, k] : a.augmentation[i])
            if (ar.degree != 0 || ar.src != o || ar.tgt != o) {
                out.report = Report::fail("augmentation is nonzero off degree-0 endomorphisms at '" + ar.name + "'");
                return out;
            }
    }
    for (std::size_t x = 0; x < q.num_objects(); ++x) {
        Vec<K> eps;
        for (auto& [i, k] : a.unit[x]) {
            const Arrow& ar = q.arrow(i);
            if (ar.src != x || ar.tgt != x || ar.degree != 0) {
                out.report = Report::fail("unit of object '" + q.object_name(x) + "' is not a degree-0 endomorphism");
                return out;
            }
            eps.axpy(k, a.augmentation[i]);
        }
        if (!(eps == Vec<K>::unit(x))) {
            out.report = Report::fail("augmentation∘unit ≠ id at object '" + q.object_name(x) + "'");
            return out;
        }
    }
    // ker ε: ε as a matrix arrows -> objects.
    SparseMatrix<K> eps = SparseMatrix<K>::from_columns(q.num_objects(), a.augmentation);
    out.reduced_basis = kernel_basis(eps);
    return out;
}

}  // namespace kdual
