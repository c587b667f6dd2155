#pragma once

/**
 * @file complex.hpp
 * @brief Bounded cochain complexes with named bases, and their cohomology.
 */

#include <map>
#include <string>
#include <vector>

#include "kdual/elimination.hpp"
#include "kdual/error.hpp"

namespace kdual {

/// How the ends of a supplied degree window behave.
enum class Boundary {
    zero_outside,   // the complex really is zero outside the window
    interior_only,  // the window is a slice; edge degrees are not reported
};

/**
 * Cochain complex supported on degrees [lo, lo + spaces.size()).
 *
 * `differential[i]` maps degree lo+i to degree lo+i+1, so there is one
 * differential fewer than there are spaces.
 */
template <Field K>
struct BoundedComplex {
    int lo = 0;
    std::vector<std::vector<std::string>> bases;  // named basis per degree
    std::vector<SparseMatrix<K>> differential;
    Boundary boundary = Boundary::zero_outside;

    int hi() const { return lo + static_cast<int>(bases.size()) - 1; }
    std::size_t dim(int n) const {
        if (n < lo || n > hi()) return 0;
        return bases[static_cast<std::size_t>(n - lo)].size();
    }

    /// Checks shapes and d∘d = 0; throws ValidationError on failure.
    void check() const {
        if (bases.empty()) return;
        if (differential.size() + 1 != bases.size())
            throw ValidationError("complex needs one differential between consecutive degrees");
        for (std::size_t i = 0; i < differential.size(); ++i) {
            const auto& d = differential[i];
            if (d.cols() != bases[i].size() || d.rows() != bases[i + 1].size())
                throw ValidationError("differential out of degree " + std::to_string(lo + int(i)) +
                                      " has the wrong shape");
        }
        for (std::size_t i = 0; i + 1 < differential.size(); ++i)
            if (!(differential[i + 1] * differential[i]).is_zero())
                throw ValidationError("d∘d ≠ 0 starting in degree " + std::to_string(lo + int(i)));
    }
};

/// dim H^n = dim ker d_n - rank d_{n-1} for every reportable degree n.
template <Field K>
std::map<int, std::size_t> homology_dims(const BoundedComplex<K>& c) {
    c.check();
    std::map<int, std::size_t> out;
    if (c.bases.empty()) return out;
    const std::size_t n = c.bases.size();
    std::vector<std::size_t> ranks(c.differential.size());
    for (std::size_t i = 0; i < c.differential.size(); ++i) ranks[i] = rank(c.differential[i]);
    for (std::size_t i = 0; i < n; ++i) {
        if (c.boundary == Boundary::interior_only && (i == 0 || i + 1 == n)) continue;
        std::size_t out_rank = i < ranks.size() ? ranks[i] : 0;
        std::size_t in_rank = i > 0 ? ranks[i - 1] : 0;
        out[c.lo + static_cast<int>(i)] = c.bases[i].size() - out_rank - in_rank;
    }
    return out;
}

}  // namespace kdual
