#pragma once

/**
 * @file elimination.hpp
 * @brief Rank and kernel computations by sparse Gaussian elimination.
 *
 * Columns are eliminated left-looking: each incoming column is reduced
 * against the pivots found so far, in pivot creation order, so a pivot
 * column never re-introduces an entry in an earlier pivot row.
 *
 * Pivot selection is Markowitz-style: columns are visited sparsest first
 * and the pivot row of a surviving column is the one with the smallest
 * row count in the original matrix. Over the rationals, rank() works on
 * primitive integer columns (fraction-free, content-reduced) so no
 * denominators appear during elimination.
 */

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "kdual/sparse.hpp"

namespace kdual {

namespace detail {

template <Field K>
std::vector<std::size_t> row_counts(const SparseMatrix<K>& m) {
    std::vector<std::size_t> counts(m.rows(), 0);
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (auto& [i, k] : m.column(j)) ++counts[i];
    return counts;
}

template <Field K>
std::vector<std::size_t> markowitz_column_order(const SparseMatrix<K>& m) {
    std::vector<std::size_t> order(m.cols());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return m.column(a).nnz() < m.column(b).nnz(); });
    return order;
}

template <class Entries, class Counts>
std::size_t choose_pivot_row(const Entries& entries, const Counts& counts) {
    std::size_t best = entries.begin()->first;
    for (auto& [i, k] : entries)
        if (counts[i] < counts[best]) best = i;
    return best;
}

// Integer column used by the fraction-free path.
using IntColumn = std::map<std::size_t, mpz_class>;

inline void make_primitive(IntColumn& v) {
    mpz_class g = 0;
    for (auto& [i, k] : v) g = gcd(g, k);
    if (g > 1)
        for (auto& [i, k] : v) k /= g;
}

inline std::size_t rank_fraction_free(std::vector<IntColumn> cols, const std::vector<std::size_t>& counts) {
    struct Pivot {
        std::size_t row;
        IntColumn col;
    };
    std::vector<Pivot> pivots;
    for (auto& v : cols) {
        for (auto& p : pivots) {
            auto it = v.find(p.row);
            if (it == v.end()) continue;
            mpz_class a = p.col.at(p.row), b = it->second;
            mpz_class g = gcd(a, b);
            mpz_class sa = a / g, sb = b / g;
            // v <- sa*v - sb*p
            for (auto& [i, k] : v) k *= sa;
            for (auto& [i, k] : p.col) {
                mpz_class& slot = v[i];
                slot -= sb * k;
            }
            for (auto jt = v.begin(); jt != v.end();)
                jt = (jt->second == 0) ? v.erase(jt) : std::next(jt);
            make_primitive(v);
        }
        if (v.empty()) continue;
        std::size_t row = choose_pivot_row(v, counts);
        pivots.push_back({row, std::move(v)});
    }
    return pivots.size();
}

}  // namespace detail

/// Rank over the scalar field.
template <Field K>
std::size_t rank(const SparseMatrix<K>& m) {
    const auto counts = detail::row_counts(m);
    const auto order = detail::markowitz_column_order(m);
    if constexpr (K::characteristic == 0) {
        std::vector<detail::IntColumn> cols;
        cols.reserve(order.size());
        for (std::size_t j : order) {
            mpz_class l = 1;
            for (auto& [i, k] : m.column(j)) l = lcm(l, k.value().get_den());
            detail::IntColumn c;
            for (auto& [i, k] : m.column(j)) c[i] = k.value().get_num() * (l / k.value().get_den());
            detail::make_primitive(c);
            cols.push_back(std::move(c));
        }
        return detail::rank_fraction_free(std::move(cols), counts);
    } else {
        struct Pivot {
            std::size_t row;
            Vec<K> col;  // normalised so col[row] == 1
        };
        std::vector<Pivot> pivots;
        for (std::size_t j : order) {
            Vec<K> v = m.column(j);
            for (auto& p : pivots) {
                K c = v.get(p.row);
                if (!c.is_zero()) v.axpy(-c, p.col);
            }
            if (v.is_zero()) continue;
            std::size_t row = detail::choose_pivot_row(v, counts);
            K inv = K(1) / v.get(row);
            pivots.push_back({row, v.scaled(inv)});
        }
        return pivots.size();
    }
}

/// Basis of the null space {x : m x = 0}; size is cols - rank.
template <Field K>
std::vector<Vec<K>> kernel_basis(const SparseMatrix<K>& m) {
    const auto counts = detail::row_counts(m);
    struct Pivot {
        std::size_t row;
        Vec<K> col;
        Vec<K> tracker;
    };
    std::vector<Pivot> pivots;
    std::vector<Vec<K>> kernel;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Vec<K> v = m.column(j);
        Vec<K> t = Vec<K>::unit(j);
        for (auto& p : pivots) {
            K c = v.get(p.row);
            if (c.is_zero()) continue;
            v.axpy(-c, p.col);
            t.axpy(-c, p.tracker);
        }
        if (v.is_zero()) {
            kernel.push_back(std::move(t));
            continue;
        }
        std::size_t row = detail::choose_pivot_row(v, counts);
        K inv = K(1) / v.get(row);
        pivots.push_back({row, v.scaled(inv), t.scaled(inv)});
    }
    return kernel;
}

/// Solves m x = b; returns nullopt when b is not in the column space.
template <Field K>
std::optional<Vec<K>> solve(const SparseMatrix<K>& m, const Vec<K>& b) {
    const auto counts = detail::row_counts(m);
    struct Pivot {
        std::size_t row;
        Vec<K> col;
        Vec<K> tracker;
    };
    std::vector<Pivot> pivots;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Vec<K> v = m.column(j);
        Vec<K> t = Vec<K>::unit(j);
        for (auto& p : pivots) {
            K c = v.get(p.row);
            if (c.is_zero()) continue;
            v.axpy(-c, p.col);
            t.axpy(-c, p.tracker);
        }
        if (v.is_zero()) continue;
        std::size_t row = detail::choose_pivot_row(v, counts);
        K inv = K(1) / v.get(row);
        pivots.push_back({row, v.scaled(inv), t.scaled(inv)});
    }
    Vec<K> r = b;
    Vec<K> x;
    for (auto& p : pivots) {
        K c = r.get(p.row);
        if (c.is_zero()) continue;
        r.axpy(-c, p.col);
        x.axpy(c, p.tracker);
    }
    if (!r.is_zero()) return std::nullopt;
    return x;
}

}  // namespace kdual
