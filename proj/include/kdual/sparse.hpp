#pragma once

/**
 * @file sparse.hpp
 * @brief Sparse vectors and column-stored sparse matrices over an exact field.
 */

#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kdual/field.hpp"

namespace kdual {

/// Finitely supported vector indexed by basis position. Zero entries are never stored.
template <Field K>
class Vec {
public:
    using map_type = std::map<std::size_t, K>;

    Vec() = default;
    Vec(std::initializer_list<std::pair<const std::size_t, K>> init) {
        for (auto& [i, k] : init) add(i, k);
    }
    static Vec unit(std::size_t i) {
        Vec v;
        v.add(i, K(1));
        return v;
    }

    void add(std::size_t i, const K& k) {
        if (k.is_zero()) return;
        auto [it, inserted] = entries_.try_emplace(i, k);
        if (!inserted) {
            it->second += k;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }
    /// this += a * x
    void axpy(const K& a, const Vec& x) {
        if (a.is_zero()) return;
        for (auto& [i, k] : x.entries_) add(i, a * k);
    }
    K get(std::size_t i) const {
        auto it = entries_.find(i);
        return it == entries_.end() ? K(0) : it->second;
    }
    void erase(std::size_t i) { entries_.erase(i); }

    bool is_zero() const { return entries_.empty(); }
    std::size_t nnz() const { return entries_.size(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    const map_type& entries() const { return entries_; }

    Vec scaled(const K& a) const {
        Vec r;
        r.axpy(a, *this);
        return r;
    }
    Vec operator+(const Vec& o) const {
        Vec r = *this;
        r.axpy(K(1), o);
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r = *this;
        r.axpy(K(-1), o);
        return r;
    }
    Vec operator-() const { return scaled(K(-1)); }
    Vec& operator+=(const Vec& o) {
        axpy(K(1), o);
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        axpy(K(-1), o);
        return *this;
    }
    bool operator==(const Vec& o) const { return entries_ == o.entries_; }

    /// Renders as "2*a + b" using the supplied basis labels.
    template <class Labeler>
    std::string format(Labeler&& label) const {
        if (entries_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [i, k] : entries_) {
            if (!first) os << " + ";
            first = false;
            if (!(k == K(1))) os << k.to_string() << "*";
            os << label(i);
        }
        return os.str();
    }

private:
    map_type entries_;
};

/// Matrix stored as a list of columns; column j is the image of basis vector j.
template <Field K>
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    static SparseMatrix from_columns(std::size_t rows, std::vector<Vec<K>> columns) {
        SparseMatrix m(rows, columns.size());
        m.data_ = std::move(columns);
        for (auto& c : m.data_)
            if (!c.is_zero() && c.entries().rbegin()->first >= rows)
                throw std::out_of_range("sparse matrix entry outside row bound");
        return m;
    }
    static SparseMatrix identity(std::size_t n) {
        SparseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, K(1));
        return m;
    }
    static SparseMatrix from_dense(const std::vector<std::vector<K>>& rows) {
        std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        SparseMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void set(std::size_t r, std::size_t c, const K& k) {
        check(r, c);
        ensure();
        data_[c].erase(r);
        data_[c].add(r, k);
    }
    void add(std::size_t r, std::size_t c, const K& k) {
        check(r, c);
        ensure();
        data_[c].add(r, k);
    }
    K get(std::size_t r, std::size_t c) const {
        check(r, c);
        return data_.empty() ? K(0) : data_[c].get(r);
    }
    const Vec<K>& column(std::size_t c) const {
        static const Vec<K> empty;
        return data_.empty() ? empty : data_.at(c);
    }
    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& c : data_) n += c.nnz();
        return n;
    }
    bool is_zero() const { return nnz() == 0; }

    Vec<K> apply(const Vec<K>& x) const {
        Vec<K> y;
        for (auto& [j, k] : x) {
            if (j >= cols_) throw std::out_of_range("vector longer than matrix");
            y.axpy(k, column(j));
        }
        return y;
    }
    /// this * other
    SparseMatrix operator*(const SparseMatrix& other) const {
        if (cols_ != other.rows_) throw std::invalid_argument("matrix shape mismatch in product");
        SparseMatrix r(rows_, other.cols_);
        r.ensure();
        for (std::size_t j = 0; j < other.cols_; ++j) r.data_[j] = apply(other.column(j));
        return r;
    }
    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (auto& [i, k] : column(j)) t.set(j, i, k);
        return t;
    }
    bool operator==(const SparseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t j = 0; j < cols_; ++j)
            if (!(column(j) == o.column(j))) return false;
        return true;
    }

private:
    void check(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("sparse matrix index out of bounds");
    }
    void ensure() {
        if (data_.size() != cols_) data_.resize(cols_);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Vec<K>> data_;
};

}  // namespace kdual
