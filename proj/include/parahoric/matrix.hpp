#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/rational.hpp"

namespace parahoric {

// Dense matrix over an exact scalar ring K. K must provide +, -, *, ==,
// ring_zero/ring_one/is_zero/divexact customization points; the elimination
// routines additionally require K to be a field (operator/). Scalars carry
// runtime ring parameters, so every matrix keeps a zero exemplar.
template <typename K>
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, const K& exemplar)
        : rows_(rows), cols_(cols), zero_(ring_zero(exemplar)), data_(rows * cols, ring_zero(exemplar)) {}

    static Matrix identity(std::size_t n, const K& exemplar) {
        Matrix m(n, n, exemplar);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring_one(exemplar);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<K>>& rows) {
        if (rows.empty() || rows[0].empty()) throw ShapeError("matrix needs at least one entry");
        Matrix m(rows.size(), rows[0].size(), rows[0][0]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw ShapeError("ragged matrix rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const K& zero() const { return zero_; }

    K& at(std::size_t i, std::size_t j) {
        if (i >= rows_ || j >= cols_) throw ShapeError("matrix index out of range");
        return data_[i * cols_ + j];
    }
    const K& at(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) throw ShapeError("matrix index out of range");
        return data_[i * cols_ + j];
    }

    bool operator==(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (std::size_t i = 0; i < data_.size(); ++i)
            if (!(data_[i] == o.data_[i])) return false;
        return true;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] + o.data_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] - o.data_[i];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw ShapeError("matrix product shape mismatch");
        Matrix r(rows_, o.cols_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const K& a = at(i, k);
                if (is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + a * o.at(k, j);
            }
        return r;
    }
    Matrix scaled(const K& c) const {
        Matrix r = *this;
        for (auto& x : r.data_) x = x * c;
        return r;
    }
    Matrix transpose() const {
        Matrix r(cols_, rows_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Matrix pow(long e) const {
        if (rows_ != cols_) throw ShapeError("power of non-square matrix");
        if (e < 0) return inverse().pow(-e);
        Matrix acc = identity(rows_, zero_), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    bool is_zero_matrix() const {
        for (const auto& x : data_)
            if (!is_zero(x)) return false;
        return true;
    }

    // Row-reduce in place to reduced row echelon form (field scalars only).
    // Returns the pivot column indices.
    std::vector<std::size_t> rref_in_place() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && is_zero(at(sel, col))) ++sel;
            if (sel == rows_) continue;
            swap_rows(sel, row);
            K inv = ring_one(zero_) / at(row, col);
            for (std::size_t j = col; j < cols_; ++j) at(row, j) = at(row, j) * inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == row || is_zero(at(i, col))) continue;
                K f = at(i, col);
                for (std::size_t j = col; j < cols_; ++j)
                    at(i, j) = at(i, j) - f * at(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        Matrix m = *this;
        return m.rref_in_place().size();
    }

    Matrix inverse() const {
        if (rows_ != cols_) throw ShapeError("inverse of non-square matrix");
        Matrix aug(rows_, 2 * cols_, zero_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = ring_one(zero_);
        }
        auto piv = aug.rref_in_place();
        if (piv.size() != rows_ || piv.back() >= cols_)
            throw UnitError("matrix is singular");
        Matrix r(rows_, cols_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = aug.at(i, cols_ + j);
        return r;
    }

    // Solve A X = B for X (A square invertible).
    Matrix solve(const Matrix& b) const {
        if (rows_ != cols_ || b.rows_ != rows_) throw ShapeError("solve shape mismatch");
        Matrix aug(rows_, cols_ + b.cols_, zero_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) aug.at(i, cols_ + j) = b.at(i, j);
        }
        auto piv = aug.rref_in_place();
        if (piv.size() != rows_ || piv.back() >= cols_)
            throw UnitError("singular system");
        Matrix x(cols_, b.cols_, zero_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) x.at(i, j) = aug.at(i, cols_ + j);
        return x;
    }

    // Basis of the right kernel, one matrix column per basis vector.
    Matrix nullspace() const {
        Matrix m = *this;
        auto piv = m.rref_in_place();
        std::vector<std::size_t> free_cols;
        {
            std::size_t pi = 0;
            for (std::size_t c = 0; c < cols_; ++c) {
                if (pi < piv.size() && piv[pi] == c) { ++pi; continue; }
                free_cols.push_back(c);
            }
        }
        Matrix basis(cols_, free_cols.size(), zero_);
        for (std::size_t k = 0; k < free_cols.size(); ++k) {
            std::size_t fc = free_cols[k];
            basis.at(fc, k) = ring_one(zero_);
            for (std::size_t pi = 0; pi < piv.size(); ++pi)
                basis.at(piv[pi], k) = -m.at(pi, fc);
        }
        return basis;
    }

    // Columns of *this indexed by the pivot columns of its RREF: a basis of
    // the column space.
    Matrix column_space_basis() const {
        Matrix m = *this;
        auto piv = m.rref_in_place();
        Matrix basis(rows_, piv.size(), zero_);
        for (std::size_t k = 0; k < piv.size(); ++k)
            for (std::size_t i = 0; i < rows_; ++i) basis.at(i, k) = at(i, piv[k]);
        return basis;
    }

    // Fraction-free determinant (Bareiss). Requires only exact division in
    // K, so it also serves polynomial coefficient rings.
    K det() const {
        if (rows_ != cols_) throw ShapeError("determinant of non-square matrix");
        if (rows_ == 0) return ring_one(zero_);
        Matrix m = *this;
        K prev = ring_one(zero_);
        bool negate = false;
        for (std::size_t k = 0; k + 1 < rows_; ++k) {
            std::size_t sel = k;
            while (sel < rows_ && is_zero(m.at(sel, k))) ++sel;
            if (sel == rows_) return zero_;
            if (sel != k) { m.swap_rows(sel, k); negate = !negate; }
            for (std::size_t i = k + 1; i < rows_; ++i)
                for (std::size_t j = k + 1; j < cols_; ++j)
                    m.at(i, j) = divexact(m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j), prev);
            prev = m.at(k, k);
        }
        K d = m.at(rows_ - 1, rows_ - 1);
        if (negate) d = -d;
        return d;
    }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ",[" : "[";
            for (std::size_t j = 0; j < cols_; ++j)
                s += (j ? "," : "") + scalar_str(at(i, j));
            s += "]";
        }
        return s + "]";
    }

private:
    void same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix shape mismatch");
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    std::size_t rows_, cols_;
    K zero_;
    std::vector<K> data_;
};

} // namespace parahoric
