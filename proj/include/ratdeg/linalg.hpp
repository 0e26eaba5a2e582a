// Dense matrices over a Field: just enough exact linear algebra for the
// zero-dimensional analysis (rank, kernels, products, powers).
#pragma once

#include <cstddef>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/field.hpp"

namespace ratdeg {

class Mat {
public:
    Mat() = default;
    Mat(Field f, std::size_t rows, std::size_t cols)
        : field_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, field_.zero()) {}

    static Mat identity(const Field& f, std::size_t n) {
        Mat m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f.one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    FieldElement& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const FieldElement& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw Error(Errc::arity_mismatch, "matrix product shape mismatch");
        Mat r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const FieldElement& aik = at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    r.at(i, j) = field_.add(r.at(i, j), field_.mul(aik, o.at(k, j)));
                }
            }
        }
        return r;
    }

    Mat operator-(const Mat& o) const {
        Mat r(field_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = field_.sub(a_[i], o.a_[i]);
        return r;
    }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    Mat pow(std::uint64_t e) const {
        Mat r = identity(field_, rows_);
        Mat base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    std::vector<FieldElement> apply(const std::vector<FieldElement>& v) const {
        std::vector<FieldElement> r(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero())
                    r[i] = field_.add(r[i], field_.mul(at(i, j), v[j]));
        return r;
    }

    // In-place row echelon reduction; returns rank, records pivot columns.
    std::size_t rref(std::vector<std::size_t>* pivot_cols = nullptr) {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t piv = rank;
            while (piv < rows_ && at(piv, col).is_zero()) ++piv;
            if (piv == rows_) continue;
            if (piv != rank)
                for (std::size_t j = 0; j < cols_; ++j) std::swap(at(piv, j), at(rank, j));
            FieldElement inv = field_.inv(at(rank, col));
            for (std::size_t j = col; j < cols_; ++j) at(rank, j) = field_.mul(at(rank, j), inv);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == rank || at(i, col).is_zero()) continue;
                FieldElement factor = at(i, col);
                for (std::size_t j = col; j < cols_; ++j)
                    at(i, j) = field_.sub(at(i, j), field_.mul(factor, at(rank, j)));
            }
            if (pivot_cols) pivot_cols->push_back(col);
            ++rank;
        }
        return rank;
    }

    std::size_t rank() const {
        Mat copy = *this;
        return copy.rref();
    }

    // Basis of the right kernel, one vector per non-pivot column.
    std::vector<std::vector<FieldElement>> kernel_basis() const {
        Mat red = *this;
        std::vector<std::size_t> pivots;
        red.rref(&pivots);
        std::vector<bool> is_pivot(cols_, false);
        for (auto c : pivots) is_pivot[c] = true;
        std::vector<std::vector<FieldElement>> basis;
        for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
            if (is_pivot[free_col]) continue;
            std::vector<FieldElement> v(cols_, field_.zero());
            v[free_col] = field_.one();
            for (std::size_t r = 0; r < pivots.size(); ++r) {
                v[pivots[r]] = field_.neg(red.at(r, free_col));
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // One solution of A x = b, or nullopt.
    std::optional<std::vector<FieldElement>> solve(const std::vector<FieldElement>& b) const {
        Mat aug(field_, rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[i];
        }
        std::vector<std::size_t> pivots;
        aug.rref(&pivots);
        for (const auto c : pivots)
            if (c == cols_) return std::nullopt;  // inconsistent
        std::vector<FieldElement> x(cols_, field_.zero());
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, cols_);
        return x;
    }

    // Columns stacked vertically (for joint kernels).
    static Mat vstack(const std::vector<Mat>& mats) {
        std::size_t rows = 0;
        for (const auto& m : mats) rows += m.rows();
        Mat r(mats.front().field(), rows, mats.front().cols());
        std::size_t off = 0;
        for (const auto& m : mats) {
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) r.at(off + i, j) = m.at(i, j);
            off += m.rows();
        }
        return r;
    }

private:
    Field field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElement> a_;
};

}  // namespace ratdeg
