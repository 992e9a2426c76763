#pragma once

// Exact linear algebra over prime fields and the rationals.
//
// Columns are processed left to right and each pivot is the topmost nonzero entry of
// its column below the rows already used. Rref, particular solutions and kernel bases
// are therefore deterministic functions of the input.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obstruct/errors.hpp"
#include "obstruct/field.hpp"

namespace obstruct {

template <class F> class Matrix {
  public:
    using Elem = typename F::Elem;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

    Matrix(F field, std::vector<std::vector<Elem>> const& grid) : field_(field) {
        rows_ = grid.size();
        cols_ = rows_ ? grid[0].size() : 0;
        data_.reserve(rows_ * cols_);
        for (auto const& row : grid) {
            if (row.size() != cols_)
                throw InvalidInput("ragged matrix rows");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(F field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = field.one();
        return m;
    }

    F const& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Elem const& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Elem const> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<Elem> column(std::size_t c) const {
        std::vector<Elem> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            out[r] = (*this)(r, c);
        return out;
    }

    bool is_zero() const {
        for (auto const& e : data_)
            if (!field_.is_zero(e))
                return false;
        return true;
    }

    bool operator==(Matrix const& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    std::vector<Elem> apply(std::span<Elem const> v) const {
        if (v.size() != cols_)
            throw InvalidInput("matrix-vector dimension mismatch");
        std::vector<Elem> out(rows_, field_.zero());
        for (std::size_t c = 0; c < cols_; ++c) {
            if (field_.is_zero(v[c]))
                continue;
            for (std::size_t r = 0; r < rows_; ++r) {
                auto const& a = (*this)(r, c);
                if (!field_.is_zero(a))
                    out[r] = field_.add(out[r], field_.mul(a, v[c]));
            }
        }
        return out;
    }

    Matrix operator*(Matrix const& o) const {
        if (cols_ != o.rows_)
            throw InvalidInput("matrix product dimension mismatch");
        Matrix out(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                auto const& a = (*this)(i, k);
                if (field_.is_zero(a))
                    continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (!field_.is_zero(o(k, j)))
                        out(i, j) = field_.add(out(i, j), field_.mul(a, o(k, j)));
            }
        return out;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(a, c), (*this)(b, c));
    }

  private:
    F field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Elem> data_;
};

template <class F> struct RrefResult {
    Matrix<F> reduced;
    std::vector<std::size_t> pivots;
};

namespace detail {

/// In-place reduction; the first `pivot_cols` columns are eligible for pivots,
/// the remaining columns are carried along (augmentation).
template <class F> std::vector<std::size_t> rref_in_place(Matrix<F>& m, std::size_t pivot_cols) {
    auto const& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_cols && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && f.is_zero(m(p, c)))
            ++p;
        if (p == m.rows())
            continue;
        m.swap_rows(r, p);
        auto inv = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j)
            m(r, j) = f.mul(m(r, j), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || f.is_zero(m(i, c)))
                continue;
            auto factor = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!f.is_zero(m(r, j)))
                    m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

template <class F> RrefResult<F> rref(Matrix<F> a) {
    auto pivots = detail::rref_in_place(a, a.cols());
    return {std::move(a), std::move(pivots)};
}

template <class F> std::size_t rank(Matrix<F> const& a) { return rref(a).pivots.size(); }

/// Kernel basis read off the rref: one vector per free column, with a 1 in that column.
template <class F> std::vector<std::vector<typename F::Elem>> kernel_basis(Matrix<F> const& a) {
    auto [r, pivots] = rref(a);
    auto const& f = a.field();
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<std::vector<typename F::Elem>> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free])
            continue;
        std::vector<typename F::Elem> v(a.cols(), f.zero());
        v[free] = f.one();
        for (std::size_t k = 0; k < pivots.size(); ++k)
            v[pivots[k]] = f.neg(r(k, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class F> struct Solution {
    std::vector<typename F::Elem> particular;
    std::vector<std::vector<typename F::Elem>> kernel;
};

/// Solves A x = b. Returns nullopt exactly when the system is inconsistent. The particular
/// solution sets every free variable to zero.
template <class F>
std::optional<Solution<F>> solve(Matrix<F> const& a, std::span<typename F::Elem const> b) {
    if (b.size() != a.rows())
        throw InvalidInput("solve: right-hand side has length " + std::to_string(b.size()) +
                           ", expected " + std::to_string(a.rows()));
    auto const& f = a.field();
    Matrix<F> aug(f, a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto pivots = detail::rref_in_place(aug, a.cols());
    for (std::size_t i = pivots.size(); i < a.rows(); ++i)
        if (!f.is_zero(aug(i, a.cols())))
            return std::nullopt;
    Solution<F> sol;
    sol.particular.assign(a.cols(), f.zero());
    for (std::size_t k = 0; k < pivots.size(); ++k)
        sol.particular[pivots[k]] = aug(k, a.cols());
    sol.kernel = kernel_basis(a);
    return sol;
}

template <class F>
std::optional<Solution<F>> solve(Matrix<F> const& a, std::vector<typename F::Elem> const& b) {
    return solve(a, std::span<typename F::Elem const>(b));
}

/// A factorisation E A = R (R in rref) reused for many right-hand sides.
template <class F> class LinearSolver {
  public:
    using Elem = typename F::Elem;

    explicit LinearSolver(Matrix<F> const& a)
        : field_(a.field()), rows_(a.rows()), cols_(a.cols()), reduced_(a.field(), 0, 0),
          transform_(a.field(), 0, 0) {
        Matrix<F> aug(field_, rows_, cols_ + rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j)
                aug(i, j) = a(i, j);
            aug(i, cols_ + i) = field_.one();
        }
        pivots_ = detail::rref_in_place(aug, cols_);
        reduced_ = Matrix<F>(field_, rows_, cols_);
        transform_ = Matrix<F>(field_, rows_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j)
                reduced_(i, j) = aug(i, j);
            for (std::size_t j = 0; j < rows_; ++j)
                transform_(i, j) = aug(i, cols_ + j);
        }
    }

    std::size_t rank() const { return pivots_.size(); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t> const& pivots() const { return pivots_; }

    bool in_image(std::span<Elem const> b) const {
        auto y = transform_.apply(b);
        for (std::size_t i = pivots_.size(); i < rows_; ++i)
            if (!field_.is_zero(y[i]))
                return false;
        return true;
    }

    /// Canonical particular solution (free variables zero), or nullopt if b is not in the image.
    std::optional<std::vector<Elem>> solve(std::span<Elem const> b) const {
        if (b.size() != rows_)
            throw InvalidInput("LinearSolver::solve: dimension mismatch");
        auto y = transform_.apply(b);
        for (std::size_t i = pivots_.size(); i < rows_; ++i)
            if (!field_.is_zero(y[i]))
                return std::nullopt;
        std::vector<Elem> x(cols_, field_.zero());
        for (std::size_t k = 0; k < pivots_.size(); ++k)
            x[pivots_[k]] = y[k];
        return x;
    }
    std::optional<std::vector<Elem>> solve(std::vector<Elem> const& b) const {
        return solve(std::span<Elem const>(b));
    }

  private:
    F field_;
    std::size_t rows_, cols_;
    std::vector<std::size_t> pivots_;
    Matrix<F> reduced_;
    Matrix<F> transform_;
};

using FpMatrix = Matrix<PrimeField>;
using QMatrix = Matrix<RationalField>;
using Vec = std::vector<PrimeField::Elem>;

/// Sparse row over F_p: (column, coefficient) pairs sorted by column, no zeros.
using SparseRow = std::vector<std::pair<std::size_t, PrimeField::Elem>>;

/// Incremental sparse elimination over F_p for the large, very sparse systems that arise
/// from windowed cochain problems. Rows may be added in any order.
class SparseSystem {
  public:
    SparseSystem(PrimeField field, std::size_t cols) : field_(field), cols_(cols) {}

    /// Adds the equation row . x = rhs. Entries need not be sorted or merged.
    void add_equation(SparseRow row, PrimeField::Elem rhs);

    struct Result {
        bool consistent = true;
        std::size_t rows = 0;
        std::size_t cols = 0;
        std::size_t rank = 0;
        /// Dense solution with free variables zero; empty when inconsistent.
        Vec solution;
    };

    Result solve() const;

    std::size_t rows() const { return rows_added_; }
    std::size_t cols() const { return cols_; }

  private:
    struct Pivot {
        SparseRow row; // leading entry normalised to 1
        PrimeField::Elem rhs;
    };
    PrimeField field_;
    std::size_t cols_;
    std::size_t rows_added_ = 0;
    bool consistent_ = true;
    std::vector<std::ptrdiff_t> pivot_of_col_;
    std::vector<Pivot> pivots_;
};

} // namespace obstruct
