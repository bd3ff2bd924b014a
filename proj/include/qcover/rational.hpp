#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qcover {

using Rational = mpq_class;

// Accepts "p", "p/q", or a decimal literal such as "-0.25" (read exactly).
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Dense row-major matrix over the rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    RationalMatrix transpose() const;
    RationalMatrix operator*(const RationalMatrix& rhs) const;
    RationalMatrix operator-(const RationalMatrix& rhs) const;
    bool operator==(const RationalMatrix& rhs) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

struct SpanSolution {
    bool in_span = false;
    // One coefficient per column; free columns get zero. Empty when not in span.
    std::vector<Rational> coefficients;
    // Columns carrying a pivot in the reduced echelon form: a basis of the column space.
    std::vector<std::size_t> pivot_columns;
    std::size_t rank = 0;
};

// Decides target in colspan(columns) by Gauss-Jordan elimination on [columns | target].
SpanSolution solve_in_span(const RationalMatrix& columns, const std::vector<Rational>& target);

// Exact inverse of a nonsingular square matrix. Throws ConsistencyError when singular.
RationalMatrix inverse(const RationalMatrix& m);

// I - B (B^T B)^{-1} B^T for B with linearly independent columns.
RationalMatrix complement_projector(const RationalMatrix& basis);

}  // namespace qcover
