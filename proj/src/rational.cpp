#include "qcover/rational.hpp"

#include <utility>

#include "qcover/errors.hpp"

namespace qcover {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw InvalidArgument("empty rational literal");

    const auto dot = s.find('.');
    const bool has_exponent = s.find_first_of("eE") != std::string::npos;
    if (has_exponent) throw InvalidArgument("exponent notation not accepted as an exact rational: " + s);
    try {
        if (dot == std::string::npos) {
            Rational q(s, 10);
            if (q.get_den() == 0) throw InvalidArgument("zero denominator in " + s);
            q.canonicalize();
            return q;
        }
        // Decimal: digits after the point become a power-of-ten denominator.
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        const std::size_t scale = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+") throw InvalidArgument("bad decimal " + s);
        if (digits.front() == '+') digits.erase(digits.begin());
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw InvalidArgument("not a rational literal: " + s);
    }
}

std::string to_string(const Rational& q) { return q.get_str(); }

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw InvalidArgument("matrix product shape mismatch");
    RationalMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(r, k);
            if (sgn(a) == 0) continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
        }
    return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidArgument("matrix difference shape mismatch");
    RationalMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

SpanSolution solve_in_span(const RationalMatrix& columns, const std::vector<Rational>& target) {
    const std::size_t rows = columns.rows();
    const std::size_t cols = columns.cols();
    if (target.size() != rows) throw InvalidArgument("target length does not match matrix rows");

    RationalMatrix aug(rows, cols + 1);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) aug(r, c) = columns(r, c);
        aug(r, cols) = target[r];
    }

    SpanSolution sol;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        std::size_t found = pivot_row;
        while (found < rows && sgn(aug(found, c)) == 0) ++found;
        if (found == rows) continue;
        if (found != pivot_row)
            for (std::size_t j = c; j <= cols; ++j) std::swap(aug(found, j), aug(pivot_row, j));

        const Rational inv = 1 / aug(pivot_row, c);
        for (std::size_t j = c; j <= cols; ++j) aug(pivot_row, j) *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pivot_row || sgn(aug(r, c)) == 0) continue;
            const Rational f = aug(r, c);
            for (std::size_t j = c; j <= cols; ++j) aug(r, j) -= f * aug(pivot_row, j);
        }
        sol.pivot_columns.push_back(c);
        ++pivot_row;
    }
    sol.rank = pivot_row;

    for (std::size_t r = sol.rank; r < rows; ++r)
        if (sgn(aug(r, cols)) != 0) return sol;

    sol.in_span = true;
    sol.coefficients.assign(cols, Rational(0));
    for (std::size_t i = 0; i < sol.pivot_columns.size(); ++i) sol.coefficients[sol.pivot_columns[i]] = aug(i, cols);
    return sol;
}

RationalMatrix inverse(const RationalMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw InvalidArgument("inverse of a non-square matrix");
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(a(p, c)) == 0) ++p;
        if (p == n) throw ConsistencyError("singular matrix in exact inverse");
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(p, j), a(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        const Rational s = 1 / a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) *= s;
            inv(c, j) *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || sgn(a(r, c)) == 0) continue;
            const Rational f = a(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

RationalMatrix complement_projector(const RationalMatrix& basis) {
    const std::size_t n = basis.rows();
    if (basis.cols() == 0) return RationalMatrix::identity(n);
    const RationalMatrix bt = basis.transpose();
    return RationalMatrix::identity(n) - basis * inverse(bt * basis) * bt;
}

}  // namespace qcover
