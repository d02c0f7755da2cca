#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "parcohom/integers.hpp"

namespace parcohom {

/// Dense row-major matrix over an exact scalar (Int or Rat). Vectors are
/// rows; group elements act on the right, so composite maps multiply left
/// to right in path order.
template <typename T>
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}
    Mat(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            assert(row.size() == cols_);
            for (const auto& x : row) a_.push_back(x);
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    bool operator==(const Mat&) const = default;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(i, c), (*this)(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap((*this)(r, i), (*this)(r, j));
    }

    std::vector<T> row(std::size_t i) const {
        std::vector<T> out(cols_);
        for (std::size_t c = 0; c < cols_; ++c) out[c] = (*this)(i, c);
        return out;
    }
    void set_row(std::size_t i, const std::vector<T>& v) {
        assert(v.size() == cols_);
        for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = v[c];
    }

    bool row_is_zero(std::size_t i) const {
        for (std::size_t c = 0; c < cols_; ++c)
            if ((*this)(i, c) != 0) return false;
        return true;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<T> a_;
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

template <typename T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
    assert(a.cols() == b.rows());
    Mat<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

template <typename T>
Mat<T> operator+(const Mat<T>& a, const Mat<T>& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    Mat<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

template <typename T>
Mat<T> operator-(const Mat<T>& a, const Mat<T>& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    Mat<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

template <typename T>
Mat<T> operator-(const Mat<T>& a) {
    Mat<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = -a(i, j);
    return c;
}

template <typename T>
Mat<T> transpose(const Mat<T>& a) {
    Mat<T> c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = a(i, j);
    return c;
}

template <typename T>
std::vector<T> operator*(const std::vector<T>& v, const Mat<T>& m) {
    assert(v.size() == m.rows());
    std::vector<T> out(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

inline RatMat to_rat(const IntMat& m) {
    RatMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rat(m(i, j));
    return out;
}

inline bool is_integral(const RatMat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_integer(m(i, j))) return false;
    return true;
}

inline IntMat to_int(const RatMat& m) {
    IntMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integer(m(i, j))) throw std::domain_error("to_int: non-integral entry");
            out(i, j) = numerator(m(i, j));
        }
    return out;
}

/// Fraction-free Bareiss determinant.
inline Int det(const IntMat& m) {
    assert(m.is_square());
    std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMat a = m;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            a.swap_rows(k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                a(i, j) = num / prev;  // exact by Bareiss
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

/// Inverse over Q; throws on singular input.
inline RatMat inverse(const RatMat& m) {
    assert(m.is_square());
    std::size_t n = m.rows();
    RatMat a = m;
    RatMat inv = RatMat::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) throw std::domain_error("inverse: singular matrix");
        a.swap_rows(col, piv);
        inv.swap_rows(col, piv);
        Rat d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            Rat f = a(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Integer inverse of a unimodular matrix; throws if det is not +-1.
inline IntMat unimodular_inverse(const IntMat& m) {
    RatMat inv = inverse(to_rat(m));
    if (!is_integral(inv)) throw std::domain_error("unimodular_inverse: det != +-1");
    return to_int(inv);
}

inline std::size_t rank_q(const IntMat& m) {
    if (m.empty()) return 0;
    RatMat a = to_rat(m);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
        std::size_t piv = rank;
        while (piv < a.rows() && a(piv, col) == 0) ++piv;
        if (piv == a.rows()) continue;
        a.swap_rows(rank, piv);
        Rat d = a(rank, col);
        for (std::size_t r = rank + 1; r < a.rows(); ++r) {
            if (a(r, col) == 0) continue;
            Rat f = a(r, col) / d;
            for (std::size_t j = col; j < a.cols(); ++j) a(r, j) -= f * a(rank, j);
        }
        ++rank;
    }
    return rank;
}

inline Int trace(const IntMat& m) {
    assert(m.is_square());
    Int t = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

/// Characteristic polynomial of an integer matrix, monic, coefficients of
/// x^n, x^{n-1}, ..., x^0 (Faddeev-LeVerrier).
inline std::vector<Int> charpoly(const IntMat& m) {
    assert(m.is_square());
    std::size_t n = m.rows();
    RatMat M = to_rat(m);
    std::vector<Rat> c{Rat(1)};
    RatMat Ak = RatMat::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        Ak = M * Ak;
        Rat tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += Ak(i, i);
        Rat ck = -tr / Rat(static_cast<long>(k));
        c.push_back(ck);
        for (std::size_t i = 0; i < n; ++i) Ak(i, i) += ck;
    }
    std::vector<Int> out;
    out.reserve(c.size());
    for (const Rat& x : c) {
        if (!is_integer(x)) throw std::logic_error("charpoly: non-integer coefficient");
        out.push_back(numerator(x));
    }
    return out;
}

}  // namespace parcohom
