#pragma once

// Small dense complex matrix/vector kit. Everything at desk scale; no BLAS.

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "coinwalk/errors.hpp"

namespace coinwalk {

using Complex = std::complex<double>;
using Vec = std::vector<Complex>;

class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Matrix operator*(const Matrix& rhs) const {
        assert(cols_ == rhs.rows_);
        Matrix m(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Complex a = (*this)(i, k);
                if (a == Complex{}) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) m(i, j) += a * rhs(k, j);
            }
        return m;
    }

    Vec apply(const Vec& v) const {
        assert(v.size() == cols_);
        Vec out(rows_, Complex{});
        for (std::size_t i = 0; i < rows_; ++i) {
            Complex acc{};
            for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
            out[i] = acc;
        }
        return out;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    Vec data_;
};

// max-norm of U†U - I
inline double unitarity_defect(const Matrix& u) {
    const Matrix g = u.adjoint() * u;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const Complex want = (i == j) ? Complex{1.0, 0.0} : Complex{};
            worst = std::max(worst, std::abs(g(i, j) - want));
        }
    return worst;
}

inline double vec_norm(const Vec& v) {
    double s = 0.0;
    for (const Complex& c : v) s += std::norm(c);
    return std::sqrt(s);
}

// conjugate-linear in the first argument
inline Complex vec_inner(const Vec& u, const Vec& v) {
    assert(u.size() == v.size());
    Complex acc{};
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

inline Vec vec_normalized(Vec v) {
    const double n = vec_norm(v);
    if (n < 1e-12) throw ZeroStateError("cannot normalize a zero vector");
    for (Complex& c : v) c /= n;
    return v;
}

inline double vec_fidelity_up_to_phase(const Vec& u, const Vec& v) {
    return std::norm(vec_inner(u, v));
}

inline double vec_max_diff(const Vec& u, const Vec& v) {
    assert(u.size() == v.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - v[i]));
    return worst;
}

} // namespace coinwalk
