#ifndef TKA_MATRIX_HPP
#define TKA_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tka/expr.hpp"

namespace tka {

// Carrier of an idempotent semiring with star. Instances supply 0, 1, +, x
// and * through this traits template; the natural order a <= b iff a+b=b is
// decidable only where equality is.
template <typename T>
struct SemiringTraits;

// Boolean Kleene algebra.
struct BoolW {
    bool v = false;
    bool operator==(const BoolW&) const = default;
};

template <>
struct SemiringTraits<BoolW> {
    static BoolW zero_like(const BoolW&) { return BoolW{false}; }
    static BoolW one_like(const BoolW&) { return BoolW{true}; }
    static BoolW add(const BoolW& a, const BoolW& b) { return BoolW{a.v || b.v}; }
    static BoolW mul(const BoolW& a, const BoolW& b) { return BoolW{a.v && b.v}; }
    static BoolW star(const BoolW&) { return BoolW{true}; }
};

// Symbolic expressions form the R(X*) (x) C_m' instance.
template <>
struct SemiringTraits<ExprRef> {
    static ExprRef zero_like(ExprRef) { return ex_zero(); }
    static ExprRef one_like(ExprRef) { return ex_one(); }
    static ExprRef add(ExprRef a, ExprRef b) { return ex_sum2(a, b); }
    static ExprRef mul(ExprRef a, ExprRef b) { return ex_prod2(a, b); }
    static ExprRef star(ExprRef a) { return ex_star(a); }
};

template <typename T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix zeros(std::size_t rows, std::size_t cols, const T& exemplar) {
        return Matrix(rows, cols, SemiringTraits<T>::zero_like(exemplar));
    }
    static Matrix identity(std::size_t n, const T& exemplar) {
        Matrix m = zeros(n, n, exemplar);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = SemiringTraits<T>::one_like(exemplar);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

template <typename T>
Matrix<T> matrix_add(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix_add: shape mismatch");
    Matrix<T> r = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r.at(i, j) = SemiringTraits<T>::add(a.at(i, j), b.at(i, j));
    return r;
}

template <typename T>
Matrix<T> matrix_mul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix_mul: shape mismatch");
    if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0)
        throw std::invalid_argument("matrix_mul: empty dimension");
    Matrix<T> r = Matrix<T>::zeros(a.rows(), b.cols(), a.at(0, 0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j)
                r.at(i, j) = SemiringTraits<T>::add(
                    r.at(i, j), SemiringTraits<T>::mul(a.at(i, k), b.at(k, j)));
    return r;
}

namespace detail {

template <typename T>
Matrix<T> submatrix(const Matrix<T>& m, std::size_t r0, std::size_t r1, std::size_t c0,
                    std::size_t c1) {
    Matrix<T> s(r1 - r0, c1 - c0, m.at(0, 0));
    for (std::size_t i = r0; i < r1; ++i)
        for (std::size_t j = c0; j < c1; ++j) s.at(i - r0, j - c0) = m.at(i, j);
    return s;
}

}  // namespace detail

// Block-recursive iteration: M* for the split M = [[A,B],[C,D]] is assembled
// from F = A + B D* C as [[F*, F*BD*], [D*CF*, D*CF*BD* + D*]]. The split
// position is the first row by default; any split yields an equal result.
template <typename T>
Matrix<T> matrix_star_at(const Matrix<T>& m, std::size_t n1) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) throw std::invalid_argument("matrix_star: need square, n >= 1");
    if (n == 1) {
        Matrix<T> r = m;
        r.at(0, 0) = SemiringTraits<T>::star(m.at(0, 0));
        return r;
    }
    if (n1 == 0 || n1 >= n) throw std::invalid_argument("matrix_star: bad split");
    Matrix<T> a = detail::submatrix(m, 0, n1, 0, n1);
    Matrix<T> b = detail::submatrix(m, 0, n1, n1, n);
    Matrix<T> c = detail::submatrix(m, n1, n, 0, n1);
    Matrix<T> d = detail::submatrix(m, n1, n, n1, n);
    Matrix<T> ds = matrix_star_at(d, 1);
    Matrix<T> f = matrix_add(a, matrix_mul(matrix_mul(b, ds), c));
    Matrix<T> fs = matrix_star_at(f, 1);
    Matrix<T> fbd = matrix_mul(fs, matrix_mul(b, ds));
    Matrix<T> dcf = matrix_mul(ds, matrix_mul(c, fs));
    Matrix<T> br = matrix_add(matrix_mul(dcf, matrix_mul(b, ds)), ds);
    Matrix<T> r(n, n, m.at(0, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < n1 && j < n1)
                r.at(i, j) = fs.at(i, j);
            else if (i < n1)
                r.at(i, j) = fbd.at(i, j - n1);
            else if (j < n1)
                r.at(i, j) = dcf.at(i - n1, j);
            else
                r.at(i, j) = br.at(i - n1, j - n1);
        }
    return r;
}

template <typename T>
Matrix<T> matrix_star(const Matrix<T>& m) {
    return matrix_star_at(m, m.rows() > 1 ? 1 : m.rows());
}

// Finite automaton <S, A, F> over a Kleene algebra; S and F are 0/1 vectors.
template <typename T>
struct Automaton {
    std::vector<std::uint8_t> start;   // 1 x n
    Matrix<T> trans;                   // n x n
    std::vector<std::uint8_t> accept;  // n x 1
};

// L(A) = S A* F.
template <typename T>
T automaton_language(const Automaton<T>& aut) {
    const std::size_t n = aut.trans.rows();
    if (aut.start.size() != n || aut.accept.size() != n || aut.trans.cols() != n)
        throw std::invalid_argument("automaton_language: shape mismatch");
    if (n == 0) throw std::invalid_argument("automaton_language: empty automaton");
    using Tr = SemiringTraits<T>;
    Matrix<T> closure = matrix_star(aut.trans);
    T acc = Tr::zero_like(aut.trans.at(0, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (!aut.start[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (!aut.accept[j]) continue;
            acc = Tr::add(acc, closure.at(i, j));
        }
    }
    return acc;
}

}  // namespace tka

#endif
