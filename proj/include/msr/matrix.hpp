#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "msr/galois.hpp"

namespace msr {

/// Dense row-major matrix over a GaloisField.
class Matrix {
public:
    Matrix(FieldRef field, std::size_t rows, std::size_t cols);
    Matrix(FieldRef field, std::size_t rows, std::size_t cols, std::vector<Symbol> elements);

    static Matrix identity(FieldRef field, std::size_t n);
    static Matrix from_rows(FieldRef field, const std::vector<std::vector<Symbol>>& rows);
    /// k x 1 matrix holding `values`.
    static Matrix column_vector(FieldRef field, std::span<const Symbol> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    const FieldRef& field() const { return field_; }
    const GaloisField& gf() const { return *field_; }

    Symbol operator()(std::size_t r, std::size_t c) const { return elements_[r * cols_ + c]; }
    Symbol& operator()(std::size_t r, std::size_t c) { return elements_[r * cols_ + c]; }
    Element at(std::size_t r, std::size_t c) const;

    std::span<const Symbol> data() const { return elements_; }
    std::span<const Symbol> row(std::size_t r) const;
    std::vector<Symbol> column(std::size_t c) const;

    Matrix transpose() const;
    Matrix scaled(Symbol c) const;
    Matrix submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    FieldRef field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Symbol> elements_;
};

enum class MatOp { Mul, Add, Transpose, ScalarMul };

/// Single entry point for the basic matrix operations. `b` is ignored for
/// Transpose and ScalarMul; `scalar` is used only by ScalarMul.
Matrix mat_ops(const Matrix& a, const Matrix& b, MatOp op, Symbol scalar = 0);

/// Inner product of two equal-length vectors.
Symbol dot(const GaloisField& field, std::span<const Symbol> a, std::span<const Symbol> b);

/// Gauss-Jordan inverse. Throws SingularMatrix.
Matrix invert(const Matrix& a);

/// Solves a * result = rhs for square nonsingular a. Throws SingularMatrix.
Matrix solve(const Matrix& a, const Matrix& rhs);

Symbol determinant(const Matrix& a);
std::size_t rank(const Matrix& a);

/// Generators of a Cauchy matrix P[i][j] = (a_i - b_j)^-1.
struct CauchySpec {
    FieldRef field;
    std::vector<Symbol> a;
    std::vector<Symbol> b;
};

Matrix cauchy(const CauchySpec& spec);
/// Inverse of cauchy(spec) from the closed-form product formula (no elimination).
Matrix cauchy_inverse(const CauchySpec& spec);

/// A square submatrix, by its row and column indices (0-based, ascending).
struct Minor {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

inline constexpr std::size_t kSuperRegularMaxOrder = 8;

/// First singular square submatrix in order of increasing size, or nullopt
/// if the matrix is super-regular. Throws TooLarge above 8x8.
std::optional<Minor> find_singular_minor(const Matrix& a);
bool is_super_regular(const Matrix& a);

} // namespace msr
