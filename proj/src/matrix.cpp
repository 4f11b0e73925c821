#include "msr/matrix.hpp"

#include <algorithm>
#include <set>

namespace msr {

namespace {

void require_compatible(const Matrix& a, const Matrix& b)
{
    require_same_field(a.gf(), b.gf());
}

std::string dims(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Reduces `work` in place to reduced row echelon form, mirroring every row
// operation onto `aug` when given. Returns the rank.
std::size_t eliminate(Matrix& work, Matrix* aug)
{
    const GaloisField& f = work.gf();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < work.cols() && pivot_row < work.rows(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < work.rows() && work(sel, col) == 0) {
            ++sel;
        }
        if (sel == work.rows()) {
            continue;
        }
        if (sel != pivot_row) {
            for (std::size_t c = 0; c < work.cols(); ++c) {
                std::swap(work(sel, c), work(pivot_row, c));
            }
            if (aug) {
                for (std::size_t c = 0; c < aug->cols(); ++c) {
                    std::swap((*aug)(sel, c), (*aug)(pivot_row, c));
                }
            }
        }
        const Symbol scale = f.inv(work(pivot_row, col));
        for (std::size_t c = 0; c < work.cols(); ++c) {
            work(pivot_row, c) = f.mul(work(pivot_row, c), scale);
        }
        if (aug) {
            for (std::size_t c = 0; c < aug->cols(); ++c) {
                (*aug)(pivot_row, c) = f.mul((*aug)(pivot_row, c), scale);
            }
        }
        for (std::size_t r = 0; r < work.rows(); ++r) {
            const Symbol factor = work(r, col);
            if (r == pivot_row || factor == 0) {
                continue;
            }
            for (std::size_t c = 0; c < work.cols(); ++c) {
                work(r, c) = f.sub(work(r, c), f.mul(factor, work(pivot_row, c)));
            }
            if (aug) {
                for (std::size_t c = 0; c < aug->cols(); ++c) {
                    (*aug)(r, c) = f.sub((*aug)(r, c), f.mul(factor, (*aug)(pivot_row, c)));
                }
            }
        }
        ++pivot_row;
    }
    return pivot_row;
}

void require_cauchy_spec(const CauchySpec& spec)
{
    if (!spec.field) {
        fail(ErrorCode::InvalidArgument, "Cauchy spec without a field");
    }
    if (spec.a.size() != spec.b.size() || spec.a.empty()) {
        fail(ErrorCode::DimensionMismatch, "Cauchy generators must be two nonempty lists of equal length");
    }
    std::set<Symbol> seen;
    for (const auto* list : {&spec.a, &spec.b}) {
        for (Symbol s : *list) {
            if (!spec.field->contains(s)) {
                fail(ErrorCode::InvalidArgument, "Cauchy generator outside the field");
            }
            if (!seen.insert(s).second) {
                fail(ErrorCode::DuplicateGenerators,
                     "Cauchy generator " + spec.field->format(s) + " appears more than once");
            }
        }
    }
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n)
{
    const std::size_t s = idx.size();
    std::size_t i = s;
    while (i > 0) {
        --i;
        if (idx[i] != i + n - s) {
            ++idx[i];
            for (std::size_t j = i + 1; j < s; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

} // namespace

Matrix::Matrix(FieldRef field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), elements_(rows * cols, 0)
{
    if (!field_) {
        fail(ErrorCode::InvalidArgument, "matrix without a field");
    }
}

Matrix::Matrix(FieldRef field, std::size_t rows, std::size_t cols, std::vector<Symbol> elements)
    : field_(std::move(field)), rows_(rows), cols_(cols), elements_(std::move(elements))
{
    if (!field_) {
        fail(ErrorCode::InvalidArgument, "matrix without a field");
    }
    if (elements_.size() != rows * cols) {
        fail(ErrorCode::DimensionMismatch, "element count does not match " + std::to_string(rows) +
                                               "x" + std::to_string(cols));
    }
    for (Symbol s : elements_) {
        if (!field_->contains(s)) {
            fail(ErrorCode::InvalidArgument, "matrix entry outside the field");
        }
    }
}

Matrix Matrix::identity(FieldRef field, std::size_t n)
{
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

Matrix Matrix::from_rows(FieldRef field, const std::vector<std::vector<Symbol>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<Symbol> flat;
    flat.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) {
            fail(ErrorCode::DimensionMismatch, "ragged matrix rows");
        }
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return Matrix(std::move(field), rows.size(), cols, std::move(flat));
}

Matrix Matrix::column_vector(FieldRef field, std::span<const Symbol> values)
{
    return Matrix(std::move(field), values.size(), 1, std::vector<Symbol>(values.begin(), values.end()));
}

Element Matrix::at(std::size_t r, std::size_t c) const
{
    if (r >= rows_ || c >= cols_) {
        fail(ErrorCode::IndexOutOfRange, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                             ") outside " + dims(*this));
    }
    return Element(field_, (*this)(r, c));
}

std::span<const Symbol> Matrix::row(std::size_t r) const
{
    if (r >= rows_) {
        fail(ErrorCode::IndexOutOfRange, "row " + std::to_string(r) + " outside " + dims(*this));
    }
    return std::span<const Symbol>(elements_).subspan(r * cols_, cols_);
}

std::vector<Symbol> Matrix::column(std::size_t c) const
{
    if (c >= cols_) {
        fail(ErrorCode::IndexOutOfRange, "column " + std::to_string(c) + " outside " + dims(*this));
    }
    std::vector<Symbol> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

Matrix Matrix::transpose() const
{
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

Matrix Matrix::scaled(Symbol c) const
{
    if (!field_->contains(c)) {
        fail(ErrorCode::InvalidArgument, "scalar outside the field");
    }
    Matrix out(*this);
    for (Symbol& s : out.elements_) {
        s = field_->mul(s, c);
    }
    return out;
}

Matrix Matrix::submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const
{
    Matrix out(field_, row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        for (std::size_t j = 0; j < col_idx.size(); ++j) {
            if (row_idx[i] >= rows_ || col_idx[j] >= cols_) {
                fail(ErrorCode::IndexOutOfRange, "submatrix index outside " + dims(*this));
            }
            out(i, j) = (*this)(row_idx[i], col_idx[j]);
        }
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    require_compatible(a, b);
    if (a.cols() != b.rows()) {
        fail(ErrorCode::DimensionMismatch, "cannot multiply " + dims(a) + " by " + dims(b));
    }
    const GaloisField& f = a.gf();
    Matrix out(a.field(), a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t m = 0; m < a.cols(); ++m) {
            const Symbol coef = a(r, m);
            if (coef == 0) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) ^= f.mul(coef, b(m, c));
            }
        }
    }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b)
{
    require_compatible(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorCode::DimensionMismatch, "cannot add " + dims(a) + " and " + dims(b));
    }
    Matrix out(a);
    for (std::size_t i = 0; i < out.elements_.size(); ++i) {
        out.elements_[i] = a.gf().add(a.elements_[i], b.elements_[i]);
    }
    return out;
}

bool operator==(const Matrix& a, const Matrix& b)
{
    return a.gf().same_as(b.gf()) && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.elements_ == b.elements_;
}

Matrix mat_ops(const Matrix& a, const Matrix& b, MatOp op, Symbol scalar)
{
    switch (op) {
    case MatOp::Mul: return a * b;
    case MatOp::Add: return a + b;
    case MatOp::Transpose: return a.transpose();
    case MatOp::ScalarMul: return a.scaled(scalar);
    }
    fail(ErrorCode::InvalidArgument, "unknown matrix operation");
}

Symbol dot(const GaloisField& field, std::span<const Symbol> a, std::span<const Symbol> b)
{
    if (a.size() != b.size()) {
        fail(ErrorCode::DimensionMismatch, "inner product of vectors with different lengths");
    }
    Symbol acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc ^= field.mul(a[i], b[i]);
    }
    return acc;
}

Matrix invert(const Matrix& a)
{
    if (!a.is_square()) {
        fail(ErrorCode::DimensionMismatch, "cannot invert non-square " + dims(a));
    }
    return solve(a, Matrix::identity(a.field(), a.rows()));
}

Matrix solve(const Matrix& a, const Matrix& rhs)
{
    require_compatible(a, rhs);
    if (!a.is_square()) {
        fail(ErrorCode::DimensionMismatch, "system matrix " + dims(a) + " is not square");
    }
    if (rhs.rows() != a.rows()) {
        fail(ErrorCode::DimensionMismatch, "right-hand side " + dims(rhs) + " does not match " + dims(a));
    }
    Matrix work(a);
    Matrix out(rhs);
    if (eliminate(work, &out) != a.rows()) {
        fail(ErrorCode::SingularMatrix, "no pivot found during elimination of " + dims(a));
    }
    return out;
}

Symbol determinant(const Matrix& a)
{
    if (!a.is_square()) {
        fail(ErrorCode::DimensionMismatch, "determinant of non-square " + dims(a));
    }
    // Plain forward elimination; in characteristic 2 row swaps do not flip the sign.
    const GaloisField& f = a.gf();
    Matrix work(a);
    const std::size_t n = work.rows();
    Symbol det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && work(sel, col) == 0) {
            ++sel;
        }
        if (sel == n) {
            return 0;
        }
        if (sel != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(work(sel, c), work(col, c));
            }
        }
        const Symbol pivot = work(col, col);
        det = f.mul(det, pivot);
        const Symbol pivot_inv = f.inv(pivot);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Symbol factor = f.mul(work(r, col), pivot_inv);
            if (factor == 0) {
                continue;
            }
            for (std::size_t c = col; c < n; ++c) {
                work(r, c) = f.sub(work(r, c), f.mul(factor, work(col, c)));
            }
        }
    }
    return det;
}

std::size_t rank(const Matrix& a)
{
    Matrix work(a);
    return eliminate(work, nullptr);
}

Matrix cauchy(const CauchySpec& spec)
{
    require_cauchy_spec(spec);
    const GaloisField& f = *spec.field;
    const std::size_t k = spec.a.size();
    Matrix p(spec.field, k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            p(i, j) = f.inv(f.sub(spec.a[i], spec.b[j]));
        }
    }
    return p;
}

Matrix cauchy_inverse(const CauchySpec& spec)
{
    require_cauchy_spec(spec);
    const GaloisField& f = *spec.field;
    const auto& a = spec.a;
    const auto& b = spec.b;
    const std::size_t k = a.size();
    Matrix q(spec.field, k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            Symbol ba = 1; // prod_{l != i} (b_j - a_l)
            Symbol aa = 1; // prod_{l != i} (a_i - a_l)
            Symbol ab = 1; // prod_{l != j} (a_i - b_l)
            Symbol bb = 1; // prod_{l != j} (b_j - b_l)
            for (std::size_t l = 0; l < k; ++l) {
                if (l != i) {
                    ba = f.mul(ba, f.sub(b[j], a[l]));
                    aa = f.mul(aa, f.sub(a[i], a[l]));
                }
                if (l != j) {
                    ab = f.mul(ab, f.sub(a[i], b[l]));
                    bb = f.mul(bb, f.sub(b[j], b[l]));
                }
            }
            const Symbol entry = f.mul(f.sub(a[i], b[j]), f.div(f.mul(ba, ab), f.mul(aa, bb)));
            q(j, i) = entry;
        }
    }
    return q;
}

std::optional<Minor> find_singular_minor(const Matrix& a)
{
    if (a.rows() > kSuperRegularMaxOrder || a.cols() > kSuperRegularMaxOrder) {
        fail(ErrorCode::TooLarge, "super-regularity check is capped at " +
                                      std::to_string(kSuperRegularMaxOrder) + "x" +
                                      std::to_string(kSuperRegularMaxOrder) + ", got " + dims(a));
    }
    const std::size_t max_order = std::min(a.rows(), a.cols());
    for (std::size_t s = 1; s <= max_order; ++s) {
        std::vector<std::size_t> rows(s);
        for (std::size_t i = 0; i < s; ++i) {
            rows[i] = i;
        }
        do {
            std::vector<std::size_t> cols(s);
            for (std::size_t i = 0; i < s; ++i) {
                cols[i] = i;
            }
            do {
                if (determinant(a.submatrix(rows, cols)) == 0) {
                    return Minor{rows, cols};
                }
            } while (next_combination(cols, a.cols()));
        } while (next_combination(rows, a.rows()));
    }
    return std::nullopt;
}

bool is_super_regular(const Matrix& a)
{
    return !find_singular_minor(a).has_value();
}

} // namespace msr
