#include "mbp/fp_linalg.hpp"

#include <algorithm>

namespace mbp::fp {

namespace {

bool is_prime(uint32_t n)
{
    if (n < 2)
        return false;
    for (uint32_t q = 2; uint64_t(q) * q <= n; ++q)
        if (n % q == 0)
            return false;
    return true;
}

// In-place RREF of m; returns pivot columns. Rows beyond the returned
// pivot count end up zero.
std::vector<size_t> rref_inplace(const Field& F, Matrix& m)
{
    std::vector<size_t> pivots;
    size_t lead = 0;
    for (size_t col = 0; col < m.cols && lead < m.rows; ++col) {
        size_t sel = lead;
        while (sel < m.rows && m.at(sel, col) == 0)
            ++sel;
        if (sel == m.rows)
            continue;
        if (sel != lead)
            for (size_t c = 0; c < m.cols; ++c)
                std::swap(m.at(sel, c), m.at(lead, c));
        Scalar pinv = F.inv(m.at(lead, col));
        for (size_t c = col; c < m.cols; ++c)
            m.at(lead, c) = F.mul(m.at(lead, c), pinv);
        for (size_t r = 0; r < m.rows; ++r) {
            if (r == lead)
                continue;
            Scalar f = m.at(r, col);
            if (f == 0)
                continue;
            for (size_t c = col; c < m.cols; ++c)
                m.at(r, c) = F.sub(m.at(r, c), F.mul(f, m.at(lead, c)));
        }
        pivots.push_back(col);
        ++lead;
    }
    return pivots;
}

Subspace subspace_from_rref(size_t ambient, Matrix m, size_t rank)
{
    Matrix basis(rank, ambient);
    std::copy(m.entries.begin(), m.entries.begin() + rank * ambient,
              basis.entries.begin());
    return Subspace{ambient, std::move(basis)};
}

}  // namespace

Field::Field(uint32_t p) : p_(p)
{
    if (!is_prime(p))
        throw std::invalid_argument("field modulus must be prime: " +
                                    std::to_string(p));
}

Scalar Field::inv(Scalar a) const
{
    if (a == 0)
        throw std::domain_error("inverse of zero in F_p");
    // extended Euclid
    int64_t t = 0, newt = 1, r = p_, newr = a;
    while (newr != 0) {
        int64_t q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    return reduce(t);
}

Matrix Matrix::identity(size_t n)
{
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

Matrix transpose(const Matrix& m)
{
    Matrix t(m.cols, m.rows);
    for (size_t r = 0; r < m.rows; ++r)
        for (size_t c = 0; c < m.cols; ++c)
            t.at(c, r) = m.at(r, c);
    return t;
}

Matrix mat_mul(const Field& F, const Matrix& a, const Matrix& b)
{
    if (a.cols != b.rows)
        throw dimension_mismatch("mat_mul: inner dimensions differ");
    Matrix out(a.rows, b.cols);
    for (size_t r = 0; r < a.rows; ++r)
        for (size_t k = 0; k < a.cols; ++k) {
            Scalar f = a.at(r, k);
            if (f == 0)
                continue;
            for (size_t c = 0; c < b.cols; ++c)
                out.at(r, c) =
                    F.add(out.at(r, c), F.mul(f, b.at(k, c)));
        }
    return out;
}

Vec mat_vec(const Field& F, const Matrix& m, const Vec& v)
{
    if (v.size() != m.cols)
        throw dimension_mismatch("mat_vec: length mismatch");
    Vec out(m.rows, 0);
    for (size_t r = 0; r < m.rows; ++r) {
        uint64_t acc = 0;
        for (size_t c = 0; c < m.cols; ++c)
            acc += uint64_t(m.at(r, c)) * v[c];
        out[r] = Scalar(acc % F.p());
    }
    return out;
}

std::pair<Matrix, std::vector<size_t>> rref(const Field& F, const Matrix& m)
{
    Matrix red = m;
    auto pivots = rref_inplace(F, red);
    return {std::move(red), std::move(pivots)};
}

Subspace Subspace::zero(size_t ambient_dim)
{
    return Subspace{ambient_dim, Matrix(0, ambient_dim)};
}

Subspace Subspace::full(size_t ambient_dim)
{
    return Subspace{ambient_dim, Matrix::identity(ambient_dim)};
}

Subspace Subspace::span(const Field& F, const Matrix& gens)
{
    Matrix red = gens;
    auto pivots = rref_inplace(F, red);
    return subspace_from_rref(gens.cols, std::move(red), pivots.size());
}

Subspace kernel_basis(const Field& F, const Matrix& m)
{
    auto [red, pivots] = rref(F, m);
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t c : pivots)
        is_pivot[c] = true;
    size_t nullity = m.cols - pivots.size();
    Matrix basis(nullity, m.cols);
    size_t row = 0;
    for (size_t c = 0; c < m.cols; ++c) {
        if (is_pivot[c])
            continue;
        basis.at(row, c) = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            basis.at(row, pivots[r]) = F.neg(red.at(r, c));
        ++row;
    }
    // Free columns ascending with unit free coordinates gives RREF up to
    // row order; normalize through span for the canonical representation.
    return Subspace::span(F, basis);
}

Subspace image_basis(const Field& F, const Matrix& m)
{
    return Subspace::span(F, transpose(m));
}

Subspace intersect(const Field& F, const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim != b.ambient_dim)
        throw dimension_mismatch("intersect: ambient dimensions differ");
    size_t n = a.ambient_dim;
    // Zassenhaus: RREF of [[A A],[B 0]]; rows with zero left half carry
    // the intersection in the right half.
    Matrix z(a.dim() + b.dim(), 2 * n);
    for (size_t r = 0; r < a.dim(); ++r)
        for (size_t c = 0; c < n; ++c) {
            z.at(r, c) = a.basis.at(r, c);
            z.at(r, n + c) = a.basis.at(r, c);
        }
    for (size_t r = 0; r < b.dim(); ++r)
        for (size_t c = 0; c < n; ++c)
            z.at(a.dim() + r, c) = b.basis.at(r, c);
    auto pivots = rref_inplace(F, z);
    Matrix gens(pivots.size(), n);
    size_t row = 0;
    for (size_t r = 0; r < pivots.size(); ++r) {
        bool left_zero = true;
        for (size_t c = 0; c < n; ++c)
            if (z.at(r, c) != 0) {
                left_zero = false;
                break;
            }
        if (!left_zero)
            continue;
        for (size_t c = 0; c < n; ++c)
            gens.at(row, c) = z.at(r, n + c);
        ++row;
    }
    gens.rows = row;
    gens.entries.resize(row * n);
    return Subspace::span(F, gens);
}

Subspace sum(const Field& F, const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim != b.ambient_dim)
        throw dimension_mismatch("sum: ambient dimensions differ");
    Matrix stacked(a.dim() + b.dim(), a.ambient_dim);
    std::copy(a.basis.entries.begin(), a.basis.entries.end(),
              stacked.entries.begin());
    std::copy(b.basis.entries.begin(), b.basis.entries.end(),
              stacked.entries.begin() + a.dim() * a.ambient_dim);
    return Subspace::span(F, stacked);
}

std::optional<Vec> solve(const Field& F, const Matrix& m, const Vec& target)
{
    if (target.size() != m.rows)
        throw dimension_mismatch("solve: target length != rows");
    Matrix aug(m.rows, m.cols + 1);
    for (size_t r = 0; r < m.rows; ++r) {
        for (size_t c = 0; c < m.cols; ++c)
            aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols) = target[r];
    }
    auto pivots = rref_inplace(F, aug);
    if (!pivots.empty() && pivots.back() == m.cols)
        return std::nullopt;  // pivot in the augmented column
    Vec x(m.cols, 0);
    for (size_t r = 0; r < pivots.size(); ++r)
        x[pivots[r]] = aug.at(r, m.cols);
    return x;
}

bool membership(const Field& F, const Subspace& s, const Vec& v)
{
    if (v.size() != s.ambient_dim)
        throw dimension_mismatch("membership: length != ambient_dim");
    // Reduce v against the echelonized basis.
    Vec w = v;
    for (size_t r = 0; r < s.dim(); ++r) {
        size_t pc = 0;
        while (pc < s.ambient_dim && s.basis.at(r, pc) == 0)
            ++pc;
        if (pc == s.ambient_dim)
            continue;
        Scalar f = w[pc];
        if (f == 0)
            continue;
        for (size_t c = pc; c < s.ambient_dim; ++c)
            w[c] = F.sub(w[c], F.mul(f, s.basis.at(r, c)));
    }
    return std::all_of(w.begin(), w.end(), [](Scalar x) { return x == 0; });
}

size_t quotient_dim(const Field& F, const Subspace& sub, const Subspace& sup)
{
    if (sub.ambient_dim != sup.ambient_dim)
        throw dimension_mismatch("quotient_dim: ambient dimensions differ");
    for (size_t r = 0; r < sub.dim(); ++r) {
        Vec row(sub.basis.entries.begin() + r * sub.ambient_dim,
                sub.basis.entries.begin() + (r + 1) * sub.ambient_dim);
        if (!membership(F, sup, row))
            throw not_a_subspace("quotient_dim: sub is not contained in sup");
    }
    return sup.dim() - sub.dim();
}

Solver::Solver(const Field& F, const Matrix& m)
    : F_(F), rows_(m.rows), cols_(m.cols)
{
    // Eliminate [m | I]; the identity block records the row transform.
    Matrix aug(m.rows, m.cols + m.rows);
    for (size_t r = 0; r < m.rows; ++r) {
        for (size_t c = 0; c < m.cols; ++c)
            aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols + r) = 1;
    }
    // RREF restricted to the first cols_ columns.
    size_t lead = 0;
    for (size_t col = 0; col < cols_ && lead < rows_; ++col) {
        size_t sel = lead;
        while (sel < rows_ && aug.at(sel, col) == 0)
            ++sel;
        if (sel == rows_)
            continue;
        if (sel != lead)
            for (size_t c = 0; c < aug.cols; ++c)
                std::swap(aug.at(sel, c), aug.at(lead, c));
        Scalar pinv = F_.inv(aug.at(lead, col));
        for (size_t c = 0; c < aug.cols; ++c)
            aug.at(lead, c) = F_.mul(aug.at(lead, c), pinv);
        for (size_t r = 0; r < rows_; ++r) {
            if (r == lead)
                continue;
            Scalar f = aug.at(r, col);
            if (f == 0)
                continue;
            for (size_t c = 0; c < aug.cols; ++c)
                aug.at(r, c) = F_.sub(aug.at(r, c), F_.mul(f, aug.at(lead, c)));
        }
        pivots_.push_back(col);
        ++lead;
    }
    red_ = Matrix(rows_, cols_);
    transform_ = Matrix(rows_, rows_);
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c)
            red_.at(r, c) = aug.at(r, c);
        for (size_t c = 0; c < rows_; ++c)
            transform_.at(r, c) = aug.at(r, cols_ + c);
    }
}

std::optional<Vec> Solver::solve(const Vec& target) const
{
    if (target.size() != rows_)
        throw dimension_mismatch("Solver::solve: target length != rows");
    Vec rhs = mat_vec(F_, transform_, target);
    for (size_t r = pivots_.size(); r < rows_; ++r)
        if (rhs[r] != 0)
            return std::nullopt;
    Vec x(cols_, 0);
    for (size_t r = 0; r < pivots_.size(); ++r)
        x[pivots_[r]] = rhs[r];
    return x;
}

}  // namespace mbp::fp
