#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mbp::fp {

using Scalar = uint32_t;
using Vec = std::vector<Scalar>;

// Ambient prime-field context. All scalars are residues in [0, p); the
// modulus lives here, never per-scalar. Mixing contexts is a hard error.
class Field {
  public:
    explicit Field(uint32_t p);

    uint32_t p() const { return p_; }

    Scalar add(Scalar a, Scalar b) const { return (a + b) % p_; }
    Scalar sub(Scalar a, Scalar b) const { return (a + p_ - b) % p_; }
    Scalar mul(Scalar a, Scalar b) const
    {
        return Scalar((uint64_t(a) * b) % p_);
    }
    Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
    Scalar inv(Scalar a) const;
    Scalar reduce(int64_t a) const
    {
        int64_t r = a % int64_t(p_);
        return Scalar(r < 0 ? r + p_ : r);
    }

    bool operator==(const Field& o) const { return p_ == o.p_; }

  private:
    uint32_t p_;
};

// Dense row-major matrix over F_p.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    Vec entries;  // rows * cols

    Matrix() = default;
    Matrix(size_t r, size_t c) : rows(r), cols(c), entries(r * c, 0) {}

    Scalar& at(size_t r, size_t c) { return entries[r * cols + c]; }
    Scalar at(size_t r, size_t c) const { return entries[r * cols + c]; }

    bool operator==(const Matrix& o) const = default;

    static Matrix identity(size_t n);
};

Matrix transpose(const Matrix& m);
Matrix mat_mul(const Field& F, const Matrix& a, const Matrix& b);
Vec mat_vec(const Field& F, const Matrix& m, const Vec& v);

// Reduced row-echelon form; zero rows are kept in place at the bottom.
// Pivot columns are returned sorted ascending.
std::pair<Matrix, std::vector<size_t>> rref(const Field& F, const Matrix& m);

// A subspace of F_p^ambient_dim stored canonically: basis rows in RREF,
// no zero rows. Equality of subspaces is equality of representations.
struct Subspace {
    size_t ambient_dim = 0;
    Matrix basis;  // dim x ambient_dim, RREF, full row rank

    size_t dim() const { return basis.rows; }
    bool operator==(const Subspace& o) const = default;

    static Subspace zero(size_t ambient_dim);
    static Subspace full(size_t ambient_dim);
    // Canonicalize a spanning set (rows of gens).
    static Subspace span(const Field& F, const Matrix& gens);
};

Subspace kernel_basis(const Field& F, const Matrix& m);
// Column space of m, as a subspace of F_p^rows.
Subspace image_basis(const Field& F, const Matrix& m);

Subspace intersect(const Field& F, const Subspace& a, const Subspace& b);
Subspace sum(const Field& F, const Subspace& a, const Subspace& b);

// Any x with m x = target, or nullopt when the system is inconsistent.
std::optional<Vec> solve(const Field& F, const Matrix& m, const Vec& target);

bool membership(const Field& F, const Subspace& s, const Vec& v);

// dim sup - dim sub; throws not_a_subspace if sub is not contained in sup.
// The containment check is load-bearing: theorem checks fail through it.
size_t quotient_dim(const Field& F, const Subspace& sub, const Subspace& sup);

struct dimension_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct not_a_subspace : std::logic_error {
    using std::logic_error::logic_error;
};

// Precomputed elimination of a fixed matrix, for repeated solves against
// the same left-hand side.
class Solver {
  public:
    Solver(const Field& F, const Matrix& m);
    std::optional<Vec> solve(const Vec& target) const;
    size_t rank() const { return pivots_.size(); }

  private:
    const Field& F_;
    size_t rows_, cols_;
    Matrix red_;                  // RREF of m
    Matrix transform_;            // E with E*m = red_
    std::vector<size_t> pivots_;  // pivot column per reduced row
};

}  // namespace mbp::fp
