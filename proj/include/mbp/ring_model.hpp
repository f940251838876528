#pragma once

#include "mbp/fp_linalg.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace mbp::ring {

enum class Model { Koszul, NativeP2 };

// Basis monomial. In the Koszul model a monomial is u_E * v^b with
// E a subset of {1..d} (stored as a bitmask) and b an exponent vector;
// total degree |E| + 2*sum(b). In the native p=2 model it is u^e with
// total degree sum(e); ext_mask stays 0.
struct Monomial {
    uint32_t ext_mask = 0;
    std::vector<uint16_t> exp;

    size_t exterior_degree() const;
    bool operator==(const Monomial& o) const = default;
};

// Ordering used for every degree basis: lexicographic on
// (|E|, E as a sorted index list, exponents).
bool monomial_less(const Monomial& a, const Monomial& b);

class Context;
using ContextPtr = std::shared_ptr<const Context>;

// Homogeneous element: coefficient vector over the ordered monomial
// basis of its degree.
struct Element {
    ContextPtr ctx;
    size_t degree = 0;
    fp::Vec coeffs;

    bool is_zero() const;
    bool operator==(const Element& o) const;
};

struct parse_error : std::runtime_error {
    size_t position;
    parse_error(const std::string& what, size_t pos)
        : std::runtime_error(what), position(pos)
    {
    }
};

// Immutable model of H^*(BV_+) for V of rank d over F_p, with basis
// enumeration memoized per degree up to the operator window.
class Context : public std::enable_shared_from_this<Context> {
  public:
    static ContextPtr make(uint32_t p, size_t rank, Model model,
                           size_t max_degree, size_t n_max);

    const fp::Field& field() const { return field_; }
    uint32_t p() const { return field_.p(); }
    size_t rank() const { return rank_; }
    Model model() const { return model_; }
    size_t max_degree() const { return max_degree_; }
    size_t n_max() const { return n_max_; }
    // Degrees are enumerable through D plus the operator-window margin,
    // so kernels and composites at degree <= D are exact.
    size_t window() const { return window_; }

    // |Q_i| = 2 p^i - 1.
    size_t q_shift(size_t i) const;

    const std::vector<Monomial>& basis(size_t t) const;
    size_t dim(size_t t) const { return basis(t).size(); }
    size_t monomial_index(size_t t, const Monomial& m) const;
    size_t monomial_degree(const Monomial& m) const;

    Element zero(size_t t) const;
    Element unit() const;
    Element from_monomial(const Monomial& m, fp::Scalar c = 1) const;

    // Span of the polynomial part inside degree t: monomials with
    // E empty (Koszul) or all exponents even (native p=2). Degree 0 is
    // excluded (augmentation ideal).
    fp::Subspace polynomial_part_subspace(size_t t) const;

    std::string print(const Monomial& m) const;
    std::string print(const Element& e) const;
    Monomial parse_monomial(const std::string& s) const;
    Element parse_element(const std::string& s) const;

  private:
    Context(uint32_t p, size_t rank, Model model, size_t max_degree,
            size_t n_max);

    std::vector<Monomial> enumerate_basis(size_t t) const;

    fp::Field field_;
    size_t rank_;
    Model model_;
    size_t max_degree_;
    size_t n_max_;
    size_t window_;

    mutable std::mutex cache_mutex_;
    mutable std::map<size_t, std::vector<Monomial>> basis_cache_;
};

// Index range [lo, hi) of the monomials of exterior degree a inside
// basis(t); contiguous because the basis order sorts on |E| first.
std::pair<size_t, size_t> exterior_block_range(const Context& ctx, size_t t,
                                               size_t a);

Element add(const Element& x, const Element& y);
Element scale(const Element& x, fp::Scalar c);
Element sub(const Element& x, const Element& y);
Element multiply(const Element& x, const Element& y);

struct degree_out_of_range : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct context_mismatch : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace mbp::ring
