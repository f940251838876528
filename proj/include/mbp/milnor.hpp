#pragma once

#include "mbp/ring_model.hpp"

#include <map>
#include <mutex>

namespace mbp::milnor {

using ring::Context;
using ring::ContextPtr;
using ring::Element;

// The Milnor derivations Q_i realized as per-degree matrices over F_p.
// Q_i has degree 2p^i - 1; in the Koszul model it maps the (a, b) block
// to (a-1, b+p^i) and annihilates a = 0.
//
// Composite convention: compose({i_1 < ... < i_t}) applies Q_{i_t}
// first, i.e. the operator Q_{i_1} o ... o Q_{i_t}. Any other order
// differs by the sign (-1)^inversions and has the same kernel and image.
class Ops {
  public:
    explicit Ops(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    const Context& ctx() const { return *ctx_; }
    ContextPtr ctx_ptr() const { return ctx_; }

    Element apply(size_t i, const Element& x) const;
    Element apply_composite(const std::vector<size_t>& I,
                            const Element& x) const;

    // Matrix of Q_i from basis(t) to basis(t + |Q_i|); memoized.
    const fp::Matrix& matrix(size_t i, size_t t) const;

    // Matrix of the composite over a sorted index set.
    fp::Matrix composite_matrix(const std::vector<size_t>& I,
                                size_t t) const;

    // Sparse column view: for each basis monomial of degree t, the
    // (row, coefficient) pairs of its image under Q_i.
    std::vector<std::vector<std::pair<size_t, fp::Scalar>>> columns(
        size_t i, size_t t) const;

    size_t shift(size_t i) const { return ctx_->q_shift(i); }
    size_t composite_shift(const std::vector<size_t>& I) const;

  private:
    ContextPtr ctx_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<size_t, size_t>, fp::Matrix> matrix_cache_;
};

}  // namespace mbp::milnor
