#include "mbp/milnor.hpp"

#include <algorithm>

namespace mbp::milnor {

using ring::Model;
using ring::Monomial;

Element Ops::apply(size_t i, const Element& x) const
{
    const auto& ctx = *ctx_;
    const auto& F = ctx.field();
    size_t t = x.degree;
    size_t target = t + shift(i);
    Element out = ctx.zero(target);  // throws past the window
    const auto& b = ctx.basis(t);
    size_t pw = shift(i);  // 2p^i - 1
    size_t p_pow = (pw + 1) / 2;  // p^i
    for (size_t j = 0; j < b.size(); ++j) {
        fp::Scalar c = x.coeffs[j];
        if (c == 0)
            continue;
        const Monomial& m = b[j];
        if (ctx.model() == Model::NativeP2) {
            // Derivation with Q_i u = u^{2^{i+1}}; only odd exponents
            // contribute mod 2.
            for (size_t k = 0; k < ctx.rank(); ++k) {
                if (m.exp[k] % 2 == 0)
                    continue;
                Monomial r = m;
                r.exp[k] = uint16_t(r.exp[k] + pw);
                size_t idx = ctx.monomial_index(target, r);
                out.coeffs[idx] = F.add(out.coeffs[idx], c);
            }
            continue;
        }
        // Koszul model: Q_i(u_{j_1}...u_{j_a} v^b)
        //   = sum_k (-1)^{k-1} u_{j_1}...^u_{j_k}...u_{j_a} v_{j_k}^{p^i} v^b
        size_t k = 0;
        for (size_t bit = 0; m.ext_mask >> bit; ++bit) {
            if (!((m.ext_mask >> bit) & 1))
                continue;
            Monomial r = m;
            r.ext_mask &= ~(uint32_t(1) << bit);
            r.exp[bit] = uint16_t(r.exp[bit] + p_pow);
            fp::Scalar coef = (k % 2 == 0) ? c : F.neg(c);
            size_t idx = ctx.monomial_index(target, r);
            out.coeffs[idx] = F.add(out.coeffs[idx], coef);
            ++k;
        }
    }
    return out;
}

Element Ops::apply_composite(const std::vector<size_t>& I,
                             const Element& x) const
{
    if (!std::is_sorted(I.begin(), I.end()))
        throw std::invalid_argument("index set must be sorted ascending");
    Element cur = x;
    // Largest index acts first.
    for (auto it = I.rbegin(); it != I.rend(); ++it)
        cur = apply(*it, cur);
    return cur;
}

const fp::Matrix& Ops::matrix(size_t i, size_t t) const
{
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = matrix_cache_.find({i, t});
        if (it != matrix_cache_.end())
            return it->second;
    }
    size_t target = t + shift(i);
    fp::Matrix m(ctx_->dim(target), ctx_->dim(t));
    auto cols = columns(i, t);
    for (size_t c = 0; c < cols.size(); ++c)
        for (auto [r, coef] : cols[c])
            m.at(r, c) = coef;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return matrix_cache_.emplace(std::make_pair(i, t), std::move(m))
        .first->second;
}

std::vector<std::vector<std::pair<size_t, fp::Scalar>>> Ops::columns(
    size_t i, size_t t) const
{
    size_t target = t + shift(i);
    const auto& b = ctx_->basis(t);
    ctx_->basis(target);  // window check
    std::vector<std::vector<std::pair<size_t, fp::Scalar>>> cols(b.size());
    for (size_t j = 0; j < b.size(); ++j) {
        Element img = apply(i, ctx_->from_monomial(b[j]));
        for (size_t r = 0; r < img.coeffs.size(); ++r)
            if (img.coeffs[r] != 0)
                cols[j].emplace_back(r, img.coeffs[r]);
    }
    return cols;
}

fp::Matrix Ops::composite_matrix(const std::vector<size_t>& I,
                                 size_t t) const
{
    size_t target = t + composite_shift(I);
    const auto& b = ctx_->basis(t);
    fp::Matrix m(ctx_->dim(target), b.size());
    for (size_t j = 0; j < b.size(); ++j) {
        Element img = apply_composite(I, ctx_->from_monomial(b[j]));
        for (size_t r = 0; r < img.coeffs.size(); ++r)
            m.at(r, j) = img.coeffs[r];
    }
    return m;
}

size_t Ops::composite_shift(const std::vector<size_t>& I) const
{
    size_t s = 0;
    for (size_t i : I)
        s += shift(i);
    return s;
}

}  // namespace mbp::milnor
