#include "mbp/koszul_solver.hpp"

#include <algorithm>
#include <cassert>

namespace mbp::koszul {

using ring::Model;

namespace {

using ring::exterior_block_range;

[[maybe_unused]] bool is_zero_vec(const fp::Vec& v)
{
    return std::all_of(v.begin(), v.end(),
                       [](fp::Scalar c) { return c == 0; });
}

}  // namespace

std::optional<std::pair<size_t, size_t>> bidegree_of(const Element& x)
{
    const auto& b = x.ctx->basis(x.degree);
    std::optional<size_t> a;
    for (size_t j = 0; j < b.size(); ++j) {
        if (x.coeffs[j] == 0)
            continue;
        size_t ea = b[j].exterior_degree();
        if (a && *a != ea)
            return std::nullopt;
        a = ea;
    }
    if (!a)
        return std::nullopt;
    return std::make_pair(*a, (x.degree - *a) / 2);
}

std::optional<Element> Solver::block_solve(size_t i, const Element& x) const
{
    const auto& ctx = ops_.ctx();
    const auto& F = ctx.field();
    size_t t = x.degree;
    size_t shift = ops_.shift(i);
    auto bd = bidegree_of(x);
    assert(bd);
    size_t a = bd->first;
    if (t < shift + (a + 1))  // source degree cannot host block a+1
        return std::nullopt;
    size_t s = t - shift;

    std::tuple<size_t, size_t, size_t> key{i, t, a};
    std::shared_ptr<const fp::Solver> solver;
    std::vector<size_t> src_cols;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = solver_cache_.find(key);
        if (it != solver_cache_.end()) {
            solver = it->second;
            src_cols = col_index_cache_[key];
        }
    }
    auto [row_lo, row_hi] = exterior_block_range(ctx, t, a);
    if (!solver) {
        auto [col_lo, col_hi] = exterior_block_range(ctx, s, a + 1);
        for (size_t c = col_lo; c < col_hi; ++c)
            src_cols.push_back(c);
        fp::Matrix m(row_hi - row_lo, src_cols.size());
        const auto& sb = ctx.basis(s);
        for (size_t c = 0; c < src_cols.size(); ++c) {
            Element img = ops_.apply(i, ctx.from_monomial(sb[src_cols[c]]));
            for (size_t r = row_lo; r < row_hi; ++r)
                m.at(r - row_lo, c) = img.coeffs[r];
        }
        solver = std::make_shared<fp::Solver>(F, m);
        std::lock_guard<std::mutex> lock(cache_mutex_);
        solver_cache_[key] = solver;
        col_index_cache_[key] = src_cols;
    }
    fp::Vec target(x.coeffs.begin() + row_lo, x.coeffs.begin() + row_hi);
    auto sol = solver->solve(target);
    if (!sol)
        return std::nullopt;
    Element y = ctx.zero(s);
    for (size_t c = 0; c < src_cols.size(); ++c)
        y.coeffs[src_cols[c]] = (*sol)[c];
    return y;
}

PreimageResult Solver::koszul_preimage(size_t i, const Element& x) const
{
    const auto& ctx = ops_.ctx();
    if (ctx.model() != Model::Koszul)
        throw std::invalid_argument(
            "preimage solving requires the Koszul model");
    size_t shift = ops_.shift(i);
    if (x.is_zero()) {
        size_t s = x.degree >= shift ? x.degree - shift : 0;
        return {ctx.zero(s), std::nullopt};
    }
    if (!ops_.apply(i, x).is_zero())
        throw not_a_cycle("koszul_preimage: input is not a Q_i cycle");
    auto bd = bidegree_of(x);
    if (!bd)
        throw std::invalid_argument(
            "koszul_preimage: input mixes exterior blocks");
    auto y = block_solve(i, x);
    if (y)
        return {std::move(y), std::nullopt};
    if (bd->first >= 1)
        throw exactness_failure(
            "koszul_preimage: no preimage where the Koszul complex is exact");
    // a = 0 edge: the obstruction is the class in the truncated
    // symmetric power, represented by x reduced modulo the image.
    const auto& F = ctx.field();
    fp::Subspace img =
        x.degree < shift
            ? fp::Subspace::zero(ctx.dim(x.degree))
            : fp::image_basis(F, ops_.matrix(i, x.degree - shift));
    Element obs = x;
    fp::Vec w = x.coeffs;
    for (size_t r = 0; r < img.dim(); ++r) {
        size_t pc = 0;
        while (pc < img.ambient_dim && img.basis.at(r, pc) == 0)
            ++pc;
        if (pc == img.ambient_dim || w[pc] == 0)
            continue;
        fp::Scalar f = w[pc];
        for (size_t c = pc; c < img.ambient_dim; ++c)
            w[c] = F.sub(w[c], F.mul(f, img.basis.at(r, c)));
    }
    obs.coeffs = std::move(w);
    return {std::nullopt, std::move(obs)};
}

Element Solver::recursive_step(const std::vector<size_t>& I,
                               const Element& x,
                               std::vector<TraceStep>* trace) const
{
    const auto& ctx = ops_.ctx();
    size_t total_shift = ops_.composite_shift(I);
    if (x.is_zero()) {
        size_t s = x.degree >= total_shift ? x.degree - total_shift : 0;
        return ctx.zero(s);
    }
    if (I.size() == 1) {
        auto res = koszul_preimage(I[0], x);
        if (!res.preimage)
            throw exactness_failure(
                "recursive solver: single-index base case unsolvable");
        return *res.preimage;
    }

    size_t t = I.size();
    size_t i1 = I[0];
    std::vector<size_t> J(I.begin() + 1, I.end());

    // alpha_t: induction on |I|, same degree.
    Element alpha = recursive_step(J, x, nullptr);
    if (trace)
        trace->push_back({t, alpha, std::nullopt, std::nullopt});

    // Descending k: kill the obstruction beta_k by a recursive call of
    // strictly smaller degree (k = t) or smaller index set (k < t).
    for (size_t k = t; k >= 2; --k) {
        std::vector<size_t> firstk(I.begin(), I.begin() + k);
        std::vector<size_t> firstk1(I.begin(), I.begin() + k - 1);
        Element beta = ops_.apply_composite(firstk1, alpha);
        std::optional<Element> gamma;
        if (!beta.is_zero()) {
            Element g = recursive_step(firstk, beta, nullptr);
            alpha = ring::sub(alpha, ops_.apply(I[k - 1], g));
            gamma = std::move(g);
        }
        if (trace)
            trace->push_back({k - 1, alpha, std::move(beta),
                              std::move(gamma)});
    }

    auto res = koszul_preimage(i1, alpha);
    if (!res.preimage)
        throw exactness_failure("recursive solver: final lift failed");
    // Moving Q_{i_1} past the other t-1 factors contributes the sign
    // (-1)^{t-1}.
    Element y = *res.preimage;
    if ((t - 1) % 2 == 1)
        y = ring::scale(y, ctx.p() - 1);
    Element check = ops_.apply_composite(I, y);
    if (!(check == x))
        throw exactness_failure("recursive solver: composite(y) != x");
    return y;
}

PreimageCertificate Solver::multi_preimage_recursive(
    const std::vector<size_t>& I, const Element& x) const
{
    const auto& ctx = ops_.ctx();
    if (ctx.model() != Model::Koszul)
        throw std::invalid_argument(
            "preimage solving requires the Koszul model");
    if (I.empty())
        throw std::invalid_argument("index set must be nonempty");
    if (!std::is_sorted(I.begin(), I.end()) ||
        std::adjacent_find(I.begin(), I.end()) != I.end())
        throw std::invalid_argument(
            "index set must be strictly increasing");

    size_t total_shift = ops_.composite_shift(I);
    PreimageCertificate cert{x, I, x /* placeholder */, {}};
    if (x.is_zero()) {
        size_t s = x.degree >= total_shift ? x.degree - total_shift : 0;
        cert.output = ctx.zero(s);
        return cert;
    }
    auto bd = bidegree_of(x);
    if (!bd)
        throw std::invalid_argument(
            "multi_preimage_recursive: input mixes exterior blocks");
    auto [a, b] = *bd;
    if (a == 0)
        throw std::invalid_argument(
            "multi_preimage_recursive: exterior degree must be positive");
    for (size_t i : I)
        if (!ops_.apply(i, x).is_zero())
            throw not_a_cycle("multi_preimage_recursive: Q_" +
                              std::to_string(i) + " x != 0");
    // Vanishing range: a nonzero cycle here would falsify the result.
    size_t sym_shift = 0;
    for (size_t i : I)
        sym_shift += (ops_.shift(i) + 1) / 2;  // p^i
    if (a + I.size() > ctx.rank() || b < sym_shift)
        throw exactness_failure(
            "multi_preimage_recursive: nonzero cycle in the vanishing range");

    cert.output = recursive_step(I, x, &cert.trace);
    validate_certificate(ops_, cert);
    return cert;
}

std::optional<Element> Solver::multi_preimage_oracle(
    const std::vector<size_t>& I, const Element& x) const
{
    const auto& ctx = ops_.ctx();
    const auto& F = ctx.field();
    size_t total_shift = ops_.composite_shift(I);
    if (x.is_zero()) {
        size_t s = x.degree >= total_shift ? x.degree - total_shift : 0;
        return ctx.zero(s);
    }
    if (x.degree < total_shift)
        return std::nullopt;
    size_t s = x.degree - total_shift;
    auto bd = bidegree_of(x);
    fp::Matrix m;
    std::vector<size_t> src_cols;
    const auto& sb = ctx.basis(s);
    if (bd) {
        auto [lo, hi] = exterior_block_range(ctx, s, bd->first + I.size());
        for (size_t c = lo; c < hi; ++c)
            src_cols.push_back(c);
    }
    else {
        for (size_t c = 0; c < sb.size(); ++c)
            src_cols.push_back(c);
    }
    m = fp::Matrix(ctx.dim(x.degree), src_cols.size());
    for (size_t c = 0; c < src_cols.size(); ++c) {
        Element img = ops_.apply_composite(I, ctx.from_monomial(sb[src_cols[c]]));
        for (size_t r = 0; r < m.rows; ++r)
            m.at(r, c) = img.coeffs[r];
    }
    auto sol = fp::solve(F, m, x.coeffs);
    if (!sol)
        return std::nullopt;
    Element y = ctx.zero(s);
    for (size_t c = 0; c < src_cols.size(); ++c)
        y.coeffs[src_cols[c]] = (*sol)[c];
    return y;
}

void validate_certificate(const Ops& ops, const PreimageCertificate& cert)
{
    const auto& I = cert.index_set;
    if (cert.input.is_zero()) {
        if (!cert.output.is_zero())
            throw std::logic_error("certificate: nonzero lift of zero");
        return;
    }
    Element check = ops.apply_composite(I, cert.output);
    if (!(check == cert.input))
        throw std::logic_error("certificate: composite(y) != x");
    if (I.size() < 2)
        return;
    std::vector<size_t> J(I.begin() + 1, I.end());
    for (const auto& step : cert.trace) {
        // (cond1): composite over I \ {i_1} recovers x.
        Element c1 = ops.apply_composite(J, step.alpha);
        if (!(c1 == cert.input))
            throw std::logic_error("certificate: cond1 fails at k=" +
                                   std::to_string(step.k));
        // (cond2): the composite over the first k indices kills alpha_k.
        std::vector<size_t> firstk(I.begin(), I.begin() + step.k);
        if (!ops.apply_composite(firstk, step.alpha).is_zero())
            throw std::logic_error("certificate: cond2 fails at k=" +
                                   std::to_string(step.k));
        if (step.beta && step.gamma) {
            std::vector<size_t> firstk1(I.begin(),
                                        I.begin() + step.k + 1);
            Element g = ops.apply_composite(firstk1, *step.gamma);
            if (!(g == *step.beta))
                throw std::logic_error(
                    "certificate: gamma does not resolve beta at k=" +
                    std::to_string(step.k));
        }
    }
}

}  // namespace mbp::koszul
