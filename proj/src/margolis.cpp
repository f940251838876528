#include "mbp/margolis.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace mbp::margolis {

using ring::Model;

fp::Subspace Homology::kernel_of_Q(size_t i, size_t t) const
{
    std::pair<size_t, size_t> key{i, t};
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = kernel_cache_.find(key);
        if (it != kernel_cache_.end())
            return it->second;
    }
    fp::Subspace s = kernel_uncached(i, t);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return kernel_cache_.emplace(key, std::move(s)).first->second;
}

fp::Subspace Homology::kernel_uncached(size_t i, size_t t) const
{
    const auto& ctx = ops_.ctx();
    const auto& F = ctx.field();
    size_t n = ctx.dim(t);
    auto cols = ops_.columns(i, t);
    // The kernel only depends on rows that are actually hit; compress
    // them out, since the target degree can be much larger.
    std::vector<size_t> hit;
    for (const auto& col : cols)
        for (auto [r, c] : col)
            hit.push_back(r);
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    fp::Matrix m(hit.size(), n);
    for (size_t c = 0; c < n; ++c)
        for (auto [r, coef] : cols[c]) {
            size_t rr = size_t(
                std::lower_bound(hit.begin(), hit.end(), r) - hit.begin());
            m.at(rr, c) = coef;
        }
    return fp::kernel_basis(F, m);
}

fp::Subspace Homology::image_of_Q(size_t i, size_t t) const
{
    const auto& ctx = ops_.ctx();
    size_t shift = ops_.shift(i);
    if (t < shift)
        return fp::Subspace::zero(ctx.dim(t));
    return fp::image_basis(ctx.field(), ops_.matrix(i, t - shift));
}

fp::Matrix quotient_representatives(const fp::Field& F,
                                    const fp::Subspace& denominator,
                                    const fp::Subspace& numerator)
{
    size_t n = numerator.ambient_dim;
    // Working echelon seeded with the denominator; numerator rows that
    // survive reduction are the representatives, taken verbatim.
    fp::Matrix work = denominator.basis;
    std::vector<fp::Vec> reps;
    for (size_t r = 0; r < numerator.dim(); ++r) {
        fp::Vec v(numerator.basis.entries.begin() + r * n,
                  numerator.basis.entries.begin() + (r + 1) * n);
        fp::Vec w = v;
        for (size_t wr = 0; wr < work.rows; ++wr) {
            size_t pc = 0;
            while (pc < n && work.at(wr, pc) == 0)
                ++pc;
            if (pc == n || w[pc] == 0)
                continue;
            fp::Scalar f = F.mul(w[pc], F.inv(work.at(wr, pc)));
            for (size_t c = 0; c < n; ++c)
                w[c] = F.sub(w[c], F.mul(f, work.at(wr, c)));
        }
        if (std::all_of(w.begin(), w.end(),
                        [](fp::Scalar x) { return x == 0; }))
            continue;
        reps.push_back(v);
        work.entries.insert(work.entries.end(), w.begin(), w.end());
        ++work.rows;
    }
    fp::Matrix out(reps.size(), n);
    for (size_t r = 0; r < reps.size(); ++r)
        std::copy(reps[r].begin(), reps[r].end(),
                  out.entries.begin() + r * n);
    return out;
}

SubquotientEntry Homology::margolis_homology(size_t i, size_t t) const
{
    const auto& F = ops_.ctx().field();
    fp::Subspace ker = kernel_of_Q(i, t);
    fp::Subspace img = image_of_Q(i, t);
    SubquotientEntry e;
    e.t = t;
    e.dim_numerator = ker.dim();
    e.dim_denominator = img.dim();
    e.dim_quotient = fp::quotient_dim(F, img, ker);  // containment = Q_i^2 = 0
    e.representatives = quotient_representatives(F, img, ker);
    return e;
}

fp::Subspace Homology::multi_socle(const std::vector<size_t>& I,
                                   size_t t) const
{
    if (I.empty())
        throw std::invalid_argument("multi_socle: index set must be nonempty");
    std::pair<std::vector<size_t>, size_t> key{I, t};
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = socle_cache_.find(key);
        if (it != socle_cache_.end())
            return it->second;
    }
    fp::Subspace s = kernel_of_Q(I[0], t);
    for (size_t k = 1; k < I.size(); ++k)
        s = fp::intersect(ops_.ctx().field(), s, kernel_of_Q(I[k], t));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return socle_cache_.emplace(key, std::move(s)).first->second;
}

fp::Subspace Homology::image_of_composite(const std::vector<size_t>& I,
                                          size_t t) const
{
    const auto& ctx = ops_.ctx();
    size_t shift = ops_.composite_shift(I);
    if (t < shift)
        return fp::Subspace::zero(ctx.dim(t));
    std::pair<std::vector<size_t>, size_t> key{I, t};
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = image_cache_.find(key);
        if (it != image_cache_.end())
            return it->second;
    }
    size_t source = t - shift;
    const auto& b = ctx.basis(source);
    fp::Matrix gens(b.size(), ctx.dim(t));
    for (size_t j = 0; j < b.size(); ++j) {
        Element img = ops_.apply_composite(I, ctx.from_monomial(b[j]));
        std::copy(img.coeffs.begin(), img.coeffs.end(),
                  gens.entries.begin() + j * gens.cols);
    }
    fp::Subspace s = fp::Subspace::span(ctx.field(), gens);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return image_cache_.emplace(key, std::move(s)).first->second;
}

namespace {

std::vector<size_t> range_set(size_t n)
{
    std::vector<size_t> I(n + 1);
    for (size_t i = 0; i <= n; ++i)
        I[i] = i;
    return I;
}

}  // namespace

SubquotientEntry Homology::script_H(size_t n, size_t t) const
{
    const auto& F = ops_.ctx().field();
    auto I = range_set(n);
    fp::Subspace soc = multi_socle(I, t);
    fp::Subspace img = image_of_composite(I, t);
    SubquotientEntry e;
    e.t = t;
    e.dim_numerator = soc.dim();
    e.dim_denominator = img.dim();
    // Containment failure would falsify Im(Q_0...Q_n) in the socle.
    e.dim_quotient = fp::quotient_dim(F, img, soc);
    e.representatives = quotient_representatives(F, img, soc);
    return e;
}

bool Homology::polynomial_part_onto_scriptH(size_t n, size_t t) const
{
    const auto& ctx = ops_.ctx();
    const auto& F = ctx.field();
    auto I = range_set(n);
    fp::Subspace soc = multi_socle(I, t);
    fp::Subspace img = image_of_composite(I, t);
    fp::Subspace poly = ctx.polynomial_part_subspace(t);
    if (t == 0) {
        // The unit spans degree 0 and is never in any image.
        poly = fp::Subspace::full(ctx.dim(0));
    }
    // Onto iff (poly + img) covers the socle.
    fp::Subspace covered = fp::sum(F, fp::intersect(F, poly, soc), img);
    return covered.dim() == soc.dim();
}

std::vector<Homology::FreeSummandRow> Homology::free_summand_dims(
    size_t n, size_t t_min, size_t t_max) const
{
    std::vector<FreeSummandRow> rows;
    auto I = range_set(n);
    for (size_t t = t_min; t <= t_max; ++t) {
        fp::Subspace soc = multi_socle(I, t);
        fp::Subspace img = image_of_composite(I, t);
        if (img.dim() > soc.dim())
            throw std::logic_error(
                "free_summand_dims: image exceeds socle at degree " +
                std::to_string(t));
        rows.push_back({t, img.dim(), soc.dim(), soc.dim() - img.dim()});
    }
    return rows;
}

std::vector<ScriptHRow> Homology::script_H_rows(size_t n, size_t t_max,
                                                bool reduced) const
{
    std::vector<ScriptHRow> rows;
    auto I = range_set(n);
    for (size_t t = reduced ? 1 : 0; t <= t_max; ++t) {
        auto e = script_H(n, t);
        rows.push_back({t, ops_.ctx().dim(t), e.dim_numerator,
                        e.dim_denominator, e.dim_quotient});
    }
    return rows;
}

std::string script_H_report_json(const Homology& h, size_t n, size_t t_max,
                                 bool reduced)
{
    const auto& ctx = h.ops().ctx();
    nlohmann::ordered_json j;
    j["p"] = ctx.p();
    j["d"] = ctx.rank();
    j["mode"] = ctx.model() == Model::NativeP2 ? "native-p2" : "koszul";
    j["n"] = n;
    j["reduced"] = reduced;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : h.script_H_rows(n, t_max, reduced))
        j["rows"].push_back({{"t", r.t},
                             {"dim_H", r.dim_H},
                             {"dim_socle", r.dim_socle},
                             {"dim_image", r.dim_image},
                             {"dim_scriptH", r.dim_scriptH}});
    return j.dump(2) + "\n";
}

std::string script_H_report_csv(const Homology& h, size_t n, size_t t_max,
                                bool reduced)
{
    std::ostringstream os;
    os << "t,dim_H,dim_socle,dim_image,dim_scriptH\n";
    for (const auto& r : h.script_H_rows(n, t_max, reduced))
        os << r.t << ',' << r.dim_H << ',' << r.dim_socle << ','
           << r.dim_image << ',' << r.dim_scriptH << '\n';
    return os.str();
}

}  // namespace mbp::margolis
