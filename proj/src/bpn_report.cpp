#include "mbp/bpn_report.hpp"

#include <json.hpp>

#include <sstream>

namespace mbp::bpn {

using ring::Model;

std::vector<size_t> Report::upto(size_t j) const
{
    std::vector<size_t> I(j + 1);
    for (size_t i = 0; i <= j; ++i)
        I[i] = i;
    return I;
}

std::vector<size_t> Report::vtor_dims(int j, size_t t_max) const
{
    const auto& ctx = h_.ops().ctx();
    std::vector<size_t> out(t_max + 1, 0);
    for (size_t t = 0; t <= t_max; ++t) {
        if (j < 0)
            out[t] = ctx.dim(t);  // BP<-1> = HF_p
        else
            out[t] = h_.image_of_composite(upto(size_t(j)), t).dim();
    }
    if (reduced_ && j < 0)
        out[0] = 0;
    return out;
}

std::vector<size_t> Report::cotensor_dims(int j, size_t t_max) const
{
    const auto& ctx = h_.ops().ctx();
    std::vector<size_t> out(t_max + 1, 0);
    for (size_t t = 0; t <= t_max; ++t) {
        if (j < 0)
            out[t] = ctx.dim(t);
        else
            out[t] = h_.multi_socle(upto(size_t(j)), t).dim();
    }
    if (reduced_)
        out[0] = 0;  // drop the unit class
    return out;
}

std::vector<size_t> Report::L_dims(int j, size_t t_max) const
{
    const auto& ctx = h_.ops().ctx();
    const auto& F = ctx.field();
    std::vector<size_t> out(t_max + 1, 0);
    for (size_t t = 1; t <= t_max; ++t) {
        fp::Subspace psi = ctx.polynomial_part_subspace(t);
        fp::Subspace img =
            j < 0 ? fp::Subspace::full(ctx.dim(t))
                  : h_.image_of_composite(upto(size_t(j)), t);
        out[t] = fp::intersect(F, psi, img).dim();
    }
    return out;
}

std::vector<size_t> Report::scriptH_dims(int j, size_t t_max) const
{
    std::vector<size_t> out(t_max + 1, 0);
    for (size_t t = 0; t <= t_max; ++t) {
        if (j < 0) {
            out[t] = 0;  // socle = image = everything for HF_p itself
            continue;
        }
        out[t] = h_.script_H(size_t(j), t).dim_quotient;
    }
    if (reduced_ && !out.empty() && j >= 0)
        out[0] = 0;
    return out;
}

std::vector<CheckRow> Report::L_filtration_check(size_t j,
                                                size_t t_max) const
{
    if (j < 1)
        throw std::invalid_argument("L_filtration_check requires j >= 1");
    const auto& ctx = h_.ops().ctx();
    const auto& F = ctx.field();
    auto Lj = L_dims(int(j), t_max);
    auto Lj1 = L_dims(int(j) - 1, t_max);
    std::vector<CheckRow> rows;
    for (size_t t = 0; t <= t_max; ++t) {
        fp::Subspace im_prev = h_.image_of_composite(upto(j - 1), t);
        fp::Subspace im_full = h_.image_of_composite(upto(j), t);
        fp::Subspace ker_j = h_.kernel_of_Q(j, t);
        fp::Subspace mid = fp::intersect(F, ker_j, im_prev);
        CheckRow row{t, true, ""};
        try {
            fp::quotient_dim(F, im_full, mid);
        }
        catch (const fp::not_a_subspace&) {
            row.pass = false;
            row.detail = "Im(Q_0..Q_j) not contained in Ker(Q_j) cap "
                         "Im(Q_0..Q_{j-1})";
            rows.push_back(std::move(row));
            continue;
        }
        size_t lhs = Lj1[t] - Lj[t];
        size_t rhs = mid.dim() - im_full.dim();
        if (lhs != rhs) {
            row.pass = false;
            row.detail = "dim L[j-1]-dim L[j]=" + std::to_string(lhs) +
                         " but quotient has dim " + std::to_string(rhs);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CheckRow> Report::ses_consistency(size_t j, size_t t_max) const
{
    std::vector<CheckRow> rows;
    for (size_t t = 0; t <= t_max; ++t) {
        CheckRow row{t, true, ""};
        auto e = h_.script_H(j, t);
        if (e.dim_quotient != e.dim_numerator - e.dim_denominator) {
            row.pass = false;
            row.detail = "scriptH dimension bookkeeping broken";
        }
        else if (t % 2 == 1 && e.dim_quotient != 0) {
            row.pass = false;
            row.detail = "odd-degree scriptH nonzero";
        }
        else if (!h_.polynomial_part_onto_scriptH(j, t)) {
            row.pass = false;
            row.detail = "polynomial part not onto scriptH";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

DimensionReport Report::build(size_t n, size_t t_max) const
{
    const auto& ctx = h_.ops().ctx();
    DimensionReport r;
    r.p = ctx.p();
    r.d = ctx.rank();
    r.mode = ctx.model() == Model::NativeP2 ? "native-p2" : "koszul";
    r.n = n;
    r.reduced = reduced_;
    r.t_max = t_max;
    for (int j = -1; j <= int(n); ++j) {
        r.vtor.push_back(vtor_dims(j, t_max));
        r.cotensor.push_back(cotensor_dims(j, t_max));
        r.L.push_back(L_dims(j, t_max));
        r.scriptH.push_back(scriptH_dims(j, t_max));
    }
    return r;
}

namespace {

nlohmann::ordered_json columns_json(
    const std::vector<std::vector<size_t>>& cols)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (size_t c = 0; c < cols.size(); ++c)
        j["j=" + std::to_string(int(c) - 1)] = cols[c];
    return j;
}

std::string poincare_poly(const std::vector<size_t>& col, size_t t_max)
{
    std::ostringstream os;
    bool first = true;
    for (size_t t = 0; t <= t_max; ++t) {
        if (col[t] == 0)
            continue;
        if (!first)
            os << " + ";
        if (t == 0) {
            os << col[t];
        }
        else {
            if (col[t] != 1)
                os << col[t] << '*';
            os << "s^" << t;
        }
        first = false;
    }
    if (first)
        os << '0';
    os << " + O(s^" << (t_max + 1) << ")";
    return os.str();
}

}  // namespace

std::string to_json(const DimensionReport& r)
{
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["d"] = r.d;
    j["mode"] = r.mode;
    j["n"] = r.n;
    j["reduced"] = r.reduced;
    j["scope"] = "mod-p shadow";
    j["t_max"] = r.t_max;
    j["vtor"] = columns_json(r.vtor);
    j["cotensor"] = columns_json(r.cotensor);
    j["L"] = columns_json(r.L);
    j["scriptH"] = columns_json(r.scriptH);
    return j.dump(2) + "\n";
}

std::string to_csv(const DimensionReport& r)
{
    std::ostringstream os;
    os << "# scope: mod-p shadow\n";
    os << "t";
    for (int j = -1; j <= int(r.n); ++j)
        os << ",vtor[" << j << "],cotensor[" << j << "],L[" << j
           << "],scriptH[" << j << "]";
    os << '\n';
    for (size_t t = 0; t <= r.t_max; ++t) {
        os << t;
        for (size_t c = 0; c < r.vtor.size(); ++c)
            os << ',' << r.vtor[c][t] << ',' << r.cotensor[c][t] << ','
               << r.L[c][t] << ',' << r.scriptH[c][t];
        os << '\n';
    }
    return os.str();
}

std::string to_poincare(const DimensionReport& r)
{
    std::ostringstream os;
    os << "# p=" << r.p << " d=" << r.d << " mode=" << r.mode
       << " scope=mod-p-shadow\n";
    for (size_t c = 0; c < r.vtor.size(); ++c) {
        int j = int(c) - 1;
        os << "vtor[" << j << "] = " << poincare_poly(r.vtor[c], r.t_max)
           << '\n';
        os << "cotensor[" << j << "] = "
           << poincare_poly(r.cotensor[c], r.t_max) << '\n';
        os << "L[" << j << "] = " << poincare_poly(r.L[c], r.t_max) << '\n';
        os << "scriptH[" << j << "] = "
           << poincare_poly(r.scriptH[c], r.t_max) << '\n';
    }
    return os.str();
}

}  // namespace mbp::bpn
