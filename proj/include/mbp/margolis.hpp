#pragma once

#include "mbp/milnor.hpp"

namespace mbp::margolis {

using milnor::Ops;
using ring::Element;

// One degree of a subquotient: numerator and denominator dimensions and
// deterministic representatives for the quotient classes.
struct SubquotientEntry {
    size_t t = 0;
    size_t dim_numerator = 0;
    size_t dim_denominator = 0;
    size_t dim_quotient = 0;
    // Rows are coefficient vectors over basis(t).
    fp::Matrix representatives;
};

struct ScriptHRow {
    size_t t;
    size_t dim_H;
    size_t dim_socle;
    size_t dim_image;
    size_t dim_scriptH;
};

// Per-degree kernels, images, Margolis homology, the multi-socle and
// the subquotient scriptH = {intersection of Ker(Q_i)} / Im(Q_0...Q_n).
class Homology {
  public:
    explicit Homology(const Ops& ops) : ops_(ops) {}

    fp::Subspace kernel_of_Q(size_t i, size_t t) const;
    // Image of Q_i landing in degree t (zero when t < |Q_i|).
    fp::Subspace image_of_Q(size_t i, size_t t) const;

    SubquotientEntry margolis_homology(size_t i, size_t t) const;

    // Intersection of Ker(Q_i) over i in I; I must be nonempty.
    fp::Subspace multi_socle(const std::vector<size_t>& I, size_t t) const;

    // Image of the composite over I landing in degree t.
    fp::Subspace image_of_composite(const std::vector<size_t>& I,
                                    size_t t) const;

    // scriptH(n) at degree t; hard error if the image is not contained
    // in the socle (that would falsify Q_i^2 = 0 / anticommutation).
    SubquotientEntry script_H(size_t n, size_t t) const;

    // Whether the polynomial part (plus the unit in degree 0) maps onto
    // scriptH(n) in degree t.
    bool polynomial_part_onto_scriptH(size_t n, size_t t) const;

    // Per degree: dim soc(F) = dim Im(Q_0...Q_n), dim soc(M) = socle,
    // and their difference dim scriptH = dim soc(Mbar).
    struct FreeSummandRow {
        size_t t, dim_soc_F, dim_soc_M, dim_soc_Mbar;
    };
    std::vector<FreeSummandRow> free_summand_dims(size_t n, size_t t_min,
                                                  size_t t_max) const;

    std::vector<ScriptHRow> script_H_rows(size_t n, size_t t_max,
                                          bool reduced) const;

    const Ops& ops() const { return ops_; }

  private:
    fp::Subspace kernel_uncached(size_t i, size_t t) const;

    const Ops& ops_;
    // Report sweeps revisit the same kernels, socles and images many
    // times; memoize them behind the same read-safe contract as the
    // operator caches.
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<size_t, size_t>, fp::Subspace> kernel_cache_;
    mutable std::map<std::pair<std::vector<size_t>, size_t>, fp::Subspace>
        socle_cache_;
    mutable std::map<std::pair<std::vector<size_t>, size_t>, fp::Subspace>
        image_cache_;
};

// Deterministic quotient representatives: numerator basis rows that add
// a new pivot on top of the denominator's echelon basis, in order.
fp::Matrix quotient_representatives(const fp::Field& F,
                                    const fp::Subspace& denominator,
                                    const fp::Subspace& numerator);

std::string script_H_report_json(const Homology& h, size_t n, size_t t_max,
                                 bool reduced);
std::string script_H_report_csv(const Homology& h, size_t n, size_t t_max,
                                bool reduced);

}  // namespace mbp::margolis
