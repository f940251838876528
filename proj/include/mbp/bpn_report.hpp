#pragma once

#include "mbp/margolis.hpp"

namespace mbp::bpn {

using margolis::Homology;

// Per-degree dimension tables for the mod-p shadows of the truncated
// Brown-Peterson cohomology of BV: v_j-torsion (= Im Q_0...Q_j), the
// cotensor (= socle over {Q_0..Q_j}), L_j (= Psi intersect Im) and
// scriptH. Columns are indexed j = -1..n, with j = -1 the plain mod-p
// cohomology.
struct DimensionReport {
    uint32_t p;
    size_t d;
    std::string mode;
    size_t n;
    bool reduced;
    size_t t_max;
    // column[j + 1][t] for j in -1..n
    std::vector<std::vector<size_t>> vtor;
    std::vector<std::vector<size_t>> cotensor;
    std::vector<std::vector<size_t>> L;
    std::vector<std::vector<size_t>> scriptH;
};

struct CheckRow {
    size_t t;
    bool pass;
    std::string detail;
};

class Report {
  public:
    Report(const Homology& h, bool reduced) : h_(h), reduced_(reduced) {}

    std::vector<size_t> vtor_dims(int j, size_t t_max) const;
    std::vector<size_t> cotensor_dims(int j, size_t t_max) const;
    std::vector<size_t> L_dims(int j, size_t t_max) const;
    std::vector<size_t> scriptH_dims(int j, size_t t_max) const;

    // Per-degree check of the short exact sequence
    //   0 -> L_j -> L_{j-1} -> (Ker Q_j cap Im Q_0..Q_{j-1}) / Im Q_0..Q_j -> 0
    // at the level of dimensions, containment first.
    std::vector<CheckRow> L_filtration_check(size_t j, size_t t_max) const;

    // Mod-p shadow consistency of the main splitting sequence: the
    // tautology guard dim scriptH = dim socle - dim image plus the
    // substantive polynomial-part surjectivity. Full ranks over the
    // BP<n> coefficients are out of scope.
    std::vector<CheckRow> ses_consistency(size_t j, size_t t_max) const;

    DimensionReport build(size_t n, size_t t_max) const;

    const Homology& homology() const { return h_; }
    bool reduced() const { return reduced_; }

  private:
    std::vector<size_t> upto(size_t j) const;

    const Homology& h_;
    bool reduced_;
};

std::string to_json(const DimensionReport& r);
std::string to_csv(const DimensionReport& r);
// Each column as a polynomial in s, truncated with an O(s^{D+1}) marker.
std::string to_poincare(const DimensionReport& r);

}  // namespace mbp::bpn
