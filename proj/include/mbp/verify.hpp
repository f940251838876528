#pragma once

#include "mbp/bpn_report.hpp"
#include "mbp/koszul_solver.hpp"

#include <cstdint>

namespace mbp::verify {

struct Config {
    uint32_t p = 3;
    size_t rank = 2;
    size_t n_max = 1;
    size_t max_degree = 24;
    ring::Model model = ring::Model::Koszul;
    bool reduced = false;
    uint64_t seed = 1;
    size_t solver_samples = 40;  // random cycles per index set
};

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;  // empty on pass
};

struct Result {
    bool all_pass = true;
    std::vector<CheckResult> checks;
    std::string report;  // deterministic text, one line per check
};

// Combinatorial dimension of the Margolis homology of Q_i predicted by
// the truncated-symmetric-power identification: monomials with every
// exponent < p^i (Koszul, on the polynomial part) or < 2^{i+1} (native).
size_t truncated_power_dim(const ring::Context& ctx, size_t i, size_t t);

// Runs the full theorem sweep for one configuration:
// nilpotence/anticommutation, Koszul exactness counts, scriptH odd
// vanishing and polynomial-part surjectivity, the multi-Koszul
// dimension equality per block, recursive-solver certificates on seeded
// random cycles, and the L-filtration checks.
Result run(const Config& cfg);

}  // namespace mbp::verify
