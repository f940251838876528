#pragma once

#include "mbp/milnor.hpp"

#include <map>
#include <mutex>
#include <optional>

namespace mbp::koszul {

using milnor::Ops;
using ring::Element;

// Bidegree (a, b) of a Koszul-model element concentrated in a single
// exterior block; nullopt if the element mixes blocks or is zero.
std::optional<std::pair<size_t, size_t>> bidegree_of(const Element& x);

struct not_a_cycle : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct exactness_failure : std::logic_error {
    using std::logic_error::logic_error;
};

// Result of a single-derivation preimage request. In exterior degree
// a >= 1 the Koszul complex is exact, so a cycle always has a preimage;
// at the a = 0 edge the obstruction is the class in the truncated
// symmetric power, returned when no preimage exists.
struct PreimageResult {
    std::optional<Element> preimage;
    std::optional<Element> obstruction;
};

// Witness trace from the descending-k construction.
struct TraceStep {
    size_t k;
    Element alpha;
    std::optional<Element> beta;
    std::optional<Element> gamma;
};

struct PreimageCertificate {
    Element input;
    std::vector<size_t> index_set;
    Element output;
    std::vector<TraceStep> trace;
};

class Solver {
  public:
    explicit Solver(const Ops& ops) : ops_(ops) {}

    // y with Q_i y = x, given Q_i x = 0. Hard error if exactness fails
    // where the acyclicity lemma guarantees it (exterior degree >= 1).
    PreimageResult koszul_preimage(size_t i, const Element& x) const;

    // The recursive multi-Koszul construction: given x in block (a, b)
    // with a >= 1 and Q_i x = 0 for all i in I, produce y with
    // composite(I) y = x, together with the alpha/beta/gamma witness
    // trace. The certificate is validated on emission.
    PreimageCertificate multi_preimage_recursive(
        const std::vector<size_t>& I, const Element& x) const;

    // Independent check: direct linear solve against the composite
    // matrix restricted to the block. No cycle precondition.
    std::optional<Element> multi_preimage_oracle(const std::vector<size_t>& I,
                                                const Element& x) const;

    const Ops& ops() const { return ops_; }

  private:
    Element recursive_step(const std::vector<size_t>& I, const Element& x,
                           std::vector<TraceStep>* trace) const;
    std::optional<Element> block_solve(size_t i, const Element& x) const;

    const Ops& ops_;
    // RREF factorizations of single-Q_i block systems, keyed on
    // (i, target degree, target exterior block); the descending-k loop
    // re-enters the same blocks.
    mutable std::mutex cache_mutex_;
    mutable std::map<std::tuple<size_t, size_t, size_t>,
                     std::shared_ptr<const fp::Solver>>
        solver_cache_;
    mutable std::map<std::tuple<size_t, size_t, size_t>,
                     std::vector<size_t>>
        col_index_cache_;
};

// Checks conditions (cond1) and (cond2) for every trace step; throws on
// violation. Used by the solver itself and exposed for tests.
void validate_certificate(const Ops& ops, const PreimageCertificate& cert);

}  // namespace mbp::koszul
