#pragma once

#include "rbpelm/elm.hpp"
#include "rbpelm/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rbpelm {

// Test-scale materializations of the block-inverse algebra. These build the
// N x N projector and the explicit 2x2 block inverse that the production
// solver deliberately avoids, so the two routes can be cross-checked.

/// C = I - H2 (H2^T H2)^{-1} H2^T, the projector onto the complement of
/// range(H2).
DenseMatrix materialize_projector(const DenseMatrix& h2);

/// D = H1^T C H1 built through the explicit projector.
DenseMatrix materialize_schur(const DenseMatrix& h1, const DenseMatrix& h2);

/// Beta from the explicitly assembled 2x2 block inverse (U1..U4) applied to
/// [H1^T Y; H2^T Y]. Stacked (L x m) result in [H1 H2] column order.
DenseMatrix u_block_beta(const DenseMatrix& h1, const DenseMatrix& h2, const DenseMatrix& y);

struct PropertyResult {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::uint64_t failing_seed = 0;  // seed of the first failing instance
};

/// Randomized property suite over the solver algebra: oracle equivalence,
/// U-block cross-check, projector properties, Penrose conditions, rank
/// agreement with the SVD, permutation round trips and prediction equality.
/// inject_fault perturbs one computation so the harness can prove it detects
/// failures.
std::vector<PropertyResult> run_verification(std::uint64_t seed, std::size_t cases,
                                             bool inject_fault = false);

}  // namespace rbpelm
