#pragma once

#include "rbpelm/linalg.hpp"
#include "rbpelm/matrix.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace rbpelm {

enum class Activation { Sigmoid };

struct ElmParams {
    std::size_t inputs = 1;        // n, input-feature count
    std::size_t hidden_nodes = 1;  // L
    std::size_t outputs = 1;       // m
    Activation activation = Activation::Sigmoid;
    std::uint64_t seed = 0;
};

/// Frozen random input-to-hidden weights and biases.
struct HiddenLayer {
    DenseMatrix weights;  // n x L
    DenseMatrix biases;   // 1 x L
};

struct ElmModel {
    ElmParams params;
    HiddenLayer hidden;
    DenseMatrix beta;  // L x m, in original hidden-node order
};

/// Selects the output-weight computation path.
struct SolverStrategy {
    enum class Kind { Direct, DfSplit, RankBased };

    Kind kind = Kind::Direct;
    std::size_t split_index = 0;  // DfSplit: 1 <= split_index < L
    double rank_tol = 0.0;        // RankBased: 0 = default tolerance

    static SolverStrategy direct() { return {Kind::Direct, 0, 0.0}; }
    static SolverStrategy df_split(std::size_t split) { return {Kind::DfSplit, split, 0.0}; }
    static SolverStrategy rank_based(double tol = 0.0) { return {Kind::RankBased, 0, tol}; }

    std::string describe() const;
};

/// Observability record for one beta solve.
struct SolveDiagnostics {
    std::string strategy;
    std::size_t rank = 0;       // RankBased only (0 otherwise)
    bool rank_known = false;
    std::size_t split_lo = 0;   // sizes of the two column blocks; sum to L
    std::size_t split_hi = 0;   // (L, 0) when no split was used
    bool ridge_applied = false;
    bool fallback_to_direct = false;
    bool used_svd_path = false;
    double solve_seconds = 0.0;   // beta computation only
    double hidden_seconds = 0.0;  // H construction, measured separately
    double training_accuracy = -1.0;  // argmax match on the training targets
};

/// Raised by solve_block_split when a Gram block stays singular even after
/// the ridge retry. Callers fall back to the direct solver.
class SingularSplit : public std::runtime_error {
public:
    enum class Block { A, D };
    explicit SingularSplit(Block which);
    Block which;
};

HiddenLayer init_hidden(const ElmParams& params);

/// H[i][j] = sigmoid(sum_k X[i][k] * W[k][j] + b[j]).
DenseMatrix hidden_matrix(const HiddenLayer& hidden, const DenseMatrix& x);

/// Least-squares beta minimizing ||H beta - Y||_F. Normal equations when
/// N >= L and the Gram matrix is nonsingular, otherwise the SVD
/// pseudoinverse path. diag (optional) records which path ran.
DenseMatrix solve_direct(const DenseMatrix& h, const DenseMatrix& y,
                         SolveDiagnostics* diag = nullptr);

/// Block solve for H = [H1 H2]: eliminates the H2 block through its Gram
/// matrix and the Schur complement, never materializing the N x N projector.
/// ridge is the relative ridge used for the single rescue retry of a
/// singular block (scaled by trace/dim of the failing matrix).
std::pair<DenseMatrix, DenseMatrix> solve_block_split(const DenseMatrix& h1,
                                                      const DenseMatrix& h2,
                                                      const DenseMatrix& y,
                                                      double ridge = 1e-8,
                                                      SolveDiagnostics* diag = nullptr);

/// The per-strategy beta computation on an already-built hidden matrix:
/// rank detection, column split, block solve, un-permutation and fallbacks.
/// train() delegates here after constructing H.
DenseMatrix solve_beta(const DenseMatrix& h, const DenseMatrix& y,
                       const SolverStrategy& strategy, SolveDiagnostics& diag);

std::pair<ElmModel, SolveDiagnostics> train(const ElmParams& params, const DenseMatrix& x,
                                            const DenseMatrix& y,
                                            const SolverStrategy& strategy);

DenseMatrix predict(const ElmModel& model, const DenseMatrix& x);

/// Fraction of rows where argmax(pred) == argmax(y); ties to lowest index.
double accuracy(const DenseMatrix& pred, const DenseMatrix& y);

}  // namespace rbpelm
