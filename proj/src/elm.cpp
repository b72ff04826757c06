#include "rbpelm/elm.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace rbpelm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Uniform draw on [-1, 1] from the top 53 bits of the generator output;
/// identical bits on every platform for a given seed.
double uniform_pm1(std::mt19937_64& gen) {
    double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Factor a Gram block, retrying once with a ridge when a pivot fails.
SpdFactor factor_with_ridge(const DenseMatrix& m, double ridge, bool& ridge_applied,
                            SingularSplit::Block block) {
    try {
        return SpdFactor(m);
    } catch (const SingularMatrix&) {
        double tr = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) tr += m(i, i);
        double eps = ridge * tr / static_cast<double>(m.rows());
        if (eps <= 0.0) eps = ridge;
        DenseMatrix rescued = m;
        for (std::size_t i = 0; i < m.rows(); ++i) rescued(i, i) += eps;
        try {
            SpdFactor f(rescued);
            ridge_applied = true;
            return f;
        } catch (const SingularMatrix&) {
            throw SingularSplit(block);
        }
    }
}

}  // namespace

std::string SolverStrategy::describe() const {
    switch (kind) {
        case Kind::Direct:
            return "direct";
        case Kind::DfSplit:
            return "df:" + std::to_string(split_index);
        case Kind::RankBased: {
            if (rank_tol <= 0.0) return "rank";
            std::ostringstream os;
            os << "rank:" << rank_tol;
            return os.str();
        }
    }
    return "?";
}

SingularSplit::SingularSplit(Block b)
    : std::runtime_error(std::string("singular ") + (b == Block::A ? "A" : "D") +
                         " block after ridge retry"),
      which(b) {}

HiddenLayer init_hidden(const ElmParams& params) {
    if (params.inputs < 1 || params.hidden_nodes < 1 || params.outputs < 1) {
        throw std::invalid_argument("ElmParams: inputs, hidden_nodes and outputs must be >= 1");
    }
    std::mt19937_64 gen(params.seed);
    HiddenLayer h;
    h.weights = DenseMatrix(params.inputs, params.hidden_nodes, 0.0);
    for (std::size_t i = 0; i < params.inputs; ++i) {
        for (std::size_t j = 0; j < params.hidden_nodes; ++j) {
            h.weights(i, j) = uniform_pm1(gen);
        }
    }
    h.biases = DenseMatrix(1, params.hidden_nodes, 0.0);
    for (std::size_t j = 0; j < params.hidden_nodes; ++j) {
        h.biases(0, j) = uniform_pm1(gen);
    }
    return h;
}

DenseMatrix hidden_matrix(const HiddenLayer& hidden, const DenseMatrix& x) {
    if (x.cols() != hidden.weights.rows()) {
        throw ShapeError("hidden_matrix: sample has " + std::to_string(x.cols()) +
                         " features but the layer expects " +
                         std::to_string(hidden.weights.rows()));
    }
    DenseMatrix h = matmul(x, hidden.weights);
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t j = 0; j < h.cols(); ++j) {
            h(i, j) = sigmoid(h(i, j) + hidden.biases(0, j));
        }
    }
    return h;
}

DenseMatrix solve_direct(const DenseMatrix& h, const DenseMatrix& y, SolveDiagnostics* diag) {
    if (h.rows() != y.rows()) {
        throw ShapeError("solve_direct: H is " + h.shape_str() + " but Y is " + y.shape_str());
    }
    if (h.rows() >= h.cols()) {
        try {
            SpdFactor f(gram(h));
            return f.solve(matmul_at(h, y));
        } catch (const SingularMatrix&) {
            // fall through to the pseudoinverse path
        }
    }
    if (diag) diag->used_svd_path = true;
    return matmul(pinv_svd(h), y);
}

std::pair<DenseMatrix, DenseMatrix> solve_block_split(const DenseMatrix& h1,
                                                      const DenseMatrix& h2,
                                                      const DenseMatrix& y, double ridge,
                                                      SolveDiagnostics* diag) {
    const std::size_t n = h1.rows();
    if (h2.rows() != n || y.rows() != n) {
        throw ShapeError("solve_block_split: row counts differ (" + h1.shape_str() + ", " +
                         h2.shape_str() + ", " + y.shape_str() + ")");
    }
    if (n < h1.cols() + h2.cols()) {
        throw ShapeError("solve_block_split: needs at least as many samples as columns");
    }
    bool ridge_applied = false;

    DenseMatrix a = gram(h2);                           // H2^T H2
    DenseMatrix g21 = matmul_at(h2, h1);                // H2^T H1
    SpdFactor fa = factor_with_ridge(a, ridge, ridge_applied, SingularSplit::Block::A);

    DenseMatrix b = fa.solve(matmul_at(h2, y));          // A^{-1} H2^T Y

    // Schur complement D = H1^T H1 - (H2^T H1)^T A^{-1} (H2^T H1); the N x N
    // projector is never formed.
    DenseMatrix d = subtract(gram(h1), matmul(transpose(g21), fa.solve(g21)));
    d = scale(add(d, transpose(d)), 0.5);  // symmetrize rounding noise
    SpdFactor fd = factor_with_ridge(d, ridge, ridge_applied, SingularSplit::Block::D);

    DenseMatrix residual = subtract(y, matmul(h2, b));
    DenseMatrix beta1 = fd.solve(matmul_at(h1, residual));
    DenseMatrix beta2 = subtract(b, fa.solve(matmul(g21, beta1)));

    if (diag && ridge_applied) diag->ridge_applied = true;
    return {std::move(beta1), std::move(beta2)};
}

DenseMatrix solve_beta(const DenseMatrix& h, const DenseMatrix& y,
                       const SolverStrategy& strategy, SolveDiagnostics& diag) {
    const std::size_t l = h.cols();
    diag.strategy = strategy.describe();
    switch (strategy.kind) {
        case SolverStrategy::Kind::Direct: {
            diag.split_lo = l;
            diag.split_hi = 0;
            return solve_direct(h, y, &diag);
        }
        case SolverStrategy::Kind::DfSplit: {
            const std::size_t s = strategy.split_index;
            if (s < 1 || s >= l) {
                throw std::invalid_argument("solve_beta: df split index must be in (0, " +
                                            std::to_string(l) + "), got " + std::to_string(s));
            }
            diag.split_lo = s;
            diag.split_hi = l - s;
            DenseMatrix h1 = take_columns(h, 0, s);
            DenseMatrix h2 = take_columns(h, s, l);
            try {
                auto [b1, b2] = solve_block_split(h1, h2, y, 1e-8, &diag);
                return vstack(b1, b2);
            } catch (const SingularSplit&) {
                diag.fallback_to_direct = true;
                return solve_direct(h, y, &diag);
            }
        }
        case SolverStrategy::Kind::RankBased: {
            RankRevealingFactor fac = rank_revealing_factor(h, strategy.rank_tol);
            const ColumnPermutation& p = fac.permutation;
            diag.rank = p.rank;
            diag.rank_known = true;
            if (p.rank == 0 || l < 2) {
                diag.fallback_to_direct = true;
                diag.split_lo = l;
                diag.split_hi = 0;
                return solve_direct(h, y, &diag);
            }
            // Full rank would leave H2 empty; split the permuted columns in
            // the middle so the block path still runs.
            const std::size_t split = (p.rank == l) ? (l + 1) / 2 : p.rank;
            diag.split_lo = split;
            diag.split_hi = l - split;
            if (p.rank == l) {
                // Rank detection already completed the triangular elimination
                // of the permuted Gram, covering both column blocks; reusing
                // that factor solves the normal equations without repeating
                // any of the block algebra.
                DenseMatrix hty = matmul_at(h, y);
                DenseMatrix htyp(l, hty.cols(), 0.0);
                for (std::size_t i = 0; i < l; ++i) {
                    for (std::size_t j = 0; j < hty.cols(); ++j) {
                        htyp(i, j) = hty(p.order[i], j);
                    }
                }
                return invert_permutation_rows(solve_factored_gram(fac, htyp), p);
            }
            DenseMatrix hp = apply_permutation(h, p);
            DenseMatrix h1 = take_columns(hp, 0, split);
            DenseMatrix h2 = take_columns(hp, split, l);
            try {
                auto [b1, b2] = solve_block_split(h1, h2, y, 1e-8, &diag);
                return invert_permutation_rows(vstack(b1, b2), p);
            } catch (const SingularSplit&) {
                diag.fallback_to_direct = true;
                return solve_direct(h, y, &diag);
            }
        }
    }
    throw std::logic_error("solve_beta: unknown strategy");
}

std::pair<ElmModel, SolveDiagnostics> train(const ElmParams& params, const DenseMatrix& x,
                                            const DenseMatrix& y,
                                            const SolverStrategy& strategy) {
    if (x.rows() != y.rows()) {
        throw ShapeError("train: X is " + x.shape_str() + " but Y is " + y.shape_str());
    }
    if (x.cols() != params.inputs) {
        throw ShapeError("train: X has " + std::to_string(x.cols()) +
                         " features but params.inputs is " + std::to_string(params.inputs));
    }
    if (y.cols() != params.outputs) {
        throw ShapeError("train: Y has " + std::to_string(y.cols()) +
                         " columns but params.outputs is " + std::to_string(params.outputs));
    }
    const std::size_t n_samples = x.rows();
    const std::size_t l = params.hidden_nodes;

    if (strategy.kind != SolverStrategy::Kind::Direct && n_samples < l) {
        throw std::invalid_argument(
            "train: block strategies need at least as many samples as hidden nodes (" +
            std::to_string(n_samples) + " < " + std::to_string(l) +
            "); use the direct strategy");
    }
    if (strategy.kind == SolverStrategy::Kind::DfSplit &&
        (strategy.split_index < 1 || strategy.split_index >= l)) {
        throw std::invalid_argument("train: df split index must be in (0, " + std::to_string(l) +
                                    "), got " + std::to_string(strategy.split_index));
    }

    SolveDiagnostics diag;
    diag.strategy = strategy.describe();

    ElmModel model;
    model.params = params;
    model.hidden = init_hidden(params);

    auto t_hidden = Clock::now();
    DenseMatrix h = hidden_matrix(model.hidden, x);
    diag.hidden_seconds = seconds_since(t_hidden);

    auto t_solve = Clock::now();
    model.beta = solve_beta(h, y, strategy, diag);
    diag.solve_seconds = seconds_since(t_solve);

    if (!model.beta.all_finite()) {
        throw std::runtime_error("train: solver produced non-finite output weights");
    }
    diag.training_accuracy = accuracy(matmul(h, model.beta), y);
    return {std::move(model), std::move(diag)};
}

DenseMatrix predict(const ElmModel& model, const DenseMatrix& x) {
    return matmul(hidden_matrix(model.hidden, x), model.beta);
}

double accuracy(const DenseMatrix& pred, const DenseMatrix& y) {
    if (!pred.same_shape(y)) {
        throw ShapeError("accuracy: shapes differ, " + pred.shape_str() + " vs " + y.shape_str());
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.rows(); ++i) {
        std::size_t ap = 0, ay = 0;
        for (std::size_t j = 1; j < pred.cols(); ++j) {
            if (pred(i, j) > pred(i, ap)) ap = j;
            if (y(i, j) > y(i, ay)) ay = j;
        }
        if (ap == ay) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pred.rows());
}

}  // namespace rbpelm
