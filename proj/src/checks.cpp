#include "rbpelm/checks.hpp"

#include "rbpelm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rbpelm {

namespace {

DenseMatrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
        }
    }
    return m;
}

/// Relative infinity-norm difference.
double rel_inf(const DenseMatrix& got, const DenseMatrix& want) {
    return max_abs_diff(got, want) / (1.0 + max_abs(want));
}

struct Tracker {
    PropertyResult result;
    void observe(double err, std::uint64_t seed) {
        if (err > result.max_error) result.max_error = err;
        if (err > result.tolerance && result.pass) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
};

}  // namespace

DenseMatrix materialize_projector(const DenseMatrix& h2) {
    DenseMatrix a_inv_h2t = solve_spd(gram(h2), transpose(h2));
    return subtract(DenseMatrix::identity(h2.rows()), matmul(h2, a_inv_h2t));
}

DenseMatrix materialize_schur(const DenseMatrix& h1, const DenseMatrix& h2) {
    return matmul(transpose(h1), matmul(materialize_projector(h2), h1));
}

DenseMatrix u_block_beta(const DenseMatrix& h1, const DenseMatrix& h2, const DenseMatrix& y) {
    DenseMatrix g11 = gram(h1);
    DenseMatrix g22 = gram(h2);
    DenseMatrix g12 = matmul(transpose(h1), h2);
    DenseMatrix g21 = transpose(g12);

    DenseMatrix g11_inv = pinv_svd(g11);
    DenseMatrix g22_inv = pinv_svd(g22);

    // Schur complements of each diagonal block.
    DenseMatrix s1 = subtract(g11, matmul(g12, matmul(g22_inv, g21)));
    DenseMatrix s2 = subtract(g22, matmul(g21, matmul(g11_inv, g12)));
    DenseMatrix s1_inv = pinv_svd(s1);
    DenseMatrix s2_inv = pinv_svd(s2);

    DenseMatrix u1 = s1_inv;
    DenseMatrix u2 = scale(matmul(g11_inv, matmul(g12, s2_inv)), -1.0);
    DenseMatrix u3 = scale(matmul(g22_inv, matmul(g21, s1_inv)), -1.0);
    DenseMatrix u4 = s2_inv;

    DenseMatrix r1 = matmul(transpose(h1), y);
    DenseMatrix r2 = matmul(transpose(h2), y);
    DenseMatrix top = add(matmul(u1, r1), matmul(u2, r2));
    DenseMatrix bottom = add(matmul(u3, r1), matmul(u4, r2));
    return vstack(top, bottom);
}

std::vector<PropertyResult> run_verification(std::uint64_t seed, std::size_t cases,
                                             bool inject_fault) {
    Tracker block_eq{{"block-vs-direct-equivalence", 0.0, 1e-6}};
    Tracker ublock{{"u-block-cross-check", 0.0, 1e-8}};
    Tracker proj_sym{{"projector-symmetric", 0.0, 1e-8}};
    Tracker proj_idem{{"projector-idempotent", 0.0, 1e-8}};
    Tracker schur_sym{{"schur-symmetric", 0.0, 1e-12}};
    Tracker penrose{{"penrose-conditions", 0.0, 1e-8}};
    Tracker rank_svd{{"rank-matches-svd-count", 0.0, 0.5}};
    Tracker perm_rt{{"permutation-round-trip", 0.0, 0.0}};
    Tracker pred_eq{{"df-vs-rank-prediction-equality", 0.0, 0.0}};

    std::mt19937_64 seeder(seed);
    for (std::size_t c = 0; c < cases; ++c) {
        std::uint64_t case_seed = seeder();
        std::mt19937_64 gen(case_seed);

        std::size_t rows = 12 + gen() % 40;
        std::size_t cols = 2 + gen() % 10;
        if (cols + 2 > rows) cols = rows - 2;
        std::size_t m_out = 1 + gen() % 3;

        DenseMatrix h = random_matrix(gen, rows, cols);
        DenseMatrix y = random_matrix(gen, rows, m_out);

        // Block equivalence against the SVD oracle, at a random split.
        DenseMatrix oracle = matmul(pinv_svd(h), y);
        std::size_t split = 1 + gen() % (cols - 1);
        DenseMatrix h1 = take_columns(h, 0, split);
        DenseMatrix h2 = take_columns(h, split, cols);
        auto [b1, b2] = solve_block_split(h1, h2, y);
        DenseMatrix stacked = vstack(b1, b2);
        if (inject_fault) stacked(0, 0) += 1e-3;
        block_eq.observe(rel_inf(stacked, oracle), case_seed);

        // Explicit U-block route against the production path.
        ublock.observe(rel_inf(u_block_beta(h1, h2, y), stacked), case_seed);

        // Projector and Schur-complement structure.
        DenseMatrix proj = materialize_projector(h2);
        proj_sym.observe(rel_inf(proj, transpose(proj)), case_seed);
        proj_idem.observe(rel_inf(matmul(proj, proj), proj), case_seed);
        DenseMatrix schur = materialize_schur(h1, h2);
        schur_sym.observe(max_abs_diff(schur, transpose(schur)) / (1.0 + max_abs(schur)),
                          case_seed);

        // Penrose conditions; every third case gets a dependent column.
        DenseMatrix a = h;
        if (c % 3 == 0 && cols >= 2) {
            for (std::size_t i = 0; i < rows; ++i) a(i, cols - 1) = a(i, 0) + a(i, 1 % cols);
        }
        DenseMatrix ap = pinv_svd(a);
        penrose.observe(rel_inf(matmul(a, matmul(ap, a)), a), case_seed);
        penrose.observe(rel_inf(matmul(ap, matmul(a, ap)), ap), case_seed);
        DenseMatrix axa = matmul(a, ap);
        penrose.observe(rel_inf(axa, transpose(axa)), case_seed);
        DenseMatrix xax = matmul(ap, a);
        penrose.observe(rel_inf(xax, transpose(xax)), case_seed);

        // Rank from the permutation vs singular values above the same cut.
        const double rank_tol = 1e-6;
        ColumnPermutation p = rank_revealing_permutation(a, rank_tol);
        DenseMatrix sv_probe = pinv_svd(a, rank_tol);
        // count singular values above the cut through the SVD of a directly
        std::size_t sv_count = 0;
        {
            // pinv gives no direct access; redo the count via gram eigen trick:
            // sigma_i are sqrt of eigenvalues of a^T a, but a simple and
            // independent proxy is rank(pinv(a) * a) through its trace.
            DenseMatrix pa = matmul(sv_probe, a);
            double tr = 0.0;
            for (std::size_t i = 0; i < pa.rows(); ++i) tr += pa(i, i);
            sv_count = static_cast<std::size_t>(std::llround(tr));
        }
        rank_svd.observe(std::abs(static_cast<double>(p.rank) - static_cast<double>(sv_count)),
                         case_seed);

        // Permutation round trip must be bit-identical.
        DenseMatrix restored = invert_permutation_rows(transpose(apply_permutation(a, p)), p);
        perm_rt.observe(restored == transpose(a) ? 0.0 : 1.0, case_seed);

        // Same seed, full-rank H: df and rank strategies agree on every label.
        if (c % 5 == 0) {
            std::size_t n_feat = 3 + gen() % 4;
            std::size_t n_hidden = 4 + gen() % 6;
            std::size_t n_cls = 2 + gen() % 3;
            std::size_t n_samp = n_hidden + 10 + gen() % 20;
            DenseMatrix xs = random_matrix(gen, n_samp, n_feat);
            DenseMatrix ys(n_samp, n_cls, 0.0);
            for (std::size_t i = 0; i < n_samp; ++i) ys(i, gen() % n_cls) = 1.0;
            ElmParams params{n_feat, n_hidden, n_cls, Activation::Sigmoid, case_seed};
            auto [m_df, d_df] = train(params, xs, ys, SolverStrategy::df_split(n_hidden / 2));
            auto [m_rb, d_rb] = train(params, xs, ys, SolverStrategy::rank_based());
            DenseMatrix p_df = predict(m_df, xs);
            DenseMatrix p_rb = predict(m_rb, xs);
            std::size_t mismatches = 0;
            for (std::size_t i = 0; i < n_samp; ++i) {
                std::size_t a_df = 0, a_rb = 0;
                for (std::size_t j = 1; j < n_cls; ++j) {
                    if (p_df(i, j) > p_df(i, a_df)) a_df = j;
                    if (p_rb(i, j) > p_rb(i, a_rb)) a_rb = j;
                }
                if (a_df != a_rb) ++mismatches;
            }
            pred_eq.observe(static_cast<double>(mismatches), case_seed);
        }
    }

    return {block_eq.result, ublock.result,  proj_sym.result,
            proj_idem.result, schur_sym.result, penrose.result,
            rank_svd.result,  perm_rt.result, pred_eq.result};
}

}  // namespace rbpelm
