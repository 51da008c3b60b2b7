#include <doctest.h>

#include <cmath>

#include <ionet/chains.hpp>
#include <ionet/random_instances.hpp>

using namespace ionet;

namespace {

// Sub-stochastic singleton chain: firm i buys everything from firm i-1, the
// head row is empty.
IoMatrix singleton_chain_matrix(long m) {
    Matrix w = Matrix::Zero(m, m);
    for (long i = 1; i < m; ++i)
        w(i, i - 1) = 1.0;
    return IoMatrix::from_substochastic(w);
}

std::vector<std::vector<int>> singleton_blocks(long m) {
    std::vector<std::vector<int>> blocks;
    for (long i = 0; i < m; ++i)
        blocks.push_back({static_cast<int>(i)});
    return blocks;
}

} // namespace

TEST_CASE("chain validation accepts singleton chains") {
    const IoMatrix w = singleton_chain_matrix(5);
    const ChainPartition part = ChainPartition::validate(w, singleton_blocks(5));
    CHECK(part.block_count() == 5);
}

TEST_CASE("chain validation rejects bad partitions and edges") {
    const IoMatrix w = singleton_chain_matrix(4);

    SUBCASE("not a partition") {
        try {
            ChainPartition::validate(w, {{0, 1}, {1, 2, 3}});
            FAIL("expected NotAPartition");
        } catch (const Error &e) {
            CHECK(e.code() == errc::not_a_partition);
        }
        CHECK_THROWS_AS(ChainPartition::validate(w, {{0, 1}, {2}}), Error);
    }
    SUBCASE("supplier in the next block is a direction violation") {
        // firm 0 buying from firm 1 ships goods against the chain direction
        Matrix m = Matrix::Zero(3, 3);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        m(2, 1) = 1.0;
        const IoMatrix bad = IoMatrix::from_substochastic(m);
        try {
            ChainPartition::validate(bad, {{0}, {1}, {2}});
            FAIL("expected BackEdge");
        } catch (const Error &e) {
            CHECK(e.code() == errc::back_edge);
        }
    }
    SUBCASE("edge spanning non-adjacent blocks") {
        Matrix m = Matrix::Zero(4, 4);
        m(1, 0) = 1.0;
        m(2, 1) = 1.0;
        m(3, 0) = 1.0; // block 4 buying straight from block 1
        const IoMatrix bad = IoMatrix::from_substochastic(m);
        try {
            ChainPartition::validate(bad, singleton_blocks(4));
            FAIL("expected SkipEdge");
        } catch (const Error &e) {
            CHECK(e.code() == errc::skip_edge);
        }
    }
}

TEST_CASE("singleton chain decomposition") {
    const long m = 6;
    const IoMatrix w = singleton_chain_matrix(m);
    const ChainPartition part = ChainPartition::validate(w, singleton_blocks(m));
    for (double a : {0.2, 0.5, 0.8}) {
        const ChainDecomposition dec = decompose(w, part, LaborShare(a));
        CHECK(dec.weakly_coupled);
        CHECK(dec.gamma == doctest::Approx(1.0 - a).epsilon(1e-10));
        for (size_t r = 0; r + 1 < static_cast<size_t>(m); ++r) {
            CHECK(dec.diag[r].rows() == 1);
            CHECK(dec.diag[r](0, 0) == 0.0);
            CHECK(dec.interface_t[r](0, 0) == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("decomposition reassembles the original matrix") {
    Rng rng(101);
    for (int t = 0; t < 20; ++t) {
        const long m = rng.uniform_int(2, 6);
        const LaborShare a(rng.uniform(0.4, 0.8));
        const auto sizes = chain_sizes(rng, a.value(), m, 4);
        const auto [w, part] = random_weakly_coupled_chain(rng, sizes, a);
        const ChainDecomposition dec = decompose(w, part, a);
        CHECK((reassemble(dec) - w.entries()).cwiseAbs().maxCoeff() == 0.0);
        // block extraction keeps the blocks orthogonal: diagonal blocks of
        // distinct ranges never overlap, so W_r W_s = 0 entrywise for r != s
        for (size_t r = 0; r + 1 < dec.diag.size(); ++r) {
            Matrix w1 = Matrix::Zero(w.size(), w.size());
            Matrix w2 = Matrix::Zero(w.size(), w.size());
            long off = 0;
            for (size_t k = 0; k < dec.diag.size(); ++k) {
                if (k == r)
                    w1.block(off, off, dec.diag[k].rows(), dec.diag[k].cols()) = dec.diag[k];
                if (k == r + 1)
                    w2.block(off, off, dec.diag[k].rows(), dec.diag[k].cols()) = dec.diag[k];
                off += dec.diag[k].rows();
            }
            CHECK((w1 * w2).cwiseAbs().maxCoeff() == 0.0);
            CHECK((w2 * w1).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("coupling constant matches a dense SVD oracle") {
    Rng rng(103);
    for (int t = 0; t < 10; ++t) {
        const LaborShare a(rng.uniform(0.45, 0.75));
        const auto sizes = chain_sizes(rng, a.value(), 2, 4);
        const auto [w, part] = random_weakly_coupled_chain(rng, sizes, a);
        const ChainDecomposition dec = decompose(w, part, a);
        // oracle: gamma via Eigen's SVD on the explicitly assembled product
        const Matrix w1 = dec.diag[0];
        const Matrix sys = Matrix::Identity(w1.rows(), w1.rows()) -
                           (1.0 - a.value()) * w1.transpose();
        const Matrix prod = sys.lu().solve(dec.interface_t[0]);
        const double oracle =
            (1.0 - a.value()) * Eigen::JacobiSVD<Matrix>(prod).singularValues()(0);
        CHECK(dec.gamma == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("interaction matrix block formula equals the direct inverse") {
    Rng rng(107);
    for (int t = 0; t < 40; ++t) {
        const LaborShare a(rng.uniform(0.2, 0.8));
        const auto [w, m1] =
            random_bipartition_instance(rng, rng.uniform_int(2, 5), rng.uniform_int(2, 5), a);
        std::vector<int> first;
        for (long i = 0; i < m1; ++i)
            first.push_back(static_cast<int>(i));
        const BipartitionDecomposition bip = decompose_bipartition(w, first, a);
        const Matrix diff = interaction_matrix(bip) - interaction_matrix_direct(bip);
        CHECK(diff.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("no interaction means the identity matrix") {
    // two closed 2-cycles, no cross edges
    Matrix m = Matrix::Zero(4, 4);
    m(0, 1) = m(1, 0) = 1.0;
    m(2, 3) = m(3, 2) = 1.0;
    const IoMatrix w = IoMatrix::validate(m, ValidationMode::strict);
    const BipartitionDecomposition bip = decompose_bipartition(w, {0, 1}, LaborShare(0.4));
    CHECK(bip.gamma == 0.0);
    CHECK((interaction_matrix(bip) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("directed bipartition gives a triangular interaction matrix") {
    Rng rng(109);
    const std::vector<long> sizes{3, 2};
    const LaborShare a(0.45);
    const auto [w, part] = random_weakly_coupled_chain(rng, sizes, a);
    const BipartitionDecomposition bip = decompose_bipartition(w, part.blocks()[0], a);
    CHECK(bip.a2.cwiseAbs().maxCoeff() == 0.0); // chain direction: one-sided
    const Matrix s = interaction_matrix(bip);
    CHECK((s.topLeftCorner(3, 3) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((s.bottomRightCorner(2, 2) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(s.bottomLeftCorner(2, 3).cwiseAbs().maxCoeff() == 0.0);
    // off block is (1-a) L_1 A_1
    const Matrix sys =
        Matrix::Identity(3, 3) - (1.0 - a.value()) * bip.w1.transpose();
    const Matrix expect = (1.0 - a.value()) * sys.lu().solve(bip.a1);
    CHECK((s.topRightCorner(3, 2) - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("bipartition influence identity") {
    Rng rng(113);
    for (int t = 0; t < 20; ++t) {
        const LaborShare a(rng.uniform(0.25, 0.75));
        const auto [w, m1] =
            random_bipartition_instance(rng, rng.uniform_int(2, 5), rng.uniform_int(2, 5), a);
        std::vector<int> first;
        for (long i = 0; i < m1; ++i)
            first.push_back(static_cast<int>(i));
        const BipartitionDecomposition bip = decompose_bipartition(w, first, a);
        const Matrix s = interaction_matrix(bip);
        const Eigen::Index n = w.size();
        const Eigen::Index m2 = n - m1;
        // v_W = S ((m1/N) v1 (+) (m2/N) v2)
        const Matrix l1 =
            (Matrix::Identity(m1, m1) - (1.0 - a.value()) * bip.w1.transpose())
                .lu()
                .solve(Matrix::Identity(m1, m1));
        const Matrix l2 =
            (Matrix::Identity(m2, m2) - (1.0 - a.value()) * bip.w2.transpose())
                .lu()
                .solve(Matrix::Identity(m2, m2));
        Vec stacked(n);
        stacked.head(m1) =
            (a.value() / static_cast<double>(n)) * (l1 * ones(m1));
        stacked.tail(m2) =
            (a.value() / static_cast<double>(n)) * (l2 * ones(m2));
        const Vec via_blocks = s * stacked;
        const Vec direct = influence_direct(w, a).v;
        CHECK((via_blocks - direct).cwiseAbs().maxCoeff() <= 1e-11);
    }
}

TEST_CASE("neumann partial sums decay geometrically") {
    Rng rng(127);
    int checked = 0;
    for (int t = 0; t < 20 && checked < 10; ++t) {
        const LaborShare a(rng.uniform(0.3, 0.6));
        const auto [w, m1] = random_bipartition_instance(rng, 3, 3, a, 0.85);
        std::vector<int> first;
        for (long i = 0; i < m1; ++i)
            first.push_back(static_cast<int>(i));
        const BipartitionDecomposition bip = decompose_bipartition(w, first, a);
        if (bip.gamma < 0.05)
            continue;
        const auto res = neumann_residuals(bip, 12);
        for (size_t k = 0; k + 2 < res.size(); ++k) {
            if (res[k] <= 1e-13)
                break;
            const double two_step = std::sqrt(res[k + 2] / res[k]);
            CHECK(two_step <= bip.gamma + 0.05);
        }
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("single-block chains reduce to the direct solver") {
    Rng rng(131);
    const IoMatrix w = random_io_matrix(rng, 6);
    const ChainPartition part = ChainPartition::validate(w, {{0, 1, 2, 3, 4, 5}});
    const LaborShare a(0.35);
    const Vec via_chain = chain_influence(w, part, a).v;
    CHECK((via_chain - influence_direct(w, a).v).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("singleton chain of five blocks matches the direct solve") {
    const IoMatrix w = singleton_chain_matrix(5);
    const ChainPartition part = ChainPartition::validate(w, singleton_blocks(5));
    const LaborShare a(0.5);
    const Vec via_chain = chain_influence(w, part, a).v;
    const Eigen::Index n = w.size();
    const Matrix sys = Matrix::Identity(n, n) - 0.5 * w.entries().transpose();
    const Vec direct = sys.lu().solve((0.5 / 5.0) * ones(n));
    CHECK((via_chain - direct).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("chain influence equals the direct solver on random chains") {
    Rng rng(137);
    for (int t = 0; t < 60; ++t) {
        const long m = rng.uniform_int(2, 8);
        const LaborShare a(rng.uniform(0.4, 0.8));
        const auto sizes = chain_sizes(rng, a.value(), m, 6);
        const auto [w, part] = random_weakly_coupled_chain(rng, sizes, a);
        const InfluenceResult res = chain_influence(w, part, a);
        CHECK((res.v - influence_direct(w, a).v).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(res.residual <= 1e-9);
    }
}

TEST_CASE("truncation bound on tail-perturbed chains") {
    Rng rng(139);
    int done = 0;
    while (done < 100) {
        const long m = rng.uniform_int(3, 7);
        const LaborShare a(rng.uniform(0.4, 0.7));
        const auto sizes = chain_sizes(rng, a.value(), m, 4);
        const auto [w, part] = random_weakly_coupled_chain(rng, sizes, a);
        const long k_cut = rng.uniform_int(2, m - 1);
        const IoMatrix u = perturb_chain_tail(rng, w, part, k_cut);
        const double gamma =
            std::max(decompose(w, part, a).gamma, decompose(u, part, a).gamma);
        if (gamma >= 0.999)
            continue;
        const long q = rng.uniform_int(1, k_cut);
        const double measured =
            projected_error(influence_direct(w, a).v, influence_direct(u, a).v, part, q);
        CHECK(measured <= truncation_bound(part, gamma, q, k_cut) + 1e-12);
        ++done;
    }
}

TEST_CASE("tail perturbation only touches tail-block suppliers") {
    Rng rng(149);
    const std::vector<long> sizes{2, 2, 1, 2, 1};
    const LaborShare a(0.5);
    const auto [w, part] = random_weakly_coupled_chain(rng, sizes, a);
    const long k_cut = 3;
    const IoMatrix u = perturb_chain_tail(rng, w, part, k_cut);
    std::vector<bool> tail_col(static_cast<size_t>(w.size()), false);
    for (long r = k_cut - 1; r < part.block_count(); ++r)
        for (int j : part.blocks()[static_cast<size_t>(r)])
            tail_col[static_cast<size_t>(j)] = true;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        for (Eigen::Index j = 0; j < w.size(); ++j)
            if (!tail_col[static_cast<size_t>(j)])
                CHECK(w(i, j) == u(i, j));
}

TEST_CASE("identical matrices have zero projected error") {
    Rng rng(151);
    const std::vector<long> sizes{2, 1, 1, 2};
    const LaborShare a(0.5);
    const auto [w, part] = random_weakly_coupled_chain(rng, sizes, a);
    const Vec v = influence_direct(w, a).v;
    CHECK(projected_error(v, v, part, 2) == 0.0);
    const double g = decompose(w, part, a).gamma;
    CHECK(truncation_bound(part, g, 2, 3) >= 0.0);
}

TEST_CASE("truncation bound formula on singleton chains") {
    const long m = 10;
    const IoMatrix w = singleton_chain_matrix(m);
    const ChainPartition part = ChainPartition::validate(w, singleton_blocks(m));
    const double a = 0.5;
    const double gamma = decompose(w, part, LaborShare(a)).gamma;
    CHECK(gamma == doctest::Approx(1.0 - a).epsilon(1e-10));
    for (long k : {3L, 6L, 9L}) {
        const double bound = truncation_bound(part, gamma, 1, k);
        const double expect = 2.0 * static_cast<double>(m - k + 1) / static_cast<double>(m) *
                              std::pow(1.0 - a, static_cast<double>(k - 1));
        CHECK(bound == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("bound input validation") {
    const IoMatrix w = singleton_chain_matrix(5);
    const ChainPartition part = ChainPartition::validate(w, singleton_blocks(5));
    CHECK_THROWS_AS(truncation_bound(part, 0.5, 0, 3), Error);
    CHECK_THROWS_AS(truncation_bound(part, 0.5, 4, 3), Error);
    CHECK_THROWS_AS(truncation_bound(part, 0.5, 2, 5), Error);
    CHECK_THROWS_AS(truncation_bound(part, 1.0, 1, 3), Error);
    CHECK_THROWS_AS(combined_bound(LaborShare(0.5), 1.2, 0.1, 3), Error);
    CHECK_THROWS_AS(combined_bound(LaborShare(0.5), 0.5, 1.0, 3), Error);
}

TEST_CASE("combined bound arithmetic") {
    const double b = combined_bound(LaborShare(0.5), 0.5, 0.1, 10);
    CHECK(b == doctest::Approx(0.1 * 0.5 * 1.9 / (0.5 * 0.9) + 2.0 / 1024.0).epsilon(1e-12));
    // exact far data and a deep neighborhood drive the bound to zero
    CHECK(combined_bound(LaborShare(0.5), 0.5, 0.0, 60) <= 1e-15);
}

TEST_CASE("chain influence refuses strong coupling") {
    // both tail firms buy 50/50 from a 2-cycle head: gamma lands exactly at 1
    Matrix m = Matrix::Zero(4, 4);
    m(0, 1) = m(1, 0) = 1.0;
    m(2, 0) = m(2, 1) = 0.5;
    m(3, 0) = m(3, 1) = 0.5;
    const IoMatrix w = IoMatrix::validate(m, ValidationMode::strict);
    const ChainPartition part = ChainPartition::validate(w, {{0, 1}, {2, 3}});
    const ChainDecomposition dec = decompose(w, part, LaborShare(0.5));
    CHECK(dec.gamma == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(dec.weakly_coupled);
    try {
        chain_influence(w, part, LaborShare(0.5));
        FAIL("expected NotWeaklyCoupled");
    } catch (const Error &e) {
        CHECK(e.code() == errc::not_weakly_coupled);
    }
}

TEST_CASE("coupling gate errors") {
    // row-stochastic inputs balance the two interface norms, so drive the
    // gate directly with a fabricated decomposition whose Neumann expansion
    // genuinely diverges (spectral radius of the iteration matrix above 1)
    BipartitionDecomposition bip;
    bip.alpha = 0.2;
    bip.order = {0, 1};
    bip.w1 = Matrix::Zero(1, 1);
    bip.w2 = Matrix::Zero(1, 1);
    bip.a1 = Matrix::Constant(1, 1, 2.0);
    bip.a2 = Matrix::Constant(1, 1, 2.0);
    bip.gamma = (1.0 - bip.alpha) * 2.0;
    try {
        interaction_matrix(bip);
        FAIL("expected CouplingTooStrong");
    } catch (const Error &e) {
        CHECK(e.code() == errc::coupling_too_strong);
    }
    // the direct inverse stays available in that regime
    const Matrix s = interaction_matrix_direct(bip);
    CHECK(s.allFinite());
}
