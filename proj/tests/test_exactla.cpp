#include <gtest/gtest.h>

#include <random>

#include "kdual/complex.hpp"
#include "seed.hpp"

using namespace kdual;

TEST(Rank, IdentityOverF2) { EXPECT_EQ(rank(SparseMatrix<F2>::identity(2)), 2u); }

TEST(Rank, ZeroMatrix) { EXPECT_EQ(rank(SparseMatrix<Q>(3, 4)), 0u); }

TEST(Rank, AllOnesOverF2) {
    auto m = SparseMatrix<F2>::from_dense({{F2(1), F2(1)}, {F2(1), F2(1)}});
    EXPECT_EQ(rank(m), 1u);
}

TEST(Rank, RationalNeedsNoDenominators) {
    auto m = SparseMatrix<Q>::from_dense({{Q(parse_rational("1/2")), Q(3)}, {Q(1), Q(6)}});
    EXPECT_EQ(rank(m), 1u);
    m.set(1, 1, Q(5));
    EXPECT_EQ(rank(m), 2u);
}

TEST(Kernel, Identity) { EXPECT_TRUE(kernel_basis(SparseMatrix<F3>::identity(3)).empty()); }

TEST(Kernel, ZeroMapHasFullKernel) { EXPECT_EQ(kernel_basis(SparseMatrix<F3>(2, 3)).size(), 3u); }

TEST(Kernel, RowOfOnesOverF2) {
    auto m = SparseMatrix<F2>::from_dense({{F2(1), F2(1)}});
    // oracle: of the four vectors in F2^2 exactly (0,0) and (1,1) map to zero
    std::vector<Vec<F2>> zeros;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Vec<F2> v{{0, F2(a)}, {1, F2(b)}};
            if (m.apply(v).is_zero() && !v.is_zero()) zeros.push_back(v);
        }
    auto k = kernel_basis(m);
    ASSERT_EQ(k.size(), 1u);
    ASSERT_EQ(zeros.size(), 1u);
    EXPECT_EQ(k[0], zeros[0]);
}

TEST(Solve, FindsPreimageOrRefuses) {
    auto m = SparseMatrix<Q>::from_dense({{Q(1), Q(2)}, {Q(2), Q(4)}});
    auto x = solve(m, Vec<Q>{{0, Q(3)}, {1, Q(6)}});
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(m.apply(*x), (Vec<Q>{{0, Q(3)}, {1, Q(6)}}));
    EXPECT_FALSE(solve(m, Vec<Q>{{0, Q(1)}}).has_value());
}

namespace {
template <Field K>
BoundedComplex<K> two_term(int lo, std::size_t a, std::size_t b, SparseMatrix<K> d) {
    BoundedComplex<K> c;
    c.lo = lo;
    c.bases = {std::vector<std::string>(a, "u"), std::vector<std::string>(b, "v")};
    c.differential = {std::move(d)};
    return c;
}
}  // namespace

TEST(Homology, SingleSpace) {
    BoundedComplex<Q> c;
    c.lo = 3;
    c.bases = {{"e"}};
    auto h = homology_dims(c);
    EXPECT_EQ(h, (std::map<int, std::size_t>{{3, 1}}));
}

TEST(Homology, IdentityIsAcyclic) {
    auto h = homology_dims(two_term<Q>(0, 1, 1, SparseMatrix<Q>::identity(1)));
    EXPECT_EQ(h, (std::map<int, std::size_t>{{0, 0}, {1, 0}}));
}

TEST(Homology, NilpotentTwoByTwo) {
    auto d = SparseMatrix<Q>::from_dense({{Q(0), Q(0)}, {Q(1), Q(0)}});
    auto h = homology_dims(two_term<Q>(0, 2, 2, d));
    EXPECT_EQ(h, (std::map<int, std::size_t>{{0, 1}, {1, 1}}));
}

TEST(Homology, RejectsNonComplex) {
    BoundedComplex<F2> c;
    c.bases = {{"a"}, {"b"}, {"c"}};
    c.differential = {SparseMatrix<F2>::identity(1), SparseMatrix<F2>::identity(1)};
    EXPECT_THROW(homology_dims(c), ValidationError);
}

TEST(Homology, InteriorOnlySkipsEdges) {
    BoundedComplex<F2> c;
    c.lo = -1;
    c.boundary = Boundary::interior_only;
    c.bases = {{"a"}, {"b"}, {"c"}};
    c.differential = {SparseMatrix<F2>(1, 1), SparseMatrix<F2>(1, 1)};
    EXPECT_EQ(homology_dims(c), (std::map<int, std::size_t>{{0, 1}}));
}

namespace {
template <Field K>
SparseMatrix<K> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double density) {
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> val(1, 6);
    SparseMatrix<K> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (coin(rng) < density) m.set(i, j, K(val(rng)));
    return m;
}

template <Field K>
SparseMatrix<K> random_invertible(std::mt19937_64& rng, std::size_t n) {
    for (;;) {
        auto m = random_matrix<K>(rng, n, n, 0.6);
        if (rank(m) == n) return m;
    }
}

template <Field K>
void rank_nullity(std::mt19937_64& rng) {
    for (int t = 0; t < 200; ++t) {
        std::uniform_int_distribution<std::size_t> dim(0, 7);
        auto m = random_matrix<K>(rng, dim(rng), dim(rng), 0.4);
        auto k = kernel_basis(m);
        EXPECT_EQ(rank(m) + k.size(), m.cols());
        for (auto& v : k) EXPECT_TRUE(m.apply(v).is_zero());
    }
}
}  // namespace

TEST(Properties, RankNullityF2) {
    std::mt19937_64 rng(test_seed());
    rank_nullity<F2>(rng);
}

TEST(Properties, RankNullityF3) {
    std::mt19937_64 rng(test_seed() + 1);
    rank_nullity<F3>(rng);
}

TEST(Properties, HomologyInvariantUnderBasisChange) {
    std::mt19937_64 rng(test_seed() + 2);
    for (int t = 0; t < 100; ++t) {
        // d1 * d0 = 0 by construction: d0 = A * K where the columns of K span ker d1
        std::uniform_int_distribution<std::size_t> dim(1, 5);
        std::size_t n0 = dim(rng), n1 = dim(rng), n2 = dim(rng);
        auto d1 = random_matrix<F3>(rng, n2, n1, 0.5);
        auto ker = kernel_basis(d1);
        SparseMatrix<F3> d0(n1, n0);
        std::uniform_int_distribution<int> v(0, 2);
        for (std::size_t j = 0; j < n0; ++j)
            for (auto& kv : ker) {
                F3 c(v(rng));
                for (auto& [i, k] : kv) d0.add(i, j, c * k);
            }
        BoundedComplex<F3> c;
        c.bases = {std::vector<std::string>(n0, "a"), std::vector<std::string>(n1, "b"),
                   std::vector<std::string>(n2, "c")};
        c.differential = {d0, d1};
        auto before = homology_dims(c);

        auto p0 = random_invertible<F3>(rng, n0), p1 = random_invertible<F3>(rng, n1),
             p2 = random_invertible<F3>(rng, n2);
        // conjugate: d' = P_{k+1} d P_k^{-1}; equivalently use d' = P_{k+1} d and d'' = d P_k^{-1}
        // with inverses obtained by solving.
        auto inverse = [](const SparseMatrix<F3>& p) {
            std::vector<Vec<F3>> cols;
            for (std::size_t j = 0; j < p.cols(); ++j) cols.push_back(*solve(p, Vec<F3>::unit(j)));
            return SparseMatrix<F3>::from_columns(p.rows(), cols);
        };
        c.differential = {p1 * d0 * inverse(p0), p2 * d1 * inverse(p1)};
        EXPECT_EQ(homology_dims(c), before);
    }
}

TEST(Properties, RationalRankDominatesModularRank) {
    std::mt19937_64 rng(test_seed() + 3);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int t = 0; t < 200; ++t) {
        std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        SparseMatrix<Q> mq(r, c);
        SparseMatrix<F2> m2(r, c);
        SparseMatrix<F3> m3(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                int x = val(rng);
                mq.set(i, j, Q(x));
                m2.set(i, j, F2(x));
                m3.set(i, j, F3(x));
            }
        EXPECT_GE(rank(mq), rank(m2));
        EXPECT_GE(rank(mq), rank(m3));
    }
}
