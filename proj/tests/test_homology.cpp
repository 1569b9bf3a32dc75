#include "oracles.hpp"

#include "magbottle/error.hpp"
#include "magbottle/homology.hpp"
#include "magbottle/surface.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace magbottle;

namespace {

template <class F>
ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidArgument;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix c(a.size(), std::vector<std::int64_t>(b.front().size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[k].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

IntMatrix transpose(const IntMatrix& a)
{
    IntMatrix t(a.front().size(), std::vector<std::int64_t>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

SparseIntMatrix sparse(const IntMatrix& a)
{
    SparseIntMatrix m;
    m.rows = static_cast<int>(a.size());
    m.cols = static_cast<int>(a.front().size());
    m.entries.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != 0) m.entries[i].emplace_back(static_cast<int>(j), a[i][j]);
    return m;
}

// Minimal six-vertex triangulation of the projective plane.
CombinatorialSurface projective_plane()
{
    return CombinatorialSurface::from_faces(
        6,
        {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1}, {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}});
}

} // namespace

TEST(Homology, BoundaryOfBoundaryVanishes)
{
    Mesh m = build_genus_g(2, 0);
    ChainComplex cx = boundary_matrices(m.surface);
    for (int f = 0; f < cx.d2.rows; ++f) {
        std::vector<std::int64_t> acc(static_cast<std::size_t>(m.surface.num_vertices()), 0);
        for (auto [e, c] : cx.d2.entries[static_cast<std::size_t>(f)])
            for (auto [v, d] : cx.d1.entries[static_cast<std::size_t>(e)]) acc[static_cast<std::size_t>(v)] += c * d;
        for (auto x : acc) EXPECT_EQ(x, 0);
    }
}

TEST(Homology, BettiMatchesRankModP)
{
    std::vector<Mesh> meshes = {build_icosphere(2), build_flat_torus(6, 5), build_genus_g(2, 0), build_genus_g(3, 0)};
    for (const Mesh& m : meshes) {
        ChainComplex cx = boundary_matrices(m.surface);
        HomologyGroups h = betti_and_torsion(cx);
        int oracle_b1 = m.surface.num_edges() - oracle::rank_mod_p(cx.d1) - oracle::rank_mod_p(cx.d2);
        EXPECT_EQ(h.b1, oracle_b1);
        EXPECT_EQ(h.b1, 2 * m.surface.genus());
        EXPECT_TRUE(h.torsion.empty());
    }
}

TEST(Homology, ProjectivePlaneHasTwoTorsion)
{
    auto rp2 = projective_plane();
    HomologyGroups h = betti_and_torsion(boundary_matrices(rp2));
    EXPECT_EQ(h.b1, 0);
    ASSERT_EQ(h.torsion.size(), 1u);
    EXPECT_EQ(h.torsion[0], 2);
}

TEST(Homology, SmithInvariantsByHand)
{
    // gcd of entries is 2 and |det| = 8.
    auto inv = smith_invariants(sparse({{2, 4}, {6, 8}}));
    ASSERT_EQ(inv.size(), 2u);
    EXPECT_EQ(inv[0], 2);
    EXPECT_EQ(inv[1], 4);
    auto rank_one = smith_invariants(sparse({{3, 6, 9}, {1, 2, 3}}));
    ASSERT_EQ(rank_one.size(), 1u);
    EXPECT_EQ(rank_one[0], 1);
    auto diag = smith_invariants(sparse({{4, 0}, {0, 6}}));
    ASSERT_EQ(diag.size(), 2u);
    EXPECT_EQ(diag[0], 2);
    EXPECT_EQ(diag[1], 12);
}

TEST(Homology, TreeCotreeSizes)
{
    for (int g = 1; g <= 3; ++g) {
        Mesh m = g == 1 ? build_flat_torus(5, 5) : build_genus_g(g, 0);
        TreeCotree tc = tree_cotree(m.surface);
        int primal = 0, dual = 0;
        for (char c : tc.in_primal_tree) primal += c;
        for (char c : tc.in_dual_tree) dual += c;
        EXPECT_EQ(primal, m.surface.num_vertices() - 1);
        EXPECT_EQ(dual, m.surface.num_faces() - 1);
        EXPECT_EQ(static_cast<int>(tc.leftover.size()), 2 * g);
    }
}

TEST(Homology, WalksAndCycles)
{
    Mesh m = build_flat_torus(4, 4);
    const Face& f = m.surface.face(3);
    std::vector<int> walk = {f[0], f[1], f[2], f[0]};
    Chain c = chain_from_walk(m.surface, walk);
    EXPECT_TRUE(is_cycle(m.surface, c));
    auto walks = decompose_into_walks(m.surface, c);
    ASSERT_EQ(walks.size(), 1u);
    EXPECT_EQ(chain_from_walk(m.surface, walks[0]), c);
    std::vector<int> open = {0, 1, 2};
    EXPECT_EQ(code_of([&] { chain_from_walk(m.surface, open); }), ErrorCode::NotClosed);
    Chain edge(static_cast<std::size_t>(m.surface.num_edges()), 0);
    edge[0] = 1;
    EXPECT_FALSE(is_cycle(m.surface, edge));
    EXPECT_EQ(code_of([&] { intersection_matrix(m.surface, {edge, c}); }), ErrorCode::NotACycle);
}

TEST(Intersection, FlatTorusCoordinateLoops)
{
    Mesh m = build_flat_torus(5, 6);
    HomologyBasis b = flat_torus_basis(m.surface, 5, 6);
    EXPECT_EQ(b.intersection, standard_symplectic(1));
    auto wa = oracle::torus_winding(m.surface, b.cycles[0], 5, 6);
    auto wb = oracle::torus_winding(m.surface, b.cycles[1], 5, 6);
    EXPECT_EQ(wa, (std::array<std::int64_t, 2>{1, 0}));
    EXPECT_EQ(wb, (std::array<std::int64_t, 2>{0, 1}));
}

TEST(Intersection, MatchesWindingCrossProduct)
{
    const int n = 7, mm = 6;
    Mesh m = build_flat_torus(n, mm);
    HomologyBasis raw = tree_cotree_basis(m.surface);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::vector<Chain> cycles = raw.cycles;
    for (int t = 0; t < 6; ++t) {
        Chain c(static_cast<std::size_t>(m.surface.num_edges()), 0);
        for (const Chain& g : raw.cycles) {
            int k = coef(rng);
            for (std::size_t e = 0; e < c.size(); ++e) c[e] += k * g[e];
        }
        // Adding a face boundary leaves the class unchanged.
        const auto& bd = m.surface.face_boundary(t);
        for (const auto& oe : bd) c[static_cast<std::size_t>(oe.edge)] += oe.sign;
        cycles.push_back(c);
    }
    for (const Chain& a : cycles)
        for (const Chain& b : cycles) {
            auto wa = oracle::torus_winding(m.surface, a, n, mm);
            auto wb = oracle::torus_winding(m.surface, b, n, mm);
            EXPECT_EQ(intersection_number(m.surface, a, b), wa[0] * wb[1] - wa[1] * wb[0]);
        }
}

TEST(Intersection, BoundariesPairTrivially)
{
    Mesh m = build_genus_g(2, 0);
    HomologyBasis b = tree_cotree_basis(m.surface);
    for (int f = 0; f < m.surface.num_faces(); f += 7) {
        Chain bd(static_cast<std::size_t>(m.surface.num_edges()), 0);
        for (const auto& oe : m.surface.face_boundary(f)) bd[static_cast<std::size_t>(oe.edge)] += oe.sign;
        for (const Chain& c : b.cycles) {
            EXPECT_EQ(intersection_number(m.surface, bd, c), 0);
            EXPECT_EQ(intersection_number(m.surface, c, bd), 0);
        }
    }
}

TEST(Symplectic, CanonicalBasisIsStandard)
{
    for (int g = 1; g <= 3; ++g) {
        Mesh m = g == 1 ? build_flat_torus(6, 6) : build_genus_g(g, 0);
        HomologyBasis raw = tree_cotree_basis(m.surface);
        EXPECT_EQ(std::abs(determinant(raw.intersection)), 1);
        HomologyBasis canon = canonicalize_basis(raw);
        EXPECT_EQ(canon.intersection, standard_symplectic(g));
        EXPECT_EQ(intersection_matrix(m.surface, canon.cycles), standard_symplectic(g));
    }
}

TEST(Symplectic, ReducesRandomConjugates)
{
    std::mt19937_64 rng(11);
    for (int g = 1; g <= 3; ++g) {
        const std::size_t n = static_cast<std::size_t>(2 * g);
        for (int trial = 0; trial < 20; ++trial) {
            IntMatrix a(n, std::vector<std::int64_t>(n, 0));
            for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            std::uniform_int_distribution<int> k(-2, 2);
            for (int s = 0; s < 12; ++s) {
                std::size_t i = pick(rng), j = pick(rng);
                if (i == j) continue;
                int f = k(rng);
                for (std::size_t c = 0; c < n; ++c) a[i][c] += f * a[j][c];
            }
            IntMatrix q = multiply(multiply(a, standard_symplectic(g)), transpose(a));
            IntMatrix t = symplectic_reduction(q);
            EXPECT_EQ(multiply(multiply(t, q), transpose(t)), standard_symplectic(g));
            EXPECT_EQ(std::abs(determinant(t)), 1);
        }
    }
}

TEST(Symplectic, Errors)
{
    EXPECT_EQ(code_of([] { symplectic_reduction({{0, 2}, {-2, 0}}); }), ErrorCode::DegenerateForm);
    EXPECT_EQ(code_of([] { tree_cotree_basis(build_icosphere(1).surface); }), ErrorCode::GenusZero);
}

TEST(Symplectic, IdempotentOnStandardForm)
{
    IntMatrix j = standard_symplectic(2);
    IntMatrix t = symplectic_reduction(j);
    IntMatrix id(4, std::vector<std::int64_t>(4, 0));
    for (std::size_t i = 0; i < 4; ++i) id[i][i] = 1;
    EXPECT_EQ(t, id);
}
