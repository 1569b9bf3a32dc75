#include "oracles.hpp"

#include "magbottle/error.hpp"
#include "magbottle/spectra.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstring>
#include <random>
#include <sstream>

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

MagneticLaplacian operator_for(const Mesh& m, WeightScheme scheme, const Connection& conn)
{
    auto [w, mu] = make_weights(scheme, m.surface, m.metric);
    return assemble(m.surface, w, mu, conn);
}

Connection field(const Mesh& m, std::int64_t c1)
{
    return build_connection(m.surface, FluxAssignment::uniform(m.surface, 2.0 * std::numbers::pi * static_cast<double>(c1)));
}

SolverOptions krylov()
{
    SolverOptions o;
    o.dense_threshold = 0;
    return o;
}

} // namespace

TEST(Eigen, TwoVertexByHand)
{
    MagneticLaplacian h;
    h.dim = 2;
    h.mass = {1.0, 1.0};
    h.symmetric.dim = 2;
    h.symmetric.row_start = {0, 2, 4};
    h.symmetric.col = {0, 1, 0, 1};
    h.symmetric.val = {1.0, -1.0, -1.0, 1.0};
    SpectrumResult r = lowest_eigenvalues(h, 2);
    EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-15);
    EXPECT_NEAR(r.eigenvalues[1], 2.0, 1e-15);
    EXPECT_EQ(r.method, "dense");
}

TEST(Eigen, IcosahedronGraph)
{
    Mesh m = build_icosphere(0);
    MagneticLaplacian h = operator_for(m, WeightScheme::Unit, Connection::trivial(m.surface));
    std::vector<double> ref = oracle::hermitian_eigenvalues(h.symmetric);
    SpectrumResult r = lowest_eigenvalues(h, 12);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(r.eigenvalues[static_cast<std::size_t>(i)], ref[static_cast<std::size_t>(i)], 1e-10);
    EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-12);
    // Adjacency spectrum of the icosahedron is {5, sqrt5 (x3), -1 (x5), -sqrt5 (x3)}.
    for (int i = 1; i <= 3; ++i) EXPECT_NEAR(r.eigenvalues[static_cast<std::size_t>(i)], 5.0 - std::sqrt(5.0), 1e-12);
    auto clusters = cluster_eigenvalues(r.eigenvalues);
    ASSERT_GE(clusters.size(), 2u);
    EXPECT_EQ(clusters[0].multiplicity, 1);
    EXPECT_EQ(clusters[1].multiplicity, 3);
}

TEST(Eigen, KrylovMatchesJacobiOracle)
{
    std::mt19937_64 rng(31);
    std::vector<std::pair<Mesh, WeightScheme>> cases = {
        {build_flat_torus(6, 6), WeightScheme::Unit},
        {build_icosphere(1), WeightScheme::Cotan},
        {build_genus_g(2, 0), WeightScheme::Cotan}};
    for (auto& [m, scheme] : cases) {
        for (std::int64_t c1 : {0, 1, 3}) {
            MagneticLaplacian h = operator_for(m, scheme, field(m, c1));
            std::vector<double> ref = oracle::hermitian_eigenvalues(h.symmetric);
            SpectrumResult r = lowest_eigenvalues(h, 8, krylov());
            ASSERT_NE(r.method, "dense");
            for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(r.eigenvalues[i], ref[i], 1e-8) << "c1 " << c1 << " i " << i;
            for (double res : r.residuals) EXPECT_LE(res, 1e-10);
        }
    }
}

TEST(Eigen, PlainKrylovWithoutShiftInvert)
{
    Mesh m = build_flat_torus(6, 6);
    MagneticLaplacian h = operator_for(m, WeightScheme::Unit, field(m, 2));
    SolverOptions o = krylov();
    o.shift_invert = false;
    std::vector<double> ref = oracle::hermitian_eigenvalues(h.symmetric);
    SpectrumResult r = lowest_eigenvalues(h, 4, o);
    EXPECT_EQ(r.method, "lanczos");
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.eigenvalues[i], ref[i], 1e-8);
}

TEST(Eigen, LargeProblemAgainstDense)
{
    Mesh m = build_flat_torus(26, 26);
    MagneticLaplacian h = operator_for(m, WeightScheme::Unit, field(m, 3));
    std::vector<double> ref = dense_spectrum(h);
    SpectrumResult r = lowest_eigenvalues(h, 6);
    EXPECT_NE(r.method, "dense");
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(r.eigenvalues[i], ref[i], 1e-8);
}

TEST(Eigen, VectorsAreEigenfunctions)
{
    Mesh m = build_icosphere(2);
    MagneticLaplacian h = operator_for(m, WeightScheme::Cotan, field(m, 1));
    SolverOptions o = krylov();
    o.want_vectors = true;
    SpectrumResult r = lowest_eigenvalues(h, 3, o);
    ASSERT_EQ(r.vectors.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& psi = r.vectors[j];
        auto hpsi = h.apply(psi);
        double norm = 0.0, err = 0.0;
        for (std::size_t v = 0; v < psi.size(); ++v) {
            norm += h.mass[v] * std::norm(psi[v]);
            err = std::max(err, std::abs(hpsi[v] - r.eigenvalues[j] * psi[v]));
        }
        EXPECT_NEAR(norm, 1.0, 1e-12);
        EXPECT_LT(err, 1e-7);
    }
}

TEST(Eigen, Errors)
{
    Mesh m = build_flat_torus(30, 30);
    MagneticLaplacian h = operator_for(m, WeightScheme::Unit, field(m, 1));
    EXPECT_EQ(code_of([&] { lowest_eigenvalues(h, 0); }), ErrorCode::DimensionTooSmall);
    EXPECT_EQ(code_of([&] { lowest_eigenvalues(h, 901); }), ErrorCode::DimensionTooSmall);
    SolverOptions o = krylov();
    o.shift_invert = false;
    o.max_iterations = 1;
    EXPECT_EQ(code_of([&] { lowest_eigenvalues(h, 4, o); }), ErrorCode::NoConvergence);
}

TEST(Cluster, SplitsAtLargeGaps)
{
    std::vector<double> ev = {0.0, 1.0 - 1e-6, 1.0, 1.0 + 1e-6, 5.0, 5.0 + 1e-3};
    auto c = cluster_eigenvalues(ev);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].multiplicity, 1);
    EXPECT_EQ(c[1].multiplicity, 3);
    EXPECT_NEAR(c[1].mean, 1.0, 1e-15);
    EXPECT_EQ(c[1].first, 1);
    EXPECT_EQ(c[2].multiplicity, 2);
    // Evenly spaced values never split.
    std::vector<double> even = {1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(cluster_eigenvalues(even).size(), 1u);
}

TEST(Sweep, GridOrderIsLexicographic)
{
    std::vector<int> res = {2, 3};
    auto grid = theta_grid(res);
    ASSERT_EQ(grid.size(), 6u);
    EXPECT_EQ(grid[1].theta[0], 0.0);
    EXPECT_NEAR(grid[1].theta[1], 2.0 * std::numbers::pi / 3.0, 1e-15);
    EXPECT_NEAR(grid[3].theta[0], std::numbers::pi, 1e-15);
    EXPECT_EQ(grid[3].theta[1], 0.0);
}

TEST(Sweep, FourierOracleInCanonicalBasis)
{
    // Twists are given in the tree-cotree basis; the oracle needs the holonomies of
    // the coordinate loops, measured independently.
    for (int n : {4, 8}) {
        Mesh m = build_flat_torus(n, n);
        HomologyBasis basis = canonicalize_basis(tree_cotree_basis(m.surface));
        HomologyBasis coords = flat_torus_basis(m.surface, n, n);
        std::vector<int> res = {3, 3};
        SweepOptions o;
        o.k = n * n;
        SweepTable t = theta_sweep(m, FluxAssignment::uniform(m.surface, 0.0), basis, res, o);
        TwistCocycles sigma = build_twist_cocycles(m.surface, basis);
        for (std::size_t i = 0; i < t.grid.size(); ++i) {
            Connection c = twist_connection(Connection::trivial(m.surface), t.grid[i], sigma);
            double a1 = holonomy_angle(c, coords.cycles[0]);
            double a2 = holonomy_angle(c, coords.cycles[1]);
            auto ref = oracle::torus_fourier(n, a1, a2);
            for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(t.rows[i].eigenvalues[j], ref[j], 1e-9);
        }
    }
}

TEST(Sweep, ZeroRowMatchesDirectSolveBitForBit)
{
    Mesh m = build_flat_torus(8, 8);
    FluxAssignment flux = FluxAssignment::uniform(m.surface, 2.0 * std::numbers::pi);
    HomologyBasis basis = flat_torus_basis(m.surface, 8, 8);
    std::vector<int> res = {2, 2};
    SweepOptions o;
    o.k = 5;
    SweepTable t = theta_sweep(m, flux, basis, res, o);
    MagneticLaplacian h = operator_for(m, WeightScheme::Unit, build_connection(m.surface, flux));
    SpectrumResult direct = lowest_eigenvalues(h, 5);
    ASSERT_EQ(t.rows[0].eigenvalues.size(), 5u);
    EXPECT_EQ(std::memcmp(t.rows[0].eigenvalues.data(), direct.eigenvalues.data(), 5 * sizeof(double)), 0);
    EXPECT_EQ(t.rows[0].chern, 1);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput)
{
    Mesh m = build_flat_torus(26, 26);
    HomologyBasis basis = flat_torus_basis(m.surface, 26, 26);
    FluxAssignment flux = FluxAssignment::uniform(m.surface, 4.0 * std::numbers::pi);
    std::vector<int> res = {2, 2};
    SweepOptions o;
    o.k = 4;
    std::ostringstream a, b;
    write_sweep_csv(a, theta_sweep(m, flux, basis, res, o));
    o.jobs = 3;
    write_sweep_csv(b, theta_sweep(m, flux, basis, res, o));
    EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, TwistPeriodicity)
{
    Mesh m = build_genus_g(2, 0);
    HomologyBasis basis = canonicalize_basis(tree_cotree_basis(m.surface));
    TwistCocycles sigma = build_twist_cocycles(m.surface, basis);
    Connection base = field(m, 1);
    auto [w, mu] = unit_weights(m.surface);
    ThetaPoint t{{0.3, 1.1, 2.0, 4.0}};
    ThetaPoint shifted{{0.3 + 2.0 * std::numbers::pi, 1.1 - 4.0 * std::numbers::pi, 2.0, 4.0 + 2.0 * std::numbers::pi}};
    auto a = lowest_eigenvalues(assemble(m.surface, w, mu, twist_connection(base, t, sigma)), 6);
    auto b = lowest_eigenvalues(assemble(m.surface, w, mu, twist_connection(base, shifted, sigma)), 6);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a.eigenvalues[i], b.eigenvalues[i], 1e-9);
}

TEST(Sweep, Errors)
{
    Mesh sphere = build_icosphere(1);
    HomologyBasis empty;
    std::vector<int> res;
    EXPECT_EQ(code_of([&] { theta_sweep(sphere, FluxAssignment::uniform(sphere.surface, 0.0), empty, res); }), ErrorCode::GenusZero);
    Mesh torus = build_flat_torus(4, 4);
    std::vector<int> r2 = {2, 2};
    EXPECT_EQ(
        code_of([&] { theta_sweep(torus, FluxAssignment::uniform(torus.surface, 1.0), flat_torus_basis(torus.surface, 4, 4), r2); }),
        ErrorCode::NotQuantizable);
}

TEST(Sweep, CsvAndJsonWriters)
{
    Mesh m = build_flat_torus(4, 4);
    std::vector<int> res = {2, 3};
    SweepOptions o;
    o.k = 2;
    SweepTable t = theta_sweep(m, FluxAssignment::uniform(m.surface, 0.0), flat_torus_basis(m.surface, 4, 4), res, o);
    std::ostringstream csv, js;
    write_sweep_csv(csv, t);
    write_sweep_json(js, t);
    std::istringstream in(csv.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "theta_1,theta_2,lambda_1,lambda_2,residual_max");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 6);
    auto doc = nlohmann::json::parse(js.str());
    ASSERT_EQ(doc["rows"].size(), 6u);
    EXPECT_EQ(doc["rows"][5]["eigenvalues"][1].get<double>(), t.rows[5].eigenvalues[1]);
}

TEST(Ladder, SphereMonopoleLevels)
{
    Mesh m = build_icosphere(3);
    auto rows = flux_ladder(m, 0, 2, 4);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].spectrum.eigenvalues[0], 0.0, 1e-10);
    EXPECT_EQ(rows[0].clusters[0].multiplicity, 1);
    for (const auto& row : rows) {
        auto levels = oracle::monopole_levels(static_cast<int>(row.chern), 1);
        EXPECT_NEAR(row.clusters[0].mean, levels[0].energy, 0.05 * std::max(1.0, levels[0].energy));
        EXPECT_EQ(row.clusters[0].multiplicity, levels[0].degeneracy);
    }
}
