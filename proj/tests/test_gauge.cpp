#include "oracles.hpp"

#include "magbottle/angles.hpp"
#include "magbottle/error.hpp"
#include "magbottle/gauge.hpp"

#include <gtest/gtest.h>

#include <cstring>
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

// Random per-face flux with |flux| < 1, shifted to total 2 pi c.
FluxAssignment quantized_flux(const CombinatorialSurface& s, std::int64_t c, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    FluxAssignment f;
    double sum = 0.0;
    for (int i = 0; i < s.num_faces(); ++i) {
        f.flux.push_back(u(rng));
        sum += f.flux.back();
    }
    double shift = (2.0 * std::numbers::pi * static_cast<double>(c) - sum) / s.num_faces();
    for (double& x : f.flux) x += shift;
    return f;
}

double face_sum(const CombinatorialSurface& s, const Connection& conn, int f)
{
    double sum = 0.0;
    for (const auto& oe : s.face_boundary(f)) sum += oe.sign * conn.phase[static_cast<std::size_t>(oe.edge)];
    return sum;
}

} // namespace

TEST(Weyl, QuantizedTotals)
{
    Mesh m = build_icosphere(2);
    for (int c = -3; c <= 3; ++c)
        EXPECT_EQ(check_weyl(m.surface, FluxAssignment::uniform(m.surface, 2.0 * std::numbers::pi * c)), c);
}

TEST(Weyl, RejectsNonInteger)
{
    Mesh m = build_icosphere(3);
    try {
        check_weyl(m.surface, FluxAssignment::uniform(m.surface, 9.0));
        FAIL();
    } catch (const NotQuantizable& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotQuantizable);
        EXPECT_NEAR(e.total_flux(), 9.0, 1e-12);
        EXPECT_NEAR(e.defect(), 9.0 - 2.0 * std::numbers::pi, 1e-12);
    }
    EXPECT_EQ(code_of([&] { build_connection(m.surface, FluxAssignment::uniform(m.surface, 9.0)); }), ErrorCode::NotQuantizable);
}

TEST(Weyl, ToleranceBoundary)
{
    Mesh m = build_flat_torus(4, 4);
    auto f = FluxAssignment::uniform(m.surface, 2.0 * std::numbers::pi);
    f.flux[0] += 5e-10;
    EXPECT_EQ(check_weyl(m.surface, f), 1);
    f.flux[0] += 2e-9;
    EXPECT_EQ(code_of([&] { check_weyl(m.surface, f); }), ErrorCode::NotQuantizable);
    FluxAssignment short_flux{std::vector<double>(3, 0.0)};
    EXPECT_EQ(code_of([&] { check_weyl(m.surface, short_flux); }), ErrorCode::DimensionMismatch);
}

TEST(Connection, RealizesFluxModTwoPi)
{
    std::mt19937_64 rng(3);
    for (const Mesh& m : {build_icosphere(2), build_flat_torus(6, 6), build_genus_g(2, 0)}) {
        for (int c = -2; c <= 3; ++c) {
            FluxAssignment f = quantized_flux(m.surface, c, rng);
            Connection conn = build_connection(m.surface, f);
            for (double p : conn.phase) {
                EXPECT_GT(p, -std::numbers::pi);
                EXPECT_LE(p, std::numbers::pi);
            }
            for (int i = 0; i < m.surface.num_faces(); ++i)
                EXPECT_LE(oracle::wrapped_distance(face_sum(m.surface, conn, i), f.flux[static_cast<std::size_t>(i)]), 1e-10);
            EXPECT_EQ(chern_number(m.surface, conn), c);
        }
    }
}

TEST(Connection, LiftByTwoPiIsBitIdentical)
{
    Mesh m = build_flat_torus(5, 5);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> k(0, 1 << 20);
    FluxAssignment f;
    // Multiples of 2^-20 keep flux + 2 pi exactly representable.
    for (int i = 0; i < m.surface.num_faces(); ++i) f.flux.push_back(std::ldexp(k(rng), -20) - 0.5);
    double sum = 0.0;
    for (double x : f.flux) sum += x;
    f.flux.back() -= sum;
    FluxAssignment lifted = f;
    lifted.flux[7] += 2.0 * std::numbers::pi;
    lifted.flux[9] -= 2.0 * std::numbers::pi;
    Connection a = build_connection(m.surface, f);
    Connection b = build_connection(m.surface, lifted);
    ASSERT_EQ(a.phase.size(), b.phase.size());
    EXPECT_EQ(std::memcmp(a.phase.data(), b.phase.data(), a.phase.size() * sizeof(double)), 0);
}

TEST(Connection, FaceHolonomyIsFlux)
{
    Mesh m = build_icosphere(1);
    std::mt19937_64 rng(8);
    FluxAssignment f = quantized_flux(m.surface, 1, rng);
    Connection conn = build_connection(m.surface, f);
    for (int i = 0; i < m.surface.num_faces(); ++i) {
        const Face& face = m.surface.face(i);
        std::vector<int> walk = {face[0], face[1], face[2], face[0]};
        std::complex<double> h = holonomy(m.surface, conn, walk);
        EXPECT_NEAR(std::abs(h - std::polar(1.0, f.flux[static_cast<std::size_t>(i)])), 0.0, 1e-12);
    }
}

TEST(Connection, ChernNumberTelescopes)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Mesh m = build_genus_g(2, 0);
    for (int t = 0; t < 20; ++t) {
        Connection conn{std::vector<double>(static_cast<std::size_t>(m.surface.num_edges()))};
        for (double& p : conn.phase) p = angle(rng);
        // Wrapped face sums add up to 2 pi times the Chern number.
        double total = 0.0;
        std::int64_t turns = 0;
        for (int f = 0; f < m.surface.num_faces(); ++f) {
            double s = face_sum(m.surface, conn, f);
            double n = std::round(s / (2.0 * std::numbers::pi));
            turns += static_cast<std::int64_t>(n);
            total += s - 2.0 * std::numbers::pi * n;
        }
        std::int64_t c = chern_number(m.surface, conn);
        EXPECT_EQ(c, -turns);
        EXPECT_NEAR(total / (2.0 * std::numbers::pi), static_cast<double>(c), 1e-9);
    }
}

TEST(Gauge, TransformationPreservesCurvature)
{
    Mesh m = build_flat_torus(6, 6);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Connection conn = build_connection(m.surface, quantized_flux(m.surface, 2, rng));
    GaugeTransformation u{std::vector<double>(static_cast<std::size_t>(m.surface.num_vertices()))};
    for (double& a : u.angle) a = angle(rng);
    Connection moved = apply_gauge(m.surface, conn, u);
    FluxAssignment c0 = curvature(m.surface, conn), c1 = curvature(m.surface, moved);
    for (std::size_t f = 0; f < c0.flux.size(); ++f) EXPECT_LE(oracle::wrapped_distance(c0.flux[f], c1.flux[f]), 1e-12);
    auto found = find_gauge(m.surface, moved, conn);
    ASSERT_TRUE(found.has_value());
    Connection back = apply_gauge(m.surface, conn, *found);
    for (std::size_t e = 0; e < back.phase.size(); ++e) EXPECT_LE(oracle::wrapped_distance(back.phase[e], moved.phase[e]), 1e-10);
}

TEST(Twist, CharacterRecoversTheta)
{
    for (int g = 1; g <= 2; ++g) {
        Mesh m = g == 1 ? build_flat_torus(5, 5) : build_genus_g(2, 0);
        HomologyBasis basis = canonicalize_basis(tree_cotree_basis(m.surface));
        TwistCocycles sigma = build_twist_cocycles(m.surface, basis);
        // Closed and dual to the basis.
        for (std::size_t j = 0; j < sigma.sigma.size(); ++j) {
            for (int f = 0; f < m.surface.num_faces(); ++f) {
                double s = 0.0;
                for (const auto& oe : m.surface.face_boundary(f)) s += oe.sign * sigma.sigma[j][static_cast<std::size_t>(oe.edge)];
                EXPECT_NEAR(s, 0.0, 1e-12);
            }
            for (std::size_t k = 0; k < basis.cycles.size(); ++k) {
                double v = 0.0;
                for (std::size_t e = 0; e < basis.cycles[k].size(); ++e)
                    v += static_cast<double>(basis.cycles[k][e]) * sigma.sigma[j][e];
                EXPECT_NEAR(v, j == k ? 1.0 : 0.0, 1e-12);
            }
        }
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        Connection base = build_connection(m.surface, quantized_flux(m.surface, 1, rng));
        ThetaPoint theta;
        for (int i = 0; i < 2 * g; ++i) theta.theta.push_back(angle(rng));
        Connection twisted = twist_connection(base, theta, sigma);
        ThetaPoint back = character(m.surface, twisted, base, basis);
        for (int i = 0; i < 2 * g; ++i)
            EXPECT_LE(oracle::wrapped_distance(back.theta[static_cast<std::size_t>(i)], theta.theta[static_cast<std::size_t>(i)]), 1e-10);
        EXPECT_FALSE(find_gauge(m.surface, twisted, base).has_value());
    }
}

TEST(Twist, Errors)
{
    Mesh m = build_flat_torus(4, 4);
    HomologyBasis basis = flat_torus_basis(m.surface, 4, 4);
    TwistCocycles sigma = build_twist_cocycles(m.surface, basis);
    Connection conn = Connection::trivial(m.surface);
    EXPECT_EQ(code_of([&] { twist_connection(conn, ThetaPoint{{0.1}}, sigma); }), ErrorCode::DimensionMismatch);

    HomologyBasis singular = basis;
    singular.cycles[1] = singular.cycles[0];
    EXPECT_EQ(code_of([&] { build_twist_cocycles(m.surface, singular); }), ErrorCode::SingularPeriodMatrix);

    Mesh other = build_icosphere(1);
    std::mt19937_64 rng(1);
    Connection a = build_connection(m.surface, quantized_flux(m.surface, 1, rng));
    EXPECT_EQ(code_of([&] { character(m.surface, a, conn, basis); }), ErrorCode::CurvatureMismatch);
}
