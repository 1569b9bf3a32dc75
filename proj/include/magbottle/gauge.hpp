#pragma once

#include "magbottle/homology.hpp"
#include "magbottle/surface.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace magbottle {

/// Magnetic flux through each face, in radians.
struct FluxAssignment
{
    std::vector<double> flux;

    /// Same flux on every face, summing to `total`.
    static FluxAssignment uniform(const CombinatorialSurface& surface, double total);
    /// Flux proportional to face area, summing to `total`.
    static FluxAssignment area_weighted(const CombinatorialSurface& surface, const MeshMetric& metric, double total);
};

/// U(1) connection: one angle per edge in (-pi, pi], read along the edge's
/// reference orientation and negated against it.
struct Connection
{
    std::vector<double> phase;

    static Connection trivial(const CombinatorialSurface& surface);
    /// Phase for traversal from -> to (throws Error(NotClosed) across a non-edge).
    double transport(const CombinatorialSurface& surface, int from, int to) const;
};

/// Point of the flux torus: one angle in [0, 2pi) per canonical cycle.
struct ThetaPoint
{
    std::vector<double> theta;
};

/// Vertex phases u; acts on edges v -> w as phase + u_w - u_v.
struct GaugeTransformation
{
    std::vector<double> angle;
};

/// Closed real 1-cochains sigma_j with sigma_j(c_k) = delta_jk on a canonical basis.
struct TwistCocycles
{
    std::vector<std::vector<double>> sigma;
};

inline constexpr double kWeylTolerance = 1e-9;

/// Chern number round(sum flux / 2pi). Throws NotQuantizable when the total
/// misses 2pi Z by more than tol.
std::int64_t check_weyl(const CombinatorialSurface& surface, const FluxAssignment& flux, double tol = kWeylTolerance);

/// Connection whose curvature matches `flux` face by face modulo 2pi. Primal
/// tree and generator edges carry phase zero; dual-tree edges are solved from
/// the leaves of the dual tree towards face 0. The sub-tolerance Weyl defect is
/// spread evenly over the faces. Output depends on the flux only modulo 2pi per face.
Connection build_connection(
    const CombinatorialSurface& surface,
    const FluxAssignment& flux,
    double tol = kWeylTolerance);

/// Per-face principal value of the oriented phase sum.
FluxAssignment curvature(const CombinatorialSurface& surface, const Connection& conn);

/// Chern number of the wrapped curvature, exact: minus the total number of
/// 2pi turns removed while wrapping the per-face sums.
std::int64_t chern_number(const CombinatorialSurface& surface, const Connection& conn);

/// Holonomy along a closed vertex walk. Throws Error(NotClosed).
std::complex<double> holonomy(const CombinatorialSurface& surface, const Connection& conn, std::span<const int> walk);
/// Holonomy of an integer cycle, exp(i * sum_e c_e phase_e).
std::complex<double> holonomy(const CombinatorialSurface& surface, const Connection& conn, const Chain& cycle);
/// Same as above, as an angle (unwrapped sum).
double holonomy_angle(const Connection& conn, const Chain& cycle);

TwistCocycles build_twist_cocycles(const CombinatorialSurface& surface, const HomologyBasis& basis);

/// Adds sum_k theta_k sigma_k edgewise. Throws Error(DimensionMismatch).
Connection twist_connection(const Connection& conn, const ThetaPoint& theta, const TwistCocycles& cocycles);

Connection apply_gauge(const CombinatorialSurface& surface, const Connection& conn, const GaugeTransformation& u);

/// theta_k = arg(Hol_{c_k}(conn) / Hol_{c_k}(reference)) in [0, 2pi).
/// Throws Error(CurvatureMismatch) when the curvatures differ by more than 1e-8 on some face.
ThetaPoint character(
    const CombinatorialSurface& surface,
    const Connection& conn,
    const Connection& reference,
    const HomologyBasis& basis);

/// Gauge transformation u with apply_gauge(reference, u) == conn modulo 2pi
/// within tol on every edge, integrated along the primal spanning tree; nullopt
/// if the spanning-tree solution fails on some edge.
std::optional<GaugeTransformation> find_gauge(
    const CombinatorialSurface& surface,
    const Connection& conn,
    const Connection& reference,
    double tol = 1e-10);

} // namespace magbottle
