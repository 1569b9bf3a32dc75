#include "magbottle/gauge.hpp"

#include "magbottle/angles.hpp"
#include "magbottle/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace magbottle {

namespace {

double compensated_sum(std::span<const double> xs)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    return sum + carry;
}

double oriented_sum(const CombinatorialSurface& surface, const std::vector<double>& phase, int f)
{
    double s = 0.0;
    for (const auto& oe : surface.face_boundary(f)) s += oe.sign * phase[static_cast<std::size_t>(oe.edge)];
    return s;
}

void require_edges(const CombinatorialSurface& surface, const Connection& conn)
{
    if (conn.phase.size() != static_cast<std::size_t>(surface.num_edges())) {
        throw Error(
            ErrorCode::DimensionMismatch,
            "connection has " + std::to_string(conn.phase.size()) + " phases for " +
                std::to_string(surface.num_edges()) + " edges");
    }
}

} // namespace

FluxAssignment FluxAssignment::uniform(const CombinatorialSurface& surface, double total)
{
    return {std::vector<double>(static_cast<std::size_t>(surface.num_faces()), total / surface.num_faces())};
}

FluxAssignment
FluxAssignment::area_weighted(const CombinatorialSurface& surface, const MeshMetric& metric, double total)
{
    FluxAssignment out;
    double area = total_area(surface, metric);
    out.flux.reserve(static_cast<std::size_t>(surface.num_faces()));
    for (int f = 0; f < surface.num_faces(); ++f) out.flux.push_back(total * face_area(metric, surface, f) / area);
    return out;
}

Connection Connection::trivial(const CombinatorialSurface& surface)
{
    return {std::vector<double>(static_cast<std::size_t>(surface.num_edges()), 0.0)};
}

double Connection::transport(const CombinatorialSurface& surface, int from, int to) const
{
    auto oe = surface.oriented_edge(from, to);
    if (!oe) {
        throw Error(ErrorCode::NotClosed, "no edge between " + std::to_string(from) + " and " + std::to_string(to));
    }
    return oe->sign * phase[static_cast<std::size_t>(oe->edge)];
}

std::int64_t check_weyl(const CombinatorialSurface& surface, const FluxAssignment& flux, double tol)
{
    if (flux.flux.size() != static_cast<std::size_t>(surface.num_faces())) {
        throw Error(
            ErrorCode::DimensionMismatch,
            "flux has " + std::to_string(flux.flux.size()) + " entries for " + std::to_string(surface.num_faces()) +
                " faces");
    }
    for (double x : flux.flux)
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "flux values must be finite");
    double total = compensated_sum(flux.flux);
    auto chern = static_cast<std::int64_t>(std::llround(total / kTwoPi));
    double defect = total - kTwoPi * static_cast<double>(chern);
    if (std::abs(defect) > tol) throw NotQuantizable(total, defect);
    return chern;
}

Connection build_connection(const CombinatorialSurface& surface, const FluxAssignment& flux, double tol)
{
    check_weyl(surface, flux, tol);
    const auto nf = static_cast<std::size_t>(surface.num_faces());

    // Reduce first so that shifting any face by a multiple of 2pi leaves every later step bit-identical.
    std::vector<double> target(nf);
    for (std::size_t f = 0; f < nf; ++f) target[f] = wrap_angle(flux.flux[f]);
    double reduced_total = compensated_sum(target);
    double defect = reduced_total - kTwoPi * std::nearbyint(reduced_total / kTwoPi);
    double share = defect / static_cast<double>(nf);
    for (double& t : target) t -= share;

    TreeCotree tc = tree_cotree(surface);
    Connection conn = Connection::trivial(surface);
    for (auto it = tc.face_order.rbegin(); it != tc.face_order.rend(); ++it) {
        int f = *it;
        int pe = tc.face_parent_edge[static_cast<std::size_t>(f)];
        if (pe < 0) continue;
        double known = 0.0;
        int sign = 0;
        for (const auto& oe : surface.face_boundary(f)) {
            if (oe.edge == pe)
                sign = oe.sign;
            else
                known += oe.sign * conn.phase[static_cast<std::size_t>(oe.edge)];
        }
        conn.phase[static_cast<std::size_t>(pe)] = wrap_angle(sign * (target[static_cast<std::size_t>(f)] - known));
    }
    return conn;
}

FluxAssignment curvature(const CombinatorialSurface& surface, const Connection& conn)
{
    require_edges(surface, conn);
    FluxAssignment out;
    out.flux.reserve(static_cast<std::size_t>(surface.num_faces()));
    for (int f = 0; f < surface.num_faces(); ++f) out.flux.push_back(wrap_angle(oriented_sum(surface, conn.phase, f)));
    return out;
}

std::int64_t chern_number(const CombinatorialSurface& surface, const Connection& conn)
{
    require_edges(surface, conn);
    std::int64_t turns = 0;
    for (int f = 0; f < surface.num_faces(); ++f) turns += wrap_with_turns(oriented_sum(surface, conn.phase, f)).turns;
    return -turns;
}

std::complex<double> holonomy(const CombinatorialSurface& surface, const Connection& conn, std::span<const int> walk)
{
    require_edges(surface, conn);
    return holonomy(surface, conn, chain_from_walk(surface, walk));
}

double holonomy_angle(const Connection& conn, const Chain& cycle)
{
    double s = 0.0;
    for (std::size_t e = 0; e < cycle.size(); ++e)
        if (cycle[e] != 0) s += static_cast<double>(cycle[e]) * conn.phase[e];
    return s;
}

std::complex<double> holonomy(const CombinatorialSurface& surface, const Connection& conn, const Chain& cycle)
{
    require_edges(surface, conn);
    if (!is_cycle(surface, cycle)) throw Error(ErrorCode::NotClosed, "chain has nonzero boundary");
    return std::polar(1.0, wrap_angle(holonomy_angle(conn, cycle)));
}

TwistCocycles build_twist_cocycles(const CombinatorialSurface& surface, const HomologyBasis& basis)
{
    const auto ne = static_cast<std::size_t>(surface.num_edges());
    const std::size_t n = basis.cycles.size();
    TreeCotree tc = tree_cotree(surface);
    if (tc.leftover.size() != n) {
        throw Error(
            ErrorCode::DimensionMismatch,
            "basis has " + std::to_string(n) + " cycles but the surface has " + std::to_string(tc.leftover.size()) +
                " generators");
    }

    // Integer cocycle dual to each generator edge: 1 on it, 0 on the primal tree and
    // the other generators, dual-tree edges fixed by closedness leaf-first.
    std::vector<std::vector<std::int64_t>> dual(n, std::vector<std::int64_t>(ne, 0));
    for (std::size_t i = 0; i < n; ++i) {
        auto& g = dual[i];
        g[static_cast<std::size_t>(tc.leftover[i])] = 1;
        for (auto it = tc.face_order.rbegin(); it != tc.face_order.rend(); ++it) {
            int f = *it;
            int pe = tc.face_parent_edge[static_cast<std::size_t>(f)];
            if (pe < 0) continue;
            std::int64_t known = 0;
            int sign = 0;
            for (const auto& oe : surface.face_boundary(f)) {
                if (oe.edge == pe)
                    sign = oe.sign;
                else
                    known += oe.sign * g[static_cast<std::size_t>(oe.edge)];
            }
            g[static_cast<std::size_t>(pe)] = -sign * known;
        }
    }

    // Period matrix P(i, k) = dual_i(c_k); sigma = P^-1 * dual.
    Eigen::MatrixXd period(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            std::int64_t s = 0;
            for (std::size_t e = 0; e < ne; ++e) s += dual[i][e] * basis.cycles[k][e];
            period(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = static_cast<double>(s);
        }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(period);
    if (n > 0 && !lu.isInvertible()) throw Error(ErrorCode::SingularPeriodMatrix, "period matrix is singular");
    Eigen::MatrixXd inv = n > 0 ? Eigen::MatrixXd(lu.inverse()) : Eigen::MatrixXd();
    // Unimodular periods have an integer inverse; snap to it so the cocycles stay exact.
    Eigen::MatrixXd rounded = inv.array().round().matrix();
    if (n > 0 && (rounded * period - Eigen::MatrixXd::Identity(period.rows(), period.cols())).cwiseAbs().maxCoeff() ==
                     0.0) {
        inv = rounded;
    }

    TwistCocycles out;
    out.sigma.assign(n, std::vector<double>(ne, 0.0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double a = inv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
            if (a == 0.0) continue;
            for (std::size_t e = 0; e < ne; ++e) out.sigma[j][e] += a * static_cast<double>(dual[i][e]);
        }
    return out;
}

Connection twist_connection(const Connection& conn, const ThetaPoint& theta, const TwistCocycles& cocycles)
{
    if (theta.theta.size() != cocycles.sigma.size()) {
        throw Error(
            ErrorCode::DimensionMismatch,
            "theta has " + std::to_string(theta.theta.size()) + " angles for " +
                std::to_string(cocycles.sigma.size()) + " cocycles");
    }
    Connection out = conn;
    for (std::size_t e = 0; e < out.phase.size(); ++e) {
        double shift = 0.0;
        for (std::size_t k = 0; k < theta.theta.size(); ++k) shift += theta.theta[k] * cocycles.sigma[k][e];
        if (shift != 0.0) out.phase[e] = wrap_angle(out.phase[e] + shift);
    }
    return out;
}

Connection apply_gauge(const CombinatorialSurface& surface, const Connection& conn, const GaugeTransformation& u)
{
    require_edges(surface, conn);
    if (u.angle.size() != static_cast<std::size_t>(surface.num_vertices())) {
        throw Error(ErrorCode::DimensionMismatch, "gauge transformation size does not match vertex count");
    }
    Connection out = conn;
    for (int e = 0; e < surface.num_edges(); ++e) {
        const Edge& ed = surface.edge(e);
        double du = u.angle[static_cast<std::size_t>(ed.v1)] - u.angle[static_cast<std::size_t>(ed.v0)];
        if (du != 0.0) out.phase[static_cast<std::size_t>(e)] = wrap_angle(conn.phase[static_cast<std::size_t>(e)] + du);
    }
    return out;
}

ThetaPoint character(
    const CombinatorialSurface& surface,
    const Connection& conn,
    const Connection& reference,
    const HomologyBasis& basis)
{
    require_edges(surface, conn);
    require_edges(surface, reference);
    for (int f = 0; f < surface.num_faces(); ++f) {
        double d = wrap_angle(oriented_sum(surface, conn.phase, f) - oriented_sum(surface, reference.phase, f));
        if (std::abs(d) > 1e-8) {
            throw Error(
                ErrorCode::CurvatureMismatch,
                "curvatures differ by " + std::to_string(d) + " on face " + std::to_string(f));
        }
    }
    Connection diff = Connection::trivial(surface);
    for (std::size_t e = 0; e < diff.phase.size(); ++e) diff.phase[e] = wrap_angle(conn.phase[e] - reference.phase[e]);
    ThetaPoint out;
    for (const Chain& c : basis.cycles) out.theta.push_back(wrap_positive(holonomy_angle(diff, c)));
    return out;
}

std::optional<GaugeTransformation> find_gauge(
    const CombinatorialSurface& surface,
    const Connection& conn,
    const Connection& reference,
    double tol)
{
    require_edges(surface, conn);
    require_edges(surface, reference);
    TreeCotree tc = tree_cotree(surface);
    GaugeTransformation u{std::vector<double>(static_cast<std::size_t>(surface.num_vertices()), 0.0)};
    for (int v : tc.vertex_order) {
        int p = tc.vertex_parent[static_cast<std::size_t>(v)];
        if (p < 0) continue;
        double d = conn.transport(surface, p, v) - reference.transport(surface, p, v);
        u.angle[static_cast<std::size_t>(v)] = wrap_angle(u.angle[static_cast<std::size_t>(p)] + d);
    }
    for (int e = 0; e < surface.num_edges(); ++e) {
        const Edge& ed = surface.edge(e);
        double mismatch = conn.phase[static_cast<std::size_t>(e)] - reference.phase[static_cast<std::size_t>(e)] -
                          (u.angle[static_cast<std::size_t>(ed.v1)] - u.angle[static_cast<std::size_t>(ed.v0)]);
        if (std::abs(wrap_angle(mismatch)) > tol) return std::nullopt;
    }
    return u;
}

} // namespace magbottle
