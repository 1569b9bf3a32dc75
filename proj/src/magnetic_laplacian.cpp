#include "magbottle/magnetic_laplacian.hpp"

#include "magbottle/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <string>

namespace magbottle {

std::string_view scheme_name(WeightScheme scheme)
{
    return scheme == WeightScheme::Cotan ? "cotan" : "unit";
}

bool EdgeWeights::has_negative() const
{
    return std::any_of(w.begin(), w.end(), [](double x) { return x < 0.0; });
}

std::pair<EdgeWeights, MassWeights> cotan_weights(const CombinatorialSurface& surface, const MeshMetric& metric)
{
    if (metric.edge_lengths.size() != static_cast<std::size_t>(surface.num_edges())) {
        throw Error(ErrorCode::DimensionMismatch, "metric does not match surface edges");
    }
    EdgeWeights w{WeightScheme::Cotan, std::vector<double>(static_cast<std::size_t>(surface.num_edges()), 0.0)};
    MassWeights m{std::vector<double>(static_cast<std::size_t>(surface.num_vertices()), 0.0)};
    for (int f = 0; f < surface.num_faces(); ++f) {
        const auto& bd = surface.face_boundary(f);
        std::array<double, 3> l{};
        for (std::size_t i = 0; i < 3; ++i) l[i] = metric.edge_lengths[static_cast<std::size_t>(bd[i].edge)];
        double area = face_area(metric, surface, f);
        if (!(area > 0.0) || !(l[0] < l[1] + l[2] && l[1] < l[0] + l[2] && l[2] < l[0] + l[1])) {
            throw Error(ErrorCode::DegenerateTriangle, "face " + std::to_string(f) + " is degenerate");
        }
        for (std::size_t i = 0; i < 3; ++i) {
            // Angle opposite side i, between the other two sides.
            double a = l[i], b = l[(i + 1) % 3], c = l[(i + 2) % 3];
            double cot = (b * b + c * c - a * a) / (4.0 * area);
            w.w[static_cast<std::size_t>(bd[i].edge)] += 0.5 * cot;
        }
        for (int v : surface.face(f)) m.mu[static_cast<std::size_t>(v)] += area / 3.0;
    }
    return {std::move(w), std::move(m)};
}

std::pair<EdgeWeights, MassWeights> unit_weights(const CombinatorialSurface& surface)
{
    return {
        EdgeWeights{WeightScheme::Unit, std::vector<double>(static_cast<std::size_t>(surface.num_edges()), 1.0)},
        MassWeights{std::vector<double>(static_cast<std::size_t>(surface.num_vertices()), 1.0)}};
}

std::pair<EdgeWeights, MassWeights>
make_weights(WeightScheme scheme, const CombinatorialSurface& surface, const MeshMetric& metric)
{
    return scheme == WeightScheme::Cotan ? cotan_weights(surface, metric) : unit_weights(surface);
}

void CsrMatrix::multiply(std::span<const std::complex<double>> x, std::span<std::complex<double>> y) const
{
    for (int r = 0; r < dim; ++r) {
        std::complex<double> s = 0.0;
        for (int k = row_start[static_cast<std::size_t>(r)]; k < row_start[static_cast<std::size_t>(r) + 1]; ++k) {
            s += val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
        }
        y[static_cast<std::size_t>(r)] = s;
    }
}

MagneticLaplacian assemble(
    const CombinatorialSurface& surface,
    const EdgeWeights& weights,
    const MassWeights& mass,
    const Connection& conn,
    double scale)
{
    const auto nv = static_cast<std::size_t>(surface.num_vertices());
    const auto ne = static_cast<std::size_t>(surface.num_edges());
    if (conn.phase.size() != ne) {
        throw Error(
            ErrorCode::MissingPhase,
            "connection covers " + std::to_string(conn.phase.size()) + " of " + std::to_string(ne) + " edges");
    }
    if (weights.w.size() != ne || mass.mu.size() != nv) {
        throw Error(ErrorCode::DimensionMismatch, "weights do not match the surface");
    }
    for (double m : mass.mu)
        if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "vertex masses must be positive");

    MagneticLaplacian h;
    h.dim = static_cast<int>(nv);
    h.mass = mass.mu;
    h.edges = surface.edges();
    h.weights = weights.w;
    h.phases = conn.phase;
    h.scale = scale;
    h.scheme = weights.scheme;

    // FNV-1a over the wrapped curvature, identifying the magnetic field independent of gauge.
    std::uint64_t hash = 1469598103934665603ULL;
    for (double c : curvature(surface, conn).flux) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &c, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            hash ^= (bits >> (8 * b)) & 0xffU;
            hash *= 1099511628211ULL;
        }
    }
    h.flux_hash = hash;

    std::vector<double> diag(nv, 0.0);
    struct Entry
    {
        int row, col;
        std::complex<double> v;
    };
    std::vector<Entry> entries;
    entries.reserve(2 * ne + nv);
    for (std::size_t e = 0; e < ne; ++e) {
        const Edge& ed = h.edges[e];
        const double w = scale * weights.w[e];
        diag[static_cast<std::size_t>(ed.v0)] += w;
        diag[static_cast<std::size_t>(ed.v1)] += w;
        // Row v0, column v1 carries -w e^{i phi(v0 -> v1)} / sqrt(mu_v0 mu_v1); its transpose is the conjugate.
        double denom = std::sqrt(mass.mu[static_cast<std::size_t>(ed.v0)] * mass.mu[static_cast<std::size_t>(ed.v1)]);
        std::complex<double> v = -w * std::polar(1.0, conn.phase[e]) / denom;
        entries.push_back({ed.v0, ed.v1, v});
        entries.push_back({ed.v1, ed.v0, std::conj(v)});
    }
    for (std::size_t v = 0; v < nv; ++v) entries.push_back({static_cast<int>(v), static_cast<int>(v), diag[v] / mass.mu[v]});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    h.symmetric.dim = h.dim;
    h.symmetric.row_start.assign(nv + 1, 0);
    h.symmetric.col.reserve(entries.size());
    h.symmetric.val.reserve(entries.size());
    for (const Entry& en : entries) {
        ++h.symmetric.row_start[static_cast<std::size_t>(en.row) + 1];
        h.symmetric.col.push_back(en.col);
        h.symmetric.val.push_back(en.v);
    }
    for (std::size_t r = 0; r < nv; ++r) h.symmetric.row_start[r + 1] += h.symmetric.row_start[r];
    return h;
}

std::vector<std::complex<double>> MagneticLaplacian::apply(std::span<const std::complex<double>> psi) const
{
    if (psi.size() != static_cast<std::size_t>(dim)) throw Error(ErrorCode::DimensionMismatch, "vector size");
    std::vector<std::complex<double>> out(psi.size(), 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto a = static_cast<std::size_t>(edges[e].v0);
        auto b = static_cast<std::size_t>(edges[e].v1);
        std::complex<double> t = std::polar(1.0, phases[e]);
        double w = scale * weights[e];
        out[a] += w * (psi[a] - t * psi[b]);
        out[b] += w * (psi[b] - std::conj(t) * psi[a]);
    }
    for (std::size_t v = 0; v < out.size(); ++v) out[v] /= mass[v];
    return out;
}

double quadratic_form(const MagneticLaplacian& h, std::span<const std::complex<double>> psi)
{
    if (psi.size() != static_cast<std::size_t>(h.dim)) throw Error(ErrorCode::DimensionMismatch, "vector size");
    double s = 0.0;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
        auto a = static_cast<std::size_t>(h.edges[e].v0);
        auto b = static_cast<std::size_t>(h.edges[e].v1);
        s += h.weights[e] * std::norm(psi[a] - std::polar(1.0, h.phases[e]) * psi[b]);
    }
    return h.scale * s;
}

double matrix_quadratic_form(const MagneticLaplacian& h, std::span<const std::complex<double>> psi)
{
    if (psi.size() != static_cast<std::size_t>(h.dim)) throw Error(ErrorCode::DimensionMismatch, "vector size");
    std::vector<std::complex<double>> x(psi.size()), y(psi.size());
    for (std::size_t v = 0; v < psi.size(); ++v) x[v] = std::sqrt(h.mass[v]) * psi[v];
    h.symmetric.multiply(x, y);
    std::complex<double> s = 0.0;
    for (std::size_t v = 0; v < psi.size(); ++v) s += std::conj(x[v]) * y[v];
    return s.real();
}

double hermitian_defect(const MagneticLaplacian& h)
{
    const CsrMatrix& m = h.symmetric;
    auto find = [&m](int r, int c) -> std::complex<double> {
        auto first = m.col.begin() + m.row_start[static_cast<std::size_t>(r)];
        auto last = m.col.begin() + m.row_start[static_cast<std::size_t>(r) + 1];
        auto it = std::lower_bound(first, last, c);
        if (it == last || *it != c) return std::complex<double>(std::nan(""), 0.0);
        return m.val[static_cast<std::size_t>(it - m.col.begin())];
    };
    double worst = 0.0;
    for (int r = 0; r < m.dim; ++r)
        for (int k = m.row_start[static_cast<std::size_t>(r)]; k < m.row_start[static_cast<std::size_t>(r) + 1]; ++k) {
            int c = m.col[static_cast<std::size_t>(k)];
            double d = std::abs(m.val[static_cast<std::size_t>(k)] - std::conj(find(c, r)));
            if (std::isnan(d)) return d;
            worst = std::max(worst, d);
        }
    return worst;
}

void write_coordinate(std::ostream& out, const MagneticLaplacian& h)
{
    const CsrMatrix& m = h.symmetric;
    char buf[128];
    for (int r = 0; r < m.dim; ++r)
        for (int k = m.row_start[static_cast<std::size_t>(r)]; k < m.row_start[static_cast<std::size_t>(r) + 1]; ++k) {
            const auto& v = m.val[static_cast<std::size_t>(k)];
            std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", r, m.col[static_cast<std::size_t>(k)], v.real(), v.imag());
            out << buf;
        }
}

} // namespace magbottle
