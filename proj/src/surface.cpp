#include "magbottle/surface.hpp"

#include "magbottle/angles.hpp"
#include "magbottle/error.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace magbottle {

namespace {

std::uint64_t edge_key(int a, int b)
{
    auto lo = static_cast<std::uint64_t>(std::min(a, b));
    auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

double distance(const Vec3& a, const Vec3& b)
{
    double dx = a[0] - b[0];
    double dy = a[1] - b[1];
    double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Kahan's cancellation-safe Heron formula. Returns NaN when the lengths
// violate the triangle inequality.
double heron_area(double a, double b, double c)
{
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    if (b < c) std::swap(b, c);
    double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if (p < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 0.25 * std::sqrt(p);
}

} // namespace

CombinatorialSurface CombinatorialSurface::from_faces(
    int num_vertices,
    std::vector<Face> faces,
    std::optional<int> declared_genus)
{
    if (num_vertices < 0) throw Error(ErrorCode::InvalidMesh, "negative vertex count");
    CombinatorialSurface s;
    s.m_num_vertices = num_vertices;
    s.m_declared_genus = declared_genus;
    s.m_faces = std::move(faces);
    s.m_face_boundary.resize(s.m_faces.size());

    const auto nf = static_cast<int>(s.m_faces.size());
    for (int f = 0; f < nf; ++f) {
        const Face& tri = s.m_faces[static_cast<std::size_t>(f)];
        for (int v : tri) {
            if (v < 0 || v >= num_vertices) {
                throw Error(
                    ErrorCode::InvalidMesh,
                    "face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                        " outside [0, " + std::to_string(num_vertices) + ")");
            }
        }
        bool degenerate = false;
        for (int i = 0; i < 3; ++i) {
            int a = tri[static_cast<std::size_t>(i)];
            int b = tri[static_cast<std::size_t>((i + 1) % 3)];
            if (a == b) {
                s.m_face_boundary[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)] = {-1, 0};
                degenerate = true;
                continue;
            }
            auto [it, inserted] = s.m_edge_index.try_emplace(edge_key(a, b), s.num_edges());
            if (inserted) {
                s.m_edges.push_back({std::min(a, b), std::max(a, b)});
                s.m_edge_faces.emplace_back();
            }
            s.m_face_boundary[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)] = {
                it->second, a < b ? 1 : -1};
            s.m_edge_faces[static_cast<std::size_t>(it->second)].push_back(f);
        }
        if (degenerate) s.m_degenerate_faces.push_back(f);
    }

    // Corner (from -> to) pairs: within face (a, b, c) the ccw sweep at a runs from b to c.
    std::vector<std::vector<std::pair<int, int>>> corners(static_cast<std::size_t>(num_vertices));
    for (const Face& tri : s.m_faces) {
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0]) continue;
        for (int i = 0; i < 3; ++i) {
            int v = tri[static_cast<std::size_t>(i)];
            int from = tri[static_cast<std::size_t>((i + 1) % 3)];
            int to = tri[static_cast<std::size_t>((i + 2) % 3)];
            corners[static_cast<std::size_t>(v)].emplace_back(from, to);
        }
    }

    s.m_rotation.resize(static_cast<std::size_t>(num_vertices));
    s.m_rotation_ok.assign(static_cast<std::size_t>(num_vertices), 0);
    for (int v = 0; v < num_vertices; ++v) {
        auto& pairs = corners[static_cast<std::size_t>(v)];
        auto& rot = s.m_rotation[static_cast<std::size_t>(v)];
        if (pairs.empty()) continue;
        std::sort(pairs.begin(), pairs.end());

        bool ok = true;
        std::vector<int> tos;
        tos.reserve(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (i > 0 && pairs[i].first == pairs[i - 1].first) ok = false;
            tos.push_back(pairs[i].second);
        }
        std::sort(tos.begin(), tos.end());
        if (std::adjacent_find(tos.begin(), tos.end()) != tos.end()) ok = false;

        if (ok) {
            auto succ = [&pairs](int from) -> int {
                auto it = std::lower_bound(
                    pairs.begin(), pairs.end(), std::make_pair(from, std::numeric_limits<int>::min()));
                if (it == pairs.end() || it->first != from) return -1;
                return it->second;
            };
            int start = pairs.front().first;
            int cur = start;
            for (std::size_t step = 0; step < pairs.size(); ++step) {
                // Returning early means the link splits into several cycles.
                if (cur < 0 || (step > 0 && cur == start)) {
                    ok = false;
                    break;
                }
                rot.push_back({cur, s.find_edge(v, cur)});
                cur = succ(cur);
            }
            if (cur != start) ok = false;
        }
        if (!ok) {
            rot.clear();
            std::set<int> nbrs;
            for (auto [from, to] : pairs) {
                nbrs.insert(from);
                nbrs.insert(to);
            }
            for (int u : nbrs) rot.push_back({u, s.find_edge(v, u)});
        }
        s.m_rotation_ok[static_cast<std::size_t>(v)] = ok ? 1 : 0;
    }
    return s;
}

int CombinatorialSurface::find_edge(int a, int b) const
{
    auto it = m_edge_index.find(edge_key(a, b));
    return it == m_edge_index.end() ? -1 : it->second;
}

std::optional<OrientedEdge> CombinatorialSurface::oriented_edge(int from, int to) const
{
    if (from == to) return std::nullopt;
    int e = find_edge(from, to);
    if (e < 0) return std::nullopt;
    return OrientedEdge{e, from < to ? 1 : -1};
}

int CombinatorialSurface::genus() const
{
    if (m_declared_genus) return *m_declared_genus;
    int chi = euler_characteristic();
    if (chi > 2 || (chi % 2) != 0) {
        throw Error(ErrorCode::InvalidMesh, "Euler characteristic " + std::to_string(chi) + " is not 2 - 2g");
    }
    return (2 - chi) / 2;
}

std::string_view violation_name(Violation v)
{
    switch (v) {
    case Violation::SelfLoop: return "SelfLoop";
    case Violation::DuplicateFace: return "DuplicateFace";
    case Violation::NonManifoldEdge: return "NonManifoldEdge";
    case Violation::OrientationClash: return "OrientationClash";
    case Violation::NonManifoldVertex: return "NonManifoldVertex";
    case Violation::IsolatedVertex: return "IsolatedVertex";
    case Violation::EulerMismatch: return "EulerMismatch";
    case Violation::TriangleInequality: return "TriangleInequality";
    }
    return "Unknown";
}

std::size_t ValidationReport::count(Violation kind) const
{
    return static_cast<std::size_t>(
        std::count_if(issues.begin(), issues.end(), [kind](const ValidationIssue& i) { return i.kind == kind; }));
}

ValidationReport validate(const CombinatorialSurface& surface)
{
    ValidationReport report;
    auto add = [&report](Violation kind, int element, std::string detail) {
        report.issues.push_back({kind, element, std::move(detail)});
    };

    for (int f : surface.degenerate_faces()) {
        add(Violation::SelfLoop, f, "face " + std::to_string(f) + " repeats a vertex");
    }

    std::map<std::array<int, 3>, int> seen;
    for (int f = 0; f < surface.num_faces(); ++f) {
        Face key = surface.face(f);
        std::sort(key.begin(), key.end());
        auto [it, inserted] = seen.emplace(key, f);
        if (!inserted) {
            add(Violation::DuplicateFace,
                f,
                "face " + std::to_string(f) + " duplicates face " + std::to_string(it->second));
        }
    }

    for (int e = 0; e < surface.num_edges(); ++e) {
        const auto& inc = surface.edge_faces(e);
        const Edge& ed = surface.edge(e);
        std::string name = "edge (" + std::to_string(ed.v0) + "," + std::to_string(ed.v1) + ")";
        if (inc.size() != 2) {
            add(Violation::NonManifoldEdge, e, name + " has " + std::to_string(inc.size()) + " incident faces");
            continue;
        }
        auto sign_in = [&](int f) {
            for (const auto& oe : surface.face_boundary(f))
                if (oe.edge == e) return oe.sign;
            return 0;
        };
        if (sign_in(inc[0]) == sign_in(inc[1])) {
            add(Violation::OrientationClash,
                e,
                name + " is traversed in the same direction by faces " + std::to_string(inc[0]) + " and " +
                    std::to_string(inc[1]));
        }
    }

    for (int v = 0; v < surface.num_vertices(); ++v) {
        if (surface.rotation(v).empty()) {
            add(Violation::IsolatedVertex, v, "vertex " + std::to_string(v) + " is in no face");
        } else if (!surface.rotation_complete(v)) {
            add(Violation::NonManifoldVertex, v, "link of vertex " + std::to_string(v) + " is not a single cycle");
        }
    }

    int chi = surface.euler_characteristic();
    if (auto g = surface.declared_genus()) {
        if (chi != 2 - 2 * *g) {
            add(Violation::EulerMismatch,
                -1,
                "chi = " + std::to_string(chi) + " but declared genus " + std::to_string(*g) + " requires " +
                    std::to_string(2 - 2 * *g));
        }
    } else if (chi > 2 || chi % 2 != 0) {
        add(Violation::EulerMismatch, -1, "chi = " + std::to_string(chi) + " is not of the form 2 - 2g");
    }

    // A closed surface must be connected for chi to determine the genus.
    if (surface.num_vertices() > 0) {
        std::vector<char> mark(static_cast<std::size_t>(surface.num_vertices()), 0);
        std::queue<int> q;
        q.push(0);
        mark[0] = 1;
        int reached = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& nb : surface.rotation(v)) {
                if (!mark[static_cast<std::size_t>(nb.vertex)]) {
                    mark[static_cast<std::size_t>(nb.vertex)] = 1;
                    ++reached;
                    q.push(nb.vertex);
                }
            }
        }
        if (reached != surface.num_vertices()) {
            add(Violation::EulerMismatch,
                -1,
                "surface is disconnected (" + std::to_string(reached) + " of " +
                    std::to_string(surface.num_vertices()) + " vertices reachable)");
        }
    }
    return report;
}

ValidationReport validate(const CombinatorialSurface& surface, const MeshMetric& metric)
{
    ValidationReport report = validate(surface);
    if (metric.edge_lengths.size() != static_cast<std::size_t>(surface.num_edges())) {
        report.issues.push_back({Violation::TriangleInequality, -1, "edge length count does not match edge count"});
        return report;
    }
    for (int f = 0; f < surface.num_faces(); ++f) {
        std::array<double, 3> l{};
        bool skip = false;
        for (int i = 0; i < 3; ++i) {
            int e = surface.face_boundary(f)[static_cast<std::size_t>(i)].edge;
            if (e < 0) {
                skip = true;
                break;
            }
            l[static_cast<std::size_t>(i)] = metric.edge_lengths[static_cast<std::size_t>(e)];
        }
        if (skip) continue;
        if (!(l[0] < l[1] + l[2] && l[1] < l[0] + l[2] && l[2] < l[0] + l[1])) {
            report.issues.push_back(
                {Violation::TriangleInequality, f, "face " + std::to_string(f) + " violates the triangle inequality"});
        }
    }
    return report;
}

MeshMetric MeshMetric::from_positions(const CombinatorialSurface& surface, std::vector<Vec3> positions)
{
    if (positions.size() != static_cast<std::size_t>(surface.num_vertices())) {
        throw Error(ErrorCode::InvalidMesh, "position count does not match vertex count");
    }
    MeshMetric m;
    m.edge_lengths.reserve(static_cast<std::size_t>(surface.num_edges()));
    for (const Edge& e : surface.edges()) {
        m.edge_lengths.push_back(
            distance(positions[static_cast<std::size_t>(e.v0)], positions[static_cast<std::size_t>(e.v1)]));
    }
    m.positions = std::move(positions);
    return m;
}

MeshMetric MeshMetric::from_edge_lengths(const CombinatorialSurface& surface, std::vector<double> lengths)
{
    if (lengths.size() != static_cast<std::size_t>(surface.num_edges())) {
        throw Error(ErrorCode::InvalidMesh, "edge length count does not match edge count");
    }
    for (double l : lengths) {
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidMesh, "edge lengths must be positive");
    }
    MeshMetric m;
    m.edge_lengths = std::move(lengths);
    return m;
}

double face_area(const MeshMetric& metric, const CombinatorialSurface& surface, int f)
{
    const auto& b = surface.face_boundary(f);
    return heron_area(
        metric.edge_lengths[static_cast<std::size_t>(b[0].edge)],
        metric.edge_lengths[static_cast<std::size_t>(b[1].edge)],
        metric.edge_lengths[static_cast<std::size_t>(b[2].edge)]);
}

double total_area(const CombinatorialSurface& surface, const MeshMetric& metric)
{
    double sum = 0.0;
    for (int f = 0; f < surface.num_faces(); ++f) sum += face_area(metric, surface, f);
    return sum;
}

Mesh subdivide(const Mesh& mesh)
{
    const CombinatorialSurface& s = mesh.surface;
    const int nv = s.num_vertices();
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(4 * s.num_faces()));
    struct PendingLength
    {
        int a, b;
        double len;
    };
    std::vector<PendingLength> lengths;
    const bool embedded = mesh.metric.has_positions();
    if (!embedded) lengths.reserve(static_cast<std::size_t>(9 * s.num_faces()));

    for (int f = 0; f < s.num_faces(); ++f) {
        const Face& t = s.face(f);
        const auto& bd = s.face_boundary(f);
        // Midpoint of side i lies on edge t[i] -> t[i+1].
        int m01 = nv + bd[0].edge;
        int m12 = nv + bd[1].edge;
        int m20 = nv + bd[2].edge;
        faces.push_back({t[0], m01, m20});
        faces.push_back({m01, t[1], m12});
        faces.push_back({m20, m12, t[2]});
        faces.push_back({m01, m12, m20});
        if (!embedded) {
            double l01 = mesh.metric.edge_lengths[static_cast<std::size_t>(bd[0].edge)];
            double l12 = mesh.metric.edge_lengths[static_cast<std::size_t>(bd[1].edge)];
            double l20 = mesh.metric.edge_lengths[static_cast<std::size_t>(bd[2].edge)];
            lengths.push_back({t[0], m01, 0.5 * l01});
            lengths.push_back({m01, t[1], 0.5 * l01});
            lengths.push_back({t[1], m12, 0.5 * l12});
            lengths.push_back({m12, t[2], 0.5 * l12});
            lengths.push_back({t[2], m20, 0.5 * l20});
            lengths.push_back({m20, t[0], 0.5 * l20});
            lengths.push_back({m01, m12, 0.5 * l20});
            lengths.push_back({m12, m20, 0.5 * l01});
            lengths.push_back({m20, m01, 0.5 * l12});
        }
    }

    Mesh out;
    out.surface = CombinatorialSurface::from_faces(nv + s.num_edges(), std::move(faces), s.declared_genus());
    if (embedded) {
        std::vector<Vec3> pos = mesh.metric.positions;
        pos.reserve(static_cast<std::size_t>(nv + s.num_edges()));
        for (const Edge& e : s.edges()) {
            const Vec3& a = mesh.metric.positions[static_cast<std::size_t>(e.v0)];
            const Vec3& b = mesh.metric.positions[static_cast<std::size_t>(e.v1)];
            pos.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])});
        }
        out.metric = MeshMetric::from_positions(out.surface, std::move(pos));
    } else {
        std::vector<double> l(static_cast<std::size_t>(out.surface.num_edges()), 0.0);
        for (const auto& p : lengths) l[static_cast<std::size_t>(out.surface.find_edge(p.a, p.b))] = p.len;
        out.metric = MeshMetric::from_edge_lengths(out.surface, std::move(l));
    }
    return out;
}

Mesh build_icosphere(int level)
{
    if (level < 0) throw Error(ErrorCode::InvalidArgument, "icosphere level must be non-negative");
    if (level > 8) throw Error(ErrorCode::LevelTooLarge, "icosphere level " + std::to_string(level) + " exceeds 8");

    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    std::vector<Vec3> pos = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
    };
    std::vector<Face> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    auto normalize = [](std::vector<Vec3>& p) {
        for (Vec3& x : p) {
            double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            for (double& c : x) c /= n;
        }
    };
    normalize(pos);
    // Orient every face outward (counterclockwise seen from outside).
    for (Face& t : faces) {
        const Vec3& a = pos[static_cast<std::size_t>(t[0])];
        const Vec3& b = pos[static_cast<std::size_t>(t[1])];
        const Vec3& c = pos[static_cast<std::size_t>(t[2])];
        Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        Vec3 w{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        Vec3 n{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
        if (n[0] * (a[0] + b[0] + c[0]) + n[1] * (a[1] + b[1] + c[1]) + n[2] * (a[2] + b[2] + c[2]) < 0.0) {
            std::swap(t[1], t[2]);
        }
    }

    Mesh mesh;
    mesh.surface = CombinatorialSurface::from_faces(12, std::move(faces), 0);
    mesh.metric = MeshMetric::from_positions(mesh.surface, std::move(pos));
    for (int k = 0; k < level; ++k) {
        mesh = subdivide(mesh);
        std::vector<Vec3> p = std::move(mesh.metric.positions);
        normalize(p);
        mesh.metric = MeshMetric::from_positions(mesh.surface, std::move(p));
    }
    return mesh;
}

Mesh build_flat_torus(int n, int m)
{
    if (n < 3 || m < 3) {
        throw Error(
            ErrorCode::GridTooSmall,
            "torus grid " + std::to_string(n) + "x" + std::to_string(m) + " needs both sides >= 3");
    }
    auto id = [m](int i, int j) { return i * m + j; };
    std::vector<Face> faces;
    faces.reserve(static_cast<std::size_t>(2 * n * m));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            int v00 = id(i, j);
            int v10 = id((i + 1) % n, j);
            int v11 = id((i + 1) % n, (j + 1) % m);
            int v01 = id(i, (j + 1) % m);
            faces.push_back({v00, v10, v11});
            faces.push_back({v00, v11, v01});
        }
    }
    Mesh mesh;
    mesh.surface = CombinatorialSurface::from_faces(n * m, std::move(faces), 1);
    std::vector<double> lengths;
    lengths.reserve(static_cast<std::size_t>(mesh.surface.num_edges()));
    for (const Edge& e : mesh.surface.edges()) {
        bool di = (e.v0 / m) != (e.v1 / m);
        bool dj = (e.v0 % m) != (e.v1 % m);
        lengths.push_back(di && dj ? std::sqrt(2.0) : 1.0);
    }
    mesh.metric = MeshMetric::from_edge_lengths(mesh.surface, std::move(lengths));
    return mesh;
}

Mesh build_genus_g(int genus, int refine)
{
    if (genus < 2) throw Error(ErrorCode::InvalidArgument, "build_genus_g needs genus >= 2");
    if (genus > 6 || refine > 5) {
        throw Error(
            ErrorCode::ResourceLimit,
            "genus " + std::to_string(genus) + " refine " + std::to_string(refine) + " exceeds g <= 6, refine <= 5");
    }
    if (refine < 0) throw Error(ErrorCode::InvalidArgument, "refine must be non-negative");

    // Planar disk: center plus 4g corners; boundary vertices carry (side, t) tags,
    // t in {0..4} along side s from corner s to corner s+1 (two halvings keep t integral).
    const int sides = 4 * genus;
    struct BoundaryTag
    {
        int side;
        int t;
    };
    std::vector<std::array<double, 2>> pos;
    std::vector<std::vector<BoundaryTag>> tags;
    pos.push_back({0.0, 0.0});
    tags.emplace_back();
    for (int s = 0; s < sides; ++s) {
        double a = kTwoPi * s / sides;
        pos.push_back({std::cos(a), std::sin(a)});
        tags.push_back({{s, 0}, {(s + sides - 1) % sides, 4}});
    }
    std::vector<Face> disk;
    for (int s = 0; s < sides; ++s) disk.push_back({0, 1 + s, 1 + (s + 1) % sides});

    for (int pass = 0; pass < 2; ++pass) {
        std::map<std::pair<int, int>, int> count;
        for (const Face& t : disk)
            for (int i = 0; i < 3; ++i) {
                int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>((i + 1) % 3)];
                ++count[{std::min(a, b), std::max(a, b)}];
            }
        std::map<std::pair<int, int>, int> mid;
        for (const auto& [key, c] : count) {
            auto [a, b] = key;
            int id = static_cast<int>(pos.size());
            mid[key] = id;
            const auto& pa = pos[static_cast<std::size_t>(a)];
            const auto& pb = pos[static_cast<std::size_t>(b)];
            pos.push_back({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])});
            std::vector<BoundaryTag> tag;
            if (c == 1) {
                for (const auto& ta : tags[static_cast<std::size_t>(a)])
                    for (const auto& tb : tags[static_cast<std::size_t>(b)])
                        if (ta.side == tb.side) tag.push_back({ta.side, (ta.t + tb.t) / 2});
            }
            tags.push_back(std::move(tag));
        }
        std::vector<Face> next;
        for (const Face& t : disk) {
            auto m = [&](int i, int j) {
                int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>(j)];
                return mid.at({std::min(a, b), std::max(a, b)});
            };
            int m01 = m(0, 1), m12 = m(1, 2), m20 = m(2, 0);
            next.push_back({t[0], m01, m20});
            next.push_back({m01, t[1], m12});
            next.push_back({m20, m12, t[2]});
            next.push_back({m01, m12, m20});
        }
        disk = std::move(next);
    }

    // Glue: side 4k carries a_k forward, 4k+2 carries a_k backward; likewise b_k on 4k+1, 4k+3.
    std::map<std::pair<int, int>, int> glued;
    std::vector<int> remap(pos.size(), -1);
    int next_id = 1; // 0 is the single corner vertex
    for (std::size_t v = 0; v < pos.size(); ++v) {
        if (tags[v].empty()) continue;
        const BoundaryTag& tag = tags[v].front();
        int letter = 2 * (tag.side / 4) + (tag.side % 2);
        bool forward = (tag.side % 4) < 2;
        int u = forward ? tag.t : 4 - tag.t;
        if (u == 0 || u == 4) {
            remap[v] = 0;
            continue;
        }
        auto [it, inserted] = glued.try_emplace({letter, u}, next_id);
        if (inserted) ++next_id;
        remap[v] = it->second;
    }
    for (std::size_t v = 0; v < pos.size(); ++v)
        if (remap[v] < 0) remap[v] = next_id++;

    std::vector<Face> faces;
    faces.reserve(disk.size());
    for (const Face& t : disk) {
        faces.push_back(
            {remap[static_cast<std::size_t>(t[0])],
             remap[static_cast<std::size_t>(t[1])],
             remap[static_cast<std::size_t>(t[2])]});
    }
    Mesh mesh;
    mesh.surface = CombinatorialSurface::from_faces(next_id, std::move(faces), genus);
    std::vector<double> lengths(static_cast<std::size_t>(mesh.surface.num_edges()), 0.0);
    for (const Face& t : disk) {
        for (int i = 0; i < 3; ++i) {
            int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>((i + 1) % 3)];
            int e = mesh.surface.find_edge(remap[static_cast<std::size_t>(a)], remap[static_cast<std::size_t>(b)]);
            if (e < 0) continue;
            const auto& pa = pos[static_cast<std::size_t>(a)];
            const auto& pb = pos[static_cast<std::size_t>(b)];
            lengths[static_cast<std::size_t>(e)] = std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
        }
    }
    mesh.metric = MeshMetric::from_edge_lengths(mesh.surface, std::move(lengths));
    for (int k = 0; k < refine; ++k) mesh = subdivide(mesh);
    return mesh;
}

} // namespace magbottle
