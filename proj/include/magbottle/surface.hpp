#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace magbottle {

using Face = std::array<int, 3>;
using Vec3 = std::array<double, 3>;

/// Undirected edge stored with its reference orientation v0 -> v1, v0 < v1.
struct Edge
{
    int v0;
    int v1;
};

/// An edge together with the direction of traversal relative to its
/// reference orientation (+1 along, -1 against).
struct OrientedEdge
{
    int edge;
    int sign;
};

struct Neighbor
{
    int vertex;
    int edge;
};

///
/// Oriented triangulated closed surface.
///
/// Edges are derived from the face list and indexed in order of first
/// appearance. The rotation system (counterclockwise cyclic order of
/// neighbors around each vertex) is derived from face orientations; at a
/// vertex whose link is not a single cycle the rotation is marked incomplete
/// and validate() reports it.
///
class CombinatorialSurface
{
public:
    CombinatorialSurface() = default;

    /// Throws Error(InvalidMesh) on out-of-range vertex indices. All other
    /// defects are recorded and surface through validate().
    static CombinatorialSurface from_faces(
        int num_vertices,
        std::vector<Face> faces,
        std::optional<int> declared_genus = std::nullopt);

    int num_vertices() const { return m_num_vertices; }
    int num_edges() const { return static_cast<int>(m_edges.size()); }
    int num_faces() const { return static_cast<int>(m_faces.size()); }

    const std::vector<Edge>& edges() const { return m_edges; }
    const std::vector<Face>& faces() const { return m_faces; }
    const Edge& edge(int e) const { return m_edges[static_cast<std::size_t>(e)]; }
    const Face& face(int f) const { return m_faces[static_cast<std::size_t>(f)]; }

    /// Edge index joining a and b, or -1.
    int find_edge(int a, int b) const;
    /// Edge from -> to with its traversal sign, if the edge exists.
    std::optional<OrientedEdge> oriented_edge(int from, int to) const;

    /// Boundary of face f as (f0->f1, f1->f2, f2->f0). Entries with edge == -1
    /// mark a degenerate (self-loop) side.
    const std::array<OrientedEdge, 3>& face_boundary(int f) const
    {
        return m_face_boundary[static_cast<std::size_t>(f)];
    }

    /// Faces incident to edge e (any number on invalid input).
    const std::vector<int>& edge_faces(int e) const { return m_edge_faces[static_cast<std::size_t>(e)]; }

    /// Counterclockwise neighbor order around v.
    const std::vector<Neighbor>& rotation(int v) const { return m_rotation[static_cast<std::size_t>(v)]; }
    bool rotation_complete(int v) const { return m_rotation_ok[static_cast<std::size_t>(v)] != 0; }

    int euler_characteristic() const { return m_num_vertices - num_edges() + num_faces(); }
    std::optional<int> declared_genus() const { return m_declared_genus; }

    /// Declared genus, else (2 - chi) / 2. Throws Error(InvalidMesh) when chi is odd or > 2.
    int genus() const;

    /// Faces that had a repeated vertex at construction.
    const std::vector<int>& degenerate_faces() const { return m_degenerate_faces; }

private:
    int m_num_vertices = 0;
    std::vector<Edge> m_edges;
    std::vector<Face> m_faces;
    std::vector<std::array<OrientedEdge, 3>> m_face_boundary;
    std::vector<std::vector<int>> m_edge_faces;
    std::vector<std::vector<Neighbor>> m_rotation;
    std::vector<char> m_rotation_ok;
    std::unordered_map<std::uint64_t, int> m_edge_index;
    std::optional<int> m_declared_genus;
    std::vector<int> m_degenerate_faces;
};

/// Metric data: per-edge lengths always; vertex positions when embedded.
struct MeshMetric
{
    std::vector<Vec3> positions;
    std::vector<double> edge_lengths;

    static MeshMetric from_positions(const CombinatorialSurface& surface, std::vector<Vec3> positions);
    static MeshMetric from_edge_lengths(const CombinatorialSurface& surface, std::vector<double> lengths);

    bool has_positions() const { return !positions.empty(); }
};

struct Mesh
{
    CombinatorialSurface surface;
    MeshMetric metric;
};

enum class Violation {
    SelfLoop,
    DuplicateFace,
    NonManifoldEdge,
    OrientationClash,
    NonManifoldVertex,
    IsolatedVertex,
    EulerMismatch,
    TriangleInequality,
};

std::string_view violation_name(Violation v);

struct ValidationIssue
{
    Violation kind;
    int element; // vertex, edge or face index depending on kind; -1 for global issues
    std::string detail;
};

struct ValidationReport
{
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    std::size_t count(Violation kind) const;
};

ValidationReport validate(const CombinatorialSurface& surface);
/// Topological checks plus the strict triangle inequality on every face.
ValidationReport validate(const CombinatorialSurface& surface, const MeshMetric& metric);

/// Geodesic icosphere: icosahedron refined `level` times, projected to the unit sphere.
/// Throws Error(LevelTooLarge) for level > 8.
Mesh build_icosphere(int level);

/// N x M periodic grid, every square split along its (i,j)-(i+1,j+1) diagonal.
/// Vertex (i, j) has index i * M + j. Throws Error(GridTooSmall) unless N, M >= 3.
Mesh build_flat_torus(int n, int m);

/// Genus-g surface from the 4g-gon with boundary word prod a_k b_k a_k^-1 b_k^-1,
/// fan-triangulated, subdivided twice before gluing, then refined `refine` times.
/// Edge lengths come from the planar regular-polygon layout.
/// Throws Error(ResourceLimit) for g > 6 or refine > 5, Error(InvalidArgument) for g < 2.
Mesh build_genus_g(int genus, int refine);

/// Midpoint 1-to-4 subdivision. New edge lengths follow the flat model per face
/// (halves of split edges; mid-segments are half the opposite side).
Mesh subdivide(const Mesh& mesh);

double face_area(const MeshMetric& metric, const CombinatorialSurface& surface, int f);
double total_area(const CombinatorialSurface& surface, const MeshMetric& metric);

} // namespace magbottle
