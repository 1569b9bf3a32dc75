#pragma once

#include "magbottle/surface.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace magbottle {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Integer 1-chain: one coefficient per edge, on the edge's reference orientation.
using Chain = std::vector<std::int64_t>;

struct SparseIntMatrix
{
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::pair<int, std::int64_t>>> entries; // per row, sorted by column
};

/// Simplicial boundary operators in row form: d1 is E x V (row e = v1 - v0),
/// d2 is F x E (row f = oriented boundary of f). d2 * d1 == 0.
struct ChainComplex
{
    SparseIntMatrix d1;
    SparseIntMatrix d2;
};

ChainComplex boundary_matrices(const CombinatorialSurface& surface);

/// Nonzero Smith invariant factors (absolute values, ascending divisibility).
/// Sparse unit-pivot elimination followed by dense Smith reduction of the residue;
/// throws Error(ResourceLimit) on 64-bit overflow.
std::vector<std::int64_t> smith_invariants(const SparseIntMatrix& m);

struct HomologyGroups
{
    int b1 = 0;
    std::vector<std::int64_t> torsion;
};

/// First Betti number and torsion coefficients of H1.
HomologyGroups betti_and_torsion(const ChainComplex& complex);

/// Primal BFS spanning tree rooted at vertex 0, dual BFS spanning tree over
/// the remaining edges rooted at face 0, and the leftover generator edges.
struct TreeCotree
{
    std::vector<int> vertex_parent;      // -1 at the root
    std::vector<int> vertex_parent_edge; // -1 at the root
    std::vector<int> vertex_order;       // BFS order
    std::vector<char> in_primal_tree;    // per edge
    std::vector<int> face_parent;        // -1 at the root
    std::vector<int> face_parent_edge;   // -1 at the root
    std::vector<int> face_order;         // BFS order
    std::vector<char> in_dual_tree;      // per edge
    std::vector<int> leftover;           // edges in neither tree, ascending
};

TreeCotree tree_cotree(const CombinatorialSurface& surface);

struct HomologyBasis
{
    std::vector<Chain> cycles;
    IntMatrix intersection;
};

/// Boundary of a chain as a per-vertex vector.
std::vector<std::int64_t> chain_boundary(const CombinatorialSurface& surface, const Chain& chain);
bool is_cycle(const CombinatorialSurface& surface, const Chain& chain);

/// Chain of a closed vertex walk v0, v1, ..., vn = v0. Throws Error(NotClosed)
/// when the walk does not return or steps across a non-edge.
Chain chain_from_walk(const CombinatorialSurface& surface, std::span<const int> walk);

/// Splits a cycle into closed vertex walks.
std::vector<std::vector<int>> decompose_into_walks(const CombinatorialSurface& surface, const Chain& cycle);

/// Integer cochain w with w(b) = a . b for every cycle b, obtained by pushing
/// a to its left through the rotation system.
Chain intersection_cochain(const CombinatorialSurface& surface, const Chain& cycle);

/// Algebraic intersection number a . b; (x-loop) . (y-loop) = +1 on a ccw-oriented plane patch.
std::int64_t intersection_number(const CombinatorialSurface& surface, const Chain& a, const Chain& b);

/// Matrix of pairwise intersection numbers. Throws Error(NotACycle).
IntMatrix intersection_matrix(const CombinatorialSurface& surface, const std::vector<Chain>& cycles);

/// 2g generating cycles (leftover edge closed through the primal tree), with
/// their intersection matrix. Throws Error(GenusZero) on spheres.
HomologyBasis tree_cotree_basis(const CombinatorialSurface& surface);

/// [[0, I], [-I, 0]] of size 2g.
IntMatrix standard_symplectic(int genus);

/// Symplectic reduction over Z: returns a basis (a_1..a_g, b_1..b_g) related to the
/// input by a unimodular transform with intersection matrix exactly standard_symplectic(g).
/// Throws Error(DegenerateForm) if the input form is not unimodular.
HomologyBasis canonicalize_basis(const HomologyBasis& basis);

/// Same reduction on the bare form; returns T with T * Q * T^T = J.
IntMatrix symplectic_reduction(const IntMatrix& form);

/// Row and column loops of build_flat_torus(n, m): a = (i, 0) for i = 0..n-1, b = (0, j).
/// Their intersection matrix is standard.
HomologyBasis flat_torus_basis(const CombinatorialSurface& surface, int n, int m);

std::int64_t determinant(const IntMatrix& m);

} // namespace magbottle
