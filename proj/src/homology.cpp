#include "magbottle/homology.hpp"

#include "magbottle/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace magbottle {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::ResourceLimit, "integer overflow in homology");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::ResourceLimit, "integer overflow in homology");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r = 0;
    if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorCode::ResourceLimit, "integer overflow in homology");
    return r;
}

// Dense Smith reduction; returns nonzero diagonal entries (absolute values).
std::vector<std::int64_t> dense_smith(IntMatrix a)
{
    std::vector<std::int64_t> diag;
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        std::size_t pr = rows, pc = cols;
        std::int64_t best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
                    best = std::llabs(a[i][j]);
                    pr = i;
                    pc = j;
                }
        if (best == 0) break;
        std::swap(a[t], a[pr]);
        for (auto& row : a) std::swap(row[t], row[pc]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                std::int64_t q = a[i][t] / a[t][t];
                for (std::size_t j = t; j < cols; ++j) a[i][j] = checked_sub(a[i][j], checked_mul(q, a[t][j]));
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                std::int64_t q = a[t][j] / a[t][t];
                for (std::size_t i = t; i < rows; ++i) a[i][j] = checked_sub(a[i][j], checked_mul(q, a[i][t]));
                if (a[t][j] != 0) {
                    for (auto& row : a) std::swap(row[t], row[j]);
                    clean = false;
                }
            }
            if (clean) {
                // Divisibility: fold any entry not divisible by the pivot into row t.
                for (std::size_t i = t + 1; i < rows && clean; ++i)
                    for (std::size_t j = t + 1; j < cols; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            for (std::size_t k = t; k < cols; ++k) a[t][k] = checked_add(a[t][k], a[i][k]);
                            clean = false;
                            break;
                        }
            }
        }
        diag.push_back(std::llabs(a[t][t]));
        ++t;
    }
    return diag;
}

} // namespace

ChainComplex boundary_matrices(const CombinatorialSurface& surface)
{
    ChainComplex cc;
    cc.d1.rows = surface.num_edges();
    cc.d1.cols = surface.num_vertices();
    cc.d1.entries.resize(static_cast<std::size_t>(cc.d1.rows));
    for (int e = 0; e < surface.num_edges(); ++e) {
        const Edge& ed = surface.edge(e);
        cc.d1.entries[static_cast<std::size_t>(e)] = {{ed.v0, -1}, {ed.v1, 1}};
    }
    cc.d2.rows = surface.num_faces();
    cc.d2.cols = surface.num_edges();
    cc.d2.entries.resize(static_cast<std::size_t>(cc.d2.rows));
    for (int f = 0; f < surface.num_faces(); ++f) {
        std::map<int, std::int64_t> row;
        for (const auto& oe : surface.face_boundary(f))
            if (oe.edge >= 0) row[oe.edge] += oe.sign;
        auto& out = cc.d2.entries[static_cast<std::size_t>(f)];
        for (auto [c, v] : row)
            if (v != 0) out.emplace_back(c, v);
    }
    return cc;
}

std::vector<std::int64_t> smith_invariants(const SparseIntMatrix& m)
{
    std::vector<std::map<int, std::int64_t>> rows(static_cast<std::size_t>(m.rows));
    std::vector<std::set<int>> col_rows(static_cast<std::size_t>(m.cols));
    for (int r = 0; r < m.rows; ++r) {
        for (auto [c, v] : m.entries[static_cast<std::size_t>(r)]) {
            if (v == 0) continue;
            rows[static_cast<std::size_t>(r)][c] = v;
            col_rows[static_cast<std::size_t>(c)].insert(r);
        }
    }

    std::vector<std::int64_t> invariants;
    bool progress = true;
    while (progress) {
        progress = false;
        for (int c = 0; c < m.cols; ++c) {
            auto& rs = col_rows[static_cast<std::size_t>(c)];
            if (rs.empty()) continue;
            int pivot = -1;
            std::size_t best = 0;
            for (int r : rs) {
                std::int64_t v = rows[static_cast<std::size_t>(r)][c];
                if (v == 1 || v == -1) {
                    std::size_t len = rows[static_cast<std::size_t>(r)].size();
                    if (pivot < 0 || len < best) {
                        pivot = r;
                        best = len;
                    }
                }
            }
            if (pivot < 0) continue;
            progress = true;
            auto& prow = rows[static_cast<std::size_t>(pivot)];
            const std::int64_t pv = prow[c];
            std::vector<int> targets(rs.begin(), rs.end());
            for (int r : targets) {
                if (r == pivot) continue;
                auto& row = rows[static_cast<std::size_t>(r)];
                const std::int64_t factor = checked_mul(row[c], pv); // pv^-1 == pv for units
                for (auto [pc, val] : prow) {
                    std::int64_t nv = checked_sub(row[pc], checked_mul(factor, val));
                    if (nv == 0) {
                        row.erase(pc);
                        col_rows[static_cast<std::size_t>(pc)].erase(r);
                    } else {
                        row[pc] = nv;
                        col_rows[static_cast<std::size_t>(pc)].insert(r);
                    }
                }
            }
            // Column c is now zero outside the pivot row, so column operations clear the row.
            for (auto [pc, val] : prow) col_rows[static_cast<std::size_t>(pc)].erase(pivot);
            prow.clear();
            invariants.push_back(1);
        }
    }

    std::vector<int> live_rows, live_cols;
    for (int r = 0; r < m.rows; ++r)
        if (!rows[static_cast<std::size_t>(r)].empty()) live_rows.push_back(r);
    for (int c = 0; c < m.cols; ++c)
        if (!col_rows[static_cast<std::size_t>(c)].empty()) live_cols.push_back(c);
    if (!live_rows.empty()) {
        std::map<int, std::size_t> col_pos;
        for (std::size_t j = 0; j < live_cols.size(); ++j) col_pos[live_cols[j]] = j;
        IntMatrix dense(live_rows.size(), std::vector<std::int64_t>(live_cols.size(), 0));
        for (std::size_t i = 0; i < live_rows.size(); ++i)
            for (auto [c, v] : rows[static_cast<std::size_t>(live_rows[i])]) dense[i][col_pos[c]] = v;
        for (std::int64_t d : dense_smith(std::move(dense))) invariants.push_back(d);
    }
    std::sort(invariants.begin(), invariants.end());
    return invariants;
}

HomologyGroups betti_and_torsion(const ChainComplex& complex)
{
    auto inv1 = smith_invariants(complex.d1);
    auto inv2 = smith_invariants(complex.d2);
    HomologyGroups h;
    h.b1 = complex.d1.rows - static_cast<int>(inv1.size()) - static_cast<int>(inv2.size());
    for (std::int64_t d : inv2)
        if (d > 1) h.torsion.push_back(d);
    return h;
}

TreeCotree tree_cotree(const CombinatorialSurface& surface)
{
    const auto nv = static_cast<std::size_t>(surface.num_vertices());
    const auto ne = static_cast<std::size_t>(surface.num_edges());
    const auto nf = static_cast<std::size_t>(surface.num_faces());
    TreeCotree tc;
    tc.vertex_parent.assign(nv, -1);
    tc.vertex_parent_edge.assign(nv, -1);
    tc.in_primal_tree.assign(ne, 0);
    tc.face_parent.assign(nf, -1);
    tc.face_parent_edge.assign(nf, -1);
    tc.in_dual_tree.assign(ne, 0);
    if (nv == 0) return tc;

    std::vector<char> seen(nv, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        tc.vertex_order.push_back(v);
        for (const auto& nb : surface.rotation(v)) {
            if (seen[static_cast<std::size_t>(nb.vertex)]) continue;
            seen[static_cast<std::size_t>(nb.vertex)] = 1;
            tc.vertex_parent[static_cast<std::size_t>(nb.vertex)] = v;
            tc.vertex_parent_edge[static_cast<std::size_t>(nb.vertex)] = nb.edge;
            tc.in_primal_tree[static_cast<std::size_t>(nb.edge)] = 1;
            q.push(nb.vertex);
        }
    }

    if (nf > 0) {
        std::vector<char> fseen(nf, 0);
        std::queue<int> fq;
        fq.push(0);
        fseen[0] = 1;
        while (!fq.empty()) {
            int f = fq.front();
            fq.pop();
            tc.face_order.push_back(f);
            for (const auto& oe : surface.face_boundary(f)) {
                if (oe.edge < 0 || tc.in_primal_tree[static_cast<std::size_t>(oe.edge)]) continue;
                for (int g : surface.edge_faces(oe.edge)) {
                    if (g == f || fseen[static_cast<std::size_t>(g)]) continue;
                    fseen[static_cast<std::size_t>(g)] = 1;
                    tc.face_parent[static_cast<std::size_t>(g)] = f;
                    tc.face_parent_edge[static_cast<std::size_t>(g)] = oe.edge;
                    tc.in_dual_tree[static_cast<std::size_t>(oe.edge)] = 1;
                    fq.push(g);
                }
            }
        }
    }
    for (std::size_t e = 0; e < ne; ++e)
        if (!tc.in_primal_tree[e] && !tc.in_dual_tree[e]) tc.leftover.push_back(static_cast<int>(e));
    return tc;
}

std::vector<std::int64_t> chain_boundary(const CombinatorialSurface& surface, const Chain& chain)
{
    std::vector<std::int64_t> b(static_cast<std::size_t>(surface.num_vertices()), 0);
    for (int e = 0; e < surface.num_edges(); ++e) {
        std::int64_t c = chain[static_cast<std::size_t>(e)];
        if (c == 0) continue;
        b[static_cast<std::size_t>(surface.edge(e).v1)] += c;
        b[static_cast<std::size_t>(surface.edge(e).v0)] -= c;
    }
    return b;
}

bool is_cycle(const CombinatorialSurface& surface, const Chain& chain)
{
    if (chain.size() != static_cast<std::size_t>(surface.num_edges())) return false;
    auto b = chain_boundary(surface, chain);
    return std::all_of(b.begin(), b.end(), [](std::int64_t x) { return x == 0; });
}

Chain chain_from_walk(const CombinatorialSurface& surface, std::span<const int> walk)
{
    Chain c(static_cast<std::size_t>(surface.num_edges()), 0);
    if (walk.empty()) return c;
    if (walk.front() != walk.back()) {
        throw Error(
            ErrorCode::NotClosed,
            "walk starts at " + std::to_string(walk.front()) + " but ends at " + std::to_string(walk.back()));
    }
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        auto oe = surface.oriented_edge(walk[i], walk[i + 1]);
        if (!oe) {
            throw Error(
                ErrorCode::NotClosed,
                "walk steps from " + std::to_string(walk[i]) + " to " + std::to_string(walk[i + 1]) +
                    " across a non-edge");
        }
        c[static_cast<std::size_t>(oe->edge)] += oe->sign;
    }
    return c;
}

std::vector<std::vector<int>> decompose_into_walks(const CombinatorialSurface& surface, const Chain& cycle)
{
    if (!is_cycle(surface, cycle)) throw Error(ErrorCode::NotACycle, "chain has nonzero boundary");
    // Outgoing directed edge copies per vertex.
    std::vector<std::vector<std::pair<int, std::int64_t>>> out(static_cast<std::size_t>(surface.num_vertices()));
    for (int e = 0; e < surface.num_edges(); ++e) {
        std::int64_t c = cycle[static_cast<std::size_t>(e)];
        if (c == 0) continue;
        const Edge& ed = surface.edge(e);
        int from = c > 0 ? ed.v0 : ed.v1;
        int to = c > 0 ? ed.v1 : ed.v0;
        out[static_cast<std::size_t>(from)].emplace_back(to, std::llabs(c));
    }
    std::vector<std::size_t> cursor(out.size(), 0);
    auto take = [&](int v) -> int {
        auto& list = out[static_cast<std::size_t>(v)];
        auto& k = cursor[static_cast<std::size_t>(v)];
        while (k < list.size() && list[k].second == 0) ++k;
        if (k == list.size()) return -1;
        --list[k].second;
        return list[k].first;
    };

    std::vector<std::vector<int>> walks;
    for (int s = 0; s < surface.num_vertices(); ++s) {
        while (true) {
            int next = take(s);
            if (next < 0) break;
            std::vector<int> walk{s, next};
            int cur = next;
            while (cur != s) {
                cur = take(cur);
                walk.push_back(cur);
            }
            walks.push_back(std::move(walk));
        }
    }
    return walks;
}

Chain intersection_cochain(const CombinatorialSurface& surface, const Chain& cycle)
{
    Chain w(static_cast<std::size_t>(surface.num_edges()), 0);
    for (const auto& walk : decompose_into_walks(surface, cycle)) {
        const std::size_t n = walk.size() - 1;
        for (std::size_t i = 0; i < n; ++i) {
            int v = walk[i];
            int prev = walk[(i + n - 1) % n];
            int next = walk[i + 1];
            const auto& rot = surface.rotation(v);
            auto pos = [&rot](int u) {
                for (std::size_t k = 0; k < rot.size(); ++k)
                    if (rot[k].vertex == u) return k;
                return rot.size();
            };
            std::size_t k_out = pos(next);
            std::size_t k_in = pos(prev);
            if (k_out == rot.size() || k_in == rot.size()) {
                throw Error(ErrorCode::InvalidMesh, "rotation system missing neighbor at vertex " + std::to_string(v));
            }
            // Edges strictly inside the left wedge (ccw from outgoing to incoming) are
            // crossed from right to left by the pushed-off copy of the walk.
            for (std::size_t k = (k_out + 1) % rot.size(); k != k_in; k = (k + 1) % rot.size()) {
                const Neighbor& nb = rot[k];
                w[static_cast<std::size_t>(nb.edge)] += (v < nb.vertex) ? 1 : -1;
            }
        }
    }
    return w;
}

std::int64_t intersection_number(const CombinatorialSurface& surface, const Chain& a, const Chain& b)
{
    if (!is_cycle(surface, b)) throw Error(ErrorCode::NotACycle, "second argument has nonzero boundary");
    Chain w = intersection_cochain(surface, a);
    std::int64_t s = 0;
    for (std::size_t e = 0; e < w.size(); ++e) s = checked_add(s, checked_mul(w[e], b[e]));
    return s;
}

IntMatrix intersection_matrix(const CombinatorialSurface& surface, const std::vector<Chain>& cycles)
{
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        if (!is_cycle(surface, cycles[i])) {
            throw Error(ErrorCode::NotACycle, "cycle " + std::to_string(i) + " has nonzero boundary");
        }
    }
    const std::size_t n = cycles.size();
    IntMatrix m(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        Chain w = intersection_cochain(surface, cycles[i]);
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t s = 0;
            for (std::size_t e = 0; e < w.size(); ++e) s = checked_add(s, checked_mul(w[e], cycles[j][e]));
            m[i][j] = s;
        }
    }
    return m;
}

HomologyBasis tree_cotree_basis(const CombinatorialSurface& surface)
{
    if (surface.genus() == 0) throw Error(ErrorCode::GenusZero, "sphere has trivial first homology");
    TreeCotree tc = tree_cotree(surface);
    HomologyBasis basis;
    auto root_path = [&tc](int v) {
        std::vector<int> path{v};
        while (tc.vertex_parent[static_cast<std::size_t>(v)] >= 0) {
            v = tc.vertex_parent[static_cast<std::size_t>(v)];
            path.push_back(v);
        }
        return path;
    };
    for (int e : tc.leftover) {
        const Edge& ed = surface.edge(e);
        // Walk v0 -> v1, then back to v0 through the tree via the lowest common ancestor.
        auto up1 = root_path(ed.v1);
        auto up0 = root_path(ed.v0);
        while (up1.size() > 1 && up0.size() > 1 && up1[up1.size() - 2] == up0[up0.size() - 2]) {
            up1.pop_back();
            up0.pop_back();
        }
        std::vector<int> walk{ed.v0};
        walk.insert(walk.end(), up1.begin(), up1.end());
        for (auto it = up0.rbegin() + 1; it != up0.rend(); ++it) walk.push_back(*it);
        basis.cycles.push_back(chain_from_walk(surface, walk));
    }
    basis.intersection = intersection_matrix(surface, basis.cycles);
    return basis;
}

IntMatrix standard_symplectic(int genus)
{
    const auto n = static_cast<std::size_t>(2 * genus);
    IntMatrix j(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t k = 0; k < static_cast<std::size_t>(genus); ++k) {
        j[k][k + static_cast<std::size_t>(genus)] = 1;
        j[k + static_cast<std::size_t>(genus)][k] = -1;
    }
    return j;
}

IntMatrix symplectic_reduction(const IntMatrix& form)
{
    const std::size_t n = form.size();
    if (n % 2 != 0) throw Error(ErrorCode::DegenerateForm, "odd-dimensional intersection form");
    using Row = std::vector<std::int64_t>;
    auto pair = [&form, n](const Row& x, const Row& y) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (y[j] != 0) s = checked_add(s, checked_mul(checked_mul(x[i], form[i][j]), y[j]));
        }
        return s;
    };
    auto axpy = [](Row& y, std::int64_t k, const Row& x) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = checked_add(y[i], checked_mul(k, x[i]));
    };

    std::vector<Row> remaining;
    for (std::size_t i = 0; i < n; ++i) {
        Row r(n, 0);
        r[i] = 1;
        remaining.push_back(std::move(r));
    }
    std::vector<Row> as, bs;
    while (!remaining.empty()) {
        Row e = remaining.front();
        std::vector<Row> others(remaining.begin() + 1, remaining.end());
        std::vector<std::int64_t> w;
        for (const Row& o : others) w.push_back(pair(e, o));

        std::size_t partner = others.size();
        for (std::size_t j = 0; j < w.size(); ++j)
            if (w[j] == 1 || w[j] == -1) {
                partner = j;
                break;
            }
        if (partner == others.size()) {
            // Euclid on the pairings until a single nonzero entry remains.
            while (true) {
                std::size_t p = w.size();
                std::size_t nonzero = 0;
                for (std::size_t j = 0; j < w.size(); ++j) {
                    if (w[j] == 0) continue;
                    ++nonzero;
                    if (p == w.size() || std::llabs(w[j]) < std::llabs(w[p])) p = j;
                }
                if (nonzero == 0) throw Error(ErrorCode::DegenerateForm, "intersection form has a null vector");
                if (nonzero == 1) {
                    if (std::llabs(w[p]) != 1) {
                        throw Error(ErrorCode::DegenerateForm, "intersection form is not unimodular");
                    }
                    partner = p;
                    break;
                }
                for (std::size_t j = 0; j < w.size(); ++j) {
                    if (j == p || w[j] == 0) continue;
                    std::int64_t k = w[j] / w[p];
                    axpy(others[j], -k, others[p]);
                    w[j] -= k * w[p];
                }
            }
        }
        Row f = others[partner];
        if (w[partner] < 0)
            for (auto& x : f) x = -x;
        others.erase(others.begin() + static_cast<std::ptrdiff_t>(partner));
        for (Row& c : others) {
            std::int64_t cf = pair(c, f);
            std::int64_t ce = pair(c, e);
            axpy(c, -cf, e);
            axpy(c, ce, f);
        }
        as.push_back(std::move(e));
        bs.push_back(std::move(f));
        remaining = std::move(others);
    }
    IntMatrix t;
    for (auto& r : as) t.push_back(std::move(r));
    for (auto& r : bs) t.push_back(std::move(r));
    return t;
}

HomologyBasis canonicalize_basis(const HomologyBasis& basis)
{
    const std::size_t n = basis.cycles.size();
    if (basis.intersection.size() != n) throw Error(ErrorCode::DimensionMismatch, "intersection matrix size");
    if (n == 0) return basis;
    if (std::llabs(determinant(basis.intersection)) != 1) {
        throw Error(ErrorCode::DegenerateForm, "intersection matrix is not unimodular");
    }
    IntMatrix t = symplectic_reduction(basis.intersection);
    HomologyBasis out;
    const std::size_t ne = basis.cycles.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        Chain c(ne, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (t[i][j] == 0) continue;
            for (std::size_t e = 0; e < ne; ++e) c[e] = checked_add(c[e], checked_mul(t[i][j], basis.cycles[j][e]));
        }
        out.cycles.push_back(std::move(c));
    }
    // Transformed form T Q T^T, which must be the standard J.
    out.intersection.assign(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t s = 0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    if (t[i][k] != 0 && t[j][l] != 0)
                        s = checked_add(s, checked_mul(checked_mul(t[i][k], basis.intersection[k][l]), t[j][l]));
            out.intersection[i][j] = s;
        }
    if (out.intersection != standard_symplectic(static_cast<int>(n / 2))) {
        throw Error(ErrorCode::DegenerateForm, "symplectic reduction did not reach the standard form");
    }
    return out;
}

HomologyBasis flat_torus_basis(const CombinatorialSurface& surface, int n, int m)
{
    if (surface.num_vertices() != n * m) throw Error(ErrorCode::DimensionMismatch, "surface is not an n x m torus");
    std::vector<int> row, col;
    for (int i = 0; i <= n; ++i) row.push_back((i % n) * m);
    for (int j = 0; j <= m; ++j) col.push_back(j % m);
    HomologyBasis b;
    b.cycles.push_back(chain_from_walk(surface, row));
    b.cycles.push_back(chain_from_walk(surface, col));
    b.intersection = intersection_matrix(surface, b.cycles);
    return b;
}

std::int64_t determinant(const IntMatrix& m)
{
    // Fraction-free Bareiss elimination.
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return static_cast<std::int64_t>(sign * a[n - 1][n - 1]);
}

} // namespace magbottle
