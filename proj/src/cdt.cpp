#include "deq/cdt.hpp"

#include "deq/error.hpp"
#include "deq/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace deq {

namespace {

using predicates::incircle_sign;
using predicates::orient_sign;

int next(int k) { return k == 2 ? 0 : k + 1; }
int prev(int k) { return k == 0 ? 2 : k - 1; }

struct Tri {
    std::array<int, 3> v;
    /// n[k] is the neighbour across the edge opposite v[k].
    std::array<int, 3> n{-1, -1, -1};
    /// c[k] marks the edge opposite v[k] as constrained.
    std::array<bool, 3> c{false, false, false};
};

class Triangulation {
public:
    explicit Triangulation(const std::vector<Vec2>& input) : p_(input)
    {
        Vec2 lo = p_[0], hi = p_[0];
        for (const auto& q : p_) {
            lo = lo.cwiseMin(q);
            hi = hi.cwiseMax(q);
        }
        const Vec2 mid = 0.5 * (lo + hi);
        const double s = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-300});
        n_input_ = static_cast<int>(p_.size());
        p_.emplace_back(mid.x() - 40.0 * s, mid.y() - 20.0 * s);
        p_.emplace_back(mid.x() + 40.0 * s, mid.y() - 20.0 * s);
        p_.emplace_back(mid.x(), mid.y() + 40.0 * s);
        tris_.push_back(Tri{{n_input_, n_input_ + 1, n_input_ + 2}});
    }

    void insert_all()
    {
        // Snake order over strips keeps consecutive points close, so the walk
        // from the previous triangle stays short.
        std::vector<int> order(n_input_);
        std::iota(order.begin(), order.end(), 0);
        Vec2 lo = p_[0], hi = p_[0];
        for (int i = 0; i < n_input_; ++i) {
            lo = lo.cwiseMin(p_[i]);
            hi = hi.cwiseMax(p_[i]);
        }
        const int strips = std::max(1, static_cast<int>(std::sqrt(n_input_ / 2.0)));
        const double h = std::max(hi.y() - lo.y(), 1e-300) / strips;
        auto strip = [&](int i) { return std::min(strips - 1, static_cast<int>((p_[i].y() - lo.y()) / h)); };
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const int sa = strip(a), sb = strip(b);
            if (sa != sb) return sa < sb;
            return (sa % 2 == 0) ? p_[a].x() < p_[b].x() : p_[a].x() > p_[b].x();
        });
        for (int i : order) insert(i);
    }

    void insert_segment(int a, int b)
    {
        while (a != b) a = insert_segment_part(a, b);
    }

    CdtResult extract() const
    {
        // Flood fill by nesting depth, starting from triangles on a super vertex.
        const int nt = static_cast<int>(tris_.size());
        std::vector<int> depth(nt, -1);
        std::vector<int> frontier;
        for (int t = 0; t < nt; ++t) {
            for (int v : tris_[t].v) {
                if (v >= n_input_) {
                    frontier.push_back(t);
                    break;
                }
            }
        }
        for (int d = 0; !frontier.empty(); ++d) {
            std::vector<int> later;
            std::vector<int> stack = frontier;
            while (!stack.empty()) {
                const int t = stack.back();
                stack.pop_back();
                if (depth[t] >= 0) continue;
                depth[t] = d;
                for (int k = 0; k < 3; ++k) {
                    const int u = tris_[t].n[k];
                    if (u < 0 || depth[u] >= 0) continue;
                    (tris_[t].c[k] ? later : stack).push_back(u);
                }
            }
            frontier = std::move(later);
        }

        CdtResult out;
        for (int t = 0; t < nt; ++t) {
            const auto& v = tris_[t].v;
            if (v[0] >= n_input_ || v[1] >= n_input_ || v[2] >= n_input_) continue;
            out.triangles.push_back({v[0], v[1], v[2]});
            out.depth.push_back(depth[t]);
        }
        return out;
    }

private:
    std::vector<Vec2> p_;
    std::vector<Tri> tris_;
    int n_input_ = 0;
    int last_ = 0;

    int orient(int a, int b, int c) const { return orient_sign(p_[a], p_[b], p_[c]); }

    int local_index(int t, int v) const
    {
        for (int k = 0; k < 3; ++k)
            if (tris_[t].v[k] == v) return k;
        return -1;
    }

    int edge_towards(int t, int u) const
    {
        for (int k = 0; k < 3; ++k)
            if (tris_[t].n[k] == u) return k;
        return -1;
    }

    void replace_neighbor(int t, int old_nb, int new_nb)
    {
        if (t < 0) return;
        const int k = edge_towards(t, old_nb);
        if (k >= 0) tris_[t].n[k] = new_nb;
    }

    // Returns (triangle, edge index or -1 when strictly inside).
    std::pair<int, int> locate(int q)
    {
        int t = last_;
        int offset = 0;
        for (std::size_t steps = 0;; ++steps) {
            if (steps > 4 * tris_.size() + 16) throw GeometryError("point location did not terminate");
            const auto& tri = tris_[t];
            int moved = -1;
            int zero_edge = -1, zeros = 0;
            for (int j = 0; j < 3; ++j) {
                const int k = (j + offset) % 3;
                const int s = orient(tri.v[next(k)], tri.v[prev(k)], q);
                if (s < 0) {
                    moved = tri.n[k];
                    break;
                }
                if (s == 0) {
                    ++zeros;
                    zero_edge = k;
                }
            }
            offset = (offset + 1) % 3;
            if (moved >= 0) {
                t = moved;
                continue;
            }
            if (zeros >= 2) throw GeometryError("duplicate point " + std::to_string(q));
            return {t, zeros == 1 ? zero_edge : -1};
        }
    }

    void insert(int q)
    {
        const auto [t, edge] = locate(q);
        std::vector<std::pair<int, int>> todo; // (triangle, index of q)
        if (edge < 0) {
            const Tri old = tris_[t];
            const auto [a, b, c] = old.v;
            const int na = old.n[0], nb = old.n[1], nc = old.n[2];
            const int t1 = static_cast<int>(tris_.size());
            const int t2 = t1 + 1;
            tris_[t] = Tri{{a, b, q}, {t1, t2, nc}};
            tris_.push_back(Tri{{b, c, q}, {t2, t, na}});
            tris_.push_back(Tri{{c, a, q}, {t, t1, nb}});
            replace_neighbor(na, t, t1);
            replace_neighbor(nb, t, t2);
            todo = {{t, 2}, {t1, 2}, {t2, 2}};
        } else {
            // q lies on the edge opposite v[edge].
            Tri old = tris_[t];
            const int a = old.v[edge], b = old.v[next(edge)], c = old.v[prev(edge)];
            const int t_nb = old.n[next(edge)], t_nc = old.n[prev(edge)];
            const int u = old.n[edge];
            const int ku = edge_towards(u, t);
            const Tri uo = tris_[u];
            const int d = uo.v[ku];
            // u is (d, c, b) in counter-clockwise order.
            const int u_nc = uo.n[next(ku)]; // opposite c: edge (b, d)
            const int u_nb = uo.n[prev(ku)]; // opposite b: edge (d, c)
            const int t1 = static_cast<int>(tris_.size());
            const int u1 = t1 + 1;
            tris_[t] = Tri{{a, b, q}, {u1, t1, t_nc}};
            tris_.push_back(Tri{{a, q, c}, {u, t_nb, t}});
            tris_[u] = Tri{{d, c, q}, {t1, u1, u_nb}};
            tris_.push_back(Tri{{d, q, b}, {t, u_nc, u}});
            replace_neighbor(t_nb, t, t1);
            replace_neighbor(u_nc, u, u1);
            todo = {{t, 2}, {t1, 1}, {u, 2}, {u1, 1}};
        }
        last_ = t;
        for (const auto& [tri, k] : todo) legalize(tri, k);
    }

    // Restores the Delaunay property across the edge opposite v[k] of t,
    // where v[k] is the vertex just inserted.
    void legalize(int t, int k)
    {
        std::vector<std::pair<int, int>> stack{{t, k}};
        while (!stack.empty()) {
            auto [s, j] = stack.back();
            stack.pop_back();
            const int u = tris_[s].n[j];
            if (u < 0 || tris_[s].c[j]) continue;
            const int ku = edge_towards(u, s);
            const int d = tris_[u].v[ku];
            const auto& v = tris_[s].v;
            if (incircle_sign(p_[v[0]], p_[v[1]], p_[v[2]], p_[d]) <= 0) continue;
            flip(s, j);
            // After the flip, s = (q, x, d) and u = (q, d, y) with q at index 0.
            stack.emplace_back(s, 0);
            stack.emplace_back(u, 0);
        }
    }

    // Flips the edge opposite v[k] of t. Afterwards t = (v[k], x, d) and
    // the neighbour is (v[k], d, y), both with v[k] at index 0.
    void flip(int t, int k)
    {
        const Tri to = tris_[t];
        const int u = to.n[k];
        const int ku = edge_towards(u, t);
        const Tri uo = tris_[u];
        const int p = to.v[k], x = to.v[next(k)], y = to.v[prev(k)];
        const int d = uo.v[ku];
        const int t_nx = to.n[next(k)], t_ny = to.n[prev(k)];
        const bool t_cx = to.c[next(k)], t_cy = to.c[prev(k)];
        // u is (d, y, x): opposite y is edge (x, d), opposite x is edge (d, y).
        const int u_ny = uo.n[next(ku)], u_nx = uo.n[prev(ku)];
        const bool u_cy = uo.c[next(ku)], u_cx = uo.c[prev(ku)];
        tris_[t] = Tri{{p, x, d}, {u_ny, u, t_ny}, {u_cy, false, t_cy}};
        tris_[u] = Tri{{p, d, y}, {u_nx, t_nx, t}, {u_cx, t_cx, false}};
        replace_neighbor(u_ny, u, t);
        replace_neighbor(t_nx, t, u);
    }

    void mark_constrained(int t, int k)
    {
        tris_[t].c[k] = true;
        const int u = tris_[t].n[k];
        if (u >= 0) tris_[u].c[edge_towards(u, t)] = true;
    }

    // Inserts the part of segment (a, b) up to the first input vertex on it and
    // returns that vertex.
    int insert_segment_part(int a, int b)
    {
        const Vec2 dir = p_[b] - p_[a];
        int start = -1, right = -1, left = -1;
        for (int t = 0; t < static_cast<int>(tris_.size()) && start < 0; ++t) {
            const int ka = local_index(t, a);
            if (ka < 0) continue;
            const int pv = tris_[t].v[next(ka)], qv = tris_[t].v[prev(ka)];
            const int o1 = orient(a, pv, b), o2 = orient(a, qv, b);
            if (o1 == 0 && (p_[pv] - p_[a]).dot(dir) > 0) {
                mark_constrained(t, prev(ka));
                return pv;
            }
            if (o2 == 0 && (p_[qv] - p_[a]).dot(dir) > 0) {
                mark_constrained(t, next(ka));
                return qv;
            }
            if (o1 > 0 && o2 < 0) {
                start = t;
                right = pv;
                left = qv;
            }
        }
        if (start < 0) throw GeometryError("segment endpoint is not in the triangulation");

        std::vector<int> cavity{start};
        std::vector<int> left_chain{left}, right_chain{right};
        int t = start;
        int end = -1;
        for (;;) {
            const int k = local_index(t, opposite_of(t, left, right));
            if (tris_[t].c[k]) throw GeometryError("constraint segments intersect");
            const int u = tris_[t].n[k];
            const int w = tris_[u].v[edge_towards(u, t)];
            cavity.push_back(u);
            t = u;
            if (w == b) {
                end = b;
                break;
            }
            const int o = orient(a, b, w);
            if (o == 0) {
                end = w;
                break;
            }
            if (o > 0) {
                left_chain.push_back(w);
                left = w;
            } else {
                right_chain.push_back(w);
                right = w;
            }
        }
        retriangulate(cavity, a, end, left_chain, right_chain);
        return end;
    }

    // Vertex of t that is neither l nor r.
    int opposite_of(int t, int l, int r) const
    {
        for (int v : tris_[t].v)
            if (v != l && v != r) return v;
        return -1;
    }

    void triangulate_pseudo_polygon(int u, int v, std::span<const int> chain, std::vector<std::array<int, 3>>& out)
    {
        if (chain.empty()) return;
        std::size_t best = 0;
        for (std::size_t i = 1; i < chain.size(); ++i)
            if (incircle_sign(p_[u], p_[v], p_[chain[best]], p_[chain[i]]) > 0) best = i;
        const int c = chain[best];
        out.push_back({u, v, c});
        triangulate_pseudo_polygon(u, c, chain.subspan(0, best), out);
        triangulate_pseudo_polygon(c, v, chain.subspan(best + 1), out);
    }

    void retriangulate(const std::vector<int>& cavity, int a, int b, const std::vector<int>& left,
                       std::vector<int> right)
    {
        struct Outer {
            int tri;
            bool constrained;
        };
        std::map<std::pair<int, int>, Outer> boundary;
        std::vector<char> in_cavity(tris_.size(), 0);
        for (int t : cavity) in_cavity[t] = 1;
        for (int t : cavity) {
            for (int k = 0; k < 3; ++k) {
                const int u = tris_[t].n[k];
                if (u >= 0 && in_cavity[u]) continue;
                boundary[{tris_[t].v[next(k)], tris_[t].v[prev(k)]}] = Outer{u, tris_[t].c[k]};
            }
        }

        std::vector<std::array<int, 3>> fresh;
        triangulate_pseudo_polygon(a, b, left, fresh);
        std::reverse(right.begin(), right.end());
        triangulate_pseudo_polygon(b, a, right, fresh);
        if (fresh.size() != cavity.size()) throw GeometryError("constraint cavity retriangulation failed");

        std::map<std::pair<int, int>, std::pair<int, int>> inner; // directed edge -> (triangle, edge)
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            const int t = cavity[i];
            tris_[t] = Tri{fresh[i]};
            for (int k = 0; k < 3; ++k) {
                const int x = fresh[i][next(k)], y = fresh[i][prev(k)];
                if (auto it = boundary.find({x, y}); it != boundary.end()) {
                    const int o = it->second.tri;
                    tris_[t].n[k] = o;
                    tris_[t].c[k] = it->second.constrained;
                    if (o >= 0) {
                        for (int j = 0; j < 3; ++j) {
                            const auto& ov = tris_[o].v;
                            if (ov[next(j)] == y && ov[prev(j)] == x) tris_[o].n[j] = t;
                        }
                    }
                } else if (auto jt = inner.find({y, x}); jt != inner.end()) {
                    const auto [s, j] = jt->second;
                    tris_[t].n[k] = s;
                    tris_[s].n[j] = t;
                    const bool is_segment = (x == a && y == b) || (x == b && y == a);
                    tris_[t].c[k] = is_segment;
                    tris_[s].c[j] = is_segment;
                } else {
                    inner[{x, y}] = {t, k};
                }
            }
        }
        last_ = cavity.front();
    }
};

} // namespace

CdtResult constrained_delaunay(const std::vector<Vec2>& points, const std::vector<std::array<int, 2>>& segments)
{
    const int n = static_cast<int>(points.size());
    if (n < 3) throw GeometryError("triangulation needs at least 3 points");
    for (const auto& q : points)
        if (!q.allFinite()) throw GeometryError("non-finite point in triangulation input");
    bool collinear = true;
    for (int i = 2; i < n && collinear; ++i)
        if (orient_sign(points[0], points[1], points[i]) != 0) collinear = false;
    if (collinear) throw GeometryError("all triangulation points are collinear");

    Triangulation tri(points);
    tri.insert_all();
    for (const auto& [a, b] : segments) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw GeometryError("segment index out of range");
        if (a == b) throw GeometryError("degenerate segment");
        tri.insert_segment(a, b);
    }
    return tri.extract();
}

std::vector<Face> triangles_at_depth(const CdtResult& r, int depth)
{
    std::vector<Face> out;
    for (std::size_t i = 0; i < r.triangles.size(); ++i)
        if (r.depth[i] == depth) out.push_back(r.triangles[i]);
    return out;
}

} // namespace deq
