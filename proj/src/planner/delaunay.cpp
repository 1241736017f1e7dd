#include "fsdstack/planner/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace fsd {

namespace {

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Positive when d lies strictly inside the circumcircle of CCW triangle abc.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
           ad * (bdx * cdy - bdy * cdx);
}

struct Tri {
    int a, b, c;
    bool alive = true;
};

}  // namespace

std::vector<TriangleIndices> delaunay_triangles(const std::vector<Vec2>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw std::invalid_argument("delaunay: need >= 3 points");

    bool collinear = true;
    for (int i = 2; i < n && collinear; ++i) {
        if (std::abs(orient2d(points[0], points[1], points[i])) > 1e-12) collinear = false;
    }
    if (collinear) throw std::invalid_argument("delaunay: all points collinear");

    // Super-triangle comfortably containing the input.
    Vec2 lo = points[0], hi = points[0];
    for (const Vec2& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec2 center = 0.5 * (lo + hi);
    const double span = std::max((hi - lo).maxCoeff(), 1.0) * 64.0;
    std::vector<Vec2> pts = points;
    const int s0 = n, s1 = n + 1, s2 = n + 2;
    pts.emplace_back(center.x() - span, center.y() - span * 0.5);
    pts.emplace_back(center.x() + span, center.y() - span * 0.5);
    pts.emplace_back(center.x(), center.y() + span);

    std::vector<Tri> tris;
    tris.push_back({s0, s1, s2});

    auto make_ccw = [&](Tri& t) {
        if (orient2d(pts[t.a], pts[t.b], pts[t.c]) < 0.0) std::swap(t.b, t.c);
    };
    make_ccw(tris[0]);

    for (int p = 0; p < n; ++p) {
        // Collect triangles whose circumcircle contains the point.
        std::map<std::pair<int, int>, int> edge_count;
        std::vector<int> bad;
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            if (!tris[t].alive) continue;
            if (incircle(pts[tris[t].a], pts[tris[t].b], pts[tris[t].c], pts[p]) > 0.0) {
                bad.push_back(t);
            }
        }
        auto add_edge = [&](int u, int v) {
            const auto key = std::minmax(u, v);
            edge_count[{key.first, key.second}]++;
        };
        for (int t : bad) {
            add_edge(tris[t].a, tris[t].b);
            add_edge(tris[t].b, tris[t].c);
            add_edge(tris[t].c, tris[t].a);
            tris[t].alive = false;
        }
        // Boundary edges of the cavity appear exactly once.
        for (const auto& [edge, count] : edge_count) {
            if (count != 1) continue;
            Tri t{edge.first, edge.second, p};
            if (std::abs(orient2d(pts[t.a], pts[t.b], pts[t.c])) < 1e-14) continue;
            make_ccw(t);
            tris.push_back(t);
        }
    }

    std::vector<TriangleIndices> out;
    for (const Tri& t : tris) {
        if (!t.alive) continue;
        if (t.a >= n || t.b >= n || t.c >= n) continue;  // touches the super-triangle
        out.push_back({t.a, t.b, t.c});
    }
    if (out.empty()) throw std::invalid_argument("delaunay: degenerate input");
    return out;
}

std::vector<Midpoint> triangulate(const std::vector<Cone>& cones) {
    if (cones.size() < 3) throw std::invalid_argument("triangulate: need >= 3 cones");
    std::vector<Vec2> pts;
    pts.reserve(cones.size());
    for (const Cone& c : cones) pts.push_back(c.position);

    const auto tris = delaunay_triangles(pts);

    std::map<std::pair<int, int>, bool> seen;
    std::vector<Midpoint> out;
    for (const TriangleIndices& t : tris) {
        const int idx[3] = {t[0], t[1], t[2]};
        for (int e = 0; e < 3; ++e) {
            const auto key = std::minmax(idx[e], idx[(e + 1) % 3]);
            if (seen[{key.first, key.second}]) continue;
            seen[{key.first, key.second}] = true;
            Midpoint m;
            m.left_cone = cones[key.first];
            m.right_cone = cones[key.second];
            m.position = 0.5 * (m.left_cone.position + m.right_cone.position);
            m.edge_length = (m.left_cone.position - m.right_cone.position).norm();
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace fsd
