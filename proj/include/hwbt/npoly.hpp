#pragma once

// Lower Newton polygons over exact rationals.  Convention: a polynomial
// sum c_i X^i contributes points (i, v(c_i)); a hull edge of slope s carries
// (horizontal length) roots of valuation -s.  No floating point anywhere.

#include <algorithm>
#include <map>
#include <vector>

#include "hwbt/errors.hpp"
#include "hwbt/rational.hpp"
#include "hwbt/series.hpp"

namespace hwbt {

struct NPPoint {
    long long x = 0;
    Rat y;
};

struct NPSlope {
    Rat slope;
    long long length = 0;  // horizontal extent
};

struct NewtonPolygon {
    std::vector<NPPoint> vertices;  // hull vertices, x increasing
    std::vector<NPSlope> slopes;    // edges, slope increasing

    // Height of the polygon above x, linear between vertices.  Only valid
    // for x within [first.x, last.x].
    Rat height(const Rat& x) const {
        if (vertices.empty()) throw input_error("NewtonPolygon: empty");
        if (x < Rat(vertices.front().x) || x > Rat(vertices.back().x))
            throw input_error("NewtonPolygon: x outside span");
        for (size_t i = 0; i + 1 < vertices.size(); ++i) {
            Rat x0(vertices[i].x), x1(vertices[i + 1].x);
            if (x <= x1) {
                Rat tfrac = (x - x0) / (x1 - x0);
                return vertices[i].y + tfrac * (vertices[i + 1].y - vertices[i].y);
            }
        }
        return vertices.back().y;
    }
};

// Lower convex hull of a finite point set (duplicates on x keep the lowest).
inline NewtonPolygon np_hull(std::vector<NPPoint> pts) {
    if (pts.empty()) throw input_error("np_hull: no points");
    std::map<long long, Rat> best;
    for (const auto& p : pts) {
        auto it = best.find(p.x);
        if (it == best.end() || p.y < it->second) best[p.x] = p.y;
    }
    std::vector<NPPoint> sorted;
    for (const auto& [x, y] : best) sorted.push_back({x, y});
    std::vector<NPPoint> hull;
    for (const auto& p : sorted) {
        while (hull.size() >= 2) {
            const NPPoint &a = hull[hull.size() - 2], &b = hull.back();
            // pop b unless it turns strictly left of the segment a->p
            Rat cross = (Rat(b.x) - Rat(a.x)) * (p.y - a.y) - (Rat(p.x) - Rat(a.x)) * (b.y - a.y);
            if (cross.sign() > 0) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }
    NewtonPolygon np;
    np.vertices = std::move(hull);
    for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
        const auto &a = np.vertices[i], &b = np.vertices[i + 1];
        np.slopes.push_back({(b.y - a.y) / (Rat(b.x) - Rat(a.x)), b.x - a.x});
    }
    return np;
}

struct RootValuations {
    long long zero_roots = 0;                  // multiplicity of the root X = 0
    std::vector<std::pair<Rat, long long>> vals;  // (valuation, multiplicity), valuation decreasing
    NewtonPolygon np;
};

// Root valuation multiset of a polynomial with series coefficients.  Sound
// under partial knowledge: a coefficient known only as zero-to-precision is
// accepted only when its lower-bound point provably cannot cut the hull.
inline RootValuations np_root_valuations(const SeriesPoly& f) {
    if (f.empty()) throw input_error("np_root_valuations: empty polynomial");
    int deg = static_cast<int>(f.size()) - 1;
    while (deg >= 0 && f[static_cast<size_t>(deg)].is_exact_zero()) --deg;
    if (deg < 0) throw input_error("np_root_valuations: zero polynomial");
    if (f[static_cast<size_t>(deg)].is_zero_to_prec())
        throw precision_error("np_root_valuations: leading coefficient valuation unknown");

    RootValuations out;
    int ord0 = 0;
    while (ord0 < deg && !f[static_cast<size_t>(ord0)].is_nonzero()) {
        if (f[static_cast<size_t>(ord0)].is_zero_to_prec())
            throw precision_error("np_root_valuations: trailing coefficient only zero to precision");
        ++ord0;
    }
    out.zero_roots = ord0;

    std::vector<NPPoint> pts;
    std::vector<NPPoint> uncertain;  // lower bounds from zero-to-precision coefficients
    for (int i = ord0; i <= deg; ++i) {
        const LSeries& c = f[static_cast<size_t>(i)];
        if (c.is_exact_zero()) continue;
        Rat e(static_cast<long long>(c.ctx().e));
        if (c.is_nonzero()) pts.push_back({i, Rat(c.ord()) / e});
        else uncertain.push_back({i, Rat(c.known_end()) / e});
    }
    out.np = np_hull(pts);
    for (const auto& u : uncertain) {
        if (u.x < out.np.vertices.front().x || u.x > out.np.vertices.back().x) continue;
        if (u.y < out.np.height(Rat(u.x)))
            throw precision_error("np_root_valuations: zero-to-precision coefficient could cut the hull");
    }
    for (const auto& s : out.np.slopes) out.vals.push_back({-s.slope, s.length});
    return out;
}

}  // namespace hwbt
