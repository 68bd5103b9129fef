#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hwbt/errors.hpp"
#include "hwbt/rational.hpp"

// Stratification combinatorics for convex slope polygons from (0,0) to
// (c+d, d): enumeration with lattice breakpoints, the pointwise lies-above
// partial order, lattice-point dimension counts, and the distinguished
// near-ordinary polygon of dimension c(d-1).

namespace hwbt {

struct NPgon {
    int c = 0, d = 0;
    std::vector<Rat> slopes;  // nondecreasing, in [0,1], c+d entries, sum d

    NPgon(int c_, int d_, std::vector<Rat> s)
        : c(c_), d(d_), slopes(std::move(s)) {
        if (c < 0 || d < 0 || c + d < 1) throw input_error("NPgon: need c,d >= 0 and c+d >= 1");
        if (static_cast<int>(slopes.size()) != c + d)
            throw input_error("NPgon: need exactly c+d slopes");
        Rat sum(0);
        for (size_t i = 0; i < slopes.size(); ++i) {
            const Rat& x = slopes[i];
            if (x < Rat(0) || Rat(1) < x) throw input_error("NPgon: slope outside [0,1]");
            if (i > 0 && x < slopes[i - 1]) throw input_error("NPgon: slopes must be nondecreasing");
            sum = sum + x;
        }
        if (sum != Rat(d)) throw input_error("NPgon: slopes must sum to d");
    }

    int len() const { return c + d; }

    // Height after x unit steps, 0 <= x <= c+d.
    Rat height(int x) const {
        Rat h(0);
        for (int i = 0; i < x; ++i) h = h + slopes[static_cast<size_t>(i)];
        return h;
    }

    std::vector<Rat> heights() const {
        std::vector<Rat> h{Rat(0)};
        for (const Rat& s : slopes) h.push_back(h.back() + s);
        return h;
    }

    bool operator==(const NPgon& o) const {
        return c == o.c && d == o.d && slopes == o.slopes;
    }
    bool operator!=(const NPgon& o) const { return !(*this == o); }
};

// a lies weakly above b at every integer x.  Both are linear on each unit
// interval, so integer-point comparison decides the whole path.
inline bool np_leq(const NPgon& a, const NPgon& b) {
    if (a.c != b.c || a.d != b.d) throw input_error("np_leq: shape mismatch");
    Rat ha(0), hb(0);
    for (int x = 0; x < a.len(); ++x) {
        ha = ha + a.slopes[static_cast<size_t>(x)];
        hb = hb + b.slopes[static_cast<size_t>(x)];
        if (ha < hb) return false;
    }
    return true;
}

struct DiamondSet {
    std::vector<std::pair<int, int>> points;  // (x, y), x ascending then y
    long long dim = 0;
};

// Lattice points with 0 <= y < d, y < x < c+d, lying on or above the polygon.
inline DiamondSet diamond_dim(const NPgon& b) {
    DiamondSet D;
    std::vector<Rat> h = b.heights();
    for (int x = 1; x < b.len(); ++x)
        for (int y = 0; y < b.d && y < x; ++y)
            if (!(Rat(y) < h[static_cast<size_t>(x)])) D.points.push_back({x, y});
    std::sort(D.points.begin(), D.points.end());
    D.dim = static_cast<long long>(D.points.size());
    return D;
}

// All convex slope sequences with lattice breakpoints from (0,0) to (c+d,d),
// slopes in (0,1) when open_slopes, else [0,1]; lexicographic slope order.
inline std::vector<NPgon> enumerate_np(int c, int d, bool open_slopes = false) {
    if (c < 0 || d < 0 || c + d < 1) throw input_error("enumerate_np: need c,d >= 0 and c+d >= 1");
    int L = c + d;
    std::vector<NPgon> out;
    std::vector<Rat> acc;
    auto rec = [&](auto&& self, int x, int y, const Rat& last, bool has_last) -> void {
        if (x == L) {
            if (y == d) out.push_back(NPgon(c, d, acc));
            return;
        }
        for (int nx = x + 1; nx <= L; ++nx) {
            for (int ny = y; ny <= d; ++ny) {
                Rat s(Int(ny - y), Int(nx - x));
                if (s < Rat(0) || Rat(1) < s) continue;
                if (open_slopes && (s == Rat(0) || s == Rat(1))) continue;
                if (has_last && !(last < s)) continue;  // vertices carry distinct slopes
                for (int i = 0; i < nx - x; ++i) acc.push_back(s);
                self(self, nx, ny, s, true);
                for (int i = 0; i < nx - x; ++i) acc.pop_back();
            }
        }
    };
    rec(rec, 0, 0, Rat(0), false);
    std::sort(out.begin(), out.end(),
              [](const NPgon& a, const NPgon& b) { return a.slopes < b.slopes; });
    return out;
}

// The polygon with c+1 slopes 1/(c+1) followed by d-1 slopes 1; its lattice
// dimension count is c(d-1), asserted on construction.
inline NPgon special_beta(int c, int d) {
    if (c < 1) throw input_error("special_beta: need c >= 1");
    if (d < 2) throw input_error("special_beta: need d >= 2");
    std::vector<Rat> s(static_cast<size_t>(c) + 1, Rat(1) / Rat(c + 1));
    s.insert(s.end(), static_cast<size_t>(d) - 1, Rat(1));
    NPgon B(c, d, std::move(s));
    if (diamond_dim(B).dim != static_cast<long long>(c) * (d - 1))
        throw std::logic_error("special_beta: dimension identity failed");
    return B;
}

}  // namespace hwbt
