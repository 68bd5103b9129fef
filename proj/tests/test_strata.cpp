#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <vector>

#include "hwbt/strata.hpp"

using namespace hwbt;

namespace {

Rat rat(long long n, long long d) { return Rat(Int(n), Int(d)); }

NPgon gon(int c, int d, std::vector<Rat> s) { return NPgon(c, d, std::move(s)); }

// Breakpoints of every enumerated polygon must be lattice points: wherever the
// slope changes, the accumulated height is an integer.
bool lattice_breakpoints(const NPgon& g) {
    Rat h(0);
    for (size_t i = 0; i < g.slopes.size(); ++i) {
        h = h + g.slopes[i];
        bool change = i + 1 < g.slopes.size() && g.slopes[i] != g.slopes[i + 1];
        if (change && !h.is_integer()) return false;
    }
    return h == Rat(g.d);
}

}  // namespace

TEST_CASE("polygon type validates its invariants") {
    NPgon ss = gon(2, 2, {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)});
    CHECK(ss.len() == 4);
    CHECK(ss.height(0) == Rat(0));
    CHECK(ss.height(3) == rat(3, 2));
    CHECK(ss.heights() == std::vector<Rat>{Rat(0), rat(1, 2), Rat(1), rat(3, 2), Rat(2)});

    CHECK_THROWS_AS(gon(0, 0, {}), input_error);                              // c+d >= 1
    CHECK_THROWS_AS(gon(1, 1, {rat(1, 2)}), input_error);                     // wrong count
    CHECK_THROWS_AS(gon(1, 1, {rat(1, 2), rat(3, 2)}), input_error);          // slope > 1
    CHECK_THROWS_AS(gon(1, 1, {rat(-1, 2), rat(3, 2)}), input_error);         // slope < 0
    CHECK_THROWS_AS(gon(1, 1, {rat(2, 3), rat(1, 3)}), input_error);          // decreasing
    CHECK_THROWS_AS(gon(1, 1, {rat(1, 3), rat(1, 3)}), input_error);          // sum != d
    CHECK_THROWS_AS(gon(-1, 2, {rat(1, 2)}), input_error);                    // negative c

    // Fractional interior vertices are allowed by the type itself; only the
    // enumerator restricts to lattice breakpoints.
    NPgon frac = gon(1, 1, {rat(1, 4), rat(3, 4)});
    CHECK(frac.height(1) == rat(1, 4));
    CHECK_FALSE(lattice_breakpoints(frac));
}

TEST_CASE("enumeration of small shapes, strict and closed slopes") {
    auto e11s = enumerate_np(1, 1, true);
    REQUIRE(e11s.size() == 1);
    CHECK(e11s[0] == gon(1, 1, {rat(1, 2), rat(1, 2)}));

    auto e11c = enumerate_np(1, 1, false);
    REQUIRE(e11c.size() == 2);
    CHECK(e11c[0] == gon(1, 1, {Rat(0), Rat(1)}));
    CHECK(e11c[1] == gon(1, 1, {rat(1, 2), rat(1, 2)}));

    auto e21s = enumerate_np(2, 1, true);
    REQUIRE(e21s.size() == 1);
    CHECK(e21s[0] == gon(2, 1, {rat(1, 3), rat(1, 3), rat(1, 3)}));

    auto e21c = enumerate_np(2, 1, false);
    REQUIRE(e21c.size() == 3);
    CHECK(e21c[0] == gon(2, 1, {Rat(0), Rat(0), Rat(1)}));
    CHECK(e21c[1] == gon(2, 1, {Rat(0), rat(1, 2), rat(1, 2)}));
    CHECK(e21c[2] == gon(2, 1, {rat(1, 3), rat(1, 3), rat(1, 3)}));

    // height 4, dimension 2: the five classical polygons
    auto e22c = enumerate_np(2, 2, false);
    REQUIRE(e22c.size() == 5);
    CHECK(e22c[0] == gon(2, 2, {Rat(0), Rat(0), Rat(1), Rat(1)}));
    CHECK(e22c[1] == gon(2, 2, {Rat(0), rat(1, 2), rat(1, 2), Rat(1)}));
    CHECK(e22c[2] == gon(2, 2, {Rat(0), rat(2, 3), rat(2, 3), rat(2, 3)}));
    CHECK(e22c[3] == gon(2, 2, {rat(1, 3), rat(1, 3), rat(1, 3), Rat(1)}));
    CHECK(e22c[4] == gon(2, 2, {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}));

    auto e22s = enumerate_np(2, 2, true);
    REQUIRE(e22s.size() == 1);  // only the supersingular line survives (0,1) strictly
    CHECK(e22s[0] == gon(2, 2, {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}));

    // etale-only and multiplicative-only edge shapes
    CHECK(enumerate_np(1, 0, false).size() == 1);
    CHECK(enumerate_np(1, 0, true).empty());   // slope 0 excluded
    CHECK(enumerate_np(0, 1, false).size() == 1);
    CHECK(enumerate_np(0, 1, true).empty());   // slope 1 excluded

    CHECK_THROWS_AS(enumerate_np(0, 0, false), input_error);
    CHECK_THROWS_AS(enumerate_np(-1, 2, false), input_error);
}

TEST_CASE("enumeration output is canonical and lattice-broken") {
    for (int c = 0; c <= 4; ++c) {
        for (int d = 0; c + d >= 1 && d <= 4 - c + 2; ++d) {
            if (c + d < 1 || c + d > 6) continue;
            for (bool open : {false, true}) {
                auto all = enumerate_np(c, d, open);
                for (size_t i = 0; i < all.size(); ++i) {
                    CHECK(lattice_breakpoints(all[i]));
                    if (i > 0) CHECK(all[i - 1].slopes < all[i].slopes);
                    for (const Rat& s : all[i].slopes) {
                        if (open) {
                            CHECK(Rat(0) < s);
                            CHECK(s < Rat(1));
                        }
                    }
                }
            }
        }
    }
    // closed (c,1) has exactly c+1 polygons: one vertex choice per etale run
    for (int c = 0; c <= 4; ++c)
        CHECK(enumerate_np(c, 1, false).size() == static_cast<size_t>(c) + 1);
}

TEST_CASE("pointwise order on polygons of one shape") {
    NPgon ss = gon(2, 2, {rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)});
    NPgon sp = gon(2, 2, {rat(1, 3), rat(1, 3), rat(1, 3), Rat(1)});
    CHECK(np_leq(ss, sp));        // 1/2,1,3/2 lie above 1/3,2/3,1
    CHECK_FALSE(np_leq(sp, ss));
    CHECK(np_leq(ss, ss));
    CHECK(np_leq(sp, sp));

    NPgon other = gon(1, 1, {rat(1, 2), rat(1, 2)});
    CHECK_THROWS_AS(np_leq(ss, other), input_error);
}

TEST_CASE("lattice point counts under the polygon") {
    DiamondSet d22 = diamond_dim(special_beta(2, 2));
    CHECK(d22.dim == 2);
    CHECK(d22.points == std::vector<std::pair<int, int>>{{2, 1}, {3, 1}});

    DiamondSet d23 = diamond_dim(special_beta(2, 3));
    CHECK(d23.dim == 4);
    CHECK(d23.points == std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}, {4, 2}});

    CHECK(diamond_dim(gon(1, 1, {rat(1, 2), rat(1, 2)})).dim == 0);

    // ordinary polygon attains the cd ceiling
    for (int c = 1; c <= 4; ++c) {
        for (int d = 1; d <= 4; ++d) {
            std::vector<Rat> s(static_cast<size_t>(c), Rat(0));
            s.insert(s.end(), static_cast<size_t>(d), Rat(1));
            CHECK(diamond_dim(gon(c, d, std::move(s))).dim ==
                  static_cast<long long>(c) * d);
        }
    }
}

TEST_CASE("distinguished polygon of dimension c(d-1)") {
    NPgon b12 = special_beta(1, 2);
    CHECK(b12 == gon(1, 2, {rat(1, 2), rat(1, 2), Rat(1)}));
    DiamondSet d12 = diamond_dim(b12);
    CHECK(d12.dim == 1);
    CHECK(d12.points == std::vector<std::pair<int, int>>{{2, 1}});

    CHECK(special_beta(2, 2) ==
          gon(2, 2, {rat(1, 3), rat(1, 3), rat(1, 3), Rat(1)}));
    CHECK(diamond_dim(special_beta(3, 2)).dim == 3);

    for (int c = 1; c <= 5; ++c)
        for (int d = 2; d <= 5; ++d)
            CHECK(diamond_dim(special_beta(c, d)).dim ==
                  static_cast<long long>(c) * (d - 1));

    CHECK_THROWS_AS(special_beta(0, 2), input_error);
    CHECK_THROWS_AS(special_beta(2, 1), input_error);
}

TEST_CASE("order axioms and dimension monotonicity, exhaustive small shapes") {
    for (int c = 0; c <= 5; ++c) {
        for (int d = 0; d <= 5; ++d) {
            if (c + d < 1 || c + d > 5) continue;
            auto all = enumerate_np(c, d, false);
            std::vector<long long> dim;
            for (const NPgon& g : all) dim.push_back(diamond_dim(g).dim);

            for (size_t i = 0; i < all.size(); ++i) {
                CHECK(np_leq(all[i], all[i]));  // reflexive
                CHECK(dim[i] <= static_cast<long long>(c) * d);
                for (size_t j = 0; j < all.size(); ++j) {
                    bool ij = np_leq(all[i], all[j]);
                    if (ij && np_leq(all[j], all[i])) CHECK(all[i] == all[j]);  // antisymmetric
                    if (ij) CHECK(dim[i] <= dim[j]);  // dimension is monotone
                    for (size_t k = 0; ij && k < all.size(); ++k)
                        if (np_leq(all[j], all[k])) CHECK(np_leq(all[i], all[k]));  // transitive
                }
            }

            // strictly fractional slopes never reach the cd ceiling
            auto strict = enumerate_np(c, d, true);
            for (const NPgon& g : strict)
                CHECK(diamond_dim(g).dim < static_cast<long long>(c) * d);
        }
    }
}
