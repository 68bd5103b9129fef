#pragma once

// Descriptors for Barsotti-Tate groups via their Hasse-Witt data: a codim x
// codim Frobenius-semilinear matrix plus the dimension.  Covers elementary
// (single-slope) groups, universal HW-cyclic deformations, specialization,
// fiberwise height splittings, the Hasse invariant, and versality of a
// deformation through the linear parts of its companion entries.

#include <numeric>
#include <utility>
#include <vector>

#include "hwbt/errors.hpp"
#include "hwbt/ff.hpp"
#include "hwbt/mpoly.hpp"
#include "hwbt/semilinear.hpp"
#include "hwbt/series.hpp"

namespace hwbt {

template <>
struct ring_traits<MPoly> {
    using Ctx = MPolyCtx;
    static MPoly zero(const Ctx& c) { return MPoly::zero(c); }
    static MPoly one(const Ctx& c) { return MPoly::one(c); }
    static MPoly frobenius(const MPoly& x, long k) { return x.frobenius(k); }
    static bool is_exact_zero(const MPoly& x) { return x.is_zero(); }
    static bool is_known_zero(const MPoly& x) { return x.is_zero(); }
    static long p(const Ctx& c) { return c.k.p(); }
};

template <class R>
struct BTDesc {
    SigmaMat<R> hw;  // Hasse-Witt matrix, phi(x) = hw x^(p)
    int codim = 0;   // c = height - dim
    int dim = 0;     // d

    BTDesc() = default;
    BTDesc(SigmaMat<R> m, int d) : hw(std::move(m)), codim(hw.size()), dim(d) {
        if (d < 0) throw input_error("BTDesc: negative dimension");
    }
    int height() const { return codim + dim; }
};

// Elementary group of slope s/r (coprime, 0 <= s <= r): dimension s,
// codimension r - s.  The Hasse-Witt matrix is the identity for slope 0 and
// the nilpotent shift block otherwise; slope 1 has no codimension at all.
inline BTDesc<FFElem> elementary_hw(const FieldDesc& k, long s, long r) {
    if (r < 1 || s < 0 || s > r) throw input_error("elementary_hw: need 0 <= s <= r, r >= 1");
    if (std::gcd(s, r) != 1 && !(s == 0 && r == 1)) throw input_error("elementary_hw: slope not in lowest terms");
    int c = static_cast<int>(r - s);
    SigmaMat<FFElem> m(k, c);
    if (s == 0) {
        for (int i = 0; i < c; ++i) m.at(i, i) = FFElem::one(k);
    } else {
        for (int i = 0; i + 1 < c; ++i) m.at(i + 1, i) = FFElem::one(k);
    }
    return BTDesc<FFElem>(std::move(m), static_cast<int>(s));
}

// Serre dual swaps dim and codim: slope s/r -> (r-s)/r.
inline std::pair<long, long> elementary_dual(long s, long r) {
    if (r < 1 || s < 0 || s > r) throw input_error("elementary_dual: need 0 <= s <= r, r >= 1");
    return {r - s, r};
}

// Universal HW-cyclic deformation: the companion matrix over k[t_1..t_c]
// whose last column is (-t_1, ..., -t_c).
inline BTDesc<MPoly> universal_deformation_hw(const FieldDesc& k, int c, int d, int cap = 4) {
    if (c < 1) throw input_error("universal_deformation_hw: need codim >= 1");
    MPolyCtx ctx(k, c, cap);
    SigmaMat<MPoly> m(ctx, c);
    for (int i = 0; i + 1 < c; ++i) m.at(i + 1, i) = MPoly::one(ctx);
    for (int i = 0; i < c; ++i) m.at(i, c - 1) = MPoly::zero(ctx) - MPoly::variable(ctx, i);
    return BTDesc<MPoly>(std::move(m), d);
}

// Evaluate a polynomial matrix at series arguments.
inline SigmaMat<LSeries> specialize(const SigmaMat<MPoly>& m, const SeriesCtx& sctx,
                                    const std::vector<LSeries>& args, bool exact = false) {
    SigmaMat<LSeries> r(sctx, m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) r.at(i, j) = m.at(i, j).substitute(sctx, args, exact);
    return r;
}

inline BTDesc<LSeries> specialize(const BTDesc<MPoly>& g, const SeriesCtx& sctx,
                                  const std::vector<LSeries>& args, bool exact = false) {
    return BTDesc<LSeries>(specialize(g.hw, sctx, args, exact), g.dim);
}

// ---- invariants of a fiber -------------------------------------------------

inline int a_number(const BTDesc<FFElem>& g) { return kernel_dim(g.hw); }

inline bool hw_cyclic(const BTDesc<FFElem>& g, int bound = 8) {
    if (g.codim == 0) return true;  // nothing to generate
    return cyclic_vector(g.hw, bound).found;
}

struct FiberHeights {
    int etale = 0;      // height of the maximal etale quotient
    int connected = 0;  // height of the connected part
    int i0 = 0;         // ordinarity defect: codim - etale height
    bool ordinary = false;
    bool is_connected = false;  // no etale part
    bool is_etale = false;      // no connected part
};

namespace detail {

inline FiberHeights heights_from(int etale, int c, int d) {
    FiberHeights f;
    f.etale = etale;
    f.connected = c + d - etale;
    f.i0 = c - etale;
    f.ordinary = (f.i0 == 0);
    f.is_connected = (etale == 0);
    f.is_etale = (f.connected == 0);
    return f;
}

}  // namespace detail

// Height of the etale quotient = stable rank of the Hasse-Witt matrix; the
// connected part gets the rest.  For a companion matrix the defect i0 is the
// number of leading zero coefficients of the additive polynomial.
inline FiberHeights fiber_heights(const BTDesc<FFElem>& g) {
    return detail::heights_from(sigma_stable_rank(g.hw), g.codim, g.dim);
}

// Reduction of a series family at u = 0.
inline BTDesc<FFElem> reduce_closed_fiber(const BTDesc<LSeries>& g) {
    SigmaMat<FFElem> m(g.hw.ctx().k, g.codim);
    for (int i = 0; i < g.codim; ++i)
        for (int j = 0; j < g.codim; ++j) {
            const LSeries& x = g.hw.at(i, j);
            if (x.is_nonzero() && x.ord() < 0)
                throw input_error("reduce_closed_fiber: entry with negative valuation");
            m.at(i, j) = x.coeff(0);
        }
    return BTDesc<FFElem>(std::move(m), g.dim);
}

// Rank over the Laurent series field.  Pivots must be visibly nonzero; if a
// column can only be cleared through entries that are merely zero to working
// precision, the rank is not determined and we refuse rather than guess.
inline int ls_rank(const SigmaMat<LSeries>& m) {
    int n = m.size();
    std::vector<std::vector<LSeries>> a(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<size_t>(i)].push_back(m.at(i, j));
    std::vector<bool> used(static_cast<size_t>(n), false);
    int rank = 0;
    bool uncertain = false;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = 0; r < n; ++r) {
            if (used[static_cast<size_t>(r)]) continue;
            const LSeries& x = a[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (x.is_nonzero() && (piv < 0 || x.ord() < a[static_cast<size_t>(piv)][static_cast<size_t>(c)].ord()))
                piv = r;
        }
        if (piv < 0) {
            for (int r = 0; r < n; ++r)
                if (!used[static_cast<size_t>(r)] && !a[static_cast<size_t>(r)][static_cast<size_t>(c)].is_exact_zero())
                    uncertain = true;
            continue;
        }
        used[static_cast<size_t>(piv)] = true;
        ++rank;
        for (int r = 0; r < n; ++r) {
            if (used[static_cast<size_t>(r)] || r == piv) continue;
            const LSeries& x = a[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (x.is_exact_zero()) continue;
            LSeries f = x / a[static_cast<size_t>(piv)][static_cast<size_t>(c)];
            for (int cc = 0; cc < n; ++cc)
                a[static_cast<size_t>(r)][static_cast<size_t>(cc)] =
                    a[static_cast<size_t>(r)][static_cast<size_t>(cc)] -
                    f * a[static_cast<size_t>(piv)][static_cast<size_t>(cc)];
        }
    }
    if (uncertain) throw precision_error("ls_rank: rank not determined to working precision");
    return rank;
}

// Heights of the generic fiber of a family over k((u)).
inline FiberHeights fiber_heights_generic(const BTDesc<LSeries>& g) {
    return detail::heights_from(ls_rank(twist_compose(g.hw, g.codim)), g.codim, g.dim);
}

// ---- companion utilities ---------------------------------------------------

// Coefficients a_1..a_{c+1} of the additive polynomial P(X) = sum a_{i+1}
// X^{p^i} attached to a companion Hasse-Witt matrix: the last column is
// (-a_1, ..., -a_c) and a_{c+1} = 1.
template <class R>
std::vector<R> companion_addpoly_coeffs(const SigmaMat<R>& m) {
    if (!is_companion(m)) throw input_error("companion_addpoly_coeffs: matrix is not companion-shaped");
    int c = m.size();
    if (c == 0) throw input_error("companion_addpoly_coeffs: empty matrix");
    std::vector<R> a;
    for (int i = 0; i < c; ++i)
        a.push_back(ring_traits<R>::zero(m.ctx()) - m.at(i, c - 1));
    a.push_back(ring_traits<R>::one(m.ctx()));
    return a;
}

// Hasse invariant of a family: valuation of det(hw).
inline SeriesVal hasse_invariant(const BTDesc<LSeries>& g) {
    if (g.codim == 0) return SeriesVal{SeriesVal::FINITE, Rat(0), Rat(0)};
    return sigma_det(g.hw).val();
}

// Over a field the Hasse invariant is 0 (ordinary) or infinite (det = 0).
inline SeriesVal hasse_invariant(const BTDesc<FFElem>& g) {
    if (g.codim == 0 || !sigma_det(g.hw).is_zero()) return SeriesVal{SeriesVal::FINITE, Rat(0), Rat(0)};
    return SeriesVal{SeriesVal::EXACT_ZERO, Rat(0), Rat(0)};
}

// ---- versality --------------------------------------------------------------

struct Versality {
    int rank = 0;    // rank of the matrix of degree-1 parts of a_1..a_c
    int codim = 0;
    int nvars = 0;
    bool versal = false;  // rank == codim
};

// A HW-cyclic deformation with companion matrix over k[t_1..t_m] is versal
// exactly when the linear parts of its additive-polynomial coefficients span
// a space of dimension c.
inline Versality versality_check(const BTDesc<MPoly>& g) {
    auto a = companion_addpoly_coeffs(g.hw);
    const MPolyCtx& ctx = g.hw.ctx();
    int c = g.codim;
    std::vector<std::vector<FFElem>> L(static_cast<size_t>(c));
    for (int i = 0; i < c; ++i)
        for (int j = 0; j < ctx.nvars; ++j) L[static_cast<size_t>(i)].push_back(a[static_cast<size_t>(i)].lin_coeff(j));
    Versality v;
    v.codim = c;
    v.nvars = ctx.nvars;
    v.rank = ff_rank(std::move(L));
    v.versal = (v.rank == c);
    return v;
}

}  // namespace hwbt
