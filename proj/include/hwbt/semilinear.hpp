#pragma once

// Frobenius-semilinear matrices phi(x) = M x^(p) over a coefficient ring
// (finite field, Laurent series, or truncated multivariate polynomials).
// Twisting convention: M^(p^k) is entrywise Frobenius; the k-fold composite
// phi^k is linearized by M * M^(p) * ... * M^(p^{k-1}).

#include <optional>
#include <vector>

#include "hwbt/errors.hpp"
#include "hwbt/ff.hpp"
#include "hwbt/series.hpp"

namespace hwbt {

template <class R>
struct ring_traits;

template <>
struct ring_traits<FFElem> {
    using Ctx = FieldDesc;
    static FFElem zero(const Ctx& c) { return FFElem::zero(c); }
    static FFElem one(const Ctx& c) { return FFElem::one(c); }
    static FFElem frobenius(const FFElem& x, long k) { return x.frobenius(k); }
    static bool is_exact_zero(const FFElem& x) { return x.is_zero(); }
    static bool is_known_zero(const FFElem& x) { return x.is_zero(); }
    static long p(const Ctx& c) { return c.p(); }
};

template <>
struct ring_traits<LSeries> {
    using Ctx = SeriesCtx;
    static LSeries zero(const Ctx& c) { return LSeries::zero(c); }
    static LSeries one(const Ctx& c) { return LSeries::one(c); }
    static LSeries frobenius(const LSeries& x, long k) { return x.frobenius(k); }
    static bool is_exact_zero(const LSeries& x) { return x.is_exact_zero(); }
    static bool is_known_zero(const LSeries& x) { return !x.is_nonzero(); }
    static long p(const Ctx& c) { return c.k.p(); }
};

template <class R>
class SigmaMat {
  public:
    using Ctx = typename ring_traits<R>::Ctx;

    SigmaMat() = default;
    SigmaMat(Ctx ctx, int n) : ctx_(std::move(ctx)), n_(n), a_(static_cast<size_t>(n) * n, ring_traits<R>::zero(ctx_)) {
        if (n < 0) throw input_error("SigmaMat: negative size");
    }
    SigmaMat(Ctx ctx, int n, std::vector<R> entries) : ctx_(std::move(ctx)), n_(n), a_(std::move(entries)) {
        if (a_.size() != static_cast<size_t>(n) * static_cast<size_t>(n))
            throw input_error("SigmaMat: entry count != n^2");
    }

    static SigmaMat identity(const Ctx& ctx, int n) {
        SigmaMat m(ctx, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = ring_traits<R>::one(ctx);
        return m;
    }

    int size() const { return n_; }
    const Ctx& ctx() const { return ctx_; }
    R& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const R& at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    SigmaMat operator*(const SigmaMat& o) const {
        if (n_ != o.n_) throw input_error("SigmaMat: size mismatch");
        SigmaMat r(ctx_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                R acc = ring_traits<R>::zero(ctx_);
                for (int k = 0; k < n_; ++k) acc = acc + at(i, k) * o.at(k, j);
                r.at(i, j) = acc;
            }
        return r;
    }
    SigmaMat operator+(const SigmaMat& o) const {
        if (n_ != o.n_) throw input_error("SigmaMat: size mismatch");
        SigmaMat r(ctx_, n_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    // Entrywise x -> x^{p^k}.
    SigmaMat twisted(long k) const {
        SigmaMat r = *this;
        for (auto& x : r.a_) x = ring_traits<R>::frobenius(x, k);
        return r;
    }

    bool all_exact_zero() const {
        for (const auto& x : a_)
            if (!ring_traits<R>::is_exact_zero(x)) return false;
        return true;
    }

    // phi(x) = M x^(p) on column vectors.
    std::vector<R> apply(const std::vector<R>& x) const {
        if (static_cast<int>(x.size()) != n_) throw input_error("SigmaMat: vector size mismatch");
        std::vector<R> xi;
        xi.reserve(x.size());
        for (const auto& v : x) xi.push_back(ring_traits<R>::frobenius(v, 1));
        std::vector<R> r(static_cast<size_t>(n_), ring_traits<R>::zero(ctx_));
        for (int i = 0; i < n_; ++i) {
            R acc = ring_traits<R>::zero(ctx_);
            for (int j = 0; j < n_; ++j) acc = acc + at(i, j) * xi[static_cast<size_t>(j)];
            r[static_cast<size_t>(i)] = acc;
        }
        return r;
    }

  private:
    Ctx ctx_;
    int n_ = 0;
    std::vector<R> a_;
};

// Linearization of phi^k: M * M^(p) * ... * M^(p^{k-1}); k = 0 gives I.
template <class R>
SigmaMat<R> twist_compose(const SigmaMat<R>& m, long k) {
    if (k < 0) throw input_error("twist_compose: negative power");
    SigmaMat<R> acc = SigmaMat<R>::identity(m.ctx(), m.size());
    for (long i = 0; i < k; ++i) acc = acc * m.twisted(i);
    return acc;
}

// Determinant by cofactor expansion; exact for every coefficient ring.
template <class R>
R sigma_det(const SigmaMat<R>& m) {
    int n = m.size();
    if (n == 0) return ring_traits<R>::one(m.ctx());
    if (n == 1) return m.at(0, 0);
    R acc = ring_traits<R>::zero(m.ctx());
    for (int i = 0; i < n; ++i) {
        if (ring_traits<R>::is_exact_zero(m.at(i, 0))) continue;
        SigmaMat<R> minor(m.ctx(), n - 1);
        for (int r = 0, rr = 0; r < n; ++r) {
            if (r == i) continue;
            for (int c = 1; c < n; ++c) minor.at(rr, c - 1) = m.at(r, c);
            ++rr;
        }
        R term = m.at(i, 0) * sigma_det(minor);
        if (i % 2 == 0) acc = acc + term;
        else acc = acc + term * (ring_traits<R>::zero(m.ctx()) - ring_traits<R>::one(m.ctx()));
    }
    return acc;
}

// ---- dense linear algebra over a finite field ----------------------------

// Row echelon rank; ff entries, destructive on a copy.
inline int ff_rank(std::vector<std::vector<FFElem>> rows) {
    if (rows.empty()) return 0;
    size_t cols = rows[0].size();
    int rank = 0;
    size_t rpos = 0;
    for (size_t c = 0; c < cols && rpos < rows.size(); ++c) {
        size_t piv = rpos;
        while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rpos], rows[piv]);
        FFElem inv = rows[rpos][c].inv();
        for (size_t cc = c; cc < cols; ++cc) rows[rpos][cc] = rows[rpos][cc] * inv;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rpos || rows[r][c].is_zero()) continue;
            FFElem f = rows[r][c];
            for (size_t cc = c; cc < cols; ++cc) rows[r][cc] = rows[r][cc] - f * rows[rpos][cc];
        }
        ++rpos;
        ++rank;
    }
    return rank;
}

inline int sigma_rank(const SigmaMat<FFElem>& m) {
    std::vector<std::vector<FFElem>> rows(static_cast<size_t>(m.size()));
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) rows[static_cast<size_t>(i)].push_back(m.at(i, j));
    return ff_rank(std::move(rows));
}

// Matrix inverse over a field; input_error when singular.
inline SigmaMat<FFElem> sigma_inv(const SigmaMat<FFElem>& m) {
    int n = m.size();
    std::vector<std::vector<FFElem>> aug(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[static_cast<size_t>(i)].push_back(m.at(i, j));
        for (int j = 0; j < n; ++j)
            aug[static_cast<size_t>(i)].push_back(i == j ? FFElem::one(m.ctx()) : FFElem::zero(m.ctx()));
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        while (piv < n && aug[static_cast<size_t>(piv)][static_cast<size_t>(c)].is_zero()) ++piv;
        if (piv == n) throw input_error("sigma_inv: singular matrix");
        std::swap(aug[static_cast<size_t>(c)], aug[static_cast<size_t>(piv)]);
        FFElem inv = aug[static_cast<size_t>(c)][static_cast<size_t>(c)].inv();
        for (int cc = 0; cc < 2 * n; ++cc)
            aug[static_cast<size_t>(c)][static_cast<size_t>(cc)] = aug[static_cast<size_t>(c)][static_cast<size_t>(cc)] * inv;
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            FFElem f = aug[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (f.is_zero()) continue;
            for (int cc = 0; cc < 2 * n; ++cc)
                aug[static_cast<size_t>(r)][static_cast<size_t>(cc)] =
                    aug[static_cast<size_t>(r)][static_cast<size_t>(cc)] - f * aug[static_cast<size_t>(c)][static_cast<size_t>(cc)];
        }
    }
    SigmaMat<FFElem> r(m.ctx(), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = aug[static_cast<size_t>(i)][static_cast<size_t>(n + j)];
    return r;
}

// dim Ker of the linearization = corank; computes the a-number.
inline int kernel_dim(const SigmaMat<FFElem>& m) { return m.size() - sigma_rank(m); }

// Connectedness test: phi nilpotent iff the c-fold twisted composite is 0.
inline bool is_nilpotent_sigma(const SigmaMat<FFElem>& m) {
    return twist_compose(m, m.size()).all_exact_zero();
}

// Stable rank of the semilinear endomorphism = dimension of its bijective
// part = rank of the c-fold twisted composite.
inline int sigma_stable_rank(const SigmaMat<FFElem>& m) {
    return sigma_rank(twist_compose(m, m.size()));
}

struct CyclicSearch {
    bool found = false;
    int ext_deg = 0;              // extension degree over the base field
    std::vector<FFElem> v;        // witness over F_{q^{ext_deg}}
    FieldDesc field;              // the field the witness lives in
};

namespace detail {

inline SigmaMat<FFElem> embed_matrix(const SigmaMat<FFElem>& m, const FieldDesc& into) {
    SigmaMat<FFElem> r(into, m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) r.at(i, j) = ff_embed(m.at(i, j), into);
    return r;
}

}  // namespace detail

// Search F_{q^j}, j = 1..bound, for v with v, phi v, ..., phi^{n-1} v a
// basis.  Vectors are scanned in coefficient-lexicographic order (first
// coordinate most significant), so the witness is deterministic.  A corank
// >= 2 matrix can never be cyclic over any extension (a companion matrix has
// corank <= 1 and rank is extension-invariant), so that case short-circuits.
inline CyclicSearch cyclic_vector(const SigmaMat<FFElem>& m, int bound = 8) {
    CyclicSearch out;
    int n = m.size();
    if (n == 0) throw input_error("cyclic_vector: empty matrix");
    if (kernel_dim(m) >= 2) return out;
    const FieldDesc& base = m.ctx();
    for (int j = 1; j <= bound; ++j) {
        FieldDesc K = (j == 1) ? base : ff_make(base.p(), base.deg() * j);
        if (K.q() > (1LL << 26) && n > 2) break;  // enumeration would be pointless past here
        SigmaMat<FFElem> me = (j == 1) ? m : detail::embed_matrix(m, K);
        long long total = 1;
        bool overflow = false;
        for (int i = 0; i < n; ++i) {
            if (total > (1LL << 40) / K.q()) { overflow = true; break; }
            total *= K.q();
        }
        if (overflow) break;
        for (long long idx = 1; idx < total; ++idx) {
            long long rem = idx;
            std::vector<FFElem> v(static_cast<size_t>(n), FFElem::zero(K));
            for (int i = n - 1; i >= 0; --i) {  // first coordinate most significant
                v[static_cast<size_t>(i)] = FFElem::from_value(K, rem % K.q());
                rem /= K.q();
            }
            std::vector<std::vector<FFElem>> rows;
            std::vector<FFElem> cur = v;
            rows.push_back(cur);
            for (int k = 1; k < n; ++k) {
                cur = me.apply(cur);
                rows.push_back(cur);
            }
            if (ff_rank(rows) == n) {
                out.found = true;
                out.ext_deg = j;
                out.v = v;
                out.field = K;
                return out;
            }
        }
    }
    return out;
}

// Change of basis to B = [v, phi v, ..., phi^{n-1} v]: the matrix of phi in
// that basis is B^{-1} M B^(p).  Returns (companion, B).
inline std::pair<SigmaMat<FFElem>, SigmaMat<FFElem>> companion_form(const SigmaMat<FFElem>& m,
                                                                    const std::vector<FFElem>& v) {
    int n = m.size();
    SigmaMat<FFElem> B(m.ctx(), n);
    std::vector<FFElem> cur = v;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) B.at(i, j) = cur[static_cast<size_t>(i)];
        if (j + 1 < n) cur = m.apply(cur);
    }
    SigmaMat<FFElem> C = sigma_inv(B) * m * B.twisted(1);
    return {C, B};
}

// Companion shape: subdiagonal ones, arbitrary last column, zeros elsewhere.
// Entries only need to match to working precision.
template <class R>
bool is_companion(const SigmaMat<R>& m) {
    int n = m.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < n; ++j) {
            const R& x = m.at(i, j);
            R expect = (i == j + 1) ? ring_traits<R>::one(m.ctx()) : ring_traits<R>::zero(m.ctx());
            if (!ring_traits<R>::is_known_zero(x - expect)) return false;
        }
    return true;
}

// The algebra presentation A[X_1..X_n]/(X_j^p - sum_i M_ij X_i), returned as
// the list of relation columns (one per variable).
template <class R>
std::vector<std::vector<R>> presentation(const SigmaMat<R>& m) {
    std::vector<std::vector<R>> rel;
    for (int j = 0; j < m.size(); ++j) {
        std::vector<R> col;
        for (int i = 0; i < m.size(); ++i) col.push_back(m.at(i, j));
        rel.push_back(std::move(col));
    }
    return rel;
}

// ---- F_p-linear solve for fixed points ------------------------------------

namespace detail {

// Kernel basis of an integer matrix over F_p (rows x cols), vectors of size cols.
inline std::vector<std::vector<int>> fp_kernel(std::vector<std::vector<int>> a, long p, size_t cols) {
    size_t rows = a.size();
    std::vector<int> pivot_col;
    size_t rpos = 0;
    for (size_t c = 0; c < cols && rpos < rows; ++c) {
        size_t piv = rpos;
        while (piv < rows && a[piv][c] % p == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[rpos], a[piv]);
        long inv = fpoly::inv_mod(a[rpos][c], p);
        for (size_t cc = 0; cc < cols; ++cc) a[rpos][cc] = static_cast<int>((a[rpos][cc] * inv) % p);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rpos) continue;
            long f = a[r][c] % p;
            if (f == 0) continue;
            for (size_t cc = 0; cc < cols; ++cc) {
                long v = (a[r][cc] - f * a[rpos][cc]) % p;
                if (v < 0) v += p;
                a[r][cc] = static_cast<int>(v);
            }
        }
        pivot_col.push_back(static_cast<int>(c));
        ++rpos;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<int>> basis;
    for (size_t freec = 0; freec < cols; ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<int> v(cols, 0);
        v[freec] = 1;
        for (size_t r = 0; r < pivot_col.size(); ++r) {
            long val = a[r][freec] % p;
            if (val != 0) v[static_cast<size_t>(pivot_col[r])] = static_cast<int>((p - val) % p);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace detail

struct FixedSpace {
    std::vector<std::vector<FFElem>> basis;  // F_p-basis of solutions of M x^(p) = x
    FieldDesc field;                         // field of the coordinates
    int ext_deg = 1;
    bool stabilized = false;  // dimension reached the stable rank
};

// Solutions of M x^(p) = x over extensions F_{q^j}, j <= bound: an F_p-space
// whose dimension, once the field is large enough, is the stable rank of M
// (the rank of the etale part).
inline FixedSpace fixed_space(const SigmaMat<FFElem>& m, int bound = 8) {
    int n = m.size();
    const FieldDesc& base = m.ctx();
    int target = sigma_stable_rank(m);
    FixedSpace out;
    out.field = base;
    for (int j = 1; j <= bound; ++j) {
        FieldDesc K = (j == 1) ? base : ff_make(base.p(), base.deg() * j);
        SigmaMat<FFElem> me = (j == 1) ? m : detail::embed_matrix(m, K);
        int D = K.deg();
        size_t cols = static_cast<size_t>(n) * static_cast<size_t>(D);
        std::vector<std::vector<int>> sys(cols, std::vector<int>(cols, 0));
        // columns: basis vector (coord i, basis index b) -> M x^(p) - x
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < D; ++b) {
                std::vector<FFElem> x(static_cast<size_t>(n), FFElem::zero(K));
                std::vector<int> unit(D, 0);
                unit[static_cast<size_t>(b)] = 1;
                x[static_cast<size_t>(i)] = FFElem(K, unit);
                auto y = me.apply(x);
                size_t col = static_cast<size_t>(i) * D + static_cast<size_t>(b);
                for (int ii = 0; ii < n; ++ii) {
                    FFElem d = y[static_cast<size_t>(ii)] - x[static_cast<size_t>(ii)];
                    for (int bb = 0; bb < D; ++bb)
                        sys[static_cast<size_t>(ii) * D + static_cast<size_t>(bb)][col] = d.coeffs()[static_cast<size_t>(bb)];
                }
            }
        auto ker = detail::fp_kernel(std::move(sys), base.p(), cols);
        if (static_cast<int>(ker.size()) > static_cast<int>(out.basis.size()) || j == 1) {
            out.basis.clear();
            for (const auto& kv : ker) {
                std::vector<FFElem> vec;
                for (int i = 0; i < n; ++i) {
                    std::vector<int> coeffs(kv.begin() + static_cast<long>(i) * D,
                                            kv.begin() + static_cast<long>(i + 1) * D);
                    vec.push_back(FFElem(K, coeffs));
                }
                out.basis.push_back(std::move(vec));
            }
            out.field = K;
            out.ext_deg = j;
        }
        if (static_cast<int>(out.basis.size()) == target) {
            out.stabilized = true;
            break;
        }
    }
    return out;
}

struct SeriesFixedSpace {
    std::vector<std::vector<LSeries>> basis;  // solutions over k'[[u]]
    SeriesCtx ctx;                            // possibly enlarged residue field
    int ext_deg = 1;
    bool stabilized = false;
};

// Fixed space over a series base: solve the reduction, then lift each basis
// solution term by term (each next coefficient is forced; char-p additivity
// makes the solution set an F_p-space and the lift unique).
inline SeriesFixedSpace fixed_space(const SigmaMat<LSeries>& m, int bound = 8) {
    const SeriesCtx& ctx = m.ctx();
    int n = m.size();
    // residue matrix
    SigmaMat<FFElem> mbar(ctx.k, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const LSeries& x = m.at(i, j);
            if (x.is_nonzero() && x.ord() < 0)
                throw input_error("fixed_space: matrix entries must have nonnegative valuation");
            mbar.at(i, j) = x.coeff(0);
        }
    FixedSpace base = fixed_space(mbar, bound);
    SeriesCtx ext(base.field, ctx.e, ctx.prec);
    SigmaMat<LSeries> me(ext, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) me.at(i, j) = m.at(i, j).extended(ext);
    SeriesFixedSpace out;
    out.ctx = ext;
    out.ext_deg = base.ext_deg;
    out.stabilized = base.stabilized;
    for (const auto& v0 : base.basis) {
        std::vector<LSeries> x;
        for (int i = 0; i < n; ++i) x.push_back(LSeries::constant(ext, v0[static_cast<size_t>(i)]));
        for (int step = 1; step < ctx.prec; ++step) {
            auto y = me.apply(x);
            for (int i = 0; i < n; ++i) {
                // residual r = (M x^(p) - x)_i; the forced correction is its
                // u^step coefficient
                LSeries r = y[static_cast<size_t>(i)] - x[static_cast<size_t>(i)];
                FFElem z = r.coeff(step);
                if (!z.is_zero())
                    x[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + LSeries::monomial(ext, step, z);
            }
        }
        out.basis.push_back(std::move(x));
    }
    return out;
}

}  // namespace hwbt
