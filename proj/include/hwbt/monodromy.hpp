#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hwbt/btgroup.hpp"
#include "hwbt/errors.hpp"
#include "hwbt/ff.hpp"
#include "hwbt/npoly.hpp"
#include "hwbt/rational.hpp"
#include "hwbt/semilinear.hpp"
#include "hwbt/series.hpp"

// Root structures of additive polynomials P(X) = sum a_{i+1} X^(p^i) + X^(p^c)
// over a local series field, and the tame-inertia action on them: explicit
// roots with exact valuations, the theta-action matrix over F_p, Cartan
// membership of that matrix, ramification certificates from translated Newton
// polygons, and the valuation ladder of the Igusa-type tower.

namespace hwbt {

namespace detail {

inline long long modpow_ll(long long b, long long e, long long mod) {
    long long r = 1 % mod;
    b %= mod;
    while (e > 0) {
        if (e & 1) r = (r * b) % mod;
        b = (b * b) % mod;
        e >>= 1;
    }
    return r;
}

inline long long pow_ll_checked(long long b, long long e, const char* who) {
    long long r = 1;
    for (long long i = 0; i < e; ++i) {
        if (r > (1LL << 62) / b) throw input_error(std::string(who) + ": power overflow");
        r *= b;
    }
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Additive polynomials.

struct AdditivePoly {
    SeriesCtx ctx;
    int c = 0;
    std::vector<LSeries> a;  // a[i] multiplies X^(p^i), i = 0..c-1; X^(p^c) is monic

    AdditivePoly(SeriesCtx cx, std::vector<LSeries> coeffs)
        : ctx(std::move(cx)), c(static_cast<int>(coeffs.size())), a(std::move(coeffs)) {
        if (c < 1) throw input_error("AdditivePoly: need at least one coefficient");
        for (const auto& x : a)
            if (x.ctx() != ctx) throw input_error("AdditivePoly: coefficient context mismatch");
    }

    long p() const { return ctx.k.p(); }

    long long degree() const { return detail::pow_ll_checked(p(), c, "AdditivePoly"); }

    LSeries eval(const LSeries& x) const {
        if (x.ctx() != ctx) throw input_error("AdditivePoly: eval context mismatch");
        LSeries acc = x.frobenius(c);
        for (int i = 0; i < c; ++i)
            if (!a[static_cast<size_t>(i)].is_exact_zero())
                acc = acc + a[static_cast<size_t>(i)] * x.frobenius(i);
        return acc;
    }

    SeriesPoly to_series_poly() const {
        SeriesPoly f(static_cast<size_t>(degree()) + 1, LSeries::zero(ctx));
        long long pw = 1;
        for (int i = 0; i < c; ++i) {
            f[static_cast<size_t>(pw)] = a[static_cast<size_t>(i)];
            pw *= p();
        }
        f[static_cast<size_t>(pw)] = LSeries::one(ctx);
        return f;
    }

    // Least i with a_{i+1} nonzero as a series: P = Q(X^(p^i)) with Q separable.
    // Returns c for the purely inseparable X^(p^c).
    int generic_i0() const {
        for (int i = 0; i < c; ++i) {
            const LSeries& x = a[static_cast<size_t>(i)];
            if (x.is_nonzero()) return i;
            if (x.is_zero_to_prec())
                throw precision_error("generic_i0: coefficient zero to precision only");
        }
        return c;
    }

    // Least i with a_{i+1} a unit (the closed-fiber defect).  Returns c when
    // the monic leading term is the first unit.
    int special_i0() const {
        for (int i = 0; i < c; ++i) {
            const LSeries& x = a[static_cast<size_t>(i)];
            if (x.is_exact_zero()) continue;
            if (x.is_zero_to_prec()) {
                if (x.known_end() <= 0)
                    throw precision_error("special_i0: residue of coefficient unknown");
                continue;  // known to vanish at order 0
            }
            if (x.ord() < 0) throw input_error("special_i0: coefficient not integral");
            if (x.ord() == 0) return i;
        }
        return c;
    }
};

inline AdditivePoly addpoly_from_companion(const SigmaMat<LSeries>& m) {
    auto cs = companion_addpoly_coeffs(m);  // a_1..a_c, then the monic 1
    cs.pop_back();
    return AdditivePoly(m.ctx(), std::move(cs));
}

inline SigmaMat<LSeries> companion_from_addpoly(const AdditivePoly& P) {
    SigmaMat<LSeries> m(P.ctx, P.c);
    for (int i = 1; i < P.c; ++i) m.at(i, i - 1) = LSeries::one(P.ctx);
    for (int i = 0; i < P.c; ++i) m.at(i, P.c - 1) = -P.a[static_cast<size_t>(i)];
    return m;
}

// ---------------------------------------------------------------------------
// Tame root systems.

struct TameRootSystem {
    SeriesCtx ctx;                // final context (field and e possibly enlarged)
    std::vector<LSeries> roots;   // all p^dim roots; zero first, then by (valuation, terms)
    FFElem zeta;                  // exact order rel_e in ctx.k
    long long rel_e = 1;          // e(ctx) / e(base)
    int i0 = 0;                   // inseparability defect of P
    long long multiplicity = 1;   // p^i0, multiplicity of each root of P as a polynomial
    int dim = 0;                  // roots form an F_p-space of this dimension
};

namespace detail {

// Incremental F_p-span of coefficient vectors.
struct FpSpan {
    long p;
    std::vector<std::vector<int>> rows;

    explicit FpSpan(long prime) : p(prime) {}

    bool add(std::vector<int> v) {
        for (const auto& row : rows) {
            size_t lead = 0;
            while (lead < row.size() && row[lead] == 0) ++lead;
            if (lead == row.size()) continue;
            long f = v[lead] % p;
            if (f == 0) continue;
            // rows are normalized with leading 1
            for (size_t i = 0; i < v.size(); ++i) {
                long t = (v[i] - f * row[i]) % p;
                if (t < 0) t += p;
                v[i] = static_cast<int>(t);
            }
        }
        size_t lead = 0;
        while (lead < v.size() && v[lead] == 0) ++lead;
        if (lead == v.size()) return false;
        long inv = fpoly::inv_mod(v[lead], p);
        for (auto& t : v) t = static_cast<int>((t * inv) % p);
        rows.push_back(std::move(v));
        return true;
    }
};

struct TameSolver {
    long p;
    int c, i0, m;
    int ext_bound;
    long long budget;
    SeriesCtx base, cur;
    std::vector<LSeries> b;      // separable core Q = sum b[j] X^(p^j), b[m] = 1
    std::vector<LSeries> basis;  // basis roots of Q, kept current under growth

    TameSolver(const AdditivePoly& P, int eb, long long bu)
        : p(P.p()), c(P.c), ext_bound(eb), budget(bu), base(P.ctx), cur(P.ctx) {
        (void)P.degree();  // overflow guard
        i0 = P.generic_i0();
        if (i0 == c) throw input_error("tame_roots: polynomial is purely inseparable");
        m = c - i0;
        for (int j = 0; j < m; ++j) b.push_back(P.a[static_cast<size_t>(i0 + j)]);
        b.push_back(LSeries::one(cur));
    }

    void charge(long long n) {
        budget -= n;
        if (budget < 0) throw budget_error("tame_roots: operation budget exhausted");
    }

    void set_ctx(const SeriesCtx& nctx) {
        for (auto& x : b) x = x.extended(nctx);
        for (auto& x : basis) x = x.extended(nctx);
        cur = nctx;
    }

    // Extend the residue field by relative degree j over the current one.
    void grow_field(long long j) {
        if (j <= 1) return;
        long long nd = static_cast<long long>(cur.k.deg()) * j;
        if (nd / base.k.deg() > ext_bound)
            throw precision_error("tame_roots: residue extension exceeds ext bound");
        if (static_cast<double>(nd) * std::log2(static_cast<double>(p)) > 40)
            throw budget_error("tame_roots: residue field too large to construct");
        set_ctx(SeriesCtx(ff_make(p, static_cast<int>(nd)), cur.e, cur.prec));
    }

    void grow_e(long long ee) {
        if (ee == cur.e) return;
        int nprec = static_cast<int>(static_cast<long long>(base.prec) * (ee / base.e));
        set_ctx(SeriesCtx(cur.k, static_cast<int>(ee), nprec));
    }

    // Grow the residue field until it contains the ee-th roots of unity.
    void ensure_mu(long long ee) {
        if (ee <= 1) return;
        if (ee % p == 0) throw wild_error("tame_roots: root-of-unity order divisible by p");
        for (long long j = 1; j <= ee; ++j) {
            long long nd = static_cast<long long>(cur.k.deg()) * j;
            if (detail::modpow_ll(p, nd, ee) == 1 % ee) {
                grow_field(j);
                return;
            }
        }
        throw precision_error("tame_roots: no extension realizes the root of unity");
    }

    LSeries eval_core(const LSeries& x) const {
        LSeries acc = x.frobenius(m);
        for (int j = 0; j < m; ++j)
            if (!b[static_cast<size_t>(j)].is_exact_zero())
                acc = acc + b[static_cast<size_t>(j)] * x.frobenius(j);
        return acc;
    }

    SeriesPoly core_poly_with(const LSeries& cst) const {
        long long deg = 1;
        for (int j = 0; j < m; ++j) deg *= p;
        SeriesPoly f(static_cast<size_t>(deg) + 1, LSeries::zero(cur));
        f[0] = cst;
        long long pw = 1;
        for (int j = 0; j <= m; ++j) {
            f[static_cast<size_t>(pw)] = b[static_cast<size_t>(j)];
            pw *= p;
        }
        return f;
    }

    // Roots of cst + sum coeffs[l].second * Y^(p^coeffs[l].first) over the
    // residue field, growing it until at least `target` roots exist.  Returned
    // in element-value order, in the (possibly enlarged) current field.
    std::vector<FFElem> residue_roots(const std::vector<std::pair<int, FFElem>>& coeffs,
                                      const FFElem& cst, long long target) {
        for (long long j = 1;; ++j) {
            long long nd = static_cast<long long>(cur.k.deg()) * j;
            if (nd / base.k.deg() > ext_bound)
                throw precision_error("tame_roots: residue equation needs extension beyond ext bound");
            double bits = static_cast<double>(nd) * std::log2(static_cast<double>(p));
            if (bits > 40)
                throw budget_error("tame_roots: residue field too large to sweep");
            FieldDesc K = (j == 1) ? cur.k : ff_make(p, static_cast<int>(nd));
            FFElem c0 = (j == 1) ? cst : ff_embed(cst, K);
            std::vector<std::pair<int, FFElem>> cs;
            cs.reserve(coeffs.size());
            for (const auto& [l, cf] : coeffs)
                cs.push_back({l, (j == 1) ? cf : ff_embed(cf, K)});
            charge(K.q());
            std::vector<FFElem> roots;
            for (long long v = 0; v < K.q(); ++v) {
                FFElem y = FFElem::from_value(K, v);
                FFElem acc = c0;
                for (const auto& [l, cf] : cs) acc = acc + cf * y.frobenius(l);
                if (acc.is_zero()) roots.push_back(y);
            }
            if (static_cast<long long>(roots.size()) >= target) {
                if (j > 1) {
                    grow_field(j);
                    for (auto& r : roots) r = ff_embed(r, cur.k);
                }
                return roots;
            }
        }
    }

    // Newton iteration for T(X) = Q(X) + beta whose polygon certifies a unique
    // simple root of valuation v(beta) - v(b0), strictly the largest.
    LSeries newton_simple(LSeries beta) {
        LSeries w = LSeries::zero(cur);
        LSeries binv = b[0].inv();
        long long last_ord = beta.ord() - 1;
        for (int it = 0; it < 200; ++it) {
            charge(1);
            LSeries r = (it == 0) ? beta : eval_core(w) + beta;
            if (!r.is_nonzero()) {
                if (r.is_exact_zero()) return w;
                return w.truncated(r.known_end() - b[0].ord());
            }
            if (r.ord() <= last_ord)
                throw precision_error("tame_roots: Newton iteration stalled");
            last_ord = r.ord();
            w = w - r * binv;
        }
        throw precision_error("tame_roots: Newton iteration limit reached");
    }

    // One correction term w with v(w) > s and Q(w) = -beta, resolved branch by
    // branch through translated Newton polygons.  Each translate either
    // certifies a simple leading root (finished by Newton) or exposes the
    // leading cluster's residue equation; a fractional slope with denominator
    // divisible by p at any level certifies wild ramification.
    LSeries solve_affine(LSeries beta, const Rat& s) {
        LSeries acc = LSeries::zero(cur);
        long long levels = 10LL * cur.prec + 100;
        for (long long lvl = 0; lvl < levels; ++lvl) {
            charge(1);
            if (!beta.is_nonzero()) {
                if (beta.is_exact_zero()) return acc;
                long long drop = b[0].is_nonzero() ? b[0].ord() : 0;
                return acc.truncated(beta.known_end() - drop);
            }
            Rat vbeta(Int(beta.ord()), Int(cur.e));
            RootValuations rv = np_root_valuations(core_poly_with(beta));
            if (rv.vals.empty())
                throw precision_error("tame_roots: translate polygon has no finite slope");
            Rat vp = rv.vals.front().first;
            long long mult = rv.vals.front().second;
            if (!(s < vp))
                throw precision_error("tame_roots: cluster branch fell below its slope");
            if (b[0].is_nonzero() && mult == 1 &&
                vp == vbeta - Rat(Int(b[0].ord()), Int(cur.e))) {
                return acc + newton_simple(beta);
            }
            Rat scaled = vp * Rat(cur.e);
            long long extra = rat_den_ll(scaled);
            if (extra % p == 0)
                throw wild_error("tame_roots: wild cluster, translate slope " + vp.str() +
                                 " needs ramification divisible by p");
            if (extra > 1) {
                grow_e(cur.e * extra);
                beta = beta.extended(cur);
                acc = acc.extended(cur);
            }
            long long ev = rat_num_ll(vp * Rat(cur.e));
            // residue equation of the leading branch
            FFElem cst = beta.coeff(beta.ord());
            std::vector<std::pair<int, FFElem>> cs;
            long long pw = 1;
            for (int j = 0; j <= m; ++j) {
                const LSeries& bj = b[static_cast<size_t>(j)];
                if (bj.is_nonzero()) {
                    Rat line = Rat(Int(bj.ord()), Int(cur.e)) + vp * Rat(pw);
                    if (line == vbeta) cs.push_back({j, bj.coeff(bj.ord())});
                } else if (bj.is_zero_to_prec()) {
                    Rat line = Rat(Int(bj.known_end()), Int(cur.e)) + vp * Rat(pw);
                    if (line == vbeta)
                        throw precision_error("tame_roots: residue coefficient hidden by precision");
                }
                pw *= p;
            }
            std::vector<FFElem> gs = residue_roots(cs, cst, 1);
            FFElem gamma = gs.front();
            if (beta.ctx() != cur) {  // residue_roots may have grown the field
                beta = beta.extended(cur);
                acc = acc.extended(cur);
            }
            LSeries x1 = LSeries::monomial(cur, ev, gamma);
            acc = acc + x1;
            LSeries nbeta = eval_core(x1) + beta;
            if (nbeta.is_nonzero() && nbeta.ord() <= beta.ord())
                throw precision_error("tame_roots: cluster translation made no progress");
            beta = nbeta;
        }
        throw precision_error("tame_roots: cluster recursion depth exceeded");
    }

    // Basis roots contributed by one polygon slope of the separable core:
    // valuation s, x-run from p^j1 to p^j2.
    void process_slope(const Rat& s, int j1, int j2) {
        // substituted valuation on the edge and the on-edge residue equation
        Rat w;
        bool have_w = false;
        long long pw = 1;
        std::vector<std::pair<int, FFElem>> cs;
        for (int j = 0; j <= m; ++j) {
            const LSeries& bj = b[static_cast<size_t>(j)];
            if (bj.is_nonzero()) {
                Rat line = Rat(Int(bj.ord()), Int(cur.e)) + s * Rat(pw);
                if (!have_w || line < w) { w = line; have_w = true; }
            }
            pw *= p;
        }
        if (!have_w) throw precision_error("tame_roots: slope without finite coefficients");
        pw = 1;
        for (int j = 0; j <= m; ++j) {
            const LSeries& bj = b[static_cast<size_t>(j)];
            if (bj.is_nonzero()) {
                Rat line = Rat(Int(bj.ord()), Int(cur.e)) + s * Rat(pw);
                if (line == w) {
                    if (j < j1 || j > j2)
                        throw precision_error("tame_roots: edge support off its p-power range");
                    cs.push_back({j, bj.coeff(bj.ord())});
                }
            } else if (bj.is_zero_to_prec()) {
                Rat line = Rat(Int(bj.known_end()), Int(cur.e)) + s * Rat(pw);
                if (line == w)
                    throw precision_error("tame_roots: residue coefficient hidden by precision");
            }
            pw *= p;
        }
        // S(Y) = sum sigma_l Y^(p^l) with sigma_l = (edge coeff at j1+l)^(p^-j1)
        std::vector<std::pair<int, FFElem>> sig;
        for (const auto& [j, cf] : cs) sig.push_back({j - j1, cf.frobenius(-j1)});
        long long target = pow_ll_checked(p, j2 - j1, "tame_roots");
        std::vector<FFElem> ys = residue_roots(sig, FFElem::zero(cur.k), target);

        FpSpan span(p);
        std::vector<FFElem> gammas;
        for (const auto& y : ys) {
            if (y.is_zero()) continue;
            if (span.add(y.coeffs())) gammas.push_back(y);
            if (static_cast<int>(gammas.size()) == j2 - j1) break;
        }
        if (static_cast<int>(gammas.size()) != j2 - j1)
            throw precision_error("tame_roots: residue kernel short of its dimension");

        for (auto gamma : gammas) {
            if (gamma.field() != cur.k) gamma = ff_embed(gamma, cur.k);
            long long ev = rat_num_ll(s * Rat(cur.e));
            LSeries x0 = LSeries::monomial(cur, ev, gamma);
            LSeries beta = eval_core(x0);
            LSeries root = x0;
            if (beta.is_nonzero()) {
                LSeries wfix = solve_affine(beta, s);
                if (x0.ctx() != cur) x0 = x0.extended(cur);
                root = x0 + wfix;
            } else if (beta.is_zero_to_prec()) {
                long long drop = b[0].is_nonzero() ? b[0].ord() : 0;
                root = x0.truncated(beta.known_end() - drop);
            }
            basis.push_back(root);
        }
    }

    static int logp_exact(long long x, long p) {
        int j = 0;
        while (x > 1) {
            if (x % p != 0) throw precision_error("tame_roots: polygon break off the p-power lattice");
            x /= p;
            ++j;
        }
        return j;
    }

    LSeries pth_root(const LSeries& x, int k) const {
        long long pk = pow_ll_checked(p, k, "tame_roots");
        if (x.is_exact_zero()) return x;
        long long nend = (x.known_end() >= 0) ? (x.known_end() + pk - 1) / pk
                                              : x.known_end() / pk;
        if (x.is_zero_to_prec()) return LSeries::zero_to_prec(cur, nend);
        std::vector<std::pair<long long, FFElem>> ts;
        for (const auto& [e, cf] : x.terms()) {
            if (((e % pk) + pk) % pk != 0)
                throw wild_error("tame_roots: inseparable layer is wildly ramified");
            ts.push_back({e / pk, cf.frobenius(-k)});
        }
        return LSeries::from_terms(cur, ts).truncated(nend);
    }

    TameRootSystem solve() {
        RootValuations rv = np_root_valuations(core_poly_with(LSeries::zero(cur)));
        // precondition: slope denominators of P itself prime to p
        long long p_i0 = pow_ll_checked(p, i0, "tame_roots");
        long long eT = base.e;
        for (const auto& [v, len] : rv.vals) {
            Rat vP = v / Rat(p_i0);
            if (rat_den_ll(vP * Rat(base.e)) % p == 0)
                throw wild_error("tame_roots: slope " + vP.str() +
                                 " has denominator divisible by p");
            eT = lcm_ll(eT, rat_den_ll(v));
        }
        grow_e(eT);
        ensure_mu(eT / base.e);

        long long x_start = 1;
        std::vector<std::pair<Rat, long long>> slopes(rv.vals);
        for (const auto& [v, len] : slopes) {
            int j1 = logp_exact(x_start, p);
            int j2 = logp_exact(x_start + len, p);
            process_slope(v, j1, j2);
            x_start += len;
        }
        if (static_cast<int>(basis.size()) != m)
            throw precision_error("tame_roots: basis dimension mismatch");

        ensure_mu(cur.e / base.e);  // solve_affine may have grown e further

        // span all p^m roots, fold the inseparable layer, verify
        long long total = pow_ll_checked(p, m, "tame_roots");
        charge(total * (m + 1));
        std::vector<LSeries> roots;
        roots.reserve(static_cast<size_t>(total));
        for (long long idx = 0; idx < total; ++idx) {
            LSeries r = LSeries::zero(cur);
            long long t = idx;
            for (int k = 0; k < m; ++k) {
                long long digit = t % p;
                t /= p;
                if (digit != 0) r = r + basis[static_cast<size_t>(k)].scaled_int(digit);
            }
            roots.push_back(i0 > 0 ? pth_root(r, i0) : r);
        }

        std::vector<LSeries> pa;
        pa.reserve(b.size());  // full P in the final context for verification
        // reconstruct P's coefficient list: zeros below i0, then the core
        for (int i = 0; i < i0; ++i) pa.push_back(LSeries::zero(cur));
        for (int j = 0; j < m; ++j) pa.push_back(b[static_cast<size_t>(j)]);
        AdditivePoly Pfull(cur, std::move(pa));
        for (const auto& r : roots)
            if (Pfull.eval(r).is_nonzero())
                throw precision_error("tame_roots: root verification failed");

        long long rel_e = cur.e / base.e;
        FFElem zeta = FFElem::one(cur.k);
        if (rel_e > 1) {
            FFElem g = ff_primitive(cur.k);
            zeta = g.pow((cur.k.q() - 1) / rel_e);
        }

        std::sort(roots.begin(), roots.end(), [](const LSeries& x, const LSeries& y) {
            bool zx = !x.is_nonzero(), zy = !y.is_nonzero();
            if (zx != zy) return zx;
            if (zx) return false;
            Rat vx(Int(x.ord()), Int(x.ctx().e)), vy(Int(y.ord()), Int(y.ctx().e));
            if (vx != vy) return vx < vy;
            auto tx = x.terms(), ty = y.terms();
            for (size_t i = 0; i < tx.size() && i < ty.size(); ++i) {
                if (tx[i].first != ty[i].first) return tx[i].first < ty[i].first;
                if (tx[i].second.value() != ty[i].second.value())
                    return tx[i].second.value() < ty[i].second.value();
            }
            return tx.size() < ty.size();
        });

        TameRootSystem T;
        T.ctx = cur;
        T.roots = std::move(roots);
        T.zeta = zeta;
        T.rel_e = rel_e;
        T.i0 = i0;
        T.multiplicity = p_i0;
        T.dim = m;
        return T;
    }
};

}  // namespace detail

inline TameRootSystem tame_roots(const AdditivePoly& P, int ext_bound = 8,
                                 long long budget = 10000000) {
    detail::TameSolver solver(P, ext_bound, budget);
    return solver.solve();
}

// ---------------------------------------------------------------------------
// The tame generator theta: u -> zeta u, as a matrix on the root space.

inline LSeries theta_apply(const LSeries& x, const FFElem& zeta) {
    if (!x.is_nonzero()) return x;
    std::vector<std::pair<long long, FFElem>> ts;
    for (const auto& [e, cf] : x.terms()) ts.push_back({e, cf * zeta.pow(e)});
    return LSeries::from_terms(x.ctx(), ts).truncated(x.known_end());
}

struct TameGenerator {
    SigmaMat<FFElem> mat;  // over F_p, size = dim of the root space
    long long order = 1;
    FFElem zeta;
    long long rel_e = 1;
};

inline TameGenerator tame_generator_matrix(const TameRootSystem& T, long long min_overlap = 8) {
    long p = T.ctx.k.p();
    int mdim = T.dim;
    FieldDesc Fp = ff_make(p, 1);

    std::vector<LSeries> nz;
    for (const auto& r : T.roots)
        if (r.is_nonzero()) nz.push_back(r);

    long long total = detail::pow_ll_checked(p, mdim, "tame_generator_matrix");
    auto combo = [&](const std::vector<LSeries>& bs, long long idx) {
        LSeries r = LSeries::zero(T.ctx);
        long long t = idx;
        for (size_t k = 0; k < bs.size(); ++k) {
            long long digit = t % p;
            t /= p;
            if (digit != 0) r = r + bs[k].scaled_int(digit);
        }
        return r;
    };

    // greedy F_p-basis in canonical root order
    std::vector<LSeries> bs;
    for (const auto& r : nz) {
        if (static_cast<int>(bs.size()) == mdim) break;
        bool dep = false;
        long long cnt = 1;
        for (size_t k = 0; k < bs.size(); ++k) cnt *= p;
        for (long long idx = 0; idx < cnt && !dep; ++idx)
            if (ls_agree(r, combo(bs, idx), min_overlap)) dep = true;
        if (!dep) bs.push_back(r);
    }
    if (static_cast<int>(bs.size()) != mdim)
        throw precision_error("tame_generator_matrix: root set spans too little");

    TameGenerator G;
    G.zeta = T.zeta;
    G.rel_e = T.rel_e;
    G.mat = SigmaMat<FFElem>(Fp, mdim);
    for (int i = 0; i < mdim; ++i) {
        LSeries img = theta_apply(bs[static_cast<size_t>(i)], T.zeta);
        long long hit = -1;
        for (long long idx = 0; idx < total; ++idx) {
            if (ls_agree(img, combo(bs, idx), min_overlap)) {
                if (hit >= 0)
                    throw precision_error("tame_generator_matrix: ambiguous root match");
                hit = idx;
            }
        }
        if (hit < 0)
            throw precision_error("tame_generator_matrix: image of a root matches no root");
        long long t = hit;
        for (int k = 0; k < mdim; ++k) {
            G.mat.at(k, i) = FFElem::from_int(Fp, static_cast<long>(t % p));
            t /= p;
        }
    }

    SigmaMat<FFElem> acc = G.mat;
    for (long long k = 1; k <= T.rel_e; ++k) {
        bool ident = true;
        for (int i = 0; i < mdim && ident; ++i)
            for (int j = 0; j < mdim && ident; ++j)
                if ((i == j) ? !acc.at(i, j).is_one() : !acc.at(i, j).is_zero()) ident = false;
        if (ident) {
            G.order = k;
            return G;
        }
        acc = acc * G.mat;
    }
    throw precision_error("tame_generator_matrix: order does not divide e");
}

// ---------------------------------------------------------------------------
// Cartan membership over F_p.

struct CartanCheck {
    bool contained = false;   // F_p[M] is the field of size p^n
    bool generates = false;   // contained and ord(M) = p^n - 1
    long long order = 0;      // 0 when singular
    std::vector<int> min_poly;  // monic over F_p, ascending exponents
};

inline CartanCheck cartan_check(const SigmaMat<FFElem>& M) {
    const FieldDesc& F = M.ctx();
    if (F.deg() != 1) throw input_error("cartan_check: matrix must be over a prime field");
    long p = F.p();
    int n = M.size();
    if (n < 1) throw input_error("cartan_check: empty matrix");

    // minimal polynomial via row reduction of vectorized powers
    auto vec_of = [&](const SigmaMat<FFElem>& A) {
        std::vector<int> v(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                v[static_cast<size_t>(i) * n + j] = static_cast<int>(A.at(i, j).value());
        return v;
    };
    std::vector<std::vector<int>> rows, combos;
    SigmaMat<FFElem> pw = SigmaMat<FFElem>::identity(F, n);
    CartanCheck R;
    for (int d = 0; d <= n; ++d) {
        std::vector<int> v = vec_of(pw);
        std::vector<int> combo(static_cast<size_t>(n) + 1, 0);
        combo[static_cast<size_t>(d)] = 1;
        for (size_t r = 0; r < rows.size(); ++r) {
            size_t lead = 0;
            while (lead < rows[r].size() && rows[r][lead] == 0) ++lead;
            if (lead == rows[r].size()) continue;
            long f = (v[lead] * fpoly::inv_mod(rows[r][lead], p)) % p;
            if (f == 0) continue;
            for (size_t i = 0; i < v.size(); ++i) {
                long t = (v[i] - f * rows[r][i]) % p;
                if (t < 0) t += p;
                v[i] = static_cast<int>(t);
            }
            for (size_t i = 0; i < combo.size(); ++i) {
                long t = (combo[i] - f * combos[r][i]) % p;
                if (t < 0) t += p;
                combo[i] = static_cast<int>(t);
            }
        }
        bool zero = true;
        for (int t : v)
            if (t != 0) { zero = false; break; }
        if (zero) {
            std::vector<int> mp(combo.begin(), combo.begin() + d + 1);
            long inv = fpoly::inv_mod(mp.back(), p);
            for (auto& t : mp) t = static_cast<int>((t * inv) % p);
            R.min_poly = std::move(mp);
            break;
        }
        rows.push_back(v);
        combos.push_back(combo);
        pw = pw * M;
    }
    if (R.min_poly.empty()) throw input_error("cartan_check: no minimal polynomial found");

    int mdeg = static_cast<int>(R.min_poly.size()) - 1;
    R.contained = (mdeg == n) && R.min_poly.front() != 0 &&
                  detail::is_irreducible(R.min_poly, p);

    // order, when invertible
    std::vector<std::vector<FFElem>> rowsM;
    for (int i = 0; i < n; ++i) {
        std::vector<FFElem> row;
        for (int j = 0; j < n; ++j) row.push_back(M.at(i, j));
        rowsM.push_back(row);
    }
    if (ff_rank(rowsM) == n) {
        long long full = detail::pow_ll_checked(p, n, "cartan_check") - 1;
        SigmaMat<FFElem> acc = M;
        for (long long k = 1; k <= 1000000; ++k) {
            bool ident = true;
            for (int i = 0; i < n && ident; ++i)
                for (int j = 0; j < n && ident; ++j)
                    if ((i == j) ? !acc.at(i, j).is_one() : !acc.at(i, j).is_zero()) ident = false;
            if (ident) { R.order = k; break; }
            acc = acc * M;
        }
        if (R.order == 0) throw budget_error("cartan_check: order search exceeded its cap");
        R.generates = R.contained && (R.order == full);
    }
    return R;
}

// ---------------------------------------------------------------------------
// Ramification certificates from translated Newton polygons.

struct MonodromyCertificate {
    std::vector<std::pair<Rat, long long>> slopes;  // base polygon, valuation descending
    long long zero_roots = 0;
    std::vector<long long> ram_divisors;   // > 1, each divides e(L/K)
    long long ram_lcm = 1;
    bool tame = true;
    std::vector<long long> image_order_divisors;  // each divides |im rho|
    long long translates_examined = 0;
};

inline MonodromyCertificate monodromy_certificate(const AdditivePoly& P,
                                                  long long max_translates = 4096) {
    if (P.generic_i0() == P.c)
        throw input_error("monodromy_certificate: polynomial is purely inseparable");
    long p = P.p();
    long long e = P.ctx.e;
    SeriesPoly f = P.to_series_poly();
    MonodromyCertificate C;
    std::set<long long> divs;
    auto absorb = [&](const RootValuations& rv) {
        for (const auto& [v, len] : rv.vals) {
            long long d = rat_den_ll(v * Rat(e));
            if (d > 1) {
                divs.insert(d);
                if (d % p == 0) C.tame = false;
            }
        }
    };
    RootValuations rv0 = np_root_valuations(f);
    C.slopes = rv0.vals;
    C.zero_roots = rv0.zero_roots;
    absorb(rv0);
    for (long long val = 1; val < P.ctx.k.q() && C.translates_examined < max_translates; ++val) {
        FFElem alpha = FFElem::from_value(P.ctx.k, val);
        LSeries y = P.eval(LSeries::constant(P.ctx, alpha));
        ++C.translates_examined;
        if (!y.is_nonzero()) continue;  // alpha is a root, or beyond precision: no claim
        SeriesPoly g = f;
        g[0] = y;
        absorb(np_root_valuations(g));
    }
    C.ram_divisors.assign(divs.begin(), divs.end());
    for (long long d : C.ram_divisors) C.ram_lcm = lcm_ll(C.ram_lcm, d);
    C.image_order_divisors = C.ram_divisors;
    return C;
}

// ---------------------------------------------------------------------------
// Residue-constant witnesses for valuation-one translates.

struct WitnessResult {
    bool found = false;
    FFElem alpha;           // in the search field
    Rat value;              // v(P(alpha)) when found
    bool hasse_hypothesis_ok = false;  // v(a_1) is exactly 1
    long long examined = 0;
};

inline WitnessResult nonsplit_witness(const AdditivePoly& P, const FieldDesc& search) {
    if (search.p() != P.p() || search.deg() % P.ctx.k.deg() != 0)
        throw input_error("nonsplit_witness: search field does not contain the residue field");
    SeriesCtx sctx(search, P.ctx.e, P.ctx.prec);
    std::vector<LSeries> ca;
    ca.reserve(P.a.size());
    for (const auto& x : P.a) ca.push_back(x.extended(sctx));
    AdditivePoly Q(sctx, std::move(ca));
    WitnessResult W;
    W.alpha = FFElem::zero(search);
    {
        SeriesVal v0 = P.a.front().val();
        W.hasse_hypothesis_ok = v0.finite() && v0.v == Rat(1);
    }
    for (long long val = 1; val < search.q(); ++val) {
        FFElem alpha = FFElem::from_value(search, val);
        ++W.examined;
        SeriesVal v = Q.eval(LSeries::constant(sctx, alpha)).val();
        if (v.finite() && v.v == Rat(1)) {
            W.found = true;
            W.alpha = alpha;
            W.value = v.v;
            return W;
        }
    }
    return W;
}

// ---------------------------------------------------------------------------
// Valuation ladder of the Igusa-type tower.

struct IgusaTower {
    std::vector<Rat> levels;        // valuation of the level-i extension, i = 1..n
    long long ram_lower_bound = 1;  // lcm of the level denominators
};

inline IgusaTower igusa_tower(long p, const LSeries& a1, const FFElem& alpha, int n) {
    if (n < 1) throw input_error("igusa_tower: need at least one level");
    if (a1.ctx().k.p() != p) throw input_error("igusa_tower: characteristic mismatch");
    if (alpha.is_zero()) throw input_error("igusa_tower: alpha must be a unit");
    {
        SeriesVal v = a1.val();
        if (!v.finite() || v.v != Rat(1))
            throw input_error("igusa_tower: v(a_1) must be exactly 1");
    }
    if (static_cast<double>(n - 1) * std::log2(static_cast<double>(p)) > 40)
        throw input_error("igusa_tower: level count too large");

    IgusaTower T;
    Rat vprev;
    Int pk(1);  // p^(i-1)
    for (int i = 1; i <= n; ++i) {
        std::vector<NPPoint> pts;
        if (i == 1) {
            pts.push_back({1, Rat(1)});
            pts.push_back({static_cast<long long>(p), Rat(0)});
        } else {
            pts.push_back({0, vprev});
            pts.push_back({1, Rat(pk, Int(1))});
            pts.push_back({static_cast<long long>(p), Rat(0)});
        }
        NewtonPolygon np = np_hull(pts);
        if (np.slopes.empty()) throw input_error("igusa_tower: degenerate polygon");
        Rat v = -np.slopes.front().slope;
        T.levels.push_back(v);
        vprev = v;
        pk *= Int(p);
    }
    for (const Rat& v : T.levels) T.ram_lower_bound = lcm_ll(T.ram_lower_bound, rat_den_ll(v));
    return T;
}

}  // namespace hwbt
