#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "hwbt/errors.hpp"
#include "hwbt/ff.hpp"
#include "hwbt/rational.hpp"

// Finite-level congruence subgroup checks: exhaustive closures in
// GL_n(Z/p^m), the non-split Cartan generator, the mirabolic-times-Cartan
// counting identity, and the graded lifting criterion that promotes mod-p
// surjectivity to surjectivity mod p^{m+1}.

namespace hwbt {

namespace detail {

inline bool is_prime_ll(long long p) {
    if (p < 2) return false;
    for (long long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// det mod p of an n x n integer matrix, by elimination over F_p
inline long long det_mod_p(int n, long long p, std::vector<long long> a) {
    long long det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n && piv < 0; ++r)
            if (a[static_cast<size_t>(r) * n + col] % p != 0) piv = r;
        if (piv < 0) return 0;
        if (piv != col) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<size_t>(piv) * n + j], a[static_cast<size_t>(col) * n + j]);
            det = p - det;
        }
        long long d = ((a[static_cast<size_t>(col) * n + col] % p) + p) % p;
        det = det * d % p;
        long long inv = 1;  // d^(p-2) mod p
        for (long long e = p - 2, b = d; e > 0; e >>= 1, b = b * b % p)
            if (e & 1) inv = inv * b % p;
        for (int r = col + 1; r < n; ++r) {
            long long f = ((a[static_cast<size_t>(r) * n + col] % p) + p) % p * inv % p;
            if (f == 0) continue;
            for (int j = col; j < n; ++j) {
                long long& x = a[static_cast<size_t>(r) * n + j];
                x = ((x - f * a[static_cast<size_t>(col) * n + j]) % p + p) % p;
            }
        }
    }
    return det % p;
}

}  // namespace detail

struct ModMatrix {
    int n = 0;
    long long p = 0;
    int m = 0;
    long long q = 0;  // p^m
    std::vector<long long> a;  // row-major, entries reduced into [0,q)

    ModMatrix(int n_, long long p_, int m_, std::vector<long long> entries)
        : n(n_), p(p_), m(m_), a(std::move(entries)) {
        if (n < 1) throw input_error("ModMatrix: need n >= 1");
        if (!detail::is_prime_ll(p)) throw input_error("ModMatrix: p must be prime");
        if (m < 1) throw input_error("ModMatrix: need m >= 1");
        q = 1;
        for (int i = 0; i < m; ++i) {
            q *= p;
            if (q > (1LL << 28)) throw input_error("ModMatrix: modulus p^m too large");
        }
        if (a.size() != static_cast<size_t>(n) * n)
            throw input_error("ModMatrix: need n*n entries");
        for (long long& x : a) x = (x % q + q) % q;
        if (detail::det_mod_p(n, p, a) == 0)
            throw input_error("ModMatrix: determinant must be a unit mod p");
    }

    static ModMatrix identity(int n, long long p, int m) {
        std::vector<long long> e(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i) e[static_cast<size_t>(i) * n + i] = 1;
        return ModMatrix(n, p, m, std::move(e));
    }

    long long entry(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    bool same_shape(const ModMatrix& o) const { return n == o.n && p == o.p && m == o.m; }

    ModMatrix operator*(const ModMatrix& o) const {
        if (!same_shape(o)) throw input_error("ModMatrix: shape mismatch in product");
        std::vector<long long> c(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                long long aik = entry(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < n; ++j)
                    c[static_cast<size_t>(i) * n + j] =
                        (c[static_cast<size_t>(i) * n + j] + aik * o.entry(k, j)) % q;
            }
        return ModMatrix(n, p, m, std::move(c));
    }

    // The same residue classes at another level: reduction when new_m < m,
    // the canonical-representative lift when new_m > m.
    ModMatrix at_level(int new_m) const { return ModMatrix(n, p, new_m, a); }

    bool is_identity() const {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (entry(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    bool operator==(const ModMatrix& o) const { return same_shape(o) && a == o.a; }
    bool operator!=(const ModMatrix& o) const { return !(*this == o); }
};

// Multiplicative order, by iteration.
inline long long mod_order(const ModMatrix& g, long long cap = 10000000) {
    ModMatrix w = g;
    for (long long k = 1; k <= cap; ++k) {
        if (w.is_identity()) return k;
        w = w * g;
    }
    throw budget_error("mod_order: order exceeds cap");
}

struct SubgroupClosure {
    std::vector<ModMatrix> generators;
    std::vector<ModMatrix> elements;  // sorted by entry vector
    long long order = 0;

    bool contains(const ModMatrix& g) const {
        return std::binary_search(
            elements.begin(), elements.end(), g,
            [](const ModMatrix& x, const ModMatrix& y) { return x.a < y.a; });
    }
};

// Exhaustive product closure of a finite generator set.  In a finite ambient
// group the generated monoid is the generated group, so products alone give
// closure under inverse and containment of the identity.
inline SubgroupClosure closure(const std::vector<ModMatrix>& gens,
                               long long budget = 10000000) {
    if (gens.empty()) throw input_error("closure: need at least one generator");
    for (const ModMatrix& g : gens)
        if (!g.same_shape(gens.front())) throw input_error("closure: mixed shapes");

    std::set<std::vector<long long>> seen;
    std::vector<ModMatrix> frontier;
    ModMatrix id = ModMatrix::identity(gens.front().n, gens.front().p, gens.front().m);
    seen.insert(id.a);
    frontier.push_back(id);
    while (!frontier.empty()) {
        std::vector<ModMatrix> next;
        for (const ModMatrix& cur : frontier)
            for (const ModMatrix& g : gens) {
                ModMatrix w = cur * g;
                if (seen.insert(w.a).second) {
                    if (static_cast<long long>(seen.size()) > budget)
                        throw budget_error("closure: element budget exceeded");
                    next.push_back(std::move(w));
                }
            }
        frontier = std::move(next);
    }

    SubgroupClosure out;
    out.generators = gens;
    for (const std::vector<long long>& key : seen)
        out.elements.push_back(ModMatrix(id.n, id.p, id.m, key));
    out.order = static_cast<long long>(out.elements.size());
    return out;
}

// |GL_n(Z/p^m)| = p^{n^2 (m-1)} * prod_{i=0}^{n-1} (p^n - p^i)
inline Int gl_order(int n, long long p, int m) {
    if (n < 1 || m < 1 || !detail::is_prime_ll(p))
        throw input_error("gl_order: need n >= 1, m >= 1, p prime");
    Int q = boost::multiprecision::pow(Int(p), static_cast<unsigned>(n));
    Int res = boost::multiprecision::pow(
        Int(p), static_cast<unsigned>(static_cast<long long>(n) * n * (m - 1)));
    Int pi = 1;
    for (int i = 0; i < n; ++i) {
        res *= q - pi;
        pi *= p;
    }
    return res;
}

// Multiplication by a primitive element of F_{p^n} on the power basis of the
// field representation; a generator of a non-split Cartan subgroup, of
// multiplicative order p^n - 1.
inline ModMatrix nonsplit_cartan_gen(int n, long long p) {
    if (n < 1) throw input_error("nonsplit_cartan_gen: need n >= 1");
    FieldDesc F = ff_make(p, n);
    FFElem g = ff_primitive(F);
    std::vector<long long> a(static_cast<size_t>(n) * n, 0);
    for (int j = 0; j < n; ++j) {
        // basis element x^j has value p^j in the digit encoding
        long long bj = 1;
        for (int i = 0; i < j; ++i) bj *= p;
        long long v = (g * FFElem::from_value(F, bj)).value();
        for (int i = 0; i < n; ++i) {
            a[static_cast<size_t>(i) * n + j] = v % p;
            v /= p;
        }
    }
    return ModMatrix(n, p, 1, std::move(a));
}

// All matrices [[A, b], [0, 1]] with A in GL_{n-1}(F_p), b in F_p^{n-1},
// as n x n matrices mod p.
inline std::vector<ModMatrix> mirabolic_subgroup(int n, long long p) {
    if (n < 1) throw input_error("mirabolic_subgroup: need n >= 1");
    if (!detail::is_prime_ll(p)) throw input_error("mirabolic_subgroup: p must be prime");
    int k = n - 1;
    std::vector<ModMatrix> out;
    std::vector<long long> blk(static_cast<size_t>(k) * k, 0);
    auto emit_with_translations = [&]() {
        std::vector<long long> b(static_cast<size_t>(k), 0);
        while (true) {
            std::vector<long long> a(static_cast<size_t>(n) * n, 0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    a[static_cast<size_t>(i) * n + j] = blk[static_cast<size_t>(i) * k + j];
            for (int i = 0; i < k; ++i) a[static_cast<size_t>(i) * n + k] = b[static_cast<size_t>(i)];
            a[static_cast<size_t>(k) * n + k] = 1;
            out.push_back(ModMatrix(n, p, 1, std::move(a)));
            int pos = 0;
            while (pos < k && b[static_cast<size_t>(pos)] == p - 1) b[static_cast<size_t>(pos++)] = 0;
            if (pos == k) break;
            ++b[static_cast<size_t>(pos)];
        }
    };
    while (true) {
        if (k == 0 || detail::det_mod_p(k, p, blk) != 0) emit_with_translations();
        int pos = 0;
        while (pos < k * k && blk[static_cast<size_t>(pos)] == p - 1) blk[static_cast<size_t>(pos++)] = 0;
        if (pos == k * k) break;
        ++blk[static_cast<size_t>(pos)];
    }
    return out;
}

struct Lemma65Report {
    int n = 0;
    long long p = 0;
    Int order_gl = 0;
    long long order_h = 0;
    long long order_c = 0;
    long long order_closure = 0;
    bool counting_ok = false;          // |GL_n(F_p)| = |H| * |C|
    bool trivial_intersection = false; // H meets C in the identity only
    bool generates = false;            // <H union C> = GL_n(F_p)
};

inline Lemma65Report check_lemma65(int n, long long p, long long budget = 10000000) {
    Lemma65Report rep;
    rep.n = n;
    rep.p = p;
    rep.order_gl = gl_order(n, p, 1);
    if (rep.order_gl > budget) throw budget_error("check_lemma65: group exceeds budget");

    std::vector<ModMatrix> H = mirabolic_subgroup(n, p);
    ModMatrix cg = nonsplit_cartan_gen(n, p);
    std::vector<ModMatrix> C;
    ModMatrix w = ModMatrix::identity(n, p, 1);
    do {
        C.push_back(w);
        w = w * cg;
    } while (!w.is_identity());

    rep.order_h = static_cast<long long>(H.size());
    rep.order_c = static_cast<long long>(C.size());
    rep.counting_ok = rep.order_gl == Int(rep.order_h) * rep.order_c;

    std::set<std::vector<long long>> hkeys;
    for (const ModMatrix& h : H) hkeys.insert(h.a);
    int common = 0;
    for (const ModMatrix& x : C)
        if (hkeys.count(x.a)) ++common;
    rep.trivial_intersection = common == 1;  // identity lies in both

    std::vector<ModMatrix> gens = H;
    gens.push_back(cg);
    SubgroupClosure G = closure(gens, budget);
    rep.order_closure = G.order;
    rep.generates = Int(G.order) == rep.order_gl;
    return rep;
}

struct Lemma63Report {
    int n = 0;
    long long p = 0;
    int m_max = 0;
    long long order_closure = 0;
    Int order_full = 0;                // |GL_n(Z/p^{m_max+1})|
    bool condition_i = false;          // reduction mod p is all of GL_n(F_p)
    std::vector<bool> condition_ii;    // one entry per 1 <= m <= m_max
    bool conditions_hold = false;
    bool conclusion = false;           // closure is all of GL_n(Z/p^{m_max+1})
};

namespace detail {

// g = 1 + p^m E with E congruent to diag(x,0,...,0) mod p, x nonzero
inline bool lemma63_witness(const ModMatrix& g, int mm) {
    long long pmm = 1;
    for (int i = 0; i < mm; ++i) pmm *= g.p;
    long long pmm1 = pmm * g.p;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            long long diff = (g.entry(i, j) - (i == j ? 1 : 0)) % pmm1;
            diff = (diff + pmm1) % pmm1;
            if (diff % pmm != 0) return false;
            long long e = diff / pmm;  // in [0, p)
            if (i == 0 && j == 0) {
                if (e == 0) return false;
            } else if (e != 0) {
                return false;
            }
        }
    return true;
}

}  // namespace detail

// Generators live at level m_max + 1.  Checks mod-p fullness, the graded
// witness condition at each intermediate level, and whether the closure is
// everything; all three are reported so the implication stays visible.
inline Lemma63Report check_lemma63(const std::vector<ModMatrix>& gens,
                                   long long budget = 10000000) {
    if (gens.empty()) throw input_error("check_lemma63: need at least one generator");
    const ModMatrix& g0 = gens.front();
    if (g0.m < 2) throw input_error("check_lemma63: generators must live mod p^2 or deeper");

    Lemma63Report rep;
    rep.n = g0.n;
    rep.p = g0.p;
    rep.m_max = g0.m - 1;
    rep.order_full = gl_order(rep.n, rep.p, g0.m);

    SubgroupClosure G = closure(gens, budget);
    rep.order_closure = G.order;

    std::set<std::vector<long long>> modp;
    for (const ModMatrix& g : G.elements) modp.insert(g.at_level(1).a);
    rep.condition_i = Int(static_cast<long long>(modp.size())) == gl_order(rep.n, rep.p, 1);

    rep.condition_ii.assign(static_cast<size_t>(rep.m_max), false);
    for (int mm = 1; mm <= rep.m_max; ++mm)
        for (const ModMatrix& g : G.elements)
            if (detail::lemma63_witness(g, mm)) {
                rep.condition_ii[static_cast<size_t>(mm) - 1] = true;
                break;
            }

    rep.conditions_hold = rep.condition_i;
    for (bool b : rep.condition_ii) rep.conditions_hold = rep.conditions_hold && b;
    rep.conclusion = Int(rep.order_closure) == rep.order_full;
    return rep;
}

}  // namespace hwbt
