#pragma once

// Runtime finite fields F_{p^n} with deterministic construction: the modulus
// is the lexicographically least monic irreducible of degree n over F_p,
// coefficients compared low-degree-first.  Elements are coefficient vectors
// in the basis {1, x, ..., x^{n-1}}; the element order used everywhere is the
// base-p integer value of that vector (little-endian).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hwbt/errors.hpp"

namespace hwbt {

namespace fpoly {

// Dense polynomials over F_p as int vectors, lowest degree first, normalized
// (no trailing zeros).  Only used for modulus construction and elimination.

inline void trim(std::vector<int>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const std::vector<int>& a) { return static_cast<int>(a.size()) - 1; }

inline std::vector<int> add(const std::vector<int>& a, const std::vector<int>& b, long p) {
    std::vector<int> r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        long v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        r[i] = static_cast<int>(v % p);
    }
    trim(r);
    return r;
}

inline std::vector<int> scale(const std::vector<int>& a, long s, long p) {
    s %= p;
    if (s < 0) s += p;
    std::vector<int> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<int>((a[i] * s) % p);
    trim(r);
    return r;
}

inline std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b, long p) {
    if (a.empty() || b.empty()) return {};
    std::vector<long> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + static_cast<long>(a[i]) * b[j]) % p;
    std::vector<int> r(acc.begin(), acc.end());
    trim(r);
    return r;
}

inline long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = a % p;
    if (nr < 0) nr += p;
    while (nr != 0) {
        long q = r / nr;
        long t2 = t - q * nt;
        t = nt;
        nt = t2;
        long r2 = r - q * nr;
        r = nr;
        nr = r2;
    }
    return t < 0 ? t + p : t;
}

// a mod m, destructive quotient discarded.
inline std::vector<int> rem(std::vector<int> a, const std::vector<int>& m, long p) {
    long lead_inv = inv_mod(m.back(), p);
    while (deg(a) >= deg(m)) {
        long c = (a.back() * lead_inv) % p;
        int shift = deg(a) - deg(m);
        for (size_t i = 0; i < m.size(); ++i) {
            long v = a[i + shift] - c * m[i];
            v %= p;
            if (v < 0) v += p;
            a[i + shift] = static_cast<int>(v);
        }
        trim(a);
        if (a.empty()) break;
    }
    return a;
}

inline std::vector<int> gcd(std::vector<int> a, std::vector<int> b, long p) {
    while (!b.empty()) {
        auto r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) a = scale(a, inv_mod(a.back(), p), p);
    return a;
}

}  // namespace fpoly

class FieldDesc;
class FFElem;

namespace detail {

struct FieldImpl {
    long p = 0;
    int deg = 0;
    std::vector<int> modulus;  // length deg+1, monic, lowest degree first
    long long q = 0;           // p^deg
    std::vector<std::pair<long long, int>> q1_factors;  // factorization of q-1
};

inline bool is_prime_long(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline std::vector<std::pair<long long, int>> factorize(long long n) {
    std::vector<std::pair<long long, int>> fs;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            fs.push_back({d, e});
        }
    }
    if (n > 1) fs.push_back({n, 1});
    return fs;
}

// Irreducible over F_p iff not divisible by any monic polynomial of degree
// 1..deg/2.  Trial division is plenty at the degrees this library meets.
inline bool is_irreducible(const std::vector<int>& f, long p) {
    int n = fpoly::deg(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    for (int d = 1; 2 * d <= n; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long v = 0; v < count; ++v) {
            std::vector<int> g(d + 1, 0);
            long long t = v;
            for (int i = 0; i < d; ++i) { g[i] = static_cast<int>(t % p); t /= p; }
            g[d] = 1;
            if (fpoly::rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

// Immutable descriptor of F_{p^deg}; cheap to copy, compared by value.
class FieldDesc {
  public:
    FieldDesc() = default;

    static FieldDesc make(long p, int n) {
        if (!detail::is_prime_long(p)) throw input_error("ff_make: p must be prime");
        if (n < 1) throw input_error("ff_make: degree must be >= 1");
        auto impl = std::make_shared<detail::FieldImpl>();
        impl->p = p;
        impl->deg = n;
        impl->q = 1;
        for (int i = 0; i < n; ++i) {
            if (impl->q > (1LL << 40)) throw input_error("ff_make: field too large");
            impl->q *= p;
        }
        // Lexicographically least monic irreducible, low-degree coefficients
        // most significant: odometer with the top coefficient fastest.
        std::vector<int> c(n, 0);
        for (;;) {
            std::vector<int> f(c);
            f.push_back(1);
            fpoly::trim(f);
            if (fpoly::deg(f) == n && detail::is_irreducible(f, p)) {
                impl->modulus = f;
                break;
            }
            int i = n - 1;
            while (i >= 0 && c[i] == p - 1) c[i--] = 0;
            if (i < 0) throw input_error("ff_make: no irreducible found");  // unreachable
            ++c[i];
        }
        impl->q1_factors = detail::factorize(impl->q - 1);
        FieldDesc F;
        F.impl_ = std::move(impl);
        return F;
    }

    long p() const { return impl_->p; }
    int deg() const { return impl_->deg; }
    long long q() const { return impl_->q; }
    const std::vector<int>& modulus() const { return impl_->modulus; }
    const std::vector<std::pair<long long, int>>& q1_factors() const { return impl_->q1_factors; }
    bool valid() const { return static_cast<bool>(impl_); }

    bool operator==(const FieldDesc& o) const {
        if (impl_ == o.impl_) return true;
        if (!impl_ || !o.impl_) return false;
        return impl_->p == o.impl_->p && impl_->deg == o.impl_->deg && impl_->modulus == o.impl_->modulus;
    }
    bool operator!=(const FieldDesc& o) const { return !(*this == o); }

  private:
    std::shared_ptr<const detail::FieldImpl> impl_;
};

class FFElem {
  public:
    FFElem() = default;
    FFElem(FieldDesc F, std::vector<int> coeffs) : F_(std::move(F)), c_(std::move(coeffs)) {
        if (static_cast<int>(c_.size()) != F_.deg()) throw input_error("FFElem: coefficient length != degree");
        for (int& v : c_) {
            v %= static_cast<int>(F_.p());
            if (v < 0) v += static_cast<int>(F_.p());
        }
    }

    static FFElem zero(const FieldDesc& F) { return FFElem(F, std::vector<int>(F.deg(), 0)); }
    static FFElem one(const FieldDesc& F) {
        std::vector<int> c(F.deg(), 0);
        c[0] = 1;
        return FFElem(F, std::move(c));
    }
    static FFElem from_int(const FieldDesc& F, long v) {
        std::vector<int> c(F.deg(), 0);
        v %= F.p();
        if (v < 0) v += F.p();
        c[0] = static_cast<int>(v);
        return FFElem(F, std::move(c));
    }
    // Element of given base-p integer value (the canonical element order).
    static FFElem from_value(const FieldDesc& F, long long v) {
        if (v < 0 || v >= F.q()) throw input_error("from_value: out of range");
        std::vector<int> c(F.deg(), 0);
        for (int i = 0; i < F.deg(); ++i) { c[i] = static_cast<int>(v % F.p()); v /= F.p(); }
        return FFElem(F, std::move(c));
    }

    const FieldDesc& field() const { return F_; }
    const std::vector<int>& coeffs() const { return c_; }

    long long value() const {
        long long v = 0;
        for (int i = F_.deg() - 1; i >= 0; --i) v = v * F_.p() + c_[i];
        return v;
    }

    bool is_zero() const {
        for (int v : c_)
            if (v != 0) return false;
        return true;
    }
    bool is_one() const { return value() == 1; }

    FFElem operator+(const FFElem& o) const {
        check(o);
        std::vector<int> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) r[i] = static_cast<int>((c_[i] + o.c_[i]) % F_.p());
        return raw(F_, std::move(r));
    }
    FFElem operator-(const FFElem& o) const {
        check(o);
        std::vector<int> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) {
            long v = (c_[i] - o.c_[i]) % F_.p();
            if (v < 0) v += F_.p();
            r[i] = static_cast<int>(v);
        }
        return raw(F_, std::move(r));
    }
    FFElem operator-() const { return zero(F_) - *this; }

    FFElem operator*(const FFElem& o) const {
        check(o);
        auto prod = fpoly::mul(trimmed(), o.trimmed(), F_.p());
        auto red = fpoly::rem(std::move(prod), F_.modulus(), F_.p());
        red.resize(F_.deg(), 0);
        return raw(F_, std::move(red));
    }

    FFElem inv() const {
        if (is_zero()) throw input_error("FFElem: inverse of zero");
        // Extended Euclid on (this, modulus).
        long p = F_.p();
        std::vector<int> r0 = F_.modulus(), r1 = trimmed();
        std::vector<int> s0 = {}, s1 = {1};
        while (!r1.empty()) {
            // r0 = q*r1 + r2 with synthetic division
            std::vector<int> q;
            std::vector<int> r = r0;
            long lead_inv = fpoly::inv_mod(r1.back(), p);
            while (fpoly::deg(r) >= fpoly::deg(r1)) {
                long cq = (r.back() * lead_inv) % p;
                int shift = fpoly::deg(r) - fpoly::deg(r1);
                if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, 0);
                q[shift] = static_cast<int>(cq);
                for (size_t i = 0; i < r1.size(); ++i) {
                    long v = r[i + shift] - cq * r1[i];
                    v %= p;
                    if (v < 0) v += p;
                    r[i + shift] = static_cast<int>(v);
                }
                fpoly::trim(r);
                if (r.empty()) break;
            }
            fpoly::trim(q);
            auto s2 = fpoly::add(s0, fpoly::scale(fpoly::mul(q, s1, p), p - 1, p), p);
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 = gcd (a nonzero constant); s0 * this == r0 mod modulus
        auto s = fpoly::scale(s0, fpoly::inv_mod(r0.empty() ? 1 : r0[0], p), p);
        s = fpoly::rem(std::move(s), F_.modulus(), p);
        s.resize(F_.deg(), 0);
        return raw(F_, std::move(s));
    }

    // x^e; for nonzero x the exponent is reduced mod q-1 so negative
    // exponents work.  0^e is 0 for e>0, 1 for e=0, error for e<0.
    FFElem pow(long long e) const {
        if (is_zero()) {
            if (e > 0) return zero(F_);
            if (e == 0) return one(F_);
            throw input_error("FFElem: negative power of zero");
        }
        long long m = F_.q() - 1;
        e %= m;
        if (e < 0) e += m;
        FFElem acc = one(F_);
        FFElem base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    // x^{p^k} (k may be any integer; Frobenius has order deg).
    FFElem frobenius(long k = 1) const {
        long n = F_.deg();
        k %= n;
        if (k < 0) k += n;
        if (k == 0 || is_zero()) return *this;
        long long e = 1;
        for (long i = 0; i < k; ++i) e *= F_.p();
        return pow(e);
    }

    // Multiplicative order; error on zero.
    long long mult_order() const {
        if (is_zero()) throw input_error("FFElem: order of zero");
        long long ord = F_.q() - 1;
        for (const auto& [l, e] : F_.q1_factors()) {
            for (int i = 0; i < e; ++i) {
                if (pow(ord / l).is_one()) ord /= l;
                else break;
            }
        }
        return ord;
    }

    bool operator==(const FFElem& o) const { return F_ == o.F_ && c_ == o.c_; }
    bool operator!=(const FFElem& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(c_[i]);
        }
        return s + "]";
    }

  private:
    static FFElem raw(const FieldDesc& F, std::vector<int> c) {
        FFElem x;
        x.F_ = F;
        x.c_ = std::move(c);
        return x;
    }
    void check(const FFElem& o) const {
        if (F_ != o.F_) throw input_error("FFElem: field mismatch");
    }
    std::vector<int> trimmed() const {
        std::vector<int> t = c_;
        fpoly::trim(t);
        return t;
    }

    FieldDesc F_;
    std::vector<int> c_;
};

inline FieldDesc ff_make(long p, int n) { return FieldDesc::make(p, n); }

// Least primitive element in the canonical element order.
inline FFElem ff_primitive(const FieldDesc& F) {
    for (long long v = 1; v < F.q(); ++v) {
        FFElem x = FFElem::from_value(F, v);
        if (x.mult_order() == F.q() - 1) return x;
    }
    throw input_error("ff_primitive: none found");  // unreachable
}

namespace detail {

// Root of `from`'s modulus inside `into` with least element value; memoized.
inline FFElem embedding_root(const FieldDesc& from, const FieldDesc& into) {
    struct Key {
        long p;
        std::vector<int> mf, mi;
        bool operator<(const Key& o) const { return std::tie(p, mf, mi) < std::tie(o.p, o.mf, o.mi); }
    };
    static std::map<Key, long long> cache;
    Key k{from.p(), from.modulus(), into.modulus()};
    auto it = cache.find(k);
    if (it == cache.end()) {
        long long found = -1;
        for (long long v = 0; v < into.q(); ++v) {
            FFElem x = FFElem::from_value(into, v);
            // Evaluate from.modulus at x by Horner.
            FFElem acc = FFElem::zero(into);
            const auto& m = from.modulus();
            for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i)
                acc = acc * x + FFElem::from_int(into, m[i]);
            if (acc.is_zero()) { found = v; break; }
        }
        if (found < 0) throw input_error("ff_embed: no root of source modulus in target");
        it = cache.emplace(k, found).first;
    }
    return FFElem::from_value(into, it->second);
}

}  // namespace detail

// Ring embedding F_{p^m} -> F_{p^n} for m | n, sending the source generator
// to the least root of the source modulus.  Fixes F_p pointwise.
inline FFElem ff_embed(const FFElem& x, const FieldDesc& into) {
    const FieldDesc& from = x.field();
    if (from == into) return x;
    if (from.p() != into.p()) throw input_error("ff_embed: characteristic mismatch");
    if (into.deg() % from.deg() != 0) throw input_error("ff_embed: source degree must divide target degree");
    FFElem rho = detail::embedding_root(from, into);
    FFElem acc = FFElem::zero(into);
    const auto& c = x.coeffs();
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        acc = acc * rho + FFElem::from_int(into, c[i]);
    return acc;
}

// Minimal polynomial of x over F_p, monic, lowest degree first.
inline std::vector<int> ff_min_poly(const FFElem& x) {
    const FieldDesc& F = x.field();
    long p = F.p();
    int n = F.deg();
    // Powers of x as rows; find the first linear dependency by elimination.
    std::vector<std::vector<int>> rows;     // reduced rows
    std::vector<std::vector<int>> combos;   // combo[i] expresses rows[i] in powers
    FFElem pw = FFElem::one(F);
    for (int d = 0; d <= n; ++d) {
        std::vector<int> v = pw.coeffs();
        std::vector<int> combo(n + 1, 0);
        combo[d] = 1;
        // reduce v against existing rows
        for (size_t r = 0; r < rows.size(); ++r) {
            int lead = -1;
            for (int i = 0; i < n; ++i)
                if (rows[r][i] != 0) { lead = i; break; }
            if (lead < 0) continue;
            long factor = (v[lead] * fpoly::inv_mod(rows[r][lead], p)) % p;
            if (factor == 0) continue;
            for (int i = 0; i < n; ++i) {
                long t = v[i] - factor * rows[r][i];
                t %= p;
                if (t < 0) t += p;
                v[i] = static_cast<int>(t);
            }
            for (int i = 0; i <= n; ++i) {
                long t = combo[i] - factor * combos[r][i];
                t %= p;
                if (t < 0) t += p;
                combo[i] = static_cast<int>(t);
            }
        }
        bool zero = true;
        for (int i = 0; i < n; ++i)
            if (v[i] != 0) { zero = false; break; }
        if (zero) {
            // combo gives the dependency: sum combo[i] x^i = 0, combo[d] = 1
            std::vector<int> mp(combo.begin(), combo.begin() + d + 1);
            long lead_inv = fpoly::inv_mod(mp.back(), p);
            for (int& t : mp) t = static_cast<int>((t * lead_inv) % p);
            return mp;
        }
        rows.push_back(v);
        combos.push_back(combo);
        pw = pw * x;
    }
    throw input_error("ff_min_poly: no dependency found");  // unreachable
}

}  // namespace hwbt
