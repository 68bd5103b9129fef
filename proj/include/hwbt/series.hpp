#pragma once

// Truncated Laurent series over a finite residue field, uniformizer u with
// v(u) = 1/e.  Every value tracks what it actually knows:
//   - exact zero: only constructors assert it; the additive identity.
//   - zero-to-precision: all coefficients below a bound are known zero,
//     nothing is known beyond.  Distinct from exact zero.
//   - nonzero: exact valuation ord (leading coefficient nonzero) plus a
//     window of known coefficients [ord, ord+len); beyond is unknown.
// Operations combine windows conservatively; anything that would have to
// guess raises precision_error instead.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hwbt/errors.hpp"
#include "hwbt/ff.hpp"
#include "hwbt/rational.hpp"

namespace hwbt {

struct SeriesCtx {
    FieldDesc k;   // residue field
    int e = 1;     // ramification index: v(u) = 1/e
    int prec = 64; // coefficients are never tracked at exponents >= prec

    SeriesCtx() = default;
    SeriesCtx(FieldDesc field, int ram, int pr) : k(std::move(field)), e(ram), prec(pr) {
        if (e < 1) throw input_error("SeriesCtx: e must be >= 1");
        if (prec < 1) throw input_error("SeriesCtx: prec must be >= 1");
    }

    bool operator==(const SeriesCtx& o) const { return k == o.k && e == o.e && prec == o.prec; }
    bool operator!=(const SeriesCtx& o) const { return !(*this == o); }
};

struct SeriesVal {
    enum Kind { FINITE, ZERO_TO_PREC, EXACT_ZERO } kind = EXACT_ZERO;
    Rat v;      // valuation when FINITE
    Rat bound;  // for ZERO_TO_PREC: valuation is >= bound if the value is nonzero at all

    bool finite() const { return kind == FINITE; }
};

class LSeries {
  public:
    LSeries() = default;

    static LSeries zero(const SeriesCtx& ctx) {
        LSeries s(ctx);
        s.kind_ = EXACT_ZERO;
        return s;
    }
    static LSeries zero_to_prec(const SeriesCtx& ctx, long long bound) {
        LSeries s(ctx);
        s.kind_ = ZTP;
        s.end_ = std::min<long long>(bound, ctx.prec);
        if (s.end_ <= -ctx.prec) throw precision_error("LSeries: empty precision window");
        return s;
    }
    static LSeries monomial(const SeriesCtx& ctx, long long exp, const FFElem& c) {
        if (c.field() != ctx.k) throw input_error("LSeries: coefficient not in residue field");
        if (c.is_zero()) return zero(ctx);
        LSeries s(ctx);
        s.kind_ = NONZERO;
        s.ord_ = exp;
        s.end_ = ctx.prec;
        if (exp >= ctx.prec) return zero_to_prec(ctx, ctx.prec);
        s.coef_.assign(static_cast<size_t>(s.end_ - exp), FFElem::zero(ctx.k));
        s.coef_[0] = c;
        return s;
    }
    static LSeries constant(const SeriesCtx& ctx, const FFElem& c) { return monomial(ctx, 0, c); }
    static LSeries one(const SeriesCtx& ctx) { return constant(ctx, FFElem::one(ctx.k)); }
    static LSeries uniformizer(const SeriesCtx& ctx) { return monomial(ctx, 1, FFElem::one(ctx.k)); }
    // Exact finite expansion: sum of coeff * u^exp, known through ctx.prec.
    static LSeries from_terms(const SeriesCtx& ctx, const std::vector<std::pair<long long, FFElem>>& terms) {
        LSeries acc = zero(ctx);
        for (const auto& [e, c] : terms) acc = acc + monomial(ctx, e, c);
        return acc;
    }

    const SeriesCtx& ctx() const { return ctx_; }
    bool is_exact_zero() const { return kind_ == EXACT_ZERO; }
    bool is_zero_to_prec() const { return kind_ == ZTP; }
    bool is_nonzero() const { return kind_ == NONZERO; }

    // Exact valuation exponent; only meaningful for nonzero values.
    long long ord() const {
        if (kind_ != NONZERO) throw precision_error("LSeries: ord of a (to-precision) zero");
        return ord_;
    }
    // First exponent beyond the known window.
    long long known_end() const {
        if (kind_ == EXACT_ZERO) return ctx_.prec;
        return end_;
    }

    SeriesVal val() const {
        SeriesVal r;
        if (kind_ == EXACT_ZERO) {
            r.kind = SeriesVal::EXACT_ZERO;
        } else if (kind_ == ZTP) {
            r.kind = SeriesVal::ZERO_TO_PREC;
            r.bound = Rat(Int(end_), Int(ctx_.e));
        } else {
            r.kind = SeriesVal::FINITE;
            r.v = Rat(Int(ord_), Int(ctx_.e));
        }
        return r;
    }

    // Coefficient at an exponent, when determined.
    FFElem coeff(long long exp) const {
        if (kind_ == EXACT_ZERO) return FFElem::zero(ctx_.k);
        if (kind_ == ZTP) {
            if (exp < end_) return FFElem::zero(ctx_.k);
            throw precision_error("LSeries: coefficient beyond precision");
        }
        if (exp < ord_) return FFElem::zero(ctx_.k);
        if (exp >= end_) throw precision_error("LSeries: coefficient beyond precision");
        return coef_[static_cast<size_t>(exp - ord_)];
    }

    LSeries operator-() const {
        LSeries r = *this;
        for (auto& c : r.coef_) c = -c;
        return r;
    }

    LSeries operator+(const LSeries& o) const {
        check(o);
        if (kind_ == EXACT_ZERO) return o;
        if (o.kind_ == EXACT_ZERO) return *this;
        long long end = std::min(known_zero_end(), o.known_zero_end());
        long long lo = std::min(first_possible(), o.first_possible());
        return make_window(ctx_, lo, end, [&](long long i) { return coeff_in(i) + o.coeff_in(i); });
    }
    LSeries operator-(const LSeries& o) const { return *this + (-o); }

    LSeries operator*(const LSeries& o) const {
        check(o);
        if (kind_ == EXACT_ZERO || o.kind_ == EXACT_ZERO) return zero(ctx_);
        if (kind_ == ZTP || o.kind_ == ZTP) {
            long long b = first_possible() + o.first_possible();
            return zero_to_prec(ctx_, b);
        }
        long long lo = ord_ + o.ord_;
        long long end = std::min(ord_ + o.end_, o.ord_ + end_);
        end = std::min<long long>(end, ctx_.prec);
        if (lo >= ctx_.prec) return zero_to_prec(ctx_, ctx_.prec);
        std::vector<FFElem> c(static_cast<size_t>(end - lo), FFElem::zero(ctx_.k));
        for (size_t i = 0; i < coef_.size(); ++i) {
            if (coef_[i].is_zero()) continue;
            for (size_t j = 0; j < o.coef_.size(); ++j) {
                long long k = ord_ + static_cast<long long>(i) + o.ord_ + static_cast<long long>(j);
                if (k >= end) break;
                c[static_cast<size_t>(k - lo)] = c[static_cast<size_t>(k - lo)] + coef_[i] * o.coef_[j];
            }
        }
        LSeries r(ctx_);
        r.kind_ = NONZERO;
        r.ord_ = lo;
        r.end_ = end;
        r.coef_ = std::move(c);
        return r;  // leading coefficient is a product of nonzeros in a field
    }

    // Multiplication by a residue-field scalar.
    LSeries scaled(const FFElem& s) const {
        if (s.field() != ctx_.k) throw input_error("LSeries: scalar not in residue field");
        if (s.is_zero()) return zero(ctx_);
        if (kind_ != NONZERO) return *this;
        LSeries r = *this;
        for (auto& c : r.coef_) c = c * s;
        return r;
    }
    // Multiplication by an integer (exact zero when p divides it).
    LSeries scaled_int(long long n) const {
        long p = ctx_.k.p();
        long long m = n % p;
        if (m < 0) m += p;
        if (m == 0) return zero(ctx_);
        return scaled(FFElem::from_int(ctx_.k, m));
    }
    // Multiplication by u^k (exact).
    LSeries shifted(long long k) const {
        if (kind_ == EXACT_ZERO) return *this;
        LSeries r = *this;
        if (kind_ == ZTP) {
            r.end_ = std::min<long long>(end_ + k, ctx_.prec);
            return r;
        }
        r.ord_ += k;
        r.end_ = std::min<long long>(end_ + k, ctx_.prec);
        if (r.ord_ >= ctx_.prec) return zero_to_prec(ctx_, ctx_.prec);
        r.coef_.resize(static_cast<size_t>(r.end_ - r.ord_), FFElem::zero(ctx_.k));
        return r;
    }

    LSeries inv() const {
        if (kind_ == EXACT_ZERO) throw input_error("LSeries: division by exact zero");
        if (kind_ == ZTP) throw precision_error("LSeries: cannot invert a zero-to-precision value");
        long long rel = end_ - ord_;
        FFElem lead_inv = coef_[0].inv();
        std::vector<FFElem> b(static_cast<size_t>(rel), FFElem::zero(ctx_.k));
        b[0] = lead_inv;
        // (sum a_i u^i)(sum b_j u^j) = 1 termwise: b_k = -lead_inv * sum_{i>=1} a_i b_{k-i}
        for (long long k = 1; k < rel; ++k) {
            FFElem acc = FFElem::zero(ctx_.k);
            for (long long i = 1; i <= k; ++i) {
                const FFElem& ai = coef_[static_cast<size_t>(i)];
                if (!ai.is_zero()) acc = acc + ai * b[static_cast<size_t>(k - i)];
            }
            b[static_cast<size_t>(k)] = -(lead_inv * acc);
        }
        LSeries r(ctx_);
        r.kind_ = NONZERO;
        r.ord_ = -ord_;
        r.end_ = std::min<long long>(-ord_ + rel, ctx_.prec);
        if (r.end_ <= r.ord_) throw precision_error("LSeries: inverse has empty window");
        b.resize(static_cast<size_t>(r.end_ - r.ord_));
        r.coef_ = std::move(b);
        return r;
    }
    LSeries operator/(const LSeries& o) const { return *this * o.inv(); }

    // x -> x^{p^k}: coefficients to the p^k, exponents times p^k.
    LSeries frobenius(long k = 1) const {
        if (k < 0) throw input_error("LSeries: negative Frobenius power");
        if (kind_ == EXACT_ZERO || k == 0) return *this;
        long long pk = 1;
        for (long i = 0; i < k; ++i) pk *= ctx_.k.p();
        if (kind_ == ZTP) return zero_to_prec(ctx_, end_ * pk);
        LSeries r(ctx_);
        r.kind_ = NONZERO;
        r.ord_ = ord_ * pk;
        r.end_ = std::min<long long>(end_ * pk, ctx_.prec);
        if (r.ord_ >= ctx_.prec) return zero_to_prec(ctx_, ctx_.prec);
        r.coef_.assign(static_cast<size_t>(r.end_ - r.ord_), FFElem::zero(ctx_.k));
        for (size_t i = 0; i < coef_.size(); ++i) {
            long long exp = (ord_ + static_cast<long long>(i)) * pk;
            if (exp >= r.end_) break;
            r.coef_[static_cast<size_t>(exp - r.ord_)] = coef_[i].frobenius(k);
        }
        return r;
    }

    // Reinterpret in a context with e' = ratio * e (and possibly a larger
    // residue field): exponents scale by ratio, coefficients embed.
    LSeries extended(const SeriesCtx& nctx) const {
        if (nctx.e % ctx_.e != 0) throw input_error("LSeries: new e must be a multiple of old e");
        long long ratio = nctx.e / ctx_.e;
        if (kind_ == EXACT_ZERO) return zero(nctx);
        if (kind_ == ZTP) return zero_to_prec(nctx, end_ * ratio);
        LSeries r(nctx);
        r.kind_ = NONZERO;
        r.ord_ = ord_ * ratio;
        r.end_ = std::min<long long>(end_ * ratio, nctx.prec);
        if (r.ord_ >= nctx.prec) return zero_to_prec(nctx, nctx.prec);
        r.coef_.assign(static_cast<size_t>(r.end_ - r.ord_), FFElem::zero(nctx.k));
        for (size_t i = 0; i < coef_.size(); ++i) {
            long long exp = (ord_ + static_cast<long long>(i)) * ratio;
            if (exp >= r.end_) break;
            if (!coef_[i].is_zero()) r.coef_[static_cast<size_t>(exp - r.ord_)] = ff_embed(coef_[i], nctx.k);
        }
        return r;
    }

    // Restrict the known window to exponents < new_end.
    LSeries truncated(long long new_end) const {
        if (kind_ == EXACT_ZERO) return *this;
        long long end = std::min(known_zero_end(), new_end);
        if (end <= -ctx_.prec) throw precision_error("LSeries: empty precision window");
        if (kind_ == ZTP || ord_ >= end) {
            LSeries r(ctx_);
            r.kind_ = ZTP;
            r.end_ = end;
            return r;
        }
        LSeries r = *this;
        r.end_ = end;
        r.coef_.resize(static_cast<size_t>(end - ord_));
        return r;
    }

    // Known terms as (exponent, coefficient) pairs, zeros skipped.
    std::vector<std::pair<long long, FFElem>> terms() const {
        std::vector<std::pair<long long, FFElem>> t;
        if (kind_ != NONZERO) return t;
        for (size_t i = 0; i < coef_.size(); ++i)
            if (!coef_[i].is_zero()) t.push_back({ord_ + static_cast<long long>(i), coef_[i]});
        return t;
    }

    std::string str() const {
        if (kind_ == EXACT_ZERO) return "0";
        if (kind_ == ZTP) return "O(u^" + std::to_string(end_) + ")";
        std::string s;
        for (const auto& [e, c] : terms()) {
            if (!s.empty()) s += " + ";
            s += c.str() + "*u^" + std::to_string(e);
        }
        return s + " + O(u^" + std::to_string(end_) + ")";
    }

    bool same_ctx(const LSeries& o) const { return ctx_ == o.ctx_; }

  private:
    enum Kind { EXACT_ZERO, ZTP, NONZERO };

    explicit LSeries(SeriesCtx c) : ctx_(std::move(c)) {}

    void check(const LSeries& o) const {
        if (ctx_ != o.ctx_) throw input_error("LSeries: context mismatch");
    }
    // Exponent below which every coefficient is determined.
    long long known_zero_end() const { return kind_ == EXACT_ZERO ? ctx_.prec : end_; }
    // Least exponent at which a nonzero coefficient could occur.
    long long first_possible() const {
        if (kind_ == NONZERO) return ord_;
        return known_zero_end();
    }
    // Coefficient assuming i < known_zero_end().
    FFElem coeff_in(long long i) const {
        if (kind_ != NONZERO || i < ord_) return FFElem::zero(ctx_.k);
        size_t idx = static_cast<size_t>(i - ord_);
        return idx < coef_.size() ? coef_[idx] : FFElem::zero(ctx_.k);
    }
    static LSeries make_window(const SeriesCtx& ctx, long long lo, long long end,
                               const std::function<FFElem(long long)>& f) {
        end = std::min<long long>(end, ctx.prec);
        while (lo < end && f(lo).is_zero()) ++lo;
        if (lo >= end) {
            LSeries r(ctx);
            r.kind_ = ZTP;
            r.end_ = end;
            if (end <= -ctx.prec) throw precision_error("LSeries: empty precision window");
            return r;
        }
        LSeries r(ctx);
        r.kind_ = NONZERO;
        r.ord_ = lo;
        r.end_ = end;
        r.coef_.reserve(static_cast<size_t>(end - lo));
        for (long long i = lo; i < end; ++i) r.coef_.push_back(f(i));
        return r;
    }

    SeriesCtx ctx_;
    Kind kind_ = EXACT_ZERO;
    long long ord_ = 0;
    long long end_ = 0;
    std::vector<FFElem> coef_;
};

// Agreement on the shared known window; the basis for root matching.  For a
// nonzero pair, demands the difference vanish for at least min_overlap
// exponents past the leading term.
inline bool ls_agree(const LSeries& a, const LSeries& b, long long min_overlap = 1) {
    if (!a.same_ctx(b)) throw input_error("ls_agree: context mismatch");
    LSeries d = a - b;
    if (d.is_exact_zero()) return true;
    if (d.is_nonzero()) return false;
    if (!a.is_nonzero() && !b.is_nonzero()) return true;  // both zero as far as known
    long long lo = std::min(a.is_nonzero() ? a.ord() : d.known_end(), b.is_nonzero() ? b.ord() : d.known_end());
    return d.known_end() - lo >= min_overlap;
}

// ---- polynomials with series coefficients -------------------------------

using SeriesPoly = std::vector<LSeries>;  // index = degree in X

inline LSeries sp_eval(const SeriesPoly& f, const LSeries& x) {
    if (f.empty()) throw input_error("sp_eval: empty polynomial");
    LSeries acc = f.back();
    for (int i = static_cast<int>(f.size()) - 2; i >= 0; --i) acc = acc * x + f[static_cast<size_t>(i)];
    return acc;
}

inline SeriesPoly sp_derivative(const SeriesPoly& f) {
    SeriesPoly d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i].scaled_int(static_cast<long long>(i)));
    if (d.empty() && !f.empty()) d.push_back(LSeries::zero(f[0].ctx()));
    return d;
}

// Newton iteration from a start with v(f(x0)) > 2 v(f'(x0)).  Returns a root
// whose known window records genuine agreement with the true root.
inline LSeries hensel_lift(const SeriesPoly& f, const LSeries& x0) {
    if (f.empty()) throw input_error("hensel_lift: empty polynomial");
    SeriesPoly df = sp_derivative(f);
    LSeries x = x0;
    LSeries d0 = sp_eval(df, x);
    if (!d0.is_nonzero()) throw precision_error("hensel_lift: derivative at start is zero to precision");
    long long dord = d0.ord();
    {
        LSeries v0 = sp_eval(f, x);
        if (v0.is_nonzero() && v0.ord() <= 2 * dord)
            throw input_error("hensel_lift: start does not satisfy v(f(x0)) > 2 v(f'(x0))");
    }
    for (int iter = 0; iter < 200; ++iter) {
        LSeries fx = sp_eval(f, x);
        if (fx.is_exact_zero()) return x;
        if (fx.is_zero_to_prec()) {
            // A root to the achievable precision; the residual only tightens
            // the window, it cannot move the value.
            LSeries dfx = sp_eval(df, x);
            if (!dfx.is_nonzero()) return x;
            return x - fx * dfx.inv();
        }
        LSeries dfx = sp_eval(df, x);
        if (!dfx.is_nonzero()) throw precision_error("hensel_lift: derivative vanished to precision");
        LSeries corr = fx * dfx.inv();
        if (!corr.is_nonzero()) return x - corr;
        if (corr.ord() <= 0) throw precision_error("hensel_lift: iteration did not contract");
        x = x - corr;
    }
    throw precision_error("hensel_lift: no convergence within iteration limit");
}

}  // namespace hwbt
