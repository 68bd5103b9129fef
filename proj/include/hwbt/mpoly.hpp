#pragma once

// Multivariate polynomials over a finite field, truncated in total degree:
// k[t_1..t_m] modulo the span of monomials of total degree > cap.  Enough to
// carry universal deformation matrices (whose entries have degree <= 1) and
// the linear-part rank computations behind versality checks.

#include <map>
#include <sstream>
#include <vector>

#include "hwbt/errors.hpp"
#include "hwbt/ff.hpp"
#include "hwbt/series.hpp"

namespace hwbt {

struct MPolyCtx {
    FieldDesc k;
    int nvars = 0;
    int cap = 4;

    MPolyCtx() = default;
    MPolyCtx(FieldDesc kk, int nv, int c = 4) : k(std::move(kk)), nvars(nv), cap(c) {
        if (nv < 0) throw input_error("MPolyCtx: negative variable count");
        if (c < 0) throw input_error("MPolyCtx: negative degree cap");
    }
    bool operator==(const MPolyCtx& o) const { return k == o.k && nvars == o.nvars && cap == o.cap; }
    bool operator!=(const MPolyCtx& o) const { return !(*this == o); }
};

class MPoly {
  public:
    MPoly() = default;
    explicit MPoly(MPolyCtx ctx) : ctx_(std::move(ctx)) {}

    static MPoly zero(const MPolyCtx& ctx) { return MPoly(ctx); }
    static MPoly constant(const MPolyCtx& ctx, const FFElem& c) {
        MPoly r(ctx);
        if (!c.is_zero()) r.terms_[std::vector<int>(static_cast<size_t>(ctx.nvars), 0)] = c;
        return r;
    }
    static MPoly one(const MPolyCtx& ctx) { return constant(ctx, FFElem::one(ctx.k)); }
    static MPoly variable(const MPolyCtx& ctx, int i) {
        if (i < 0 || i >= ctx.nvars) throw input_error("MPoly::variable: index out of range");
        if (ctx.cap < 1) throw input_error("MPoly::variable: degree cap below 1");
        MPoly r(ctx);
        std::vector<int> e(static_cast<size_t>(ctx.nvars), 0);
        e[static_cast<size_t>(i)] = 1;
        r.terms_[std::move(e)] = FFElem::one(ctx.k);
        return r;
    }

    const MPolyCtx& ctx() const { return ctx_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::vector<int>, FFElem>& terms() const { return terms_; }

    FFElem coeff(const std::vector<int>& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? FFElem::zero(ctx_.k) : it->second;
    }
    FFElem constant_term() const { return coeff(std::vector<int>(static_cast<size_t>(ctx_.nvars), 0)); }
    // coefficient of t_i
    FFElem lin_coeff(int i) const {
        std::vector<int> e(static_cast<size_t>(ctx_.nvars), 0);
        e[static_cast<size_t>(i)] = 1;
        return coeff(e);
    }
    int total_degree() const {  // -1 for the zero polynomial
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, deg_of(e));
        return d;
    }

    MPoly operator+(const MPoly& o) const {
        check(o);
        MPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    MPoly operator-(const MPoly& o) const {
        check(o);
        MPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, FFElem::zero(ctx_.k) - c);
        return r;
    }
    MPoly operator*(const MPoly& o) const {
        check(o);
        MPoly r(ctx_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                std::vector<int> e(e1);
                for (size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
                if (deg_of(e) > ctx_.cap) continue;
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    MPoly scaled(const FFElem& c) const {
        MPoly r(ctx_);
        if (c.is_zero()) return r;
        for (const auto& [e, cc] : terms_) r.terms_[e] = cc * c;
        return r;
    }

    // x -> x^{p^k}; in characteristic p this raises coefficients to p^k and
    // multiplies exponents, dropping what leaves the truncation window.
    MPoly frobenius(long k = 1) const {
        if (k < 0) throw input_error("MPoly::frobenius: negative power");
        long long scale = 1;
        for (long i = 0; i < k; ++i) {
            scale *= ctx_.k.p();
            if (scale > 1000000) break;  // any exponent beyond the cap dies anyway
        }
        MPoly r(ctx_);
        for (const auto& [e, c] : terms_) {
            long long d = static_cast<long long>(deg_of(e)) * scale;
            if (d > ctx_.cap) continue;
            std::vector<int> ee(e);
            for (auto& x : ee) x = static_cast<int>(x * scale);
            r.add_term(ee, c.frobenius(k));
        }
        return r;
    }

    // Evaluate at series arguments.  Substituted values must be exactly zero
    // or have positive valuation.  Unless `exact` is set, the result carries
    // an unknown tail starting at (cap+1) * (least substituted valuation),
    // accounting for the monomials the truncation dropped.
    LSeries substitute(const SeriesCtx& sctx, const std::vector<LSeries>& args, bool exact = false) const {
        if (static_cast<int>(args.size()) != ctx_.nvars) throw input_error("MPoly::substitute: argument count");
        if (sctx.k != ctx_.k) throw input_error("MPoly::substitute: residue field mismatch");
        Rat vmin(0);
        bool have_nonzero = false;
        for (const auto& a : args) {
            if (a.is_exact_zero()) continue;
            if (!a.is_nonzero()) throw input_error("MPoly::substitute: argument of unknown valuation");
            Rat v = Rat(a.ord()) / sctx.e;
            if (!(v > Rat(0))) throw input_error("MPoly::substitute: arguments must have positive valuation");
            if (!have_nonzero || v < vmin) vmin = v;
            have_nonzero = true;
        }
        LSeries acc = LSeries::zero(sctx);
        for (const auto& [e, c] : terms_) {
            LSeries term = LSeries::constant(sctx, c);
            bool dead = false;
            for (size_t i = 0; i < e.size(); ++i) {
                for (int rep = 0; rep < e[i] && !dead; ++rep) {
                    if (args[i].is_exact_zero()) { dead = true; break; }
                    term = term * args[i];
                }
                if (dead) break;
            }
            if (!dead) acc = acc + term;
        }
        if (!exact && have_nonzero) {
            Rat tail = vmin * Rat(ctx_.cap + 1) * Rat(sctx.e);  // in exponent units
            long long bound = rat_num_ll(tail) / rat_den_ll(tail);
            acc = acc + LSeries::zero_to_prec(sctx, bound);
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            bool has_var = false;
            for (int x : e)
                if (x > 0) has_var = true;
            if (!has_var || !c.is_one()) os << c.value();
            bool star = !has_var || !c.is_one();
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (star) os << "*";
                star = true;
                os << "t" << (i + 1);
                if (e[i] > 1) os << "^" << e[i];
            }
        }
        return os.str();
    }

    bool operator==(const MPoly& o) const { return ctx_ == o.ctx_ && terms_ == o.terms_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

  private:
    static int deg_of(const std::vector<int>& e) {
        int d = 0;
        for (int x : e) d += x;
        return d;
    }
    void check(const MPoly& o) const {
        if (ctx_ != o.ctx_) throw input_error("MPoly: context mismatch");
    }
    void add_term(const std::vector<int>& e, const FFElem& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_[e] = c;
        } else {
            FFElem s = it->second + c;
            if (s.is_zero()) terms_.erase(it);
            else it->second = s;
        }
    }

    MPolyCtx ctx_;
    std::map<std::vector<int>, FFElem> terms_;
};

}  // namespace hwbt
