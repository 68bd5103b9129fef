#pragma once

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hwbt/btgroup.hpp"
#include "hwbt/errors.hpp"
#include "hwbt/ff.hpp"
#include "hwbt/gltheory.hpp"
#include "hwbt/monodromy.hpp"
#include "hwbt/mpoly.hpp"
#include "hwbt/rational.hpp"
#include "hwbt/semilinear.hpp"
#include "hwbt/series.hpp"
#include "hwbt/strata.hpp"

// JSON encodings for every CLI-facing value, with field-path diagnostics on
// malformed input.  Parsers validate through the domain constructors, so a
// document that decodes is a value that satisfies the type's invariants.

namespace hwbt::jio {

using nlohmann::json;

// ---- access helpers ---------------------------------------------------------

inline const json& member(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw input_error(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw input_error(path + "." + key + ": missing");
    return *it;
}

inline bool has(const json& j, const char* key) { return j.is_object() && j.contains(key); }

inline long long as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw input_error(path + ": expected an integer");
    return j.get<long long>();
}

inline bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw input_error(path + ": expected a boolean");
    return j.get<bool>();
}

inline const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw input_error(path + ": expected an array");
    return j;
}

// ---- rationals --------------------------------------------------------------

inline json rat_to_json(const Rat& r) { return json::array({rat_num_ll(r), rat_den_ll(r)}); }

inline Rat rat_from_json(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    as_array(j, path);
    if (j.size() != 2) throw input_error(path + ": expected [numerator, denominator]");
    return Rat(Int(as_int(j[0], path + "[0]")), Int(as_int(j[1], path + "[1]")));
}

// valuation as a bare integer when integral, else [num, den]
inline json val_to_json(const Rat& r) {
    if (r.is_integer()) return json(rat_num_ll(r));
    return rat_to_json(r);
}

// ---- finite fields ----------------------------------------------------------

inline json field_to_json(const FieldDesc& F) {
    return json{{"p", F.p()}, {"deg", F.deg()}, {"modulus", F.modulus()}};
}

inline FieldDesc field_from_json(const json& j, const std::string& path) {
    long long p = as_int(member(j, "p", path), path + ".p");
    long long deg = has(j, "deg") ? as_int(member(j, "deg", path), path + ".deg") : 1;
    if (p < 2 || deg < 1) throw input_error(path + ": need p >= 2 and deg >= 1");
    FieldDesc F = ff_make(static_cast<long>(p), static_cast<int>(deg));
    if (has(j, "modulus")) {
        const json& mj = as_array(member(j, "modulus", path), path + ".modulus");
        std::vector<int> m;
        for (size_t i = 0; i < mj.size(); ++i)
            m.push_back(static_cast<int>(as_int(mj[i], path + ".modulus[" + std::to_string(i) + "]")));
        if (m != F.modulus())
            throw input_error(path + ".modulus: field construction is deterministic; expected " +
                              json(F.modulus()).dump());
    }
    return F;
}

// little-endian digit array over the power basis
inline json ff_to_json(const FFElem& x) { return json(x.coeffs()); }

inline FFElem ff_from_json(const FieldDesc& F, const json& j, const std::string& path) {
    if (j.is_number_integer()) {
        long long v = j.get<long long>();
        if (v < 0 || v >= F.q()) throw input_error(path + ": value out of range for the field");
        return FFElem::from_value(F, v);
    }
    as_array(j, path);
    if (static_cast<int>(j.size()) != F.deg())
        throw input_error(path + ": expected " + std::to_string(F.deg()) + " digits");
    long long v = 0, pw = 1;
    for (size_t i = 0; i < j.size(); ++i) {
        long long d = as_int(j[i], path + "[" + std::to_string(i) + "]");
        if (d < 0 || d >= F.p())
            throw input_error(path + "[" + std::to_string(i) + "]: digit out of range");
        v += d * pw;
        pw *= F.p();
    }
    return FFElem::from_value(F, v);
}

// ---- series -----------------------------------------------------------------

inline json ctx_to_json(const SeriesCtx& ctx) {
    return json{{"field", field_to_json(ctx.k)}, {"e", ctx.e}, {"prec", ctx.prec}};
}

inline SeriesCtx ctx_from_json(const json& j, const std::string& path, int default_prec = 64) {
    FieldDesc F = field_from_json(member(j, "field", path), path + ".field");
    int e = has(j, "e") ? static_cast<int>(as_int(member(j, "e", path), path + ".e")) : 1;
    int prec = has(j, "prec") ? static_cast<int>(as_int(member(j, "prec", path), path + ".prec"))
                              : default_prec;
    return SeriesCtx(F, e, prec);
}

inline json series_to_json(const LSeries& x) {
    json terms = json::array();
    for (const auto& [exp, cf] : x.terms()) terms.push_back(json::array({exp, ff_to_json(cf)}));
    const char* kind = x.is_exact_zero() ? "exact_zero" : (x.is_nonzero() ? "nonzero" : "zero_to_prec");
    return json{{"e", x.ctx().e},
                {"ord", x.is_nonzero() ? x.ord() : 0},
                {"prec", x.ctx().prec},
                {"known_end", x.is_exact_zero() ? json() : json(x.known_end())},
                {"kind", kind},
                {"terms", terms}};
}

inline LSeries series_from_json(const SeriesCtx& ctx, const json& j, const std::string& path) {
    if (!j.is_array() && has(j, "kind") && member(j, "kind", path) == "zero_to_prec") {
        long long ke = as_int(member(j, "known_end", path), path + ".known_end");
        return LSeries::zero_to_prec(ctx, ke);
    }
    const json* tj = nullptr;
    if (j.is_array()) {
        tj = &j;  // bare term list shorthand
    } else {
        tj = &as_array(member(j, "terms", path), path + ".terms");
    }
    std::vector<std::pair<long long, FFElem>> terms;
    for (size_t i = 0; i < tj->size(); ++i) {
        std::string tp = path + ".terms[" + std::to_string(i) + "]";
        const json& t = as_array((*tj)[i], tp);
        if (t.size() != 2) throw input_error(tp + ": expected [exponent, coefficient]");
        long long exp = as_int(t[0], tp + "[0]");
        terms.push_back({exp, ff_from_json(ctx.k, t[1], tp + "[1]")});
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < terms.size(); ++i)
        if (terms[i].first == terms[i - 1].first)
            throw input_error(path + ".terms: duplicate exponent " + std::to_string(terms[i].first));
    LSeries s = LSeries::from_terms(ctx, terms);
    if (!j.is_array() && has(j, "known_end") && member(j, "known_end", path).is_number_integer())
        s = s.truncated(as_int(member(j, "known_end", path), path + ".known_end"));
    return s;
}

inline json seriesval_to_json(const SeriesVal& v) {
    switch (v.kind) {
        case SeriesVal::FINITE: return val_to_json(v.v);
        case SeriesVal::ZERO_TO_PREC: return json();
        case SeriesVal::EXACT_ZERO: return json();
    }
    return json();
}

inline const char* seriesval_kind(const SeriesVal& v) {
    switch (v.kind) {
        case SeriesVal::FINITE: return "finite";
        case SeriesVal::ZERO_TO_PREC: return "zero_to_prec";
        case SeriesVal::EXACT_ZERO: return "exact_zero";
    }
    return "exact_zero";
}

// ---- semilinear matrices and descriptors --------------------------------------

inline json sigma_ls_to_json(const SigmaMat<LSeries>& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(series_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"base", ctx_to_json(m.ctx())}, {"size", m.size()}, {"entries", rows}};
}

inline SigmaMat<LSeries> sigma_ls_from_json(const json& j, const std::string& path,
                                            int default_prec = 64) {
    SeriesCtx ctx = ctx_from_json(member(j, "base", path), path + ".base", default_prec);
    int n = static_cast<int>(as_int(member(j, "size", path), path + ".size"));
    if (n < 1) throw input_error(path + ".size: expected a positive size");
    const json& rows = as_array(member(j, "entries", path), path + ".entries");
    if (static_cast<int>(rows.size()) != n) throw input_error(path + ".entries: expected size rows");
    SigmaMat<LSeries> m(ctx, n);
    for (int i = 0; i < n; ++i) {
        std::string rp = path + ".entries[" + std::to_string(i) + "]";
        const json& row = as_array(rows[static_cast<size_t>(i)], rp);
        if (static_cast<int>(row.size()) != n) throw input_error(rp + ": expected size entries");
        for (int k = 0; k < n; ++k)
            m.at(i, k) = series_from_json(ctx, row[static_cast<size_t>(k)],
                                          rp + "[" + std::to_string(k) + "]");
    }
    return m;
}

inline json btdesc_to_json(const BTDesc<LSeries>& g) {
    json j = sigma_ls_to_json(g.hw);
    j["c"] = g.codim;
    j["d"] = g.dim;
    return j;
}

inline BTDesc<LSeries> btdesc_from_json(const json& j, const std::string& path,
                                        int default_prec = 64) {
    SigmaMat<LSeries> m = sigma_ls_from_json(j, path, default_prec);
    int d = static_cast<int>(as_int(member(j, "d", path), path + ".d"));
    if (has(j, "c") && as_int(member(j, "c", path), path + ".c") != m.size())
        throw input_error(path + ".c: must equal the matrix size");
    return BTDesc<LSeries>(std::move(m), d);
}

// multivariate descriptor: entries are term lists [[coeff, [e_1..e_m]], ...]
inline BTDesc<MPoly> btdesc_mpoly_from_json(const json& j, const std::string& path) {
    const json& bj = member(j, "base", path);
    FieldDesc F = field_from_json(member(bj, "field", path + ".base"), path + ".base.field");
    int nvars = static_cast<int>(as_int(member(bj, "nvars", path + ".base"), path + ".base.nvars"));
    int cap = has(bj, "cap")
                  ? static_cast<int>(as_int(member(bj, "cap", path + ".base"), path + ".base.cap"))
                  : 4;
    MPolyCtx ctx(F, nvars, cap);
    int n = static_cast<int>(as_int(member(j, "size", path), path + ".size"));
    if (n < 1) throw input_error(path + ".size: expected a positive size");
    const json& rows = as_array(member(j, "entries", path), path + ".entries");
    if (static_cast<int>(rows.size()) != n) throw input_error(path + ".entries: expected size rows");
    SigmaMat<MPoly> m(ctx, n);
    for (int i = 0; i < n; ++i) {
        std::string rp = path + ".entries[" + std::to_string(i) + "]";
        const json& row = as_array(rows[static_cast<size_t>(i)], rp);
        if (static_cast<int>(row.size()) != n) throw input_error(rp + ": expected size entries");
        for (int k = 0; k < n; ++k) {
            std::string ep = rp + "[" + std::to_string(k) + "]";
            const json& terms = as_array(row[static_cast<size_t>(k)], ep);
            MPoly v = MPoly::zero(ctx);
            for (size_t ti = 0; ti < terms.size(); ++ti) {
                std::string tp = ep + "[" + std::to_string(ti) + "]";
                const json& t = as_array(terms[ti], tp);
                if (t.size() != 2) throw input_error(tp + ": expected [coeff, exponents]");
                FFElem cf = ff_from_json(F, t[0], tp + "[0]");
                const json& ej = as_array(t[1], tp + "[1]");
                if (static_cast<int>(ej.size()) != nvars)
                    throw input_error(tp + "[1]: expected one exponent per variable");
                MPoly mono = MPoly::constant(ctx, cf);
                for (int vi = 0; vi < nvars; ++vi) {
                    long long ev = as_int(ej[static_cast<size_t>(vi)],
                                          tp + "[1][" + std::to_string(vi) + "]");
                    if (ev < 0) throw input_error(tp + "[1]: negative exponent");
                    for (long long r = 0; r < ev; ++r) mono = mono * MPoly::variable(ctx, vi);
                }
                v = v + mono;
            }
            m.at(i, k) = std::move(v);
        }
    }
    int d = static_cast<int>(as_int(member(j, "d", path), path + ".d"));
    return BTDesc<MPoly>(std::move(m), d);
}

// ---- additive polynomials -----------------------------------------------------

inline json addpoly_to_json(const AdditivePoly& P) {
    json a = json::array();
    for (const LSeries& x : P.a) a.push_back(series_to_json(x));
    return json{{"ctx", ctx_to_json(P.ctx)}, {"c", P.c}, {"a", a}};
}

inline AdditivePoly addpoly_from_json(const json& j, const std::string& path,
                                      int default_prec = 64) {
    SeriesCtx ctx = ctx_from_json(member(j, "ctx", path), path + ".ctx", default_prec);
    const json& aj = as_array(member(j, "a", path), path + ".a");
    if (aj.empty()) throw input_error(path + ".a: need at least one coefficient");
    std::vector<LSeries> a;
    for (size_t i = 0; i < aj.size(); ++i)
        a.push_back(series_from_json(ctx, aj[i], path + ".a[" + std::to_string(i) + "]"));
    if (has(j, "c") && as_int(member(j, "c", path), path + ".c") != static_cast<long long>(a.size()))
        throw input_error(path + ".c: must equal the number of coefficients");
    return AdditivePoly(ctx, std::move(a));
}

// ---- strata -------------------------------------------------------------------

inline json npgon_to_json(const NPgon& g) {
    json slopes = json::array();
    for (const Rat& s : g.slopes) slopes.push_back(rat_to_json(s));
    return json{{"c", g.c}, {"d", g.d}, {"slopes", slopes}};
}

inline NPgon npgon_from_json(const json& j, const std::string& path) {
    int c = static_cast<int>(as_int(member(j, "c", path), path + ".c"));
    int d = static_cast<int>(as_int(member(j, "d", path), path + ".d"));
    const json& sj = as_array(member(j, "slopes", path), path + ".slopes");
    std::vector<Rat> s;
    for (size_t i = 0; i < sj.size(); ++i)
        s.push_back(rat_from_json(sj[i], path + ".slopes[" + std::to_string(i) + "]"));
    return NPgon(c, d, std::move(s));
}

// ---- mod-p^m matrices -----------------------------------------------------------

inline json modmatrix_to_json(const ModMatrix& g) {
    json rows = json::array();
    for (int i = 0; i < g.n; ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < g.n; ++j2) row.push_back(g.entry(i, j2));
        rows.push_back(std::move(row));
    }
    return json{{"n", g.n}, {"p", g.p}, {"m", g.m}, {"rows", rows}};
}

inline ModMatrix modmatrix_from_json(const json& j, const std::string& path) {
    int n = static_cast<int>(as_int(member(j, "n", path), path + ".n"));
    long long p = as_int(member(j, "p", path), path + ".p");
    int m = static_cast<int>(as_int(member(j, "m", path), path + ".m"));
    const json& rows = as_array(member(j, "rows", path), path + ".rows");
    if (static_cast<int>(rows.size()) != n) throw input_error(path + ".rows: expected n rows");
    std::vector<long long> e;
    for (int i = 0; i < n; ++i) {
        std::string rp = path + ".rows[" + std::to_string(i) + "]";
        const json& row = as_array(rows[static_cast<size_t>(i)], rp);
        if (static_cast<int>(row.size()) != n) throw input_error(rp + ": expected n entries");
        for (int k = 0; k < n; ++k) e.push_back(as_int(row[static_cast<size_t>(k)], rp + "[" + std::to_string(k) + "]"));
    }
    return ModMatrix(n, p, m, std::move(e));
}

// ---- report payloads -------------------------------------------------------------

inline json certificate_to_json(const MonodromyCertificate& cert) {
    json slopes = json::array();
    for (const auto& [s, len] : cert.slopes) slopes.push_back(json::array({rat_to_json(s), len}));
    return json{{"slopes", slopes},
                {"zero_roots", cert.zero_roots},
                {"ram_divisors", cert.ram_divisors},
                {"ram_lcm", cert.ram_lcm},
                {"tame", cert.tame},
                {"image_order_divisors", cert.image_order_divisors},
                {"translates_examined", cert.translates_examined}};
}

inline json cartancheck_to_json(const CartanCheck& cc) {
    return json{{"contained", cc.contained},
                {"generates", cc.generates},
                {"order", cc.order},
                {"min_poly", cc.min_poly}};
}

inline json sigma_ff_to_json(const SigmaMat<FFElem>& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(ff_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"base", field_to_json(m.ctx())}, {"size", m.size()}, {"entries", rows}};
}

}  // namespace hwbt::jio
