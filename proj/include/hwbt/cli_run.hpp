#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "hwbt/json_io.hpp"

// The command-line pipeline: one subcommand per workflow, JSON in, pretty
// sorted-key JSON out.  Exit codes: 0 success, 1 bad input, 2 resource or
// ramification obstruction (precision, budget, wild).

namespace hwbt::cli {

using jio::json;

struct Flags {
    std::string in_path;
    std::string inline_json;
    int prec = 64;
    int ext_bound = 8;
    long long budget = 10000000;
    long long max_translates = 4096;
    int witness_deg = 0;  // 0: use the base field
};

inline json load_payload(const Flags& fl) {
    try {
        if (!fl.inline_json.empty()) return json::parse(fl.inline_json);
        if (fl.in_path.empty())
            throw input_error("input: provide --in <file> or --json <inline document>");
        std::ifstream f(fl.in_path);
        if (!f) throw input_error("input: cannot open " + fl.in_path);
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw input_error(std::string("input: ") + e.what());
    }
}

inline void add_io_flags(CLI::App* sub, Flags& fl) {
    sub->add_option("--in", fl.in_path, "path of the JSON input document");
    sub->add_option("--json", fl.inline_json, "inline JSON input document");
}

// ---- subcommand bodies ------------------------------------------------------

inline json run_invariants(const Flags& fl) {
    BTDesc<LSeries> g = jio::btdesc_from_json(load_payload(fl), "input", fl.prec);
    SeriesVal h = hasse_invariant(g);
    BTDesc<FFElem> closed = reduce_closed_fiber(g);
    FiberHeights fc = fiber_heights(closed);
    FiberHeights fg = fiber_heights_generic(g);
    return json{{"h", jio::seriesval_to_json(h)},
                {"h_kind", jio::seriesval_kind(h)},
                {"a_number", a_number(closed)},
                {"i0", fc.i0},
                {"etale", fc.etale},
                {"connected_height", fc.connected},
                {"connected", fc.is_connected},
                {"etale_only", fc.is_etale},
                {"ordinary", fc.ordinary},
                {"generic", json{{"i0", fg.i0}, {"etale", fg.etale}, {"ordinary", fg.ordinary}}},
                {"hw_cyclic", hw_cyclic(closed)},
                {"height", g.height()},
                {"c", g.codim},
                {"d", g.dim}};
}

inline json run_roots(const Flags& fl) {
    AdditivePoly P = jio::addpoly_from_json(load_payload(fl), "input", fl.prec);
    TameRootSystem T = tame_roots(P, fl.ext_bound, fl.budget);
    TameGenerator G = tame_generator_matrix(T);
    CartanCheck cc = cartan_check(G.mat);
    json roots = json::array();
    for (const LSeries& r : T.roots) roots.push_back(jio::series_to_json(r));
    return json{{"ctx", jio::ctx_to_json(T.ctx)},
                {"roots", roots},
                {"zeta", jio::ff_to_json(T.zeta)},
                {"rel_e", T.rel_e},
                {"i0", T.i0},
                {"multiplicity", T.multiplicity},
                {"dim", T.dim},
                {"generator", json{{"matrix", jio::sigma_ff_to_json(G.mat)}, {"order", G.order}}},
                {"cartan", jio::cartancheck_to_json(cc)}};
}

inline json run_certificate(const Flags& fl) {
    AdditivePoly P = jio::addpoly_from_json(load_payload(fl), "input", fl.prec);
    MonodromyCertificate cert = monodromy_certificate(P, fl.max_translates);
    int wd = fl.witness_deg > 0 ? fl.witness_deg : P.ctx.k.deg();
    WitnessResult W = nonsplit_witness(P, ff_make(P.p(), wd));
    json j = jio::certificate_to_json(cert);
    j["witness"] = json{{"found", W.found},
                        {"alpha", W.found ? jio::ff_to_json(W.alpha) : json()},
                        {"value", W.found ? jio::val_to_json(W.value) : json()},
                        {"hasse_hypothesis_ok", W.hasse_hypothesis_ok},
                        {"examined", W.examined}};
    return j;
}

inline json run_strata(int c, int d, bool open_slopes) {
    std::vector<NPgon> all = enumerate_np(c, d, open_slopes);
    int n = static_cast<int>(all.size());
    std::vector<std::vector<bool>> leq(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            leq[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                np_leq(all[static_cast<size_t>(i)], all[static_cast<size_t>(j)]);
    json polys = json::array();
    for (const NPgon& g : all) {
        json beta = json::array();
        for (const Rat& s : g.slopes) beta.push_back(jio::rat_to_json(s));
        polys.push_back(json{{"beta", beta}, {"dim", diamond_dim(g).dim}});
    }
    // covering relations of the lies-above order
    json edges = json::array();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || !leq[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
            bool covered = false;
            for (int k = 0; k < n && !covered; ++k)
                covered = k != i && k != j && leq[static_cast<size_t>(i)][static_cast<size_t>(k)] &&
                          leq[static_cast<size_t>(k)][static_cast<size_t>(j)];
            if (!covered) edges.push_back(json::array({i, j}));
        }
    return json{{"c", c}, {"d", d}, {"open_slopes", open_slopes}, {"polygons", polys}, {"edges", edges}};
}

inline json run_gl(const std::string& check, int n, long long p, const Flags& fl) {
    if (check == "lemma65") {
        Lemma65Report rep = check_lemma65(n, p, fl.budget);
        return json{{"check", "lemma65"},
                    {"n", rep.n},
                    {"p", rep.p},
                    {"counting", rep.counting_ok},
                    {"intersection_trivial", rep.trivial_intersection},
                    {"generates", rep.generates},
                    {"order", rep.order_gl.convert_to<long long>()},
                    {"order_h", rep.order_h},
                    {"order_c", rep.order_c},
                    {"order_closure", rep.order_closure}};
    }
    if (check == "lemma63") {
        json payload = load_payload(fl);
        const json& gj = jio::as_array(jio::member(payload, "gens", "input"), "input.gens");
        std::vector<ModMatrix> gens;
        for (size_t i = 0; i < gj.size(); ++i)
            gens.push_back(jio::modmatrix_from_json(gj[i], "input.gens[" + std::to_string(i) + "]"));
        Lemma63Report rep = check_lemma63(gens, fl.budget);
        json cond2 = json::array();
        for (bool b : rep.condition_ii) cond2.push_back(b);
        return json{{"check", "lemma63"},
                    {"n", rep.n},
                    {"p", rep.p},
                    {"m_max", rep.m_max},
                    {"condition_i", rep.condition_i},
                    {"condition_ii", cond2},
                    {"conditions_hold", rep.conditions_hold},
                    {"conclusion", rep.conclusion},
                    {"order_closure", rep.order_closure},
                    {"order_full", rep.order_full.convert_to<long long>()}};
    }
    throw input_error("gl: unknown --check '" + check + "' (expected lemma65 or lemma63)");
}

inline json run_igusa(int n, const Flags& fl) {
    json payload = load_payload(fl);
    FieldDesc F = jio::field_from_json(jio::member(payload, "field", "input"), "input.field");
    SeriesCtx ctx(F, 1, fl.prec);
    LSeries a1 = jio::series_from_json(ctx, jio::member(payload, "a1", "input"), "input.a1");
    FFElem alpha = jio::ff_from_json(F, jio::member(payload, "alpha", "input"), "input.alpha");
    if (jio::has(payload, "n"))
        n = static_cast<int>(jio::as_int(jio::member(payload, "n", "input"), "input.n"));
    IgusaTower tower = igusa_tower(F.p(), a1, alpha, n);
    json levels = json::array();
    for (const Rat& v : tower.levels) levels.push_back(jio::val_to_json(v));
    return json{{"levels", levels}, {"ram_lower_bound", tower.ram_lower_bound}};
}

inline json run_cartan(int n, long long p) {
    ModMatrix g = nonsplit_cartan_gen(n, p);
    FieldDesc F = ff_make(p, 1);
    SigmaMat<FFElem> M(F, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M.at(i, j) = FFElem::from_value(F, g.entry(i, j));
    CartanCheck cc = cartan_check(M);
    json j = jio::cartancheck_to_json(cc);
    j["matrix"] = jio::modmatrix_to_json(g);
    j["order"] = mod_order(g);
    return j;
}

inline json run_versality(long long p, int c, int d, const Flags& fl) {
    BTDesc<MPoly> g = (fl.in_path.empty() && fl.inline_json.empty())
                          ? universal_deformation_hw(ff_make(p, 1), c, d)
                          : jio::btdesc_mpoly_from_json(load_payload(fl), "input");
    Versality v = versality_check(g);
    return json{{"versal", v.versal}, {"rank", v.rank}, {"codim", v.codim}, {"nvars", v.nvars}};
}

// ---- driver -------------------------------------------------------------------

inline int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact invariants, tame root systems, monodromy certificates and "
                 "stratification combinatorics for Hasse-Witt-cyclic group schemes"};
    app.name("hwbt");
    app.require_subcommand(1);

    Flags fl;
    int c = 1, d = 1, n = 1;
    long long p = 2;
    bool open_slopes = false, closed_slopes = false;
    std::string check = "lemma65";

    CLI::App* s_inv = app.add_subcommand("invariants", "height decomposition and Hasse invariant of a descriptor");
    add_io_flags(s_inv, fl);
    s_inv->add_option("--prec", fl.prec, "series precision (default 64)");

    CLI::App* s_roots = app.add_subcommand("roots", "tame root system, generator action, Cartan containment");
    add_io_flags(s_roots, fl);
    s_roots->add_option("--prec", fl.prec, "series precision (default 64)");
    s_roots->add_option("--ext-bound", fl.ext_bound, "residue extension degree bound (default 8)");
    s_roots->add_option("--budget", fl.budget, "work budget (default 10000000)");

    CLI::App* s_cert = app.add_subcommand("certificate", "ramification certificate and non-splitting witness");
    add_io_flags(s_cert, fl);
    s_cert->add_option("--prec", fl.prec, "series precision (default 64)");
    s_cert->add_option("--max-translates", fl.max_translates, "translate polygons to examine (default 4096)");
    s_cert->add_option("--witness-deg", fl.witness_deg, "witness search field degree (default: base field)");

    CLI::App* s_strata = app.add_subcommand("strata", "polygon enumeration with the lies-above order and dimensions");
    s_strata->add_option("--c", c, "codimension (polygons have c+d unit steps)")->required();
    s_strata->add_option("--d", d, "dimension (total rise of every polygon)")->required();
    s_strata->add_flag("--open-slopes", open_slopes, "restrict slopes to the open interval (0,1)");
    s_strata->add_flag("--closed-slopes", closed_slopes, "allow slopes 0 and 1 (default)");

    CLI::App* s_gl = app.add_subcommand("gl", "finite-level subgroup checks");
    s_gl->add_option("--check", check, "lemma65 or lemma63")->required();
    s_gl->add_option("--n", n, "matrix size");
    s_gl->add_option("--p", p, "prime");
    s_gl->add_option("--budget", fl.budget, "closure element budget (default 10000000)");
    add_io_flags(s_gl, fl);

    CLI::App* s_igusa = app.add_subcommand("igusa", "level-tower valuations and ramification lower bound");
    s_igusa->add_option("--n", n, "number of levels")->required();
    s_igusa->add_option("--prec", fl.prec, "series precision (default 64)");
    add_io_flags(s_igusa, fl);

    CLI::App* s_cartan = app.add_subcommand("cartan", "non-split Cartan generator with containment report");
    s_cartan->add_option("--n", n, "matrix size")->required();
    s_cartan->add_option("--p", p, "prime")->required();

    CLI::App* s_vers = app.add_subcommand("versality", "Jacobian rank of a multivariate family");
    s_vers->add_option("--p", p, "prime (universal family mode)");
    s_vers->add_option("--c", c, "codimension (universal family mode)");
    s_vers->add_option("--d", d, "dimension (universal family mode)");
    add_io_flags(s_vers, fl);

    std::vector<const char*> argv;
    argv.push_back("hwbt");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        json doc;
        if (s_inv->parsed()) doc = run_invariants(fl);
        else if (s_roots->parsed()) doc = run_roots(fl);
        else if (s_cert->parsed()) doc = run_certificate(fl);
        else if (s_strata->parsed()) {
            if (open_slopes && closed_slopes)
                throw input_error("strata: choose one of --open-slopes / --closed-slopes");
            doc = run_strata(c, d, open_slopes);
        }
        else if (s_gl->parsed()) doc = run_gl(check, n, p, fl);
        else if (s_igusa->parsed()) doc = run_igusa(n, fl);
        else if (s_cartan->parsed()) doc = run_cartan(n, p);
        else if (s_vers->parsed()) doc = run_versality(p, c, d, fl);
        out << doc.dump(2) << "\n";
        return 0;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const precision_error& e) {
        err << "precision error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        err << "budget error: " << e.what() << "\n";
        return 2;
    } catch (const wild_error& e) {
        err << "wild ramification: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hwbt::cli
