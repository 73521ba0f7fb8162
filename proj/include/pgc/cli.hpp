// Command line driver. Thin and single-threaded; all real work happens in
// the library. Exit codes: 0 success/verified, 1 counterexample/violation/
// no witness, 2 usage or input error, 3 budget exceeded, 4 internal theorem
// violation.
#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgc/extremal.hpp"
#include "pgc/pgcol.hpp"
#include "pgc/rational.hpp"
#include "pgc/report.hpp"
#include "pgc/verify.hpp"

namespace pgc {

namespace detail {

inline std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_output(const std::string& path, const std::string& data, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << data;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << data;
}

inline std::vector<int> parse_colour_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

inline Json analyze_json(const Colouring& c) {
    WallClock clock;
    const Geometry& g = c.g();
    Json j;
    j["q"] = g.q();
    j["n"] = g.n();
    j["s"] = c.s;

    auto tri = find_rainbow_triangle(c);
    j["rainbow_triangle"] = tri ? Json({(*tri)[0], (*tri)[1], (*tri)[2]}) : Json(nullptr);

    auto chain = is_target(c);
    j["target_chain"] = chain ? to_json(*chain) : Json(nullptr);

    if (tri) {
        j["decomposition"] = nullptr;
    } else {
        j["decomposition"] = to_json(decompose(c));
    }

    Json per_colour = Json::array();
    for (int colour = 0; colour < c.s; ++colour) {
        std::vector<int> cls;
        for (int p = 0; p < g.num_points(); ++p)
            if (c.colours[p] == colour) cls.push_back(p);
        per_colour.push_back(omega(g, cls));
    }
    j["omega_per_colour"] = std::move(per_colour);

    HomogeneousResult h = homogeneous_search(c);
    Json hj;
    hj["avoided_colour"] = h.avoided_colour;
    hj["flat"] = to_json(h.flat);
    hj["rank"] = h.rank;
    j["homogeneous"] = std::move(hj);

    j["wall_time_s"] = clock.seconds();
    return j;
}

}  // namespace detail

inline int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"coloured finite projective geometries: constructions, decompositions and "
                 "theorem verification"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a pgcol colouring");
    gen->require_subcommand(1);
    int gq = 2, gn = 3, gs = 2, gk = 3;
    std::uint64_t gseed = 0;
    std::string gcolours = "0,1,2";
    std::string gout;
    auto* gen_chain = gen->add_subcommand("chain", "canonical chain colouring");
    gen_chain->add_option("--q", gq);
    gen_chain->add_option("--n", gn);
    gen_chain->add_option("--colours", gcolours, "comma-separated layer colours");
    gen_chain->add_option("-o,--out", gout);
    auto* gen_random = gen->add_subcommand("random", "uniform random colouring");
    gen_random->add_option("--q", gq);
    gen_random->add_option("--n", gn);
    gen_random->add_option("--s", gs);
    gen_random->add_option("--seed", gseed);
    gen_random->add_option("-o,--out", gout);
    auto* gen_blocks = gen->add_subcommand("blocks", "seeded block colouring");
    gen_blocks->add_option("--q", gq);
    gen_blocks->add_option("--n", gn);
    gen_blocks->add_option("--k", gk, "number of colours");
    gen_blocks->add_option("--seed", gseed);
    gen_blocks->add_option("-o,--out", gout);
    auto* gen_ternary = gen->add_subcommand("ternary", "extremal 2-colouring of PG(n-1,3)");
    gen_ternary->add_option("--n", gn);
    gen_ternary->add_option("-o,--out", gout);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "summarize a pgcol file");
    std::string afile;
    bool ajson = false;
    analyze->add_option("file", afile)->required();
    analyze->add_flag("--json", ajson);

    // decompose
    auto* dec = app.add_subcommand("decompose", "lift-join decomposition of a pgcol file");
    std::string dfile;
    dec->add_option("file", dfile)->required();

    // contains
    auto* cont = app.add_subcommand("contains", "search a host colouring for a pattern");
    std::string hfile, pfile;
    cont->add_option("host", hfile)->required();
    cont->add_option("pattern", pfile)->required();

    // verify
    auto* ver = app.add_subcommand("verify", "verify a named structure theorem");
    std::string vtag;
    int vq = 2, vn = 3;
    bool vexh = false;
    std::uint64_t vsamples = 0, vseed = 0;
    ver->add_option("tag", vtag)->required();
    ver->add_option("--q", vq);
    ver->add_option("--n", vn);
    ver->add_flag("--exhaustive", vexh);
    ver->add_option("--samples", vsamples);
    ver->add_option("--seed", vseed);

    // search
    auto* search = app.add_subcommand("search", "flat searches on a pgcol file");
    search->require_subcommand(1);
    std::string sfile;
    int sl = 2;
    auto* s_hom = search->add_subcommand("homogeneous", "largest flat avoiding a colour");
    s_hom->add_option("file", sfile)->required();
    auto* s_few = search->add_subcommand("fewcolours", "largest flat with at most l colours");
    s_few->add_option("file", sfile)->required();
    s_few->add_option("--l", sl);

    // ramsey
    auto* ram = app.add_subcommand("ramsey", "smallest rank forcing a monochromatic flat");
    int rq = 2, rs = 2, rt = 2, rnmax = 4;
    ram->add_option("--q", rq);
    ram->add_option("--s", rs);
    ram->add_option("--t", rt);
    ram->add_option("--nmax", rnmax);

    // padic
    auto* pad = app.add_subcommand("padic", "sampled rainbow check for the valuation colouring");
    long pp = 2;
    int pn = 3;
    std::uint64_t psamples = 100000, pseed = 0;
    int pbudget = 64;
    pad->add_option("--p", pp);
    pad->add_option("--n", pn);
    pad->add_option("--samples", psamples);
    pad->add_option("--seed", pseed);
    pad->add_option("--param-budget", pbudget);

    try {
        std::vector<const char*> argv;
        argv.push_back("pgc");
        for (const std::string& a : args) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) {  // --help
                out << app.help();
                return 0;
            }
            err << e.what() << "\n";
            return 2;
        }

        if (gen_chain->parsed()) {
            detail::write_output(
                gout, serialize_pgcol(construct_chain_colouring(gq, gn,
                                                                detail::parse_colour_list(gcolours))),
                out);
            return 0;
        }
        if (gen_random->parsed()) {
            GeometryPtr g = build_geometry(gq, gn);
            SplitMix64 rng(gseed);
            std::vector<int> cols(g->num_points());
            for (auto& x : cols) x = static_cast<int>(rng.below(gs));
            detail::write_output(gout, serialize_pgcol(make_colouring(g, cols, gs)), out);
            return 0;
        }
        if (gen_blocks->parsed()) {
            detail::write_output(gout, serialize_pgcol(construct_block_colouring(gq, gn, gk, gseed)),
                                 out);
            return 0;
        }
        if (gen_ternary->parsed()) {
            detail::write_output(gout, serialize_pgcol(construct_ternary_extremal(gn)), out);
            return 0;
        }

        if (analyze->parsed()) {
            Colouring c = parse_pgcol(detail::read_file(afile));
            Json j = detail::analyze_json(c);
            if (ajson) {
                out << j.dump(2) << "\n";
            } else {
                out << "PG(" << j["n"].get<int>() - 1 << "," << j["q"].get<int>() << "), s="
                    << j["s"].get<int>() << "\n";
                out << "rainbow triangle: "
                    << (j["rainbow_triangle"].is_null() ? "none" : j["rainbow_triangle"].dump())
                    << "\n";
                out << "target: " << (j["target_chain"].is_null() ? "no" : "yes") << "\n";
                out << "omega per colour: " << j["omega_per_colour"].dump() << "\n";
                out << "homogeneous rank: " << j["homogeneous"]["rank"].get<int>()
                    << " avoiding colour " << j["homogeneous"]["avoided_colour"].get<int>()
                    << "\n";
            }
            return 0;
        }

        if (dec->parsed()) {
            Colouring c = parse_pgcol(detail::read_file(dfile));
            try {
                DecompositionSequence seq = decompose(c);
                out << to_json(seq).dump(2) << "\n";
                return 0;
            } catch (const RainbowTriangleError& e) {
                out << "rainbow triangle: [" << e.witness[0] << "," << e.witness[1] << ","
                    << e.witness[2] << "]\n";
                return 1;
            }
        }

        if (cont->parsed()) {
            Colouring host = parse_pgcol(detail::read_file(hfile));
            Colouring pattern = parse_pgcol(detail::read_file(pfile));
            auto w = contains_pattern(host, pattern);
            if (!w) {
                out << "no witness\n";
                return 1;
            }
            Json j;
            j["image"] = w->image;
            Json m = Json::array();
            for (const Vec& col : w->matrix) m.push_back(std::vector<int>(col.begin(), col.end()));
            j["matrix_columns"] = std::move(m);
            out << j.dump(2) << "\n";
            return 0;
        }

        if (ver->parsed()) {
            VerifyOptions opt;
            opt.exhaustive = vexh || vsamples == 0;
            opt.samples = vsamples;
            opt.seed = vseed;
            VerificationReport rep = verify_theorem(parse_tag(vtag), vq, vn, opt);
            out << to_json(rep).dump(2) << "\n";
            return rep.violations == 0 ? 0 : 1;
        }

        if (s_hom->parsed()) {
            Colouring c = parse_pgcol(detail::read_file(sfile));
            HomogeneousResult h = homogeneous_search(c);
            Json j;
            j["avoided_colour"] = h.avoided_colour;
            j["flat"] = to_json(h.flat);
            j["rank"] = h.rank;
            out << j.dump(2) << "\n";
            return 0;
        }
        if (s_few->parsed()) {
            Colouring c = parse_pgcol(detail::read_file(sfile));
            FewColourResult h = few_colour_flat_search(c, sl);
            Json j;
            j["colours"] = h.colours;
            j["flat"] = to_json(h.flat);
            j["rank"] = h.rank;
            out << j.dump(2) << "\n";
            return 0;
        }

        if (ram->parsed()) {
            RamseyResult r = ramsey_search(rq, rs, rt, rnmax);
            Json j;
            j["exact"] = r.exact ? Json(*r.exact) : Json(nullptr);
            j["lower"] = r.lower;
            j["upper"] = r.upper ? Json(*r.upper) : Json(nullptr);
            j["budget_exhausted"] = r.budget_exhausted;
            out << j.dump(2) << "\n";
            return 0;
        }

        if (pad->parsed()) {
            NonarchReport rep = verify_nonarch(PadicSpec(pp), pn, psamples, pseed, pbudget);
            out << to_json(rep).dump(2) << "\n";
            return rep.rainbow_violations == 0 ? 0 : 1;
        }

        err << "no subcommand\n";
        return 2;
    } catch (const TheoremViolation& e) {
        err << "THEOREM_VIOLATION: " << e.what() << "\n";
        return 4;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        err << "format error [" << e.code << "]: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pgc
