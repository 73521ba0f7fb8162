#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "pgc/extremal.hpp"
#include "pgc/structure.hpp"

using namespace pgc;

namespace {

Colouring odometer_colouring(const GeometryPtr& g, std::uint64_t index, int s) {
    std::vector<int> cols(g->num_points());
    for (int p = 0; p < g->num_points(); ++p) {
        cols[p] = static_cast<int>(index % s);
        index /= s;
    }
    return make_colouring(g, cols, s);
}

// PG(2,3) colouring with one line bicoloured 2+2 and everything else a third
// colour. The line is then the unique minimal decomposer.
Colouring split_line_colouring(const GeometryPtr& g33, const Flat& line) {
    std::vector<int> cols(g33->num_points(), 0);  // alpha = 0
    cols[line.points[0]] = 1;
    cols[line.points[1]] = 1;
    cols[line.points[2]] = 2;
    cols[line.points[3]] = 2;
    return make_colouring(g33, cols, 3);
}

bool mutually_skew_spanning(const Geometry& g, const DecompositionSequence& seq) {
    int total = 0;
    std::vector<int> uni;
    for (const FlatColouring& p : seq.parts) {
        if (p.flat.points.empty()) return false;
        total += p.flat.rank;
        uni.insert(uni.end(), p.flat.points.begin(), p.flat.points.end());
    }
    return rank_of(g, uni) == total && total == g.n();
}

bool valid_target_chain(const Colouring& c, const TargetChain& tc) {
    const Geometry& g = c.g();
    if (tc.flats.empty() || !tc.flats.front().points.empty()) return false;
    if (static_cast<int>(tc.flats.back().points.size()) != g.num_points()) return false;
    if (tc.layer_colours.size() + 1 != tc.flats.size()) return false;
    for (std::size_t i = 0; i + 1 < tc.flats.size(); ++i) {
        const auto& lo = tc.flats[i].points;
        const auto& hi = tc.flats[i + 1].points;
        if (!std::includes(hi.begin(), hi.end(), lo.begin(), lo.end())) return false;
        std::vector<int> diff;
        std::set_difference(hi.begin(), hi.end(), lo.begin(), lo.end(),
                            std::back_inserter(diff));
        if (diff.empty()) return false;
        for (int p : diff)
            if (c.colours[p] != tc.layer_colours[i]) return false;
        // closure check: each chain element is a flat
        if (closure(g, lo).points != lo) return false;
        if (i + 1 > 0 && tc.layer_colours.size() > i + 1 &&
            tc.layer_colours[i] == tc.layer_colours[i + 1])
            return false;  // irredundant chain
    }
    return true;
}

}  // namespace

TEST_CASE("is_decomposer basics") {
    auto fano = build_geometry(2, 3);
    SplitMix64 rng(3);
    // the empty flat is a decomposer of every simple colouring
    for (int it = 0; it < 20; ++it) {
        std::vector<int> cols(7);
        for (auto& x : cols) x = static_cast<int>(rng.below(3));
        Colouring c = make_colouring(fano, cols, 3);
        REQUIRE(is_decomposer(c, empty_flat()));
    }

    // bicoloured line with monochromatic remainder: the line is a decomposer
    auto g33 = build_geometry(3, 3);
    Flat line = enumerate_flats(*g33, 2).front();
    Colouring c = split_line_colouring(g33, line);
    REQUIRE(is_decomposer(c, line));

    // a line through two colours whose outside closures mix colours is not
    Flat other = enumerate_flats(*g33, 2).back();
    REQUIRE(!is_decomposer(c, other));

    REQUIRE_THROWS_AS(is_decomposer(c, whole_flat(*g33)), UsageError);
}

TEST_CASE("find_decomposer canonical choice") {
    auto fano = build_geometry(2, 3);
    // monochromatic: every point is a decomposer, the first is returned
    Colouring mono = make_colouring(fano, std::vector<int>(7, 0), 1);
    auto f = find_decomposer(mono);
    REQUIRE(f.has_value());
    REQUIRE(f->points == std::vector<int>{0});

    // rainbow line: no nonempty decomposer (each point sees two colours off it)
    auto line = build_geometry(2, 2);
    Colouring rainbow = make_colouring(line, {0, 1, 2}, 3);
    REQUIRE(!find_decomposer(rainbow).has_value());

    // PG(2,3) with a 2+2 line and third colour outside: no rank-1 decomposer
    // exists, and the line itself is returned
    auto g33 = build_geometry(3, 3);
    Flat lf = enumerate_flats(*g33, 2).front();
    Colouring c = split_line_colouring(g33, lf);
    auto d = find_decomposer(c);
    REQUIRE(d.has_value());
    REQUIRE(d->rank == 2);
    REQUIRE(d->points == lf.points);
}

TEST_CASE("lift_join basics") {
    auto fano = build_geometry(2, 3);
    // f1 = a point coloured alpha, f2 = a bicoloured line skew to it
    Flat pt = closure(*fano, {3});
    Flat line = closure(*fano, {0, 1});
    REQUIRE(local_connectivity(*fano, pt.points, line.points) == 0);
    FlatColouring c1{pt, {0}};
    FlatColouring c2{line, {1, 2, 1}};
    FlatColouring joined = lift_join(*fano, c1, c2);
    REQUIRE(joined.flat.rank == 3);
    // agrees with c1 on f1 and with c2 on f2
    REQUIRE(joined.colour_at(3) == 0);
    REQUIRE(joined.colour_at(0) == 1);
    REQUIRE(joined.colour_at(1) == 2);
    REQUIRE(joined.colour_at(2) == 1);
    // every line through the centre point is monochromatic off the centre
    for (int e = 0; e < 7; ++e) {
        if (e == 3) continue;
        std::vector<int> lp = line_points(*fano, 3, e);
        std::set<int> cols;
        for (int p : lp)
            if (p != 3) cols.insert(joined.colour_at(p));
        REQUIRE(cols.size() == 1);
    }

    // monochromatic f2 colours everything off f1 with its colour
    FlatColouring mono2{line, {1, 1, 1}};
    FlatColouring j2 = lift_join(*fano, c1, mono2);
    for (int p : j2.flat.points)
        if (p != 3) REQUIRE(j2.colour_at(p) == 1);

    // non-skew flats are rejected
    Flat meet = closure(*fano, {0, 3});
    REQUIRE_THROWS_AS(lift_join(*fano, FlatColouring{meet, {0, 0, 0}}, c2), NotSkew);
}

TEST_CASE("lift_join restriction recovery on sampled inputs") {
    auto g = build_geometry(2, 4);
    SplitMix64 rng(17);
    auto lines = enumerate_flats(*g, 2);
    for (int it = 0; it < 100; ++it) {
        const Flat& f1 = lines[rng.below(lines.size())];
        const Flat& f2 = lines[rng.below(lines.size())];
        if (local_connectivity(*g, f1.points, f2.points) != 0) continue;
        FlatColouring c1{f1, {}}, c2{f2, {}};
        for (std::size_t i = 0; i < f1.points.size(); ++i)
            c1.colours.push_back(static_cast<int>(rng.below(3)));
        for (std::size_t i = 0; i < f2.points.size(); ++i)
            c2.colours.push_back(static_cast<int>(rng.below(3)));
        FlatColouring j = lift_join(*g, c1, c2);
        for (std::size_t i = 0; i < f1.points.size(); ++i)
            REQUIRE(j.colour_at(f1.points[i]) == c1.colours[i]);
        for (std::size_t i = 0; i < f2.points.size(); ++i)
            REQUIRE(j.colour_at(f2.points[i]) == c2.colours[i]);
    }
}

TEST_CASE("lift_join_many: identity, chains, associativity") {
    auto fano = build_geometry(2, 3);
    // single spanning part is the identity
    SplitMix64 rng(5);
    std::vector<int> cols(7);
    for (auto& x : cols) x = static_cast<int>(rng.below(2));
    Colouring c = make_colouring(fano, cols, 2);
    DecompositionSequence single{fano, {restrict_to(c, whole_flat(*fano))}, 2};
    REQUIRE(lift_join_many(single).colours == c.colours);

    // three mutually skew points with colours a,b,c give the chain colouring
    Flat p0 = closure(*fano, {0});
    Flat p1 = closure(*fano, {1});
    Flat p3 = closure(*fano, {3});
    DecompositionSequence pts{fano,
                              {FlatColouring{p0, {0}}, FlatColouring{p1, {1}},
                               FlatColouring{p3, {2}}},
                              3};
    Colouring joined = lift_join_many(pts);
    Colouring chain = construct_chain_colouring(2, 3, {0, 1, 2});
    REQUIRE(joined.colours == chain.colours);

    // associativity: (c1 x c2) x c3 == c1 x (c2 x c3) on sampled skew triples
    auto g4 = build_geometry(2, 4);
    auto flats1 = enumerate_flats(*g4, 1);
    auto flats2 = enumerate_flats(*g4, 2);
    SplitMix64 rng2(29);
    int done = 0;
    while (done < 50) {
        const Flat& f1 = flats1[rng2.below(flats1.size())];
        const Flat& f2 = flats1[rng2.below(flats1.size())];
        const Flat& f3 = flats2[rng2.below(flats2.size())];
        std::vector<int> u = f1.points;
        u.insert(u.end(), f2.points.begin(), f2.points.end());
        u.insert(u.end(), f3.points.begin(), f3.points.end());
        if (rank_of(*g4, u) != f1.rank + f2.rank + f3.rank) continue;
        ++done;
        FlatColouring c1{f1, {static_cast<int>(rng2.below(3))}};
        FlatColouring c2{f2, {static_cast<int>(rng2.below(3))}};
        FlatColouring c3{f3, {}};
        for (std::size_t i = 0; i < f3.points.size(); ++i)
            c3.colours.push_back(static_cast<int>(rng2.below(3)));
        FlatColouring left = lift_join(*g4, lift_join(*g4, c1, c2), c3);
        FlatColouring right = lift_join(*g4, c1, lift_join(*g4, c2, c3));
        REQUIRE(left.flat.points == right.flat.points);
        REQUIRE(left.colours == right.colours);
    }
}

TEST_CASE("decompose base cases and errors") {
    auto fano = build_geometry(2, 3);
    // bicoloured colouring decomposes as a single part
    Colouring two = make_colouring(fano, {0, 1, 0, 1, 1, 0, 1}, 2);
    DecompositionSequence seq = decompose(two);
    REQUIRE(seq.parts.size() == 1);
    REQUIRE(static_cast<int>(seq.parts[0].flat.points.size()) == 7);

    // rainbow triangle input is rejected with a witness
    auto line = build_geometry(2, 2);
    Colouring rainbow = make_colouring(line, {0, 1, 2}, 3);
    try {
        decompose(rainbow);
        FAIL("decompose accepted a rainbow triangle");
    } catch (const RainbowTriangleError& e) {
        REQUIRE(e.witness == std::array<int, 3>{0, 1, 2});
    }
}

TEST_CASE("PG(2,3) split-line colouring decomposes as [bicoloured line, point]") {
    auto g33 = build_geometry(3, 3);
    Flat line = enumerate_flats(*g33, 2).front();
    Colouring c = split_line_colouring(g33, line);
    DecompositionSequence seq = decompose(c);
    REQUIRE(seq.parts.size() == 2);
    REQUIRE(seq.parts[0].flat.points == line.points);
    REQUIRE(colours_on(c, seq.parts[0].flat.points).size() == 2);
    REQUIRE(seq.parts[1].flat.rank == 1);
    REQUIRE(colours_on(c, seq.parts[1].flat.points) == std::vector<int>{0});
    REQUIRE(lift_join_many(seq).colours == c.colours);
}

TEST_CASE("Fano analogue: 2+1 line plus constant outside decomposes exactly") {
    auto fano = build_geometry(2, 3);
    std::vector<int> cols(7, 0);
    std::vector<int> lp = line_points(*fano, 0, 1);
    cols[lp[0]] = 1;
    cols[lp[1]] = 1;
    cols[lp[2]] = 2;
    Colouring c = make_colouring(fano, cols, 3);
    DecompositionSequence seq = decompose(c);
    REQUIRE(seq.parts.size() == 2);
    REQUIRE(mutually_skew_spanning(*fano, seq));
    for (const FlatColouring& p : seq.parts)
        REQUIRE(colours_on(c, p.flat.points).size() <= 2);
    REQUIRE(lift_join_many(seq).colours == c.colours);
}

TEST_CASE("decompose round-trips every rainbow-triangle-free Fano colouring") {
    auto fano = build_geometry(2, 3);
    int checked = 0;
    for (std::uint64_t it = 0; it < 2187; ++it) {
        Colouring c = odometer_colouring(fano, it, 3);
        if (find_rainbow_triangle(c).has_value()) continue;
        ++checked;
        DecompositionSequence seq = decompose(c);
        REQUIRE(mutually_skew_spanning(*fano, seq));
        for (const FlatColouring& p : seq.parts)
            REQUIRE(std::set<int>(p.colours.begin(), p.colours.end()).size() <= 2);
        Colouring back = lift_join_many(seq);
        REQUIRE(back.colours == c.colours);
        REQUIRE(back.s == c.s);
    }
    REQUIRE(checked > 100);
}

TEST_CASE("decomposer with complement iff colouring splits as a lift-join") {
    auto fano = build_geometry(2, 3);
    std::vector<Flat> flats;
    for (int r = 1; r <= 2; ++r)
        for (Flat& f : enumerate_flats(*fano, r)) flats.push_back(std::move(f));
    for (std::uint64_t it = 0; it < 2187; ++it) {
        Colouring c = odometer_colouring(fano, it, 3);
        for (const Flat& f : flats) {
            Flat comp = complement_flat(*fano, f);
            Colouring joined = lift_join_many(DecompositionSequence{
                fano, {restrict_to(c, f), restrict_to(c, comp)}, 3});
            REQUIRE(is_decomposer(c, f) == (joined.colours == c.colours));
        }
    }
}

TEST_CASE("lift_join of rainbow-triangle-free parts is rainbow-triangle-free") {
    auto g4 = build_geometry(2, 4);
    auto flats2 = enumerate_flats(*g4, 2);
    SplitMix64 rng(41);
    int done = 0;
    while (done < 80) {
        const Flat& f1 = flats2[rng.below(flats2.size())];
        const Flat& f2 = flats2[rng.below(flats2.size())];
        if (local_connectivity(*g4, f1.points, f2.points) != 0) continue;
        ++done;
        FlatColouring c1{f1, {}}, c2{f2, {}};
        for (std::size_t i = 0; i < 3; ++i)
            c1.colours.push_back(static_cast<int>(rng.below(2)));  // two colours: no rainbow
        for (std::size_t i = 0; i < 3; ++i)
            c2.colours.push_back(static_cast<int>(rng.below(2)) + 1);
        FlatColouring j = lift_join(*g4, c1, c2);
        std::vector<int> total(g4->num_points(), 0);
        for (std::size_t i = 0; i < j.flat.points.size(); ++i)
            total[j.flat.points[i]] = j.colours[i];
        Colouring c = make_colouring(g4, total, 4);
        // restrict attention to the joined flat: any triangle inside it
        auto t = find_rainbow_triangle(c);
        if (t.has_value()) {
            bool inside = true;
            for (int p : *t)
                inside = inside && std::binary_search(j.flat.points.begin(),
                                                      j.flat.points.end(), p);
            REQUIRE(!inside);
        }
    }
}

TEST_CASE("a decomposer of a decomposer-restriction decomposes the whole") {
    auto fano = build_geometry(2, 3);
    for (std::uint64_t it = 0; it < 2187; it += 3) {
        Colouring c = odometer_colouring(fano, it, 3);
        auto f = find_decomposer(c);
        if (!f || f->rank < 2) continue;
        for (const Flat& f0 : detail::flats_of_restriction(*fano, *f, 1)) {
            if (is_decomposer(c, f0, &*f)) REQUIRE(is_decomposer(c, f0));
        }
    }
}

TEST_CASE("is_target on lines and small cases") {
    auto l3 = build_geometry(3, 2);
    // 1+3 split: target with chain {} < point < everything
    Colouring c13 = make_colouring(l3, {0, 1, 1, 1}, 2);
    auto tc = is_target(c13);
    REQUIRE(tc.has_value());
    REQUIRE(tc->flats.size() == 3);
    REQUIRE(tc->flats[1].points == std::vector<int>{0});
    REQUIRE(valid_target_chain(c13, *tc));

    // 2+2 split: not a target
    Colouring c22 = make_colouring(l3, {0, 0, 1, 1}, 2);
    REQUIRE(!is_target(c22).has_value());

    // monochromatic: chain {} < everything
    Colouring mono = make_colouring(l3, {1, 1, 1, 1}, 2);
    auto tm = is_target(mono);
    REQUIRE(tm.has_value());
    REQUIRE(tm->flats.size() == 2);
    REQUIRE(tm->layer_colours == std::vector<int>{1});
}

TEST_CASE("is_target agrees with the monochromatic-decomposition route") {
    auto fano = build_geometry(2, 3);
    for (std::uint64_t it = 0; it < 128; ++it) {
        Colouring c = odometer_colouring(fano, it, 2);
        auto chain = is_target(c);
        auto mono = target_via_mono_decomposition(c);
        REQUIRE(chain.has_value() == mono.has_value());
        if (chain) REQUIRE(valid_target_chain(c, *chain));
        if (mono)
            for (const FlatColouring& p : *mono)
                REQUIRE(std::set<int>(p.colours.begin(), p.colours.end()).size() <= 1);
    }
    auto g4 = build_geometry(2, 4);
    SplitMix64 rng(13);
    for (int it = 0; it < 400; ++it) {
        std::vector<int> cols(15);
        for (auto& x : cols) x = static_cast<int>(rng.below(2));
        Colouring c = make_colouring(g4, cols, 2);
        REQUIRE(is_target(c).has_value() == target_via_mono_decomposition(c).has_value());
    }
}

TEST_CASE("restriction of a target to a flat is a target") {
    auto g4 = build_geometry(2, 4);
    SplitMix64 rng(19);
    for (int it = 0; it < 60; ++it) {
        std::vector<int> assign(4);
        for (auto& a : assign) a = static_cast<int>(rng.below(3));
        Colouring c = construct_chain_colouring(2, 4, assign);
        REQUIRE(is_target(c).has_value());
        for (const Flat& f : enumerate_flats(*g4, 2)) {
            REQUIRE(is_target(c, &f).has_value());
        }
    }
}

TEST_CASE("chain colourings are full chain targets") {
    Colouring c = construct_chain_colouring(2, 3, {2, 0, 1});
    auto tc = is_target(c);
    REQUIRE(tc.has_value());
    REQUIRE(tc->flats.size() == 4);
    for (std::size_t i = 0; i < tc->flats.size(); ++i)
        REQUIRE(tc->flats[i].rank == static_cast<int>(i));
    REQUIRE(tc->layer_colours == std::vector<int>{2, 0, 1});
}
