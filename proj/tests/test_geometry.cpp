#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "pgc/geometry.hpp"

using namespace pgc;

namespace {

// Brute-force span oracle: all canonical points expressible as nonzero
// combinations of the given points, found by trying every coefficient tuple.
std::set<int> span_oracle(const Geometry& g, const std::vector<int>& pts) {
    std::set<int> out;
    const Field& F = g.field();
    const int q = g.q();
    const int k = static_cast<int>(pts.size());
    std::vector<int> coeff(k, 0);
    while (true) {
        Vec acc(g.n(), 0);
        bool nonzero = false;
        for (int i = 0; i < k; ++i) {
            if (coeff[i] == 0) continue;
            for (int j = 0; j < g.n(); ++j)
                acc[j] = static_cast<std::uint8_t>(
                    F.add(acc[j], F.mul(coeff[i], g.point(pts[i])[j])));
        }
        for (auto x : acc) nonzero |= (x != 0);
        if (nonzero) out.insert(g.index_of(acc));
        int pos = k - 1;
        while (pos >= 0 && coeff[pos] == q - 1) coeff[pos--] = 0;
        if (pos < 0) break;
        ++coeff[pos];
    }
    return out;
}

// Independent flat counter: closures of all subsets of bounded size, deduped.
int count_flats_oracle(const Geometry& g, int r) {
    std::set<std::vector<int>> flats;
    const int N = g.num_points();
    std::vector<int> idx(r);
    // all r-subsets; closures of independent ones of rank r
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == r) {
            Flat f = closure(g, idx);
            if (f.rank == r) flats.insert(f.points);
            return;
        }
        for (int p = start; p < N; ++p) {
            idx[depth] = p;
            rec(p + 1, depth + 1);
        }
    };
    if (r == 0) return 1;
    rec(0, 0);
    return static_cast<int>(flats.size());
}

}  // namespace

TEST_CASE("field axioms hold for every supported order") {
    for (int q : {2, 3, 4, 5, 7}) {
        Field F(q);
        for (int a = 0; a < q; ++a) {
            REQUIRE(F.add(a, 0) == a);
            REQUIRE(F.mul(a, 1) == a);
            REQUIRE(F.add(a, F.neg(a)) == 0);
            if (a != 0) REQUIRE(F.mul(a, F.inv(a)) == 1);
            for (int b = 0; b < q; ++b) {
                REQUIRE(F.add(a, b) == F.add(b, a));
                REQUIRE(F.mul(a, b) == F.mul(b, a));
                for (int c = 0; c < q; ++c) {
                    REQUIRE(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                    REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                    REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
                }
            }
        }
    }
    REQUIRE_THROWS_AS(Field(6), UsageError);
}

TEST_CASE("point counts match (q^n-1)/(q-1)") {
    REQUIRE(build_geometry(2, 3)->num_points() == 7);
    REQUIRE(build_geometry(3, 2)->num_points() == 4);
    REQUIRE(build_geometry(2, 1)->num_points() == 1);
    REQUIRE(build_geometry(4, 2)->num_points() == 5);
    REQUIRE(build_geometry(5, 2)->num_points() == 6);
    REQUIRE(build_geometry(7, 2)->num_points() == 8);
    REQUIRE(build_geometry(3, 3)->num_points() == 13);
    REQUIRE(build_geometry(2, 4)->num_points() == 15);
    REQUIRE(build_geometry(3, 4)->num_points() == 40);
}

TEST_CASE("build_geometry rejects unsupported q and busted budgets") {
    REQUIRE_THROWS_AS(build_geometry(6, 2), UsageError);
    REQUIRE_THROWS_AS(build_geometry(2, 30), BudgetExceeded);
    REQUIRE_THROWS_AS(build_geometry(2, 0), UsageError);
}

TEST_CASE("canonical point order") {
    auto g2 = build_geometry(2, 4);
    for (int i = 0; i < g2->num_points(); ++i) {
        REQUIRE(g2->code(i) == static_cast<std::uint64_t>(i) + 1);  // q=2: index = code-1
        REQUIRE(g2->point(i)[std::countl_zero(g2->code(i)) - (64 - g2->n())] == 1);
    }
    auto g3 = build_geometry(3, 2);
    std::vector<std::uint64_t> codes;
    for (int i = 0; i < g3->num_points(); ++i) codes.push_back(g3->code(i));
    REQUIRE(codes == std::vector<std::uint64_t>{1, 3, 4, 5});
    // every first nonzero coordinate is 1, list strictly increasing
    for (int q : {2, 3, 4, 5, 7}) {
        auto g = build_geometry(q, 3);
        std::uint64_t prev = 0;
        for (int i = 0; i < g->num_points(); ++i) {
            REQUIRE(g->code(i) > prev);
            prev = g->code(i);
            const Vec& v = g->point(i);
            int first = 0;
            while (v[first] == 0) ++first;
            REQUIRE(v[first] == 1);
        }
    }
}

TEST_CASE("closure basics") {
    auto g = build_geometry(2, 3);
    Flat e = closure(*g, {});
    REQUIRE(e.rank == 0);
    REQUIRE(e.points.empty());

    // two distinct points span a 3-point line; cross-checked by span oracle
    Flat line = closure(*g, {0, 1});
    REQUIRE(line.rank == 2);
    std::set<int> oracle = span_oracle(*g, {0, 1});
    REQUIRE(std::set<int>(line.points.begin(), line.points.end()) == oracle);
    REQUIRE(line.points.size() == 3);

    // a basis closes to the full point set
    Flat all = closure(*g, {0, 1, 3});
    REQUIRE(all.rank == 3);
    REQUIRE(static_cast<int>(all.points.size()) == g->num_points());

    // idempotent and monotone
    REQUIRE(closure(*g, line.points).points == line.points);
}

TEST_CASE("closure agrees with the span oracle on every pair and triple") {
    for (int q : {2, 3, 4}) {
        auto g = build_geometry(q, 3);
        const int N = g->num_points();
        for (int i = 0; i < N; ++i) {
            for (int j = i + 1; j < N; ++j) {
                Flat f = closure(*g, {i, j});
                std::set<int> oracle = span_oracle(*g, {i, j});
                REQUIRE(std::set<int>(f.points.begin(), f.points.end()) == oracle);
            }
        }
    }
}

TEST_CASE("rank") {
    auto g4 = build_geometry(2, 4);
    REQUIRE(rank_of(*g4, {}) == 0);
    for (int p = 0; p < g4->num_points(); ++p) REQUIRE(rank_of(*g4, {p}) == 1);
    // 3-point line in PG(3,2): codes 1,2,3 -> indices 0,1,2
    REQUIRE(rank_of(*g4, {0, 1, 2}) == 2);
    // rank(s) == rank(closure(s)) on sampled sets
    auto g3 = build_geometry(3, 3);
    for (int a = 0; a < g3->num_points(); a += 3)
        for (int b = a + 1; b < g3->num_points(); b += 2) {
            std::vector<int> s{a, b};
            REQUIRE(rank_of(*g3, s) == closure(*g3, s).rank);
        }
}

TEST_CASE("enumerate_flats counts and ordering") {
    auto fano = build_geometry(2, 3);
    auto lines = enumerate_flats(*fano, 2);
    REQUIRE(lines.size() == 7);

    auto g = build_geometry(2, 4);
    auto lines4 = enumerate_flats(*g, 2);
    REQUIRE(lines4.size() == 35);
    REQUIRE(lines4.size() == static_cast<std::size_t>(count_flats_oracle(*g, 2)));

    auto whole = enumerate_flats(*g, 4);
    REQUIRE(whole.size() == 1);
    REQUIRE(static_cast<int>(whole[0].points.size()) == g->num_points());

    // lexicographic list order, each flat's points sorted
    for (std::size_t i = 0; i < lines4.size(); ++i) {
        REQUIRE(std::is_sorted(lines4[i].points.begin(), lines4[i].points.end()));
        if (i > 0) REQUIRE(lines4[i - 1].points < lines4[i].points);
    }

    // Gaussian-binomial cross-checks against the subset-closure oracle
    auto g33 = build_geometry(3, 3);
    REQUIRE(enumerate_flats(*g33, 2).size() ==
            static_cast<std::size_t>(count_flats_oracle(*g33, 2)));
    REQUIRE(enumerate_flats(*g33, 2).size() == 13);  // lines of PG(2,3)

    REQUIRE_THROWS_AS(enumerate_flats(*g, 2, 10), BudgetExceeded);
}

TEST_CASE("complement_flat") {
    auto g = build_geometry(2, 3);
    Flat empty = closure(*g, {});
    Flat whole = complement_flat(*g, empty);
    REQUIRE(whole.rank == 3);

    // complement of a line is a single disjoint point; exhaustive check
    for (const Flat& line : enumerate_flats(*g, 2)) {
        Flat comp = complement_flat(*g, line);
        REQUIRE(comp.rank == 1);
        std::vector<int> inter;
        std::set_intersection(line.points.begin(), line.points.end(), comp.points.begin(),
                              comp.points.end(), std::back_inserter(inter));
        REQUIRE(inter.empty());
        std::vector<int> both = line.points;
        both.insert(both.end(), comp.points.begin(), comp.points.end());
        REQUIRE(rank_of(*g, both) == 3);
    }

    // complement of a hyperplane of PG(3,2) is the smallest-index point off it
    auto g4 = build_geometry(2, 4);
    for (const Flat& h : enumerate_flats(*g4, 3)) {
        Flat comp = complement_flat(*g4, h);
        REQUIRE(comp.rank == 1);
        int smallest_off = 0;
        while (std::binary_search(h.points.begin(), h.points.end(), smallest_off))
            ++smallest_off;
        REQUIRE(comp.points == std::vector<int>{smallest_off});
    }
}

TEST_CASE("local connectivity") {
    auto g4 = build_geometry(2, 4);
    // two skew lines: codes {1,2,3} and {4,8,12} -> indices {0,1,2},{3,7,11}
    REQUIRE(local_connectivity(*g4, {0, 1, 2}, {3, 7, 11}) == 0);
    auto fano = build_geometry(2, 3);
    auto lines = enumerate_flats(*fano, 2);
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            REQUIRE(local_connectivity(*fano, lines[i].points, lines[j].points) == 1);
    Flat f = closure(*fano, {0, 1});
    REQUIRE(local_connectivity(*fano, f.points, f.points) == 2);
}

TEST_CASE("local connectivity equals rank of closure intersection") {
    for (int q : {2, 3}) {
        auto g = build_geometry(q, 3);
        const int N = g->num_points();
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int c = 0; c < N; ++c) {
                    std::vector<int> x{a, b}, y{b, c};
                    Flat cx = closure(*g, x), cy = closure(*g, y);
                    std::vector<int> inter;
                    std::set_intersection(cx.points.begin(), cx.points.end(),
                                          cy.points.begin(), cy.points.end(),
                                          std::back_inserter(inter));
                    REQUIRE(local_connectivity(*g, x, y) == rank_of(*g, inter));
                }
    }
}

TEST_CASE("modularity holds for every pair of flats") {
    for (auto [q, n] : {std::pair{2, 4}, std::pair{3, 3}}) {
        auto g = build_geometry(q, n);
        std::vector<Flat> flats;
        for (int r = 0; r <= n; ++r)
            for (Flat& f : enumerate_flats(*g, r)) flats.push_back(std::move(f));
        for (const Flat& a : flats) {
            for (const Flat& b : flats) {
                std::vector<int> uni = a.points;
                uni.insert(uni.end(), b.points.begin(), b.points.end());
                std::vector<int> inter;
                std::set_intersection(a.points.begin(), a.points.end(), b.points.begin(),
                                      b.points.end(), std::back_inserter(inter));
                REQUIRE(a.rank + b.rank == rank_of(*g, uni) + rank_of(*g, inter));
            }
        }
    }
}

TEST_CASE("every cocircuit spans") {
    auto g = build_geometry(2, 4);
    for (const Flat& h : enumerate_flats(*g, 3)) {
        std::vector<int> cocircuit;
        for (int p = 0; p < g->num_points(); ++p)
            if (!std::binary_search(h.points.begin(), h.points.end(), p))
                cocircuit.push_back(p);
        REQUIRE(rank_of(*g, cocircuit) == 4);
    }
}

TEST_CASE("some triangle meets X, Y and a hyperplane basis") {
    for (int q : {2, 3}) {
        auto g = build_geometry(q, 3);
        const int N = g->num_points();
        for (const Flat& h : enumerate_flats(*g, 2)) {
            std::vector<int> off;
            for (int p = 0; p < N; ++p)
                if (!std::binary_search(h.points.begin(), h.points.end(), p))
                    off.push_back(p);
            // all ordered bases (pairs) of the hyperplane
            for (int b1 : h.points) {
                for (int b2 : h.points) {
                    if (b2 <= b1) continue;
                    std::vector<int> basis{b1, b2};
                    // all bipartitions of the complement with both parts nonempty
                    const int m = static_cast<int>(off.size());
                    for (int mask = 1; mask < (1 << m) - 1; ++mask) {
                        bool found = false;
                        for (int xi = 0; xi < m && !found; ++xi) {
                            if (!(mask & (1 << xi))) continue;
                            for (int yi = 0; yi < m && !found; ++yi) {
                                if (mask & (1 << yi)) continue;
                                for (int b : basis) {
                                    std::vector<int> tri{off[xi], off[yi], b};
                                    std::sort(tri.begin(), tri.end());
                                    if (rank_of(*g, tri) == 2 &&
                                        closure(*g, {tri[0], tri[1]}).points.size() >=
                                            3) {  // genuine 3-point circuit
                                        found = true;
                                        break;
                                    }
                                }
                            }
                        }
                        REQUIRE(found);
                    }
                }
            }
        }
    }
}

TEST_CASE("plane regularity: line length and line count through a point") {
    for (int q : {2, 3, 4}) {
        auto g = build_geometry(q, 3);
        auto lines = enumerate_flats(*g, 2);
        REQUIRE(static_cast<int>(lines.size()) == q * q + q + 1);
        std::vector<int> through(g->num_points(), 0);
        for (const Flat& l : lines) {
            REQUIRE(static_cast<int>(l.points.size()) == q + 1);
            for (int p : l.points) ++through[p];
        }
        for (int t : through) REQUIRE(t == q + 1);
    }
}

TEST_CASE("line_points matches closure of a pair") {
    for (int q : {2, 3, 5}) {
        auto g = build_geometry(q, 3);
        for (int i = 0; i < g->num_points(); i += 2)
            for (int j = i + 1; j < g->num_points(); j += 3)
                REQUIRE(line_points(*g, i, j) == closure(*g, {i, j}).points);
    }
}
