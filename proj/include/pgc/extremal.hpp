// Extremal quantities and constructions: omega/alpha, binary sumset
// profiles, Bose-Burton checks, homogeneous and few-colour flat searches,
// the chain/block/ternary colouring constructions, claw predicates and a
// small geometric Ramsey searcher.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pgc/colouring.hpp"
#include "pgc/geometry.hpp"
#include "pgc/report.hpp"
#include "pgc/rng.hpp"
#include "pgc/structure.hpp"

namespace pgc {

namespace detail {

// Membership bitset over codes 0..2^nbits-1.
class CodeSet {
public:
    explicit CodeSet(int nbits) : words_((std::size_t(1) << nbits) / 64 + 1, 0) {}
    void add(std::uint64_t c) { words_[c >> 6] |= 1ULL << (c & 63); }
    bool has(std::uint64_t c) const { return words_[c >> 6] >> (c & 63) & 1; }

private:
    std::vector<std::uint64_t> words_;
};

// Branch-and-bound search for the largest XOR-closed generator set whose
// projective span stays inside S. Generators are taken in ascending code
// order; the bound prunes on candidate count (k extra generators need at
// least 2^k - 1 new candidates).
class MaxSubspaceSearch {
public:
    MaxSubspaceSearch(int nbits, const std::vector<std::uint64_t>& codes, std::uint64_t budget)
        : member_(nbits), budget_(budget) {
        for (std::uint64_t c : codes)
            if (c) member_.add(c);
        std::vector<std::uint64_t> cands;
        for (std::uint64_t c : codes)
            if (c) cands.push_back(c);
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        span_.push_back(0);
        rec(cands);
    }

    int best_dim() const { return best_; }
    const std::vector<std::uint64_t>& best_generators() const { return best_gens_; }

private:
    static int floor_log2(std::uint64_t x) { return 63 - std::countl_zero(x); }

    void rec(const std::vector<std::uint64_t>& cands) {
        if (static_cast<int>(gens_.size()) > best_) {
            best_ = static_cast<int>(gens_.size());
            best_gens_ = gens_;
        }
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const std::uint64_t remaining = cands.size() - i;
            if (static_cast<int>(gens_.size()) + floor_log2(remaining + 1) <= best_) return;
            if (++nodes_ > budget_) throw BudgetExceeded("subspace search budget exceeded");
            const std::uint64_t y = cands[i];
            std::vector<std::uint64_t> next;
            next.reserve(remaining);
            const std::size_t old_span = span_.size();
            for (std::size_t j = i + 1; j < cands.size(); ++j) {
                const std::uint64_t z = cands[j];
                bool ok = true;
                for (std::size_t k = 0; k < old_span && ok; ++k)
                    ok = member_.has(z ^ y ^ span_[k]);
                if (ok) next.push_back(z);
            }
            gens_.push_back(y);
            for (std::size_t k = 0; k < old_span; ++k) span_.push_back(span_[k] ^ y);
            rec(next);
            span_.resize(old_span);
            gens_.pop_back();
        }
    }

    CodeSet member_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    int best_ = 0;
    std::vector<std::uint64_t> gens_, best_gens_;
    std::vector<std::uint64_t> span_;
};

// Largest dimension of a projective subspace (XOR-closed set minus zero)
// contained in the given nonzero codes.
inline int max_subspace_dim(int nbits, const std::vector<std::uint64_t>& codes,
                            std::uint64_t budget = 200'000'000) {
    return MaxSubspaceSearch(nbits, codes, budget).best_dim();
}

}  // namespace detail

// Rank of the largest flat contained in x. For q=2 a branch-and-bound
// generator search over codes; otherwise descending-rank flat enumeration
// with early exit.
inline int omega(const Geometry& g, std::span<const int> x,
                 std::uint64_t budget = 200'000'000) {
    if (x.empty()) return 0;
    if (g.binary()) {
        std::vector<std::uint64_t> codes;
        codes.reserve(x.size());
        for (int p : x) {
            g.check_point(p);
            codes.push_back(g.code(p));
        }
        return detail::max_subspace_dim(g.n(), codes, budget);
    }
    std::vector<int> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const int hi = rank_of(g, sorted);
    for (int r = hi; r >= 1; --r) {
        for (const Flat& f : enumerate_flats(g, r, budget)) {
            if (std::includes(sorted.begin(), sorted.end(), f.points.begin(), f.points.end()))
                return r;
        }
    }
    return 0;
}

inline int omega(const Geometry& g, std::initializer_list<int> x) {
    return omega(g, std::span<const int>(x.begin(), x.size()));
}

// Profile of a subset of F_2^n \ {0}: omega, alpha, and omega of the sumset.
struct SubsetProfile {
    int n = 0;
    std::vector<std::uint64_t> subset;  // sorted nonzero codes
    std::vector<std::uint64_t> sumset;  // sorted codes of X+X (may contain 0)
    int omega = 0;
    int alpha = 0;
    int sumset_omega = 0;
};

inline SubsetProfile sumset_profile(int n, std::vector<std::uint64_t> x, int n_budget = 20,
                                    std::uint64_t search_budget = 200'000'000) {
    if (n < 1 || n > n_budget)
        throw BudgetExceeded("sumset profile limited to n <= " + std::to_string(n_budget));
    const std::uint64_t limit = std::uint64_t(1) << n;
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    for (std::uint64_t c : x)
        if (c == 0 || c >= limit) throw UsageError("subset codes must lie in [1, 2^n)");

    SubsetProfile out;
    out.n = n;
    out.subset = x;

    // X+X via xor-convolution (Walsh-Hadamard transform of the indicator,
    // squared pointwise): count[z] = #{(a,b) in X^2 : a^b = z}.
    std::vector<std::uint64_t> sums;
    if (!x.empty()) {
        if (x.size() * x.size() <= limit) {
            detail::CodeSet in_sum(n);
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = i; j < x.size(); ++j) {
                    std::uint64_t z = x[i] ^ x[j];
                    if (!in_sum.has(z)) {
                        in_sum.add(z);
                        sums.push_back(z);
                    }
                }
        } else {
            std::vector<std::int64_t> f(limit, 0);
            for (std::uint64_t c : x) f[c] = 1;
            for (std::uint64_t len = 1; len < limit; len <<= 1)
                for (std::uint64_t blk = 0; blk < limit; blk += len << 1)
                    for (std::uint64_t i = blk; i < blk + len; ++i) {
                        std::int64_t a = f[i], b = f[i + len];
                        f[i] = a + b;
                        f[i + len] = a - b;
                    }
            for (auto& v : f) v *= v;
            for (std::uint64_t len = 1; len < limit; len <<= 1)
                for (std::uint64_t blk = 0; blk < limit; blk += len << 1)
                    for (std::uint64_t i = blk; i < blk + len; ++i) {
                        std::int64_t a = f[i], b = f[i + len];
                        f[i] = a + b;
                        f[i + len] = a - b;
                    }
            for (std::uint64_t z = 0; z < limit; ++z)
                if (f[z] != 0) sums.push_back(z);  // counts carry a 2^n factor
        }
    }
    std::sort(sums.begin(), sums.end());
    out.sumset = sums;

    out.omega = detail::max_subspace_dim(n, x, search_budget);
    std::vector<std::uint64_t> comp;
    {
        detail::CodeSet in_x(n);
        for (std::uint64_t c : x) in_x.add(c);
        for (std::uint64_t c = 1; c < limit; ++c)
            if (!in_x.has(c)) comp.push_back(c);
    }
    out.alpha = detail::max_subspace_dim(n, comp, search_budget);
    std::vector<std::uint64_t> nz_sums;
    for (std::uint64_t c : sums)
        if (c) nz_sums.push_back(c);
    out.sumset_omega = detail::max_subspace_dim(n, nz_sums, search_budget);
    return out;
}

// Checks, over all (or sampled) subsets X of F_2^n \ {0}, that a subset with
// no (t+1)-dimensional projective subspace has |X| <= (1 - 2^-t) 2^n, and
// that |X| >= 2^(n - alpha(X)) - 1 holds unconditionally.
inline VerificationReport bose_burton_check(int n, int t, bool exhaustive,
                                            std::uint64_t samples = 0, std::uint64_t seed = 0,
                                            std::uint64_t search_budget = 200'000'000) {
    if (n < 1 || t < 0) throw UsageError("bose_burton_check needs n >= 1, t >= 0");
    const int N = (1 << n) - 1;  // nonzero vectors
    if (exhaustive && N >= 25)
        throw BudgetExceeded("exhaustive Bose-Burton sweep limited to 2^n - 1 < 25 points");
    if (!exhaustive && N > 63)
        throw BudgetExceeded("sampled Bose-Burton sweep limited to 2^n - 1 <= 63 points");
    WallClock clock;
    VerificationReport rep;
    rep.theorem = "bose_burton";
    rep.family = (exhaustive ? "all " : "sampled ") + std::string("subsets of F_2^") +
                 std::to_string(n) + " \\ {0}, t=" + std::to_string(t);
    GeometryPtr g = build_geometry(2, n);

    const std::uint64_t size_bound = (std::uint64_t(1) << n) - (std::uint64_t(1) << (n - std::min(n, t)));
    SplitMix64 rng(seed);
    const std::uint64_t total = exhaustive ? (std::uint64_t(1) << N) : samples;
    for (std::uint64_t it = 0; it < total; ++it) {
        const std::uint64_t mask =
            exhaustive ? it : (rng.next() & ((std::uint64_t(1) << N) - 1));
        std::vector<std::uint64_t> codes, comp;
        for (int p = 0; p < N; ++p)
            (mask >> p & 1 ? codes : comp).push_back(g->code(p));
        const int w = detail::max_subspace_dim(n, codes, search_budget);
        const int alpha = detail::max_subspace_dim(n, comp, search_budget);
        ++rep.instances_checked;

        std::string bad;
        if (w < t + 1 && codes.size() > size_bound)
            bad = "subset of size " + std::to_string(codes.size()) +
                  " without a rank-" + std::to_string(t + 1) + " subspace exceeds " +
                  std::to_string(size_bound);
        const std::uint64_t lower = (std::uint64_t(1) << (n - alpha)) - 1;
        if (bad.empty() && codes.size() < lower)
            bad = "subset of size " + std::to_string(codes.size()) + " with alpha " +
                  std::to_string(alpha) + " below bound " + std::to_string(lower);
        if (!bad.empty()) {
            std::vector<int> cols(N);
            for (int p = 0; p < N; ++p) cols[p] = mask >> p & 1;
            rep.record_violation(make_colouring(g, cols, 2), bad);
        }
    }
    rep.wall_time_s = clock.seconds();
    return rep;
}

// Greedily maximal triangle-free subset of F_2^n \ {0}, smallest codes first.
inline std::vector<std::uint64_t> greedy_max_trianglefree(int n) {
    const std::uint64_t limit = std::uint64_t(1) << n;
    detail::CodeSet chosen(n);
    std::vector<std::uint64_t> out;
    for (std::uint64_t c = 1; c < limit; ++c) {
        bool ok = true;
        for (std::uint64_t a : out) {
            if (chosen.has(a ^ c)) { ok = false; break; }
        }
        if (ok) {
            chosen.add(c);
            out.push_back(c);
        }
    }
    return out;
}

// Canonical chain colouring: F_i is the span of the i smallest standard
// basis points, i.e. exactly the points with code < q^i, so the layer of a
// point is floor(log_q(code)) + 1.
inline Colouring construct_chain_colouring(int q, int n, const std::vector<int>& assignment) {
    if (static_cast<int>(assignment.size()) != n)
        throw UsageError("chain colouring needs one colour per layer");
    GeometryPtr g = build_geometry(q, n);
    std::vector<int> colours(g->num_points());
    int s = 0;
    for (int a : assignment) {
        if (a < 0) throw UsageError("negative colour id");
        s = std::max(s, a + 1);
    }
    std::uint64_t bound = q;
    int layer = 0;
    for (int i = 0; i < g->num_points(); ++i) {
        while (g->code(i) >= bound) {
            bound *= q;
            ++layer;
        }
        colours[i] = assignment[layer];
    }
    return make_colouring(std::move(g), std::move(colours), s);
}

// Mutually skew flats of near-equal rank with spanning union, one per
// unordered colour pair, each independently 2-coloured from a seeded stream.
inline DecompositionSequence construct_block_sequence(int q, int n, int k,
                                                      std::uint64_t seed) {
    if (k < 2) throw UsageError("block colouring needs k >= 2");
    const int t = k * (k - 1) / 2;
    if (n < t)
        throw UsageError("block colouring needs n >= binom(k,2) = " + std::to_string(t));
    GeometryPtr g = build_geometry(q, n);

    // basis points in canonical order: codes q^0, q^1, ..., q^(n-1)
    std::vector<int> basis(n);
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i, c *= q) basis[i] = g->index_of_code(c);

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) pairs.emplace_back(a, b);

    DecompositionSequence seq;
    seq.geom = g;
    seq.s = k;
    SplitMix64 rng(seed);
    int at = 0;
    for (int i = 0; i < t; ++i) {
        int r = n / t + (i < n % t ? 1 : 0);
        std::vector<int> gen(basis.begin() + at, basis.begin() + at + r);
        at += r;
        FlatColouring part;
        part.flat = closure(*g, gen);
        part.colours.reserve(part.flat.points.size());
        for (std::size_t j = 0; j < part.flat.points.size(); ++j)
            part.colours.push_back(rng.next() & 1 ? pairs[i].second : pairs[i].first);
        seq.parts.push_back(std::move(part));
    }
    return seq;
}

// The composed block colouring.
inline Colouring construct_block_colouring(int q, int n, int k, std::uint64_t seed) {
    return lift_join_many(construct_block_sequence(q, n, k, seed));
}

// 2-colouring of PG(n-1,3) whose colour-0 class is the canonical
// rank-ceil(n/2) chain flat.
inline Colouring construct_ternary_extremal(int n) {
    if (n < 2) throw UsageError("ternary extremal construction needs n >= 2");
    GeometryPtr g = build_geometry(3, n);
    const int half = (n + 1) / 2;
    std::uint64_t bound = 1;
    for (int i = 0; i < half; ++i) bound *= 3;
    std::vector<int> colours(g->num_points());
    for (int i = 0; i < g->num_points(); ++i) colours[i] = g->code(i) < bound ? 0 : 1;
    return make_colouring(std::move(g), std::move(colours), 2);
}

struct HomogeneousResult {
    int avoided_colour = -1;
    Flat flat;
    int rank = 0;
};

namespace detail {

// Lexicographically first rank-r flat whose points avoid `blocked`.
inline Flat first_flat_avoiding(const Geometry& g, int r, const std::vector<char>& blocked,
                                std::uint64_t budget) {
    if (r == 0) return empty_flat();
    for (const Flat& f : enumerate_flats(g, r, budget)) {
        bool ok = true;
        for (int p : f.points)
            if (blocked[p]) { ok = false; break; }
        if (ok) return f;
    }
    throw TheoremViolation("no flat at the rank omega reported");
}

}  // namespace detail

// Over all colours i in [0,s): the maximum-rank flat containing no colour-i
// point; ties broken by smaller colour id, then lexicographic flat.
inline HomogeneousResult homogeneous_search(const Colouring& c,
                                            std::uint64_t budget = 200'000'000) {
    const Geometry& g = c.g();
    HomogeneousResult best;
    best.rank = -1;
    for (int i = 0; i < c.s; ++i) {
        std::vector<int> allowed;
        for (int p = 0; p < g.num_points(); ++p)
            if (c.colours[p] != i) allowed.push_back(p);
        int r = omega(g, allowed, budget);
        if (r > best.rank) {
            best.rank = r;
            best.avoided_colour = i;
        }
    }
    std::vector<char> blocked(g.num_points(), 0);
    for (int p = 0; p < g.num_points(); ++p)
        if (c.colours[p] == best.avoided_colour) blocked[p] = 1;
    best.flat = detail::first_flat_avoiding(g, best.rank, blocked, budget);
    return best;
}

struct FewColourResult {
    std::vector<int> colours;  // distinct colours used in the flat
    Flat flat;
    int rank = 0;
};

// Maximum-rank flat using at most l colours: descending rank, first flat in
// lexicographic order wins.
inline FewColourResult few_colour_flat_search(const Colouring& c, int l,
                                              std::uint64_t budget = 1'000'000) {
    if (l < 1 || l > num_used_colours(c))
        throw UsageError("few-colour bound l must be in [1, |c|]");
    const Geometry& g = c.g();
    for (int r = g.n(); r >= 1; --r) {
        for (const Flat& f : enumerate_flats(g, r, budget)) {
            if (detail::distinct_colours(c, f.points) <= l) {
                FewColourResult out;
                out.colours = colours_on(c, f.points);
                out.flat = f;
                out.rank = r;
                return out;
            }
        }
    }
    FewColourResult out;
    out.flat = empty_flat();
    return out;
}

struct ClawReport {
    bool claw_free = false;       // neither basis nor complement pattern embeds
    bool even_plane = false;      // |class-1 n P| even for every plane P
    int omega_class0 = 0;
    int omega_class1 = 0;
    bool even_plane_bound_ok = true;  // even_plane => omega(class0) >= ceil(n/2)-1
};

// Predicates for 2-colourings of binary geometries relating to the Fano
// basis pattern.
inline ClawReport claw_predicates(const Colouring& c, std::uint64_t budget = 200'000'000) {
    const Geometry& g = c.g();
    if (!g.binary() || c.s != 2) throw UsageError("claw predicates need q=2 and s=2");
    ClawReport out;

    GeometryPtr fano = build_geometry(2, 3);
    // the standard basis points of the Fano plane: codes 1, 2, 4
    std::vector<int> basis_cols(fano->num_points(), 0);
    for (std::uint64_t code : {1, 2, 4}) basis_cols[fano->index_of_code(code)] = 1;
    Colouring basis_pattern = make_colouring(fano, basis_cols, 2);
    std::vector<int> comp_cols(fano->num_points());
    for (int i = 0; i < fano->num_points(); ++i) comp_cols[i] = 1 - basis_cols[i];
    Colouring comp_pattern = make_colouring(fano, comp_cols, 2);

    out.claw_free = !contains_pattern(c, basis_pattern).has_value() &&
                    !contains_pattern(c, comp_pattern).has_value();

    out.even_plane = true;
    if (g.n() >= 3) {
        for (const Flat& p : enumerate_flats(g, 3)) {
            int cnt = 0;
            for (int e : p.points) cnt += c.colours[e];
            if (cnt % 2 != 0) {
                out.even_plane = false;
                break;
            }
        }
    }

    std::vector<int> class0, class1;
    for (int p = 0; p < g.num_points(); ++p)
        (c.colours[p] ? class1 : class0).push_back(p);
    out.omega_class0 = omega(g, class0, budget);
    out.omega_class1 = omega(g, class1, budget);
    if (out.even_plane)
        out.even_plane_bound_ok = out.omega_class0 >= (g.n() + 1) / 2 - 1;
    return out;
}

struct RamseyResult {
    std::optional<int> exact;  // set iff decided within n_max and budget
    int lower = 1;             // R > lower - 1 established
    std::optional<int> upper;  // set iff some n was proved sufficient
    bool budget_exhausted = false;
};

namespace detail {

// Counterexample search: a red/blue colouring of PG(n-1,q) with no red
// rank-s and no blue rank-t monochromatic flat, by DFS over points with
// flat-completion pruning. When s == t, point 0 is fixed red (colour swap
// symmetry).
inline bool ramsey_counterexample(const Geometry& g, int s, int t, std::uint64_t budget,
                                  std::uint64_t& nodes) {
    const int N = g.num_points();
    std::vector<std::vector<int>> sflats_at(N), tflats_at(N);
    std::vector<std::vector<int>> sflats, tflats;
    if (s <= g.n())
        for (const Flat& f : enumerate_flats(g, s)) sflats.push_back(f.points);
    if (t <= g.n())
        for (const Flat& f : enumerate_flats(g, t)) tflats.push_back(f.points);
    for (std::size_t i = 0; i < sflats.size(); ++i)
        sflats_at[sflats[i].back()].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < tflats.size(); ++i)
        tflats_at[tflats[i].back()].push_back(static_cast<int>(i));

    std::vector<int> colour(N, -1);  // 0 red, 1 blue
    auto completes = [&](int p, int col) {
        const auto& idx = col == 0 ? sflats_at[p] : tflats_at[p];
        const auto& flats = col == 0 ? sflats : tflats;
        for (int fi : idx) {
            bool mono = true;
            for (int e : flats[fi]) {
                if (colour[e] != col) { mono = false; break; }
            }
            if (mono) return true;
        }
        return false;
    };
    auto rec = [&](auto&& self, int p) -> bool {
        if (p == N) return true;
        if (++nodes > budget) throw BudgetExceeded("ramsey search budget exceeded");
        const int last = (p == 0 && s == t) ? 0 : 1;  // colour-swap symmetry
        for (int col = 0; col <= last; ++col) {
            colour[p] = col;
            if (!completes(p, col) && self(self, p + 1)) return true;
        }
        colour[p] = -1;
        return false;
    };
    // rank-0 flats are monochromatic in both colours vacuously
    if (s == 0 || t == 0) return false;
    return rec(rec, 0);
}

}  // namespace detail

// Smallest n <= n_max such that every red/blue colouring of PG(n-1,q) has a
// red rank-s or blue rank-t monochromatic flat; bounds if undecided.
inline RamseyResult ramsey_search(int q, int s, int t, int n_max,
                                  std::uint64_t budget = 500'000'000) {
    RamseyResult out;
    std::uint64_t nodes = 0;
    for (int n = 1; n <= n_max; ++n) {
        GeometryPtr g = build_geometry(q, n);
        bool counterexample;
        try {
            counterexample = detail::ramsey_counterexample(*g, s, t, budget, nodes);
        } catch (const BudgetExceeded&) {
            out.budget_exhausted = true;
            return out;
        }
        if (!counterexample) {
            out.exact = n;
            out.upper = n;
            return out;
        }
        out.lower = n + 1;
    }
    return out;
}

}  // namespace pgc
