// Decomposers, lift-joins, full decomposition into two-coloured parts, and
// target chains. Everything operates in host point indices; restrictions to
// flats are handled by enumerating the restriction's flats through a local
// copy of the smaller geometry and mapping back.
#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <span>
#include <vector>

#include "pgc/colouring.hpp"
#include "pgc/geometry.hpp"

namespace pgc {

// A colouring of a single flat; colours[i] belongs to flat.points[i].
struct FlatColouring {
    Flat flat;
    std::vector<int> colours;

    int colour_at(int point) const {
        auto it = std::lower_bound(flat.points.begin(), flat.points.end(), point);
        if (it == flat.points.end() || *it != point)
            throw UsageError("point is not in the flat");
        return colours[it - flat.points.begin()];
    }
};

inline FlatColouring restrict_to(const Colouring& c, Flat f) {
    FlatColouring out;
    out.colours.reserve(f.points.size());
    for (int p : f.points) out.colours.push_back(c.colours[p]);
    out.flat = std::move(f);
    return out;
}

// True iff for every point e of `domain` off f, cl(f u {e}) - f is
// monochromatic. `domain` must be a flat containing f; defaults to the whole
// geometry. f must be a proper subflat of the domain.
inline bool is_decomposer(const Colouring& c, const Flat& f, const Flat* domain = nullptr) {
    const Geometry& g = c.g();
    const std::vector<int>* dom_pts = nullptr;
    std::vector<int> all;
    if (domain) {
        dom_pts = &domain->points;
    } else {
        all.resize(g.num_points());
        std::iota(all.begin(), all.end(), 0);
        dom_pts = &all;
    }
    if (f.points.size() >= dom_pts->size()) throw UsageError("decomposer flat must be proper");

    std::vector<char> in_f(g.num_points(), 0);
    for (int p : f.points) in_f[p] = 1;
    std::vector<char> seen = in_f;
    std::vector<int> gen = f.points;
    gen.push_back(-1);
    for (int e : *dom_pts) {
        if (seen[e]) continue;
        gen.back() = e;
        Flat ext = closure(g, gen);
        int colour = -1;
        for (int p : ext.points) {
            if (in_f[p]) continue;
            seen[p] = 1;
            if (colour < 0) colour = c.colours[p];
            else if (c.colours[p] != colour) return false;
        }
    }
    return true;
}

namespace detail {

// All rank-r flats of the restriction to `domain`, in host indices, sorted
// lexicographically by point set. Enumerated through a local PG(d-1,q) whose
// coordinates are taken over the domain's basis.
inline std::vector<Flat> flats_of_restriction(const Geometry& g, const Flat& domain, int r,
                                              std::uint64_t max_flats = 1'000'000) {
    if (domain.rank == g.n()) return enumerate_flats(g, r, max_flats);
    if (r > domain.rank) return {};
    if (r == 0) return {empty_flat()};
    GeometryPtr local = build_geometry(g.q(), domain.rank);
    const Field& F = g.field();
    std::vector<Flat> out;
    for (const Flat& lf : enumerate_flats(*local, r, max_flats)) {
        Flat hf;
        hf.rank = r;
        hf.points.reserve(lf.points.size());
        Vec acc(g.n());
        auto map_vec = [&](const Vec& lv) {
            std::fill(acc.begin(), acc.end(), 0);
            for (int j = 0; j < domain.rank; ++j) {
                if (lv[j] == 0) continue;
                for (int i = 0; i < g.n(); ++i)
                    acc[i] = static_cast<std::uint8_t>(
                        F.add(acc[i], F.mul(lv[j], domain.basis[j][i])));
            }
        };
        for (int lp : lf.points) {
            map_vec(local->point(lp));
            hf.points.push_back(g.index_of(acc));
        }
        std::sort(hf.points.begin(), hf.points.end());
        for (const Vec& lrow : lf.basis) {
            map_vec(lrow);
            Vec row = acc;
            g.normalize(row);
            hf.basis.push_back(std::move(row));
        }
        rref(F, hf.basis);
        out.push_back(std::move(hf));
    }
    std::sort(out.begin(), out.end(),
              [](const Flat& a, const Flat& b) { return a.points < b.points; });
    return out;
}

}  // namespace detail

// Minimal-rank, lexicographically-first nonempty decomposer of the
// restriction to `domain` (whole geometry by default), or absent.
inline std::optional<Flat> find_decomposer(const Colouring& c, const Flat* domain = nullptr,
                                           std::uint64_t max_flats = 1'000'000) {
    const Geometry& g = c.g();
    Flat whole;
    if (!domain) {
        whole = whole_flat(g);
        domain = &whole;
    }
    for (int r = 1; r < domain->rank; ++r) {
        for (const Flat& f : detail::flats_of_restriction(g, *domain, r, max_flats)) {
            if (is_decomposer(c, f, domain)) return f;
        }
    }
    return std::nullopt;
}

// Lift-join c1 (x) c2 of colourings of skew flats: agrees with c1 on f1, and
// each point e off f1 inherits the colour of the unique point of f2 inside
// cl(f1 u {e}).
inline FlatColouring lift_join(const Geometry& g, const FlatColouring& a,
                               const FlatColouring& b) {
    if (local_connectivity(g, a.flat.points, b.flat.points) != 0)
        throw NotSkew("lift_join requires skew flats");
    std::vector<int> gen = a.flat.points;
    gen.insert(gen.end(), b.flat.points.begin(), b.flat.points.end());
    Flat target = closure(g, gen);

    std::vector<char> in_a(g.num_points(), 0);
    for (int p : a.flat.points) in_a[p] = 1;

    FlatColouring out;
    out.colours.resize(target.points.size());

    if (g.binary()) {
        // Echelon rows over codes, each paired with its component inside
        // span(f2); solving e against the rows yields that component.
        std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
        auto insert = [&](std::uint64_t v, std::uint64_t bpart) {
            for (auto& [row, bp] : rows) {
                int hb = 63 - std::countl_zero(row);
                if (v & (1ULL << hb)) { v ^= row; bpart ^= bp; }
            }
            if (v) {
                rows.emplace_back(v, bpart);
                std::sort(rows.begin(), rows.end(),
                          [](auto& x, auto& y) { return x.first > y.first; });
            }
        };
        for (const Vec& row : a.flat.basis) insert(g.code_of(row), 0);
        for (const Vec& row : b.flat.basis) insert(g.code_of(row), g.code_of(row));
        for (std::size_t t = 0; t < target.points.size(); ++t) {
            int e = target.points[t];
            if (in_a[e]) {
                out.colours[t] = a.colour_at(e);
                continue;
            }
            std::uint64_t v = g.code(e), bacc = 0;
            for (auto& [row, bp] : rows) {
                int hb = 63 - std::countl_zero(row);
                if (v & (1ULL << hb)) { v ^= row; bacc ^= bp; }
            }
            if (v != 0 || bacc == 0)
                throw TheoremViolation("lift_join projection failed");
            out.colours[t] = b.colour_at(g.index_of_code(bacc));
        }
    } else {
        const Field& F = g.field();
        struct Row { Vec val; Vec bpart; };
        std::vector<Row> rows;
        auto reduce = [&](Vec& v, Vec& bacc) {
            for (const Row& r : rows) {
                int piv = 0;
                while (r.val[piv] == 0) ++piv;
                if (v[piv] == 0) continue;
                int f = v[piv];
                for (int j = 0; j < g.n(); ++j) {
                    v[j] = static_cast<std::uint8_t>(F.sub(v[j], F.mul(f, r.val[j])));
                    bacc[j] = static_cast<std::uint8_t>(F.add(bacc[j], F.mul(f, r.bpart[j])));
                }
            }
        };
        auto insert = [&](const Vec& value, const Vec& bpart) {
            Vec v = value, bacc(g.n(), 0);
            reduce(v, bacc);
            if (std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; })) return;
            // v = value - combination; its f2-component is bpart - bacc.
            Vec bp(g.n());
            for (int j = 0; j < g.n(); ++j)
                bp[j] = static_cast<std::uint8_t>(F.sub(bpart[j], bacc[j]));
            rows.push_back(Row{std::move(v), std::move(bp)});
            std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
                int px = 0, py = 0;
                while (x.val[px] == 0) ++px;
                while (y.val[py] == 0) ++py;
                return px < py;
            });
        };
        Vec zero(g.n(), 0);
        for (const Vec& row : a.flat.basis) insert(row, zero);
        for (const Vec& row : b.flat.basis) insert(row, row);
        for (std::size_t t = 0; t < target.points.size(); ++t) {
            int e = target.points[t];
            if (in_a[e]) {
                out.colours[t] = a.colour_at(e);
                continue;
            }
            Vec v = g.point(e), bacc(g.n(), 0);
            reduce(v, bacc);
            if (!std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; }))
                throw TheoremViolation("lift_join point outside the joined span");
            if (std::all_of(bacc.begin(), bacc.end(), [](std::uint8_t x) { return x == 0; }))
                throw TheoremViolation("lift_join projection vanished");
            out.colours[t] = b.colour_at(g.index_of(bacc));
        }
    }
    out.flat = std::move(target);
    return out;
}

// An ordered decomposition c = (c|F_1) (x) ... (x) (c|F_t) into mutually skew
// nonempty flats.
struct DecompositionSequence {
    GeometryPtr geom;
    std::vector<FlatColouring> parts;
    int s = 0;  // declared colour count carried from the source colouring
};

// Left fold of lift_join over the parts; the parts must be nonempty,
// mutually skew, and their union must span.
inline Colouring lift_join_many(const DecompositionSequence& seq) {
    if (seq.parts.empty()) throw UsageError("empty decomposition sequence");
    const Geometry& g = *seq.geom;
    for (const FlatColouring& p : seq.parts)
        if (p.flat.points.empty()) throw UsageError("decomposition part is empty");
    FlatColouring acc = seq.parts[0];
    for (std::size_t i = 1; i < seq.parts.size(); ++i) acc = lift_join(g, acc, seq.parts[i]);
    if (acc.flat.rank != g.n()) throw UsageError("decomposition parts do not span");
    int s = seq.s;
    if (s == 0) {
        for (int col : acc.colours) s = std::max(s, col + 1);
    }
    return make_colouring(seq.geom, acc.colours, s);
}

namespace detail {

inline void decompose_rec(const Colouring& c, const Flat& domain,
                          std::vector<FlatColouring>& out) {
    const Geometry& g = c.g();
    if (domain.points.empty()) return;
    if (domain.rank <= 1 || distinct_colours(c, domain.points) <= 2) {
        out.push_back(restrict_to(c, domain));
        return;
    }
    std::optional<Flat> f = find_decomposer(c, &domain);
    if (!f)
        throw TheoremViolation(
            "rainbow-triangle-free colouring with >= 3 colours has no decomposer");
    Flat comp = complement_within(g, *f, domain.points, domain.rank);
    decompose_rec(c, *f, out);
    decompose_rec(c, comp, out);
}

}  // namespace detail

// Recursive decomposition of a rainbow-triangle-free colouring into mutually
// skew parts, each using at most two colours: find a minimal decomposer,
// take its canonical complement, recurse on both restrictions (decomposer
// side first). Recomposing with lift_join_many reproduces the input exactly.
inline DecompositionSequence decompose(const Colouring& c) {
    if (auto t = find_rainbow_triangle(c))
        throw RainbowTriangleError(*t, "cannot decompose: rainbow triangle present");
    DecompositionSequence seq;
    seq.geom = c.geom;
    seq.s = c.s;
    detail::decompose_rec(c, whole_flat(c.g()), seq.parts);
    return seq;
}

// A chain of flats, empty first, whose successive differences are
// monochromatic; layer_colours[i] colours flats[i+1] - flats[i].
struct TargetChain {
    std::vector<Flat> flats;
    std::vector<int> layer_colours;
};

namespace detail {

inline bool target_rec(const Colouring& c, Flat domain, std::vector<Flat>& chain,
                       std::vector<int>& layers) {
    if (domain.points.empty()) {
        chain.push_back(empty_flat());
        return true;
    }
    const Geometry& g = c.g();
    for (int kappa : colours_on(c, domain.points)) {
        std::vector<int> other;
        for (int p : domain.points)
            if (c.colours[p] != kappa) other.push_back(p);
        Flat f = closure(g, other);
        if (f.points.size() == domain.points.size()) continue;  // not proper
        if (target_rec(c, f, chain, layers)) {
            layers.push_back(kappa);
            chain.push_back(std::move(domain));
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Greedy top-down target test: for each colour kappa (ascending), the
// closure of the non-kappa points is the minimal candidate for the next flat
// down; the candidate works whenever any chain exists. Returns an
// irredundant chain (consecutive layer colours differ) or absent.
inline std::optional<TargetChain> is_target(const Colouring& c, const Flat* domain = nullptr) {
    TargetChain tc;
    Flat dom = domain ? *domain : whole_flat(c.g());
    if (!detail::target_rec(c, std::move(dom), tc.flats, tc.layer_colours))
        return std::nullopt;
    return tc;
}

// Independent route used for cross-validation: a coloured geometry is a
// target iff it decomposes into monochromatic flats (decomposer + complement
// recursion, any decomposer works). Returns the monochromatic parts.
inline std::optional<std::vector<FlatColouring>> target_via_mono_decomposition(
    const Colouring& c, const Flat* domain = nullptr) {
    const Geometry& g = c.g();
    Flat dom = domain ? *domain : whole_flat(g);
    if (dom.points.empty()) return std::vector<FlatColouring>{};
    if (detail::distinct_colours(c, dom.points) <= 1) {
        return std::vector<FlatColouring>{restrict_to(c, dom)};
    }
    std::optional<Flat> f = find_decomposer(c, &dom);
    if (!f) return std::nullopt;
    Flat comp = complement_within(g, *f, dom.points, dom.rank);
    auto left = target_via_mono_decomposition(c, &*f);
    if (!left) return std::nullopt;
    auto right = target_via_mono_decomposition(c, &comp);
    if (!right) return std::nullopt;
    left->insert(left->end(), right->begin(), right->end());
    return left;
}

}  // namespace pgc
