// PG(n-1,q) with exact subspace arithmetic: canonical point enumeration,
// closure, rank, flat enumeration, complements and local connectivity.
//
// Point convention: a point is the canonical representative of a projective
// equivalence class, scaled so its first nonzero coordinate is 1. The code of
// a vector is its base-q value with coordinate 1 most significant; points are
// indexed in ascending code order. For q=2 the code is the coordinate bitmask
// and point index == code - 1.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgc/error.hpp"
#include "pgc/gf.hpp"

namespace pgc {

using Vec = std::vector<std::uint8_t>;

struct Flat {
    std::vector<int> points;  // sorted point indices
    std::vector<Vec> basis;   // reduced row echelon rows, pivot columns ascending
    int rank = 0;

    bool operator==(const Flat& o) const { return points == o.points; }
};

class Geometry {
public:
    Geometry(int q, int n, std::size_t max_points)
        : field_(q), n_(n) {
        if (n < 1) throw UsageError("geometry rank must be at least 1");
        std::uint64_t npoints = 1, qpow = 1;
        for (int i = 0; i < n; ++i) {
            qpow *= static_cast<std::uint64_t>(q);
            if (i + 1 < n) npoints = npoints * q + 1;  // 1 + q + ... + q^(n-1)
            if (npoints > max_points)
                throw BudgetExceeded("point count of PG(" + std::to_string(n - 1) + "," +
                                     std::to_string(q) + ") exceeds budget " +
                                     std::to_string(max_points));
        }
        qpow_n_ = qpow;
        code_to_index_.assign(qpow, -1);
        pts_.reserve(npoints);
        Vec v(n, 0);
        for (std::uint64_t code = 1; code < qpow; ++code) {
            decode(code, v);
            int first = 0;
            while (v[first] == 0) ++first;
            if (v[first] != 1) continue;
            code_to_index_[code] = static_cast<int>(pts_.size());
            pts_.push_back(v);
            codes_.push_back(code);
        }
    }

    const Field& field() const { return field_; }
    int q() const { return field_.q(); }
    int n() const { return n_; }
    bool binary() const { return field_.q() == 2; }
    int num_points() const { return static_cast<int>(pts_.size()); }
    const Vec& point(int i) const { return pts_[i]; }
    std::uint64_t code(int i) const { return codes_[i]; }

    std::uint64_t code_of(std::span<const std::uint8_t> v) const {
        std::uint64_t c = 0;
        for (int i = 0; i < n_; ++i) c = c * field_.q() + v[i];
        return c;
    }

    void decode(std::uint64_t code, Vec& out) const {
        out.resize(n_);
        for (int i = n_ - 1; i >= 0; --i) {
            out[i] = static_cast<std::uint8_t>(code % field_.q());
            code /= field_.q();
        }
    }

    // Scale so the first nonzero coordinate equals 1. v must be nonzero.
    void normalize(Vec& v) const {
        int first = 0;
        while (first < n_ && v[first] == 0) ++first;
        if (first == n_) throw UsageError("cannot normalize the zero vector");
        if (v[first] == 1) return;
        int s = field_.inv(v[first]);
        for (auto& x : v) x = static_cast<std::uint8_t>(field_.mul(x, s));
    }

    int index_of_code(std::uint64_t code) const {
        return code < qpow_n_ ? code_to_index_[code] : -1;
    }

    // Point index of an arbitrary nonzero vector.
    int index_of(Vec v) const {
        normalize(v);
        int idx = index_of_code(code_of(v));
        if (idx < 0) throw UsageError("vector does not normalize to a canonical point");
        return idx;
    }

    void check_point(int i) const {
        if (i < 0 || i >= num_points())
            throw UsageError("point index " + std::to_string(i) + " out of range");
    }

private:
    Field field_;
    int n_;
    std::uint64_t qpow_n_ = 0;
    std::vector<Vec> pts_;
    std::vector<std::uint64_t> codes_;
    std::vector<std::int32_t> code_to_index_;
};

using GeometryPtr = std::shared_ptr<const Geometry>;

inline GeometryPtr build_geometry(int q, int n, std::size_t max_points = 1'000'000) {
    return std::make_shared<const Geometry>(q, n, max_points);
}

namespace detail {

// Reduced row echelon form over GF(q); returns the rank. Zero rows dropped,
// surviving rows have ascending pivot columns and leading coefficient 1.
inline int rref(const Field& F, std::vector<Vec>& rows) {
    if (rows.empty()) return 0;
    const int ncols = static_cast<int>(rows[0].size());
    int r = 0;
    for (int col = 0; col < ncols && r < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i) {
            if (rows[i][col] != 0) { pivot = i; break; }
        }
        if (pivot < 0) continue;
        std::swap(rows[r], rows[pivot]);
        if (rows[r][col] != 1) {
            int s = F.inv(rows[r][col]);
            for (auto& x : rows[r]) x = static_cast<std::uint8_t>(F.mul(x, s));
        }
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            int f = rows[i][col];
            for (int j = 0; j < ncols; ++j)
                rows[i][j] = static_cast<std::uint8_t>(F.sub(rows[i][j], F.mul(f, rows[r][j])));
        }
        ++r;
    }
    rows.resize(r);
    return r;
}

// Incremental reduced XOR basis over GF(2) codes. at_[k] holds the row whose
// highest set bit is k; every pivot bit appears in exactly one row.
class XorBasis {
public:
    explicit XorBasis(int bits) : at_(bits, 0) {}

    std::uint64_t reduce(std::uint64_t v) const {
        while (v) {
            int h = 63 - std::countl_zero(v);
            if (!at_[h]) break;
            v ^= at_[h];
        }
        return v;
    }

    bool contains(std::uint64_t v) const { return reduce(v) == 0; }

    // Inserts v if independent; returns whether the rank grew.
    bool insert(std::uint64_t v) {
        v = reduce(v);
        if (!v) return false;
        int h = 63 - std::countl_zero(v);
        for (auto& row : at_)
            if (row & (1ULL << h)) row ^= v;
        at_[h] = v;
        ++rank_;
        return true;
    }

    int rank() const { return rank_; }

    // Rows with pivot column ascending (pivot bit descending).
    std::vector<std::uint64_t> rows() const {
        std::vector<std::uint64_t> out;
        for (int h = static_cast<int>(at_.size()) - 1; h >= 0; --h)
            if (at_[h]) out.push_back(at_[h]);
        return out;
    }

private:
    std::vector<std::uint64_t> at_;
    int rank_ = 0;
};

// All canonical points in the span of RREF rows, as sorted point indices.
// A combination is canonical iff its first nonzero coefficient is 1, so the
// span is enumerated without deduplication.
inline std::vector<int> span_points(const Geometry& g, const std::vector<Vec>& rows) {
    const int r = static_cast<int>(rows.size());
    std::vector<int> out;
    if (r == 0) return out;
    if (g.binary()) {
        std::vector<std::uint64_t> codes(r);
        for (int i = 0; i < r; ++i) codes[i] = g.code_of(rows[i]);
        std::vector<std::uint64_t> span{0};
        span.reserve(1ULL << r);
        for (int i = 0; i < r; ++i) {
            const std::size_t sz = span.size();
            for (std::size_t j = 0; j < sz; ++j) span.push_back(span[j] ^ codes[i]);
        }
        for (std::uint64_t c : span)
            if (c) out.push_back(g.index_of_code(c));
        std::sort(out.begin(), out.end());
        return out;
    }
    const Field& F = g.field();
    const int q = F.q();
    const int n = g.n();
    Vec acc(n);
    std::vector<int> coeff(r, 0);
    for (int lead = 0; lead < r; ++lead) {
        // coeff[lead] = 1, coefficients before lead are 0, the rest iterate.
        std::fill(coeff.begin(), coeff.end(), 0);
        coeff[lead] = 1;
        while (true) {
            for (int j = 0; j < n; ++j) acc[j] = rows[lead][j];
            for (int i = lead + 1; i < r; ++i) {
                if (coeff[i] == 0) continue;
                for (int j = 0; j < n; ++j)
                    acc[j] = static_cast<std::uint8_t>(F.add(acc[j], F.mul(coeff[i], rows[i][j])));
            }
            out.push_back(g.index_of_code(g.code_of(acc)));
            int pos = r - 1;
            while (pos > lead && coeff[pos] == q - 1) coeff[pos--] = 0;
            if (pos == lead) break;
            ++coeff[pos];
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Vec> basis_rows_of(const Geometry& g, std::span<const int> pts) {
    std::vector<Vec> rows;
    rows.reserve(pts.size());
    if (g.binary()) {
        XorBasis b(g.n());
        for (int p : pts) {
            g.check_point(p);
            b.insert(g.code(p));
        }
        for (std::uint64_t c : b.rows()) {
            Vec v;
            g.decode(c, v);
            rows.push_back(std::move(v));
        }
        return rows;
    }
    for (int p : pts) {
        g.check_point(p);
        rows.push_back(g.point(p));
    }
    rref(g.field(), rows);
    return rows;
}

}  // namespace detail

// Smallest flat containing s (the linear span within canonical points).
inline Flat closure(const Geometry& g, std::span<const int> s) {
    Flat f;
    f.basis = detail::basis_rows_of(g, s);
    f.rank = static_cast<int>(f.basis.size());
    f.points = detail::span_points(g, f.basis);
    return f;
}

inline Flat closure(const Geometry& g, std::initializer_list<int> s) {
    return closure(g, std::span<const int>(s.begin(), s.size()));
}

inline int rank_of(const Geometry& g, std::span<const int> s) {
    return static_cast<int>(detail::basis_rows_of(g, s).size());
}

inline int rank_of(const Geometry& g, std::initializer_list<int> s) {
    return rank_of(g, std::span<const int>(s.begin(), s.size()));
}

inline Flat whole_flat(const Geometry& g) {
    std::vector<int> all(g.num_points());
    std::iota(all.begin(), all.end(), 0);
    return closure(g, all);
}

inline Flat empty_flat() { return Flat{}; }

namespace detail {

// Gaussian binomial [n r]_q; saturates at a large sentinel instead of
// overflowing.
inline std::uint64_t gaussian_binomial(int n, int r, int q) {
    if (r < 0 || r > n) return 0;
    unsigned __int128 num = 1;
    constexpr unsigned __int128 kCap = static_cast<unsigned __int128>(1) << 100;
    auto qpow = [&](int e) {
        unsigned __int128 p = 1;
        for (int i = 0; i < e; ++i) p *= static_cast<unsigned>(q);
        return p;
    };
    for (int i = 0; i < r; ++i) {
        num *= qpow(n - i) - 1;
        num /= qpow(i + 1) - 1;
        if (num > kCap) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(num > UINT64_MAX ? UINT64_MAX : num);
}

}  // namespace detail

// All rank-r flats, each with sorted point set, the list sorted
// lexicographically by point set. Enumerates one reduced row echelon matrix
// per flat: choose pivot columns, then sweep the free entries.
inline std::vector<Flat> enumerate_flats(const Geometry& g, int r,
                                         std::uint64_t max_flats = 1'000'000) {
    const int n = g.n();
    if (r < 0 || r > n) throw UsageError("flat rank out of range");
    if (r == 0) return {empty_flat()};
    const std::uint64_t count = detail::gaussian_binomial(n, r, g.q());
    if (count > max_flats)
        throw BudgetExceeded("rank-" + std::to_string(r) + " flat count " +
                             std::to_string(count) + " exceeds budget");
    const Field& F = g.field();
    const int q = F.q();
    std::vector<Flat> flats;
    flats.reserve(count);

    std::vector<int> piv(r);
    std::iota(piv.begin(), piv.end(), 0);
    while (true) {
        // Free positions: (row i, column j) with j > piv[i] and j not a pivot.
        std::vector<std::pair<int, int>> free_pos;
        std::vector<bool> is_piv(n, false);
        for (int p : piv) is_piv[p] = true;
        for (int i = 0; i < r; ++i)
            for (int j = piv[i] + 1; j < n; ++j)
                if (!is_piv[j]) free_pos.emplace_back(i, j);

        std::vector<Vec> rows(r, Vec(n, 0));
        for (int i = 0; i < r; ++i) rows[i][piv[i]] = 1;
        std::vector<int> val(free_pos.size(), 0);
        while (true) {
            for (std::size_t k = 0; k < free_pos.size(); ++k)
                rows[free_pos[k].first][free_pos[k].second] = static_cast<std::uint8_t>(val[k]);
            Flat f;
            f.basis = rows;
            f.rank = r;
            f.points = detail::span_points(g, rows);
            flats.push_back(std::move(f));
            int pos = static_cast<int>(val.size()) - 1;
            while (pos >= 0 && val[pos] == q - 1) val[pos--] = 0;
            if (pos < 0) break;
            ++val[pos];
        }

        // Next pivot combination in lexicographic order.
        int i = r - 1;
        while (i >= 0 && piv[i] == n - r + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < r; ++j) piv[j] = piv[j - 1] + 1;
    }
    std::sort(flats.begin(), flats.end(),
              [](const Flat& a, const Flat& b) { return a.points < b.points; });
    return flats;
}

// Canonical complement of f inside the flat spanned by `candidates` (which
// must contain a flat's point set): greedily extend a basis of f by
// smallest-index candidate points, then take the closure of the extension.
inline Flat complement_within(const Geometry& g, const Flat& f,
                              std::span<const int> candidates, int target_rank) {
    std::vector<int> ext;
    if (g.binary()) {
        detail::XorBasis b(g.n());
        for (const Vec& row : f.basis) b.insert(g.code_of(row));
        for (int p : candidates) {
            if (b.rank() >= target_rank) break;
            if (b.insert(g.code(p))) ext.push_back(p);
        }
    } else {
        std::vector<Vec> rows = f.basis;
        int rank = static_cast<int>(rows.size());
        for (int p : candidates) {
            if (rank >= target_rank) break;
            rows.push_back(g.point(p));
            int nr = detail::rref(g.field(), rows);
            if (nr > rank) {
                rank = nr;
                ext.push_back(p);
            }
        }
    }
    return closure(g, ext);
}

// Canonical complement within the whole geometry.
inline Flat complement_flat(const Geometry& g, const Flat& f) {
    std::vector<int> all(g.num_points());
    std::iota(all.begin(), all.end(), 0);
    return complement_within(g, f, all, g.n());
}

// Local connectivity r(X) + r(Y) - r(X u Y); by modularity this equals the
// rank of cl(X) n cl(Y).
inline int local_connectivity(const Geometry& g, std::span<const int> x,
                              std::span<const int> y) {
    std::vector<int> both(x.begin(), x.end());
    both.insert(both.end(), y.begin(), y.end());
    return rank_of(g, x) + rank_of(g, std::span<const int>(y)) - rank_of(g, both);
}

inline int local_connectivity(const Geometry& g, std::initializer_list<int> x,
                              std::initializer_list<int> y) {
    return local_connectivity(g, std::span<const int>(x.begin(), x.size()),
                              std::span<const int>(y.begin(), y.size()));
}

// The q+1 points of the line through two distinct points, sorted.
inline std::vector<int> line_points(const Geometry& g, int i, int j) {
    g.check_point(i);
    g.check_point(j);
    if (g.binary()) {
        std::vector<int> pts{i, j, g.index_of_code(g.code(i) ^ g.code(j))};
        std::sort(pts.begin(), pts.end());
        return pts;
    }
    const Field& F = g.field();
    std::vector<int> pts{j};
    Vec v(g.n());
    for (int t = 0; t < F.q(); ++t) {
        for (int k = 0; k < g.n(); ++k)
            v[k] = static_cast<std::uint8_t>(F.add(g.point(i)[k], F.mul(t, g.point(j)[k])));
        pts.push_back(g.index_of(v));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace pgc
