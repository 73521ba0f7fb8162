// p-adic valuations on exact rationals, the coordinate colouring c_v on
// projective rational points, and the sampled verification that dependent
// point sets are never rainbow under c_v. All arithmetic is arbitrary
// precision; no floating point touches a value.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pgc/error.hpp"
#include "pgc/report.hpp"
#include "pgc/rng.hpp"

namespace pgc {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

using RationalVector = std::vector<BigRational>;

struct PadicSpec {
    explicit PadicSpec(long prime) : p(prime) {
        if (prime < 2) throw UsageError("p must be a prime");
        for (long d = 2; d * d <= prime; ++d)
            if (prime % d == 0) throw UsageError(std::to_string(prime) + " is not prime");
    }
    long p;
};

// Valuation value; v(0) is +infinity.
struct Valuation {
    bool infinite = false;
    long long v = 0;

    static Valuation inf() { return Valuation{true, 0}; }
    static Valuation of(long long x) { return Valuation{false, x}; }

    bool operator==(const Valuation& o) const {
        return infinite == o.infinite && (infinite || v == o.v);
    }
    bool operator<(const Valuation& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return v < o.v;
    }
};

namespace detail {

inline long long int_valuation(BigInt x, long p) {
    long long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

}  // namespace detail

// v(p^t * r/s) = t for r, s coprime to p; v(0) = +infinity.
inline Valuation padic_valuation(const PadicSpec& spec, const BigRational& x) {
    if (x == 0) return Valuation::inf();
    return Valuation::of(detail::int_valuation(boost::multiprecision::numerator(x), spec.p) -
                         detail::int_valuation(boost::multiprecision::denominator(x), spec.p));
}

// 1-based index of the first coordinate achieving the minimum valuation;
// invariant under nonzero scaling.
inline int cv_colour(const PadicSpec& spec, std::span<const BigRational> u) {
    int best = -1;
    Valuation min = Valuation::inf();
    for (std::size_t i = 0; i < u.size(); ++i) {
        Valuation v = padic_valuation(spec, u[i]);
        if (v < min) {
            min = v;
            best = static_cast<int>(i) + 1;
        }
    }
    if (best < 0) throw UsageError("cv_colour requires a nonzero vector");
    return best;
}

namespace detail {

// Exact rank of rational vectors by Gaussian elimination.
inline int rational_rank(std::vector<RationalVector> rows) {
    if (rows.empty()) return 0;
    const int n = static_cast<int>(rows[0].size());
    int r = 0;
    for (int col = 0; col < n && r < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][col] != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        std::swap(rows[r], rows[pivot]);
        for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
            if (rows[i][col] == 0) continue;
            BigRational f = rows[i][col] / rows[r][col];
            for (int j = col; j < n; ++j) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    return r;
}

inline BigRational random_rational(SplitMix64& rng, long bound) {
    auto nonzero = [&]() {
        long v = static_cast<long>(rng.below(2 * bound)) - bound;
        return v >= 0 ? v + 1 : v;  // uniform over [-B,B] \ {0}
    };
    return BigRational(BigInt(nonzero())) / BigInt(nonzero());
}

}  // namespace detail

struct NonarchReport {
    long p = 0;
    int n = 0;
    std::uint64_t samples = 0;
    std::uint64_t dependent_tuples_checked = 0;
    std::uint64_t rainbow_violations = 0;  // must be zero
    std::string first_violation;
    std::uint64_t line_points_probed = 0;
    std::uint64_t line_witnesses_found = 0;  // informational: lines are infinite
    double wall_time_s = 0.0;
};

inline Json to_json(const NonarchReport& r) {
    Json j;
    j["p"] = r.p;
    j["n"] = r.n;
    j["samples"] = r.samples;
    j["dependent_tuples_checked"] = r.dependent_tuples_checked;
    j["rainbow_violations"] = r.rainbow_violations;
    j["first_violation"] = r.first_violation.empty() ? Json(nullptr) : Json(r.first_violation);
    j["line_points_probed"] = r.line_points_probed;
    j["line_witnesses_found"] = r.line_witnesses_found;
    j["line_witness_rate"] = r.line_points_probed == 0
                                 ? 0.0
                                 : double(r.line_witnesses_found) / double(r.line_points_probed);
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

// (a) Samples dependent tuples of projective rational points (sizes 3..n+1)
// and asserts none is c_v-rainbow; zero tolerance, any hit is recorded.
// (b) Samples points on random rational lines and searches for a second
// point of the same colour; reported as a rate, never asserted, since a
// finite search cannot certify a statement over an infinite line.
// Sample i is derived from (seed, i) alone.
inline NonarchReport verify_nonarch(const PadicSpec& spec, int n, std::uint64_t samples,
                                    std::uint64_t seed, int param_budget = 64,
                                    long bound = 1000) {
    if (n < 2) throw UsageError("verify_nonarch needs n >= 2");
    if (samples < 1) throw UsageError("verify_nonarch needs at least one sample");
    WallClock clock;
    NonarchReport rep;
    rep.p = spec.p;
    rep.n = n;
    rep.samples = samples;

    for (std::uint64_t i = 0; i < samples; ++i) {
        SplitMix64 rng = SplitMix64::substream(seed, i);
        const int t = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));

        // t-1 independent points plus one nonzero combination of them
        std::vector<RationalVector> pts;
        for (int tries = 0; tries < 64; ++tries) {
            pts.clear();
            for (int k = 0; k + 1 < t; ++k) {
                RationalVector v(n);
                for (auto& x : v) x = detail::random_rational(rng, bound);
                pts.push_back(std::move(v));
            }
            if (detail::rational_rank(pts) == t - 1) break;
        }
        RationalVector z(n, BigRational(0));
        for (int k = 0; k + 1 < t; ++k) {
            BigRational a = detail::random_rational(rng, bound);
            for (int j = 0; j < n; ++j) z[j] += a * pts[k][j];
        }
        pts.push_back(std::move(z));

        std::vector<int> cols;
        for (const RationalVector& v : pts) cols.push_back(cv_colour(spec, v));
        std::vector<int> sorted = cols;
        std::sort(sorted.begin(), sorted.end());
        const bool rainbow =
            std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        ++rep.dependent_tuples_checked;
        if (rainbow) {
            ++rep.rainbow_violations;
            if (rep.first_violation.empty()) {
                rep.first_violation = "sample " + std::to_string(i) + " colours";
                for (int c : cols) rep.first_violation += " " + std::to_string(c);
            }
        }

        // part (b): one probed point per sample on a random line
        RationalVector x(n), y(n);
        for (auto& v : x) v = detail::random_rational(rng, bound);
        for (auto& v : y) v = detail::random_rational(rng, bound);
        if (detail::rational_rank({x, y}) == 2) {
            BigRational lambda = detail::random_rational(rng, bound);
            RationalVector w(n);
            for (int j = 0; j < n; ++j) w[j] = x[j] + lambda * y[j];
            const int want = cv_colour(spec, w);
            ++rep.line_points_probed;
            for (int attempt = 0; attempt < param_budget; ++attempt) {
                BigRational mu = detail::random_rational(rng, bound);
                if (mu == lambda) continue;
                RationalVector w2(n);
                for (int j = 0; j < n; ++j) w2[j] = x[j] + mu * y[j];
                if (cv_colour(spec, w2) == want) {
                    ++rep.line_witnesses_found;
                    break;
                }
            }
        }
    }
    rep.wall_time_s = clock.seconds();
    return rep;
}

}  // namespace pgc
