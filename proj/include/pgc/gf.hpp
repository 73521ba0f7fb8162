// Arithmetic for the supported finite fields GF(q), q in {2,3,4,5,7}.
// Prime q is integer arithmetic mod q; GF(4) is polynomial arithmetic over
// GF(2) modulo x^2+x+1, elements encoded as bit pairs b1*x+b0 -> 2*b1+b0.
#pragma once

#include <array>
#include <cstdint>

#include "pgc/error.hpp"

namespace pgc {

class Field {
public:
    static bool supported(int q) {
        return q == 2 || q == 3 || q == 4 || q == 5 || q == 7;
    }

    explicit Field(int q) : q_(q) {
        if (!supported(q)) {
            throw UsageError("unsupported field order q=" + std::to_string(q));
        }
        for (int a = 0; a < q; ++a) {
            for (int b = 0; b < q; ++b) {
                add_[a * q + b] = static_cast<std::uint8_t>(q == 4 ? (a ^ b) : (a + b) % q);
                mul_[a * q + b] = static_cast<std::uint8_t>(q == 4 ? gf4_mul(a, b) : (a * b) % q);
            }
        }
        for (int a = 0; a < q; ++a) {
            neg_[a] = static_cast<std::uint8_t>(q == 4 ? a : (q - a) % q);
            if (a != 0) {
                for (int b = 1; b < q; ++b) {
                    if (mul(a, b) == 1) inv_[a] = static_cast<std::uint8_t>(b);
                }
            }
        }
        inv_[0] = 0;
    }

    int q() const { return q_; }
    int add(int a, int b) const { return add_[a * q_ + b]; }
    int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int inv(int a) const { return inv_[a]; }

private:
    // Carry-less multiply of two 2-bit polynomials, reduced mod x^2+x+1.
    static int gf4_mul(int a, int b) {
        int p = 0;
        for (int i = 0; i < 2; ++i) {
            if (b & (1 << i)) p ^= a << i;
        }
        if (p & 8) p ^= 0b1110;  // x^3 = x^2 + x  (x * (x^2+x+1) shifted)
        if (p & 4) p ^= 0b0111;  // x^2 = x + 1
        return p;
    }

    int q_;
    std::array<std::uint8_t, 49> add_{};
    std::array<std::uint8_t, 49> mul_{};
    std::array<std::uint8_t, 7> neg_{};
    std::array<std::uint8_t, 7> inv_{};
};

}  // namespace pgc
