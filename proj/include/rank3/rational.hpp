#pragma once
// Exact big-integer / big-rational helpers on top of GMP.

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rank3 {

using Int = mpz_class;
using Rat = mpq_class;

inline Int num(const Rat& q) { return q.get_num(); }
inline Int den(const Rat& q) { return q.get_den(); }

// ord_p of a nonzero integer.
inline long ord_p(Int n, const Int& p) {
    if (n == 0) throw std::invalid_argument("ord_p(0)");
    long e = 0;
    n = abs(n);
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        ++e;
    }
    return e;
}

// ord_p of a nonzero rational: ord(num) - ord(den).
inline long rational_valuation(const Rat& q, const Int& p) {
    if (q == 0) throw std::invalid_argument("rational_valuation(0)");
    return ord_p(num(q), p) - ord_p(den(q), p);
}

// Exact integer cube root: returns c with c^3 == n, if it exists.
inline std::optional<Int> cube_root(const Int& n) {
    Int a = abs(n), r;
    mpz_root(r.get_mpz_t(), a.get_mpz_t(), 3);
    if (r * r * r != a) return std::nullopt;
    return n < 0 ? Int(-r) : r;
}

inline std::optional<Rat> cube_root(const Rat& q) {
    auto n = cube_root(num(q));
    auto d = cube_root(den(q));
    if (!n || !d) return std::nullopt;
    return Rat(*n, *d);
}

// Exact integer square root if n is a perfect square.
inline std::optional<Int> square_root(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r != n) return std::nullopt;
    return r;
}

inline Rat parse_rat(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }
inline std::string to_string(const Int& n) { return n.get_str(); }

// Height of a rational: max(|num|, den).
inline Int height(const Rat& q) {
    Int n = abs(num(q));
    return n > den(q) ? n : den(q);
}

}  // namespace rank3
