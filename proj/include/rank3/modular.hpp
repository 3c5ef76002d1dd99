#pragma once
// Modular toolkit: Kronecker symbol, CRT, square roots modulo prime powers.

#include "rank3/rational.hpp"

#include <optional>
#include <vector>

namespace rank3 {

inline int kronecker_symbol(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

// CRT for pairwise-coprime moduli: returns x mod prod(m_i) with x = r_i (mod m_i).
inline Int crt_combine(const std::vector<std::pair<Int, Int>>& residues /* (r, m) */) {
    Int x = 0, M = 1;
    for (const auto& [r, m] : residues) {
        if (M == 1) {
            M = m;
            x = ((r % m) + m) % m;
            continue;
        }
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), M.get_mpz_t(), m.get_mpz_t());
        if (g != 1) throw std::invalid_argument("crt: moduli not coprime");
        Int diff = (((r - x) % m) + m) % m;
        x += M * ((s * diff) % m);
        M *= m;
        x = ((x % M) + M) % M;
    }
    return x;
}

// sqrt of a mod p^k for odd prime p with p not dividing a (Hensel lifting).
std::optional<Int> sqrt_mod_pk(const Int& a, const Int& p, int k);

// Inverse of a mod m (m > 1, gcd(a, m) = 1).
inline Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::invalid_argument("inv_mod: not invertible");
    return r;
}

inline Int pow_mod(const Int& a, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

}  // namespace rank3
