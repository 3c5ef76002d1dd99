#include "rank3/modular.hpp"

#include "rank3/fppoly.hpp"

namespace rank3 {

namespace {

// Tonelli-Shanks for odd prime p, a a quadratic residue mod p.
Int tonelli_shanks(const Int& a, const Int& p) {
    if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
    Int q = p - 1;
    long s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (kronecker_symbol(z, p) != -1) ++z;
    Int c = pow_mod(z, q, p);
    Int r = pow_mod(a, (q + 1) / 2, p);
    Int t = pow_mod(a, q, p);
    long m = s;
    while (t != 1) {
        Int tt = t;
        long i = 0;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        Int b = c;
        for (long j = 0; j < m - i - 1; ++j) b = b * b % p;
        r = r * b % p;
        c = b * b % p;
        t = t * c % p;
        m = i;
    }
    return r;
}

}  // namespace

std::optional<Int> sqrt_mod_pk(const Int& a, const Int& p, int k) {
    if (p == 2) throw std::invalid_argument("sqrt_mod_pk: p must be odd");
    Int a0 = ((a % p) + p) % p;
    if (a0 == 0) return std::nullopt;  // caller handles ramified cases separately
    if (kronecker_symbol(a0, p) != 1) return std::nullopt;
    Int r = tonelli_shanks(a0, p), pk = p;
    for (int i = 1; i < k; ++i) {
        pk *= p;
        // Newton: r <- r - (r^2 - a) / (2r) mod p^(i+1)
        Int f = ((r * r - a) % pk + pk) % pk;
        Int inv2r = inv_mod(2 * r % pk, pk);
        r = ((r - f * inv2r) % pk + pk) % pk;
    }
    return r;
}

}  // namespace rank3
