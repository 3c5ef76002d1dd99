#include "rank3/fppoly.hpp"

namespace rank3 {

namespace {

// distinct-degree factorization of a monic squarefree poly: list of (product, degree)
std::vector<std::pair<FpPoly, int>> ddf(const FpPoly& a) {
    uint64_t p = a.modulus();
    std::vector<std::pair<FpPoly, int>> out;
    FpPoly f = a;
    FpPoly x = FpPoly::x(p);
    FpPoly h = x;
    int d = 0;
    while (f.degree() > 2 * d) {
        ++d;
        h = h.powmod(p, f);
        FpPoly g = FpPoly::gcd(h - x, f);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            f = f / g;
            h = h % f;
        }
    }
    if (f.degree() > 0) out.emplace_back(f, f.degree());
    return out;
}

// equal-degree splitting (Cantor-Zassenhaus), all factors of degree d.
void edf(const FpPoly& a, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
    uint64_t p = a.modulus();
    int n = a.degree();
    if (n == d) {
        out.push_back(a.monic());
        return;
    }
    for (;;) {
        std::vector<uint64_t> rc(n + 1);
        for (auto& c : rc) c = rng() % p;
        rc[n] = 1;
        FpPoly r(p, std::move(rc));
        FpPoly g = FpPoly::gcd(r, a);
        if (g.degree() > 0 && g.degree() < n) {
            edf(g, d, rng, out);
            edf(a / g, d, rng, out);
            return;
        }
        // b = r^((p^d-1)/2) mod a  computed as (r^((p-1)/2))^(1+p+...+p^(d-1)) — do it
        // by iterated exponentiation: e = (p^d-1)/2 via square-and-multiply over the
        // exponent in base p:  r^((p^d-1)/2) = prod_{i<d} (r^(p^i))^((p-1)/2)
        FpPoly b = FpPoly::one(p);
        FpPoly ri = r % a;
        for (int i = 0; i < d; ++i) {
            b = (b * ri.powmod((p - 1) / 2, a)) % a;
            ri = ri.powmod(p, a);
        }
        g = FpPoly::gcd(b - FpPoly::one(p), a);
        if (g.degree() > 0 && g.degree() < n) {
            edf(g, d, rng, out);
            edf(a / g, d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<FpPoly, int>> factor_poly_fp(const FpPoly& a, uint64_t seed) {
    if (a.is_zero()) throw std::invalid_argument("factor_poly_fp(0)");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<FpPoly, int>> out;
    FpPoly f = a.monic();
    if (f.degree() == 0) return out;
    // squarefree part (char p always exceeds our degrees, so gcd trick is complete)
    FpPoly w = f / FpPoly::gcd(f, f.derivative());
    std::vector<FpPoly> irred;
    for (auto& [g, d] : ddf(w)) edf(g, d, rng, irred);
    for (const auto& q : irred) {
        int e = 0;
        FpPoly tmp = f;
        for (;;) {
            auto [quo, rem] = tmp.divrem(q);
            if (!rem.is_zero()) break;
            ++e;
            tmp = quo;
        }
        out.emplace_back(q, e);
    }
    return out;
}

std::optional<std::vector<uint64_t>> series_sqrt(const FpPoly& M, int prec) {
    uint64_t p = M.modulus();
    auto b0 = sqrt_mod_p(M.coeff(0), p);
    if (!b0 || *b0 == 0) return std::nullopt;
    std::vector<uint64_t> W{*b0};
    uint64_t inv2b = invmod_u64(2 * *b0 % p, p);
    for (int k = 1; k < prec; ++k) {
        uint64_t s = 0;
        for (int i = 1; i < k; ++i)
            if (i < static_cast<int>(W.size()) && k - i < static_cast<int>(W.size()))
                s = (s + mulmod_u64(W[i], W[k - i], p)) % p;
        uint64_t mk = M.coeff(k);
        W.push_back(mulmod_u64((mk + p - s) % p, inv2b, p));
    }
    return W;
}

}  // namespace rank3
