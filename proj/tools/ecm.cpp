// Elliptic-curve factoring helper for building factor-hint files.
//
// Usage: ecm <N> [B1] [B2] [curves] [seed]
//
// Runs trial division, then ECM (Montgomery curves, Suyama parametrization,
// two-stage) with the given per-curve bounds, recursing on cofactors. Prints
// one line per certain prime factor ("P <p>") and one per surviving composite
// ("C <n>"). Exit status 0 when the input factored completely.

#include <gmpxx.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

using Int = mpz_class;

struct Pt {
    Int X, Z;
};

struct Curve {
    Int N, A24;  // (A+2)/4 mod N
};

// x-only doubling
Pt dbl(const Pt& P, const Curve& c) {
    Int s = (P.X + P.Z) % c.N, d = (P.X - P.Z) % c.N;
    Int s2 = s * s % c.N, d2 = d * d % c.N;
    Int t = (s2 - d2) % c.N;
    Pt r;
    r.X = s2 * d2 % c.N;
    r.Z = t * ((d2 + c.A24 * t) % c.N) % c.N;
    return r;
}

// x-only differential addition: P + Q given D = P - Q
Pt add(const Pt& P, const Pt& Q, const Pt& D, const Curve& c) {
    Int u = (P.X - P.Z) * (Q.X + Q.Z) % c.N;
    Int v = (P.X + P.Z) * (Q.X - Q.Z) % c.N;
    Int a = (u + v) % c.N, b = (u - v) % c.N;
    Pt r;
    r.X = D.Z * (a * a % c.N) % c.N;
    r.Z = D.X * (b * b % c.N) % c.N;
    return r;
}

Pt ladder(const Pt& P, uint64_t k, const Curve& c) {
    if (k == 0) return {Int(0), Int(0)};
    if (k == 1) return P;
    Pt R0 = P, R1 = dbl(P, c);
    int bits = 63 - __builtin_clzll(k);
    for (int i = bits - 1; i >= 0; --i) {
        if ((k >> i) & 1) {
            R0 = add(R1, R0, P, c);
            R1 = dbl(R1, c);
        } else {
            R1 = add(R0, R1, P, c);
            R0 = dbl(R0, c);
        }
    }
    return R0;
}

std::vector<uint32_t> sieve_primes(uint32_t bound) {
    std::vector<bool> comp(bound + 1, false);
    std::vector<uint32_t> ps;
    for (uint32_t i = 2; i <= bound; ++i) {
        if (comp[i]) continue;
        ps.push_back(i);
        for (uint64_t j = uint64_t(i) * i; j <= bound; j += i) comp[j] = true;
    }
    return ps;
}

// one ECM curve; returns a nontrivial factor of N or 0
Int ecm_curve(const Int& N, uint64_t B1, uint64_t B2, const Int& sigma,
              const std::vector<uint32_t>& primes) {
    // Suyama: u = sigma^2 - 5, v = 4 sigma
    Int u = (sigma * sigma - 5) % N, v = 4 * sigma % N;
    Int x0 = u * u % N * u % N, z0 = v * v % N * v % N;
    Int diff = (v - u) % N, g;
    Int denom = 4 * x0 % N * v % N;
    mpz_gcd(g.get_mpz_t(), denom.get_mpz_t(), N.get_mpz_t());
    if (g == N) return 0;
    if (g > 1) return g;
    Int dinv;
    if (!mpz_invert(dinv.get_mpz_t(), denom.get_mpz_t(), N.get_mpz_t())) return 0;
    Curve c;
    c.N = N;
    c.A24 = diff * diff % N * diff % N * ((3 * u + v) % N) % N * dinv % N;
    Pt P{x0, z0};

    // stage 1: multiply by every prime power <= B1
    for (uint32_t p : primes) {
        if (p > B1) break;
        uint64_t pk = p;
        while (pk <= B1 / p) pk *= p;
        P = ladder(P, pk, c);
    }
    mpz_gcd(g.get_mpz_t(), P.Z.get_mpz_t(), N.get_mpz_t());
    if (g > 1 && g < N) return g;
    if (g == N) return 0;

    // stage 2: standard continuation, baby steps j coprime to D, giant steps kD
    const uint64_t D = 2310;
    Pt Qd = ladder(P, D, c);
    // baby table [j]P for odd j < D/2 with gcd(j, D) = 1
    std::vector<Pt> baby(D / 2);
    Pt P1 = P, P2 = dbl(P, c), P3 = add(P2, P1, P1, c);
    baby[1 / 2] = P1;
    Pt prev = P1, curp = P3;
    if (3 < D / 2) baby[3 / 2] = P3;
    for (uint64_t j = 5; j < D / 2; j += 2) {
        Pt nxt = add(curp, P2, prev, c);
        prev = curp;
        curp = nxt;
        baby[j / 2] = curp;
    }
    uint64_t k0 = B1 / D + 1;
    // giant points [kD]P built by repeated differential addition
    Pt Gprev = ladder(P, (k0 - 1) * D, c), Gcur = ladder(P, k0 * D, c);
    Int acc = 1;
    size_t pi = 0;
    while (pi < primes.size() && primes[pi] <= B1) ++pi;
    for (uint64_t k = k0; k * D <= B2 + D / 2; ++k) {
        uint64_t lo = k * D - D / 2, hi = k * D + D / 2;
        while (pi < primes.size() && primes[pi] <= hi) {
            uint64_t p = primes[pi++];
            if (p < lo) continue;
            uint64_t j = p > k * D ? p - k * D : k * D - p;
            if (j == 0 || j / 2 >= baby.size()) continue;
            const Pt& Bj = baby[j / 2];
            acc = acc * ((Gcur.X * Bj.Z - Bj.X * Gcur.Z) % N) % N;
        }
        Pt nxt = add(Gcur, Qd, Gprev, c);
        Gprev = Gcur;
        Gcur = nxt;
    }
    mpz_gcd(g.get_mpz_t(), acc.get_mpz_t(), N.get_mpz_t());
    if (g > 1 && g < N) return g;
    return 0;
}

void emit(const Int& n, bool prime) {
    std::printf("%s %s\n", prime ? "P" : "C", n.get_str().c_str());
    std::fflush(stdout);
}

// factor n recursively; returns false if a composite part survives
bool crack(Int n, uint64_t B1, uint64_t B2, long curves, gmp_randclass& rng,
           const std::vector<uint32_t>& primes) {
    if (n == 1) return true;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
        emit(n, true);
        return true;
    }
    // perfect powers
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (int e = 2; e <= 64; ++e) {
            Int r;
            if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) != 0) {
                bool ok = true;
                for (int i = 0; i < e; ++i) ok = crack(r, B1, B2, curves, rng, primes) && ok;
                return ok;
            }
        }
    }
    for (long i = 0; i < curves; ++i) {
        Int sigma = rng.get_z_range(n - 7) + 6;
        Int f = ecm_curve(n, B1, B2, sigma, primes);
        if (f > 1 && f < n) {
            std::fprintf(stderr, "# curve %ld (B1=%llu): factor %s\n", i,
                         (unsigned long long)B1, f.get_str().c_str());
            return crack(f, B1, B2, curves, rng, primes) &&
                   crack(n / f, B1, B2, curves, rng, primes);
        }
    }
    emit(n, false);
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s N [B1] [B2] [curves] [seed]\n", argv[0]);
        return 2;
    }
    Int n(argv[1]);
    uint64_t B1 = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 250000;
    uint64_t B2 = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : B1 * 100;
    long curves = argc > 4 ? std::strtol(argv[4], nullptr, 10) : 200;
    unsigned long seed = argc > 5 ? std::strtoul(argv[5], nullptr, 10) : 1;

    if (n < 0) n = -n;
    if (n <= 1) return 0;

    // trial division first
    auto small = sieve_primes(1000000);
    for (uint32_t p : small)
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            emit(Int(p), true);
            n /= p;
        }
    if (n == 1) return 0;

    auto primes = sieve_primes(static_cast<uint32_t>(std::min<uint64_t>(B2, 4000000000ull)));
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    return crack(n, B1, B2, curves, rng, primes) ? 0 : 1;
}
