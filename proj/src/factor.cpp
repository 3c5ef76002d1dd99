#include "rank3/factor.hpp"

#include <algorithm>
#include <map>

namespace rank3 {

bool is_probable_prime(const Int& n, int reps) {
    return mpz_probab_prime_p(n.get_mpz_t(), reps) > 0;
}

namespace {

const std::vector<uint32_t>& small_primes() {
    static std::vector<uint32_t> primes = [] {
        const uint32_t N = 1000000;
        std::vector<bool> comp(N + 1, false);
        std::vector<uint32_t> ps;
        for (uint32_t i = 2; i <= N; ++i) {
            if (!comp[i]) {
                ps.push_back(i);
                for (uint64_t j = static_cast<uint64_t>(i) * i; j <= N; j += i)
                    comp[j] = true;
            }
        }
        return ps;
    }();
    return primes;
}

// Brent-cycle Pollard rho; returns a nontrivial factor or 0 on budget exhaustion.
Int brent_rho(const Int& n, uint64_t max_iters, unsigned long seed) {
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Int y = rng.get_z_range(n - 3) + 2;
        Int c = rng.get_z_range(n - 2) + 1;
        Int x = y, d = 1, q = 1, ys = y;
        uint64_t r = 1, iters = 0;
        const uint64_t m = 128;
        while (d == 1 && iters < max_iters) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            uint64_t k = 0;
            while (k < r && d == 1) {
                ys = y;
                uint64_t lim = std::min(m, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                d = gcd(q, n);
                k += lim;
                iters += lim;
            }
            r *= 2;
        }
        if (d == n) {
            // backtrack
            do {
                ys = (ys * ys + c) % n;
                d = gcd(abs(x - ys), n);
            } while (d == 1);
        }
        if (d != 1 && d != n) return d;
        if (iters >= max_iters) return 0;
    }
    return 0;
}

void factor_rec(const Int& n, std::map<Int, int>& out, Int& cofactor,
                const FactorBudget& budget) {
    if (n == 1) return;
    if (is_probable_prime(n, budget.mr_reps)) {
        out[n] += 1;
        return;
    }
    Int d = brent_rho(n, budget.rho_iters, static_cast<unsigned long>(mpz_fdiv_ui(n.get_mpz_t(), 1000003) + 1));
    if (d == 0) {
        cofactor *= n;
        return;
    }
    factor_rec(d, out, cofactor, budget);
    factor_rec(n / d, out, cofactor, budget);
}

}  // namespace

FactoredInteger factor_integer(const Int& n, const std::vector<Int>& hints,
                               const FactorBudget& budget) {
    if (n == 0) throw std::invalid_argument("factor_integer(0)");
    FactoredInteger res;
    res.sign = n < 0 ? -1 : 1;
    Int m = abs(n);
    std::map<Int, int> fac;
    for (const Int& h : hints) {
        if (h <= 1) continue;
        if (!is_probable_prime(h, budget.mr_reps)) continue;
        while (mpz_divisible_p(m.get_mpz_t(), h.get_mpz_t())) {
            mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), h.get_mpz_t());
            fac[h] += 1;
        }
    }
    for (uint32_t p : small_primes()) {
        if (p > budget.trial_bound) break;
        if (m == 1) break;
        if (Int(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            fac[Int(p)] += 1;
        }
    }
    if (m > 1) {
        Int cof = 1;
        factor_rec(m, fac, cof, budget);
        res.cofactor = cof;
    }
    for (auto& [p, e] : fac) res.factors.emplace_back(p, e);
    return res;
}

Int squarefree_part(const FactoredInteger& f) {
    if (!f.complete()) throw std::invalid_argument("squarefree_part of incomplete factorization");
    Int s = f.sign;
    for (const auto& [p, e] : f.factors)
        if (e % 2 == 1) s *= p;
    return s;
}

Int fundamental_discriminant(const Int& m) {
    // m squarefree, != 0, 1
    Int r = m % 4;
    if (r < 0) r += 4;
    return r == 1 ? m : 4 * m;
}

}  // namespace rank3
