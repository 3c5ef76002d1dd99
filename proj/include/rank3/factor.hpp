#pragma once
// Integer factorization with first-class partial results, squarefree parts and
// fundamental discriminants.

#include "rank3/rational.hpp"

#include <cstdint>
#include <vector>

namespace rank3 {

struct FactoredInteger {
    int sign = 1;                              // +-1
    std::vector<std::pair<Int, int>> factors;  // (prime, exponent>=1), primes certified by MR
    Int cofactor = 1;                          // unfactored part (1 when complete)

    bool complete() const { return cofactor == 1; }
    Int value() const {
        Int v = sign;
        for (const auto& [p, e] : factors)
            for (int i = 0; i < e; ++i) v *= p;
        return v * cofactor;
    }
};

struct FactorBudget {
    uint64_t trial_bound = 1000000;   // trial division up to this bound
    uint64_t rho_iters = 2000000;     // Brent-rho iteration budget per composite
    int mr_reps = 30;                 // Miller-Rabin repetitions
};

// Factor n != 0. `hints` are candidate prime divisors tried first.
FactoredInteger factor_integer(const Int& n, const std::vector<Int>& hints = {},
                               const FactorBudget& budget = {});

bool is_probable_prime(const Int& n, int reps = 30);

// Squarefree part of a complete factorization (throws if incomplete).
Int squarefree_part(const FactoredInteger& f);

// Fundamental discriminant of Q(sqrt(m)) given squarefree m != 0, 1: m or 4m.
Int fundamental_discriminant(const Int& squarefree_m);

}  // namespace rank3
