#pragma once
// Mumford/Cantor divisor-class arithmetic on hyperelliptic Jacobians over F_p and
// Z/3-independence certification of the reduced torsion classes.

#include "rank3/fppoly.hpp"
#include "rank3/mestre.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rank3 {

// y^2 = F(x), F monic of odd degree 2g+1. For even-degree inputs f the map is
// t = a + c/S, y = c*W/S^(d/2); for odd-degree inputs t = X/c, y = W/c^((d-1)/2)
// (identity when f is monic, c = 1).
struct OddModel {
    uint64_t p = 0;
    FpPoly F;
    int genus = 0;
    bool shifted = false;  // true: even-degree root-shift map; false: odd-degree scaling
    uint64_t a = 0;        // shift root (even case)
    uint64_t c = 1;        // unit scaling
};

struct MumfordDivisor {
    FpPoly u, v;  // u monic, deg v < deg u, u | v^2 - F
    bool is_identity() const { return u.degree() == 0; }
    bool operator==(const MumfordDivisor& o) const { return u == o.u && v == o.v; }
};

// Reduce an exact rational polynomial mod p; nullopt if a denominator vanishes.
std::optional<FpPoly> reduce_mod(const RatPoly& f, uint64_t p);

// Resultant over F_p (0 if common factor).
uint64_t resultant_fp(const FpPoly& a, const FpPoly& b);

// Good primes in (lo, 2^16): p > 3, degrees preserved, f mod p squarefree, a root
// in F_p when deg f is even, and Res(num X_i, f) nonzero mod p for each point.
std::vector<uint64_t> good_prime_select(const CurveFixture& fx, int how_many,
                                        uint64_t lo = 50);

// Build the odd model; root a required (and used) only when deg f is even.
OddModel to_odd_model(const FpPoly& f, std::optional<uint64_t> a = std::nullopt);

MumfordDivisor mumford_identity(const OddModel& m);
bool divisor_valid(const MumfordDivisor& D, const OddModel& m);

MumfordDivisor cantor_add(const MumfordDivisor& D1, const MumfordDivisor& D2,
                          const OddModel& m);
MumfordDivisor cantor_neg(const MumfordDivisor& D);
MumfordDivisor cantor_mul(const MumfordDivisor& D, long n, const OddModel& m);

// Reduce 1/3 div(y - Y_i) mod p for one fixture point. Works for deg f odd or
// divisible by 6. Throws BadPrime when the prime defeats the construction.
struct BadPrime : std::runtime_error {
    using std::runtime_error::runtime_error;
};
MumfordDivisor reduce_class(const CurveFixture& fx, int i, const OddModel& m);

// All torsion classes of a fixture at p, including the difference-class handling
// for deg f = 4 (mod 6). Every class passes u | v^2 - F and 3D = 0.
struct ReducedClasses {
    OddModel model;
    std::vector<MumfordDivisor> classes;
};
ReducedClasses reduce_fixture_classes(const CurveFixture& fx, uint64_t p);

struct IndependenceReport {
    uint64_t p = 0;
    int rank = 0;
    std::vector<std::vector<int>> relations;  // ternary vectors, first nonzero = 1
    long combos_tested = 0;
};
IndependenceReport independence_mod3(const std::vector<MumfordDivisor>& classes,
                                     const OddModel& m);

// Run the full reduction + independence scan at `count` good primes (skipping
// primes where the class construction fails).
std::vector<IndependenceReport> rank_at_good_primes(const CurveFixture& fx, int count,
                                                    uint64_t lo = 50);

}  // namespace rank3
