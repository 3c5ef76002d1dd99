#pragma once
// 3-torsion class data over Q(t): the map 1/3 div(y - Y_i), the exceptional prime
// set with provenance, and the p-adic / real windows for specialization.

#include "rank3/factor.hpp"
#include "rank3/mestre.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rank3 {

struct TorsionClassData {
    std::string fixture;
    int index = 0;
    RatFun X, Y;
    bool certified = false;  // Y^2 - f = X^3 checked exactly
};

// Errors: no rational X for the point, X = 0, or identity failure.
TorsionClassData build_class(const CurveFixture& fx, int i);

struct ExceptionalSet {
    std::vector<Int> primes;  // sorted, always containing 2
    bool archimedean = true;
    std::vector<std::pair<Int, std::string>> provenance;
    RatPoly bezout_g, bezout_h;  // a*g + f*h = 1 over Q[t]

    bool contains(const Int& p) const;
};

// Exceptional places for class i of the fixture: {2, infinity}, every prime of a
// coefficient denominator of a, b, d, f, g, h and of the leading coefficients of
// a, b, d, f, where X_i = a/d^2, Y_i = b/d^3 in lowest terms.
ExceptionalSet construct_S(const CurveFixture& fx, int i,
                           const FactorBudget& budget = {1000000, 20000000, 30});

struct PAdicWindow {
    bool archimedean = false;
    Int p;          // finite place
    Rat center;     // t_p
    long k = 0;     // window = { t : ord_p(t - t_p) >= k }
    Rat lo, hi;     // real window (archimedean case), sign f = -1 throughout
    int delta = 1;  // 0 when f attains negative values
};

// Default search set {0, ..., 20} plus a few p-adically small points.
std::vector<Rat> default_search_T(const Int& p);

// t_p in T with 3 | ord_p f(t_p), or nothing.
std::optional<Rat> check_h1(const RatPoly& f, const Int& p, const std::vector<Rat>& T);

// t_2 in T such that 2 does not split in Q(sqrt(f(t_2))), or nothing.
std::optional<Rat> check_h2(const RatPoly& f, const std::vector<Rat>& T,
                            const FactorBudget& budget = {});

// Minimal k with ord_p(c_j) + j*k > ord_p f(t_p) for all j >= 1 (Taylor
// coefficients c_j of f about t_p); then ord_p f(t) = ord_p f(t_p) on the window.
PAdicWindow window_radius(const RatPoly& f, const Int& p, const Rat& t_p);

// Rational interval on which f < 0 (delta = 0), or delta = 1 if f >= 0 on R.
PAdicWindow real_window(const RatPoly& f);

// Number of real roots of f in (lo, hi] by Sturm's theorem.
int sturm_count(const RatPoly& f, const Rat& lo, const Rat& hi);

}  // namespace rank3
