#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rank3/factor.hpp"
#include "rank3/fppoly.hpp"
#include "rank3/modular.hpp"
#include "rank3/ratpoly.hpp"

#include <random>

using namespace rank3;

namespace {

RatPoly random_poly(std::mt19937& rng, int maxdeg) {
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<long> coef(-20, 20);
    std::uniform_int_distribution<long> dn(1, 9);
    int d = deg(rng);
    std::vector<Rat> c(d + 1);
    for (auto& x : c) {
        x = Rat(coef(rng), dn(rng));
        x.canonicalize();
    }
    if (c.back() == 0) c.back() = 1;
    return RatPoly(std::move(c));
}

// the degree-9 sextic-derived polynomial used as a workhorse below
RatPoly deg9_poly() {
    std::vector<Rat> c(10, Rat(0));
    c[0] = 11764900;
    c[3] = -369249;
    c[6] = 2973;
    c[9] = 1;
    return RatPoly(std::move(c));
}

}  // namespace

TEST_CASE("polynomial gcd and division") {
    RatPoly t = RatPoly::x();
    RatPoly a = t * t - RatPoly{Rat(1)};          // t^2 - 1
    RatPoly b = t - RatPoly{Rat(1)};              // t - 1
    CHECK(RatPoly::gcd(a, b) == b.monic());

    auto [q, r] = a.divrem(b);
    CHECK(r.is_zero());
    CHECK(q == t + RatPoly{Rat(1)});

    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        RatPoly A = random_poly(rng, 8), B = random_poly(rng, 5);
        auto [Q, R] = A.divrem(B);
        CHECK(Q * B + R == A);
        CHECK(R.degree() < B.degree());
    }
}

TEST_CASE("extended gcd identity") {
    std::mt19937 rng(11);
    for (int i = 0; i < 30; ++i) {
        RatPoly A = random_poly(rng, 6), B = random_poly(rng, 6);
        auto x = RatPoly::xgcd(A, B);
        CHECK(x.s * A + x.t * B == x.g);
        if (!x.g.is_zero()) CHECK(x.g.leading() == 1);
    }
}

TEST_CASE("squarefree detection") {
    RatPoly f = deg9_poly();
    CHECK(f.squarefree());
    RatPoly t = RatPoly::x();
    CHECK_FALSE(((t - RatPoly{Rat(1)}) * (t - RatPoly{Rat(1)}) * t).squarefree());
}

TEST_CASE("polynomial evaluation") {
    RatPoly f = deg9_poly();
    CHECK(f.evaluate(Rat(0)) == Rat(11764900));
    CHECK(f.evaluate(Rat(1)) == Rat(11398625));
    CHECK(f.evaluate(Rat(1, 2)) == Rat(11764900) - Rat(369249, 8) + Rat(2973, 64) + Rat(1, 512));
}

TEST_CASE("cube roots of polynomials") {
    RatPoly t = RatPoly::x();
    RatPoly c = t + RatPoly{Rat(1)};
    auto r = (c * c * c).poly_cube_root();
    REQUIRE(r.has_value());
    CHECK(*r == c);

    RatPoly nc = t * t * t + RatPoly{Rat(1)};
    CHECK_FALSE(nc.poly_cube_root().has_value());

    // non-monic and rational-coefficient cubes
    std::mt19937 rng(3);
    for (int i = 0; i < 25; ++i) {
        RatPoly g = random_poly(rng, 4);
        if (g.is_zero()) continue;
        RatPoly cube = g * g * g;
        auto back = cube.poly_cube_root();
        REQUIRE(back.has_value());
        CHECK(*back * *back * *back == cube);
        // perturbing a coefficient breaks cube recognition
        RatPoly bad = cube + RatPoly::monomial(1, Rat(1));
        if (bad != cube && bad.degree() % 3 == 0 && bad.degree() == cube.degree())
            CHECK_FALSE(bad.poly_cube_root().has_value());
    }

    // cube root up to a unit when the leading coefficient is not itself a cube
    RatPoly u = (t + RatPoly{Rat(2)}) * (t + RatPoly{Rat(2)}) * (t + RatPoly{Rat(2)}) * Rat(2);
    CHECK_FALSE(u.poly_cube_root().has_value());
    auto uu = u.cube_root_unit();
    REQUIRE(uu.has_value());
    CHECK(uu->first == 2);
    CHECK(uu->second == t + RatPoly{Rat(2)});
}

TEST_CASE("integer and rational cube/square roots") {
    CHECK(*cube_root(Int(27)) == 3);
    CHECK(*cube_root(Int(-27)) == -3);
    CHECK_FALSE(cube_root(Int(28)).has_value());
    CHECK(*cube_root(Rat(8, 27)) == Rat(2, 3));
    CHECK(*square_root(Int(11764900)) == 3430);
    CHECK_FALSE(square_root(Int(-4)).has_value());
}

TEST_CASE("valuations") {
    CHECK(rational_valuation(Rat(12), Int(2)) == 2);
    CHECK(rational_valuation(Rat(9, 25), Int(5)) == -2);
    CHECK(rational_valuation(Rat(9, 25), Int(3)) == 2);
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> v(-200, 200);
    for (int i = 0; i < 100; ++i) {
        long a = v(rng), b = v(rng);
        if (a == 0 || b == 0) continue;
        Rat x(a, 1), y(b, 1);
        for (Int p : {Int(2), Int(3), Int(5)})
            CHECK(rational_valuation(x * y, p) ==
                  rational_valuation(x, p) + rational_valuation(y, p));
    }
}

TEST_CASE("integer factorization") {
    auto f96 = factor_integer(Int(96));
    CHECK(f96.complete());
    REQUIRE(f96.factors.size() == 2);
    CHECK(f96.factors[0] == std::pair<Int, int>(Int(2), 5));
    CHECK(f96.factors[1] == std::pair<Int, int>(Int(3), 1));

    auto big = factor_integer(Int(11764900));
    CHECK(big.complete());
    REQUIRE(big.factors.size() == 3);
    CHECK(big.factors[0] == std::pair<Int, int>(Int(2), 2));
    CHECK(big.factors[1] == std::pair<Int, int>(Int(5), 2));
    CHECK(big.factors[2] == std::pair<Int, int>(Int(7), 6));

    // value() reassembles the input, complete or not
    auto withhint = factor_integer(Int(11398625), {Int(1861)});
    CHECK(withhint.complete());
    CHECK(withhint.value() == 11398625);
    REQUIRE(withhint.factors.size() == 3);
    CHECK(withhint.factors[0] == std::pair<Int, int>(Int(5), 3));
    CHECK(withhint.factors[1] == std::pair<Int, int>(Int(7), 2));
    CHECK(withhint.factors[2] == std::pair<Int, int>(Int(1861), 1));

    // two ~40-digit primes with a starvation budget: honest partial result
    Int p1("1000000000000000000000000000000000000253");
    Int p2("1000000000000000000000000000000000000141");
    FactorBudget tiny{1000, 100, 30};
    auto part = factor_integer(p1 * p2, {}, tiny);
    CHECK_FALSE(part.complete());
    CHECK(part.value() == p1 * p2);
    CHECK(part.cofactor > 1);
    CHECK_FALSE(is_probable_prime(part.cofactor));

    auto neg = factor_integer(Int(-96));
    CHECK(neg.sign == -1);
    CHECK(neg.value() == -96);
}

TEST_CASE("squarefree part and fundamental discriminant") {
    CHECK(squarefree_part(factor_integer(Int(11764900))) == 1);
    CHECK(squarefree_part(factor_integer(Int(-8))) == -2);
    CHECK(squarefree_part(factor_integer(Int(11398625))) == 9305);
    CHECK(fundamental_discriminant(Int(-2)) == -8);    // -2 = 2 mod 4
    CHECK(fundamental_discriminant(Int(-7)) == -7);    // 1 mod 4
    CHECK(fundamental_discriminant(Int(-5)) == -20);
    CHECK(fundamental_discriminant(Int(5)) == 5);
    CHECK(fundamental_discriminant(Int(2)) == 8);
}

TEST_CASE("kronecker symbol and CRT") {
    CHECK(kronecker_symbol(Int(-8), Int(3)) == 1);
    CHECK(kronecker_symbol(Int(2), Int(7)) == 1);
    CHECK(kronecker_symbol(Int(3), Int(7)) == -1);
    Int x = crt_combine({{Int(1), Int(8)}, {Int(0), Int(125)}});
    CHECK(x == 625);
    CHECK_THROWS(crt_combine({{Int(0), Int(4)}, {Int(1), Int(6)}}));
}

TEST_CASE("square roots mod p and mod p^k") {
    auto r = sqrt_mod_p(2, 7);
    REQUIRE(r.has_value());
    CHECK((*r == 3 || *r == 4));
    CHECK_FALSE(sqrt_mod_p(3, 7).has_value());

    for (int k = 1; k <= 6; ++k) {
        auto rk = sqrt_mod_pk(Int(2), Int(7), k);
        REQUIRE(rk.has_value());
        Int pk = 1;
        for (int i = 0; i < k; ++i) pk *= 7;
        CHECK((*rk * *rk - 2) % pk == 0);
    }
    CHECK_FALSE(sqrt_mod_pk(Int(3), Int(7), 3).has_value());

    // primes past 64 bits
    Int p("2367052653482750577941819");
    Int a = 0;
    for (Int c = 2; a == 0; ++c)
        if (kronecker_symbol(c, p) == 1) a = c;
    auto rb = sqrt_mod_pk(a, p, 4);
    REQUIRE(rb.has_value());
    Int pk = p * p * p * p;
    CHECK((*rb * *rb - a) % pk == 0);
}

TEST_CASE("polynomial factorization over F_p") {
    FpPoly f(5, {1, 0, 1});  // t^2 + 1 mod 5
    auto fac = factor_poly_fp(f);
    REQUIRE(fac.size() == 2);
    FpPoly prod = FpPoly::one(5);
    for (const auto& [g, e] : fac) {
        CHECK(g.degree() == 1);
        for (int i = 0; i < e; ++i) prod = prod * g;
    }
    CHECK(prod == f.monic());
    // roots are 2 and 3
    CHECK(f.evaluate(2) == 0);
    CHECK(f.evaluate(3) == 0);

    FpPoly g(3, {1, 0, 1});  // irreducible mod 3
    auto fac3 = factor_poly_fp(g);
    REQUIRE(fac3.size() == 1);
    CHECK(fac3[0].first.degree() == 2);
    CHECK(fac3[0].second == 1);

    // random products re-multiply; multiplicities respected
    std::mt19937 rng(23);
    for (uint64_t p : {5ull, 13ull, 101ull}) {
        for (int trial = 0; trial < 10; ++trial) {
            std::uniform_int_distribution<uint64_t> cd(0, p - 1);
            std::vector<uint64_t> cs(6);
            for (auto& c : cs) c = cd(rng);
            cs.back() = 1;
            FpPoly h(p, cs);
            auto fh = factor_poly_fp(h, 99 + trial);
            FpPoly back = FpPoly::constant(p, h.leading());
            for (const auto& [q, e] : fh)
                for (int i = 0; i < e; ++i) back = back * q;
            CHECK(back == h);
        }
    }
}

TEST_CASE("power series square root") {
    // M = 1 + t: sqrt = 1 + t/2 - t^2/8 + ... mod 7 -> check square matches to precision
    FpPoly M(7, {1, 1});
    auto s = series_sqrt(M, 6);
    REQUIRE(s.has_value());
    FpPoly S(7, *s);
    FpPoly sq = S * S;
    for (int i = 0; i < 6; ++i) CHECK(sq.coeff(i) == M.coeff(i));
    // non-residue constant term
    FpPoly N(7, {3, 1});
    CHECK_FALSE(series_sqrt(N, 4).has_value());
}

TEST_CASE("resultants") {
    RatPoly t = RatPoly::x();
    // Res(t^2 - 1, t - 2) = (2^2 - 1) = 3
    CHECK(RatPoly::resultant(t * t - RatPoly{Rat(1)}, t - RatPoly{Rat(2)}) == 3);
    // shared root -> 0
    CHECK(RatPoly::resultant(t * t - RatPoly{Rat(1)}, t - RatPoly{Rat(1)}) == 0);
}
