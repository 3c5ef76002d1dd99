#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rank3/mestre.hpp"

#include <random>

using namespace rank3;

namespace {

RatFun tfun() { return RatFun(RatPoly::x()); }

RatFun cubic_eval(const std::array<RatFun, 4>& r, const RatFun& x) {
    return ((r[3] * x + r[2]) * x + r[1]) * x + r[0];
}

}  // namespace

TEST_CASE("sextic input closes the sum") {
    auto in = sextic_input({RatFun(Rat(2)), RatFun(Rat(3)), RatFun(Rat(-5)), RatFun(Rat(0)), tfun()});
    RatFun sum;
    for (const auto& x : in.x) sum = sum + x;
    CHECK(sum.is_zero());
    CHECK(in.x[5] == -tfun());
}

TEST_CASE("sextic expansion identities") {
    auto in = sextic_input({RatFun(Rat(2)), RatFun(Rat(3)), RatFun(Rat(-5)), RatFun(Rat(0)), tfun()});
    auto model = expand_sextic(in);
    REQUIRE(model.marked.size() == 6);
    for (const auto& [x, g] : model.marked) {
        // marked points lie on Y^3 = r(X)
        CHECK(g * g * g == cubic_eval(model.r, x));
        // and the x_i are the roots of the monic sextic
        RatFun p = x.pow(6);
        for (int j = 0; j < 5; ++j) p = p + model.a[j] * x.pow(j);
        CHECK(p.is_zero());
    }
    // coincident roots are rejected
    CHECK_THROWS(expand_sextic(
        sextic_input({RatFun(Rat(1)), RatFun(Rat(1)), RatFun(Rat(2)), RatFun(Rat(3)), tfun()})));
}

TEST_CASE("parametrized family") {
    auto in = mestre_parametrization(Rat(2));
    CHECK(in.x[0].evaluate(Rat(0)) == Rat(-7, 8));
    CHECK(in.x[2].evaluate(Rat(0)) == Rat(-11, 8));
    RatFun sum;
    for (const auto& x : in.x) sum = sum + x;
    CHECK(sum.is_zero());

    // leading cubic coefficient of r is the constant 1 for every admissible u
    for (long n : {2, 3, 7, -2, -4, 11}) {
        auto model = expand_sextic(mestre_parametrization(Rat(n)));
        CHECK(model.r[3] == RatFun(Rat(1)));
        for (const auto& [x, g] : model.marked) CHECK(g * g * g == cubic_eval(model.r, x));
    }
    auto m95 = expand_sextic(mestre_parametrization(Rat(-9, 5)));
    CHECK(m95.r[3] == RatFun(Rat(1)));
}

TEST_CASE("weierstrass transformation") {
    auto model = expand_sextic(mestre_parametrization(Rat(-9, 5)));
    auto w = to_weierstrass(model, -1);  // r3 = 1 is a cube: origin at infinity
    REQUIRE(w.images.size() == 6);
    int present = 0;
    for (const auto& im : w.images) {
        if (!im) continue;
        ++present;
        const auto& [x, y] = *im;
        CHECK(y * y == x * x * x + w.K);
    }
    CHECK(present == 6);

    // basing at a marked point works too and keeps the curve j = 0
    auto w0 = to_weierstrass(model, 0);
    for (const auto& im : w0.images) {
        if (!im) continue;
        const auto& [x, y] = *im;
        CHECK(y * y == x * x * x + w0.K);
    }
}

TEST_CASE("sixth power clearing") {
    auto model = expand_sextic(mestre_parametrization(Rat(-9, 5)));
    auto w = to_weierstrass(model, -1);
    auto [lambda, F] = clear_sixth_powers(w.K);
    CHECK(lambda.pow(6) * w.K == RatFun(F));
    for (const auto& c : F.coeffs()) CHECK(den(c) == 1);
    // minimality: no prime sixth power divides all scaled coefficients compatibly
    CHECK(F.degree() >= 0);
}

TEST_CASE("elliptic group law") {
    auto fx = load_fixture("f1", {Rat(2)});
    // y^2 = t^3 + (t+2)^2/4
    RatPoly t = RatPoly::x();
    RatPoly expect = t * t * t + (t + RatPoly{Rat(2)}) * (t + RatPoly{Rat(2)}) * Rat(1, 4);
    CHECK(fx.f == expect);

    ECPoint P = std::make_pair(fx.points[0].X ? *fx.points[0].X : RatFun(), fx.points[0].Y);
    // fixture points satisfy the curve equation
    auto on_curve = [&](const ECPoint& Q) {
        return Q->second * Q->second == Q->first.pow(3) + RatFun(fx.f);
    };
    CHECK(on_curve(P));
    CHECK_FALSE(ec_add(P, ec_neg(P), fx.f).has_value());

    ECPoint P2 = ec_add(P, P, fx.f);
    REQUIRE(P2.has_value());
    CHECK(on_curve(P2));
    ECPoint P3 = ec_add(P2, P, fx.f);
    ECPoint P3b = ec_add(P, P2, fx.f);
    CHECK(P3 == P3b);
    if (P3) CHECK(on_curve(P3));
    // associativity: (2P + 2P) == 3P + P
    CHECK(ec_add(P2, P2, fx.f) == ec_add(P3, P, fx.f));
}

TEST_CASE("fixture catalogue") {
    auto f1 = load_fixture("f1", {Rat(2)});
    verify_fixture(f1);
    CHECK(f1.degree() == 3);
    CHECK(f1.genus() == 1);
    CHECK(f1.points.size() >= 1);

    auto f2 = load_fixture("f2", {Rat(-5), Rat(1)});
    verify_fixture(f2);
    CHECK(f2.points.size() >= 2);

    auto f3 = load_fixture("f3");
    verify_fixture(f3);
    CHECK(f3.degree() == 9);
    CHECK(f3.genus() == 4);
    REQUIRE(f3.points.size() == 4);
    CHECK(f3.f.coeff(0) == 11764900);
    CHECK(f3.f.coeff(3) == -369249);
    CHECK(f3.f.coeff(6) == 2973);
    CHECK(f3.f.coeff(9) == 1);
    for (const auto& pt : f3.points) {
        REQUIRE(pt.X.has_value());
        CHECK(pt.Y * pt.Y - RatFun(f3.f) == pt.X->pow(3));
    }

    auto f4 = load_fixture("f4");
    verify_fixture(f4);
    CHECK(f4.degree() == 10);
    CHECK(f4.points.size() >= 5);

    auto f5 = load_fixture("f5");
    verify_fixture(f5);
    CHECK(f5.degree() == 30);
    CHECK(f5.genus() == 14);
    CHECK(f5.f == f4.f.compose_cube());

    auto s7 = load_fixture("sec7");
    verify_fixture(s7);
    CHECK(s7.degree() == 30);
    CHECK(s7.genus() == 14);
    CHECK(s7.points.size() == 6);

    CHECK_THROWS(load_fixture("nope"));
}

TEST_CASE("fixture serialization round trip") {
    for (const std::string& label : {"f3", "f4"}) {
        auto fx = load_fixture(label);
        auto back = fixture_from_text(fixture_to_text(fx));
        CHECK(back.f == fx.f);
        REQUIRE(back.points.size() == fx.points.size());
        for (size_t i = 0; i < fx.points.size(); ++i)
            CHECK(back.points[i].Y == fx.points[i].Y);
        verify_fixture(back);
    }
}
