#pragma once
// Mestre's sextic construction: j-invariant-0 elliptic curves over Q(t) with many
// rational points, plus the concrete curve fixtures used throughout.

#include "rank3/ratfun.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rank3 {

struct MestreInput {
    std::array<RatFun, 6> x;  // x6 = -(x1+...+x5) enforced at construction
};

struct CubicModel {
    std::array<RatFun, 4> r;  // r0..r3 of r(X) = r3 X^3 + ... + r0
    std::array<RatFun, 5> a;  // a0..a4 of p(X) = X^6 + a4 X^4 + ... (a5 = 0)
    std::vector<std::pair<RatFun, RatFun>> marked;  // (x_i, g(x_i)) on Y^3 = r(X)
};

struct FixturePoint {
    std::optional<RatFun> X;  // absent when Y^2 - f is a cube only up to a unit
    RatFun Y;
};

struct CurveFixture {
    std::string label;
    RatPoly f;
    std::vector<FixturePoint> points;
    int degree() const { return f.degree(); }
    int genus() const {
        int d = f.degree();
        return d % 2 ? (d - 1) / 2 : (d - 2) / 2;
    }
};

// Six x-values summing to zero, from five inputs.
MestreInput sextic_input(const std::array<RatFun, 5>& x5);

// The §-parametrization x_i(t, u); u must avoid denominator zeros.
MestreInput mestre_parametrization(const Rat& u);

// Elementary-symmetric expansion; yields r(X) and the six marked points.
// Throws on coincident x_i.
CubicModel expand_sextic(const MestreInput& in);

// Map Y^3 = r(X) to y^2 = x^3 + K with the chosen origin (marked-point index, or
// -1 for the point at infinity, available when r3 is a cube). Returns K and the
// images of the marked points (nullopt for the origin itself / degenerate s = 0).
struct WeierstrassResult {
    RatFun K;
    std::vector<std::optional<std::pair<RatFun, RatFun>>> images;
};
WeierstrassResult to_weierstrass(const CubicModel& model, int origin_index);

// Minimal lambda in Q(t) (constant x monic-poly part) with lambda^6 * K in Z[t];
// returns (lambda, cleared integer-coefficient polynomial).
std::pair<RatFun, RatPoly> clear_sixth_powers(const RatFun& K);

// Group law on y^2 = x^3 + f over Q(t); nullopt = point at infinity.
using ECPoint = std::optional<std::pair<RatFun, RatFun>>;
ECPoint ec_add(const ECPoint& P, const ECPoint& Q, const RatPoly& f);
ECPoint ec_neg(const ECPoint& P);

// Labels: f1-family(a), f2-family(a,b), f3, f4, f5, sec7.
CurveFixture load_fixture(const std::string& label, const std::vector<Rat>& params = {});

// Verify the defining identities of a fixture (cube reconstruction of X).
void verify_fixture(const CurveFixture& fx);

// Fixture file format: header `curve <label> degree <d>`, `f:` coefficients
// (ascending, decimal), per-point `Y_i:` numerator and denominator arrays.
std::string fixture_to_text(const CurveFixture& fx);
CurveFixture fixture_from_text(const std::string& text);

}  // namespace rank3
