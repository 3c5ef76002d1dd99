#include "rank3/descent.hpp"

#include "rank3/modular.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rank3 {

TorsionClassData build_class(const CurveFixture& fx, int i) {
    const auto& pt = fx.points.at(i);
    if (!pt.X) throw std::invalid_argument("point has no rational X; class map undefined");
    if (pt.X->is_zero())
        throw std::invalid_argument("X = 0 is degenerate (would force f to be a square)");
    TorsionClassData tc;
    tc.fixture = fx.label;
    tc.index = i;
    tc.X = *pt.X;
    tc.Y = pt.Y;
    if (tc.Y * tc.Y - RatFun(fx.f) != tc.X.pow(3))
        throw std::runtime_error("cube identity failed; fixture corrupt");
    tc.certified = true;
    return tc;
}

bool ExceptionalSet::contains(const Int& p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
}

namespace {

void add_primes(std::map<Int, std::set<std::string>>& acc, const Int& n,
                const std::string& why, const FactorBudget& budget) {
    Int a = abs(n);
    if (a <= 1) return;
    auto fac = factor_integer(a, {}, budget);
    if (!fac.complete())
        throw std::runtime_error("could not factor completely while building S: " +
                                 to_string(fac.cofactor));
    for (const auto& [p, e] : fac.factors) acc[p].insert(why);
}

Int coeff_den_lcm(const RatPoly& p) {
    Int l = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den(c).get_mpz_t());
    return l;
}

}  // namespace

ExceptionalSet construct_S(const CurveFixture& fx, int i, const FactorBudget& budget) {
    int d = fx.f.degree();
    if (d % 2 == 0 && d % 6 != 0)
        throw std::invalid_argument("deg f = 2, 4 (mod 6) unsupported");
    TorsionClassData tc = build_class(fx, i);

    // X = a/dd^2, Y = b/dd^3 in lowest terms
    const RatPoly &a = tc.X.num(), &b = tc.Y.num();
    RatPoly dd{Rat(1)};
    if (tc.Y.den().degree() > 0 || tc.X.den().degree() > 0) {
        auto root = tc.Y.den().poly_cube_root();
        if (!root || *root * *root != tc.X.den())
            throw std::runtime_error("denominators not of the form d^2, d^3");
        dd = *root;
    }

    if (RatPoly::gcd(a, fx.f).degree() != 0)
        throw std::runtime_error("X numerator shares a factor with f; fixture corrupt");
    auto bez = RatPoly::xgcd(a, fx.f);
    if (bez.g.degree() != 0 || bez.g.coeff(0) != 1)
        throw std::logic_error("Bezout identity not monic 1");

    ExceptionalSet S;
    S.bezout_g = bez.s;
    S.bezout_h = bez.t;

    std::map<Int, std::set<std::string>> acc;
    acc[2].insert("2-adic place");
    struct Named {
        const char* name;
        const RatPoly* poly;
        bool leading;
    };
    RatPoly fcopy = fx.f;
    std::vector<Named> polys = {{"a", &a, true},          {"b", &b, true},
                                {"d", &dd, true},         {"f", &fcopy, true},
                                {"g", &S.bezout_g, false}, {"h", &S.bezout_h, false}};
    for (const auto& [name, poly, leading] : polys) {
        add_primes(acc, coeff_den_lcm(*poly), std::string("denominator of ") + name, budget);
        if (leading && !poly->is_zero())
            add_primes(acc, num(poly->leading()), std::string("leading coefficient of ") + name,
                       budget);
    }
    for (const auto& [p, whys] : acc) {
        S.primes.push_back(p);
        for (const auto& w : whys) S.provenance.emplace_back(p, w);
    }
    return S;
}

std::vector<Rat> default_search_T(const Int& p) {
    std::vector<Rat> T;
    for (int i = 0; i <= 20; ++i) T.emplace_back(i);
    T.emplace_back(Rat(Int(1), p));
    T.emplace_back(Rat(Int(1), p * p));
    T.emplace_back(Rat(Int(1), p * p * p));
    return T;
}

std::optional<Rat> check_h1(const RatPoly& f, const Int& p, const std::vector<Rat>& T) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("check_h1: p must be an odd prime");
    for (const Rat& t : T) {
        Rat v = f.evaluate(t);
        if (v == 0) continue;
        if (rational_valuation(v, p) % 3 == 0) return t;
    }
    return std::nullopt;
}

std::optional<Rat> check_h2(const RatPoly& f, const std::vector<Rat>& T,
                            const FactorBudget& budget) {
    for (const Rat& t : T) {
        Rat v = f.evaluate(t);
        if (v == 0) continue;
        // Q(sqrt(n/d)) = Q(sqrt(n*d))
        Int nd = num(v) * den(v);
        // odd 2-adic valuation forces 2 | m, so 2 ramifies -- no factoring needed
        if (ord_p(nd, 2) % 2 == 1) return t;
        auto fac = factor_integer(nd, {}, budget);
        if (!fac.complete()) continue;  // cannot certify the splitting; skip
        Int m = squarefree_part(fac);
        if (m == 1) continue;  // not a quadratic field
        Int D = fundamental_discriminant(m);
        if (kronecker_symbol(D, Int(2)) != 1) return t;  // 2 inert or ramified
    }
    return std::nullopt;
}

PAdicWindow window_radius(const RatPoly& f, const Int& p, const Rat& t_p) {
    Rat v0 = f.evaluate(t_p);
    if (v0 == 0) throw std::invalid_argument("window_radius: f(t_p) = 0");
    long ord0 = rational_valuation(v0, p);
    RatPoly taylor = f.shift(t_p);  // c_j = coeff of (t - t_p)^j
    long k = std::numeric_limits<long>::min();
    for (int j = 1; j <= taylor.degree(); ++j) {
        Rat cj = taylor.coeff(j);
        if (cj == 0) continue;
        long oj = rational_valuation(cj, p);
        // smallest k with oj + j*k > ord0  <=>  k >= floor((ord0 - oj)/j) + 1
        long need = (ord0 - oj) >= 0 ? (ord0 - oj) / j + 1
                                     : -((oj - ord0 - 1) / j + 1) + 1;
        k = std::max(k, need);
    }
    PAdicWindow w;
    w.p = p;
    w.center = t_p;
    w.k = k;
    return w;
}

namespace {

int sign_of(const Rat& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

std::vector<RatPoly> sturm_chain(const RatPoly& f) {
    std::vector<RatPoly> chain{f, f.derivative()};
    while (!chain.back().is_zero()) {
        const RatPoly& a = chain[chain.size() - 2];
        const RatPoly& b = chain.back();
        RatPoly r = -(a % b);
        chain.push_back(r);
    }
    chain.pop_back();
    return chain;
}

int sign_changes(const std::vector<RatPoly>& chain, const Rat& x) {
    int changes = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sign_of(p.evaluate(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

}  // namespace

int sturm_count(const RatPoly& f, const Rat& lo, const Rat& hi) {
    auto chain = sturm_chain(f);
    return sign_changes(chain, lo) - sign_changes(chain, hi);
}

PAdicWindow real_window(const RatPoly& f) {
    if (f.degree() < 1) throw std::invalid_argument("real_window: f must be nonconstant");
    PAdicWindow w;
    w.archimedean = true;

    auto chain = sturm_chain(f);
    auto roots_in = [&](const Rat& lo, const Rat& hi) {
        return sign_changes(chain, lo) - sign_changes(chain, hi);
    };

    // Cauchy bound: all real roots lie in (-B, B)
    Rat B(1);
    for (int j = 0; j < f.degree(); ++j) {
        Rat r = abs(f.coeff(j) / f.leading());
        if (r > B) B = r;
    }
    B += 1;
    Rat cap = B + 2;

    // grow one endpoint outward while f stays negative and no root is crossed,
    // so the invariant "f < 0 on [lo, hi]" is preserved exactly
    auto expand = [&](Rat x, int dir) {
        auto try_step = [&](Rat& x0, const Rat& step) {
            Rat xn = x0 + Rat(dir) * step;
            if (xn < -cap || xn > cap) return false;
            if (f.evaluate(xn) >= 0) return false;
            if ((dir < 0 ? roots_in(xn, x0) : roots_in(x0, xn)) != 0) return false;
            x0 = xn;
            return true;
        };
        Rat step(1);
        while (try_step(x, step)) step *= 2;
        while (step > Rat(1, 1024)) {
            step /= 2;
            try_step(x, step);
        }
        return x;
    };
    auto window_around = [&](const Rat& q) {
        w.lo = expand(q, -1);
        w.hi = expand(q, +1);
        w.delta = 0;
        if (f.evaluate(w.lo) >= 0 || f.evaluate(w.hi) >= 0 || roots_in(w.lo, w.hi) != 0)
            throw std::logic_error("negative window verification failed");
        return w;
    };

    // prefer small-height sample points so the window is useful downstream
    for (int i = 0; i <= 80; ++i) {
        for (int s : {1, -1}) {
            Rat q = Rat(i * s) / 2;
            if (f.evaluate(q) < 0) return window_around(q);
            if (i == 0) break;
        }
    }
    if (f.leading() < 0 && f.evaluate(B + 1) < 0) return window_around(B + 1);
    if (f.degree() % 2 == 1 && f.evaluate(-B - 1) < 0) return window_around(-B - 1);

    if (roots_in(-B, B) == 0) {
        // no real roots and positive somewhere: positive definite
        w.delta = 1;
        return w;
    }
    // bisect between roots hunting for a negative value; any interval boundary
    // falling strictly inside a negative region is detected at evaluation time
    std::vector<std::pair<Rat, Rat>> stack{{-B, B}};
    int guard = 0;
    while (!stack.empty()) {
        if (++guard > 100000) break;
        auto [lo, hi] = stack.back();
        stack.pop_back();
        Rat mid = (lo + hi) / 2;
        Rat vm = f.evaluate(mid);
        if (vm < 0) return window_around(mid);
        if (vm == 0) {
            // simple root at mid: f is negative on one side of it
            Rat off = (hi - lo) / 8;
            if (f.evaluate(mid - off) < 0) return window_around(mid - off);
            if (f.evaluate(mid + off) < 0) return window_around(mid + off);
        }
        if (roots_in(lo, hi) < 1) continue;
        stack.push_back({lo, mid});
        stack.push_back({mid, hi});
    }
    throw std::logic_error("sign change detected but no negative sample found");
}

}  // namespace rank3
