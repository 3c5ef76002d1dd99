#include "rank3/jacobian.hpp"

namespace rank3 {

std::optional<FpPoly> reduce_mod(const RatPoly& f, uint64_t p) {
    std::vector<uint64_t> v;
    Int P(static_cast<unsigned long>(p));
    for (const auto& c : f.coeffs()) {
        Int d = den(c) % P;
        if (d == 0) return std::nullopt;
        Int n = num(c) % P;
        if (n < 0) n += P;
        uint64_t dm = d.get_ui() % p;
        v.push_back(mulmod_u64(n.get_ui(), invmod_u64(dm, p), p));
    }
    return FpPoly(p, std::move(v));
}

uint64_t resultant_fp(const FpPoly& a, const FpPoly& b) {
    uint64_t p = a.modulus();
    if (a.is_zero() || b.is_zero()) return 0;
    FpPoly f = a, g = b;
    uint64_t res = 1;
    while (g.degree() > 0) {
        FpPoly r = f % g;
        if (r.is_zero()) return 0;
        uint64_t lg = g.leading();
        int da = f.degree(), db = g.degree(), dr = r.degree();
        uint64_t pw = powmod_u64(lg, da - dr, p);
        if ((static_cast<long>(da) * db) % 2 == 1) pw = p - pw;
        res = mulmod_u64(res, pw, p);
        f = std::move(g);
        g = std::move(r);
    }
    return mulmod_u64(res, powmod_u64(g.coeff(0), f.degree(), p), p);
}

namespace {

bool is_prime_u64(uint64_t n) {
    Int m(static_cast<unsigned long>(n));
    return mpz_probab_prime_p(m.get_mpz_t(), 30) > 0;
}

bool has_root(const FpPoly& f) {
    // gcd with x^p - x
    FpPoly x = FpPoly::x(f.modulus());
    FpPoly xp = x.powmod(f.modulus(), f);
    return FpPoly::gcd(xp - x, f).degree() > 0;
}

std::optional<uint64_t> find_root(const FpPoly& f) {
    for (uint64_t a = 0; a < f.modulus(); ++a)
        if (f.evaluate(a) == 0) return a;
    return std::nullopt;
}

}  // namespace

std::vector<uint64_t> good_prime_select(const CurveFixture& fx, int how_many, uint64_t lo) {
    std::vector<uint64_t> out;
    int d = fx.degree();
    for (uint64_t p = std::max<uint64_t>(lo, 3) + 1; p < 65536 && (int)out.size() < how_many;
         ++p) {
        if (!is_prime_u64(p)) continue;
        auto fm = reduce_mod(fx.f, p);
        if (!fm || fm->degree() != d || !fm->squarefree()) continue;
        if (d % 2 == 0 && !has_root(*fm)) continue;
        bool ok = true;
        for (const auto& pt : fx.points) {
            auto yn = reduce_mod(pt.Y.num(), p), yd = reduce_mod(pt.Y.den(), p);
            if (!yn || !yd || yd->degree() != pt.Y.den().degree()) {
                ok = false;
                break;
            }
            if (pt.X) {
                auto xn = reduce_mod(pt.X->num(), p);
                if (!xn || xn->degree() != pt.X->num().degree() ||
                    resultant_fp(*xn, *fm) == 0) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) out.push_back(p);
    }
    if ((int)out.size() < how_many) throw std::runtime_error("good prime search exhausted");
    return out;
}

OddModel to_odd_model(const FpPoly& f, std::optional<uint64_t> root) {
    uint64_t p = f.modulus();
    int d = f.degree();
    if (!f.squarefree()) throw std::invalid_argument("f not squarefree mod p");
    OddModel m;
    m.p = p;
    if (d % 2 == 1) {
        // t = X/c, y = W/c^((d-1)/2) makes y^2 = f(t) monic of the same degree
        uint64_t c = f.leading();
        std::vector<uint64_t> F(d + 1);
        for (int j = 0; j < d; ++j) F[j] = mulmod_u64(f.coeff(j), powmod_u64(c, d - 1 - j, p), p);
        F[d] = 1;  // leading term: c * c^(-1)
        m.F = FpPoly(p, std::move(F));
        m.genus = (d - 1) / 2;
        m.shifted = false;
        m.c = c;
        return m;
    }
    if (d % 6 == 2) throw std::invalid_argument("deg f = 2 (mod 6) unsupported");
    if (!root) throw std::invalid_argument("even degree requires a root");
    uint64_t a = *root;
    if (f.evaluate(a) != 0) throw std::invalid_argument("not a root of f mod p");
    // fstar(s) = s^d f(a + 1/s); simple root => deg d-1 with leading f'(a)
    FpPoly sh = f.shift(a);
    std::vector<uint64_t> fstar(d + 1, 0);
    for (int k = 0; k <= d; ++k) fstar[k] = sh.coeff(d - k);
    FpPoly fs(p, std::move(fstar));
    if (fs.degree() != d - 1) throw std::invalid_argument("root not simple mod p");
    uint64_t c = fs.leading();
    std::vector<uint64_t> F(d);
    uint64_t cinv = invmod_u64(c, p);
    for (int j = 0; j <= d - 1; ++j) {
        int e = d - 2 - j;
        uint64_t pw = e >= 0 ? powmod_u64(c, e, p) : powmod_u64(cinv, -e, p);
        F[j] = mulmod_u64(fs.coeff(j), pw, p);
    }
    m.F = FpPoly(p, std::move(F));
    if (m.F.leading() != 1) throw std::logic_error("odd model not monic");
    m.genus = (d - 2) / 2;
    m.shifted = true;
    m.a = a;
    m.c = c;
    return m;
}

MumfordDivisor mumford_identity(const OddModel& m) {
    return {FpPoly::one(m.p), FpPoly(m.p)};
}

bool divisor_valid(const MumfordDivisor& D, const OddModel& m) {
    if (D.u.is_zero() || D.u.leading() != 1) return false;
    if (!D.v.is_zero() && D.v.degree() >= D.u.degree()) return false;
    return ((D.v * D.v - m.F) % D.u).is_zero();
}

MumfordDivisor cantor_add(const MumfordDivisor& D1, const MumfordDivisor& D2,
                          const OddModel& m) {
    uint64_t p = m.p;
    const FpPoly &u1 = D1.u, &v1 = D1.v, &u2 = D2.u, &v2 = D2.v;
    auto [d0, e1, e2] = FpPoly::xgcd(u1, u2);
    FpPoly s = v1 + v2;
    auto [d, c1, c2] = FpPoly::xgcd(d0, s);
    FpPoly u = (u1 * u2) / (d * d);
    FpPoly t1 = c1 * e1 * u1 * v2 + c1 * e2 * u2 * v1;
    FpPoly t2 = c2 * (v1 * v2 + m.F);
    auto [q, r] = (t1 + t2).divrem(d);
    if (!r.is_zero()) throw std::logic_error("cantor composition division failed");
    FpPoly v = q % u;
    u = u.monic();
    while (u.degree() > m.genus) {
        FpPoly un = ((m.F - v * v) / u).monic();
        v = (-v) % un;
        u = std::move(un);
    }
    (void)p;
    return {u, v % u};
}

MumfordDivisor cantor_neg(const MumfordDivisor& D) { return {D.u, -D.v}; }

MumfordDivisor cantor_mul(const MumfordDivisor& D, long n, const OddModel& m) {
    MumfordDivisor R = mumford_identity(m), A = D;
    bool neg = n < 0;
    unsigned long e = neg ? -static_cast<unsigned long>(n) : n;
    while (e) {
        if (e & 1) R = cantor_add(R, A, m);
        A = cantor_add(A, A, m);
        e >>= 1;
    }
    return neg ? cantor_neg(R) : R;
}

namespace {

// P(S)/S^deg = poly(a + c/S); returns P.
FpPoly rev_shift(const FpPoly& poly, uint64_t a, uint64_t c) {
    uint64_t p = poly.modulus();
    FpPoly q = poly.shift(a);
    int k = poly.degree();
    std::vector<uint64_t> P(k + 1, 0);
    uint64_t cj = 1;
    for (int j = 0; j <= k; ++j) {
        P[k - j] = mulmod_u64(q.coeff(j), cj, p);
        cj = mulmod_u64(cj, c, p);
    }
    return FpPoly(p, std::move(P));
}

// Ytil(S) = (S^(d/2)/c) * Y(a + c/S) as a polynomial in S.
FpPoly transport_even(const FpPoly& Yn, const FpPoly& Yd, const OddModel& m, int d) {
    uint64_t p = m.p;
    FpPoly Pn = rev_shift(Yn, m.a, m.c), Pd = rev_shift(Yd, m.a, m.c);
    int e = d / 2 + Yd.degree() - Yn.degree();
    if (e < 0) throw BadPrime("negative transport exponent");
    std::vector<uint64_t> mono(e + 1, 0);
    mono[e] = invmod_u64(m.c, p);
    auto [q, r] = (Pn * FpPoly(p, std::move(mono))).divrem(Pd);
    if (!r.is_zero()) throw BadPrime("transported Y not polynomial");
    return q;
}

// Ytil(X) = c^((d-1)/2) * Y(X/c) as a num/den pair.
std::pair<FpPoly, FpPoly> transport_odd(const FpPoly& Yn, const FpPoly& Yd,
                                        const OddModel& m, int d) {
    uint64_t p = m.p, cinv = invmod_u64(m.c, p);
    auto scale_arg = [&](const FpPoly& f) {
        std::vector<uint64_t> v(f.coeffs());
        uint64_t s = 1;
        for (size_t j = 1; j < v.size(); ++j) {
            s = mulmod_u64(s, cinv, p);
            v[j] = mulmod_u64(v[j], s, p);
        }
        return FpPoly(p, std::move(v));
    };
    FpPoly n = scale_arg(Yn).scaled(powmod_u64(m.c, (d - 1) / 2, p));
    return {n, scale_arg(Yd)};
}

// Canonical (fully reduced) representative; the torsion gate is skipped for the
// intermediate classes of the deg = 4 (mod 6) path (only their differences are torsion).
MumfordDivisor finish_class(FpPoly u, const FpPoly& Ysub, const OddModel& m,
                            bool check_torsion = true) {
    u = u.monic();
    FpPoly v = Ysub % u;
    MumfordDivisor D{u, v};
    if (!divisor_valid(D, m)) throw BadPrime("u does not divide v^2 - F");
    D = cantor_add(D, mumford_identity(m), m);
    if (check_torsion && !cantor_mul(D, 3, m).is_identity())
        throw BadPrime("class is not 3-torsion");
    return D;
}

struct EvenClass {
    MumfordDivisor D;
    FpPoly Ytil;
};

// Build (u, v = Ytil mod u) from the cube part of Q = Ytil^2 - F; the exponent of
// the place over S is allowed to be nonzero mod 3 only when permitted.
EvenClass even_class(const FpPoly& Ytil, const OddModel& m, bool allow_S_leftover) {
    uint64_t p = m.p;
    FpPoly Q = Ytil * Ytil - m.F;
    if (Q.is_zero()) throw BadPrime("Y^2 = F identically");
    FpPoly u = FpPoly::one(p);
    for (const auto& [q, e] : factor_poly_fp(Q)) {
        int keep = e / 3;
        if (e % 3 != 0) {
            bool is_S = q.degree() == 1 && q.coeff(0) == 0;
            if (!(allow_S_leftover && is_S)) throw BadPrime("non-cube factor in Y^2 - F");
        }
        for (int i = 0; i < keep; ++i) u = u * q;
    }
    return {finish_class(u, Ytil, m, !allow_S_leftover), Ytil};
}

}  // namespace

MumfordDivisor reduce_class(const CurveFixture& fx, int i, const OddModel& m) {
    int d = fx.degree();
    if (d % 2 == 0 && d % 6 != 0)
        throw std::invalid_argument("individual classes undefined for deg = 4 (mod 6)");
    uint64_t p = m.p;
    const RatFun& Y = fx.points.at(i).Y;
    auto Yn = reduce_mod(Y.num(), p), Yd = reduce_mod(Y.den(), p);
    if (!Yn || !Yd || Yd->degree() != Y.den().degree()) throw BadPrime("Y does not reduce");

    if (d % 2 == 0) {
        FpPoly Ytil = transport_even(*Yn, *Yd, m, d);
        return even_class(Ytil, m, false).D;
    }

    auto [tn, td] = transport_odd(*Yn, *Yd, m, d);
    FpPoly Q = tn * tn - m.F * td * td;
    if (Q.is_zero()) throw BadPrime("Y^2 = F identically");
    FpPoly u = FpPoly::one(p);
    for (const auto& [q, e] : factor_poly_fp(Q)) {
        if (e % 3 != 0) throw BadPrime("non-cube factor in Y^2 - F");
        for (int i2 = 0; i2 < e / 3; ++i2) u = u * q;
    }
    u = u.monic();
    auto [g, s, t] = FpPoly::xgcd(td, u);
    if (g.degree() != 0) throw BadPrime("denominator collides with support");
    (void)t;
    return finish_class(u, (tn * s) % u, m);
}

ReducedClasses reduce_fixture_classes(const CurveFixture& fx, uint64_t p) {
    int d = fx.degree();
    auto fm = reduce_mod(fx.f, p);
    if (!fm || fm->degree() != d || !fm->squarefree()) throw BadPrime("bad reduction of f");

    ReducedClasses out;
    if (d % 2 == 1) {
        out.model = to_odd_model(*fm);
        for (size_t i = 0; i < fx.points.size(); ++i)
            out.classes.push_back(reduce_class(fx, (int)i, out.model));
        return out;
    }
    auto root = find_root(*fm);
    if (!root) throw BadPrime("f has no root mod p");
    out.model = to_odd_model(*fm, *root);

    if (d % 6 == 0) {
        for (size_t i = 0; i < fx.points.size(); ++i)
            out.classes.push_back(reduce_class(fx, (int)i, out.model));
        return out;
    }

    // deg f = 4 (mod 6): only the differences D_i - D_base are classes; the branch
    // mismatch at the place over S is corrected via the series expansion of sqrt(F)
    std::vector<EvenClass> built;
    for (const auto& pt : fx.points) {
        auto Yn = reduce_mod(pt.Y.num(), p), Yd = reduce_mod(pt.Y.den(), p);
        if (!Yn || !Yd || Yd->degree() != pt.Y.den().degree())
            throw BadPrime("Y does not reduce");
        built.push_back(even_class(transport_even(*Yn, *Yd, out.model, d), out.model, true));
    }
    const int prec = 40;
    auto W = series_sqrt(out.model.F, prec);
    if (!W) throw BadPrime("F(0) not a square mod p");
    uint64_t beta = (*W)[0];
    std::vector<int> z;
    for (const auto& ec : built) {
        int zi = 0;
        while (zi < prec - 1) {
            uint64_t wc = (*W)[zi];
            if ((ec.Ytil.coeff(zi) + p - wc) % p != 0) break;
            ++zi;
        }
        if (zi >= prec - 1) throw BadPrime("series contact exceeds precision");
        z.push_back(zi);
    }
    size_t base = built.size() - 1;
    MumfordDivisor E{FpPoly::x(p), FpPoly::constant(p, beta)};
    if (!divisor_valid(E, out.model)) throw BadPrime("place over S invalid");
    for (size_t i = 0; i + 1 < built.size(); ++i) {
        int dz = z[i] - z[base];
        if (dz % 3 != 0) throw BadPrime("branch exponent not divisible by 3");
        int mcorr = dz / 3;
        MumfordDivisor D =
            cantor_add(built[i].D, cantor_neg(built[base].D), out.model);
        if (mcorr != 0) {
            MumfordDivisor corr = cantor_mul(E, 2L * std::abs(mcorr), out.model);
            if (mcorr < 0) corr = cantor_neg(corr);
            D = cantor_add(D, corr, out.model);
        }
        if (!cantor_mul(D, 3, out.model).is_identity())
            throw BadPrime("difference class is not 3-torsion");
        out.classes.push_back(D);
    }
    return out;
}

IndependenceReport independence_mod3(const std::vector<MumfordDivisor>& classes,
                                     const OddModel& m) {
    IndependenceReport rep;
    rep.p = m.p;
    int r = (int)classes.size();
    std::vector<std::array<MumfordDivisor, 3>> pows;
    for (const auto& D : classes) {
        if (!cantor_mul(D, 3, m).is_identity())
            throw std::invalid_argument("input class is not 3-torsion");
        pows.push_back({mumford_identity(m), D, cantor_add(D, D, m)});
    }
    long nid_half = 0;
    long total = 1;
    for (int i = 0; i < r; ++i) total *= 3;
    std::vector<int> combo(r, 0);
    for (long idx = 1; idx < total; ++idx) {
        long x = idx;
        for (int i = r - 1; i >= 0; --i) {
            combo[i] = x % 3;
            x /= 3;
        }
        // canonical half: first nonzero coefficient = 1
        int first = 0;
        while (combo[first] == 0) ++first;
        if (combo[first] != 1) continue;
        ++rep.combos_tested;
        MumfordDivisor acc = mumford_identity(m);
        for (int i = 0; i < r; ++i)
            if (combo[i]) acc = cantor_add(acc, pows[i][combo[i]], m);
        if (acc.is_identity()) {
            ++nid_half;
            rep.relations.push_back(combo);
        }
    }
    long nid = 2 * nid_half + 1;
    int rank = r;
    long chk = 1;
    while (chk < nid) {
        chk *= 3;
        --rank;
    }
    if (chk != nid) throw std::logic_error("identity count is not a power of 3");
    rep.rank = rank;
    return rep;
}

std::vector<IndependenceReport> rank_at_good_primes(const CurveFixture& fx, int count,
                                                    uint64_t lo) {
    std::vector<IndependenceReport> out;
    uint64_t p = std::max<uint64_t>(lo, 3);
    while ((int)out.size() < count) {
        auto primes = good_prime_select(fx, 1, p);
        p = primes[0];
        try {
            auto rc = reduce_fixture_classes(fx, p);
            out.push_back(independence_mod3(rc.classes, rc.model));
        } catch (const BadPrime&) {
        }
    }
    return out;
}

}  // namespace rank3
