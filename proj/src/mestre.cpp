#include "rank3/mestre.hpp"

#include "rank3/factor.hpp"

#include <sstream>

namespace rank3 {

namespace {

RatFun rf(const Rat& c) { return RatFun(c); }
RatFun rf_t() { return RatFun(RatPoly::x()); }

}  // namespace

MestreInput sextic_input(const std::array<RatFun, 5>& x5) {
    MestreInput in;
    RatFun sum;
    for (int i = 0; i < 5; ++i) {
        in.x[i] = x5[i];
        sum = sum + x5[i];
    }
    in.x[5] = -sum;
    return in;
}

MestreInput mestre_parametrization(const Rat& u) {
    if (u == 0 || u * u * u == 1 || u * u * u == -1)
        throw std::invalid_argument("parameter u makes a denominator vanish");
    Rat u3 = u * u * u, u6 = u3 * u3, u9 = u6 * u3;
    RatFun T = rf_t();
    std::array<RatFun, 5> x;
    x[0] = rf((1 - u3) / (4 * u)) + T;
    x[1] = rf((1 - u3) / (4 * u)) - T;
    x[2] = rf(-(u3 + 3) / (4 * u)) + T;
    x[3] = rf((u6 - 6 * u3 - 3) / (4 * (u * u3 - u))) - T;
    x[4] = rf((u9 - u6 + 15 * u3 + 1) / (4 * (u * u6 - u))) + T;
    return sextic_input(x);
}

CubicModel expand_sextic(const MestreInput& in) {
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            if (in.x[i] == in.x[j]) throw std::invalid_argument("coincident sextic roots");
    // prod (X - x_i): coefficients of X^6..X^0
    std::vector<RatFun> coeffs{rf(Rat(1))};
    for (const auto& xi : in.x) {
        std::vector<RatFun> next(coeffs.size() + 1);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            next[i] = next[i] + coeffs[i];
            next[i + 1] = next[i + 1] - coeffs[i] * xi;
        }
        coeffs = std::move(next);
    }
    // a[k] = coefficient of X^k
    std::array<RatFun, 7> a;
    for (int k = 0; k <= 6; ++k) a[k] = coeffs[6 - k];
    if (!a[5].is_zero()) throw std::logic_error("x_i do not sum to zero");

    CubicModel m;
    RatFun a4 = a[4], third = rf(Rat(1, 3));
    m.r[0] = (a4 * third).pow(3) - a[0];
    m.r[1] = -a[1];
    m.r[2] = a4 * a4 * third - a[2];
    m.r[3] = -a[3];
    for (int k = 0; k < 5; ++k) m.a[k] = a[k];
    for (const auto& xi : in.x) {
        RatFun g = xi * xi + a4 * third;
        RatFun r_at = m.r[0] + m.r[1] * xi + m.r[2] * xi * xi + m.r[3] * xi.pow(3);
        if (g.pow(3) != r_at) throw std::logic_error("cubic model identity failed");
        m.marked.emplace_back(xi, g);
    }
    return m;
}

namespace {

// Y^3 = r(X) with r3 = e3^3 known; send the cube point at infinity to the origin.
WeierstrassResult weier_from_infinity(const std::array<RatFun, 4>& r,
                                      const std::vector<std::pair<RatFun, RatFun>>& marked,
                                      const RatFun& e3) {
    if (e3.pow(3) != r[3]) throw std::logic_error("e3 is not a cube root of r3");
    RatFun sh = r[2] / (rf(Rat(3)) * r[3]);
    RatFun s1 = -sh;
    RatFun q2 = r[2] / r[3], q1 = r[1] / r[3], q0 = r[0] / r[3];
    RatFun P1 = rf(Rat(3)) * s1 * s1 + rf(Rat(2)) * q2 * s1 + q1;
    RatFun P0 = s1.pow(3) + q2 * s1 * s1 + q1 * s1 + q0;

    WeierstrassResult out;
    if (P1.is_zero()) {
        out.K = rf(Rat(-432)) * P0 * P0;
        for (const auto& [Xi, Yi] : marked) {
            RatFun W = Xi + sh, Yb = Yi / e3, s = Yb - W;
            if (s.is_zero()) {
                out.images.push_back(std::nullopt);
                continue;
            }
            out.images.push_back(
                std::make_pair(rf(Rat(12)) * P0 / s, rf(Rat(36)) * P0 * (Yb + W) / s));
        }
        return out;
    }

    // general case via the intermediate quartic v^2 = -3 s^4 - 6 P1 s^2 + 12 P0 s + P1^2
    RatFun e = -P1;
    RatFun aq = rf(Rat(-3)), bq, cq = rf(Rat(-6)) * P1, dq = rf(Rat(12)) * P0;
    std::vector<std::optional<std::pair<RatFun, RatFun>>> imgs;
    for (const auto& [Xi, Yi] : marked) {
        RatFun W = Xi + sh, Yb = Yi / e3, s = Yb - W;
        if (s.is_zero()) {
            imgs.push_back(std::nullopt);
            continue;
        }
        RatFun v = rf(Rat(6)) * s * W + rf(Rat(3)) * s * s - P1;
        if (v * v != aq * s.pow(4) + cq * s * s + dq * s + P1 * P1)
            throw std::logic_error("quartic identity failed");
        RatFun z = (v - e - (dq / (rf(Rat(2)) * e)) * s) / (s * s);
        RatFun eta = -((dq / e) * z - bq) - rf(Rat(2)) * s * (z * z - aq);
        imgs.push_back(std::make_pair(rf(Rat(-8)) * e * z, rf(Rat(-8)) * e * eta));
    }
    RatFun de = dq / e;
    RatFun D2 = de * de - (de * de - rf(Rat(4)) * cq);
    RatFun D1 = rf(Rat(-2)) * de * bq + rf(Rat(8)) * e * aq;
    RatFun D0 = bq * bq + (de * de - rf(Rat(4)) * cq) * aq;
    RatFun a2 = D2, a4 = rf(Rat(-8)) * e * D1, a6 = rf(Rat(64)) * e * e * D0;
    RatFun third = rf(Rat(1, 3));
    if (a4 - a2 * a2 * third != RatFun()) throw std::logic_error("model is not j = 0");
    out.K = a6 - a2 * a4 * third + rf(Rat(2, 27)) * a2.pow(3);
    for (auto& im : imgs) {
        if (!im) {
            out.images.push_back(std::nullopt);
            continue;
        }
        RatFun x = im->first + a2 * third, y = im->second;
        if (y * y != x.pow(3) + out.K) throw std::logic_error("image off the curve");
        out.images.push_back(std::make_pair(x, y));
    }
    return out;
}

}  // namespace

WeierstrassResult to_weierstrass(const CubicModel& model, int origin_index) {
    if (origin_index < 0) {
        if (!model.r[3].is_constant())
            throw std::invalid_argument("r3 not constant; pick a marked origin");
        Rat c = model.r[3].num().coeff(0) / model.r[3].den().coeff(0);
        auto e3 = cube_root(c);
        if (!e3) throw std::invalid_argument("r3 is not a rational cube");
        return weier_from_infinity(model.r, model.marked, rf(*e3));
    }
    if (origin_index >= static_cast<int>(model.marked.size()))
        throw std::invalid_argument("origin index out of range");
    auto [x0, y0] = model.marked[origin_index];
    if (y0.is_zero()) throw std::invalid_argument("origin has Y = 0");
    // translate X -> X + x0, then invert X -> 1/W: coefficients reverse, new r3 = y0^3
    std::array<RatFun, 4> r2;
    r2[3] = model.r[3] * x0.pow(3) + model.r[2] * x0 * x0 + model.r[1] * x0 + model.r[0];
    r2[2] = rf(Rat(3)) * model.r[3] * x0 * x0 + rf(Rat(2)) * model.r[2] * x0 + model.r[1];
    r2[1] = rf(Rat(3)) * model.r[3] * x0 + model.r[2];
    r2[0] = model.r[3];
    std::vector<std::pair<RatFun, RatFun>> m2;
    std::vector<size_t> back;
    for (size_t i = 0; i < model.marked.size(); ++i) {
        if (static_cast<int>(i) == origin_index) continue;
        RatFun w = model.marked[i].first - x0;
        if (w.is_zero()) throw std::invalid_argument("coincident marked points");
        m2.emplace_back(rf(Rat(1)) / w, model.marked[i].second / w);
        back.push_back(i);
    }
    auto sub = weier_from_infinity(r2, m2, y0);
    WeierstrassResult out;
    out.K = sub.K;
    out.images.assign(model.marked.size(), std::nullopt);
    for (size_t k = 0; k < back.size(); ++k) out.images[back[k]] = sub.images[k];
    return out;
}

namespace {

// Yun squarefree decomposition: f = prod part[i]^(i+1), parts monic.
std::vector<RatPoly> squarefree_parts(const RatPoly& f) {
    std::vector<RatPoly> parts;
    RatPoly a = f.monic(), d = a.derivative();
    RatPoly g = RatPoly::gcd(a, d);
    RatPoly w = a / g, y = d / g;
    while (w.degree() > 0) {
        RatPoly z = y - w.derivative();
        RatPoly p = RatPoly::gcd(w, z);
        parts.push_back(p);
        w = w / p;
        y = z / p;
    }
    return parts;
}

}  // namespace

std::pair<RatFun, RatPoly> clear_sixth_powers(const RatFun& K) {
    if (K.is_zero()) throw std::invalid_argument("cannot clear zero");
    // polynomial part: each irreducible of multiplicity e in the denominator
    // needs exponent ceil(e/6) in lambda
    RatPoly lam_t{Rat(1)};
    if (K.den().degree() > 0) {
        auto parts = squarefree_parts(K.den());
        for (size_t i = 0; i < parts.size(); ++i) {
            int e = static_cast<int>(i) + 1, l = (e + 5) / 6;
            for (int j = 0; j < l; ++j) lam_t = lam_t * parts[i];
        }
    }
    RatFun K2f = K * RatFun(lam_t).pow(6);
    if (K2f.den().degree() > 0) throw std::logic_error("denominator clearing failed");
    RatPoly K2 = K2f.num() * (Rat(1) / K2f.den().coeff(0));

    // constant part: per prime p of a coefficient denominator, ceil(max(-ord_p)/6)
    Int denlcm = 1;
    for (const auto& c : K2.coeffs()) mpz_lcm(denlcm.get_mpz_t(), denlcm.get_mpz_t(), den(c).get_mpz_t());
    Rat lam_c(1);
    if (denlcm > 1) {
        auto fac = factor_integer(denlcm, {}, {});
        if (!fac.complete()) throw std::logic_error("could not factor coefficient denominators");
        for (const auto& [p, e] : fac.factors) {
            long worst = 0;
            for (const auto& c : K2.coeffs())
                if (c != 0) worst = std::max(worst, -rational_valuation(c, p));
            long l = (worst + 5) / 6;
            for (long j = 0; j < l; ++j) lam_c *= p;
        }
    }
    Rat lc6 = lam_c;
    for (int i = 0; i < 5; ++i) lc6 *= lam_c;
    RatPoly out = K2 * lc6;
    for (const auto& c : out.coeffs())
        if (den(c) != 1) throw std::logic_error("sixth-power clearing incomplete");
    return {RatFun(lam_t * lam_c), out};
}

ECPoint ec_add(const ECPoint& P, const ECPoint& Q, const RatPoly& f) {
    if (!P) return Q;
    if (!Q) return P;
    const auto& [x1, y1] = *P;
    const auto& [x2, y2] = *Q;
    RatFun lam;
    if (x1 == x2) {
        if (y1 + y2 == RatFun()) return std::nullopt;
        lam = rf(Rat(3)) * x1 * x1 / (rf(Rat(2)) * y1);
    } else {
        lam = (y2 - y1) / (x2 - x1);
    }
    RatFun x3 = lam * lam - x1 - x2;
    RatFun y3 = lam * (x1 - x3) - y1;
    return std::make_pair(x3, y3);
}

ECPoint ec_neg(const ECPoint& P) {
    if (!P) return std::nullopt;
    return std::make_pair(P->first, -P->second);
}

namespace {

RatPoly ipoly(std::initializer_list<const char*> ascending) {
    std::vector<Rat> v;
    for (const char* s : ascending) v.push_back(parse_rat(s));
    return RatPoly(std::move(v));
}

RatFun point_x_from_y(const RatFun& Y, const RatPoly& f) {
    RatFun cube = Y * Y - RatFun(f);
    auto n = cube.num().poly_cube_root();
    auto d = cube.den().poly_cube_root();
    if (!n || !d) throw std::runtime_error("Y^2 - f is not a cube");
    RatFun X(*n, *d);
    if (X.pow(3) != cube) throw std::runtime_error("Y^2 - f is not a cube");
    return X;
}

CurveFixture fixture_f3() {
    CurveFixture fx;
    fx.label = "f3";
    fx.f = ipoly({"11764900", "0", "0", "-369249", "0", "0", "2973", "0", "0", "1"});
    std::vector<RatFun> ys = {
        RatFun(ipoly({"3430", "0", "0", "-106", "0", "0", "1"})),
        RatFun(ipoly({"3430", "0", "0", "269/4", "0", "0", "1/64"})),
        RatFun(ipoly({"40474", "33264", "13914", "3350", "486", "36", "1"})),
    };
    for (const auto& y : ys) fx.points.push_back({point_x_from_y(y, fx.f), y});
    // fourth class: P4 = -(P1 + P2 + P3) under the group law
    ECPoint acc = std::nullopt;
    for (const auto& pt : fx.points)
        acc = ec_add(acc, std::make_pair(*pt.X, pt.Y), fx.f);
    ECPoint P4 = ec_neg(acc);
    if (!P4) throw std::logic_error("fourth point degenerated to infinity");
    fx.points.push_back({P4->first, P4->second});
    return fx;
}

CurveFixture fixture_f4() {
    CurveFixture fx;
    fx.label = "f4";
    fx.f = ipoly({"543592155691663960065241800360826161610140961",
                  "-135004259433655686521826532061360904927910680",
                  "14597743197263467927181474503046907251979462",
                  "-1509800364506319291441531124462079071041720",
                  "139665528153448288531118705650287136663899",
                  "-8471956828413213486742748322179256745500",
                  "486933739385947419621206507920009537350",
                  "-23227949011157855871750302161149318060",
                  "767540949843094964859507359162484321",
                  "-14476726558441542259500980593582900",
                  "127358629188153017343112694654244"});
    std::vector<RatPoly> ys = {
        ipoly({"23315023973129417008893", "-2894185136924624900028", "124175441794992816207",
               "11259180860536474740", "-612703879315493343", "11285328049647162"}),
        ipoly({"-23315023973129417008893", "2895345088136314829232", "-133140352448943347487",
               "15898504501345253760", "-637837872300913137", "11285328049647162"}),
        ipoly({"-23295069079544963156463", "2891689893601551455028", "-132367737077167916373",
               "15779426445792454284", "-641395912765696179", "11285328049647162"}),
        ipoly({"-35358708563462647994607", "2621647313739427449588", "-219254957235699134757",
               "14665379977955069244", "-787772412770249571", "11285328049647162"}),
        ipoly({"183122730884960782522323", "17007935571912588694272", "1831498005344531215377",
               "74598289369102611840", "2985212511317920527", "11285328049647162"}),
    };
    for (const auto& y : ys) {
        RatFun Y(y);
        fx.points.push_back({point_x_from_y(Y, fx.f), Y});
    }
    return fx;
}

CurveFixture fixture_sec7() {
    Rat u(-9, 5);
    CubicModel model = expand_sextic(mestre_parametrization(u));
    auto wr = to_weierstrass(model, -1);
    auto [lam, Kz] = clear_sixth_powers(wr.K);
    CurveFixture fx;
    fx.label = "sec7";
    fx.f = Kz.compose_cube();
    RatFun lam2 = lam * lam, lam3 = lam2 * lam;
    for (const auto& im : wr.images) {
        if (!im) throw std::logic_error("unexpected degenerate image");
        fx.points.push_back(
            {(im->first * lam2).compose_cube(), (im->second * lam3).compose_cube()});
    }
    return fx;
}

}  // namespace

CurveFixture load_fixture(const std::string& label, const std::vector<Rat>& params) {
    CurveFixture fx;
    if (label == "f1") {
        if (params.size() != 1) throw std::invalid_argument("f1 takes one parameter a");
        const Rat& a = params[0];
        // y^2 = t^3 + ((t+a)/2)^2, tangent line at the 3-torsion point (0, a/2)
        fx.label = "f1";
        fx.f = RatPoly{a * a / 4, a / 2, Rat(1, 4), Rat(1)};
        RatFun Y(RatPoly{a / 2, Rat(1, 2)});
        fx.points.push_back({RatFun(RatPoly{Rat(0), Rat(-1)}), Y});
    } else if (label == "f2") {
        if (params.size() != 2) throw std::invalid_argument("f2 takes parameters a, b");
        const Rat &a = params[0], &b = params[1];
        fx.label = "f2";
        fx.f = RatPoly{b * b, Rat(0), Rat(0), a, Rat(0), Rat(0), Rat(1)};
        fx.points.push_back({std::nullopt, RatFun(RatPoly{b, Rat(0), Rat(0), Rat(1)})});
        fx.points.push_back({std::nullopt, RatFun(RatPoly{-b, Rat(0), Rat(0), Rat(1)})});
    } else if (label == "f3") {
        fx = fixture_f3();
    } else if (label == "f4") {
        fx = fixture_f4();
    } else if (label == "f5") {
        CurveFixture base = fixture_f4();
        fx.label = "f5";
        fx.f = base.f.compose_cube();
        for (const auto& pt : base.points)
            fx.points.push_back({pt.X->compose_cube(), pt.Y.compose_cube()});
    } else if (label == "sec7") {
        fx = fixture_sec7();
    } else {
        throw std::invalid_argument("unknown fixture label: " + label);
    }
    verify_fixture(fx);
    return fx;
}

void verify_fixture(const CurveFixture& fx) {
    if (!fx.f.squarefree()) throw std::runtime_error(fx.label + ": f not squarefree");
    for (size_t i = 0; i < fx.points.size(); ++i) {
        const auto& pt = fx.points[i];
        RatFun cube = pt.Y * pt.Y - RatFun(fx.f);
        if (pt.X) {
            if (pt.X->pow(3) != cube)
                throw std::runtime_error(fx.label + ": point identity failed at index " +
                                         std::to_string(i));
        } else {
            // cube only up to a rational unit (no rational X exists)
            if (cube.den().degree() != 0)
                throw std::runtime_error(fx.label + ": unexpected denominator");
            if (!cube.num().cube_root_unit())
                throw std::runtime_error(fx.label + ": Y^2 - f not a unit cube at index " +
                                         std::to_string(i));
        }
    }
}

namespace {

void write_coeffs(std::ostream& os, const RatPoly& p) {
    if (p.is_zero()) {
        os << " 0";
        return;
    }
    for (const auto& c : p.coeffs()) os << ' ' << to_string(c);
}

std::vector<Rat> read_coeffs(std::istringstream& is) {
    std::vector<Rat> v;
    std::string tok;
    while (is >> tok) v.push_back(parse_rat(tok));
    return v;
}

}  // namespace

std::string fixture_to_text(const CurveFixture& fx) {
    std::ostringstream os;
    os << "curve " << fx.label << " degree " << fx.degree() << '\n';
    os << "f:";
    write_coeffs(os, fx.f);
    os << '\n';
    for (size_t i = 0; i < fx.points.size(); ++i) {
        os << "Y_" << (i + 1) << ": num";
        write_coeffs(os, fx.points[i].Y.num());
        os << " den";
        write_coeffs(os, fx.points[i].Y.den());
        os << '\n';
    }
    return os.str();
}

CurveFixture fixture_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CurveFixture fx;
    int degree = -2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "curve") {
            std::string dword;
            ls >> fx.label >> dword;
            if (dword != "degree") throw std::invalid_argument("bad fixture header");
            ls >> degree;
        } else if (tag == "f:") {
            fx.f = RatPoly(read_coeffs(ls));
        } else if (tag.rfind("Y_", 0) == 0) {
            std::string word;
            ls >> word;
            if (word != "num") throw std::invalid_argument("bad point line");
            std::vector<Rat> numc, denc;
            while (ls >> word) {
                if (word == "den") break;
                numc.push_back(parse_rat(word));
            }
            do {
                if (word == "den") continue;
                denc.push_back(parse_rat(word));
            } while (ls >> word);
            RatFun Y{RatPoly(std::move(numc)), RatPoly(std::move(denc))};
            // reconstruct X when Y^2 - f is an exact cube
            RatFun cube = Y * Y - RatFun(fx.f);
            auto n = cube.num().poly_cube_root();
            auto d = cube.den().poly_cube_root();
            if (n && d && RatFun(*n, *d).pow(3) == cube)
                fx.points.push_back({RatFun(*n, *d), Y});
            else
                fx.points.push_back({std::nullopt, Y});
        } else {
            throw std::invalid_argument("unrecognized fixture line: " + line);
        }
    }
    if (fx.f.degree() != degree) throw std::invalid_argument("degree mismatch in fixture");
    verify_fixture(fx);
    return fx;
}

}  // namespace rank3
