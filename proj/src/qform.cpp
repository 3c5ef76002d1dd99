#include "rank3/qform.hpp"

#include "rank3/factor.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace rank3 {

bool is_primitive(const QuadForm& f) {
    Int g = gcd(gcd(f.a, f.b), f.c);
    return abs(g) == 1;
}

QuadForm reduce_form(const QuadForm& f0) {
    if (f0.disc() >= 0) throw std::invalid_argument("reduce_form: discriminant must be negative");
    QuadForm f = f0;
    if (f.a < 0) throw std::invalid_argument("reduce_form: a must be positive");
    for (;;) {
        // normalize: -a < b <= a
        if (f.b > f.a || f.b <= -f.a) {
            Int r = f.b % (2 * f.a);
            if (r > f.a) r -= 2 * f.a;
            if (r <= -f.a) r += 2 * f.a;
            Int k = (f.b - r) / (2 * f.a);
            f.c = f.c - k * f.b + k * k * f.a;
            f.b = r;
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;  // boundary convention
    return f;
}

QuadForm principal_form(const Int& D) {
    Int b = ((D % 2) + 2) % 2;  // 0 if D even, 1 if D odd
    return {Int(1), b, (b * b - D) / 4};
}

namespace {

void xgcd_int(const Int& a, const Int& b, Int& g, Int& u, Int& v) {
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

Int mod_pos(const Int& a, const Int& m) { return ((a % m) + m) % m; }

// Gauss composition (Cohen, Alg. 5.4.7), unreduced output.
QuadForm compose_raw(QuadForm f1, QuadForm f2) {
    if (f1.disc() != f2.disc()) throw std::invalid_argument("compose: discriminant mismatch");
    if (f1.a > f2.a) std::swap(f1, f2);
    Int D = f1.disc();
    Int s = (f1.b + f2.b) / 2;
    Int n = f2.b - s;  // (b2 - b1)/2
    Int y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        Int u, v;
        xgcd_int(f2.a, f1.a, d, u, v);
        y1 = u;
    }
    Int x2, y2, d1;
    if (s % d == 0) {
        x2 = 0;
        y2 = -1;
        d1 = d;
    } else {
        Int u, v;
        xgcd_int(s, d, d1, u, v);
        x2 = u;
        y2 = -v;
    }
    Int v1 = f1.a / d1, v2 = f2.a / d1;
    Int r = mod_pos(y1 * y2 * n - x2 * f2.c, abs(v1));
    Int a3 = v1 * v2;
    Int b3 = f2.b + 2 * v2 * r;
    Int c3 = (b3 * b3 - D) / (4 * a3);
    return {a3, b3, c3};
}

}  // namespace

QuadForm compose(const QuadForm& f1, const QuadForm& f2) {
    return reduce_form(compose_raw(f1, f2));
}

QuadForm form_pow(const QuadForm& f, const Int& e) {
    Int n = abs(e);
    QuadForm base = e < 0 ? form_inverse(f) : reduce_form(f);
    QuadForm acc = principal_form(f.disc());
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) acc = compose(acc, base);
        base = compose(base, base);
        n >>= 1;
    }
    return acc;
}

bool is_principal(const QuadForm& f) { return reduce_form(f) == principal_form(f.disc()); }

// Some positive annihilating exponent of the class of f (a multiple of its order),
// by baby-step giant-step. nullopt when the order exceeds the bound.
std::optional<Int> form_order(const QuadForm& f, const Int& bound) {
    QuadForm g = reduce_form(f);
    QuadForm e = principal_form(f.disc());
    if (g == e) return Int(1);
    {
        // small orders first, before committing to the baby-step table
        QuadForm w = g;
        for (long i = 2; i <= 256 && Int(i) <= bound; ++i) {
            w = compose(w, g);
            if (w == e) return Int(i);
        }
    }
    long m = 1;
    while (Int(m) * m < bound) m *= 2;
    std::map<QuadForm, long> baby;
    QuadForm w = e;
    for (long i = 1; i <= m; ++i) {
        w = compose(w, g);  // w = g^i
        if (w == e) return Int(i);
        baby.emplace(w, i);
    }
    QuadForm step = w;  // g^m
    QuadForm T = w;
    for (long j = 2; Int(j) * m <= bound + m; ++j) {
        T = compose(T, step);  // T = g^(j*m)
        if (T == e) return Int(j) * m;
        if (auto it = baby.find(T); it != baby.end()) return Int(j) * m - it->second;
        if (auto it = baby.find(form_inverse(T)); it != baby.end()) return Int(j) * m + it->second;
    }
    return std::nullopt;
}

SmallClassGroup class_group_small(const Int& D, const Int& budget) {
    if (D >= 0) throw std::invalid_argument("class_group_small: D must be negative");
    Int r4 = mod_pos(D, 4);
    if (r4 != 0 && r4 != 1) throw std::invalid_argument("class_group_small: D not a discriminant");
    if (-D > budget) throw std::invalid_argument("class_group_small: |D| over budget");
    SmallClassGroup g;
    g.D = D;
    Int absD = -D;
    Int amax;
    mpz_sqrt(amax.get_mpz_t(), Int(absD / 3).get_mpz_t());
    for (Int a = 1; a <= amax; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            Int num = b * b + absD;
            if (num % (4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            QuadForm f{a, b, c};
            if (!is_primitive(f)) continue;
            g.forms.push_back(f);
        }
    }
    std::sort(g.forms.begin(), g.forms.end());
    // group structure via Sylow subgroup counting
    long h = static_cast<long>(g.forms.size());
    FactoredInteger hf = factor_integer(Int(h));
    std::map<Int, std::vector<int>> sylow;  // prime -> partition e1>=e2>=...
    for (const auto& [q, eq] : hf.factors) {
        std::vector<long> logs;  // log_q #{F : F^(q^k) = e}, k = 1, 2, ...
        Int qk = 1;
        long prev = 0;
        for (int k = 1;; ++k) {
            qk *= q;
            long cnt = 0;
            for (const auto& f : g.forms)
                if (is_principal(form_pow(f, qk))) ++cnt;
            long lg = 0;
            long tmp = cnt;
            while (tmp > 1) {
                tmp /= q.get_si();
                ++lg;
            }
            logs.push_back(lg);
            if (lg == prev) break;  // stabilized: full Sylow reached
            prev = lg;
            if (k > eq) break;
        }
        // #{i : e_i >= k} = logs[k-1] - logs[k-2]
        std::vector<int> part;
        long before = 0;
        for (size_t k = 0; k < logs.size(); ++k) {
            long atleast = logs[k] - before;
            before = logs[k];
            if (atleast <= 0) break;
            for (long i = 0; i < atleast; ++i) {
                if (part.size() <= static_cast<size_t>(i)) part.push_back(0);
            }
            for (long i = 0; i < atleast; ++i) part[i] += 1;
        }
        sylow[q] = part;
        if (q == 3) g.rank3 = static_cast<int>(part.size());
    }
    // assemble elementary divisors d1 | d2 | ... (largest last)
    size_t maxlen = 0;
    for (auto& [q, part] : sylow) maxlen = std::max(maxlen, part.size());
    std::vector<Int> divs(maxlen, Int(1));
    for (auto& [q, part] : sylow) {
        for (size_t i = 0; i < part.size(); ++i) {
            Int qe = 1;
            for (int j = 0; j < part[i]; ++j) qe *= q;
            divs[maxlen - 1 - i] *= qe;  // largest component gets largest q-part
        }
    }
    g.elementary_divisors = divs;
    return g;
}

Rank3Certificate rank3_certificate(const Int& D, const std::vector<QuadForm>& forms) {
    Rank3Certificate cert;
    cert.D = D;
    cert.forms = forms;
    for (const auto& f : forms) {
        if (f.disc() != D || !is_primitive(f)) {
            cert.transcript.push_back("invalid form");
            return cert;
        }
    }
    int r = static_cast<int>(forms.size());
    std::vector<QuadForm> reduced, squared;
    for (const auto& f : forms) {
        QuadForm rf = reduce_form(f);
        if (!is_principal(form_pow(rf, Int(3)))) {
            cert.transcript.push_back("cube not principal");
            return cert;
        }
        reduced.push_back(rf);
        squared.push_back(compose(rf, rf));
        cert.transcript.push_back("cube principal: (" + to_string(rf.a) + "," + to_string(rf.b) +
                                  "," + to_string(rf.c) + ")");
    }
    // all nonzero ternary vectors with leading nonzero coordinate = 1 (mod inversion)
    std::vector<int> c(r, 0);
    long total = 1;
    for (int i = 0; i < r; ++i) total *= 3;
    for (long code = 1; code < total; ++code) {
        long x = code;
        for (int i = 0; i < r; ++i) {
            c[i] = x % 3;
            x /= 3;
        }
        int lead = -1;
        for (int i = r - 1; i >= 0; --i)
            if (c[i]) {
                lead = i;
                break;
            }
        if (c[lead] != 1) continue;  // inversion representative
        QuadForm acc = principal_form(D);
        for (int i = 0; i < r; ++i) {
            if (c[i] == 1) acc = compose(acc, reduced[i]);
            if (c[i] == 2) acc = compose(acc, squared[i]);
        }
        if (is_principal(acc)) {
            cert.witness_relation = c;
            std::ostringstream os;
            os << "relation:";
            for (int i = 0; i < r; ++i) os << " " << c[i];
            cert.transcript.push_back(os.str());
            return cert;
        }
    }
    std::ostringstream os;
    os << "all " << (total - 1) / 2 << " nonzero combinations non-principal";
    cert.transcript.push_back(os.str());
    cert.rank = r;
    cert.ok = true;
    return cert;
}

// ---------- real (indefinite) side, small discriminants only ----------

namespace {

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool indef_reduced(const QuadForm& f, const Int& D) {
    // reduced iff |sqrt(D) - 2|a|| < b < sqrt(D)
    if (f.b <= 0) return false;
    if (f.b * f.b >= D) return false;
    Int twoa = 2 * abs(f.a);
    Int lhs = twoa - f.b;  // need (2|a| - b)^2 < D  and  (2|a| + b)^2 > D
    if (lhs * lhs >= D && lhs > 0) return false;
    Int rhs = twoa + f.b;
    if (rhs * rhs <= D) return false;
    return true;
}

// one rho-step: (a,b,c) -> (c, r, (r^2-D)/(4c)), r = -b mod 2|c| in the right window
QuadForm indef_rho(const QuadForm& f, const Int& D) {
    Int c2 = 2 * abs(f.c);
    Int r = mod_pos(-f.b, c2);
    Int s = isqrt(D);
    if (abs(f.c) < s) {
        // want s - 2|c| < r <= s  (r maximal below sqrt(D))
        while (r > s) r -= c2;
        while (r + c2 <= s) r += c2;
    } else {
        // want -|c| < r <= |c|
        if (r > abs(f.c)) r -= c2;
    }
    return {f.c, r, (r * r - D) / (4 * f.c)};
}

QuadForm indef_reduce(QuadForm f, const Int& D) {
    for (int guard = 0; guard < 10000; ++guard) {
        if (indef_reduced(f, D)) return f;
        f = indef_rho(f, D);
    }
    throw std::runtime_error("indefinite reduction did not terminate");
}

std::vector<QuadForm> indef_cycle(const QuadForm& start, const Int& D) {
    std::vector<QuadForm> cyc{start};
    QuadForm f = indef_rho(start, D);
    while (!(f == start)) {
        cyc.push_back(f);
        f = indef_rho(f, D);
        if (cyc.size() > 100000) throw std::runtime_error("cycle too long");
    }
    return cyc;
}

}  // namespace

int rank3_real(const Int& D) {
    if (D <= 0) throw std::invalid_argument("rank3_real: D must be positive");
    Int s = isqrt(D);
    if (s * s == D) throw std::invalid_argument("rank3_real: D is a square");
    // enumerate all reduced indefinite primitive forms of discriminant D
    std::set<QuadForm> all;
    for (Int b = 1; b <= s; ++b) {
        if (mod_pos(b, 2) != mod_pos(D, 2)) continue;
        Int n4 = b * b - D;  // = 4ac < 0
        if (n4 % 4 != 0) continue;
        Int n = n4 / 4;  // ac, negative
        for (Int a = 1; a * a <= abs(n); ++a) {
            if (n % a != 0) continue;
            for (Int aa : {Int(a), Int(abs(n) / a)}) {
                for (int sgn = 0; sgn < 2; ++sgn) {
                    Int av = sgn ? -aa : aa;
                    Int c = n / av;
                    QuadForm f{av, b, c};
                    if (!is_primitive(f)) continue;
                    if (indef_reduced(f, D)) all.insert(f);
                }
            }
        }
    }
    // partition into cycles
    std::vector<std::vector<QuadForm>> cycles;
    std::set<QuadForm> seen;
    for (const auto& f : all) {
        if (seen.count(f)) continue;
        auto cyc = indef_cycle(f, D);
        for (const auto& g : cyc) seen.insert(g);
        cycles.push_back(cyc);
    }
    // principal cycle
    Int b0 = s;
    while (mod_pos(b0, 2) != mod_pos(D, 2)) b0 -= 1;
    QuadForm prin = indef_reduce({Int(1), b0, (b0 * b0 - D) / 4}, D);
    std::set<QuadForm> prin_cycle;
    for (const auto& g : indef_cycle(prin, D)) prin_cycle.insert(g);
    // count classes whose cube is principal
    long cubes = 0;
    for (const auto& cyc : cycles) {
        QuadForm f = cyc.front();
        QuadForm f3 = indef_reduce(compose_raw(compose_raw(f, f), f), D);
        if (prin_cycle.count(f3)) ++cubes;
    }
    int rk = 0;
    long tmp = cubes;
    while (tmp > 1) {
        tmp /= 3;
        ++rk;
    }
    return rk;
}

int scholz_check(const Int& d) {
    if (d <= 1) throw std::invalid_argument("scholz_check: d must be > 1");
    // imaginary side: squarefree part of -3d
    Int m_im = (d % 3 == 0) ? Int(-(d / 3)) : Int(-3 * d);
    Int D_im = fundamental_discriminant(m_im);
    int rk_im = class_group_small(D_im).rank3;
    // real side
    Int D_re = fundamental_discriminant(d);
    int rk_re = rank3_real(D_re);
    return rk_im - rk_re;
}

}  // namespace rank3
