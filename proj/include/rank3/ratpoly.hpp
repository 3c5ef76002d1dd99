#pragma once
// Dense univariate polynomials with exact rational coefficients.

#include "rank3/rational.hpp"

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

namespace rank3 {

class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(const Rat& c) : c_{c} { trim(); }
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    RatPoly(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }

    static RatPoly x() { return RatPoly({Rat(0), Rat(1)}); }
    static RatPoly monomial(int deg, const Rat& c = Rat(1)) {
        std::vector<Rat> v(deg + 1, Rat(0));
        v[deg] = c;
        return RatPoly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const Rat& leading() const { return c_.back(); }
    Rat coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rat(0);
    }
    const std::vector<Rat>& coeffs() const { return c_; }

    RatPoly operator-() const {
        RatPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    RatPoly operator+(const RatPoly& b) const {
        std::vector<Rat> v(std::max(c_.size(), b.c_.size()), Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
        return RatPoly(std::move(v));
    }
    RatPoly operator-(const RatPoly& b) const { return *this + (-b); }
    RatPoly operator*(const RatPoly& b) const {
        if (is_zero() || b.is_zero()) return {};
        std::vector<Rat> v(c_.size() + b.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0)
                for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += c_[i] * b.c_[j];
        return RatPoly(std::move(v));
    }
    RatPoly operator*(const Rat& s) const {
        RatPoly r = *this;
        for (auto& x : r.c_) x *= s;
        r.trim();
        return r;
    }
    bool operator==(const RatPoly& b) const { return c_ == b.c_; }
    bool operator!=(const RatPoly& b) const { return c_ != b.c_; }

    // Exact division with remainder; divisor must be nonzero.
    std::pair<RatPoly, RatPoly> divrem(const RatPoly& b) const {
        if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
        RatPoly r = *this;
        std::vector<Rat> q(std::max(0, degree() - b.degree() + 1), Rat(0));
        while (!r.is_zero() && r.degree() >= b.degree()) {
            Rat f = r.leading() / b.leading();
            int d = r.degree() - b.degree();
            q[d] = f;
            for (int i = 0; i <= b.degree(); ++i) r.c_[d + i] -= f * b.c_[i];
            r.trim();
        }
        return {RatPoly(std::move(q)), r};
    }
    RatPoly operator/(const RatPoly& b) const { return divrem(b).first; }
    RatPoly operator%(const RatPoly& b) const { return divrem(b).second; }

    RatPoly monic() const {
        if (is_zero()) return {};
        return *this * (Rat(1) / leading());
    }

    static RatPoly gcd(RatPoly a, RatPoly b) {
        while (!b.is_zero()) {
            RatPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // Extended gcd: returns (g, s, t) monic g with s*a + t*b = g.
    struct Xgcd;
    static Xgcd xgcd(const RatPoly& a, const RatPoly& b);

    RatPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rat> v(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rat(static_cast<long>(i));
        return RatPoly(std::move(v));
    }

    bool squarefree() const {
        if (is_zero()) return false;
        return gcd(*this, derivative()).degree() == 0;
    }

    Rat evaluate(const Rat& x) const {
        Rat r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    // p(x + a)  (Taylor shift).
    RatPoly shift(const Rat& a) const {
        RatPoly r;
        RatPoly lin({a, Rat(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + RatPoly(*it);
        return r;
    }
    // p(s*x).
    RatPoly scale_arg(const Rat& s) const {
        RatPoly r = *this;
        Rat f(1);
        for (size_t i = 1; i < r.c_.size(); ++i) {
            f *= s;
            r.c_[i] *= f;
        }
        r.trim();
        return r;
    }
    // p(x^3).
    RatPoly compose_cube() const {
        if (is_zero()) return {};
        std::vector<Rat> v(3 * degree() + 1, Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) v[3 * i] = c_[i];
        return RatPoly(std::move(v));
    }

    // Exact cube root: c with c^3 == *this.
    std::optional<RatPoly> poly_cube_root() const {
        auto r = cube_root_unit();
        if (!r) return std::nullopt;
        auto lc = rank3::cube_root(r->first);
        if (!lc) return std::nullopt;
        return r->second * *lc;
    }
    // Cube root up to a rational unit: (unit, c) with *this == unit * c^3, c monic.
    std::optional<std::pair<Rat, RatPoly>> cube_root_unit() const {
        if (is_zero()) return std::nullopt;
        int n = degree();
        if (n % 3 != 0) return std::nullopt;
        int m = n / 3;
        RatPoly q = monic();
        std::vector<Rat> c(m + 1, Rat(0));
        c[m] = 1;
        for (int k = m - 1; k >= 0; --k) {
            Rat s(0);
            for (int i = 0; i <= m; ++i) {
                for (int j = 0; j <= m; ++j) {
                    int l = 2 * m + k - i - j;
                    if (l < 0 || l > m) continue;
                    if ((i == m && j == m && l == k) || (i == m && l == m && j == k) ||
                        (j == m && l == m && i == k))
                        continue;
                    s += c[i] * c[j] * c[l];
                }
            }
            c[k] = (q.coeff(2 * m + k) - s) / Rat(3);
        }
        RatPoly croot{std::vector<Rat>(c.begin(), c.end())};
        if (croot * croot * croot != q) return std::nullopt;
        return std::make_pair(leading(), croot);
    }

    // Resultant via the Euclidean remainder sequence (exact over Q).
    static Rat resultant(RatPoly a, RatPoly b) {
        if (a.is_zero() || b.is_zero()) return Rat(0);
        Rat res(1);
        while (b.degree() > 0) {
            RatPoly r = a % b;
            if (r.is_zero()) return Rat(0);
            Rat lb = b.leading();
            int da = a.degree(), db = b.degree(), dr = r.degree();
            Rat pw(1);
            for (int i = 0; i < da - dr; ++i) pw *= lb;
            Rat sign = ((static_cast<long>(da) * db) % 2 == 1) ? Rat(-1) : Rat(1);
            res *= sign * pw;
            a = std::move(b);
            b = std::move(r);
        }
        Rat lb = b.coeff(0), pw(1);
        for (int i = 0; i < a.degree(); ++i) pw *= lb;
        return res * pw;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;  // ascending degree
};

struct RatPoly::Xgcd {
    RatPoly g, s, t;
};

inline RatPoly::Xgcd RatPoly::xgcd(const RatPoly& a, const RatPoly& b) {
    RatPoly r0 = a, r1 = b, s0{Rat(1)}, s1, t0, t1{Rat(1)};
    while (!r1.is_zero()) {
        auto [q, r] = r0.divrem(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        RatPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (!r0.is_zero()) {
        Rat inv = Rat(1) / r0.leading();
        r0 = r0 * inv;
        s0 = s0 * inv;
        t0 = t0 * inv;
    }
    return {r0, s0, t0};
}

inline RatPoly operator*(const Rat& s, const RatPoly& p) { return p * s; }

}  // namespace rank3
