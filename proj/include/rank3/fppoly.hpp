#pragma once
// Dense polynomials over F_p for odd primes p < 2^31 (products fit in 64 bits... use
// __int128 guards for safety), plus factorization (squarefree / distinct-degree /
// equal-degree splitting) and modular square roots.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace rank3 {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % p);
}
inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}
inline uint64_t invmod_u64(uint64_t a, uint64_t p) { return powmod_u64(a % p, p - 2, p); }

// Tonelli-Shanks sqrt mod odd prime p; nullopt if non-residue.
inline std::optional<uint64_t> sqrt_mod_p(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    if (powmod_u64(a, (p - 1) / 2, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod_u64(a, (p + 1) / 4, p);
    uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    uint64_t z = 2;
    while (powmod_u64(z, (p - 1) / 2, p) != p - 1) ++z;
    uint64_t m = s, c = powmod_u64(z, q, p), t = powmod_u64(a, q, p),
             r = powmod_u64(a, (q + 1) / 2, p);
    while (t != 1) {
        uint64_t i = 0, t2 = t;
        while (t2 != 1) {
            t2 = mulmod_u64(t2, t2, p);
            ++i;
        }
        uint64_t b = c;
        for (uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod_u64(b, b, p);
        m = i;
        c = mulmod_u64(b, b, p);
        t = mulmod_u64(t, c, p);
        r = mulmod_u64(r, b, p);
    }
    return r;
}

class FpPoly {
  public:
    FpPoly() : p_(0) {}
    explicit FpPoly(uint64_t p) : p_(p) {}
    FpPoly(uint64_t p, std::vector<uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
        for (auto& x : c_) x %= p_;
        trim();
    }

    uint64_t modulus() const { return p_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    uint64_t leading() const { return c_.back(); }
    uint64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : 0;
    }
    const std::vector<uint64_t>& coeffs() const { return c_; }
    bool operator==(const FpPoly& b) const { return p_ == b.p_ && c_ == b.c_; }

    static FpPoly one(uint64_t p) { return FpPoly(p, {1}); }
    static FpPoly x(uint64_t p) { return FpPoly(p, {0, 1}); }
    static FpPoly constant(uint64_t p, uint64_t c) { return FpPoly(p, {c}); }

    FpPoly operator+(const FpPoly& b) const {
        std::vector<uint64_t> v(std::max(c_.size(), b.c_.size()), 0);
        for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] = (v[i] + b.c_[i]) % p_;
        return FpPoly(p_, std::move(v));
    }
    FpPoly operator-(const FpPoly& b) const {
        std::vector<uint64_t> v(std::max(c_.size(), b.c_.size()), 0);
        for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] = (v[i] + p_ - b.c_[i]) % p_;
        return FpPoly(p_, std::move(v));
    }
    FpPoly operator*(const FpPoly& b) const {
        if (is_zero() || b.is_zero()) return FpPoly(p_);
        std::vector<uint64_t> v(c_.size() + b.c_.size() - 1, 0);
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i])
                for (size_t j = 0; j < b.c_.size(); ++j)
                    v[i + j] = (v[i + j] + mulmod_u64(c_[i], b.c_[j], p_)) % p_;
        return FpPoly(p_, std::move(v));
    }
    FpPoly scaled(uint64_t s) const {
        FpPoly r = *this;
        for (auto& x : r.c_) x = mulmod_u64(x, s % p_, p_);
        r.trim();
        return r;
    }
    FpPoly operator-() const { return FpPoly(p_).operator-(*this); }

    std::pair<FpPoly, FpPoly> divrem(const FpPoly& b) const {
        if (b.is_zero()) throw std::invalid_argument("FpPoly division by zero");
        FpPoly r = *this;
        std::vector<uint64_t> q(std::max(0, degree() - b.degree() + 1), 0);
        uint64_t inv = invmod_u64(b.leading(), p_);
        while (!r.is_zero() && r.degree() >= b.degree()) {
            uint64_t f = mulmod_u64(r.leading(), inv, p_);
            int d = r.degree() - b.degree();
            q[d] = f;
            for (int i = 0; i <= b.degree(); ++i)
                r.c_[d + i] = (r.c_[d + i] + p_ - mulmod_u64(f, b.c_[i], p_)) % p_;
            r.trim();
        }
        return {FpPoly(p_, std::move(q)), r};
    }
    FpPoly operator/(const FpPoly& b) const { return divrem(b).first; }
    FpPoly operator%(const FpPoly& b) const { return divrem(b).second; }

    FpPoly monic() const {
        if (is_zero()) return *this;
        return scaled(invmod_u64(leading(), p_));
    }

    static FpPoly gcd(FpPoly a, FpPoly b) {
        while (!b.is_zero()) {
            FpPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }
    struct Xgcd;
    static Xgcd xgcd(const FpPoly& a, const FpPoly& b);

    FpPoly derivative() const {
        if (c_.size() <= 1) return FpPoly(p_);
        std::vector<uint64_t> v(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = mulmod_u64(c_[i], i % p_, p_);
        return FpPoly(p_, std::move(v));
    }
    bool squarefree() const { return gcd(*this, derivative()).degree() == 0; }

    uint64_t evaluate(uint64_t x) const {
        uint64_t r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = (mulmod_u64(r, x, p_) + *it) % p_;
        return r;
    }

    FpPoly powmod(uint64_t e, const FpPoly& mod) const {
        FpPoly r = one(p_) % mod, a = *this % mod;
        while (e) {
            if (e & 1) r = (r * a) % mod;
            a = (a * a) % mod;
            e >>= 1;
        }
        return r;
    }
    // this^e mod `mod` for big-ish exponents expressed as p^d-style (use repeated powmod).
    FpPoly powmod_pk(uint64_t base, int k, const FpPoly& mod) const {
        FpPoly r = *this % mod;
        for (int i = 0; i < k; ++i) r = r.powmod(base, mod);
        return r;
    }

    // p(x + a).
    FpPoly shift(uint64_t a) const {
        FpPoly r(p_);
        FpPoly lin(p_, {a % p_, 1});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * lin + constant(p_, *it);
        return r;
    }

    FpPoly compose_cube() const {
        if (is_zero()) return *this;
        std::vector<uint64_t> v(3 * degree() + 1, 0);
        for (size_t i = 0; i < c_.size(); ++i) v[3 * i] = c_[i];
        return FpPoly(p_, std::move(v));
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    uint64_t p_;
    std::vector<uint64_t> c_;
};

struct FpPoly::Xgcd {
    FpPoly g, s, t;
};

inline FpPoly::Xgcd FpPoly::xgcd(const FpPoly& a, const FpPoly& b) {
    uint64_t p = a.modulus() ? a.modulus() : b.modulus();
    FpPoly r0 = a, r1 = b, s0 = one(p), s1(p), t0(p), t1 = one(p);
    while (!r1.is_zero()) {
        auto [q, r] = r0.divrem(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        FpPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (!r0.is_zero()) {
        uint64_t inv = invmod_u64(r0.leading(), p);
        r0 = r0.scaled(inv);
        s0 = s0.scaled(inv);
        t0 = t0.scaled(inv);
    }
    return {r0, s0, t0};
}

// Full factorization of a nonzero FpPoly into monic irreducibles with multiplicities.
std::vector<std::pair<FpPoly, int>> factor_poly_fp(const FpPoly& a, uint64_t seed = 12345);

// Power-series sqrt of M (as truncated polynomial) to given precision, with
// chosen constant-term root; nullopt if M(0) is a non-residue.
std::optional<std::vector<uint64_t>> series_sqrt(const FpPoly& M, int prec);

}  // namespace rank3
