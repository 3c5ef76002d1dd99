#pragma once
// Rational functions num/den over Q[t], denominator kept monic and coprime to num.

#include "rank3/ratpoly.hpp"

namespace rank3 {

class RatFun {
  public:
    RatFun() : num_(), den_{Rat(1)} {}
    explicit RatFun(const Rat& c) : num_(c), den_{Rat(1)} {}
    explicit RatFun(RatPoly n) : num_(std::move(n)), den_{Rat(1)} {}
    RatFun(RatPoly n, RatPoly d) {
        if (d.is_zero()) throw std::invalid_argument("zero denominator");
        RatPoly g = RatPoly::gcd(n, d);
        if (g.degree() > 0) {
            n = n / g;
            d = d / g;
        }
        Rat lc = d.leading();
        num_ = n * (Rat(1) / lc);
        den_ = d * (Rat(1) / lc);
    }

    const RatPoly& num() const { return num_; }
    const RatPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    RatFun operator+(const RatFun& b) const {
        return RatFun(num_ * b.den_ + b.num_ * den_, den_ * b.den_);
    }
    RatFun operator-(const RatFun& b) const {
        return RatFun(num_ * b.den_ - b.num_ * den_, den_ * b.den_);
    }
    RatFun operator*(const RatFun& b) const { return RatFun(num_ * b.num_, den_ * b.den_); }
    RatFun operator/(const RatFun& b) const {
        if (b.is_zero()) throw std::invalid_argument("division by zero");
        return RatFun(num_ * b.den_, den_ * b.num_);
    }
    RatFun operator-() const {
        RatFun r = *this;
        r.num_ = -r.num_;
        return r;
    }
    bool operator==(const RatFun& b) const { return num_ == b.num_ && den_ == b.den_; }
    bool operator!=(const RatFun& b) const { return !(*this == b); }

    RatFun pow(int k) const {
        RatFun r{Rat(1)};
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    // Evaluate at t = x; denominator must not vanish.
    Rat evaluate(const Rat& x) const {
        Rat d = den_.evaluate(x);
        if (d == 0) throw std::domain_error("pole at evaluation point");
        return num_.evaluate(x) / d;
    }

    RatFun compose_cube() const {
        RatFun r;
        r.num_ = num_.compose_cube();
        r.den_ = den_.compose_cube();
        return r;
    }

  private:
    RatPoly num_, den_;
};

inline RatFun operator*(const Rat& s, const RatFun& f) { return RatFun(f.num() * s, f.den()); }

}  // namespace rank3
