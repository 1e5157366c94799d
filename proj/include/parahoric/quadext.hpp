#pragma once

#include <string>

#include "parahoric/errors.hpp"
#include "parahoric/modring.hpp"
#include "parahoric/rational.hpp"

namespace parahoric {

// Q(sqrt(d)) for a fixed non-square d > 0, stored as a + b*sqrt(d).
// Carrying the radicand at runtime keeps the type usable for any residue
// characteristic; mixing radicands throws ShapeError.
class QuadExt {
public:
    QuadExt(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
        if (d <= 1) throw ShapeError("radicand must exceed 1");
    }
    static QuadExt rational(const Rational& a, long d) { return QuadExt(a, Rational(0), d); }
    static QuadExt sqrt_d(long d) { return QuadExt(Rational(0), Rational(1), d); }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    long d() const { return d_; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    QuadExt operator+(const QuadExt& o) const {
        same(o);
        Rational ra = a_ + o.a_, rb = b_ + o.b_;
        return QuadExt(ra, rb, d_);
    }
    QuadExt operator-(const QuadExt& o) const {
        same(o);
        Rational ra = a_ - o.a_, rb = b_ - o.b_;
        return QuadExt(ra, rb, d_);
    }
    QuadExt operator-() const {
        Rational ra = -a_, rb = -b_;
        return QuadExt(ra, rb, d_);
    }
    QuadExt operator*(const QuadExt& o) const {
        same(o);
        Rational ra = a_ * o.a_ + Rational(d_) * b_ * o.b_;
        Rational rb = a_ * o.b_ + b_ * o.a_;
        return QuadExt(ra, rb, d_);
    }
    QuadExt conj() const {
        Rational rb = -b_;
        return QuadExt(a_, rb, d_);
    }
    QuadExt inverse() const {
        // Norm a^2 - d b^2 vanishes only at 0 since d is a non-square.
        Rational n = a_ * a_ - Rational(d_) * b_ * b_;
        if (n == 0) throw UnitError("inverse of zero in Q(sqrt(d))");
        Rational ra = a_ / n, rb = -b_ / n;
        return QuadExt(ra, rb, d_);
    }
    QuadExt operator/(const QuadExt& o) const { return *this * o.inverse(); }
    QuadExt pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        QuadExt acc = rational(Rational(1), d_), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    bool operator==(const QuadExt& o) const { same(o); return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const QuadExt& o) const { return !(*this == o); }

    std::string str() const {
        if (b_ == 0) return rat_to_string(a_);
        return rat_to_string(a_) + "+" + rat_to_string(b_) + "*sqrt(" + std::to_string(d_) + ")";
    }

private:
    void same(const QuadExt& o) const {
        if (d_ != o.d_) throw ShapeError("mixed radicands");
    }
    Rational a_, b_;
    long d_;
};

inline QuadExt ring_zero(const QuadExt& x) { return QuadExt::rational(Rational(0), x.d()); }
inline QuadExt ring_one(const QuadExt& x) { return QuadExt::rational(Rational(1), x.d()); }
inline bool is_zero(const QuadExt& x) { return x.is_zero(); }
inline std::string scalar_str(const QuadExt& x) { return x.str(); }
inline QuadExt scalar_from_int(const QuadExt& x, long v) {
    return QuadExt::rational(Rational(v), x.d());
}
inline QuadExt divexact(const QuadExt& a, const QuadExt& b) { return a / b; }

} // namespace parahoric
