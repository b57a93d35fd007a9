#pragma once

#include "pgz/rational.hpp"

#include <iosfwd>
#include <string>

namespace pgz {

// Element of Q(i)[sqrt(q)]: (a + b*i) + (c + d*i)*sqrt(q).  All character
// values, measures and linking numbers live in this ring; arithmetic is exact.
// q is carried per value and must agree between operands.
class ExactScalar {
public:
    ExactScalar() : q_(0) {}
    explicit ExactScalar(long q, Rat a = 0, Rat b = 0, Rat c = 0, Rat d = 0)
        : q_(q), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    static ExactScalar zero(long q) { return ExactScalar(q); }
    static ExactScalar one(long q) { return ExactScalar(q, 1); }
    static ExactScalar from_rat(long q, const Rat& r) { return ExactScalar(q, r); }
    static ExactScalar i_unit(long q) { return ExactScalar(q, 0, 1); }
    // i^k for k in Z
    static ExactScalar i_pow(long q, long k) {
        switch (((k % 4) + 4) % 4) {
            case 0: return ExactScalar(q, 1);
            case 1: return ExactScalar(q, 0, 1);
            case 2: return ExactScalar(q, -1);
            default: return ExactScalar(q, 0, -1);
        }
    }
    // q^{v/2}: exact, uses the sqrt(q) component for odd v.
    static ExactScalar q_half_pow(long q, long v) {
        if (v % 2 == 0) return ExactScalar(q, rat_pow(q, v / 2));
        long w = (v - 1) / 2; // v = 2w+1, q^{v/2} = q^w * sqrt(q)
        return ExactScalar(q, 0, 0, rat_pow(q, w));
    }

    long q() const { return q_; }
    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const Rat& c() const { return c_; }
    const Rat& d() const { return d_; }

    bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }
    bool is_rational() const { return b_ == 0 && c_ == 0 && d_ == 0; }
    // Rational part accessor; throws if the value has i or sqrt(q) components.
    const Rat& as_rat() const {
        if (!is_rational()) throw std::domain_error("ExactScalar: not rational");
        return a_;
    }

    ExactScalar conj() const { return ExactScalar(q_, a_, -b_, c_, -d_); } // complex conjugation

    friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
        long q = merge_q(x, y);
        return ExactScalar(q, x.a_ + y.a_, x.b_ + y.b_, x.c_ + y.c_, x.d_ + y.d_);
    }
    friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
        long q = merge_q(x, y);
        return ExactScalar(q, x.a_ - y.a_, x.b_ - y.b_, x.c_ - y.c_, x.d_ - y.d_);
    }
    ExactScalar operator-() const { return ExactScalar(q_, -a_, -b_, -c_, -d_); }

    friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
        long q = merge_q(x, y);
        // (A + B sqrt q)(C + D sqrt q) = AC + q BD + (AD + BC) sqrt q, A..D in Q(i)
        Rat qa(q);
        // complex parts: A=(a,b), B=(c,d), C=(ya,yb), D=(yc,yd)
        Rat ra = x.a_ * y.a_ - x.b_ * y.b_ + qa * (x.c_ * y.c_ - x.d_ * y.d_);
        Rat rb = x.a_ * y.b_ + x.b_ * y.a_ + qa * (x.c_ * y.d_ + x.d_ * y.c_);
        Rat rc = x.a_ * y.c_ - x.b_ * y.d_ + x.c_ * y.a_ - x.d_ * y.b_;
        Rat rd = x.a_ * y.d_ + x.b_ * y.c_ + x.c_ * y.b_ + x.d_ * y.a_;
        return ExactScalar(q, ra, rb, rc, rd);
    }
    friend ExactScalar operator*(const ExactScalar& x, const Rat& r) {
        return ExactScalar(x.q_, x.a_ * r, x.b_ * r, x.c_ * r, x.d_ * r);
    }
    friend ExactScalar operator*(const Rat& r, const ExactScalar& x) { return x * r; }

    // Exact division in the field Q(i, sqrt q).
    ExactScalar inverse() const {
        if (is_zero()) throw std::domain_error("ExactScalar: division by zero");
        // 1/(A + B sqrt q) = (A - B sqrt q) / (A^2 - q B^2), then invert in Q(i).
        ExactScalar num(q_, a_, b_, -c_, -d_);
        // A^2 - q B^2 in Q(i):
        Rat qa(q_);
        Rat ra = a_ * a_ - b_ * b_ - qa * (c_ * c_ - d_ * d_);
        Rat rb = 2 * a_ * b_ - qa * (2 * c_ * d_);
        Rat n2 = ra * ra + rb * rb;
        if (n2 == 0) throw std::domain_error("ExactScalar: division by zero norm");
        // 1/(ra + rb i) = (ra - rb i)/n2
        ExactScalar inv_c(q_, ra / n2, -rb / n2);
        return num * inv_c;
    }
    friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) { return x * y.inverse(); }

    friend bool operator==(const ExactScalar& x, const ExactScalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }
    friend bool operator!=(const ExactScalar& x, const ExactScalar& y) { return !(x == y); }

    ExactScalar& operator+=(const ExactScalar& y) { *this = *this + y; return *this; }
    ExactScalar& operator-=(const ExactScalar& y) { *this = *this - y; return *this; }
    ExactScalar& operator*=(const ExactScalar& y) { *this = *this * y; return *this; }

    std::string str() const;
    double approx() const;

private:
    static long merge_q(const ExactScalar& x, const ExactScalar& y) {
        if (x.q_ != 0 && y.q_ != 0 && x.q_ != y.q_)
            throw std::logic_error("ExactScalar: mixed residue field sizes");
        return x.q_ != 0 ? x.q_ : y.q_;
    }

    long q_;
    Rat a_, b_, c_, d_;
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& s);

} // namespace pgz
