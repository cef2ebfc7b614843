#pragma once

// Exact coefficient field for the symbol calculus: complex numbers with
// rational real and imaginary parts. The i^|alpha| factors of the composition
// formula and the -i of the two-variable reduction stay exact, so identities
// that should cancel cancel to literal zero, not to 1e-16.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace mag::sym {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(long v) : re(v) {} // NOLINT(google-explicit-constructor)
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    static GaussianRational ratio(long num, long den) { return {Rational(num, den)}; }
    static GaussianRational imaginary_unit() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool operator==(const GaussianRational&) const = default;

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) {
        return a += b;
    }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) {
        a.re -= b.re;
        a.im -= b.im;
        return a;
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

    GaussianRational inverse() const {
        const Rational n = re * re + im * im;
        if (n == 0) throw std::domain_error("inverse of zero Gaussian rational");
        return {re / n, -im / n};
    }

    /// Multiply by i^k.
    GaussianRational times_i_power(unsigned k) const {
        switch (k % 4) {
            case 0: return *this;
            case 1: return {-im, re};
            case 2: return {-re, -im};
            default: return {im, -re};
        }
    }

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    std::string str() const;
};

} // namespace mag::sym
