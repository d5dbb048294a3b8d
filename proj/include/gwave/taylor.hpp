#ifndef GWAVE_TAYLOR_HPP
#define GWAVE_TAYLOR_HPP

#include <array>
#include <cmath>
#include <complex>

#include "gwave/errors.hpp"

// Truncated Taylor arithmetic. Analytic functions are applied through their
// derivative table at the constant term (the non-constant part is nilpotent),
// so one Horner scheme serves every elementary function and both jet shapes.

namespace gwave {

using cxd = std::complex<double>;

template <class T, int Ord>
struct Taylor {
    static constexpr int order = Ord;
    std::array<T, Ord + 1> c{};  // c[k] = f^(k)(x0) / k!

    static Taylor constant(T v) {
        Taylor t;
        t.c[0] = v;
        return t;
    }
    static Taylor variable(T v) {
        Taylor t;
        t.c[0] = v;
        if constexpr (Ord >= 1) t.c[1] = T(1);
        return t;
    }

    T constant_term() const { return c[0]; }

    /// k-th derivative value (k! * coefficient)
    T derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c[static_cast<size_t>(k)] * T(f);
    }

    Taylor operator-() const {
        Taylor r;
        for (int k = 0; k <= Ord; ++k) r.c[k] = -c[k];
        return r;
    }
    friend Taylor operator+(const Taylor& a, const Taylor& b) {
        Taylor r;
        for (int k = 0; k <= Ord; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }
    friend Taylor operator-(const Taylor& a, const Taylor& b) {
        Taylor r;
        for (int k = 0; k <= Ord; ++k) r.c[k] = a.c[k] - b.c[k];
        return r;
    }
    friend Taylor operator*(const Taylor& a, const Taylor& b) {
        Taylor r;
        for (int i = 0; i <= Ord; ++i)
            for (int j = 0; i + j <= Ord; ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Taylor operator*(T s, const Taylor& a) {
        Taylor r;
        for (int k = 0; k <= Ord; ++k) r.c[k] = s * a.c[k];
        return r;
    }
};

/// Bivariate jet: coefficients of x^i y^j with i+j <= Ord, triangular layout.
template <class T, int Ord>
struct Jet2 {
    static constexpr int order = Ord;
    static constexpr int ncoef = (Ord + 1) * (Ord + 2) / 2;
    std::array<T, ncoef> c{};

    static constexpr int idx(int i, int j) {
        int d = i + j;
        return d * (d + 1) / 2 + j;
    }

    static Jet2 constant(T v) {
        Jet2 t;
        t.c[0] = v;
        return t;
    }
    static Jet2 variable(int axis, T v) {
        Jet2 t;
        t.c[0] = v;
        t.c[axis == 0 ? idx(1, 0) : idx(0, 1)] = T(1);
        return t;
    }

    T constant_term() const { return c[0]; }

    /// mixed partial d^(a+b) f / dx^a dy^b
    T derivative(int a, int b) const {
        double f = 1.0;
        for (int i = 2; i <= a; ++i) f *= i;
        for (int i = 2; i <= b; ++i) f *= i;
        return c[static_cast<size_t>(idx(a, b))] * T(f);
    }

    Jet2 operator-() const {
        Jet2 r;
        for (int k = 0; k < ncoef; ++k) r.c[k] = -c[k];
        return r;
    }
    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r;
        for (int k = 0; k < ncoef; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r;
        for (int k = 0; k < ncoef; ++k) r.c[k] = a.c[k] - b.c[k];
        return r;
    }
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        for (int d1 = 0; d1 <= Ord; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                T av = a.c[d1 * (d1 + 1) / 2 + j1];
                if (av == T(0)) continue;
                int i1 = d1 - j1;
                for (int d2 = 0; d1 + d2 <= Ord; ++d2)
                    for (int j2 = 0; j2 <= d2; ++j2) {
                        int i2 = d2 - j2;
                        r.c[idx(i1 + i2, j1 + j2)] += av * b.c[d2 * (d2 + 1) / 2 + j2];
                    }
            }
        return r;
    }
    friend Jet2 operator*(T s, const Jet2& a) {
        Jet2 r;
        for (int k = 0; k < ncoef; ++k) r.c[k] = s * a.c[k];
        return r;
    }
};

/// F(jet) from the derivative table ders[k] = F^(k)(constant term), k = 0..Ord.
template <class Jet, class T>
Jet apply_analytic(const Jet& f, const std::array<T, Jet::order + 1>& ders) {
    Jet p = f;
    p.c[0] = T(0);
    double fact = 1.0;
    for (int i = 2; i <= Jet::order; ++i) fact *= i;
    Jet r = Jet::constant(ders[Jet::order] * T(1.0 / fact));
    for (int k = Jet::order - 1; k >= 0; --k) {
        double fk = 1.0;
        for (int i = 2; i <= k; ++i) fk *= i;
        r = r * p + Jet::constant(ders[k] * T(1.0 / fk));
    }
    return r;
}

namespace detail {

inline bool is_real(cxd v) { return std::abs(v.imag()) <= 1e-14 * (1.0 + std::abs(v.real())); }
inline bool is_real(double) { return true; }
inline double real_part(cxd v) { return v.real(); }
inline double real_part(double v) { return v; }

template <class T, int N>
std::array<T, N> exp_table(T c) {
    std::array<T, N> d;
    T e = std::exp(c);
    d.fill(e);
    return d;
}

template <class T, int N>
std::array<T, N> log_table(T c) {
    if (c == T(0) || (is_real(c) && real_part(c) <= 0.0))
        throw Error(ErrorKind::DomainError, "log of non-positive value");
    std::array<T, N> d;
    d[0] = std::log(c);
    T cp = c;
    double sign = 1.0, fact = 1.0;
    for (int k = 1; k < N; ++k) {
        d[k] = T(sign * fact) / cp;
        cp *= c;
        sign = -sign;
        fact *= k;
    }
    return d;
}

template <class T, int N>
std::array<T, N> pow_table(T c, double a) {
    // fractional powers demand a positive real base
    if (!is_real(c) || real_part(c) <= 0.0)
        throw Error(ErrorKind::DomainError, "fractional power of non-positive base");
    std::array<T, N> d;
    double coef = 1.0;
    for (int k = 0; k < N; ++k) {
        d[k] = T(coef) * T(std::pow(real_part(c), a - k));
        coef *= (a - k);
    }
    return d;
}

template <class T, int N>
std::array<T, N> recip_table(T c) {
    if (c == T(0)) throw Error(ErrorKind::DomainError, "division by zero");
    std::array<T, N> d;
    T inv = T(1) / c;
    T cur = inv;
    double fact = 1.0, sign = 1.0;
    for (int k = 0; k < N; ++k) {
        d[k] = T(sign * fact) * cur;
        cur *= inv;
        fact *= (k + 1);
        sign = -sign;
    }
    return d;
}

template <class T, int N>
std::array<T, N> sin_table(T c) {
    std::array<T, N> d;
    T s = std::sin(c), co = std::cos(c);
    for (int k = 0; k < N; ++k) {
        switch (k % 4) {
            case 0: d[k] = s; break;
            case 1: d[k] = co; break;
            case 2: d[k] = -s; break;
            default: d[k] = -co; break;
        }
    }
    return d;
}

template <class T, int N>
std::array<T, N> cos_table(T c) {
    std::array<T, N> d;
    T s = std::sin(c), co = std::cos(c);
    for (int k = 0; k < N; ++k) {
        switch (k % 4) {
            case 0: d[k] = co; break;
            case 1: d[k] = -s; break;
            case 2: d[k] = -co; break;
            default: d[k] = s; break;
        }
    }
    return d;
}

} // namespace detail

template <class Jet>
Jet jet_exp(const Jet& f) {
    return apply_analytic(f, detail::exp_table<decltype(f.constant_term()), Jet::order + 1>(f.constant_term()));
}
template <class Jet>
Jet jet_log(const Jet& f) {
    return apply_analytic(f, detail::log_table<decltype(f.constant_term()), Jet::order + 1>(f.constant_term()));
}
template <class Jet>
Jet jet_sin(const Jet& f) {
    return apply_analytic(f, detail::sin_table<decltype(f.constant_term()), Jet::order + 1>(f.constant_term()));
}
template <class Jet>
Jet jet_cos(const Jet& f) {
    return apply_analytic(f, detail::cos_table<decltype(f.constant_term()), Jet::order + 1>(f.constant_term()));
}
template <class Jet>
Jet jet_recip(const Jet& f) {
    return apply_analytic(f, detail::recip_table<decltype(f.constant_term()), Jet::order + 1>(f.constant_term()));
}
template <class Jet>
Jet jet_pow_real(const Jet& f, double a) {
    return apply_analytic(f, detail::pow_table<decltype(f.constant_term()), Jet::order + 1>(f.constant_term(), a));
}
template <class Jet>
Jet jet_sqrt(const Jet& f) {
    return jet_pow_real(f, 0.5);
}
template <class Jet>
Jet jet_pow_int(const Jet& f, long n) {
    if (n == 0) return Jet::constant(decltype(f.constant_term())(1));
    bool neg = n < 0;
    unsigned long e = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Jet acc = Jet::constant(decltype(f.constant_term())(1));
    Jet base = f;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return neg ? jet_recip(acc) : acc;
}
template <class Jet>
Jet jet_div(const Jet& a, const Jet& b) {
    return a * jet_recip(b);
}

using RTaylor = Taylor<double, 7>;   // bump profile jets
using CTaylor = Taylor<cxd, 6>;      // 1D expression jets
using CJet2 = Jet2<cxd, 4>;          // 2D expression jets

} // namespace gwave

#endif
