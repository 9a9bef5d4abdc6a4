#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>

#include "sasaki/errors.hpp"

namespace sasaki {

// Maximum number of independent variables a jet can carry.  Charts have
// dimension 2n+1 with n <= 4, so 9 covers every seeding used here.
inline constexpr int kMaxVars = 9;

// Second-order forward-mode jet: value, gradient and (symmetric) Hessian of
// a scalar quantity with respect to `nvars` independent variables, propagated
// together through arithmetic.  A jet with nvars == 0 is a constant and mixes
// freely with jets of any size; mixing two different nonzero sizes is a
// programming error and throws NumericError.
//
// Storage is fixed-capacity (no heap), sized for kMaxVars.
class Jet2 {
public:
    using Grad = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxVars, 1>;
    using Hess = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxVars, kMaxVars>;

    double a = 0.0; // value
    Grad da;        // gradient, size nvars (0 = constant)
    Hess daa;       // Hessian, nvars x nvars

    Jet2() = default;
    Jet2(double value) : a(value) {} // NOLINT: implicit by design (constants)

    // Constant of a given width (gradient/Hessian explicitly zero).
    static Jet2 constant(double value, int nvars) {
        Jet2 j;
        j.a = value;
        j.da = Grad::Zero(nvars);
        j.daa = Hess::Zero(nvars, nvars);
        return j;
    }

    // Independent variable i of nvars at the given value.
    static Jet2 variable(double value, int i, int nvars) {
        if (i < 0 || i >= nvars || nvars > kMaxVars)
            throw NumericError("jet variable index out of range");
        Jet2 j = constant(value, nvars);
        j.da[i] = 1.0;
        return j;
    }

    int vars() const { return static_cast<int>(da.size()); }
    bool is_constant() const { return da.size() == 0; }

    Jet2 operator-() const {
        Jet2 r;
        r.a = -a;
        r.da = -da;
        r.daa = -daa;
        return r;
    }

    Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
    Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
    Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

    friend Jet2 operator+(const Jet2& x, const Jet2& y) {
        if (x.is_constant()) {
            Jet2 r = y;
            r.a += x.a;
            return r;
        }
        if (y.is_constant()) {
            Jet2 r = x;
            r.a += y.a;
            return r;
        }
        check_widths(x, y);
        Jet2 r;
        r.a = x.a + y.a;
        r.da = x.da + y.da;
        r.daa = x.daa + y.daa;
        return r;
    }

    friend Jet2 operator-(const Jet2& x, const Jet2& y) {
        if (y.is_constant()) {
            Jet2 r = x;
            r.a -= y.a;
            return r;
        }
        if (x.is_constant()) {
            Jet2 r = -y;
            r.a += x.a;
            return r;
        }
        check_widths(x, y);
        Jet2 r;
        r.a = x.a - y.a;
        r.da = x.da - y.da;
        r.daa = x.daa - y.daa;
        return r;
    }

    // d(xy) = x dy + y dx;  d2(xy) = x d2y + y d2x + dx dy^T + dy dx^T.
    friend Jet2 operator*(const Jet2& x, const Jet2& y) {
        if (x.is_constant()) {
            Jet2 r;
            r.a = x.a * y.a;
            r.da = x.a * y.da;
            r.daa = x.a * y.daa;
            return r;
        }
        if (y.is_constant()) {
            Jet2 r;
            r.a = x.a * y.a;
            r.da = y.a * x.da;
            r.daa = y.a * x.daa;
            return r;
        }
        check_widths(x, y);
        Jet2 r;
        r.a = x.a * y.a;
        r.da = x.a * y.da + y.a * x.da;
        r.daa = x.a * y.daa + y.a * x.daa + x.da * y.da.transpose() + y.da * x.da.transpose();
        return r;
    }

    friend Jet2 operator/(const Jet2& x, const Jet2& y) {
        if (y.a == 0.0)
            throw NumericError("jet division by zero");
        if (y.is_constant()) {
            Jet2 r;
            r.a = x.a / y.a;
            r.da = x.da / y.a;
            r.daa = x.daa / y.a;
            return r;
        }
        const double inv = 1.0 / y.a;
        return x * chain(inv, -inv * inv, 2.0 * inv * inv * inv, y);
    }

    friend bool operator==(const Jet2& x, const Jet2& y) { return x.a == y.a; }
    friend bool operator!=(const Jet2& x, const Jet2& y) { return x.a != y.a; }
    friend bool operator<(const Jet2& x, const Jet2& y) { return x.a < y.a; }
    friend bool operator>(const Jet2& x, const Jet2& y) { return x.a > y.a; }
    friend bool operator<=(const Jet2& x, const Jet2& y) { return x.a <= y.a; }
    friend bool operator>=(const Jet2& x, const Jet2& y) { return x.a >= y.a; }

    // f(x) with f' and f'' at x.a:
    //   d f(x)  = f' dx
    //   d2 f(x) = f' d2x + f'' dx dx^T
    static Jet2 chain(double f, double fp, double fpp, const Jet2& x) {
        Jet2 r;
        r.a = f;
        if (!x.is_constant()) {
            r.da = fp * x.da;
            r.daa = fp * x.daa + fpp * (x.da * x.da.transpose());
        }
        return r;
    }

private:
    static void check_widths(const Jet2& x, const Jet2& y) {
        if (x.da.size() != y.da.size())
            throw NumericError("jet variable-count mismatch");
    }
};

inline Jet2 sin(const Jet2& x) {
    using std::cos;
    using std::sin;
    return Jet2::chain(sin(x.a), cos(x.a), -sin(x.a), x);
}

inline Jet2 cos(const Jet2& x) {
    using std::cos;
    using std::sin;
    return Jet2::chain(cos(x.a), -sin(x.a), -cos(x.a), x);
}

inline Jet2 tan(const Jet2& x) {
    using std::tan;
    const double t = tan(x.a);
    const double s = 1.0 + t * t; // sec^2
    return Jet2::chain(t, s, 2.0 * t * s, x);
}

inline Jet2 exp(const Jet2& x) {
    using std::exp;
    const double e = exp(x.a);
    return Jet2::chain(e, e, e, x);
}

inline Jet2 log(const Jet2& x) {
    using std::log;
    if (x.a <= 0.0)
        throw DomainError("log of non-positive jet value");
    const double inv = 1.0 / x.a;
    return Jet2::chain(log(x.a), inv, -inv * inv, x);
}

inline Jet2 sqrt(const Jet2& x) {
    using std::sqrt;
    if (x.a < 0.0)
        throw DomainError("sqrt of negative jet value");
    if (x.a == 0.0)
        throw NumericError("sqrt of zero has no jet (derivative singular)");
    const double s = sqrt(x.a);
    return Jet2::chain(s, 0.5 / s, -0.25 / (s * x.a), x);
}

inline Jet2 sinh(const Jet2& x) {
    using std::cosh;
    using std::sinh;
    return Jet2::chain(sinh(x.a), cosh(x.a), sinh(x.a), x);
}

inline Jet2 cosh(const Jet2& x) {
    using std::cosh;
    using std::sinh;
    return Jet2::chain(cosh(x.a), sinh(x.a), cosh(x.a), x);
}

inline Jet2 tanh(const Jet2& x) {
    using std::tanh;
    const double t = tanh(x.a);
    const double s = 1.0 - t * t; // sech^2
    return Jet2::chain(t, s, -2.0 * t * s, x);
}

// Integer power by repeated multiplication (exact chain rule, no pow() domain
// restrictions).  Negative exponents go through division.
inline Jet2 pow_int(const Jet2& x, long long e) {
    if (e == 0)
        return Jet2::constant(1.0, x.vars());
    bool neg = e < 0;
    unsigned long long k = neg ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Jet2 acc = x;
    --k;
    Jet2 base = x;
    while (k > 0) {
        if (k & 1ULL)
            acc = acc * base;
        base = base * base;
        k >>= 1ULL;
    }
    // note: acc = x^(original |e|) because we folded one factor up front
    if (neg)
        return Jet2::constant(1.0, 0) / acc;
    return acc;
}

inline Jet2 abs(const Jet2& x) {
    return x.a < 0.0 ? -x : x;
}

inline bool isfinite(const Jet2& x) {
    if (!std::isfinite(x.a))
        return false;
    return x.da.allFinite() && x.daa.allFinite();
}

// Glue required by Eigen's generic kernels for a real custom scalar.
inline const Jet2& conj(const Jet2& x) { return x; }
inline const Jet2& real(const Jet2& x) { return x; }
inline Jet2 imag(const Jet2&) { return Jet2(0.0); }
inline Jet2 abs2(const Jet2& x) { return x * x; }

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.a; }

} // namespace sasaki

namespace Eigen {

template <>
struct NumTraits<sasaki::Jet2> : NumTraits<double> {
    using Real = sasaki::Jet2;
    using NonInteger = sasaki::Jet2;
    using Nested = sasaki::Jet2;
    using Literal = sasaki::Jet2;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 9,
        MulCost = 90,
    };
    static inline sasaki::Jet2 epsilon() { return sasaki::Jet2(NumTraits<double>::epsilon()); }
    static inline sasaki::Jet2 dummy_precision() { return sasaki::Jet2(NumTraits<double>::dummy_precision()); }
    static inline sasaki::Jet2 highest() { return sasaki::Jet2(NumTraits<double>::highest()); }
    static inline sasaki::Jet2 lowest() { return sasaki::Jet2(NumTraits<double>::lowest()); }
    static inline int digits10() { return NumTraits<double>::digits10(); }
};

} // namespace Eigen

namespace sasaki {

using VecXd = Eigen::VectorXd;
using MatXd = Eigen::MatrixXd;
using JetVec = Eigen::Matrix<Jet2, Eigen::Dynamic, 1>;
using JetMat = Eigen::Matrix<Jet2, Eigen::Dynamic, Eigen::Dynamic>;

// Seed the identity jet bundle at p: component i becomes variable i.
inline JetVec seed_jets(const VecXd& p) {
    const int n = static_cast<int>(p.size());
    JetVec out(n);
    for (int i = 0; i < n; ++i)
        out[i] = Jet2::variable(p[i], i, n);
    return out;
}

// Wrap p as width-0 constants (value-only evaluation).
inline JetVec constant_jets(const VecXd& p) {
    const int n = static_cast<int>(p.size());
    JetVec out(n);
    for (int i = 0; i < n; ++i)
        out[i] = Jet2(p[i]);
    return out;
}

inline VecXd values_of(const JetVec& v) {
    VecXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out[i] = v[i].a;
    return out;
}

inline MatXd values_of(const JetMat& m) {
    MatXd out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(i, j) = m(i, j).a;
    return out;
}

// Gradient of component k of a jet vector, as a dense column.
inline VecXd grad_of(const Jet2& j, int nvars) {
    if (j.is_constant())
        return VecXd::Zero(nvars);
    return VecXd(j.da);
}

} // namespace sasaki
