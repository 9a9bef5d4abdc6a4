#pragma once

#include <functional>
#include <string>
#include <utility>

#include "sasaki/jet.hpp"

namespace sasaki {

// A smooth map R^in -> R^out represented as a jet-to-jet callable, so one
// definition yields values, exact first and exact second derivatives
// depending on how the input was seeded.
class SmoothMap {
public:
    using Fn = std::function<JetVec(const JetVec&)>;
    using Domain = std::function<bool(const VecXd&)>;

    SmoothMap() = default;
    SmoothMap(int in_dim, int out_dim, Fn fn, Domain domain = nullptr)
        : in_(in_dim), out_(out_dim), fn_(std::move(fn)), domain_(std::move(domain)) {}

    int input_dim() const { return in_; }
    int output_dim() const { return out_; }
    bool valid() const { return static_cast<bool>(fn_); }

    bool in_domain(const VecXd& p) const { return !domain_ || domain_(p); }

    // Value-only evaluation (constant jets in, values out).
    VecXd value(const VecXd& p) const {
        check_point(p);
        JetVec r = fn_(constant_jets(p));
        check_output(r);
        return values_of(r);
    }

    // Full second-order jet evaluation: component k of the result carries
    // f_k(p), its gradient and its Hessian with respect to the inputs.
    JetVec jets(const VecXd& p) const {
        check_point(p);
        JetVec r = fn_(seed_jets(p));
        check_output(r);
        return r;
    }

    // Raw jet pass-through for composed seedings (e.g. chart fields fed with
    // parameter-seeded jets).
    JetVec apply(const JetVec& x) const { return fn_(x); }

private:
    void check_point(const VecXd& p) const {
        if (p.size() != in_)
            throw DomainError("smooth map: point dimension mismatch");
        if (!in_domain(p))
            throw DomainError("smooth map: point outside domain");
    }

    static void check_output(const JetVec& r) {
        for (Eigen::Index k = 0; k < r.size(); ++k)
            if (!isfinite(r[k]))
                throw NumericError("smooth map: non-finite output");
    }

    int in_ = 0;
    int out_ = 0;
    Fn fn_;
    Domain domain_;
};

// Exact first/second derivatives of f at p via forward-mode jets.
inline JetVec eval_jet2(const SmoothMap& f, const VecXd& p) {
    return f.jets(p);
}

// Central-difference Jacobian, O(step^2).  Deliberately independent of the
// jet machinery so the two can cross-check each other.
inline MatXd fd_jacobian(const SmoothMap& f, const VecXd& p, double step = 1e-5) {
    if (step <= 0.0)
        throw DomainError("fd_jacobian: step must be positive");
    const int n = f.input_dim();
    const int m = f.output_dim();
    MatXd J(m, n);
    for (int i = 0; i < n; ++i) {
        VecXd hi = p, lo = p;
        hi[i] += step;
        lo[i] -= step;
        if (!f.in_domain(hi) || !f.in_domain(lo))
            throw DomainError("fd_jacobian: stencil leaves domain");
        J.col(i) = (f.value(hi) - f.value(lo)) / (2.0 * step);
    }
    return J;
}

// Central-difference derivative of a scalar function along coordinate i.
inline double fd_derivative(const std::function<double(const VecXd&)>& f, const VecXd& p, int i,
                            double step = 1e-5) {
    if (step <= 0.0)
        throw DomainError("fd_derivative: step must be positive");
    VecXd hi = p, lo = p;
    hi[i] += step;
    lo[i] -= step;
    return (f(hi) - f(lo)) / (2.0 * step);
}

} // namespace sasaki
