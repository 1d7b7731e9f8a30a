#pragma once

// Order-2 truncated jets: value, gradient and Hessian with respect to a
// fixed set of independent variables. Arithmetic is forward-mode and exact
// at the stored orders.

#include <Eigen/Dense>

#include <cmath>

namespace nullgeo {

inline constexpr int kMaxJetVars = 8;

class Jet2 {
public:
    using Gradient = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxJetVars, 1>;
    using Hessian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxJetVars, kMaxJetVars>;

    Jet2() = default;

    static Jet2 constant(double value, int nvars) {
        Jet2 j;
        j.value_ = value;
        j.grad_ = Gradient::Zero(nvars);
        j.hess_ = Hessian::Zero(nvars, nvars);
        return j;
    }

    static Jet2 variable(double value, int index, int nvars) {
        Jet2 j = constant(value, nvars);
        j.grad_(index) = 1.0;
        return j;
    }

    double value() const { return value_; }
    const Gradient& gradient() const { return grad_; }
    const Hessian& hessian() const { return hess_; }
    int nvars() const { return static_cast<int>(grad_.size()); }

    /// f(u) for a scalar function with derivatives d1 = f'(u), d2 = f''(u).
    Jet2 chain(double f, double d1, double d2) const {
        Jet2 r;
        r.value_ = f;
        r.grad_ = d1 * grad_;
        r.hess_ = d1 * hess_ + d2 * (grad_ * grad_.transpose());
        return r;
    }

    Jet2 operator-() const {
        Jet2 r = *this;
        r.value_ = -value_;
        r.grad_ = -grad_;
        r.hess_ = -hess_;
        return r;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.value_ = a.value_ + b.value_;
        r.grad_ = a.grad_ + b.grad_;
        r.hess_ = a.hess_ + b.hess_;
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.value_ = a.value_ * b.value_;
        r.grad_ = a.value_ * b.grad_ + b.value_ * a.grad_;
        r.hess_ = a.value_ * b.hess_ + b.value_ * a.hess_ + a.grad_ * b.grad_.transpose() +
                  b.grad_ * a.grad_.transpose();
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.value_ = a.value_ / b.value_;
        r.grad_ = (a.grad_ - r.value_ * b.grad_) / b.value_;
        r.hess_ = (a.hess_ - r.value_ * b.hess_ - r.grad_ * b.grad_.transpose() - b.grad_ * r.grad_.transpose()) /
                  b.value_;
        return r;
    }

    /// Same derivatives with the value replaced (keeps plain and jet
    /// evaluation bit-identical where the value is computed differently).
    Jet2 with_value(double v) const {
        Jet2 r = *this;
        r.value_ = v;
        return r;
    }

    Jet2 reciprocal() const {
        const double v = value_;
        return chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
    }

    bool is_constant() const { return grad_.isZero(0.0) && hess_.isZero(0.0); }

private:
    double value_ = 0.0;
    Gradient grad_;
    Hessian hess_;
};

inline Jet2 sin(const Jet2& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    return u.chain(s, c, -s);
}
inline Jet2 cos(const Jet2& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    return u.chain(c, -s, -c);
}
inline Jet2 tan(const Jet2& u) {
    const double t = std::tan(u.value());
    const double sec2 = 1.0 + t * t;
    return u.chain(t, sec2, 2.0 * t * sec2);
}
inline Jet2 sinh(const Jet2& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    return u.chain(s, c, s);
}
inline Jet2 cosh(const Jet2& u) {
    const double s = std::sinh(u.value()), c = std::cosh(u.value());
    return u.chain(c, s, c);
}
inline Jet2 tanh(const Jet2& u) {
    const double t = std::tanh(u.value());
    const double sech2 = 1.0 - t * t;
    return u.chain(t, sech2, -2.0 * t * sech2);
}
inline Jet2 exp(const Jet2& u) {
    const double e = std::exp(u.value());
    return u.chain(e, e, e);
}
inline Jet2 log(const Jet2& u) {
    const double v = u.value();
    return u.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Jet2 sqrt(const Jet2& u) {
    const double s = std::sqrt(u.value());
    return u.chain(s, 0.5 / s, -0.25 / (s * u.value()));
}
inline Jet2 abs(const Jet2& u) {
    const double sign = u.value() < 0.0 ? -1.0 : 1.0;
    return u.chain(std::abs(u.value()), sign, 0.0);
}
inline Jet2 atan(const Jet2& u) {
    const double v = u.value();
    const double d1 = 1.0 / (1.0 + v * v);
    return u.chain(std::atan(v), d1, -2.0 * v * d1 * d1);
}

/// u^c for a constant exponent c.
inline Jet2 pow(const Jet2& u, double c) {
    const double v = u.value();
    if (c == 0.0) return Jet2::constant(1.0, u.nvars());
    if (c == 1.0) return u;
    const double d2 = c == 2.0 ? 2.0 : c * (c - 1.0) * std::pow(v, c - 2.0);
    return u.chain(std::pow(v, c), c * std::pow(v, c - 1.0), d2);
}

/// u^w for a non-constant exponent, via exp(w log u).
inline Jet2 pow(const Jet2& u, const Jet2& w) {
    if (w.is_constant()) return pow(u, w.value());
    return exp(w * log(u)).with_value(std::pow(u.value(), w.value()));
}

}  // namespace nullgeo
