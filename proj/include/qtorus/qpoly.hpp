#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "theta.hpp"

namespace qtorus {

// Lattice point (m, n), standing for the monomial U^m V^n.
using Idx = std::array<long long, 2>;

// A single twisted monomial: phase * U^m V^n with the unit-modulus phase kept
// as an angle in turns.
struct Monomial {
    Idx exp{0, 0};
    double phase_turns = 0.0;

    cd phase() const { return unit_from_turns(phase_turns); }
};

// Product rule (U^a V^b)(U^c V^e) = e^{-2 pi i theta b c} U^{a+c} V^{b+e}.
inline Monomial monomial_product(const Theta& th, const Monomial& x, const Monomial& y) {
    Monomial out;
    out.exp = {x.exp[0] + y.exp[0], x.exp[1] + y.exp[1]};
    const double tw = turns_times(th, -static_cast<__int128>(x.exp[1]) * y.exp[0]);
    double t = x.phase_turns + y.phase_turns + tw;
    out.phase_turns = t - std::floor(t);
    return out;
}

// (U^m V^n)^* = e^{-2 pi i theta m n} U^{-m} V^{-n}
inline Monomial monomial_adjoint(const Theta& th, const Monomial& x) {
    Monomial out;
    out.exp = {-x.exp[0], -x.exp[1]};
    double t = -x.phase_turns + turns_times(th, -static_cast<__int128>(x.exp[0]) * x.exp[1]);
    out.phase_turns = t - std::floor(t);
    return out;
}

// Finitely supported Fourier coefficient map on Z^2, tagged with the
// deformation angle.  Value type: plain complex doubles; the twist phases are
// produced by exact turn arithmetic when theta is rational.
class QPoly {
public:
    explicit QPoly(Theta theta = Theta()) : theta_(theta) {}

    static QPoly monomial(Theta theta, long long m, long long n, cd coeff = {1.0, 0.0}) {
        QPoly x(theta);
        x.add_coeff(m, n, coeff);
        return x;
    }
    static QPoly one(Theta theta) { return monomial(theta, 0, 0); }

    const Theta& theta() const { return theta_; }
    const std::map<Idx, cd>& coeffs() const { return c_; }
    bool empty() const { return c_.empty(); }

    cd coeff(long long m, long long n) const {
        auto it = c_.find(Idx{m, n});
        return it == c_.end() ? cd{0.0, 0.0} : it->second;
    }

    QPoly& set_coeff(long long m, long long n, cd v) {
        if (v == cd{0.0, 0.0} || std::abs(v) < prune_)
            c_.erase(Idx{m, n});
        else
            c_[Idx{m, n}] = v;
        return *this;
    }

    QPoly& add_coeff(long long m, long long n, cd v) { return set_coeff(m, n, coeff(m, n) + v); }

    // max |exponent| over the support (0 for the empty polynomial)
    long long degree() const {
        long long d = 0;
        for (const auto& [mn, v] : c_) {
            d = std::max({d, std::llabs(mn[0]), std::llabs(mn[1])});
        }
        return d;
    }

    // true when every support point lies on the given axis (0: U-axis, 1: V-axis)
    bool axis_supported(int axis) const {
        for (const auto& [mn, v] : c_)
            if (mn[1 - axis] != 0) return false;
        return true;
    }

    double prune_threshold() const { return prune_; }
    QPoly& set_prune_threshold(double t) {
        prune_ = t;
        return *this;
    }

private:
    Theta theta_;
    std::map<Idx, cd> c_;
    double prune_ = 0.0;  // coefficients with modulus below this are dropped
};

inline void require_same_theta(const QPoly& x, const QPoly& y, const char* op) {
    if (!(x.theta() == y.theta()))
        throw std::invalid_argument(std::string(op) + ": operands live on different tori (theta " +
                                    x.theta().str() + " vs " + y.theta().str() + ")");
}

inline QPoly mul(const QPoly& x, const QPoly& y) {
    require_same_theta(x, y, "mul");
    QPoly out(x.theta());
    out.set_prune_threshold(std::max(x.prune_threshold(), y.prune_threshold()));
    for (const auto& [p, cx] : x.coeffs()) {
        for (const auto& [q, cy] : y.coeffs()) {
            const cd tw = phase_pow(x.theta(), -static_cast<__int128>(p[1]) * q[0]);
            out.add_coeff(p[0] + q[0], p[1] + q[1], cx * cy * tw);
        }
    }
    return out;
}

inline QPoly adjoint(const QPoly& x) {
    QPoly out(x.theta());
    out.set_prune_threshold(x.prune_threshold());
    for (const auto& [p, c] : x.coeffs()) {
        const cd tw = phase_pow(x.theta(), -static_cast<__int128>(p[0]) * p[1]);
        out.set_coeff(-p[0], -p[1], std::conj(c) * tw);
    }
    return out;
}

// Normalized trace: picks out the coefficient of the identity.
inline cd trace(const QPoly& x) { return x.coeff(0, 0); }

inline cd fourier_coeff(const QPoly& x, long long m, long long n) { return x.coeff(m, n); }

inline QPoly operator+(const QPoly& x, const QPoly& y) {
    require_same_theta(x, y, "operator+");
    QPoly out = x;
    for (const auto& [p, c] : y.coeffs()) out.add_coeff(p[0], p[1], c);
    return out;
}

inline QPoly operator-(const QPoly& x, const QPoly& y) {
    require_same_theta(x, y, "operator-");
    QPoly out = x;
    for (const auto& [p, c] : y.coeffs()) out.add_coeff(p[0], p[1], -c);
    return out;
}

inline QPoly operator*(const QPoly& x, const QPoly& y) { return mul(x, y); }

inline QPoly operator*(cd s, const QPoly& x) {
    QPoly out(x.theta());
    for (const auto& [p, c] : x.coeffs()) out.set_coeff(p[0], p[1], s * c);
    return out;
}

// Coefficient map on Z^4 for an element of the tensor product of two tori.
struct TensorPoly {
    Theta theta1, theta2;
    std::map<std::array<long long, 4>, cd> coeffs;
};

// The *-homomorphism T^2_{theta1+theta2} -> T^2_{theta1} (x) T^2_{theta2}
// sending U -> U(x)U, V -> V(x)V: coefficients land on the diagonal sublattice.
inline TensorPoly tensor_shift(const QPoly& x, const Theta& theta1, const Theta& theta2) {
    bool compatible;
    if (theta1.is_rational() && theta2.is_rational() && x.theta().is_rational()) {
        // exact: theta1 + theta2 == theta (mod 1)
        const long long d1 = theta1.den(), d2 = theta2.den();
        Fraction sum = Fraction::reduced(theta1.num() * d2 + theta2.num() * d1, d1 * d2);
        sum.num = ((sum.num % sum.den) + sum.den) % sum.den;
        compatible = (sum.num == x.theta().num() && sum.den == x.theta().den());
    } else {
        double s = theta1.value() + theta2.value();
        s -= std::floor(s);
        double d = std::fabs(s - x.theta().value());
        compatible = std::min(d, 1.0 - d) <= 1e-12;
    }
    if (!compatible)
        throw std::invalid_argument("tensor_shift: theta1 + theta2 != theta of the input (mod 1)");
    TensorPoly out;
    out.theta1 = theta1;
    out.theta2 = theta2;
    for (const auto& [p, c] : x.coeffs()) out.coeffs[{p[0], p[1], p[0], p[1]}] = c;
    return out;
}

}  // namespace qtorus
