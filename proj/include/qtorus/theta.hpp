#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace qtorus {

using cd = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduced fraction with positive denominator.
struct Fraction {
    long long num = 0;
    long long den = 1;

    static Fraction reduced(long long num, long long den) {
        if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        return Fraction{num, den};
    }

    friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Rotation angle of the deformation parameter, taken mod 1 (angles measured in
// turns: 1 turn = 2*pi radians).  Keeps the exact fraction when the angle is
// rational so long products of monomials accumulate phases without drift.
class Theta {
public:
    Theta() : rational_(true), frac_{0, 1}, value_(0.0) {}

    static Theta rational(long long num, long long den) {
        Fraction f = Fraction::reduced(num, den);
        f.num = ((f.num % f.den) + f.den) % f.den;  // into [0, 1)
        Theta t;
        t.rational_ = true;
        t.frac_ = f;
        t.value_ = static_cast<double>(f.num) / static_cast<double>(f.den);
        return t;
    }

    static Theta real(double x) {
        Theta t;
        t.rational_ = false;
        t.value_ = x - std::floor(x);
        return t;
    }

    bool is_rational() const { return rational_; }
    long long num() const { return frac_.num; }
    long long den() const { return frac_.den; }
    double value() const { return value_; }

    friend bool operator==(const Theta& a, const Theta& b) {
        if (a.rational_ != b.rational_) return false;
        return a.rational_ ? a.frac_ == b.frac_ : a.value_ == b.value_;
    }

    std::string str() const {
        return rational_ ? std::to_string(frac_.num) + "/" + std::to_string(frac_.den)
                         : std::to_string(value_);
    }

private:
    bool rational_;
    Fraction frac_{0, 1};
    double value_ = 0.0;
};

// e^{2*pi*i*t} for t in turns.  Quarter-turn multiples are returned exactly so
// that cancellations like UV + VU at theta = 1/2 come out as true zeros.
inline cd unit_from_turns(double turns) {
    double t = turns - std::floor(turns);
    const double q = 4.0 * t;
    if (q == std::floor(q)) {
        switch (static_cast<int>(q)) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
        }
    }
    return {std::cos(two_pi * t), std::sin(two_pi * t)};
}

// theta * k mod 1, for (possibly huge) integer k.  Exact modular arithmetic on
// the rational branch; the real branch is a plain long-double reduction and is
// only trustworthy while |k| stays well under 2^62.
inline double turns_times(const Theta& th, __int128 k) {
    if (th.is_rational()) {
        const long long den = th.den();
        long long r = static_cast<long long>(k % den);
        if (r < 0) r += den;
        __int128 p = static_cast<__int128>(th.num()) * r % den;
        return static_cast<double>(static_cast<long long>(p)) / static_cast<double>(den);
    }
    long double t = std::fmod(static_cast<long double>(th.value()) * static_cast<long double>(k), 1.0L);
    if (t < 0) t += 1.0L;
    return static_cast<double>(t);
}

// e^{2*pi*i*theta*k}
inline cd phase_pow(const Theta& th, __int128 k) {
    return unit_from_turns(turns_times(th, k));
}

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace qtorus
