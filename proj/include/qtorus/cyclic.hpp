#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "symbols.hpp"
#include "theta.hpp"

namespace qtorus {

// Trigonometric polynomial on the cyclic group of order n, with coefficient
// keys stored as the representative of smallest absolute value (ties at n/2
// for even n resolve to +n/2).
class CyclicPoly {
public:
    explicit CyclicPoly(long long n) : n_(n) {
        if (n <= 0) throw std::invalid_argument("CyclicPoly: order must be positive");
    }

    static long long representative(long long k, long long n) {
        long long r = ((k % n) + n) % n;
        if (r > n / 2) r -= n;
        return r;
    }

    long long order() const { return n_; }
    const std::map<long long, cd>& coeffs() const { return c_; }

    cd coeff(long long k) const {
        auto it = c_.find(representative(k, n_));
        return it == c_.end() ? cd{0.0, 0.0} : it->second;
    }

    CyclicPoly& add_coeff(long long k, cd v) {
        const long long r = representative(k, n_);
        const cd w = coeff(r) + v;
        if (w == cd{0.0, 0.0})
            c_.erase(r);
        else
            c_[r] = w;
        return *this;
    }

private:
    long long n_;
    std::map<long long, cd> c_;
};

// ((1/n) sum_j |sum_k y_hat(k) w^{jk}|^p)^{1/p} with w = e^{2 pi i/n};
// p = infinity gives the max over the group.
inline double cyclic_lp_norm(const CyclicPoly& y, double p) {
    const long long n = y.order();
    double acc = 0.0, best = 0.0;
    for (long long j = 0; j < n; ++j) {
        cd v = 0.0;
        for (const auto& [k, c] : y.coeffs()) {
            const long long r = ((j * k) % n + n) % n;
            v += c * unit_from_turns(static_cast<double>(r) / n);
        }
        const double a = std::abs(v);
        best = std::max(best, a);
        acc += std::pow(a, p);
    }
    if (std::isinf(p)) return best;
    return std::pow(acc / n, 1.0 / p);
}

inline void require_axis0(const QPoly& x, const char* op) {
    if (!x.axis_supported(0))
        throw std::invalid_argument(std::string(op) + ": needs a 1-D polynomial (U-axis support)");
}

// Coefficient relabeling z^k -> gamma_n^k between degree-d circle polynomials
// and the cyclic group, valid in the non-aliasing regime n > 2d.
inline CyclicPoly j_dn(const QPoly& x, long long d, long long n) {
    require_axis0(x, "j_dn");
    if (n <= 2 * d) throw std::invalid_argument("j_dn: requires n > 2d");
    if (x.degree() > d) throw std::invalid_argument("j_dn: polynomial degree exceeds d");
    CyclicPoly y(n);
    for (const auto& [p, c] : x.coeffs()) y.add_coeff(p[0], c);
    return y;
}

inline QPoly j_dn_inverse(const CyclicPoly& y, long long d, long long n) {
    if (n <= 2 * d) throw std::invalid_argument("j_dn_inverse: requires n > 2d");
    if (y.order() != n) throw std::invalid_argument("j_dn_inverse: order mismatch");
    QPoly x(Theta::rational(0, 1));
    for (const auto& [k, c] : y.coeffs()) {
        if (std::llabs(k) > d)
            throw std::invalid_argument("j_dn_inverse: support outside [-d, d]");
        x.set_coeff(k, 0, c);
    }
    return x;
}

// The two discretization norm bounds, both tending to 1 as n/d grows.
inline double sinc_bound(long long d, long long n) {
    if (n <= 2 * d) throw std::invalid_argument("sinc_bound: requires n > 2d");
    const double s = sinc(static_cast<double>(d) * pi / static_cast<double>(n));
    return 1.0 / (s * s);
}

inline double sinc_bound_inverse(long long d, long long n) {
    if (n <= 2 * d) throw std::invalid_argument("sinc_bound_inverse: requires n > 2d");
    const double s = (1.0 - 2.0 * static_cast<double>(d) / static_cast<double>(n)) *
                     sinc(static_cast<double>(d) * pi / static_cast<double>(n));
    return 1.0 / (s * s);
}

// E z^k = sinc(k pi / n) gamma_n^k; frequencies landing on the same class
// accumulate (aliasing).
inline CyclicPoly cond_expectation(const QPoly& x, long long n) {
    require_axis0(x, "cond_expectation");
    CyclicPoly y(n);
    for (const auto& [p, c] : x.coeffs())
        y.add_coeff(p[0], c * sinc(static_cast<double>(p[0]) * pi / static_cast<double>(n)));
    return y;
}

struct EmbedResult {
    QPoly poly;          // truncated series sum_{|j|<=J} sinc(pi (k+jn)/n) z^{k+jn}
    double dropped_mass; // L2 mass lost to the truncation (sum_j sinc^2 = 1 exactly)
};

// gamma_n^k = sum_j sinc(pi (k+jn)/n) z^{k+jn}, truncated to |j| <= J.
inline EmbedResult cyclic_embed(const CyclicPoly& y, long long J) {
    const long long n = y.order();
    EmbedResult r{QPoly(Theta::rational(0, 1)), 0.0};
    for (const auto& [k, c] : y.coeffs()) {
        double kept = 0.0;
        for (long long j = -J; j <= J; ++j) {
            const double w = sinc(pi * static_cast<double>(k + j * n) / static_cast<double>(n));
            if (w != 0.0) r.poly.add_coeff(k + j * n, 0, c * w);
            kept += w * w;
        }
        r.dropped_mass += std::norm(c) * std::max(0.0, 1.0 - kept);
    }
    return r;
}

// The composed discretization constant c_{n^2, n}; >= 1 and -> 1.
inline double periodization_constant(long long n) {
    if (n < 3) throw std::invalid_argument("periodization_constant: requires n >= 3");
    return sinc_bound(n, n * n) * sinc_bound_inverse(n, n * n);
}

// phi_n(k) = phi(r) (1 - |r|/n)^+ / c_{n^2,n}, r the smallest-absolute-value
// representative of k mod n^2: an exactly n^2-periodic symbol converging to
// phi pointwise as n grows.
inline Symbol periodize(const Symbol& phi, long long n) {
    if (phi.d != 1) throw std::invalid_argument("periodize: needs a 1-D symbol");
    if (n < 3) throw std::invalid_argument("periodize: requires n >= 3");
    const double c = periodization_constant(n);
    Symbol out;
    out.d = 1;
    out.period = {n * n, 0};
    out.name = phi.name + ":periodized:" + std::to_string(n);
    auto g = phi.f;
    out.f = [g, n, c](long long k, long long) -> cd {
        const long long r = CyclicPoly::representative(k, n * n);
        const double w = std::max(0.0, 1.0 - static_cast<double>(std::llabs(r)) / n);
        if (w == 0.0) return 0.0;
        return g(r, 0) * (w / c);
    };
    return out;
}

}  // namespace qtorus
