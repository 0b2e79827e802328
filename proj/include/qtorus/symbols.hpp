#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpoly.hpp"
#include "rng.hpp"

namespace qtorus {

// A multiplier symbol: a function on Z^d (d = 1 or 2), optionally declared
// periodic per axis and/or supported in a box {|m_i| < support[i]}.
struct Symbol {
    int d = 1;
    std::function<cd(long long, long long)> f;  // second argument ignored when d == 1
    std::optional<std::array<long long, 2>> period;
    std::optional<std::array<long long, 2>> support;
    std::string name;  // construction string, e.g. "fejer:4" or "json"

    cd operator()(long long m, long long n = 0) const { return f(m, n); }
};

// F_n^d(m) = prod_i (1 - |m_i|/n)^+, supported in (-n, n)^d.
inline Symbol fejer_symbol(long long n, int d = 1) {
    if (n <= 0) throw std::invalid_argument("fejer_symbol: n must be positive");
    if (d != 1 && d != 2) throw std::invalid_argument("fejer_symbol: d must be 1 or 2");
    Symbol s;
    s.d = d;
    s.support = {n, d == 2 ? n : 0};
    s.name = "fejer:" + std::to_string(n) + (d == 2 ? ":2" : "");
    s.f = [n, d](long long m1, long long m2) -> cd {
        double v = std::max(0.0, 1.0 - static_cast<double>(std::llabs(m1)) / n);
        if (d == 2) v *= std::max(0.0, 1.0 - static_cast<double>(std::llabs(m2)) / n);
        return v;
    };
    return s;
}

// Indicator of the box {|m_i| <= n}.
inline Symbol dirichlet_symbol(long long n, int d = 1) {
    if (n < 0) throw std::invalid_argument("dirichlet_symbol: n must be nonnegative");
    if (d != 1 && d != 2) throw std::invalid_argument("dirichlet_symbol: d must be 1 or 2");
    Symbol s;
    s.d = d;
    s.support = {n + 1, d == 2 ? n + 1 : 0};
    s.name = "dirichlet:" + std::to_string(n) + (d == 2 ? ":2" : "");
    s.f = [n, d](long long m1, long long m2) -> cd {
        bool in = std::llabs(m1) <= n && (d == 1 || std::llabs(m2) <= n);
        return in ? 1.0 : 0.0;
    };
    return s;
}

// Heuristic 1-D family for the norm-growth experiments: an independent random
// phase slope per dyadic block, phi(k) = e^{i alpha_j k} for 2^j <= |k| <
// 2^{j+1}, j < blocks; phi vanishes at 0 and outside |k| < 2^blocks.
inline Symbol pisier_symbol(std::uint64_t seed, int blocks) {
    if (blocks <= 0 || blocks > 40) throw std::invalid_argument("pisier_symbol: blocks in [1,40]");
    Symbol s;
    s.d = 1;
    s.support = {1LL << blocks, 0};
    s.name = "pisier:" + std::to_string(seed) + ":" + std::to_string(blocks);
    std::vector<double> alpha(static_cast<std::size_t>(blocks));
    for (int j = 0; j < blocks; ++j) {
        auto rng = seeded_stream(seed, static_cast<std::uint64_t>(j));
        alpha[static_cast<std::size_t>(j)] =
            two_pi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    s.f = [alpha, blocks](long long k, long long) -> cd {
        const long long a = std::llabs(k);
        if (a == 0 || a >= (1LL << blocks)) return 0.0;
        int j = 0;
        while ((a >> (j + 1)) != 0) ++j;  // 2^j <= a < 2^{j+1}
        return std::exp(cd(0.0, alpha[static_cast<std::size_t>(j)] * static_cast<double>(k)));
    };
    return s;
}

// A symbol backed by an explicit finite table; off-table lookups use the
// declared period when present, else evaluate to 0.
inline Symbol table_symbol(int d, std::map<std::array<long long, 2>, cd> values,
                           std::optional<std::array<long long, 2>> period = std::nullopt) {
    if (d != 1 && d != 2) throw std::invalid_argument("table_symbol: d must be 1 or 2");
    Symbol s;
    s.d = d;
    s.period = period;
    s.name = "table";
    s.f = [values = std::move(values), period, d](long long m1, long long m2) -> cd {
        if (period) {
            const long long p1 = (*period)[0], p2 = (*period)[1];
            if (p1 > 0) m1 = ((m1 % p1) + p1) % p1;
            if (d == 2 && p2 > 0) m2 = ((m2 % p2) + p2) % p2;
        }
        auto it = values.find({m1, d == 2 ? m2 : 0});
        return it == values.end() ? cd{0.0, 0.0} : it->second;
    };
    return s;
}

// phi (x) 1: the 2-D symbol acting only through the first coordinate.
inline Symbol tensor_with_one(const Symbol& phi) {
    if (phi.d != 1) throw std::invalid_argument("tensor_with_one: needs a 1-D symbol");
    Symbol s;
    s.d = 2;
    s.name = phi.name + ":tensor1";
    if (phi.period) s.period = {(*phi.period)[0], 0};
    auto g = phi.f;
    s.f = [g](long long m1, long long) -> cd { return g(m1, 0); };
    return s;
}

// M_phi: multiply each Fourier coefficient by phi at its lattice point.
// A 1-D symbol acts on polynomials supported on the U-axis.
inline QPoly apply(const Symbol& phi, const QPoly& x) {
    if (phi.d == 1 && !x.axis_supported(0))
        throw std::invalid_argument("apply: 1-D symbol needs a polynomial supported on the U-axis");
    QPoly out(x.theta());
    out.set_prune_threshold(x.prune_threshold());
    for (const auto& [p, c] : x.coeffs()) {
        const cd v = phi.d == 2 ? phi.f(p[0], p[1]) : phi.f(p[0], 0);
        out.set_coeff(p[0], p[1], v * c);
    }
    return out;
}

// sup of |phi| over the box {|m_i| <= d} (the exact p=2 multiplier norm at
// that degree).
inline double sup_abs_on_box(const Symbol& phi, long long box) {
    double best = 0.0;
    for (long long m = -box; m <= box; ++m) {
        if (phi.d == 1) {
            best = std::max(best, std::abs(phi.f(m, 0)));
        } else {
            for (long long n = -box; n <= box; ++n) best = std::max(best, std::abs(phi.f(m, n)));
        }
    }
    return best;
}

}  // namespace qtorus
