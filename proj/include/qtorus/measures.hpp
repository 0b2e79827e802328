#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "theta.hpp"

namespace qtorus {

// One structural piece of a measure on the circle: weight * z^shift * K_order
// with K_q the Fejer kernel of order q (K_q >= 0, mass 1).
struct FejerComponent {
    double weight = 0.0;
    long long order = 0;
    long long shift = 0;
};

// A measure stored structurally: Fejer components, a point mass at 1, and an
// optional convolution marker n meaning mu = (z^n nu) * (z^{-n} nu) where nu
// is the stored base measure.  Fourier coefficients and variation bounds are
// evaluated exactly from the structure.
struct AtomicFejerMeasure {
    std::vector<FejerComponent> components;
    double atom_weight = 0.0;
    std::optional<long long> conv_shift;
};

// K_q^hat(j) = (1 - |j|/(q+1))^+
inline double fejer_hat(long long order, long long j) {
    return std::max(0.0, 1.0 - static_cast<double>(std::llabs(j)) / static_cast<double>(order + 1));
}

namespace detail {

inline cd base_fourier(const AtomicFejerMeasure& mu, long long k) {
    cd acc = mu.atom_weight;  // the atom at 1 contributes 1 to every coefficient
    for (const FejerComponent& c : mu.components) acc += c.weight * fejer_hat(c.order, k - c.shift);
    return acc;
}

}  // namespace detail

inline cd measure_fourier(const AtomicFejerMeasure& mu, long long k) {
    if (mu.conv_shift) {
        const long long n = *mu.conv_shift;
        return detail::base_fourier(mu, k - n) * detail::base_fourier(mu, k + n);
    }
    return detail::base_fourier(mu, k);
}

// Sum of absolute component masses (exact total variation for positive
// unmodulated structures); squared for convolution pairs.
inline double total_variation_bound(const AtomicFejerMeasure& mu) {
    double mass = std::fabs(mu.atom_weight);
    for (const FejerComponent& c : mu.components) mass += std::fabs(c.weight);
    return mu.conv_shift ? mass * mass : mass;
}

// Density of the continuous part at the point e^{2 pi i t} (atom excluded);
// only meaningful for base measures, used by quadrature cross-checks.
inline cd measure_density_continuous(const AtomicFejerMeasure& mu, double t_turns) {
    if (mu.conv_shift)
        throw std::invalid_argument("measure_density_continuous: convolution pair has no stored density");
    cd acc = 0.0;
    for (const FejerComponent& c : mu.components) {
        const double q1 = static_cast<double>(c.order + 1);
        const double s = std::sin(pi * t_turns);
        double kernel;
        if (std::fabs(s) < 1e-12) {
            kernel = q1;
        } else {
            const double num = std::sin(pi * q1 * t_turns);
            kernel = num * num / (q1 * s * s);
        }
        acc += c.weight * kernel * unit_from_turns(c.shift * t_turns);
    }
    return acc;
}

// Builds the measure with prescribed coefficients mu_hat(k) = f(|k|) for
// |k| <= n and total variation at most f(n)^2: base measure
// nu = sum_{k<n} (k+1) (m_k - 2 m_{k+1} + m_{k+2}) K_k + delta_1 with
// m_k = f(n-k) (k <= n), m_{n+1} = 1, convolved as (z^n nu) * (z^{-n} nu).
// f must be nondecreasing and discretely convex on {0..n} with f(0) = 1.
inline AtomicFejerMeasure convex_measure(const std::function<double(double)>& f, long long n) {
    if (n < 0) throw std::invalid_argument("convex_measure: n must be nonnegative");
    std::vector<double> fv(static_cast<std::size_t>(n) + 1);
    for (long long j = 0; j <= n; ++j) fv[static_cast<std::size_t>(j)] = f(static_cast<double>(j));
    if (std::fabs(fv[0] - 1.0) > 1e-9)
        throw std::invalid_argument("convex_measure: f(0) must equal 1");
    for (long long j = 0; j + 1 <= n; ++j) {
        if (fv[static_cast<std::size_t>(j + 1)] < fv[static_cast<std::size_t>(j)] - 1e-12)
            throw std::invalid_argument("convex_measure: f not nondecreasing at index " +
                                        std::to_string(j + 1));
    }
    for (long long j = 0; j + 2 <= n; ++j) {
        const double d2 = fv[static_cast<std::size_t>(j)] - 2.0 * fv[static_cast<std::size_t>(j + 1)] +
                          fv[static_cast<std::size_t>(j + 2)];
        if (d2 < -1e-12)
            throw std::invalid_argument("convex_measure: f not convex at index " + std::to_string(j));
    }
    // m_k = f(n-k) for k <= n, m_{n+1} = 1
    auto m = [&](long long k) -> double {
        return k <= n ? fv[static_cast<std::size_t>(n - k)] : 1.0;
    };
    AtomicFejerMeasure mu;
    mu.atom_weight = 1.0;
    mu.conv_shift = n;
    for (long long k = 0; k < n; ++k) {
        double w = static_cast<double>(k + 1) * (m(k) - 2.0 * m(k + 1) + m(k + 2));
        if (w < 0.0 && w >= -1e-12) w = 0.0;  // fp dust from the validated input
        if (w < 0.0)
            throw std::invalid_argument("convex_measure: negative component weight at order " +
                                        std::to_string(k));
        if (w > 0.0) mu.components.push_back({w, k, 0});
    }
    return mu;
}

}  // namespace qtorus
