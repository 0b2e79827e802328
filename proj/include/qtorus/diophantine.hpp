#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "convergents.hpp"
#include "rng.hpp"
#include "theta.hpp"

namespace qtorus {

using BigInt = boost::multiprecision::cpp_int;
// Wide enough that frac(theta * k * l) keeps ~170 guard bits even when the
// integer part of the product reaches ~2^160.
using BigFloat = boost::multiprecision::cpp_bin_float_100;

// Named irrational angles plus "a/b" and decimal literals, at full precision.
inline BigFloat theta_value(const std::string& name) {
    if (name == "sqrt2-1") return boost::multiprecision::sqrt(BigFloat(2)) - 1;
    if (name == "golden") return (boost::multiprecision::sqrt(BigFloat(5)) - 1) / 2;
    const auto slash = name.find('/');
    if (slash != std::string::npos) {
        const BigFloat num(name.substr(0, slash));
        const BigFloat den(name.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("theta_value: zero denominator");
        return num / den;
    }
    return BigFloat(name);
}

class BudgetError : public std::runtime_error {
  public:
    BudgetError(const std::string& what, long long budget, long long best_k, double best_residual)
        : std::runtime_error(what + " (budget " + std::to_string(budget) + " exhausted; best k " +
                             std::to_string(best_k) + " with residual " +
                             std::to_string(best_residual) + ")"),
          budget(budget),
          best_k(best_k),
          best_residual(best_residual) {}
    long long budget;
    long long best_k;
    double best_residual;
};

namespace dio_detail {

inline double frac(double x) {
    double f = std::fmod(x, 1.0);
    if (f < 0.0) f += 1.0;
    return f;
}

// |e^{2 pi i x} - 1|
inline double chord(double x) { return 2.0 * std::fabs(std::sin(pi * x)); }

inline BigFloat big_frac(const BigFloat& x) {
    BigFloat f = x - boost::multiprecision::floor(x);
    if (f < 0) f += 1;
    return f;
}

// distance from x to the nearest integer
inline BigFloat big_dist(const BigFloat& x) {
    const BigFloat f = big_frac(x);
    return f <= BigFloat(0.5) ? f : 1 - f;
}

}  // namespace dio_detail

// Smallest k >= 1 with |e^{2 pi i k theta} - 1| < eps.  Convergent
// denominators locate a candidate, a brute scan below it finds the true
// minimum, and the winner is re-verified before returning.
inline long long find_kn(double theta, double eps, long long budget = 1000000) {
    if (!(eps > 0.0)) throw std::invalid_argument("find_kn: eps must be positive");
    using dio_detail::chord;
    using dio_detail::frac;
    long long ceiling = budget + 1;  // exclusive upper end of the brute scan
    for (const Convergent& c : cf_convergents(theta, 64)) {
        if (c.q > budget) break;
        if (chord(frac(theta * static_cast<double>(c.q))) < eps) {
            ceiling = c.q;  // candidate; anything smaller must beat it
            break;
        }
    }
    long long best_k = 0;
    double best_res = 4.0;
    for (long long k = 1; k < ceiling && k <= budget; ++k) {
        const double r = chord(frac(theta * static_cast<double>(k)));
        if (r < best_res) {
            best_res = r;
            best_k = k;
        }
        if (r < eps) return k;
    }
    if (ceiling <= budget) return ceiling;
    throw BudgetError("find_kn", budget, best_k, best_res);
}

// Smallest k <= budget with |e^{2 pi i k gamma} - 1| < eps and
// |e^{2 pi i k theta} - e^{2 pi i theta}| < eps, both re-verified.
inline long long find_pair_equidist(double theta, double gamma, double eps,
                                    long long budget = 1000000) {
    if (!(eps > 0.0)) throw std::invalid_argument("find_pair_equidist: eps must be positive");
    using dio_detail::chord;
    using dio_detail::frac;
    long long best_k = 0;
    double best_res = 8.0;
    for (long long k = 1; k <= budget; ++k) {
        const double kd = static_cast<double>(k);
        const double r1 = chord(frac(gamma * kd));
        const double r2 = chord(frac(theta * (kd - 1.0)));
        const double r = std::max(r1, r2);
        if (r < best_res) {
            best_res = r;
            best_k = k;
        }
        if (r1 < eps && r2 < eps) return k;
    }
    throw BudgetError("find_pair_equidist", budget, best_k, best_res);
}

struct EmbRelation {
    long long n = 0;
    long long k = 0;
    long long l = 0;
    double defect_k = 0.0;  // |e^{2 pi i k theta} - 1|
    double defect_l = 0.0;  // |e^{2 pi i k N l theta} - e^{2 pi i gamma}|
};

// For n = 1..count: k_n approximately commutes (defect < 1/n) and l_n steers
// the conjugation phase of U^{k_n} on V^{N l_n} next to e^{2 pi i gamma}.
inline std::vector<EmbRelation> emb_sequences(double theta, double gamma, long long N, int count,
                                              long long budget = 1000000) {
    if (N < 1) throw std::invalid_argument("emb_sequences: period N must be >= 1");
    if (count < 1) throw std::invalid_argument("emb_sequences: count must be >= 1");
    using dio_detail::chord;
    using dio_detail::frac;
    std::vector<EmbRelation> out;
    for (int n = 1; n <= count; ++n) {
        const double eps = 1.0 / static_cast<double>(n);
        EmbRelation rel;
        rel.n = n;
        rel.k = find_kn(theta, eps, budget);
        rel.defect_k = chord(frac(theta * static_cast<double>(rel.k)));
        const double step = static_cast<double>(rel.k) * static_cast<double>(N) * theta;
        long long best_l = 0;
        double best_res = 4.0;
        for (long long l = 1; l <= budget; ++l) {
            const double r = chord(frac(step * static_cast<double>(l) - gamma));
            if (r < best_res) {
                best_res = r;
                best_l = l;
            }
            if (r < eps) {
                rel.l = l;
                rel.defect_l = r;
                break;
            }
        }
        if (rel.l == 0) throw BudgetError("emb_sequences: l_" + std::to_string(n), budget, best_l, best_res);
        if (!(rel.defect_k < eps) || !(rel.defect_l < eps))
            throw std::logic_error("emb_sequences: post-verification failed");
        out.push_back(rel);
    }
    return out;
}

struct SidonPair {
    std::vector<BigInt> k;  // all odd
    std::vector<BigInt> l;  // strictly increasing
    long long horizon = 0;  // pair invariants verified for all j < n <= horizon
};

namespace dio_detail {

struct BigConvergent {
    BigInt p, q;
    BigFloat s;  // q * theta - p, signed
};

// Continued-fraction convergents with exact big-integer numerators and
// denominators.  With q_min > 0 the expansion runs until q > q_min and
// (when s_stop > 0) |s| < s_stop, then takes two extra terms so callers can
// rely on the final few residuals all being below the stop threshold.  With
// q_min == 0 it returns exactly max_terms terms.  Terms are dropped once the
// residual stops shrinking (working precision exhausted).
inline std::vector<BigConvergent> big_cf(const BigFloat& theta, const BigFloat& s_stop,
                                         const BigInt& q_min, int max_terms = 400) {
    std::vector<BigConvergent> out;
    BigFloat x = big_frac(theta);
    BigInt p_prev = 1, q_prev = 0, p_cur = 0, q_cur = 1;  // p_cur/q_cur = 0/1
    BigFloat s_abs_prev(2);
    int extra = -1;
    for (int i = 0; i < max_terms; ++i) {
        if (x == 0) break;
        x = 1 / x;
        const BigFloat fl = boost::multiprecision::floor(x);
        const BigInt a = fl.convert_to<BigInt>();
        x -= fl;
        const BigInt p_next = a * p_cur + p_prev;
        const BigInt q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        const BigFloat s = BigFloat(q_cur) * theta - BigFloat(p_cur);
        const BigFloat s_abs = boost::multiprecision::abs(s);
        if (s_abs >= s_abs_prev) break;  // precision wall
        s_abs_prev = s_abs;
        out.push_back({p_cur, q_cur, s});
        if (extra >= 0 && --extra < 0) break;
        if (extra < 0 && q_min > 0 && q_cur > q_min && (s_stop <= 0 || s_abs < s_stop)) extra = 2;
    }
    return out;
}

// Ostrowski-style greedy solution of || theta * l - 1/2 || < u with l > l_min:
// descend the ladder s_j = q_j theta - p_j (alternating signs), subtracting
// sign-matched multiples from the residual 1/2.
inline BigInt inhomogeneous_half(const BigFloat& theta, const BigFloat& u, const BigInt& l_min) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        const BigFloat tight = u / (1 << (attempt + 1));  // u/2, u/4, ...
        const auto cf = big_cf(theta, tight / 4, l_min * 2 + 1);
        if (cf.empty()) return BigInt(0);
        BigFloat r(0.5);
        BigInt l(0);
        for (const auto& c : cf) {
            if (r == 0) break;
            if ((r > 0) == (c.s > 0)) {
                const BigFloat ratio = r / c.s;  // >= 0 by the sign match
                const BigInt m = boost::multiprecision::floor(ratio).convert_to<BigInt>();
                l += m * c.q;
                r -= BigFloat(m) * c.s;
            }
        }
        // raise above l_min with the deepest denominator (costs |s_last| each)
        const auto& last = cf.back();
        while (l <= l_min) l += last.q;
        if (l > 0 && big_dist(theta * BigFloat(l) - BigFloat(0.5)) < u) return l;
    }
    return BigInt(0);
}

// smallest odd convergent denominator q > k_min with ||q theta|| < v
inline BigInt odd_denominator(const BigFloat& theta, const BigFloat& v, const BigInt& k_min) {
    const auto cf = big_cf(theta, v / 8, k_min, 500);
    for (const auto& c : cf) {
        if (c.q <= k_min) continue;
        if (c.q % 2 == 0) continue;
        if (boost::multiprecision::abs(c.s) < v) return c.q;
    }
    // an even denominator q_j with a small enough s_j has odd neighbors
    // q_{j-1}, q_{j+1}; the loop above already covered them via the cf list,
    // so reaching here means the expansion was too short
    return BigInt(0);
}

}  // namespace dio_detail

// Inductive construction of nearly anticommuting monomial exponents:
// e_n = U^{k_n} V^{l_n} with, for all j < n,
//   |e^{2 pi i theta k_j l_n} + 1| < 2^{-n}   (theta * l_n lands near 1/2 mod 1,
//                                              odd k_j preserves the half-turn)
//   |e^{2 pi i theta k_n l_j} - 1| < 2^{-n}   (||theta * k_n|| is tiny).
// Filters are one triangle-inequality step stronger than the invariants, and
// every pair is re-verified in big-float arithmetic before returning.
inline SidonPair sidon_sequences(const BigFloat& theta, int N) {
    if (N < 1) throw std::invalid_argument("sidon_sequences: horizon must be >= 1");
    using namespace dio_detail;
    SidonPair pair;
    pair.horizon = N;
    pair.k.push_back(BigInt(1));
    pair.l.push_back(BigInt(1));
    const BigFloat two_pi_big = 2 * boost::multiprecision::atan(BigFloat(1)) * 4;
    for (int n = 2; n <= N; ++n) {
        const BigFloat pow2 = boost::multiprecision::pow(BigFloat(2), -n);
        const BigFloat u = pow2 / (two_pi_big * BigFloat(pair.k.back()));
        const BigInt l = inhomogeneous_half(theta, u, pair.l.back());
        if (l == 0)
            throw BudgetError("sidon_sequences: l_" + std::to_string(n), 400, 0, 1.0);
        const BigFloat v = pow2 / (two_pi_big * BigFloat(pair.l.back()));
        const BigInt k = odd_denominator(theta, v, pair.k.back());
        if (k == 0)
            throw BudgetError("sidon_sequences: k_" + std::to_string(n), 500, 0, 1.0);
        pair.l.push_back(l);
        pair.k.push_back(k);
    }
    for (int n = 2; n <= N; ++n) {
        const double bound = std::pow(2.0, -n);
        for (int j = 1; j < n; ++j) {
            // reduce mod 1 in big-float arithmetic FIRST; the integer part of
            // theta*k*l can reach ~2^156 and would wipe out double precision
            const double fa =
                big_frac(theta * BigFloat(pair.k[static_cast<std::size_t>(j - 1)] *
                                          pair.l[static_cast<std::size_t>(n - 1)]))
                    .convert_to<double>();
            const double fc =
                big_frac(theta * BigFloat(pair.k[static_cast<std::size_t>(n - 1)] *
                                          pair.l[static_cast<std::size_t>(j - 1)]))
                    .convert_to<double>();
            const double anti = 2.0 * std::fabs(std::cos(pi * fa));
            const double comm = 2.0 * std::fabs(std::sin(pi * fc));
            if (!(anti < bound) || !(comm < bound))
                throw std::logic_error("sidon_sequences: invariant verification failed at (" +
                                       std::to_string(j) + "," + std::to_string(n) + ")");
        }
    }
    return pair;
}

// || e_n e_j + e_j e_n || = 2 |cos(pi theta (l_n k_j - l_j k_n))|; the adjoint
// variant e_n e_j* + e_j* e_n has the same modulus.  1-indexed j < n.
inline double anticommutator_norm(const BigFloat& theta, const SidonPair& pair, int j, int n) {
    if (j < 1 || n < 1 || j > pair.horizon || n > pair.horizon)
        throw std::invalid_argument("anticommutator_norm: index out of range");
    const BigInt diff = pair.l[static_cast<std::size_t>(n - 1)] *
                            pair.k[static_cast<std::size_t>(j - 1)] -
                        pair.l[static_cast<std::size_t>(j - 1)] *
                            pair.k[static_cast<std::size_t>(n - 1)];
    // reduce mod 1 at full precision before leaving big-float arithmetic
    const double f = dio_detail::big_frac(theta * BigFloat(diff)).convert_to<double>();
    return 2.0 * std::fabs(std::cos(pi * f));
}

struct RungValue {
    BigInt p, q;     // the rational angle p/q of this rung
    double value;    // exact anticommutator norm at p/q
};

// The same anticommutator norm computed through the rational matrix model:
// at theta_r = p/q the product collapses to one monomial whose operator norm
// is the coefficient modulus, evaluated with exact integer phase arithmetic.
// The ladder climbs convergents until the rung values stabilize.
inline std::vector<RungValue> anticommutator_ladder(const BigFloat& theta, const SidonPair& pair,
                                                    int j, int n, int rungs = 6) {
    if (j < 1 || n < 1 || j > pair.horizon || n > pair.horizon)
        throw std::invalid_argument("anticommutator_ladder: index out of range");
    using namespace dio_detail;
    const BigInt A = pair.l[static_cast<std::size_t>(n - 1)] * pair.k[static_cast<std::size_t>(j - 1)];
    const BigInt B = pair.l[static_cast<std::size_t>(j - 1)] * pair.k[static_cast<std::size_t>(n - 1)];
    // need |theta - p/q| * max(A,B) << 1: extend until q^2 > max(A,B) * 2^40
    const BigInt M = A > B ? A : B;
    BigInt q_min(1);
    q_min <<= 20;
    while (q_min * q_min < M * (BigInt(1) << 40)) q_min <<= 1;
    const auto cf = big_cf(theta, BigFloat(0), q_min, 600);
    if (static_cast<int>(cf.size()) < rungs)
        throw std::logic_error("anticommutator_ladder: continued fraction too short");
    std::vector<RungValue> out;
    for (int r = rungs; r >= 1; --r) {
        const auto& c = cf[cf.size() - static_cast<std::size_t>(r)];
        // turn of theta_r * E for E in {A, B}: ((p * (E mod q)) mod q) / q
        auto turn = [&](const BigInt& E) {
            BigInt t = (c.p * (E % c.q)) % c.q;
            if (t < 0) t += c.q;
            return BigFloat(t) / BigFloat(c.q);
        };
        const double t1 = turn(A).convert_to<double>();
        const double t2 = turn(B).convert_to<double>();
        const std::complex<double> sum =
            std::exp(std::complex<double>(0.0, -two_pi * t1)) +
            std::exp(std::complex<double>(0.0, -two_pi * t2));
        out.push_back({c.p, c.q, std::abs(sum)});
    }
    return out;
}

struct SpanReport {
    int trials = 0;
    int violations_l2 = 0;     // Parseval identity on the rung model
    int violations_bound = 0;  // anticommutator expansion vs the stated bound
    int violations_op = 0;     // empirical ||x||_inf <= 2 ||x||_2
    double worst_l2_gap = 0.0;
    double worst_bound_margin = 1e300;  // min of (B_spec - B_exact)
    double worst_op_ratio = 0.0;        // max of ||x||_inf / ||x||_2
    int ladder_depth = 0;
};

namespace dio_detail {

// power-iteration estimate of the largest singular value of
// x(z) = sum_j a_j z1^{kbar3_j} z2^{lbar3_j} D^{kbar_j} S^{lbar_j}  (q x q)
inline double rung_op_estimate(const std::vector<std::complex<double>>& coeff,
                               const std::vector<long long>& kbar,
                               const std::vector<long long>& lbar, long long p, long long q,
                               const std::vector<long long>& k3, const std::vector<long long>& l3,
                               std::mt19937_64& rng) {
    using cdl = std::complex<double>;
    const std::size_t terms = coeff.size();
    std::vector<cdl> v(static_cast<std::size_t>(q)), w(static_cast<std::size_t>(q)),
        tmp(static_cast<std::size_t>(q));
    auto apply = [&](const std::vector<cdl>& in, std::vector<cdl>& out,
                     const std::vector<cdl>& zc, bool adjoint) {
        std::fill(out.begin(), out.end(), cdl{0.0, 0.0});
        for (std::size_t t = 0; t < terms; ++t) {
            const long long a = kbar[t], b = lbar[t];
            for (long long i = 0; i < q; ++i) {
                if (!adjoint) {
                    // (D^a S^b in)_i = w^{a i} in_{i-b mod q}
                    const long long e = static_cast<long long>(
                        (static_cast<__int128>(a) * i % q * p) % q);
                    const long long src = ((i - b) % q + q) % q;
                    out[static_cast<std::size_t>(i)] +=
                        zc[t] * unit_from_turns(static_cast<double>(e) / static_cast<double>(q)) *
                        in[static_cast<std::size_t>(src)];
                } else {
                    // ((D^a S^b)^H in)_i = conj(w^{a(i+b)}) in_{i+b mod q}
                    const long long src = ((i + b) % q + q) % q;
                    const long long e = static_cast<long long>(
                        (static_cast<__int128>(a) * src % q * p) % q);
                    out[static_cast<std::size_t>(i)] +=
                        std::conj(zc[t] *
                                  unit_from_turns(static_cast<double>(e) / static_cast<double>(q))) *
                        in[static_cast<std::size_t>(src)];
                }
            }
        }
    };
    double best = 0.0;
    std::normal_distribution<double> g(0.0, 1.0);
    for (int z1 = 0; z1 < 3; ++z1) {
        for (int z2 = 0; z2 < 3; ++z2) {
            std::vector<cdl> zc(terms);
            for (std::size_t t = 0; t < terms; ++t)
                zc[t] = coeff[t] * unit_from_turns(static_cast<double>(
                                       ((z1 * (k3[t] % 3) + z2 * (l3[t] % 3)) % 3)) /
                                   3.0);
            for (auto& x : v) x = cdl{g(rng), g(rng)};
            double vn = 0.0;
            for (const auto& x : v) vn += std::norm(x);
            vn = std::sqrt(vn);
            if (!(vn > 0.0)) continue;
            for (auto& x : v) x /= vn;
            double sigma = 0.0;
            for (int it = 0; it < 30; ++it) {
                apply(v, tmp, zc, false);
                apply(tmp, w, zc, true);
                double nrm = 0.0;
                for (const auto& x : w) nrm += std::norm(x);
                nrm = std::sqrt(nrm);
                if (!(nrm > 0.0)) break;
                sigma = std::sqrt(nrm);  // ||A*A v|| with ||v|| = 1
                for (long long i = 0; i < q; ++i)
                    v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / nrm;
            }
            best = std::max(best, sigma);
        }
    }
    return best;
}

}  // namespace dio_detail

// Random-coefficient check of the span estimates for x = sum_j a_j e_{n+j}:
// (i) Parseval in the rung model, (ii) the exact anticommutator expansion
// against the stated bound, (iii) empirical operator norm <= 2 ||x||_2 on a
// ladder of rational angles.
inline SpanReport span_norm_check(const BigFloat& theta, const SidonPair& pair, int n, int Nspan,
                                  int trials, std::uint64_t seed = 1, int ladder_depth = 8) {
    if (n < 0 || Nspan < 1 || n + Nspan > pair.horizon)
        throw std::invalid_argument("span_norm_check: window exceeds the pair horizon");
    using namespace dio_detail;
    SpanReport rep;
    rep.trials = trials;
    rep.ladder_depth = ladder_depth;

    const auto cf = big_cf(theta, BigFloat(0), BigInt(0), ladder_depth);
    std::vector<std::pair<long long, long long>> rungs;  // (p, q) small enough to model
    for (const auto& c : cf)
        if (c.q <= BigInt(1000000)) rungs.push_back({c.p.convert_to<long long>(), c.q.convert_to<long long>()});

    // per-rung reduced exponents
    std::vector<std::vector<long long>> kbar(rungs.size()), lbar(rungs.size());
    std::vector<long long> k3(static_cast<std::size_t>(Nspan)), l3(static_cast<std::size_t>(Nspan));
    for (int t = 0; t < Nspan; ++t) {
        const BigInt& K = pair.k[static_cast<std::size_t>(n + t)];
        const BigInt& L = pair.l[static_cast<std::size_t>(n + t)];
        k3[static_cast<std::size_t>(t)] = (K % 3).convert_to<long long>();
        l3[static_cast<std::size_t>(t)] = (L % 3).convert_to<long long>();
        for (std::size_t r = 0; r < rungs.size(); ++r) {
            const long long q = rungs[r].second;
            kbar[r].push_back(((K % q).convert_to<long long>() + q) % q);
            lbar[r].push_back(((L % q).convert_to<long long>() + q) % q);
        }
    }

    // pairwise anticommutator norms at the true angle (1-indexed pair indices)
    std::vector<std::vector<double>> anti(static_cast<std::size_t>(Nspan),
                                          std::vector<double>(static_cast<std::size_t>(Nspan), 0.0));
    for (int i = 0; i < Nspan; ++i)
        for (int jj = i + 1; jj < Nspan; ++jj)
            anti[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)] =
                anticommutator_norm(theta, pair, n + i + 1, n + jj + 1);

    for (int trial = 0; trial < trials; ++trial) {
        auto rng = seeded_stream(seed, 1000 + static_cast<std::uint64_t>(trial));
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<std::complex<double>> a(static_cast<std::size_t>(Nspan));
        double l2 = 0.0, linf = 0.0;
        for (auto& x : a) {
            x = {g(rng), g(rng)};
            l2 += std::norm(x);
        }
        const double inv = 1.0 / std::sqrt(l2);
        for (auto& x : a) x *= inv;
        l2 = 0.0;
        for (const auto& x : a) {
            l2 += std::norm(x);
            linf = std::max(linf, std::abs(x));
        }

        // (ii) exact square expansion vs the anticommutator-corrected bound
        double b_exact = 2.0 * l2;
        for (int i = 0; i < Nspan; ++i)
            for (int jj = i + 1; jj < Nspan; ++jj)
                b_exact += 2.0 * std::abs(a[static_cast<std::size_t>(i)]) *
                           std::abs(a[static_cast<std::size_t>(jj)]) *
                           anti[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)];
        const double b_spec =
            2.0 * l2 + static_cast<double>(Nspan) * (Nspan - 1) * std::pow(2.0, 1 - n) * linf * linf;
        rep.worst_bound_margin = std::min(rep.worst_bound_margin, b_spec - b_exact);
        if (b_exact > b_spec + 1e-9) ++rep.violations_bound;

        for (std::size_t r = 0; r < rungs.size(); ++r) {
            const auto [p, q] = rungs[r];
            // (i) Parseval on the rung model needs alias-free exponents
            bool collision = false;
            for (int i = 0; i < Nspan && !collision; ++i)
                for (int jj = i + 1; jj < Nspan; ++jj)
                    if (kbar[r][static_cast<std::size_t>(i)] == kbar[r][static_cast<std::size_t>(jj)] &&
                        lbar[r][static_cast<std::size_t>(i)] == lbar[r][static_cast<std::size_t>(jj)] &&
                        k3[static_cast<std::size_t>(i)] == k3[static_cast<std::size_t>(jj)] &&
                        l3[static_cast<std::size_t>(i)] == l3[static_cast<std::size_t>(jj)]) {
                        collision = true;
                        break;
                    }
            if (!collision) {
                double parseval = 0.0;  // average over the 3x3 z-grid of tr(x*x)/q
                for (int z1 = 0; z1 < 3; ++z1) {
                    for (int z2 = 0; z2 < 3; ++z2) {
                        // tr((D^a S^b)^* D^c S^e) / q = [a==c][b==e]; cross terms
                        // with matching (kbar,lbar) keep their z-phase difference
                        for (int i = 0; i < Nspan; ++i) {
                            for (int jj = 0; jj < Nspan; ++jj) {
                                if (kbar[r][static_cast<std::size_t>(i)] !=
                                        kbar[r][static_cast<std::size_t>(jj)] ||
                                    lbar[r][static_cast<std::size_t>(i)] !=
                                        lbar[r][static_cast<std::size_t>(jj)])
                                    continue;
                                const long long dz =
                                    (((z1 * (k3[static_cast<std::size_t>(jj)] -
                                             k3[static_cast<std::size_t>(i)]) +
                                       z2 * (l3[static_cast<std::size_t>(jj)] -
                                             l3[static_cast<std::size_t>(i)])) %
                                      3) +
                                     3) %
                                    3;
                                const std::complex<double> ph =
                                    unit_from_turns(static_cast<double>(dz) / 3.0);
                                parseval += (std::conj(a[static_cast<std::size_t>(i)]) *
                                             a[static_cast<std::size_t>(jj)] * ph)
                                                .real() /
                                            9.0;
                            }
                        }
                    }
                }
                const double gap = std::fabs(parseval - l2);
                rep.worst_l2_gap = std::max(rep.worst_l2_gap, gap);
                if (gap > 1e-9) ++rep.violations_l2;
            }
            // (iii) empirical operator norm at this rung
            const double op = rung_op_estimate(a, kbar[r], lbar[r], p, q, k3, l3, rng);
            rep.worst_op_ratio = std::max(rep.worst_op_ratio, op / std::sqrt(l2));
            if (op > 2.0 * std::sqrt(l2) + 1e-9) ++rep.violations_op;
        }
    }
    return rep;
}

}  // namespace qtorus
