#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "convergents.hpp"
#include "qpoly.hpp"
#include "theta.hpp"

namespace qtorus {

using Mat = Eigen::MatrixXcd;

// D = diag(w^k), w = e^{2 pi i a / b}, 0-indexed.
inline Mat clock_matrix(const Theta& th) {
    if (!th.is_rational()) throw std::invalid_argument("clock_matrix: theta must be rational");
    const long long b = th.den();
    Mat d = Mat::Zero(b, b);
    for (long long k = 0; k < b; ++k) d(k, k) = phase_pow(th, k);
    return d;
}

// S e_k = e_{k+1 mod b}, i.e. S_{k,l} = [l == k-1 mod b].
inline Mat shift_matrix(long long b) {
    Mat s = Mat::Zero(b, b);
    for (long long k = 0; k < b; ++k) s(k, ((k - 1) % b + b) % b) = 1.0;
    return s;
}

// max-entry norm of D S - w S D (zero in exact arithmetic)
inline double weyl_defect(const Theta& th) {
    const Mat d = clock_matrix(th);
    const Mat s = shift_matrix(th.den());
    return ((d * s - phase_pow(th, 1) * (s * d)).cwiseAbs()).maxCoeff();
}

namespace detail {

inline long long mod_nonneg(long long v, long long m) {
    long long r = v % m;
    return r < 0 ? r + m : r;
}

}  // namespace detail

// Matrix-valued Fourier coefficients of the model: pi(x)(z) = sum over the
// support of z1^m z2^n B_{m,n}, with B_{m,n} = x_hat(m,n) D^m S^n.
struct MatrixRep {
    long long a = 0;
    long long b = 1;
    std::map<Idx, Mat> coeff_matrices;

    Mat eval(double t1_turns, double t2_turns) const {
        Mat out = Mat::Zero(b, b);
        for (const auto& [p, B] : coeff_matrices) {
            const double t = std::fmod(p[0] * t1_turns + p[1] * t2_turns, 1.0);
            out += unit_from_turns(t) * B;
        }
        return out;
    }

    Mat eval_grid(long long j1, long long j2, long long N) const {
        Mat out = Mat::Zero(b, b);
        for (const auto& [p, B] : coeff_matrices) {
            const long long r1 =
                detail::mod_nonneg(static_cast<long long>(static_cast<__int128>(j1) * p[0] % N), N);
            const long long r2 =
                detail::mod_nonneg(static_cast<long long>(static_cast<__int128>(j2) * p[1] % N), N);
            out += unit_from_turns(static_cast<double>(r1) / N + static_cast<double>(r2) / N) * B;
        }
        return out;
    }
};

namespace detail {

// Adds c * z-phase * D^m S^n to out, where the scalar phase is supplied in
// turns.  D^m S^n has a single nonzero per row: (D^m S^n)_{k, k-n mod b} =
// w^{m k}; the exponent is reduced with exact integer arithmetic so the
// construction stays valid for exponents far beyond the matrix size.
inline void accumulate_monomial(Mat& out, const Theta& th, long long m, long long n, cd c,
                                double scalar_turns) {
    const long long b = th.den();
    const cd zc = c * unit_from_turns(scalar_turns);
    const long long noff = mod_nonneg(n, b);
    for (long long k = 0; k < b; ++k) {
        const long long col = (k - noff + b) % b;
        out(k, col) += zc * unit_from_turns(turns_times(th, static_cast<__int128>(m) * k));
    }
}

inline std::vector<double> singular_values(const Mat& a) {
    std::vector<double> sv(a.rows());
    if (a.rows() <= 24) {
        Eigen::JacobiSVD<Mat> svd(a);
        for (Eigen::Index i = 0; i < a.rows(); ++i) sv[i] = svd.singularValues()(i);
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a);
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            sv[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    }
    return sv;
}

}  // namespace detail

// pi(x) evaluated at the scalar point (e^{2 pi i t1}, e^{2 pi i t2}), t in turns.
// Intended for moderate exponents; grid evaluation below is exact for any size.
inline Mat rep(const QPoly& x, double t1_turns, double t2_turns) {
    if (!x.theta().is_rational()) throw std::invalid_argument("rep: theta must be rational");
    const long long b = x.theta().den();
    Mat out = Mat::Zero(b, b);
    for (const auto& [p, c] : x.coeffs()) {
        double t = std::fmod(p[0] * t1_turns + p[1] * t2_turns, 1.0);
        detail::accumulate_monomial(out, x.theta(), p[0], p[1], c, t);
    }
    return out;
}

// pi(x) at the grid point (z1, z2) = (e^{2 pi i j1/N}, e^{2 pi i j2/N}).
// z1^m is reduced as (j1 m mod N)/N in integers, so huge exponents keep
// exact phases.
inline Mat rep_grid(const QPoly& x, long long j1, long long j2, long long N) {
    if (!x.theta().is_rational()) throw std::invalid_argument("rep_grid: theta must be rational");
    const long long b = x.theta().den();
    Mat out = Mat::Zero(b, b);
    for (const auto& [p, c] : x.coeffs()) {
        const long long r1 = detail::mod_nonneg(
            static_cast<long long>(static_cast<__int128>(j1) * p[0] % N), N);
        const long long r2 = detail::mod_nonneg(
            static_cast<long long>(static_cast<__int128>(j2) * p[1] % N), N);
        detail::accumulate_monomial(out, x.theta(), p[0], p[1], c,
                                    static_cast<double>(r1) / N + static_cast<double>(r2) / N);
    }
    return out;
}

// Collects the matrix-valued Fourier coefficients x_hat(m,n) D^m S^n.
inline MatrixRep represent(const QPoly& x) {
    if (!x.theta().is_rational()) throw std::invalid_argument("represent: theta must be rational");
    MatrixRep r;
    r.a = x.theta().num();
    r.b = x.theta().den();
    for (const auto& [p, c] : x.coeffs()) {
        Mat B = Mat::Zero(r.b, r.b);
        detail::accumulate_monomial(B, x.theta(), p[0], p[1], c, 0.0);
        r.coeff_matrices[p] = B;
    }
    return r;
}

// Reads a Fourier coefficient back out of the model:
//   (1/N^2) sum_j e^{-2 pi i (m j1 + n j2)/N} (1/b) Tr((D^m S^n)^* pi(x)(z_j)).
// Exact (up to roundoff) once N >= 2*degree(x) + 1.
inline cd model_fourier_coeff(const QPoly& x, long long m, long long n, long long N) {
    const Theta& th = x.theta();
    const long long b = th.den();
    QPoly probe = QPoly::monomial(th, m, n);
    cd acc = 0.0;
    for (long long j1 = 0; j1 < N; ++j1) {
        for (long long j2 = 0; j2 < N; ++j2) {
            const Mat pm = rep_grid(probe, j1, j2, N);
            const Mat px = rep_grid(x, j1, j2, N);
            acc += (pm.adjoint() * px).trace();
        }
    }
    return acc / static_cast<double>(N * N * b);
}

// Transcript of an optimization run, attached to estimates produced by the
// multiplier lower-bound search.
struct OptTranscript {
    unsigned long long seed = 0;
    int restarts = 0;
    long long iterations = 0;
    int discarded = 0;
};

struct NormEstimate {
    double value = 0.0;
    std::string kind;            // "exact" | "approximate" | "lower"
    long long grid = 0;          // finest grid order used
    double delta = 0.0;          // change under the final refinement step
    std::vector<double> ladder;  // per-rung values for ladder-based estimates
    // optional optimizer payload: witness rows (m, n, re, im), or
    // (m, n, row, col, re, im) for matrix-coefficient witnesses
    std::vector<std::vector<double>> witness;
    OptTranscript transcript;
    bool has_transcript = false;
};

namespace detail {

inline double lp_on_grid(const QPoly& x, double p, long long N) {
    const long long b = x.theta().den();
    double acc = 0.0;
    for (long long j1 = 0; j1 < N; ++j1) {
        for (long long j2 = 0; j2 < N; ++j2) {
            const auto sv = singular_values(rep_grid(x, j1, j2, N));
            double cell = 0.0;
            for (double s : sv) cell += std::pow(s, p);
            acc += cell / b;
        }
    }
    return std::pow(acc / static_cast<double>(N * N), 1.0 / p);
}

inline double sup_on_grid(const QPoly& x, long long N, double& t1_best, double& t2_best) {
    double best = -1.0;
    for (long long j1 = 0; j1 < N; ++j1) {
        for (long long j2 = 0; j2 < N; ++j2) {
            const auto sv = singular_values(rep_grid(x, j1, j2, N));
            double top = 0.0;
            for (double s : sv) top = std::max(top, s);
            if (top > best) {
                best = top;
                t1_best = static_cast<double>(j1) / N;
                t2_best = static_cast<double>(j2) / N;
            }
        }
    }
    return best;
}

inline double sigma_max_at(const QPoly& x, double t1, double t2) {
    const auto sv = singular_values(rep(x, t1, t2));
    double top = 0.0;
    for (double s : sv) top = std::max(top, s);
    return top;
}

}  // namespace detail

// sqrt(sum |c|^2): the L2 norm straight from the coefficients.
inline double l2_norm(const QPoly& x) {
    double acc = 0.0;
    for (const auto& [p, c] : x.coeffs()) acc += std::norm(c);
    return std::sqrt(acc);
}

// L_p norm of the b x b matrix model, integrated over the scalar torus by an
// N x N product grid.  The quadrature is exact for p = 2 when N >= 2d+1 and
// for p = 4 when N >= 4d+1 (d = degree); the doubled-grid difference is
// reported in delta as the error proxy.
inline NormEstimate lp_norm(const QPoly& x, double p, long long grid = 0) {
    if (!x.theta().is_rational()) throw std::invalid_argument("lp_norm: theta must be rational");
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: requires p >= 1");
    const long long d = x.degree();
    if (grid > 0 && grid < 2 * d + 1)
        throw std::invalid_argument("lp_norm: grid must be at least 2*degree+1");
    const long long N = grid > 0 ? grid : std::max<long long>(4 * d + 1, 9);
    NormEstimate e;
    e.value = detail::lp_on_grid(x, p, N);
    e.kind = "approximate";
    e.grid = N;
    e.delta = std::fabs(detail::lp_on_grid(x, p, 2 * N) - e.value);
    return e;
}

// Largest singular value over grid points, then refine_steps rounds of local
// search on a shrinking 3x3 stencil around the argmax.  Every evaluation is a
// true point value, so the result is a certified lower bound for the operator
// norm ("lower"); delta reports the gain from refinement over the plain grid.
inline NormEstimate op_norm(const QPoly& x, long long grid = 0, int refine_steps = 30) {
    if (!x.theta().is_rational()) throw std::invalid_argument("op_norm: theta must be rational");
    const long long d = x.degree();
    const long long N = grid > 0 ? grid : std::max<long long>(4 * d + 1, 9);
    double t1 = 0.0, t2 = 0.0;
    const double coarse = detail::sup_on_grid(x, N, t1, t2);
    double best = coarse;
    // off-lattice scalar phases lose precision once m * t overflows the
    // double mantissa, so local refinement is only trusted at sane degrees
    if (d <= (1LL << 40)) {
        double radius = 1.0 / N;
        for (int step = 0; step < refine_steps; ++step) {
            double bt1 = t1, bt2 = t2;
            for (int i = -1; i <= 1; ++i) {
                for (int j = -1; j <= 1; ++j) {
                    if (i == 0 && j == 0) continue;
                    const double v = detail::sigma_max_at(x, t1 + i * radius, t2 + j * radius);
                    if (v > best) {
                        best = v;
                        bt1 = t1 + i * radius;
                        bt2 = t2 + j * radius;
                    }
                }
            }
            t1 = bt1;
            t2 = bt2;
            radius *= 0.5;
        }
    }
    NormEstimate e;
    e.value = best;
    e.kind = "lower";
    e.grid = N;
    e.delta = best - coarse;
    return e;
}

// Norm at irrational theta via a ladder of rational approximants: the same
// coefficients are re-tagged with each approximant and measured in its model.
// value = last rung, delta = gap to the previous rung, ladder = all rungs.
inline NormEstimate irrational_norm(const QPoly& x, double p,
                                    const std::vector<Fraction>& approximants) {
    if (approximants.empty())
        throw std::invalid_argument("irrational_norm: need at least one approximant");
    NormEstimate e;
    for (const Fraction& f : approximants) {
        QPoly y(Theta::rational(f.num, f.den));
        for (const auto& [mn, c] : x.coeffs()) y.set_coeff(mn[0], mn[1], c);
        const NormEstimate rung =
            std::isinf(p) ? op_norm(y) : lp_norm(y, p);
        e.ladder.push_back(rung.value);
        e.grid = rung.grid;
    }
    e.value = e.ladder.back();
    const std::size_t n = e.ladder.size();
    e.delta = n >= 2 ? std::fabs(e.ladder[n - 1] - e.ladder[n - 2]) : 0.0;
    e.kind = "approximate";
    return e;
}

// Convenience overload: ladder = first ladder_len continued-fraction
// convergents of theta.
inline NormEstimate irrational_norm(const QPoly& x, double theta, double p, int ladder_len) {
    std::vector<Fraction> ladder;
    for (const Convergent& c : cf_convergents(theta, ladder_len))
        ladder.push_back(Fraction::reduced(c.p, c.q));
    return irrational_norm(x, p, ladder);
}

}  // namespace qtorus
