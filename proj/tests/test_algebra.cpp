#include <doctest.h>

#include <complex>
#include <random>

#include "qtorus/matrix_model.hpp"
#include "qtorus/qpoly.hpp"
#include "qtorus/rng.hpp"

using namespace qtorus;

namespace {

QPoly random_poly(Theta th, long long d, int terms, std::uint64_t seed) {
    auto rng = seeded_stream(seed, 77);
    std::uniform_int_distribution<long long> e(-d, d);
    std::normal_distribution<double> g(0.0, 1.0);
    QPoly x(th);
    for (int t = 0; t < terms; ++t) x.add_coeff(e(rng), e(rng), cd{g(rng), g(rng)});
    return x;
}

double coeff_distance(const QPoly& x, const QPoly& y) {
    double worst = 0.0;
    for (const auto& [p, c] : x.coeffs()) worst = std::max(worst, std::abs(c - y.coeff(p[0], p[1])));
    for (const auto& [p, c] : y.coeffs()) worst = std::max(worst, std::abs(c - x.coeff(p[0], p[1])));
    return worst;
}

}  // namespace

TEST_CASE("generator relation VU = e^{-2 pi i theta} UV") {
    for (auto th : {Theta::rational(1, 3), Theta::rational(2, 7), Theta::rational(1, 2)}) {
        const QPoly U = QPoly::monomial(th, 1, 0);
        const QPoly V = QPoly::monomial(th, 0, 1);
        const cd uv = mul(U, V).coeff(1, 1);
        const cd vu = mul(V, U).coeff(1, 1);
        CHECK(std::abs(uv - cd{1.0, 0.0}) == 0.0);
        CHECK(std::abs(vu - phase_pow(th, -1) * uv) < 1e-15);
    }
}

TEST_CASE("monomials are unitary: x x* = 1") {
    const Theta th = Theta::rational(3, 8);
    for (long long m = -4; m <= 4; m += 2) {
        for (long long n = -3; n <= 3; n += 3) {
            const QPoly x = QPoly::monomial(th, m, n);
            const QPoly prod = mul(x, adjoint(x));
            CHECK(prod.coeffs().size() == 1);
            CHECK(std::abs(prod.coeff(0, 0) - cd{1.0, 0.0}) < 1e-15);
        }
    }
}

TEST_CASE("product is associative") {
    const Theta th = Theta::rational(2, 7);
    const QPoly x = random_poly(th, 3, 6, 11);
    const QPoly y = random_poly(th, 3, 6, 12);
    const QPoly z = random_poly(th, 3, 6, 13);
    CHECK(coeff_distance(mul(mul(x, y), z), mul(x, mul(y, z))) < 1e-12);
}

TEST_CASE("adjoint is an involutive antihomomorphism") {
    const Theta th = Theta::rational(3, 5);
    const QPoly x = random_poly(th, 3, 6, 21);
    const QPoly y = random_poly(th, 3, 6, 22);
    CHECK(coeff_distance(adjoint(mul(x, y)), mul(adjoint(y), adjoint(x))) < 1e-12);
    CHECK(coeff_distance(adjoint(adjoint(x)), x) < 1e-15);
}

TEST_CASE("trace is tracial and positive") {
    const Theta th = Theta::rational(4, 9);
    const QPoly x = random_poly(th, 3, 7, 31);
    const QPoly y = random_poly(th, 3, 7, 32);
    CHECK(std::abs(trace(mul(x, y)) - trace(mul(y, x))) < 1e-12);
    double parseval = 0.0;
    for (const auto& [p, c] : x.coeffs()) parseval += std::norm(c);
    CHECK(std::abs(trace(mul(adjoint(x), x)) - cd{parseval, 0.0}) < 1e-12);
}

TEST_CASE("theta = 0 degenerates to commutative convolution") {
    const Theta th;  // 0/1
    const QPoly x = random_poly(th, 3, 6, 41);
    const QPoly y = random_poly(th, 3, 6, 42);
    QPoly conv(th);
    for (const auto& [p, cx] : x.coeffs())
        for (const auto& [q, cy] : y.coeffs()) conv.add_coeff(p[0] + q[0], p[1] + q[1], cx * cy);
    CHECK(coeff_distance(mul(x, y), conv) < 1e-13);
    CHECK(coeff_distance(mul(x, y), mul(y, x)) < 1e-13);
}

TEST_CASE("representation is multiplicative and *-preserving on the grid") {
    for (long long b = 1; b <= 8; ++b) {
        const Theta th = Theta::rational(b > 2 ? b - 1 : 1, b);
        const QPoly x = random_poly(th, 3, 6, 50 + static_cast<std::uint64_t>(b));
        const QPoly y = random_poly(th, 3, 6, 60 + static_cast<std::uint64_t>(b));
        const QPoly xy = mul(x, y);
        const long long N = 2 * xy.degree() + 1;
        double worst = 0.0, worst_adj = 0.0;
        for (long long j1 = 0; j1 < N; j1 += 3) {
            for (long long j2 = 0; j2 < N; j2 += 3) {
                const Mat px = rep_grid(x, j1, j2, N);
                const Mat py = rep_grid(y, j1, j2, N);
                worst = std::max(worst, (rep_grid(xy, j1, j2, N) - px * py).cwiseAbs().maxCoeff());
                worst_adj = std::max(
                    worst_adj,
                    (rep_grid(adjoint(x), j1, j2, N) - Mat(px.adjoint())).cwiseAbs().maxCoeff());
            }
        }
        CHECK(worst < 1e-12);
        CHECK(worst_adj < 1e-12);
    }
}

TEST_CASE("model trace average recovers the identity coefficient") {
    const Theta th = Theta::rational(3, 7);
    const QPoly x = random_poly(th, 3, 8, 71);
    const long long N = 2 * x.degree() + 1;
    cd acc = 0.0;
    for (long long j1 = 0; j1 < N; ++j1)
        for (long long j2 = 0; j2 < N; ++j2) acc += rep_grid(x, j1, j2, N).trace();
    acc /= static_cast<double>(N * N * th.den());
    CHECK(std::abs(acc - trace(x)) < 1e-12);
}

TEST_CASE("mixing operands from different tori is rejected") {
    const QPoly x = QPoly::monomial(Theta::rational(1, 3), 1, 0);
    const QPoly y = QPoly::monomial(Theta::rational(1, 4), 0, 1);
    CHECK_THROWS_AS(mul(x, y), std::invalid_argument);
    CHECK_THROWS_AS(x + y, std::invalid_argument);
}

TEST_CASE("tensor shift checks angle compatibility and lands on the diagonal") {
    const QPoly x = random_poly(Theta::rational(5, 12), 2, 5, 81);
    const TensorPoly t = tensor_shift(x, Theta::rational(1, 4), Theta::rational(1, 6));
    CHECK(t.coeffs.size() == x.coeffs().size());
    for (const auto& [e, c] : t.coeffs) {
        CHECK(e[0] == e[2]);
        CHECK(e[1] == e[3]);
        CHECK(std::abs(c - x.coeff(e[0], e[1])) == 0.0);
    }
    CHECK_THROWS_AS(tensor_shift(x, Theta::rational(1, 4), Theta::rational(1, 5)),
                    std::invalid_argument);
    const QPoly z = random_poly(Theta::real(0.3), 2, 4, 82);
    CHECK_NOTHROW(tensor_shift(z, Theta::real(0.1), Theta::real(0.2)));
}
