#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qtorus/cyclic.hpp"
#include "qtorus/rng.hpp"

using namespace qtorus;

namespace {

QPoly random_axis_poly(long long d, std::uint64_t seed) {
    auto rng = seeded_stream(seed, 31);
    std::normal_distribution<double> g(0.0, 1.0);
    QPoly x(Theta::rational(0, 1));
    for (long long m = -d; m <= d; ++m) x.set_coeff(m, 0, cd{g(rng), g(rng)});
    return x;
}

}  // namespace

TEST_CASE("coefficient keys reduce to smallest-modulus representatives") {
    CHECK(CyclicPoly::representative(7, 5) == 2);
    CHECK(CyclicPoly::representative(-7, 5) == -2);
    CHECK(CyclicPoly::representative(3, 6) == 3);   // tie at n/2 resolves to +n/2
    CHECK(CyclicPoly::representative(-3, 6) == 3);
    CHECK(CyclicPoly::representative(10, 4) == 2);
    CyclicPoly y(8);
    y.add_coeff(9, 1.0);
    CHECK(std::abs(y.coeff(1) - cd{1.0, 0.0}) == 0.0);
    CHECK(std::abs(y.coeff(17) - cd{1.0, 0.0}) == 0.0);
}

TEST_CASE("relabeling round-trips below the aliasing threshold") {
    const QPoly x = random_axis_poly(3, 7);
    const CyclicPoly y = j_dn(x, 3, 8);
    const QPoly back = j_dn_inverse(y, 3, 8);
    for (long long m = -3; m <= 3; ++m) CHECK(std::abs(back.coeff(m, 0) - x.coeff(m, 0)) == 0.0);
    CHECK_THROWS_AS(j_dn(x, 3, 6), std::invalid_argument);
    CHECK_THROWS_AS(j_dn(x, 2, 8), std::invalid_argument);
    CHECK_THROWS_AS(j_dn_inverse(y, 3, 10), std::invalid_argument);
    CyclicPoly wide(8);
    wide.add_coeff(4, 1.0);
    CHECK_THROWS_AS(j_dn_inverse(wide, 3, 8), std::invalid_argument);
}

TEST_CASE("group L_p norm matches a directly coded DFT and Parseval") {
    auto rng = seeded_stream(5, 5);
    std::normal_distribution<double> g(0.0, 1.0);
    CyclicPoly y(12);
    double parseval = 0.0;
    for (long long k = -5; k <= 6; ++k) {
        const cd v{g(rng), g(rng)};
        y.add_coeff(k, v);
        parseval += std::norm(v);
    }
    CHECK(std::abs(cyclic_lp_norm(y, 2.0) - std::sqrt(parseval)) < 1e-12);
    for (double p : {1.0, 4.0}) {
        double acc = 0.0, sup = 0.0;
        for (long long j = 0; j < 12; ++j) {
            cd s = 0.0;
            for (const auto& [k, c] : y.coeffs())
                s += c * std::polar(1.0, two_pi * static_cast<double>(j * k) / 12.0);
            acc += std::pow(std::abs(s), p);
            sup = std::max(sup, std::abs(s));
        }
        CHECK(cyclic_lp_norm(y, p) == doctest::Approx(std::pow(acc / 12.0, 1.0 / p)).epsilon(1e-12));
        CHECK(cyclic_lp_norm(y, std::numeric_limits<double>::infinity()) ==
              doctest::Approx(sup).epsilon(1e-12));
    }
}

TEST_CASE("discretization bounds have the right closed forms and limits") {
    CHECK(sinc_bound(1, 4) == doctest::Approx(pi * pi / 8.0).epsilon(1e-14));
    CHECK(sinc_bound_inverse(1, 4) == doctest::Approx(pi * pi / 2.0).epsilon(1e-14));
    CHECK(sinc_bound(8, 1 << 20) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sinc_bound_inverse(8, 1 << 20) == doctest::Approx(1.0).epsilon(1e-4));
    for (long long d : {1LL, 2LL, 4LL}) {
        CHECK(sinc_bound(d, 4 * d) > 1.0);
        CHECK(sinc_bound_inverse(d, 4 * d) > sinc_bound(d, 4 * d));
    }
    CHECK_THROWS_AS(sinc_bound(4, 8), std::invalid_argument);
}

TEST_CASE("averaging map scales coefficients by the sinc factor and aliases additively") {
    for (long long n : {4LL, 16LL, 255LL, 256LL}) {
        for (long long k = 0; 2 * k < n; ++k) {
            const QPoly x = QPoly::monomial(Theta::rational(0, 1), k, 0);
            const CyclicPoly y = cond_expectation(x, n);
            const double expect = sinc(static_cast<double>(k) * pi / static_cast<double>(n));
            CHECK(y.coeff(k).real() == expect);  // same closed form, bit-for-bit
            CHECK(y.coeff(k).imag() == 0.0);
        }
    }
    QPoly x(Theta::rational(0, 1));
    x.set_coeff(2, 0, 1.0);
    x.set_coeff(2 + 8, 0, 1.0);
    const CyclicPoly y = cond_expectation(x, 8);
    const double expect = sinc(2.0 * pi / 8.0) + sinc(10.0 * pi / 8.0);
    CHECK(std::abs(y.coeff(2) - cd{expect, 0.0}) < 1e-15);
}

TEST_CASE("embedding keeps unit mass up to the reported truncation loss") {
    CyclicPoly y(16);
    y.add_coeff(3, cd{0.8, -0.6});
    // tail mass decays like sin^2(pi k/n) * 2/(pi^2 J); at n = 16, k = 3 the
    // J = 10^5 truncation sits near 6e-7
    const EmbedResult r = cyclic_embed(y, 100000);
    CHECK(r.dropped_mass < 1e-6);
    double mass = 0.0;
    for (const auto& [p, c] : r.poly.coeffs()) {
        CHECK(((p[0] - 3) % 16) == 0);
        mass += std::norm(c);
    }
    CHECK(std::abs(mass - 1.0) < r.dropped_mass + 1e-12);
    // averaging the embedded element recovers the class up to the same loss
    const CyclicPoly back = cond_expectation(r.poly, 16);
    CHECK(std::abs(back.coeff(3) - cd{0.8, -0.6}) < 2.0 * (r.dropped_mass + 1e-12));
}

TEST_CASE("periodized symbols are exactly periodic and converge to the source") {
    const Symbol phi = fejer_symbol(4);
    for (long long n : {4LL, 8LL, 16LL}) {
        const Symbol pn = periodize(phi, n);
        for (long long k = -40; k <= 40; k += 7) {
            const cd a = pn.f(k, 0);
            const cd b = pn.f(k + n * n, 0);
            const cd c = pn.f(k - 3 * n * n, 0);
            CHECK(a == b);
            CHECK(a == c);
        }
    }
    const Symbol p4 = periodize(phi, 4);
    const Symbol p32 = periodize(phi, 32);
    for (long long k = 0; k <= 3; ++k) {
        const double e4 = std::abs(p4.f(k, 0) - phi.f(k, 0));
        const double e32 = std::abs(p32.f(k, 0) - phi.f(k, 0));
        CHECK(e32 <= e4 + 1e-15);
        // the deviation is exactly the closed-form damping factor
        const double predicted =
            std::abs(phi.f(k, 0)) *
            std::fabs(1.0 - (1.0 - static_cast<double>(k) / 32.0) / periodization_constant(32));
        CHECK(e32 == doctest::Approx(predicted).epsilon(1e-12));
    }
    // the composed constant decays like 1 + O(1/n), staying above 1
    CHECK(periodization_constant(64) > 1.0);
    CHECK(periodization_constant(64) < periodization_constant(8));
    CHECK(periodization_constant(64) < 1.08);
    CHECK_THROWS_AS(periodize(phi, 2), std::invalid_argument);
    CHECK_THROWS_AS(periodize(fejer_symbol(3, 2), 8), std::invalid_argument);
}
