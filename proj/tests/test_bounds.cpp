#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "dualbrick/bounds.hpp"
#include "dualbrick/errors.hpp"

using namespace dualbrick;

namespace {

PairKernel kernel_with_c(int q, double target, Rng& rng) {
    // weight w on one singular direction, bisected until c matches; random frames on both sides
    Mat m = Mat::Zero(q, q);
    double lo = 1.0 / q, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double w = 0.5 * (lo + hi);
        m.setZero();
        m(0, 0) = std::sqrt(w * q);
        for (int i = 1; i < q; ++i) m(i, i) = std::sqrt((1.0 - w) * q / (q - 1));
        (PairKernel(q, m).c() < target ? lo : hi) = w;
    }
    return PairKernel(q, haar_unitary(q, rng) * m * haar_unitary(q, rng));
}

}  // namespace

TEST_CASE("solvable point c = 1") {
    for (int q : {2, 3, 4})
        for (double ep : {0.0, 0.3, 1.0}) {
            const BoundInputs in{q, ep, 1.0};
            for (const auto& b : bound_curve(in)) {
                CHECK(b.p == doctest::Approx(std::pow(double(q), -b.x)).epsilon(1e-14));
                CHECK(b.v_bound == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
}

TEST_CASE("e_P = 0 reduces to the product of single kernels") {
    // exact forms give P_x = (c/q)^x, so the velocity bound is 1 - ln c / ln q;
    // the x = 3, 4 estimates sit above that
    for (int q : {2, 3})
        for (double c : {1.2, 1.7, double(q)}) {
            const BoundInputs in{q, 0.0, c};
            const auto curve = bound_curve(in);
            for (const auto& b : curve) {
                if (b.x <= 2) {
                    CHECK(b.p == doctest::Approx(std::pow(c / q, b.x)).epsilon(1e-12));
                    CHECK(b.v_bound == doctest::Approx(1.0 - std::log(c) / std::log(double(q))).scale(1.0).epsilon(1e-12));
                } else {
                    CHECK(b.p >= std::pow(c / q, b.x) - 1e-12);
                }
            }
        }
    // vacuous only for the product-state kernel
    CHECK(bound_curve({2, 0.0, 2.0})[1].v_bound == doctest::Approx(0.0).scale(1.0));
    CHECK(bound_curve({2, 0.0, 1.5})[1].v_bound > 0.0);
}

TEST_CASE("P_x range, monotonicity and continuity") {
    for (int q : {2, 3})
        for (int ic = 0; ic <= 10; ++ic) {
            const double c = 1.0 + (q - 1.0) * ic / 10.0;
            double prev_p2 = 2.0, prev_eta = 2.0;
            for (int ie = 0; ie <= 100; ++ie) {
                const double ep = ie / 100.0;
                const BoundInputs in{q, ep, c};
                for (int x = 1; x <= 4; ++x) {
                    const auto v = analytic_p(x, in);
                    CHECK(v.value >= std::pow(double(q), -x) - 1e-15);
                    CHECK(v.value <= 1.0);
                    // small steps in e_P give small changes
                    const auto w = analytic_p(x, {q, std::min(1.0, ep + 1e-7), c});
                    CHECK(std::abs(w.raw - v.raw) < 1e-5);
                }
                const double p2 = analytic_p(2, in).value;
                if (ic > 0) CHECK(p2 < prev_p2);
                prev_p2 = p2;
                if (ep <= (q * q - 1.0) / (q * q)) {
                    CHECK(in.eta() < prev_eta);
                    prev_eta = in.eta();
                }
            }
        }
    CHECK_THROWS_AS(analytic_p(5, {2, 0.5, 1.5}), Error);
    CHECK_THROWS_AS(analytic_p(2, {2, 0.5, 2.5}), Error);
}

TEST_CASE("sampling oracle") {
    Rng rng = make_rng(401, {});
    SUBCASE("x = 1 is dressing independent") {
        for (int q : {2, 3}) {
            const auto k = random_kernel(q, rng);
            const auto g = q == 2 ? cartan_du(0.3) : permutation_gate(latin_square_spec(3)).gate;
            const auto mc = mc_p_oracle(g, k, 1, 500, 7);
            CHECK(mc.mean == doctest::Approx(k.c() / q).epsilon(1e-12));
            CHECK(mc.stderr_ < 1e-12);
        }
    }
    SUBCASE("x = 2 follows the K2 = 1 closed form") {
        for (double j : {0.1, 0.4}) {
            const auto g = cartan_du(j);
            const auto k = kernel_with_c(2, 1.5, rng);
            CHECK(k.c() == doctest::Approx(1.5).epsilon(1e-10));
            const auto mc = mc_p_oracle(g, k, 2, 10000, 11, 2);
            const BoundInputs in{2, entangling_power(g), k.c()};
            BoundConfig alt;
            alt.k2 = 2;
            CHECK(std::abs(mc.mean - analytic_p(2, in).value) < 3 * mc.stderr_);
            CHECK(std::abs(mc.mean - analytic_p(2, in, alt).value) > 3 * mc.stderr_);
        }
    }
    SUBCASE("x = 3, 4 estimates are upper bounds; Jensen holds") {
        for (int n = 0; n < 4; ++n) {
            const int q = 2 + n % 2;
            const auto g = q == 2 ? cartan_du(0.15 * n) : mr_generate(TwoQuditGate(3, haar_unitary(9, rng)), 100).gate;
            const auto k = random_kernel(q, rng);
            const BoundInputs in{q, entangling_power(g), k.c()};
            const auto curve = bound_curve(in);
            for (int x = 1; x <= (q == 2 ? 4 : 3); ++x) {
                const auto mc = mc_p_oracle(g, k, x, 2000, 100 + n, 2);
                CHECK(mc.mean <= curve[x - 1].p + 3 * mc.stderr_ + 1e-12);
                CHECK(mc.mean_s2 >= -2.0 * std::log(mc.mean) - 1e-12);
                CHECK(mc.mean_s2 >= curve[x - 1].s_bound - 6 * mc.stderr_ / mc.mean - 1e-12);
            }
        }
    }
    SUBCASE("printed four-kernel form undershoots the samples") {
        // frozen point: J3 = 0.2 with a kernel of c = 1.94
        const auto g = cartan_du(0.2);
        const auto k = kernel_with_c(2, 1.94, rng);
        const auto mc = mc_p_oracle(g, k, 4, 4000, 12, 2);
        const BoundInputs in{2, entangling_power(g), k.c()};
        BoundConfig printed;
        printed.p4_printed = true;
        CHECK(analytic_p(4, in, printed).value < mc.mean - 3 * mc.stderr_);
        CHECK(analytic_p(4, in).value > mc.mean);
    }
    SUBCASE("standard error scales as 1/sqrt(samples)") {
        const auto g = cartan_du(0.3);
        const auto k = random_kernel(2, rng);
        const auto a = mc_p_oracle(g, k, 2, 2000, 1);
        const auto b = mc_p_oracle(g, k, 2, 8000, 2);
        CHECK(a.stderr_ / b.stderr_ == doctest::Approx(2.0).epsilon(0.15));
    }
}

TEST_CASE("bound curve bookkeeping") {
    const BoundInputs in{3, 0.6, 2.1};
    for (const auto& b : bound_curve(in)) {
        CHECK(b.s_bound == doctest::Approx(-2.0 * std::log(b.p)));
        CHECK(b.s_bound == doctest::Approx(2.0 * b.x * std::log(3.0) - 2.0 * std::log(b.p_scaled)));
        CHECK(b.v_bound == doctest::Approx(b.s_bound / (2.0 * b.x * std::log(3.0))));
        CHECK(b.exact == (b.x <= 2));
    }
    CHECK(BoundConfig{}.tag() == "K2=1;P3lead=c/q^3;P4=corrected");
}
