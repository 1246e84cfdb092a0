#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "dualbrick/circuit.hpp"
#include "dualbrick/errors.hpp"
#include "oracles.hpp"

using namespace dualbrick;

namespace {

TwoQuditGate random_du(int q, Rng& rng) {
    if (q == 2) {
        std::uniform_real_distribution<double> j(0.0, std::numbers::pi / 4);
        return dress_local(cartan_du(j(rng)), random_dressing(2, rng));
    }
    return dress_local(permutation_gate(latin_square_spec(q)).gate, random_dressing(q, rng));
}

double direct_half_entropy(const TwoQuditGate& g, const PairKernel& k, int L, int t, double alpha) {
    ChainState s = initial_state(k, L / 2);
    evolve(s, BrickwallCircuit::uniform(g, L), t);
    return oracle::renyi(oracle::schmidt_probs(s.amp, g.q(), L, half_block(L)), alpha);
}

}  // namespace

TEST_CASE("pair kernels") {
    Rng rng = make_rng(301, {});
    for (int q : {2, 3}) {
        CHECK(diag_kernel(q).c() == doctest::Approx(q));
        const auto u = unitary_kernel(q, rng);
        CHECK(u.c() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(u.chi()) < 1e-12);
        const auto r = random_kernel(q, rng);
        CHECK(r.m().squaredNorm() == doctest::Approx(q).epsilon(1e-13));
        CHECK(r.c() >= 1.0);
        CHECK(r.c() <= q + 1e-12);
    }
    CHECK_THROWS_AS(PairKernel(2, Mat::Identity(2, 2) * 2.0), Error);
    CHECK_THROWS_AS(PairKernel::normalized(2, Mat::Zero(2, 2)), Error);
    CHECK_THROWS_AS(PairKernel(2, Mat::Identity(3, 3)), Error);
}

TEST_CASE("initial states") {
    Rng rng = make_rng(302, {});
    SUBCASE("rank-one kernel gives a product state") {
        const auto s = initial_state(diag_kernel(2), 4);
        CHECK(std::abs(s.amp(0) - 1.0) < 1e-15);
        for (int c = 1; c < 8; ++c) CHECK(block_entropy(s, {0, c}, 2.0) == doctest::Approx(0.0));
    }
    SUBCASE("unitary kernel: pairs are maximally entangled") {
        for (int q : {2, 3}) {
            const auto s = initial_state(unitary_kernel(q, rng), 3);
            for (int site = 0; site < 6; ++site)
                CHECK(block_entropy(s, {site}, 2.0) == doctest::Approx(std::log(double(q))).epsilon(1e-12));
            CHECK(block_entropy(s, {0, 1}, 2.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("normalization") {
        for (int n = 0; n < 10; ++n) CHECK(initial_state(random_kernel(3, rng), 3).amp.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("evolution against the dense oracle") {
    Rng rng = make_rng(303, {});
    for (int q : {2, 3})
        for (int L : {4, 6}) {
            if (q == 3 && L == 6) continue;
            std::vector<TwoQuditGate> bricks;
            std::vector<Mat> mats;
            for (int b = 0; b < L; ++b) {
                bricks.push_back(TwoQuditGate(q, haar_unitary(q * q, rng)));
                mats.push_back(bricks.back().matrix());
            }
            const auto circ = BrickwallCircuit::per_brick(bricks, L);
            const Mat step = oracle::dense_step(mats, q, L);
            ChainState s = initial_state(random_kernel(q, rng), L / 2);
            Vec ref = s.amp;
            for (int t = 1; t <= 3; ++t) {
                evolve(s, circ, 1);
                ref = step * ref;
                CHECK((s.amp - ref).cwiseAbs().maxCoeff() < 1e-12);
                CHECK(s.amp.norm() == doctest::Approx(1.0).epsilon(1e-12));
            }
            CHECK((circ.dense_unitary(2) - step * step).cwiseAbs().maxCoeff() < 1e-12);
            const auto uni = BrickwallCircuit::uniform(bricks[0], L);
            CHECK((uni.dense_unitary(1) - oracle::dense_step({mats[0]}, q, L)).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("two-site application, fast and generic paths") {
    Rng rng = make_rng(304, {});
    const int q = 2, L = 8;
    const Mat g = haar_unitary(4, rng);
    Vec psi = haar_state(1 << L, rng);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {6, 7}, {7, 0}, {3, 1}, {5, 2}}) {
        Vec x = psi;
        apply_two_site(x, q, L, g, a, b);
        CHECK((x - oracle::embed(g, q, L, a, b) * psi).cwiseAbs().maxCoeff() < 1e-13);
    }
    CHECK_THROWS_AS(apply_two_site(psi, q, L, g, 2, 2), Error);
}

TEST_CASE("swap circuits transport without generating entanglement") {
    for (int q : {2, 3}) {
        const int L = 8;
        ChainState s = initial_state(diag_kernel(q), L / 2);
        const Vec start = s.amp;
        evolve(s, BrickwallCircuit::uniform(TwoQuditGate(q, swap_gate(q)), L), 5);
        CHECK((s.amp - start).norm() < 1e-14);
    }
    Rng rng = make_rng(305, {});
    const int L = 8;
    const auto k = random_kernel(2, rng);
    const auto sw = TwoQuditGate(2, swap_gate(2));
    ChainState s = initial_state(k, L / 2);
    std::vector<double> ent;
    for (int t = 0; t <= L; ++t) {
        ent.push_back(block_entropy(s, half_block(L), 2.0));
        evolve(s, BrickwallCircuit::uniform(sw, L), 1);
    }
    // content moves two sites per step, so the half-cut entropy has period L/2
    for (int t = 0; t + L / 2 <= L; ++t) CHECK(ent[t + L / 2] == doctest::Approx(ent[t]).epsilon(1e-12));
    for (double e : ent) CHECK(e <= 2.0 * 2.0 * std::log(2.0) + 1e-12);
}

TEST_CASE("reduced density matrices") {
    Rng rng = make_rng(306, {});
    SUBCASE("full system and Bell pairs") {
        const auto s = initial_state(unitary_kernel(2, rng), 2);
        const Mat full = reduced_density(s, {0, 1, 2, 3});
        CHECK(full.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
        const auto bell = initial_state(PairKernel(2, Mat::Identity(2, 2)), 1);
        CHECK((reduced_density(bell, {0}) - Mat::Identity(2, 2) / 2.0).norm() < 1e-15);
    }
    SUBCASE("partial trace agrees with Schmidt values") {
        for (int n = 0; n < 5; ++n) {
            ChainState s{2, 8, haar_state(256, rng)};
            for (auto sites : {std::vector<int>{0, 1, 2}, {2, 3, 4, 5}, {5, 6, 7}, {3}}) {
                const double p1 = reduced_density(s, sites).squaredNorm();
                const double p2 = oracle::schmidt_probs(s.amp, 2, 8, sites).array().square().sum();
                CHECK(std::abs(p1 - p2) < 1e-12);
            }
        }
    }
    SUBCASE("complement has the same entropy") {
        ChainState s{3, 6, haar_state(729, rng)};
        for (double a : {1.0, 2.0, 3.0})
            CHECK(block_entropy(s, {1, 2}, a) == doctest::Approx(block_entropy(s, {0, 3, 4, 5}, a)).epsilon(1e-10));
    }
    SUBCASE("non-contiguous sets are rejected") {
        ChainState s{2, 4, haar_state(16, rng)};
        CHECK_THROWS_AS(reduced_density(s, {0, 2}), Error);
        CHECK_THROWS_AS(reduced_density(s, {}), Error);
    }
}

TEST_CASE("entropy formulas") {
    const Mat pure = Vec::Unit(4, 1) * Vec::Unit(4, 1).adjoint();
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(std::abs(renyi_entropy(pure, a)) < 1e-14);
        CHECK(renyi_entropy(Mat::Identity(6, 6) / 6.0, a) == doctest::Approx(std::log(6.0)).epsilon(1e-13));
    }
    Mat two = Mat::Zero(2, 2);
    two(0, 0) = 0.25;
    two(1, 1) = 0.75;
    CHECK(renyi_entropy(two, 2.0) == doctest::Approx(-std::log(0.625)).epsilon(1e-14));
    CHECK(von_neumann(two) == doctest::Approx(-0.25 * std::log(0.25) - 0.75 * std::log(0.75)).epsilon(1e-14));
    CHECK_THROWS_AS(renyi_entropy(two, -1.0), Error);
}

TEST_CASE("C matrices") {
    Rng rng = make_rng(307, {});
    for (int q : {2, 3}) {
        const auto g = random_du(q, rng);
        const auto u = unitary_kernel(q, rng);
        for (int x = 1; x <= (q == 2 ? 5 : 3); ++x) {
            const auto c = c_matrix(g, u, x);
            const long long d = oracle::ipow(q, x);
            CHECK((c.matrix * c.matrix.adjoint() - Mat::Identity(d, d) / double(d)).cwiseAbs().maxCoeff() < 1e-12);
        }
        const auto k = random_kernel(q, rng);
        const auto c1 = c_matrix(g, k, 1);
        CHECK((c1.matrix - k.m() / std::sqrt(double(q))).norm() < 1e-14);
        const Mat cc = c1.matrix * c1.matrix.adjoint();
        CHECK(cc.squaredNorm() == doctest::Approx(k.c() / q).epsilon(1e-13));
    }
}

TEST_CASE("factorized entropy equals direct evolution") {
    Rng rng = make_rng(308, {});
    SUBCASE("L = 16, t = 1") {
        for (int n = 0; n < 3; ++n) {
            const auto g = random_du(2, rng);
            const auto k = random_kernel(2, rng);
            CHECK(std::abs(factorized_entropy(g, k, 2.0, 1, 16) - direct_half_entropy(g, k, 16, 1, 2.0)) < 1e-9);
        }
    }
    SUBCASE("L = 8 and 12, every t in the window, several orders") {
        for (int L : {8, 12})
            for (int n = 0; n < 3; ++n) {
                const auto g = random_du(2, rng);
                const auto k = random_kernel(2, rng);
                for (int t = 0; 2 * kappa(t, L) <= L / 2; ++t)
                    for (double a : {1.0, 2.0, 3.0})
                        CHECK(std::abs(factorized_entropy(g, k, a, t, L) - direct_half_entropy(g, k, L, t, a)) < 1e-9);
            }
    }
    SUBCASE("q = 3, L = 8") {
        const auto g = random_du(3, rng);
        const auto k = random_kernel(3, rng);
        CHECK(std::abs(factorized_entropy(g, k, 2.0, 1, 8) - direct_half_entropy(g, k, 8, 1, 2.0)) < 1e-9);
    }
    SUBCASE("past the window is refused") {
        const auto g = random_du(2, rng);
        const auto k = random_kernel(2, rng);
        CHECK_THROWS_AS(factorized_entropy(g, k, 2.0, 2, 8), Error);
        CHECK_THROWS_AS(factorized_entropy(g, k, 2.0, 1, 10), Error);
    }
}

TEST_CASE("kappa") {
    CHECK(kappa(3, 0) == 6);
    CHECK(kappa(2, 8) == 4);
    CHECK(kappa(2, 12) == 5);
    CHECK(kappa(1, 16) == 2);
}

TEST_CASE("entropy profiles") {
    Rng rng = make_rng(309, {});
    SUBCASE("unitary kernel grows at the maximal rate") {
        for (int n = 0; n < 5; ++n) {
            const auto g = random_du(2, rng);
            const auto k = unitary_kernel(2, rng);
            for (double a : {2.0, 3.0}) {
                for (const auto& r : entropy_profile(g, k, a, 5, {}))
                    CHECK(std::abs(r.v_e - 1.0) < 1e-9);
                ProfileOptions o;
                o.L = 16;
                for (const auto& r : entropy_profile(g, k, a, 2, o)) CHECK(std::abs(r.v_e - 1.0) < 1e-9);
            }
            // maximally mixed spectra: all orders coincide
            const auto c = c_matrix(g, k, 4);
            CHECK(c_entropy(c, 2.0) == doctest::Approx(c_entropy(c, 1.0)).epsilon(1e-10));
        }
    }
    SUBCASE("velocity and increments stay in [0, 1]") {
        for (int n = 0; n < 10; ++n) {
            const auto g = random_du(2, rng);
            const auto k = random_kernel(2, rng);
            for (const auto& r : entropy_profile(g, k, 2.0, 5, {})) {
                CHECK(r.v_e >= -1e-12);
                CHECK(r.v_e <= 1.0 + 1e-12);
                CHECK(r.delta_s >= -1e-12);
                CHECK(r.delta_s <= 1.0 + 1e-12);
                CHECK(r.method == "factorized");
            }
        }
    }
    SUBCASE("finite chains switch to direct evolution past the window") {
        const auto g = random_du(2, rng);
        const auto k = random_kernel(2, rng);
        ProfileOptions o;
        o.L = 8;
        const auto p = entropy_profile(g, k, 2.0, 6, o);
        CHECK(p[0].method == "factorized");
        CHECK(p[1].method == "direct");
        for (const auto& r : p) CHECK(r.s == doctest::Approx(direct_half_entropy(g, k, 8, r.t, 2.0)).epsilon(1e-10));
    }
    SUBCASE("saturation depends on L, not on the kernel") {
        const auto g = random_du(2, rng);
        ProfileOptions o;
        o.L = 8;
        const double a = entropy_profile(g, random_kernel(2, rng), 2.0, 40, o).back().s;
        const double b = entropy_profile(g, unitary_kernel(2, rng), 2.0, 40, o).back().s;
        CHECK(std::abs(a - b) < 0.35);
    }
    SUBCASE("guards") {
        ProfileOptions o;
        o.memory_budget_mb = 1e-3;
        CHECK_THROWS_AS(entropy_profile(random_du(2, rng), random_kernel(2, rng), 2.0, 8, o), Error);
        CHECK_THROWS_AS(check_state_budget(3, 30, 2048.0, "x"), Error);
        CHECK_NOTHROW(check_state_budget(2, 20, 2048.0, "x"));
    }
}
