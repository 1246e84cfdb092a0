#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "dualbrick/errors.hpp"
#include "dualbrick/multipartite.hpp"
#include "oracles.hpp"

using namespace dualbrick;

namespace {

ChainState ghz(int L) {
    Vec v = Vec::Zero(1 << L);
    v(0) = v((1 << L) - 1) = 1.0 / std::sqrt(2.0);
    return {2, L, v};
}

ChainState product(int q, int L, Rng& rng) {
    Vec psi = Vec::Ones(1);
    for (int k = 0; k < L; ++k) {
        const Vec site = haar_state(q, rng);
        Vec next(psi.size() * q);
        for (Eigen::Index a = 0; a < psi.size(); ++a) next.segment(a * q, q) = psi(a) * site;
        psi.swap(next);
    }
    return {q, L, psi};
}

ChainState permuted(const ChainState& s, const std::vector<int>& perm) {
    Vec out(s.amp.size());
    for (long long i = 0; i < s.amp.size(); ++i) {
        const auto d = oracle::digits(i, s.L, s.q);
        std::vector<int> e(s.L);
        for (int k = 0; k < s.L; ++k) e[perm[k]] = d[k];
        out(oracle::undigits(e, s.q)) = s.amp(i);
    }
    return {s.q, s.L, out};
}

// Scott measure straight from the definition, every subset, Schmidt values of the reshape
double scott_oracle(const ChainState& s, int r) {
    double sum = 0.0;
    int n = 0;
    for (const auto& c : combinations(s.L, r)) {
        sum += oracle::schmidt_probs(s.amp, s.q, s.L, c).array().square().sum();
        ++n;
    }
    const double qr = std::pow(double(s.q), r);
    return qr / (qr - 1.0) * (1.0 - sum / n);
}

Mat brickwall(const TwoQuditGate& g, int L, int t) { return BrickwallCircuit::uniform(g, L).dense_unitary(t); }

}  // namespace

TEST_CASE("reference states") {
    Rng rng = make_rng(501, {});
    SUBCASE("product states") {
        for (int q : {2, 3}) {
            const auto s = product(q, 6, rng);
            CHECK(std::abs(meyer_wallach(s)) < 1e-12);
            for (int r = 1; r <= 3; ++r) CHECK(std::abs(scott(s, r)) < 1e-12);
            const auto a = ame_gme(s);
            CHECK(a.e_raw == 0.0);
            CHECK(a.e_gm == 0.0);
            CHECK(std::abs(avg_vn_half(s)) < 1e-10);
        }
    }
    SUBCASE("GHZ") {
        for (int L : {4, 6, 8}) {
            const auto s = ghz(L);
            CHECK(meyer_wallach(s) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(scott(s, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
            CHECK(avg_vn_half(s) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("AME(4,3) from a 2-unitary") {
        const ChainState s{3, 4, choi_state(permutation_gate(latin_square_spec(3)).gate)};
        CHECK(scott(s, 2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(scott(s, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ame_gme(s).e_gm == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ame_gme(s).e_raw == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(avg_vn_half(s) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("one disentangled site kills the product") {
        ChainState rest{2, 5, haar_state(32, rng)};
        Vec psi(64);
        const Vec site = haar_state(2, rng);
        for (int a = 0; a < 2; ++a) psi.segment(a * 32, 32) = site(a) * rest.amp;
        const ChainState s{2, 6, psi};
        CHECK(ame_gme(s).e_raw == 0.0);
        CHECK(ame_gme(s).e_gm == 0.0);
        CHECK(scott(s, 3) > 0.1);
    }
}

TEST_CASE("measures against the subset oracle") {
    Rng rng = make_rng(502, {});
    for (int n = 0; n < 3; ++n) {
        const ChainState s{2, 6, haar_state(64, rng)};
        for (int r = 1; r <= 3; ++r) CHECK(scott(s, r) == doctest::Approx(scott_oracle(s, r)).epsilon(1e-12));
        CHECK(meyer_wallach(s) == doctest::Approx(scott(s, 1)).epsilon(1e-12));
        const auto rep = multipartite_report(s);
        CHECK(rep.q_mw == doctest::Approx(meyer_wallach(s)).epsilon(1e-12));
        for (const auto& [r, v] : rep.q_r) CHECK(v == doctest::Approx(scott_oracle(s, r)).epsilon(1e-12));
        CHECK(rep.q_r.back().second == doctest::Approx(scott(s, 3, 3)).epsilon(1e-12));
        // geometric mean over every subset up to L/2, halves counted with their complements
        double logs = 0.0;
        int terms = 0;
        for (int r = 1; r <= 3; ++r)
            for (const auto& c : combinations(6, r)) {
                const double pur = oracle::schmidt_probs(s.amp, 2, 6, c).array().square().sum();
                const double qr = std::pow(2.0, r);
                logs += std::log(qr / (qr - 1.0) * (1.0 - pur));
                ++terms;
            }
        CHECK(rep.e_gm == doctest::Approx(std::exp(logs / terms)).epsilon(1e-12));
        CHECK(rep.e_raw == doctest::Approx(std::exp(logs)).epsilon(1e-10));
        double vn = 0.0;
        int nh = 0;
        for (const auto& c : combinations(6, 3)) {
            vn += oracle::renyi(oracle::schmidt_probs(s.amp, 2, 6, c), 1.0) / std::log(2.0);
            ++nh;
        }
        CHECK(rep.s_vn == doctest::Approx(vn / nh).epsilon(1e-10));
        CHECK(avg_vn_half(s) == doctest::Approx(vn / nh).epsilon(1e-10));
    }
}

TEST_CASE("invariances") {
    Rng rng = make_rng(503, {});
    const ChainState s{3, 5, haar_state(243, rng)};
    const ChainState phased{3, 5, s.amp * std::polar(1.0, 0.7)};
    std::vector<int> perm{3, 0, 4, 1, 2};
    const auto p = permuted(s, perm);
    for (int r = 1; r <= 2; ++r) {
        CHECK(scott(phased, r) == doctest::Approx(scott(s, r)).epsilon(1e-12));
        CHECK(scott(p, r) == doctest::Approx(scott(s, r)).epsilon(1e-12));
    }
    CHECK(ame_gme(p).e_gm == doctest::Approx(ame_gme(s).e_gm).epsilon(1e-12));
    for (const auto& c : combinations(5, 2)) {
        const double pur = subset_purity(s, c);
        CHECK(pur >= 1.0 / 9.0 - 1e-12);
        CHECK(pur <= 1.0 + 1e-12);
        CHECK(pur == doctest::Approx(subset_purity(s, complement(c, 5))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(scott(s, 3), Error);
}

TEST_CASE("multipartite entangling power") {
    Rng rng = make_rng(504, {});
    const int L = 4;
    SUBCASE("identity and swap circuits") {
        CHECK(multipartite_ep(Mat::Identity(16, 16), 2, L, 2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(multipartite_ep(Mat::Identity(16, 16), 2, L, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        const auto sw = TwoQuditGate(2, swap_gate(2));
        for (int t = 0; t <= 6; ++t) {
            const Mat u = brickwall(sw, L, t);
            CHECK(std::abs(multipartite_ep(u, 2, L, 2)) < 1e-12);
            CHECK(std::abs(operator_space_ep(u, 2, L)) < 1e-12);
        }
    }
    SUBCASE("closed form against the defining average") {
        for (int n = 0; n < 3; ++n) {
            const Mat u = haar_unitary(16, rng);
            for (int r : {1, 2}) {
                const auto mc = multipartite_ep_mc(u, 2, L, r, 20000, 600 + n);
                CHECK(std::abs(mc.mean - multipartite_ep(u, 2, L, r)) < 3 * mc.stderr_);
            }
        }
        const auto g = dress_local(cartan_du(0.2), random_dressing(2, rng));
        const Mat u = brickwall(g, L, 2);
        const auto mc = multipartite_ep_mc(u, 2, L, 2, 20000, 610);
        CHECK(std::abs(mc.mean - multipartite_ep(u, 2, L, 2)) < 3 * mc.stderr_);
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(multipartite_ep(Mat::Identity(256, 256), 2, 8, 4), Error);
        CHECK_THROWS_AS(multipartite_ep(Mat::Identity(15, 15), 2, 4, 2), Error);
        CHECK_THROWS_AS(multipartite_ep(Mat::Identity(16, 16), 2, 4, 3), Error);
    }
}

TEST_CASE("operator-space entangling power") {
    Rng rng = make_rng(505, {});
    const int L = 4;
    CHECK(std::abs(operator_space_ep(Mat::Identity(16, 16), 2, L)) < 1e-14);
    CHECK(std::abs(operator_entanglement_half(Mat::Identity(16, 16), 2, L)) < 1e-14);
    double top = 0.0;
    for (int n = 0; n < 3; ++n) {
        const Mat u = haar_unitary(16, rng);
        const double e = operator_space_ep(u, 2, L);
        top = std::max(top, e);
        CHECK(e <= 1.0 - 2.0 / 17.0 + 1e-12);
        // defining average over local unitaries on the two halves
        const auto mc = operator_space_ep_mc(u, 2, L, 20000, 700 + n);
        CHECK(std::abs(mc.mean - e) < 3 * mc.stderr_);
    }
    CHECK(top > 0.85);
    const auto g = dress_local(cartan_du(0.3), random_dressing(2, rng));
    const Mat u = brickwall(g, L, 3);
    const auto mc = operator_space_ep_mc(u, 2, L, 20000, 710);
    CHECK(std::abs(mc.mean - operator_space_ep(u, 2, L)) < 3 * mc.stderr_);
}
