#include "dualbrick/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dualbrick/errors.hpp"
#include "dualbrick/parallel.hpp"

namespace dualbrick {

double BoundInputs::chi() const { return (c - 1.0) / std::sqrt(double(q) * q - 1.0); }

double BoundInputs::eta() const { return (1.0 - ep) * (1.0 - ep) + ep * ep / (double(q) * q - 1.0); }

std::string BoundConfig::tag() const {
    std::ostringstream os;
    os << "K2=" << k2 << ";P3lead=" << (c_lead ? "c/q^3" : "1/q^3") << ";P4=" << (p4_printed ? "printed" : "corrected");
    return os.str();
}

BoundValue analytic_p(int x, const BoundInputs& in, const BoundConfig& cfg) {
    if (x < 1 || x > 4) throw validation_error("analytic_p: x must be in 1..4");
    if (in.q < 2) throw validation_error("analytic_p: q must be >= 2");
    if (!(in.c >= 1.0 - 1e-12 && in.c <= in.q + 1e-12)) throw validation_error("analytic_p: c must lie in [1, q]");
    if (!(in.ep >= -1e-12 && in.ep <= 1.0 + 1e-12)) throw validation_error("analytic_p: e_P must lie in [0, 1]");
    const double q = in.q, q2 = q * q, c = in.c;
    const double chi = in.chi(), eta = in.eta();
    const double root = std::sqrt(q2 - 1.0);
    const double a = 1.0 - in.ep - 1.0 / q2;  // (q^2(1-eP) - 1)/q^2
    const double op_norm = (q + c) / (q + 1.0);
    const double cs3 = op_norm * std::sqrt(std::pow(eta, 3) * (q2 - 1.0) / q2);
    const double cs5 = op_norm * op_norm * std::sqrt(std::pow(eta, 5) * (q2 - 1.0) / q2);
    const double p2 = 1.0 / q2 + 2.0 * chi * root / q2 + chi * chi * cfg.k2 * a;

    BoundValue v;
    switch (x) {
        case 1:
            v.raw = c / q;
            v.exact = true;
            break;
        case 2:
            v.raw = p2;
            v.exact = cfg.k2 == 1;
            break;
        case 3:
            if (cfg.c_lead)
                v.raw = c / (q * q2) + (2.0 * chi / q) * (root / q + chi * a) + chi * chi * cs3;
            else
                v.raw = 1.0 / (q * q2) + 2.0 * chi * root / (q * q2) + 2.0 * chi * chi * a / q + chi * chi * cs3;
            break;
        case 4: {
            const double inner = (root / q + chi * a) / q;
            if (cfg.p4_printed)
                v.raw = p2 / q2 + 2.0 * chi * (chi / q) * ((chi / q) * (root / q + chi * a) + chi * cs3) + chi * chi * cs5;
            else
                v.raw = p2 / q2 + 2.0 * chi * (inner + chi * cs3) / q + chi * chi * cs5;
            break;
        }
    }
    v.value = std::clamp(v.raw, std::pow(q, -x), 1.0);
    return v;
}

McEstimate mc_p_oracle(const TwoQuditGate& g, const PairKernel& k, int x, std::size_t samples, std::uint64_t seed,
                       int workers) {
    if (samples < 2) throw validation_error("mc_p_oracle: need at least 2 samples");
    std::vector<double> p(samples);
    parallel_for(samples, workers, [&](std::size_t s) {
        Rng rng = make_rng(seed, {s});
        const TwoQuditGate gd = dress_local(g, random_dressing(g.q(), rng));
        p[s] = gram_purity(c_matrix(gd, k, x).matrix);
    });
    McEstimate e;
    e.samples = samples;
    double sum = 0.0, sum_s = 0.0;
    for (double v : p) {
        sum += v;
        sum_s += -2.0 * std::log(v);
    }
    e.mean = sum / samples;
    e.mean_s2 = sum_s / samples;
    double var = 0.0;
    for (double v : p) var += (v - e.mean) * (v - e.mean);
    var /= double(samples - 1);
    e.stderr_ = std::sqrt(var / samples);
    return e;
}

std::vector<BoundPoint> bound_curve(const BoundInputs& in, const BoundConfig& cfg) {
    std::vector<BoundPoint> out;
    const double lnq = std::log(double(in.q));
    for (int x = 1; x <= 4; ++x) {
        const BoundValue v = analytic_p(x, in, cfg);
        BoundPoint b;
        b.x = x;
        b.p = v.value;
        b.p_scaled = std::pow(double(in.q), x) * v.value;
        b.s_bound = -2.0 * std::log(v.value);
        b.subtracted = std::log(b.p_scaled) / (x * lnq);
        b.v_bound = 1.0 - b.subtracted;
        b.exact = v.exact;
        out.push_back(b);
    }
    return out;
}

}  // namespace dualbrick
