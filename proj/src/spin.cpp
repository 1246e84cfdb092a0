#include "dualbrick/spin.hpp"

#include <algorithm>
#include <cmath>

#include "dualbrick/errors.hpp"
#include "dualbrick/multipartite.hpp"
#include "dualbrick/parallel.hpp"
#include "dualbrick/random.hpp"

namespace dualbrick {

std::string to_string(IsingClass c) {
    switch (c) {
        case IsingClass::Integrable: return "Integrable";
        case IsingClass::Chaotic: return "Chaotic";
        case IsingClass::Anderson: return "Anderson";
        case IsingClass::MBL: return "MBL";
    }
    return "?";
}

IsingClass parse_ising_class(const std::string& s) {
    if (s == "Integrable") return IsingClass::Integrable;
    if (s == "Chaotic") return IsingClass::Chaotic;
    if (s == "Anderson") return IsingClass::Anderson;
    if (s == "MBL") return IsingClass::MBL;
    throw validation_error("unknown Ising class '" + s + "'");
}

IsingSpec ising_preset(IsingClass cls, int L, std::uint64_t seed, std::uint64_t realization) {
    IsingSpec s;
    s.L = L;
    s.cls = cls;
    s.seed = seed;
    s.realization = realization;
    switch (cls) {
        case IsingClass::Integrable:
            s.h = 0.0;
            s.g.assign(L, 1.0);
            break;
        case IsingClass::Chaotic:
            s.h = 0.5;
            s.g.assign(L, 1.05);
            break;
        case IsingClass::Anderson:
        case IsingClass::MBL: {
            s.h = cls == IsingClass::MBL ? 0.5 : 0.0;
            Rng rng = make_rng(seed, {realization});
            std::uniform_real_distribution<double> u(-10.0, 10.0);
            for (int i = 0; i < L; ++i) s.g.push_back(u(rng));
            break;
        }
    }
    return s;
}

RMat ising_hamiltonian(const IsingSpec& spec) {
    const int L = spec.L;
    if (L < 2) throw validation_error("ising_hamiltonian: L must be >= 2");
    if (L > 10) throw guard_error("ising_hamiltonian: L exceeds the dense guard (10)");
    if (static_cast<int>(spec.g.size()) != L) throw validation_error("ising_hamiltonian: need one transverse field per site");
    const int d = 1 << L;
    RMat h = RMat::Zero(d, d);
    auto z = [L](int state, int site) { return ((state >> (L - 1 - site)) & 1) ? -1.0 : 1.0; };
    for (int s = 0; s < d; ++s) {
        double diag = 0.0;
        for (int i = 0; i + 1 < L; ++i) diag -= z(s, i) * z(s, i + 1);
        for (int i = 0; i < L; ++i) diag -= spec.h * z(s, i);
        h(s, s) = diag;
        for (int i = 0; i < L; ++i) h(s ^ (1 << (L - 1 - i)), s) -= spec.g[i];
    }
    return h;
}

Propagator::Propagator(const RMat& h) {
    Eigen::SelfAdjointEigenSolver<RMat> es(h);
    if (es.info() != Eigen::Success) throw numerical_error("propagator: eigensolver failed");
    e_ = es.eigenvalues();
    v_ = es.eigenvectors();
}

Mat Propagator::at(double t) const {
    const Eigen::Index d = e_.size();
    Vec ph(d);
    for (Eigen::Index k = 0; k < d; ++k) ph(k) = std::exp(cplx(0.0, -e_(k) * t));
    const Mat v = v_.cast<cplx>();
    return v * ph.asDiagonal() * v.adjoint();
}

Mat propagator(const RMat& h, double t) { return Propagator(h).at(t); }

double level_spacing_ratio(const RVec& e) {
    double sum = 0.0;
    int n = 0;
    for (Eigen::Index k = 1; k + 1 < e.size(); ++k) {
        const double a = e(k) - e(k - 1), b = e(k + 1) - e(k);
        const double mx = std::max(a, b);
        if (mx <= 0.0) continue;
        sum += std::min(a, b) / mx;
        ++n;
    }
    return n ? sum / n : std::nan("");
}

std::vector<EpPoint> ising_ep_profile(const IsingSpec& spec, int r, const std::vector<double>& times, int workers) {
    if (spec.L > 6) throw guard_error("ising_ep_profile: L exceeds the two-copy guard (6)");
    const Propagator prop(ising_hamiltonian(spec));
    std::vector<EpPoint> out(times.size());
    parallel_for(times.size(), workers, [&](std::size_t i) {
        out[i] = {times[i], multipartite_ep(prop.at(times[i]), 2, spec.L, r)};
    });
    return out;
}

ClassProfile ising_class_profile(IsingClass cls, int L, int r, const std::vector<double>& times, int realizations,
                                 std::uint64_t seed, int workers) {
    if (realizations < 1) throw validation_error("ising_class_profile: need at least one realization");
    const int n = is_disordered(cls) ? realizations : 1;
    ClassProfile p;
    p.cls = cls;
    p.times = times;
    p.realizations.resize(n);
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t k) {
        const auto prof = ising_ep_profile(ising_preset(cls, L, seed, k), r, times, 1);
        for (const auto& pt : prof) p.realizations[k].push_back(pt.ep);
    });
    p.mean.assign(times.size(), 0.0);
    p.stdev.assign(times.size(), 0.0);
    for (std::size_t t = 0; t < times.size(); ++t) {
        for (int k = 0; k < n; ++k) p.mean[t] += p.realizations[k][t];
        p.mean[t] /= n;
        if (n > 1) {
            for (int k = 0; k < n; ++k) p.stdev[t] += std::pow(p.realizations[k][t] - p.mean[t], 2);
            p.stdev[t] = std::sqrt(p.stdev[t] / (n - 1));
        }
    }
    return p;
}

std::vector<double> time_grid(double t_end, double dt) {
    if (!(dt > 0.0) || t_end < 0.0) throw validation_error("time_grid: need dt > 0 and t_end >= 0");
    std::vector<double> t;
    const long n = std::lround(std::floor(t_end / dt + 1e-9));
    for (long k = 0; k <= n; ++k) t.push_back(k * dt);
    return t;
}

}  // namespace dualbrick
