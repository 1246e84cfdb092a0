#include "dualbrick/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dualbrick/errors.hpp"
#include "dualbrick/parallel.hpp"

namespace dualbrick {

ChannelMatrix m_channel(const TwoQuditGate& u, Direction dir) {
    const int q = u.q();
    const Mat t2 = rearrange(u, Rearrangement::T2);
    const Mat b = t2 * t2.adjoint();
    const Rearrangement r = dir == Direction::Plus ? Rearrangement::R1 : Rearrangement::R2;
    return {q, dir, rearrange(b, q, r) / double(q)};
}

ChannelMatrix direct_superoperator(const TwoQuditGate& u, Direction dir) {
    const int q = u.q();
    const Mat& U = u.matrix();
    const Mat id = Mat::Identity(q, q);
    Mat m(q * q, q * q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            Mat a = Mat::Zero(q, q);
            a(i, j) = 1.0;
            Mat out = Mat::Zero(q, q);
            if (dir == Direction::Plus) {
                const Mat x = U.adjoint() * kron(a, id) * U;
                for (int s = 0; s < q; ++s)
                    for (int b = 0; b < q; ++b)
                        for (int c = 0; c < q; ++c) out(b, c) += x(s * q + b, s * q + c);
            } else {
                const Mat y = U * kron(id, a) * U.adjoint();
                for (int s = 0; s < q; ++s)
                    for (int b = 0; b < q; ++b)
                        for (int c = 0; c < q; ++c) out(b, c) += y(b * q + s, c * q + s);
            }
            out /= double(q);
            for (int b = 0; b < q; ++b)
                for (int c = 0; c < q; ++c) m(b * q + c, i * q + j) = out(b, c);
        }
    return {q, dir, m};
}

std::string to_string(ErgodicClass c) {
    switch (c) {
        case ErgodicClass::Noninteracting: return "Noninteracting";
        case ErgodicClass::Nonergodic: return "Nonergodic";
        case ErgodicClass::ErgodicNonmixing: return "ErgodicNonmixing";
        case ErgodicClass::ErgodicMixing: return "ErgodicMixing";
        case ErgodicClass::Bernoulli: return "Bernoulli";
    }
    return "?";
}

ChannelSpectrum spectrum_report(const ChannelMatrix& m, double tol) {
    const int q = m.q;
    const int n = q * q;
    Vec vid = Vec::Zero(n);
    for (int i = 0; i < q; ++i) vid(i * q + i) = 1.0;
    const double unital_res = (m.matrix * vid - vid).cwiseAbs().maxCoeff();
    if (!(unital_res <= 1e-9)) {
        std::ostringstream os;
        os << "spectrum_report: channel not unital, residual " << unital_res;
        throw numerical_error(os.str());
    }

    Eigen::ComplexEigenSolver<Mat> es(m.matrix, true);
    if (es.info() != Eigen::Success) throw numerical_error("spectrum_report: eigensolver failed");
    const Vec& ev = es.eigenvalues();
    const Mat& vecs = es.eigenvectors();

    // trivial mode: largest overlap with vec(1), closeness to 1 breaks ties
    int triv = 0;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
        const double ov = std::abs(vecs.col(k).dot(vid)) / (vecs.col(k).norm() * vid.norm());
        const bool better = ov > best + 1e-8 ||
                            (std::abs(ov - best) <= 1e-8 && std::abs(ev(k) - 1.0) < std::abs(ev(triv) - 1.0));
        if (better) {
            best = std::max(best, ov);
            triv = k;
        }
    }

    ChannelSpectrum sp;
    sp.trivial = ev(triv);
    for (int k = 0; k < n; ++k)
        if (k != triv) sp.rest.push_back(ev(k));
    std::sort(sp.rest.begin(), sp.rest.end(), [](const cplx& a, const cplx& b) {
        const double da = std::abs(a), db = std::abs(b);
        if (std::abs(da - db) > 1e-12) return da > db;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    if (sp.rest.empty()) return sp;
    sp.lambda1 = sp.rest.front();
    const double a1 = std::abs(sp.lambda1);
    sp.mu1 = a1 > 0.0 ? -std::log(a1) : std::numeric_limits<double>::infinity();

    std::size_t unit = 0, on_circle = 0, zero = 0;
    for (const cplx& l : sp.rest) {
        if (std::abs(l - 1.0) <= tol) ++unit;
        if (std::abs(std::abs(l) - 1.0) <= tol) ++on_circle;
        if (std::abs(l) <= tol) ++zero;
    }
    if (unit == sp.rest.size())
        sp.cls = ErgodicClass::Noninteracting;
    else if (unit > 0)
        sp.cls = ErgodicClass::Nonergodic;
    else if (on_circle > 0)
        sp.cls = ErgodicClass::ErgodicNonmixing;
    else if (zero == sp.rest.size())
        sp.cls = ErgodicClass::Bernoulli;
    else
        sp.cls = ErgodicClass::ErgodicMixing;
    return sp;
}

EnsembleLambdaStats ensemble_lambda_stats(const TwoQuditGate& u, std::size_t n, std::uint64_t seed, int workers,
                                          Direction dir) {
    if (n < 1) throw validation_error("ensemble_lambda_stats: n must be >= 1");
    const GateClass gc = classify_gate(u);
    if (gc.kind == GateKind::GenericUnitary)
        throw validation_error("ensemble_lambda_stats: base gate is not dual-unitary");
    const int q = u.q();
    EnsembleLambdaStats st;
    st.ep = entangling_power(u);
    st.n = n;
    st.members.resize(n);
    const double target = norm_identity_target(q, st.ep);

    parallel_for(n, workers, [&](std::size_t i) {
        Rng rng = make_rng(seed, {i});
        const TwoQuditGate ud = dress_local(u, random_dressing(q, rng));
        const ChannelMatrix m = m_channel(ud, dir);
        const ChannelSpectrum sp = spectrum_report(m);
        LambdaMember& r = st.members[i];
        r.index = i;
        r.lambda1 = sp.lambda1;
        r.abs_lambda1 = std::abs(sp.lambda1);
        r.mu1 = sp.mu1;
        r.cls = sp.cls;
        r.norm_deviation = std::abs(m.matrix.squaredNorm() - target);
        r.trivial_deviation = std::abs(sp.trivial - 1.0);
    });

    double sum = 0.0;
    st.min_abs = st.members.front().abs_lambda1;
    st.max_abs = st.min_abs;
    for (const auto& r : st.members) {
        sum += r.abs_lambda1;
        st.min_abs = std::min(st.min_abs, r.abs_lambda1);
        st.max_abs = std::max(st.max_abs, r.abs_lambda1);
        st.max_norm_deviation = std::max(st.max_norm_deviation, r.norm_deviation);
        st.max_trivial_deviation = std::max(st.max_trivial_deviation, r.trivial_deviation);
    }
    st.mean_abs = sum / double(n);
    st.range = st.max_abs - st.min_abs;
    // below the spectrum tolerance the ring has collapsed to a point
    st.dispersion = st.mean_abs > kSpectrumTol ? st.range / st.mean_abs : 0.0;
    return st;
}

namespace {

FudgeFit fit_points(const std::vector<std::pair<double, double>>& pts) {
    double num = 0.0, den = 0.0;
    for (const auto& [ep, y] : pts) {
        const double s = std::sqrt(std::max(0.0, 1.0 - ep));
        num += s * y;
        den += s * s;
    }
    if (!(den > 0.0)) throw validation_error("fudge_fit: every sample has e_P = 1, fit undefined");
    FudgeFit f;
    f.f = num / den;
    for (const auto& [ep, y] : pts) {
        const double r = y - f.f * std::sqrt(std::max(0.0, 1.0 - ep));
        f.residuals.push_back(r);
        f.residual += r * r;
    }
    return f;
}

}  // namespace

FudgeFit fudge_fit(const std::vector<std::pair<double, double>>& samples) {
    std::vector<double> distinct;
    for (const auto& s : samples)
        if (s.first < 1.0) distinct.push_back(s.first);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) throw validation_error("fudge_fit: need >= 2 samples with distinct e_P < 1");
    return fit_points(samples);
}

TwoSegmentFit fudge_fit_two_segment(const std::vector<std::pair<double, double>>& samples) {
    std::vector<double> eps;
    for (const auto& s : samples) eps.push_back(s.first);
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    bool found = false;
    TwoSegmentFit best;
    // split after each distinct e_P; each side needs one point with e_P < 1
    for (std::size_t k = 0; k + 1 < eps.size(); ++k) {
        std::vector<std::pair<double, double>> lo, hi;
        for (const auto& s : samples) (s.first <= eps[k] ? lo : hi).push_back(s);
        const bool lo_ok = std::any_of(lo.begin(), lo.end(), [](auto& s) { return s.first < 1.0; });
        const bool hi_ok = std::any_of(hi.begin(), hi.end(), [](auto& s) { return s.first < 1.0; });
        if (!lo_ok || !hi_ok) continue;
        TwoSegmentFit t;
        t.split = eps[k];
        t.low = fit_points(lo);
        t.high = fit_points(hi);
        t.residual = t.low.residual + t.high.residual;
        if (!found || t.residual < best.residual) {
            best = std::move(t);
            found = true;
        }
    }
    if (!found) throw validation_error("fudge_fit: not enough distinct e_P values for a two-segment fit");
    return best;
}

}  // namespace dualbrick
