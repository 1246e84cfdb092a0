#include "dualbrick/multipartite.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dualbrick/errors.hpp"
#include "dualbrick/parallel.hpp"

namespace dualbrick {

double subset_purity(const ChainState& s, const std::vector<int>& subset) {
    return gram_purity(legs_to_matrix(s.amp.data(), s.L, s.q, subset));
}

namespace {

// subsets of size r; at r = L/2 only those holding site 0 (complements share the spectrum)
std::vector<std::vector<int>> reduced_family(int L, int r) {
    auto all = combinations(L, r);
    if (2 * r != L) return all;
    std::vector<std::vector<int>> out;
    for (auto& c : all)
        if (c.front() == 0) out.push_back(std::move(c));
    return out;
}

double mean_purity(const ChainState& s, int r, int workers) {
    const auto fam = reduced_family(s.L, r);
    std::vector<double> p(fam.size());
    parallel_for(fam.size(), workers, [&](std::size_t i) { p[i] = subset_purity(s, fam[i]); });
    double sum = 0.0;
    for (double v : p) sum += v;
    return sum / double(fam.size());
}

}  // namespace

double meyer_wallach(const ChainState& s) { return 2.0 * (1.0 - mean_purity(s, 1, 1)); }

double scott(const ChainState& s, int r, int workers) {
    if (r < 1 || 2 * r > s.L) throw validation_error("scott: r must lie in 1..L/2");
    const double qr = std::pow(double(s.q), r);
    return qr / (qr - 1.0) * (1.0 - mean_purity(s, r, workers));
}

MultipartiteReport multipartite_report(const ChainState& s, int workers) {
    const int L = s.L, q = s.q, top = L / 2;
    if (top < 1) throw validation_error("multipartite_report: need L >= 2");
    struct Item {
        int size;
        std::vector<int> sites;
    };
    std::vector<Item> items;
    for (int r = 1; r <= top; ++r)
        for (auto& c : reduced_family(L, r)) items.push_back({r, std::move(c)});

    std::vector<double> pur(items.size()), vn(items.size(), 0.0);
    const bool even = L % 2 == 0;
    if (!even) {
        parallel_for(items.size(), workers, [&](std::size_t i) {
            pur[i] = gram_purity(legs_to_matrix(s.amp.data(), L, q, items[i].sites));
        });
    } else {
        // every smaller subset is traced out of one half-chain marginal holding it and site 0
        std::vector<std::size_t> halves;
        std::map<std::vector<int>, std::size_t> half_index;
        for (std::size_t i = 0; i < items.size(); ++i)
            if (items[i].size == top) {
                half_index[items[i].sites] = halves.size();
                halves.push_back(i);
            }
        std::vector<std::vector<std::size_t>> assigned(halves.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (items[i].size == top) continue;
            std::vector<char> in(L, 0);
            for (int k : items[i].sites) in[k] = 1;
            in[0] = 1;
            int n = 0;
            for (int k = 0; k < L; ++k) n += in[k];
            for (int k = 0; k < L && n < top; ++k)
                if (!in[k]) {
                    in[k] = 1;
                    ++n;
                }
            std::vector<int> sup;
            for (int k = 0; k < L; ++k)
                if (in[k]) sup.push_back(k);
            assigned[half_index.at(sup)].push_back(i);
        }
        parallel_for(halves.size(), workers, [&](std::size_t h) {
            const Item& it = items[halves[h]];
            const Mat g = small_gram(legs_to_matrix(s.amp.data(), L, q, it.sites));
            pur[halves[h]] = g.squaredNorm();
            vn[halves[h]] = von_neumann_of(hermitian_eigenvalues(g)) / std::log(double(q));
            for (std::size_t a : assigned[h]) {
                std::vector<int> keep;
                for (int k : items[a].sites)
                    keep.push_back(static_cast<int>(std::find(it.sites.begin(), it.sites.end(), k) - it.sites.begin()));
                pur[a] = marginal_purity(g, top, q, keep);
            }
        });
    }

    MultipartiteReport rep;
    std::vector<double> sum(top + 1, 0.0);
    std::vector<std::size_t> cnt(top + 1, 0);
    double log_sum = 0.0, vn_sum = 0.0;
    std::size_t terms = 0, vn_cnt = 0;
    bool vanishing = false;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const int r = items[i].size;
        sum[r] += pur[i];
        ++cnt[r];
        const double qr = std::pow(double(q), r);
        const double f = qr / (qr - 1.0) * (1.0 - pur[i]);
        const std::size_t mult = (even && r == top) ? 2 : 1;
        // a factor at rounding level means a pure marginal
        if (f <= 1e-12)
            vanishing = true;
        else
            log_sum += mult * std::log(f);
        terms += mult;
        if (even && r == top) {
            vn_sum += vn[i];
            ++vn_cnt;
        }
    }
    rep.q_mw = 2.0 * (1.0 - sum[1] / double(cnt[1]));
    for (int r = 1; r <= top; ++r) {
        const double qr = std::pow(double(q), r);
        rep.q_r.push_back({r, qr / (qr - 1.0) * (1.0 - sum[r] / double(cnt[r]))});
    }
    rep.e_raw = vanishing ? 0.0 : std::exp(log_sum);
    rep.e_gm = vanishing ? 0.0 : std::exp(log_sum / double(terms));
    rep.s_vn = vn_cnt ? vn_sum / double(vn_cnt) : std::nan("");
    return rep;
}

AmeGme ame_gme(const ChainState& s, int workers) {
    const MultipartiteReport r = multipartite_report(s, workers);
    AmeGme a;
    a.e_raw = r.e_raw;
    a.e_gm = r.e_gm;
    for (int k = 1; k <= s.L / 2; ++k) a.terms += static_cast<std::size_t>(binomial(s.L, k));
    return a;
}

double avg_vn_half(const ChainState& s, int workers) {
    if (s.L % 2) throw validation_error("avg_vn_half: L must be even");
    const auto fam = reduced_family(s.L, s.L / 2);
    std::vector<double> v(fam.size());
    parallel_for(fam.size(), workers, [&](std::size_t i) {
        const Mat g = small_gram(legs_to_matrix(s.amp.data(), s.L, s.q, fam[i]));
        v[i] = von_neumann_of(hermitian_eigenvalues(g)) / std::log(double(s.q));
    });
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / double(v.size());
}

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_operator(const Mat& u, int q, int L, double limit, const char* what) {
    const double d = std::pow(double(q), L);
    if (u.rows() != u.cols() || std::abs(u.rows() - d) > 0.5)
        throw validation_error(std::string(what) + ": operator must be q^L x q^L");
    if (d * d > limit) throw guard_error(std::string(what) + ": two-copy dimension exceeds the guard");
}

}  // namespace

double multipartite_ep(const Mat& u, int q, int L, int r) {
    check_operator(u, q, L, 4096.0, "multipartite_ep");
    if (r < 1 || 2 * r > L) throw validation_error("multipartite_ep: r must lie in 1..L/2");
    const RowMat t = u;  // legs 0..L-1 outputs, L..2L-1 inputs
    const double cst = std::pow(2.0 / (q * (q + 1.0)), L);
    const auto family = combinations(L, r);
    std::vector<std::vector<int>> subsets;
    for (int k = 0; k <= L; ++k)
        for (auto& a : combinations(L, k)) subsets.push_back(std::move(a));
    double mean_rs = 0.0;
    for (const auto& S : family) {
        double acc = 0.0;
        for (const auto& A : subsets) {
            std::vector<int> rows(S);
            for (int a : A) rows.push_back(L + a);
            acc += gram_purity(legs_to_matrix(t.data(), 2 * L, q, rows));
        }
        mean_rs += cst * acc / std::pow(2.0, L);
    }
    mean_rs /= double(family.size());
    const double qr = std::pow(double(q), r);
    return qr / (qr - 1.0) * (1.0 - mean_rs);
}

MpEstimate multipartite_ep_mc(const Mat& u, int q, int L, int r, std::size_t samples, std::uint64_t seed) {
    check_operator(u, q, L, 1e12, "multipartite_ep_mc");
    if (samples < 2) throw validation_error("multipartite_ep_mc: need at least 2 samples");
    std::vector<double> v(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        Rng rng = make_rng(seed, {s});
        Vec psi = Vec::Ones(1);
        for (int k = 0; k < L; ++k) {
            const Vec site = haar_state(q, rng);
            Vec next(psi.size() * q);
            for (Eigen::Index a = 0; a < psi.size(); ++a) next.segment(a * q, q) = psi(a) * site;
            psi.swap(next);
        }
        ChainState st{q, L, u * psi};
        v[s] = scott(st, r);
    }
    MpEstimate e;
    for (double x : v) e.mean += x;
    e.mean /= double(samples);
    double var = 0.0;
    for (double x : v) var += (x - e.mean) * (x - e.mean);
    e.stderr_ = std::sqrt(var / double(samples - 1) / double(samples));
    return e;
}

double operator_entanglement_half(const Mat& u, int q, int L) {
    if (L % 2) throw validation_error("operator entanglement: L must be even");
    check_operator(u, q, L, 1024.0 * 1024.0, "operator entanglement");
    const RowMat t = u;
    std::vector<int> rows;
    for (int k = 0; k < L / 2; ++k) rows.push_back(k);
    for (int k = 0; k < L / 2; ++k) rows.push_back(L + k);
    const double n2 = u.squaredNorm();
    return 1.0 - gram_purity(legs_to_matrix(t.data(), 2 * L, q, rows)) / (n2 * n2);
}

double operator_space_ep(const Mat& u, int q, int L) {
    if (L % 2) throw validation_error("operator_space_ep: L must be even");
    check_operator(u, q, L, 1024.0 * 1024.0, "operator_space_ep");
    const std::int64_t half = ipow(q, L / 2), d = half * half;
    Mat us(d, d);
    // (U S~) column (xA, xB) is U column (xB, xA)
    for (std::int64_t a = 0; a < half; ++a)
        for (std::int64_t b = 0; b < half; ++b) us.col(a * half + b) = u.col(b * half + a);
    const double es = 1.0 - 1.0 / double(d);
    const double x = operator_entanglement_half(u, q, L) / es;
    const double y = operator_entanglement_half(us, q, L) / es;
    return 1.0 - (1.0 - x) * (1.0 - x) - (1.0 - y) * (1.0 - y) - 2.0 / double(d) * x * y;
}

MpEstimate operator_space_ep_mc(const Mat& u, int q, int L, std::size_t samples, std::uint64_t seed) {
    if (L % 2) throw validation_error("operator_space_ep_mc: L must be even");
    check_operator(u, q, L, 1024.0 * 1024.0, "operator_space_ep_mc");
    if (samples < 2) throw validation_error("operator_space_ep_mc: need at least 2 samples");
    const int half = static_cast<int>(ipow(q, L / 2));
    std::vector<double> v(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        Rng rng = make_rng(seed, {s});
        const Mat xa = haar_unitary(half, rng);
        const Mat yb = haar_unitary(half, rng);
        v[s] = operator_entanglement_half(u.adjoint() * kron(xa, yb) * u, q, L);
    }
    MpEstimate e;
    for (double x : v) e.mean += x;
    e.mean /= double(samples);
    double var = 0.0;
    for (double x : v) var += (x - e.mean) * (x - e.mean);
    e.stderr_ = std::sqrt(var / double(samples - 1) / double(samples));
    return e;
}

}  // namespace dualbrick
