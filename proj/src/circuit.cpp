#include "dualbrick/circuit.hpp"

#include <cmath>
#include <sstream>

#include "dualbrick/errors.hpp"

namespace dualbrick {

PairKernel::PairKernel(int q, Mat m) : q_(q), m_(std::move(m)) {
    if (q_ < 2 || m_.rows() != q_ || m_.cols() != q_) throw validation_error("pair kernel must be q x q");
    const double n = m_.squaredNorm();
    if (std::abs(n - q_) > 1e-12) {
        std::ostringstream os;
        os << "pair kernel not normalized: tr(m m+) = " << n << ", expected " << q_;
        throw validation_error(os.str());
    }
}

PairKernel PairKernel::normalized(int q, const Mat& m) {
    const double n = m.squaredNorm();
    if (!(n > 0.0)) throw validation_error("pair kernel is zero");
    return PairKernel(q, m * std::sqrt(q / n));
}

double PairKernel::c() const {
    const Mat mm = m_ * m_.adjoint();
    return mm.squaredNorm() / q_;
}

double PairKernel::chi() const { return (c() - 1.0) / std::sqrt(double(q_) * q_ - 1.0); }

PairKernel diag_kernel(int q) {
    Mat m = Mat::Zero(q, q);
    m(0, 0) = std::sqrt(double(q));
    return PairKernel(q, m);
}

PairKernel unitary_kernel(int q, Rng& rng) { return PairKernel::normalized(q, haar_unitary(q, rng)); }

PairKernel random_kernel(int q, Rng& rng) { return PairKernel::normalized(q, complex_gaussian(q, q, rng)); }

void check_state_budget(int q, int sites, double budget_mb, const std::string& what) {
    const double bytes = std::pow(double(q), sites) * sizeof(cplx);
    if (bytes > budget_mb * 1024.0 * 1024.0) {
        std::ostringstream os;
        os << what << ": q^" << sites << " amplitudes need " << bytes / (1024.0 * 1024.0) << " MiB, budget "
           << budget_mb << " MiB";
        throw guard_error(os.str());
    }
}

ChainState initial_state(const PairKernel& k, int pairs) {
    if (pairs < 1) throw validation_error("initial_state: need at least one pair");
    const int q = k.q();
    Vec pair(q * q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) pair(i * q + j) = k.m()(i, j) / std::sqrt(double(q));
    Vec psi = Vec::Ones(1);
    for (int p = 0; p < pairs; ++p) {
        Vec next(psi.size() * pair.size());
        for (Eigen::Index a = 0; a < psi.size(); ++a) next.segment(a * pair.size(), pair.size()) = psi(a) * pair;
        psi.swap(next);
    }
    return {q, 2 * pairs, std::move(psi)};
}

BrickwallCircuit BrickwallCircuit::uniform(const TwoQuditGate& g, int L) {
    if (L < 2 || L % 2) throw validation_error("brickwall: L must be even and >= 2");
    BrickwallCircuit c;
    c.q_ = g.q();
    c.L_ = L;
    c.uniform_ = true;
    c.bricks_ = {g};
    return c;
}

BrickwallCircuit BrickwallCircuit::per_brick(std::vector<TwoQuditGate> bricks, int L) {
    if (L < 2 || L % 2) throw validation_error("brickwall: L must be even and >= 2");
    if (static_cast<int>(bricks.size()) != L) throw validation_error("brickwall: per-brick circuit needs L gates");
    BrickwallCircuit c;
    c.q_ = bricks.front().q();
    for (const auto& b : bricks)
        if (b.q() != c.q_) throw validation_error("brickwall: bricks differ in local dimension");
    c.L_ = L;
    c.uniform_ = false;
    c.bricks_ = std::move(bricks);
    return c;
}

void apply_two_site(Vec& amp, int q, int L, const Mat& gate, int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= L || b >= L) throw validation_error("apply_two_site: bad site pair");
    const std::int64_t sa = ipow(q, L - 1 - a), sb = ipow(q, L - 1 - b);
    const int qq = q * q;
    const std::int64_t hi_s = std::max(sa, sb), lo_s = std::min(sa, sb);
    const std::int64_t n_hi = amp.size() / (hi_s * q);
    const std::int64_t n_mid = hi_s / (lo_s * q);
    cplx* d = amp.data();

    if (sa == q * sb && sb >= 8) {
        // adjacent sites, long contiguous tail: block GEMM per leading index
        using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        RowMat tmp(qq, sb);
        for (std::int64_t h = 0; h < n_hi; ++h) {
            Eigen::Map<RowMat> blk(d + h * qq * sb, qq, sb);
            tmp.noalias() = gate * blk;
            blk = tmp;
        }
        return;
    }

    // generic gather/scatter; component (da, db) maps to gate index da*q+db
    std::vector<std::int64_t> off(qq);
    for (int da = 0; da < q; ++da)
        for (int db = 0; db < q; ++db) off[da * q + db] = da * sa + db * sb;
    std::vector<cplx> in(qq), out(qq);
    for (std::int64_t h = 0; h < n_hi; ++h)
        for (std::int64_t m = 0; m < n_mid; ++m)
            for (std::int64_t l = 0; l < lo_s; ++l) {
                const std::int64_t base = h * hi_s * q + m * lo_s * q + l;
                for (int k = 0; k < qq; ++k) in[k] = d[base + off[k]];
                for (int r = 0; r < qq; ++r) {
                    cplx acc = 0.0;
                    for (int k = 0; k < qq; ++k) acc += gate(r, k) * in[k];
                    out[r] = acc;
                }
                for (int k = 0; k < qq; ++k) d[base + off[k]] = out[k];
            }
}

namespace {

void apply_step(Vec& amp, const BrickwallCircuit& c) {
    const int L = c.L(), q = c.q(), half = L / 2;
    for (int b = 0; b < half; ++b) apply_two_site(amp, q, L, c.brick(b).matrix(), 2 * b + 1, (2 * b + 2) % L);
    for (int b = 0; b < half; ++b) apply_two_site(amp, q, L, c.brick(half + b).matrix(), 2 * b, 2 * b + 1);
}

}  // namespace

Mat BrickwallCircuit::dense_unitary(int steps) const {
    const std::int64_t d = ipow(q_, L_);
    if (d > 1024) throw guard_error("dense_unitary: q^L exceeds 1024");
    Mat u = Mat::Identity(d, d);
    for (std::int64_t col = 0; col < d; ++col) {
        Vec v = u.col(col);
        for (int t = 0; t < steps; ++t) apply_step(v, *this);
        u.col(col) = v;
    }
    return u;
}

void evolve(ChainState& s, const BrickwallCircuit& c, int steps) {
    if (s.q != c.q() || s.L != c.L()) throw validation_error("evolve: state and circuit dimensions differ");
    if (steps < 0) throw validation_error("evolve: negative step count");
    for (int t = 0; t < steps; ++t) apply_step(s.amp, c);
}

std::vector<int> half_block(int L) {
    std::vector<int> a;
    for (int k = L / 4; k < L - L / 4; ++k) a.push_back(k);
    return a;
}

Mat reduced_density(const ChainState& s, const std::vector<int>& sites) {
    if (sites.empty()) throw validation_error("reduced_density: empty site set");
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (sites[i] < 0 || sites[i] >= s.L) throw validation_error("reduced_density: site out of range");
        if (i > 0 && sites[i] != sites[i - 1] + 1) throw validation_error("reduced_density: sites must be contiguous");
    }
    const Mat m = legs_to_matrix(s.amp.data(), s.L, s.q, sites);
    return m * m.adjoint();
}

double von_neumann(const Mat& rho) { return von_neumann_of(hermitian_eigenvalues(rho)); }

double renyi_entropy(const Mat& rho, double alpha) {
    if (alpha == 1.0) return von_neumann(rho);
    if (!(alpha > 0.0)) throw validation_error("renyi_entropy: alpha must be positive");
    if (alpha == 2.0) return -std::log(rho.squaredNorm());
    return renyi_of(hermitian_eigenvalues(rho), alpha);
}

namespace {

double gram_entropy(const Mat& m, double alpha) {
    if (alpha == 2.0) return -std::log(gram_purity(m));
    return renyi_of(hermitian_eigenvalues(small_gram(m)), alpha);
}

}  // namespace

double block_entropy(const ChainState& s, const std::vector<int>& sites, double alpha) {
    return gram_entropy(legs_to_matrix(s.amp.data(), s.L, s.q, sites), alpha);
}

CMatrix c_matrix(const TwoQuditGate& g, const PairKernel& k, int x) {
    if (x < 1) throw validation_error("c_matrix: x must be >= 1");
    if (g.q() != k.q()) throw validation_error("c_matrix: gate and kernel dimensions differ");
    const int q = g.q(), n = 2 * x;
    ChainState s = initial_state(k, x);
    for (int r = 1; r < x; ++r)
        for (int j = 0; j < x - r; ++j) apply_two_site(s.amp, q, n, g.matrix(), r + 2 * j, r + 2 * j + 1);
    const std::int64_t dim = ipow(q, x);
    // amplitude index = row * q^x + col, i.e. row-major
    Mat c(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r)
        for (std::int64_t col = 0; col < dim; ++col) c(r, col) = s.amp(r * dim + col);
    return {q, x, std::move(c)};
}

double c_entropy(const CMatrix& c, double alpha) { return 2.0 * gram_entropy(c.matrix, alpha); }

int kappa(int t, int L) {
    if (L == 0) return 2 * t;
    return ((L / 4) % 2 == 0) ? 2 * t : 2 * t + 1;
}

double factorized_entropy(const TwoQuditGate& g, const PairKernel& k, double alpha, int t, int L) {
    const int kap = kappa(t, L);
    if (L != 0) {
        if (L % 4) throw validation_error("factorized entropy needs L divisible by 4");
        if (2 * kap > L / 2) {
            std::ostringstream os;
            os << "factorized entropy: t=" << t << " is past the window (2 kappa_t = " << 2 * kap << " > L/2 = " << L / 2
               << ")";
            throw guard_error(os.str());
        }
    }
    if (kap == 0) return 0.0;
    return c_entropy(c_matrix(g, k, kap), alpha);
}

std::vector<EntanglementRecord> entropy_profile(const TwoQuditGate& g, const PairKernel& k, double alpha, int t_max,
                                                const ProfileOptions& opt) {
    if (t_max < 1) throw validation_error("entropy_profile: t_max must be >= 1");
    if (!(alpha > 0.0)) throw validation_error("entropy_profile: alpha must be positive");
    const int q = g.q(), L = opt.L;
    const double lnq = std::log(double(q));
    if (L == 0) {
        check_state_budget(q, 2 * kappa(t_max, 0), opt.memory_budget_mb, "entropy_profile (C matrix)");
    } else {
        if (L < 4 || L % 2) throw validation_error("entropy_profile: L must be even and >= 4");
        check_state_budget(q, L, opt.memory_budget_mb, "entropy_profile (state vector)");
    }
    auto in_window = [&](int t) { return L == 0 || (L % 4 == 0 && 2 * kappa(t, L) <= L / 2); };

    std::vector<double> s(t_max + 1);
    std::vector<std::string> method(t_max + 1);
    ChainState state;
    int state_t = 0;
    const auto block = L ? half_block(L) : std::vector<int>{};
    for (int t = 0; t <= t_max; ++t) {
        if (in_window(t)) {
            s[t] = factorized_entropy(g, k, alpha, t, L);
            method[t] = "factorized";
            continue;
        }
        if (state.L == 0) {
            state = initial_state(k, L / 2);
            state_t = 0;
        }
        evolve(state, BrickwallCircuit::uniform(g, L), t - state_t);
        state_t = t;
        s[t] = block_entropy(state, block, alpha);
        method[t] = "direct";
    }

    std::vector<EntanglementRecord> out;
    for (int t = 1; t <= t_max; ++t) {
        EntanglementRecord r;
        r.t = t;
        r.kappa = kappa(t, L);
        r.alpha = alpha;
        r.s = s[t];
        r.v_e = s[t] / (2.0 * r.kappa * lnq);
        r.delta_s = (s[t] - s[t - 1]) / (4.0 * lnq);
        r.method = method[t];
        out.push_back(r);
    }
    return out;
}

}  // namespace dualbrick
