#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualbrick/gates.hpp"

namespace dualbrick {

// two-site kernel m of the pair-product state, tr(m m+) = q once normalized
class PairKernel {
public:
    PairKernel() = default;
    // rejects kernels whose tr(m m+) deviates from q by more than 1e-12
    PairKernel(int q, Mat m);
    static PairKernel normalized(int q, const Mat& m);

    int q() const { return q_; }
    const Mat& m() const { return m_; }
    double c() const;    // tr((m m+)^2)/q, in [1, q]
    double chi() const;  // (c-1)/sqrt(q^2-1)

private:
    int q_ = 0;
    Mat m_;
};

PairKernel diag_kernel(int q);          // |00> per pair, c = q
PairKernel unitary_kernel(int q, Rng& rng);
PairKernel random_kernel(int q, Rng& rng);

// site 0 is the most significant digit of the amplitude index
struct ChainState {
    int q = 0;
    int L = 0;
    Vec amp;
};

// pair kernels on sites (0,1),(2,3),...
ChainState initial_state(const PairKernel& k, int pairs);

// Periodic brickwall.  One step applies the straddling sub-layer
// (1,2),(3,4),...,(L-1,0) first, then (0,1),(2,3),...  Brick b < L/2 belongs to
// the straddling sub-layer at sites (2b+1, 2b+2 mod L); brick L/2+b to (2b, 2b+1).
class BrickwallCircuit {
public:
    static BrickwallCircuit uniform(const TwoQuditGate& g, int L);
    static BrickwallCircuit per_brick(std::vector<TwoQuditGate> bricks, int L);

    int q() const { return q_; }
    int L() const { return L_; }
    const TwoQuditGate& brick(int b) const { return uniform_ ? bricks_.front() : bricks_[b]; }

    // dense U(t) = (one step)^t, guarded to q^L <= 1024
    Mat dense_unitary(int steps) const;

private:
    int q_ = 0, L_ = 0;
    bool uniform_ = true;
    std::vector<TwoQuditGate> bricks_;
};

// gate on sites (a, b); a is the first tensor factor
void apply_two_site(Vec& amp, int q, int L, const Mat& gate, int a, int b);

void evolve(ChainState& s, const BrickwallCircuit& c, int steps);

// A = {L/4, ..., L - L/4 - 1}
std::vector<int> half_block(int L);

// contiguous (non-wrapping) sorted site set required
Mat reduced_density(const ChainState& s, const std::vector<int>& sites);

double renyi_entropy(const Mat& rho, double alpha);
double von_neumann(const Mat& rho);

// entropy of a block straight from the Schmidt spectrum of the state
double block_entropy(const ChainState& s, const std::vector<int>& sites, double alpha);

struct CMatrix {
    int q = 0;
    int x = 0;
    Mat matrix;
};

// x kernels m/sqrt(q) on 2x sites, gate triangle on rows r=1..x-1, first x sites as rows
CMatrix c_matrix(const TwoQuditGate& g, const PairKernel& k, int x);

// (2/(1-alpha)) ln tr[(C C+)^alpha]; alpha = 1 gives 2 S_VN(C C+)
double c_entropy(const CMatrix& c, double alpha);

// kappa_t: 2t when L/4 is even or in the infinite-chain mode (L = 0), 2t+1 when L/4 is odd
int kappa(int t, int L);

struct EntanglementRecord {
    int t = 0;
    int kappa = 0;
    double alpha = 2.0;
    double s = 0.0;
    double v_e = 0.0;
    double delta_s = 0.0;
    std::string method;  // "factorized" or "direct"
};

struct ProfileOptions {
    int L = 0;  // 0: infinite chain, factorized path only
    double memory_budget_mb = 2048.0;
};

// entropy in the factorized window 2 kappa_t <= L/2 (any t in infinite mode);
// throws a guard error outside it
double factorized_entropy(const TwoQuditGate& g, const PairKernel& k, double alpha, int t, int L);

std::vector<EntanglementRecord> entropy_profile(const TwoQuditGate& g, const PairKernel& k, double alpha, int t_max,
                                                const ProfileOptions& opt);

// amplitude-count guard shared by every dense path
void check_state_budget(int q, int sites, double budget_mb, const std::string& what);

}  // namespace dualbrick
