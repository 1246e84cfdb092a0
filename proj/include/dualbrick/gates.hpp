#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dualbrick/linalg.hpp"
#include "dualbrick/random.hpp"

namespace dualbrick {

// Two-qudit operator, q^2 x q^2, row (i,j) -> i*q+j.  U_{ijkl} = <ij|U|kl>.
class TwoQuditGate {
public:
    TwoQuditGate() = default;
    // validates shape and unitarity (kUnitaryTol)
    TwoQuditGate(int q, Mat m);
    // shape check only; used for intermediate non-unitary operators
    static TwoQuditGate unchecked(int q, Mat m);

    int q() const { return q_; }
    const Mat& matrix() const { return m_; }
    cplx element(int i, int j, int k, int l) const { return m_(i * q_ + j, k * q_ + l); }

private:
    int q_ = 0;
    Mat m_;
};

enum class Rearrangement { R1, R2, T1, T2 };

Rearrangement parse_rearrangement(const std::string& tag);

// explicit four-index exchanges, each an involution
Mat rearrange(const Mat& u, int q, Rearrangement kind);
inline Mat rearrange(const TwoQuditGate& u, Rearrangement kind) {
    return rearrange(u.matrix(), u.q(), kind);
}

Mat swap_gate(int q);

enum class GateKind { GenericUnitary, DualUnitary, TwoUnitary };
std::string to_string(GateKind k);

struct GateClass {
    GateKind kind = GateKind::GenericUnitary;
    double unitarity_residual = 0.0;
    double r_residual = 0.0;  // realignment residual
    double t_residual = 0.0;  // partial-transpose residual
};

// throws a numerical error reporting the residual when U is not unitary
GateClass classify_gate(const TwoQuditGate& u, double tol = kUnitaryTol);

struct GateEntanglement {
    double e_u;   // E(U)
    double e_us;  // E(U S)
};

GateEntanglement gate_entanglement(const TwoQuditGate& u);
inline double swap_entanglement(int q) { return 1.0 - 1.0 / (double(q) * q); }

struct EntanglingPower {
    double normalized;  // in [0,1]
    double raw;         // q^2/(q+1)^2 (E(U)+E(US)-E(S))
};

EntanglingPower entangling_power_full(const TwoQuditGate& u);
inline double entangling_power(const TwoQuditGate& u) { return entangling_power_full(u).normalized; }

struct LocalDressing {
    Mat u1, u2, v1, v2;
};

LocalDressing random_dressing(int q, Rng& rng);
LocalDressing identity_dressing(int q);

// (u1 x u2) U (v1 x v2)
TwoQuditGate dress_local(const TwoQuditGate& u, const LocalDressing& d);

struct CartanParams {
    double j3 = 0.0;
    double phi = 0.0;
    std::optional<Mat> u_plus, u_minus, v_plus, v_minus;
};

// e^{i phi} (u+ x u-) SWAP D(J3) (v+ x v-), qubits only
TwoQuditGate cartan_du(const CartanParams& p);
inline TwoQuditGate cartan_du(double j3) {
    CartanParams p;
    p.j3 = j3;
    return cartan_du(p);
}

struct MRResult {
    TwoQuditGate gate;
    std::vector<double> residuals;  // dual-unitarity residual after each iteration
    double operator_entanglement = 0.0;
};

// iterate V <- W X^dagger from the SVD of V^{R2} = W S X^dagger
MRResult mr_generate(const TwoQuditGate& seed, int iterations);

struct PermutationSpec {
    std::vector<std::vector<int>> k;  // entries 1..q
    std::vector<std::vector<int>> l;
};

struct PermutationReport {
    bool dual_unitary = false;
    bool orthogonal_latin = false;
    std::vector<int> k_bad_rows;  // rows of K with a repeated entry
    std::vector<int> l_bad_cols;  // columns of L with a repeated entry
    std::string message;
};

struct PermutationResult {
    TwoQuditGate gate;
    PermutationReport report;
};

// P = sum_ij |k_ij - 1, l_ij - 1><i j|; throws when the map is not a bijection
PermutationResult permutation_gate(const PermutationSpec& spec);

// K_ij = i+j mod q, L_ij = i+2j mod q (1-based entries): orthogonal Latin pair for odd prime q
PermutationSpec latin_square_spec(int q);

// |psi_PQRS>, amplitude U[(p,q),(r,s)]/q on leg order P,Q,R,S
Vec choi_state(const TwoQuditGate& u);

}  // namespace dualbrick
