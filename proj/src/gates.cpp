#include "dualbrick/gates.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "dualbrick/errors.hpp"

namespace dualbrick {

namespace {

void check_shape(int q, const Mat& m) {
    if (q < 2) throw validation_error("gate: q must be >= 2");
    if (m.rows() != q * q || m.cols() != q * q)
        throw validation_error("gate: matrix must be q^2 x q^2");
}

}  // namespace

TwoQuditGate::TwoQuditGate(int q, Mat m) : q_(q), m_(std::move(m)) {
    check_shape(q_, m_);
    const double r = unitarity_residual(m_);
    if (!(r <= kUnitaryTol)) {
        std::ostringstream os;
        os << "gate is not unitary: residual " << r;
        throw numerical_error(os.str());
    }
}

TwoQuditGate TwoQuditGate::unchecked(int q, Mat m) {
    check_shape(q, m);
    TwoQuditGate g;
    g.q_ = q;
    g.m_ = std::move(m);
    return g;
}

Rearrangement parse_rearrangement(const std::string& tag) {
    if (tag == "R1") return Rearrangement::R1;
    if (tag == "R2") return Rearrangement::R2;
    if (tag == "T1") return Rearrangement::T1;
    if (tag == "T2") return Rearrangement::T2;
    throw validation_error("unknown rearrangement kind '" + tag + "'");
}

Mat rearrange(const Mat& u, int q, Rearrangement kind) {
    check_shape(q, u);
    Mat out(q * q, q * q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            for (int k = 0; k < q; ++k)
                for (int l = 0; l < q; ++l) {
                    const cplx v = u(i * q + j, k * q + l);
                    switch (kind) {
                        case Rearrangement::R1: out(l * q + j, k * q + i) = v; break;
                        case Rearrangement::R2: out(i * q + k, j * q + l) = v; break;
                        case Rearrangement::T1: out(k * q + j, i * q + l) = v; break;
                        case Rearrangement::T2: out(i * q + l, k * q + j) = v; break;
                    }
                }
    return out;
}

Mat swap_gate(int q) {
    Mat s = Mat::Zero(q * q, q * q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) s(j * q + i, i * q + j) = 1.0;
    return s;
}

std::string to_string(GateKind k) {
    switch (k) {
        case GateKind::GenericUnitary: return "GenericUnitary";
        case GateKind::DualUnitary: return "DualUnitary";
        case GateKind::TwoUnitary: return "TwoUnitary";
    }
    return "?";
}

GateClass classify_gate(const TwoQuditGate& u, double tol) {
    GateClass c;
    c.unitarity_residual = unitarity_residual(u.matrix());
    if (!(c.unitarity_residual <= tol)) {
        std::ostringstream os;
        os << "classify_gate: input not unitary, residual " << c.unitarity_residual;
        throw numerical_error(os.str());
    }
    c.r_residual = unitarity_residual(rearrange(u, Rearrangement::R1));
    c.t_residual = unitarity_residual(rearrange(u, Rearrangement::T2));
    if (c.r_residual <= tol) c.kind = (c.t_residual <= tol) ? GateKind::TwoUnitary : GateKind::DualUnitary;
    return c;
}

GateEntanglement gate_entanglement(const TwoQuditGate& u) {
    const double q4 = std::pow(double(u.q()), 4);
    return {1.0 - gram_purity(rearrange(u, Rearrangement::R1)) / q4,
            1.0 - gram_purity(rearrange(u, Rearrangement::T2)) / q4};
}

EntanglingPower entangling_power_full(const TwoQuditGate& u) {
    const double q = u.q();
    const auto e = gate_entanglement(u);
    const double es = swap_entanglement(u.q());
    const double bracket = e.e_u + e.e_us - es;
    const double raw = q * q / ((q + 1) * (q + 1)) * bracket;
    return {raw / ((q - 1) / (q + 1)), raw};
}

LocalDressing random_dressing(int q, Rng& rng) {
    LocalDressing d;
    d.u1 = haar_unitary(q, rng);
    d.u2 = haar_unitary(q, rng);
    d.v1 = haar_unitary(q, rng);
    d.v2 = haar_unitary(q, rng);
    return d;
}

LocalDressing identity_dressing(int q) {
    const Mat i = Mat::Identity(q, q);
    return {i, i, i, i};
}

TwoQuditGate dress_local(const TwoQuditGate& u, const LocalDressing& d) {
    const int q = u.q();
    for (const Mat* f : {&d.u1, &d.u2, &d.v1, &d.v2}) {
        if (f->rows() != q || f->cols() != q) throw validation_error("dress_local: factor dimension mismatch");
        if (unitarity_residual(*f) > kUnitaryTol) throw numerical_error("dress_local: factor not unitary");
    }
    Mat m = kron(d.u1, d.u2) * u.matrix() * kron(d.v1, d.v2);
    return TwoQuditGate(q, std::move(m));
}

TwoQuditGate cartan_du(const CartanParams& p) {
    constexpr double kQuarterPi = 0.78539816339744830962;
    if (!(p.j3 >= 0.0 && p.j3 <= kQuarterPi + 1e-15))
        throw validation_error("cartan_du: J3 must lie in [0, pi/4]");
    const cplx i(0.0, 1.0);
    const cplx a = std::exp(-i * p.j3);
    const cplx b = -i * std::exp(i * p.j3);
    Mat d = Mat::Zero(4, 4);
    d(0, 0) = a;
    d(1, 1) = b;
    d(2, 2) = b;
    d(3, 3) = a;
    const Mat id = Mat::Identity(2, 2);
    Mat left = kron(p.u_plus.value_or(id), p.u_minus.value_or(id));
    Mat right = kron(p.v_plus.value_or(id), p.v_minus.value_or(id));
    Mat m = std::exp(i * p.phi) * left * swap_gate(2) * d * right;
    return TwoQuditGate(2, std::move(m));
}

MRResult mr_generate(const TwoQuditGate& seed, int iterations) {
    if (iterations < 1) throw validation_error("mr_generate: iterations must be >= 1");
    const int q = seed.q();
    Mat v = seed.matrix();
    MRResult res;
    res.residuals.reserve(iterations);
    for (int it = 0; it < iterations; ++it) {
        Eigen::JacobiSVD<Mat> svd(rearrange(v, q, Rearrangement::R2), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const RVec& s = svd.singularValues();
        if (!(s.minCoeff() > 1e-13 * std::max(1.0, s.maxCoeff()))) {
            std::ostringstream os;
            os << "mr_generate: degenerate realignment at iteration " << it << " (smallest singular value "
               << s.minCoeff() << ")";
            throw numerical_error(os.str());
        }
        v = svd.matrixU() * svd.matrixV().adjoint();
        res.residuals.push_back(unitarity_residual(rearrange(v, q, Rearrangement::R1)));
    }
    res.gate = TwoQuditGate(q, std::move(v));
    res.operator_entanglement = gate_entanglement(res.gate).e_u;
    return res;
}

PermutationResult permutation_gate(const PermutationSpec& spec) {
    const int q = static_cast<int>(spec.k.size());
    if (q < 2 || spec.l.size() != spec.k.size()) throw validation_error("permutation_gate: K and L must be q x q");
    for (int i = 0; i < q; ++i)
        if (static_cast<int>(spec.k[i].size()) != q || static_cast<int>(spec.l[i].size()) != q)
            throw validation_error("permutation_gate: K and L must be q x q");

    Mat p = Mat::Zero(q * q, q * q);
    std::set<std::pair<int, int>> images;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            const int k = spec.k[i][j], l = spec.l[i][j];
            if (k < 1 || k > q || l < 1 || l > q) throw validation_error("permutation_gate: entries must lie in 1..q");
            if (!images.insert({k, l}).second) {
                std::ostringstream os;
                os << "permutation_gate: pair (" << k << "," << l << ") repeated, not a permutation";
                throw validation_error(os.str());
            }
            p((k - 1) * q + (l - 1), i * q + j) = 1.0;
        }

    PermutationReport rep;
    for (int i = 0; i < q; ++i) {
        std::set<int> row(spec.k[i].begin(), spec.k[i].end());
        if (static_cast<int>(row.size()) != q) rep.k_bad_rows.push_back(i);
    }
    for (int j = 0; j < q; ++j) {
        std::set<int> col;
        for (int i = 0; i < q; ++i) col.insert(spec.l[i][j]);
        if (static_cast<int>(col.size()) != q) rep.l_bad_cols.push_back(j);
    }
    rep.dual_unitary = rep.k_bad_rows.empty() && rep.l_bad_cols.empty();

    auto latin = [q](const std::vector<std::vector<int>>& a) {
        for (int i = 0; i < q; ++i) {
            std::set<int> r, c;
            for (int j = 0; j < q; ++j) {
                r.insert(a[i][j]);
                c.insert(a[j][i]);
            }
            if (static_cast<int>(r.size()) != q || static_cast<int>(c.size()) != q) return false;
        }
        return true;
    };
    // a bijective pair map already makes (K,L) orthogonal once both are Latin
    rep.orthogonal_latin = latin(spec.k) && latin(spec.l);

    std::ostringstream os;
    if (rep.dual_unitary) {
        os << "dual-unitary permutation";
        if (rep.orthogonal_latin) os << "; K, L orthogonal Latin squares (2-unitary)";
    } else {
        os << "not dual-unitary:";
        for (int r : rep.k_bad_rows) os << " K row " << r + 1 << " repeats an entry;";
        for (int c : rep.l_bad_cols) os << " L column " << c + 1 << " repeats an entry;";
    }
    rep.message = os.str();
    return {TwoQuditGate(q, std::move(p)), std::move(rep)};
}

PermutationSpec latin_square_spec(int q) {
    PermutationSpec s;
    s.k.assign(q, std::vector<int>(q));
    s.l.assign(q, std::vector<int>(q));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            s.k[i][j] = (i + j) % q + 1;
            s.l[i][j] = (i + 2 * j) % q + 1;
        }
    return s;
}

Vec choi_state(const TwoQuditGate& u) {
    const int q = u.q();
    Vec psi(q * q * q * q);
    for (int a = 0; a < q * q; ++a)
        for (int b = 0; b < q * q; ++b) psi(a * q * q + b) = u.matrix()(a, b) / double(q);
    return psi;
}

}  // namespace dualbrick
