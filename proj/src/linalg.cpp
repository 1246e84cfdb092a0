#include "dualbrick/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <limits>
#include <mutex>

#include "dualbrick/errors.hpp"

namespace dualbrick {

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (std::int64_t{1} << 62) / base) throw guard_error("dimension overflow");
        r *= base;
    }
    return r;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double unitarity_residual(const Mat& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    Mat p = a * a.adjoint();
    p.diagonal().array() -= 1.0;
    return p.cwiseAbs().maxCoeff();
}

namespace {

// callers parallelize over subsets, so the library itself stays serial
void single_threaded_blas() {
    static std::once_flag flag;
    std::call_once(flag, [] { openblas_set_num_threads(1); });
}

}  // namespace

Mat small_gram(const Mat& m) {
    single_threaded_blas();
    const bool rows_side = m.rows() <= m.cols();
    const Eigen::Index n = rows_side ? m.rows() : m.cols();
    const Eigen::Index k = rows_side ? m.cols() : m.rows();
    Mat g = Mat::Zero(n, n);
    if (n == 0) return g;
    // lower triangle of M M+ (rows side) or M+ M
    cblas_zherk(CblasColMajor, CblasLower, rows_side ? CblasNoTrans : CblasConjTrans, static_cast<int>(n),
                static_cast<int>(k), 1.0, m.data(), static_cast<int>(m.rows()), 0.0, g.data(), static_cast<int>(n));
    g.triangularView<Eigen::StrictlyUpper>() = g.adjoint().eval();
    return g;
}

double gram_purity(const Mat& m) {
    return small_gram(m).squaredNorm();
}

RVec hermitian_eigenvalues(const Mat& h) {
    single_threaded_blas();
    const Eigen::Index n = h.rows();
    if (h.cols() != n) throw validation_error("hermitian_eigenvalues: matrix must be square");
    RVec w(n);
    if (n == 0) return w;
    Mat a = h;
    const lapack_int info = LAPACKE_zheev_2stage(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n),
                                                 reinterpret_cast<lapack_complex_double*>(a.data()),
                                                 static_cast<lapack_int>(n), w.data());
    if (info != 0) throw numerical_error("hermitian eigensolver failed");
    return w;
}

double von_neumann_of(const RVec& p) {
    double s = 0.0;
    for (double v : p)
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

double renyi_of(const RVec& p, double alpha) {
    if (alpha == 1.0) return von_neumann_of(p);
    double t = 0.0;
    for (double v : p)
        if (v > 0.0) t += std::pow(v, alpha);
    return std::log(t) / (1.0 - alpha);
}

namespace {

std::vector<std::int64_t> leg_offsets(int n, int q, const std::vector<int>& legs) {
    std::vector<std::int64_t> stride(n);
    std::int64_t s = 1;
    for (int k = n - 1; k >= 0; --k) {
        stride[k] = s;
        s *= q;
    }
    const std::int64_t count = ipow(q, static_cast<int>(legs.size()));
    std::vector<std::int64_t> off(count, 0);
    // odometer over the listed legs, last leg fastest
    std::vector<int> digit(legs.size(), 0);
    std::int64_t cur = 0;
    for (std::int64_t idx = 0; idx < count; ++idx) {
        off[idx] = cur;
        for (int p = static_cast<int>(legs.size()) - 1; p >= 0; --p) {
            const std::int64_t st = stride[legs[p]];
            if (++digit[p] < q) {
                cur += st;
                break;
            }
            digit[p] = 0;
            cur -= st * (q - 1);
        }
    }
    return off;
}

}  // namespace

Mat legs_to_matrix(const cplx* data, int n, int q, const std::vector<int>& row_legs,
                   const std::vector<int>& col_legs) {
    if (row_legs.size() + col_legs.size() != static_cast<std::size_t>(n))
        throw validation_error("legs_to_matrix: leg lists must cover every leg once");
    const auto ro = leg_offsets(n, q, row_legs);
    const auto co = leg_offsets(n, q, col_legs);
    Mat out(static_cast<Eigen::Index>(ro.size()), static_cast<Eigen::Index>(co.size()));
    for (std::size_t c = 0; c < co.size(); ++c) {
        cplx* dst = out.col(static_cast<Eigen::Index>(c)).data();
        const cplx* base = data + co[c];
        for (std::size_t r = 0; r < ro.size(); ++r) dst[r] = base[ro[r]];
    }
    return out;
}

Mat legs_to_matrix(const cplx* data, int n, int q, const std::vector<int>& row_legs) {
    return legs_to_matrix(data, n, q, row_legs, complement(row_legs, n));
}

double marginal_purity(const Mat& rho, int n, int q, const std::vector<int>& keep) {
    const auto oa = leg_offsets(n, q, keep);
    const auto ob = leg_offsets(n, q, complement(keep, n));
    if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != oa.size() * ob.size())
        throw validation_error("marginal_purity: matrix size does not match the legs");
    double p = 0.0;
    for (std::size_t j = 0; j < oa.size(); ++j)
        for (std::size_t i = 0; i < oa.size(); ++i) {
            cplx acc = 0.0;
            for (std::int64_t b : ob) acc += rho(oa[i] + b, oa[j] + b);
            p += std::norm(acc);
        }
    return p;
}

std::vector<int> complement(const std::vector<int>& legs, int n) {
    std::vector<char> used(n, 0);
    for (int l : legs) {
        if (l < 0 || l >= n || used[l]) throw validation_error("invalid or repeated leg index");
        used[l] = 1;
    }
    std::vector<int> out;
    for (int k = 0; k < n; ++k)
        if (!used[k]) out.push_back(k);
    return out;
}

std::vector<std::vector<int>> combinations(int n, int r) {
    std::vector<std::vector<int>> out;
    if (r < 0 || r > n) return out;
    std::vector<int> c(r);
    for (int i = 0; i < r; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        int i = r - 1;
        while (i >= 0 && c[i] == n - r + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}

}  // namespace dualbrick
