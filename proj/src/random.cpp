#include "dualbrick/random.hpp"

#include <cmath>

namespace dualbrick {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> labels) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t l : labels) h = splitmix64(h ^ splitmix64(l + 0x632be59bd9b4e019ULL));
    return h;
}

Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> labels) {
    return Rng(derive_seed(base, labels));
}

Mat complex_gaussian(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    Mat z(rows, cols);
    // fill row by row so the draw order does not depend on storage layout
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double re = nd(rng);
            const double im = nd(rng);
            z(i, j) = cplx(re, im);
        }
    return z;
}

Mat haar_unitary(int q, Rng& rng) {
    Mat z = complex_gaussian(q, q, rng);
    Eigen::HouseholderQR<Mat> qr(z);
    Mat qm = qr.householderQ() * Mat::Identity(q, q);
    const Mat& r = qr.matrixQR();
    for (int j = 0; j < q; ++j) {
        const cplx d = r(j, j);
        const double a = std::abs(d);
        qm.col(j) *= (a > 0.0) ? d / a : cplx(1.0);
    }
    return qm;
}

Vec haar_state(int q, Rng& rng) {
    Vec v = complex_gaussian(q, 1, rng).col(0);
    return v / v.norm();
}

}  // namespace dualbrick
