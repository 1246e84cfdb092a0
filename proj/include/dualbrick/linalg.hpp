#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace dualbrick {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kUnitaryTol = 1e-10;

// integer power for dimensions; throws on overflow past 2^62
std::int64_t ipow(std::int64_t base, int exp);

Mat kron(const Mat& a, const Mat& b);

// max-abs entry of A A^dagger - I
double unitarity_residual(const Mat& a);

// tr[(M M^dagger)^2], Gram matrix formed on the smaller side
double gram_purity(const Mat& m);

// M M^dagger or M^dagger M, whichever is smaller; both share the nonzero spectrum
Mat small_gram(const Mat& m);

RVec hermitian_eigenvalues(const Mat& h);

// entropies of a probability vector (eigenvalues clipped at zero)
double von_neumann_of(const RVec& p);
double renyi_of(const RVec& p, double alpha);

// Reshape a tensor with n legs of dimension q (leg 0 most significant) into a
// matrix whose row index runs over row_legs and column index over col_legs,
// the first listed leg being the most significant digit in each.
Mat legs_to_matrix(const cplx* data, int n, int q, const std::vector<int>& row_legs,
                   const std::vector<int>& col_legs);

// row_legs given, columns are the remaining legs in ascending order
Mat legs_to_matrix(const cplx* data, int n, int q, const std::vector<int>& row_legs);

// tr(rho_A^2) for rho on n legs of dimension q, A given by local leg positions
double marginal_purity(const Mat& rho, int n, int q, const std::vector<int>& keep);

std::vector<int> complement(const std::vector<int>& legs, int n);

// all size-r subsets of {0..n-1} in lexicographic order
std::vector<std::vector<int>> combinations(int n, int r);

double binomial(int n, int r);

}  // namespace dualbrick
