#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dualbrick/gates.hpp"

namespace dualbrick {

enum class Direction { Plus, Minus };

// row-vectorized superoperator on q x q operators, vec(a)[i*q+j] = a_ij
struct ChannelMatrix {
    int q = 0;
    Direction direction = Direction::Plus;
    Mat matrix;
};

// (1/q)[U^{T2} U^{T2}+]^{R1} for plus, ^{R2} for minus
ChannelMatrix m_channel(const TwoQuditGate& u, Direction dir);

// brute force on the operator basis: a -> tr_1[U+ (a x 1) U]/q (plus),
// a -> tr_2[U (1 x a) U+]/q (minus)
ChannelMatrix direct_superoperator(const TwoQuditGate& u, Direction dir);

enum class ErgodicClass { Noninteracting, Nonergodic, ErgodicNonmixing, ErgodicMixing, Bernoulli };
std::string to_string(ErgodicClass c);

inline constexpr double kSpectrumTol = 1e-8;

struct ChannelSpectrum {
    cplx trivial;              // removed mode, equals 1 for a unital channel
    std::vector<cplx> rest;    // sorted by |lambda| descending
    cplx lambda1;
    double mu1 = std::numeric_limits<double>::infinity();  // -ln|lambda1|
    ErgodicClass cls = ErgodicClass::Noninteracting;
};

// throws a numerical error if M does not fix the vectorized identity
ChannelSpectrum spectrum_report(const ChannelMatrix& m, double tol = kSpectrumTol);

inline double norm_identity_target(int q, double ep) { return (double(q) * q - 1.0) * (1.0 - ep) + 1.0; }

struct LambdaMember {
    std::size_t index = 0;
    cplx lambda1;
    double abs_lambda1 = 0.0;
    double mu1 = 0.0;
    ErgodicClass cls = ErgodicClass::Noninteracting;
    double norm_deviation = 0.0;  // | ||M+||_F^2 - ((q^2-1)(1-eP)+1) |
    double trivial_deviation = 0.0;  // |trivial eigenvalue - 1|
};

struct EnsembleLambdaStats {
    double ep = 0.0;
    std::size_t n = 0;
    double mean_abs = 0.0;
    double min_abs = 0.0;
    double max_abs = 0.0;
    double range = 0.0;
    double dispersion = 0.0;  // range / mean, 0 when mean is below kSpectrumTol
    double max_norm_deviation = 0.0;
    double max_trivial_deviation = 0.0;
    std::vector<LambdaMember> members;
};

// n Haar dressings; member i draws from stream (seed, i)
EnsembleLambdaStats ensemble_lambda_stats(const TwoQuditGate& u, std::size_t n, std::uint64_t seed,
                                          int workers = 1, Direction dir = Direction::Plus);

struct FudgeFit {
    double f = 0.0;
    double residual = 0.0;  // sum of squared residuals
    std::vector<double> residuals;
};

struct TwoSegmentFit {
    double split = 0.0;  // low segment: e_P <= split
    FudgeFit low, high;
    double residual = 0.0;
};

// least squares of mean|lambda1| ~ f sqrt(1 - e_P)
FudgeFit fudge_fit(const std::vector<std::pair<double, double>>& samples);
TwoSegmentFit fudge_fit_two_segment(const std::vector<std::pair<double, double>>& samples);

inline double mixing_threshold(int q) { return (double(q) * q - 2.0) / (double(q) * q - 1.0); }

}  // namespace dualbrick
