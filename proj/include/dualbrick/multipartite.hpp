#pragma once

#include <cstdint>
#include <vector>

#include "dualbrick/circuit.hpp"

namespace dualbrick {

// tr(rho_S^2) for an arbitrary site subset
double subset_purity(const ChainState& s, const std::vector<int>& subset);

double meyer_wallach(const ChainState& s);
double scott(const ChainState& s, int r, int workers = 1);

struct AmeGme {
    double e_raw = 0.0;
    double e_gm = 0.0;
    std::size_t terms = 0;  // M = sum_s C(L, s)
};

AmeGme ame_gme(const ChainState& s, int workers = 1);

// mean von Neumann entropy over all C(L, L/2) halves, log base q
double avg_vn_half(const ChainState& s, int workers = 1);

struct MultipartiteReport {
    double q_mw = 0.0;
    std::vector<std::pair<int, double>> q_r;
    double e_raw = 0.0;
    double e_gm = 0.0;
    double s_vn = 0.0;
};

// one pass over every subset size 1..L/2; the half-size subsets are shared by
// the Scott measure, the AME-GME product and the von Neumann average
MultipartiteReport multipartite_report(const ChainState& s, int workers = 1);

// two-copy closed form with C = (2/(q(q+1)))^L; guarded to q^(2L) <= 4096
double multipartite_ep(const Mat& u, int q, int L, int r);

struct MpEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// defining average of the Scott measure over Haar product inputs
MpEstimate multipartite_ep_mc(const Mat& u, int q, int L, int r, std::size_t samples, std::uint64_t seed);

// operator entanglement across the half cut (first L/2 sites | rest)
double operator_entanglement_half(const Mat& u, int q, int L);

// half-system operator-space entangling power
double operator_space_ep(const Mat& u, int q, int L);

// Monte Carlo over Haar product operators x_A (x) y_B of E(U+ (x (x) y) U)
MpEstimate operator_space_ep_mc(const Mat& u, int q, int L, std::size_t samples, std::uint64_t seed);

}  // namespace dualbrick
