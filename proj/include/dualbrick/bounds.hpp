#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualbrick/circuit.hpp"

namespace dualbrick {

struct BoundInputs {
    int q = 2;
    double ep = 0.0;  // normalized entangling power
    double c = 1.0;   // kernel parameter tr((m m+)^2)/q
    double chi() const;
    double eta() const;  // (1-eP)^2 + eP^2/(q^2-1)
};

// Coefficient choices for the closed forms.  The defaults (k2 = 1, leading
// c/q^3, corrected four-kernel recursion) are the ones the sampling oracle
// confirms; the alternatives are kept for comparison runs.
struct BoundConfig {
    int k2 = 1;
    bool c_lead = true;
    bool p4_printed = false;
    std::string tag() const;
};

struct BoundValue {
    double value = 0.0;  // closed form, clamped to [q^-x, 1]
    double raw = 0.0;    // closed form before clamping
    bool exact = false;  // x <= 2 with the default configuration
};

BoundValue analytic_p(int x, const BoundInputs& in, const BoundConfig& cfg = {});

struct McEstimate {
    double mean = 0.0;    // E tr[(C' C'+)^2]
    double stderr_ = 0.0;
    double mean_s2 = 0.0;  // E[-2 ln tr[(C' C'+)^2]]
    std::size_t samples = 0;
};

// sample s draws its dressing from stream (seed, s)
McEstimate mc_p_oracle(const TwoQuditGate& g, const PairKernel& k, int x, std::size_t samples, std::uint64_t seed,
                       int workers = 1);

struct BoundPoint {
    int x = 0;
    double p = 0.0;        // P_x
    double p_scaled = 0.0;  // p_x = q^x P_x
    double s_bound = 0.0;   // -2 ln P_x = 2x ln q - 2 ln p_x
    double subtracted = 0.0;  // ln p_x / (x ln q)
    double v_bound = 0.0;   // 1 - ln p_x / (x ln q)
    bool exact = false;
};

std::vector<BoundPoint> bound_curve(const BoundInputs& in, const BoundConfig& cfg = {});

}  // namespace dualbrick
