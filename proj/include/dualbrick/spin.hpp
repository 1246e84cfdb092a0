#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualbrick/linalg.hpp"

namespace dualbrick {

enum class IsingClass { Integrable, Chaotic, Anderson, MBL };
std::string to_string(IsingClass c);
IsingClass parse_ising_class(const std::string& s);
inline bool is_disordered(IsingClass c) { return c == IsingClass::Anderson || c == IsingClass::MBL; }

struct IsingSpec {
    int L = 6;
    double h = 0.0;
    std::vector<double> g;
    IsingClass cls = IsingClass::Integrable;
    std::uint64_t seed = 0;
    std::uint64_t realization = 0;
};

// class presets; disordered fields g_i ~ U[-10, 10] from stream (seed, realization)
IsingSpec ising_preset(IsingClass cls, int L, std::uint64_t seed, std::uint64_t realization);

// H = -sum_{i<L-1} Z_i Z_{i+1} - sum_i (h Z_i + g_i X_i), open chain, L <= 10
RMat ising_hamiltonian(const IsingSpec& spec);

// exp(-i H t) from a cached eigendecomposition
class Propagator {
public:
    explicit Propagator(const RMat& h);
    Mat at(double t) const;
    const RVec& energies() const { return e_; }

private:
    RVec e_;
    RMat v_;
};

Mat propagator(const RMat& h, double t);

// mean consecutive level-spacing ratio of a sorted spectrum
double level_spacing_ratio(const RVec& sorted_energies);

struct EpPoint {
    double t = 0.0;
    double ep = 0.0;
};

// multipartite entangling power of exp(-iHt) at each time, L <= 6
std::vector<EpPoint> ising_ep_profile(const IsingSpec& spec, int r, const std::vector<double>& times, int workers = 1);

struct ClassProfile {
    IsingClass cls;
    std::vector<double> times;
    std::vector<std::vector<double>> realizations;  // [realization][time]
    std::vector<double> mean, stdev;                // across realizations
};

// disorder-free classes use one realization regardless of the request
ClassProfile ising_class_profile(IsingClass cls, int L, int r, const std::vector<double>& times, int realizations,
                                 std::uint64_t seed, int workers = 1);

std::vector<double> time_grid(double t_end, double dt);

}  // namespace dualbrick
