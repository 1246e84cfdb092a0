#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualbrick/circuit.hpp"
#include "dualbrick/gates.hpp"

namespace dualbrick {

inline constexpr const char* kCodeVersion = "dualbrick 1.0.0";

enum class Experiment { MixingScan, VelocityVsMixing, EntropyProfile, Bounds, MultipartiteProfile, CircuitPowers, Ising };
std::string to_string(Experiment e);

enum class Dressing { Uniform, PerBrick };

struct ExperimentConfig {
    Experiment experiment = Experiment::MixingScan;
    int q = 2;
    int L = 0;
    nlohmann::json gates;   // list of gate descriptors
    nlohmann::json kernel;  // kernel descriptor
    std::size_t ensemble = 100;
    std::vector<double> alphas{2.0};
    int t_max = 5;
    int r = 0;  // 0: L/2
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output = "out";
    Dressing dressing = Dressing::Uniform;
    double memory_budget_mb = 2048.0;
    std::size_t samples = 10000;  // bounds oracle
    int profile_every = 1;        // multipartite-profile: 0 keeps only the final state
    std::vector<std::string> classes;  // ising
    int realizations = 10;
    double t_end = 10.0;
    double dt = 0.25;
    nlohmann::json raw;  // the document as read, echoed into metadata
};

// field-level validation; throws validation errors naming the field
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// every dense allocation the experiment will make is checked before any work starts
void check_config_guards(const ExperimentConfig& cfg);

struct NamedGate {
    std::string label;
    TwoQuditGate gate;
};

// resolves the gate list; random families draw from stream (seed, gate index)
std::vector<NamedGate> build_gates(const ExperimentConfig& cfg);
PairKernel build_kernel(const ExperimentConfig& cfg);

struct RunSummary {
    std::vector<std::string> files;
    nlohmann::json metadata;
};

// writes CSV files plus <experiment>.meta.json under cfg.output
RunSummary run_experiment(const ExperimentConfig& cfg);

struct Table1Row {
    int L = 0, q = 0;
    std::size_t members = 0;
    double scott = 0.0, e_gm = 0.0, s_vn = 0.0;
};

struct Table1 {
    std::vector<Table1Row> rows;
    std::vector<std::string> missing;
    std::string text;
};

// reads saturated-state tables (files or run directories)
Table1 emit_table1(const std::vector<std::string>& paths);

}  // namespace dualbrick
