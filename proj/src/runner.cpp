#include "dualbrick/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dualbrick/bounds.hpp"
#include "dualbrick/channel.hpp"
#include "dualbrick/csv.hpp"
#include "dualbrick/errors.hpp"
#include "dualbrick/gate_io.hpp"
#include "dualbrick/multipartite.hpp"
#include "dualbrick/parallel.hpp"
#include "dualbrick/spin.hpp"
#include "dualbrick/stats.hpp"

namespace dualbrick {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// stream labels
constexpr std::uint64_t kStreamGate = 1, kStreamKernel = 2, kStreamDress = 3, kStreamMc = 4, kStreamIsing = 5;

const std::map<std::string, Experiment>& experiment_names() {
    static const std::map<std::string, Experiment> m{
        {"mixing-scan", Experiment::MixingScan},
        {"velocity-vs-mixing", Experiment::VelocityVsMixing},
        {"entropy-profile", Experiment::EntropyProfile},
        {"bounds", Experiment::Bounds},
        {"multipartite-profile", Experiment::MultipartiteProfile},
        {"circuit-powers", Experiment::CircuitPowers},
        {"ising", Experiment::Ising},
    };
    return m;
}

template <class T>
T field(const json& j, const std::string& path, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j[key];
    try {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw validation_error(path + key + ": expected a string");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw validation_error(path + key + ": expected an integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw validation_error(path + key + ": expected a number");
        }
        return v.get<T>();
    } catch (const json::exception&) {
        throw validation_error(path + key + ": wrong type");
    }
}

template <class T>
T required(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) throw validation_error(path + key + ": required field missing");
    return field<T>(j, path, key, T{});
}

std::vector<std::vector<int>> int_matrix(const json& j, const std::string& where) {
    if (!j.is_array()) throw validation_error(where + ": expected a matrix of integers");
    std::vector<std::vector<int>> out;
    for (const auto& row : j) {
        if (!row.is_array()) throw validation_error(where + ": expected a matrix of integers");
        std::vector<int> r;
        for (const auto& e : row) {
            if (!e.is_number_integer()) throw validation_error(where + ": entries must be integers");
            r.push_back(e.get<int>());
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string run_id(const ExperimentConfig& cfg) {
    return field<std::string>(cfg.raw, "config.", "run_id", to_string(cfg.experiment) + "-" + std::to_string(cfg.seed));
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) { return (fs::path(cfg.output) / name).string(); }

json schema_of(const CsvTable& t, const std::string& file) {
    json cols = json::array();
    for (const auto& c : t.columns()) cols.push_back({{"name", c.name}, {"description", c.description}});
    return {{"file", file}, {"columns", cols}};
}

void emit(const CsvTable& t, const ExperimentConfig& cfg, const std::string& name, RunSummary& sum) {
    const std::string p = out_path(cfg, name);
    t.write(p);
    sum.files.push_back(p);
    sum.metadata["outputs"].push_back(schema_of(t, name));
}

std::vector<TwoQuditGate> member_bricks(const TwoQuditGate& base, Dressing mode, int L, std::uint64_t seed,
                                        std::uint64_t gate_id, std::uint64_t member) {
    Rng rng = make_rng(seed, {kStreamDress, gate_id, member});
    if (mode == Dressing::Uniform) return {dress_local(base, random_dressing(base.q(), rng))};
    std::vector<TwoQuditGate> b;
    for (int i = 0; i < L; ++i) b.push_back(dress_local(base, random_dressing(base.q(), rng)));
    return b;
}

BrickwallCircuit member_circuit(const TwoQuditGate& base, Dressing mode, int L, std::uint64_t seed,
                                std::uint64_t gate_id, std::uint64_t member) {
    auto b = member_bricks(base, mode, L, seed, gate_id, member);
    if (mode == Dressing::Uniform) return BrickwallCircuit::uniform(b.front(), L);
    return BrickwallCircuit::per_brick(std::move(b), L);
}

// ---- experiments -------------------------------------------------------

void run_mixing_scan(const ExperimentConfig& cfg, RunSummary& sum) {
    const auto gates = build_gates(cfg);
    CsvTable members({{"gate_id", "index of the base gate"},
                      {"e_P", "normalized entangling power of the base gate"},
                      {"re_lambda1", "real part of the leading nontrivial eigenvalue of M+"},
                      {"im_lambda1", "imaginary part of the leading nontrivial eigenvalue of M+"},
                      {"abs_lambda1", "|lambda1|"},
                      {"mu1", "mixing rate -ln|lambda1| (natural log)"},
                      {"class", "ergodic class at tolerance 1e-8"}});
    CsvTable summary({{"gate_id", "index of the base gate"},
                      {"label", "gate descriptor"},
                      {"e_P", "normalized entangling power"},
                      {"n", "dressings"},
                      {"mean_abs_lambda1", "ensemble mean of |lambda1|"},
                      {"min_abs_lambda1", "minimum |lambda1|"},
                      {"max_abs_lambda1", "maximum |lambda1|"},
                      {"dispersion", "range / mean of |lambda1|"},
                      {"max_norm_deviation", "max | ||M+||_F^2 - ((q^2-1)(1-e_P)+1) |"}});
    std::vector<std::pair<double, double>> fit_pts;
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const auto st = ensemble_lambda_stats(gates[g].gate, cfg.ensemble, derive_seed(cfg.seed, {kStreamDress, g}),
                                              cfg.workers);
        for (const auto& m : st.members)
            members.add_row({(long long)g, st.ep, m.lambda1.real(), m.lambda1.imag(), m.abs_lambda1, m.mu1,
                             to_string(m.cls)});
        summary.add_row({(long long)g, gates[g].label, st.ep, (long long)st.n, st.mean_abs, st.min_abs, st.max_abs,
                         st.dispersion, st.max_norm_deviation});
        fit_pts.push_back({st.ep, st.mean_abs});
    }
    emit(members, cfg, "mixing_members.csv", sum);
    emit(summary, cfg, "mixing_summary.csv", sum);
    try {
        const auto f = fudge_fit(fit_pts);
        sum.metadata["fudge_fit"] = {{"f", f.f}, {"residual", f.residual}};
        const auto t = fudge_fit_two_segment(fit_pts);
        sum.metadata["fudge_fit_two_segment"] = {{"split_e_P", t.split}, {"f_low", t.low.f}, {"f_high", t.high.f},
                                                 {"residual", t.residual}};
    } catch (const Error&) {
        sum.metadata["fudge_fit"] = "not enough distinct e_P values";
    }
}

void run_velocity(const ExperimentConfig& cfg, RunSummary& sum) {
    const auto gates = build_gates(cfg);
    const PairKernel k = build_kernel(cfg);
    const double alpha = cfg.alphas.front();
    const int t = cfg.t_max, kap = kappa(t, 0);
    const double lnq = std::log(double(cfg.q));
    CsvTable members({{"gate_id", "index of the base gate"},
                      {"member", "dressing index"},
                      {"abs_lambda1", "|lambda1| of M+ for the dressed gate"},
                      {"v_E", "entanglement velocity S/(2 kappa_t ln q) from C_kappa_t"}});
    CsvTable summary({{"gate_id", "index of the base gate"},
                      {"e_P", "normalized entangling power"},
                      {"t", "time step"},
                      {"alpha", "Renyi order"},
                      {"mean_abs_lambda1", "ensemble mean |lambda1|"},
                      {"mean_v_E", "ensemble mean v_E"},
                      {"stderr_v_E", "standard error of mean v_E"}});
    std::vector<double> lam_means, v_means;
    for (std::size_t g = 0; g < gates.size(); ++g) {
        std::vector<double> lam(cfg.ensemble), ve(cfg.ensemble);
        parallel_for(cfg.ensemble, cfg.workers, [&](std::size_t i) {
            Rng rng = make_rng(cfg.seed, {kStreamDress, g, i});
            const TwoQuditGate gd = dress_local(gates[g].gate, random_dressing(cfg.q, rng));
            lam[i] = std::abs(spectrum_report(m_channel(gd, Direction::Plus)).lambda1);
            ve[i] = factorized_entropy(gd, k, alpha, t, 0) / (2.0 * kap * lnq);
        });
        for (std::size_t i = 0; i < cfg.ensemble; ++i) members.add_row({(long long)g, (long long)i, lam[i], ve[i]});
        const double ml = mean_of(lam), mv = mean_of(ve);
        lam_means.push_back(ml);
        v_means.push_back(mv);
        summary.add_row({(long long)g, entangling_power(gates[g].gate), (long long)t, alpha, ml, mv,
                         stdev_of(ve) / std::sqrt(double(ve.size()))});
    }
    emit(members, cfg, "velocity_members.csv", sum);
    emit(summary, cfg, "velocity_summary.csv", sum);
    if (gates.size() >= 2) sum.metadata["spearman_v_vs_lambda"] = spearman(lam_means, v_means);
}

void run_entropy_profile(const ExperimentConfig& cfg, RunSummary& sum) {
    const auto gates = build_gates(cfg);
    const PairKernel k = build_kernel(cfg);
    const std::string id = run_id(cfg);
    CsvTable t({{"run_id", "run identifier"},
                {"L", "chain length (0: infinite-chain factorized mode)"},
                {"q", "local dimension"},
                {"e_P", "normalized entangling power"},
                {"seed", "base seed"},
                {"t", "time step"},
                {"alpha", "Renyi order (1: von Neumann)"},
                {"kappa", "kappa_t"},
                {"S", "block entropy, natural log"},
                {"v_E", "S/(2 kappa_t ln q)"},
                {"dS", "(S(t)-S(t-1))/(4 ln q)"},
                {"method", "factorized (C matrix) or direct (state vector)"}});
    const auto& g = gates.front().gate;
    const double ep = entangling_power(g);
    for (double a : cfg.alphas) {
        ProfileOptions opt;
        opt.L = cfg.L;
        opt.memory_budget_mb = cfg.memory_budget_mb;
        for (const auto& r : entropy_profile(g, k, a, cfg.t_max, opt))
            t.add_row({id, (long long)cfg.L, (long long)cfg.q, ep, (long long)cfg.seed, (long long)r.t, a,
                       (long long)r.kappa, r.s, r.v_e, r.delta_s, r.method});
    }
    sum.metadata["kernel_c"] = k.c();
    emit(t, cfg, "entropy_profile.csv", sum);
}

void run_bounds(const ExperimentConfig& cfg, RunSummary& sum) {
    const auto gates = build_gates(cfg);
    const PairKernel k = build_kernel(cfg);
    const BoundConfig def;
    BoundConfig alt2;
    alt2.k2 = 2;
    alt2.c_lead = false;
    BoundConfig alt4;
    alt4.p4_printed = true;
    CsvTable t({{"q", "local dimension"},
                {"c", "kernel parameter tr((m m+)^2)/q"},
                {"chi", "(c-1)/sqrt(q^2-1)"},
                {"e_P", "normalized entangling power"},
                {"x", "number of kernels in C_x"},
                {"P_analytic", "closed form (exact x<=2, upper estimate x>=3)"},
                {"variant", "coefficient configuration"},
                {"P_mc", "sampled mean of tr[(C'C'+)^2]"},
                {"mc_stderr", "standard error of P_mc"},
                {"S_bound", "-2 ln P_analytic (natural log)"},
                {"v_bound", "1 - ln p_x/(x ln q)"},
                {"S2_mc", "sampled mean of -2 ln tr[(C'C'+)^2]"}});
    json sel = json::array();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const BoundInputs in{cfg.q, entangling_power(gates[g].gate), k.c()};
        const auto curve = bound_curve(in, def);
        for (int x = 1; x <= 4; ++x) {
            const auto mc = mc_p_oracle(gates[g].gate, k, x, cfg.samples,
                                        derive_seed(cfg.seed, {kStreamMc, g, (std::uint64_t)x}), cfg.workers);
            const auto& b = curve[x - 1];
            t.add_row({(long long)cfg.q, in.c, in.chi(), in.ep, (long long)x, b.p, def.tag(), mc.mean, mc.stderr_,
                       b.s_bound, b.v_bound, mc.mean_s2});
            const BoundConfig* alt = x == 2 || x == 3 ? &alt2 : (x == 4 ? &alt4 : nullptr);
            if (alt) {
                const auto bv = analytic_p(x, in, *alt);
                t.add_row({(long long)cfg.q, in.c, in.chi(), in.ep, (long long)x, bv.value, alt->tag(), mc.mean,
                           mc.stderr_, -2.0 * std::log(bv.value),
                           1.0 - std::log(std::pow(double(cfg.q), x) * bv.value) / (x * std::log(double(cfg.q))),
                           mc.mean_s2});
            }
            if (x == 2) {
                const double p1 = analytic_p(2, in, def).value, p2 = analytic_p(2, in, alt2).value;
                sel.push_back({{"gate_id", g},
                               {"K2=1_within_3se", std::abs(mc.mean - p1) <= 3 * mc.stderr_},
                               {"K2=2_within_3se", std::abs(mc.mean - p2) <= 3 * mc.stderr_}});
            }
        }
    }
    sum.metadata["p2_selection"] = sel;
    emit(t, cfg, "bounds.csv", sum);
}

void run_multipartite(const ExperimentConfig& cfg, RunSummary& sum) {
    const auto gates = build_gates(cfg);
    const PairKernel k = build_kernel(cfg);
    const int L = cfg.L, r = cfg.r ? cfg.r : L / 2;
    const std::string id = run_id(cfg);
    const auto& base = gates.front().gate;
    struct ProfRow {
        int t;
        double q_mw, q_r;
    };
    std::vector<std::vector<ProfRow>> prof(cfg.ensemble);
    std::vector<MultipartiteReport> fin(cfg.ensemble);
    parallel_for(cfg.ensemble, cfg.workers, [&](std::size_t i) {
        const BrickwallCircuit c = member_circuit(base, cfg.dressing, L, cfg.seed, 0, i);
        ChainState s = initial_state(k, L / 2);
        for (int t = 0; t <= cfg.t_max; ++t) {
            if (t > 0) evolve(s, c, 1);
            if (cfg.profile_every > 0 && t % cfg.profile_every == 0)
                prof[i].push_back({t, meyer_wallach(s), scott(s, r)});
        }
        fin[i] = multipartite_report(s);
    });

    CsvTable p({{"run_id", "run identifier"},
                {"member", "ensemble member"},
                {"t", "time step"},
                {"Q", "Meyer-Wallach measure"},
                {"Q_r", "Scott measure at r = " + std::to_string(r)}});
    for (std::size_t i = 0; i < cfg.ensemble; ++i)
        for (const auto& row : prof[i]) p.add_row({id, (long long)i, (long long)row.t, row.q_mw, row.q_r});
    CsvTable pm({{"run_id", "run identifier"},
                 {"t", "time step"},
                 {"mean_Q", "ensemble mean Meyer-Wallach"},
                 {"mean_Q_r", "ensemble mean Scott measure at r = " + std::to_string(r)},
                 {"stderr_Q_r", "standard error of mean_Q_r"}});
    if (cfg.profile_every > 0)
        for (std::size_t j = 0; j < prof.front().size(); ++j) {
            std::vector<double> a, b;
            for (std::size_t i = 0; i < cfg.ensemble; ++i) {
                a.push_back(prof[i][j].q_mw);
                b.push_back(prof[i][j].q_r);
            }
            pm.add_row({id, (long long)prof.front()[j].t, mean_of(a), mean_of(b),
                        stdev_of(b) / std::sqrt(double(b.size()))});
        }
    CsvTable s({{"run_id", "run identifier"},
                {"L", "chain length"},
                {"q", "local dimension"},
                {"member", "ensemble member"},
                {"t", "time step of the saturated state"},
                {"Q", "Meyer-Wallach measure"},
                {"Q_half", "Scott measure at r = floor(L/2)"},
                {"E_GM", "geometric-mean AME-GME measure"},
                {"E_raw", "un-averaged AME-GME product"},
                {"S_VN", "mean half-system von Neumann entropy, log base q"}});
    for (std::size_t i = 0; i < cfg.ensemble; ++i)
        s.add_row({id, (long long)L, (long long)cfg.q, (long long)i, (long long)cfg.t_max, fin[i].q_mw,
                   fin[i].q_r.back().second, fin[i].e_gm, fin[i].e_raw, fin[i].s_vn});
    if (cfg.profile_every > 0) {
        emit(p, cfg, "multipartite_profile.csv", sum);
        emit(pm, cfg, "multipartite_profile_mean.csv", sum);
    }
    emit(s, cfg, "saturated.csv", sum);
}

void run_circuit_powers(const ExperimentConfig& cfg, RunSummary& sum) {
    const auto gates = build_gates(cfg);
    const int L = cfg.L, r = cfg.r ? cfg.r : L / 2;
    CsvTable t({{"gate_id", "index of the base gate"},
                {"e_P", "normalized entangling power of the base gate"},
                {"member", "dressing index"},
                {"t", "time step"},
                {"ep_Qr", "multipartite entangling power at r = " + std::to_string(r)},
                {"e_OS", "half-system operator-space entangling power"}});
    CsvTable m({{"gate_id", "index of the base gate"},
                {"e_P", "normalized entangling power of the base gate"},
                {"t", "time step"},
                {"mean_ep_Qr", "ensemble mean of ep_Qr"},
                {"mean_e_OS", "ensemble mean of e_OS"}});
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const double ep = entangling_power(gates[g].gate);
        std::vector<std::vector<std::pair<double, double>>> v(cfg.ensemble);
        parallel_for(cfg.ensemble, cfg.workers, [&](std::size_t i) {
            const BrickwallCircuit c = member_circuit(gates[g].gate, cfg.dressing, L, cfg.seed, g, i);
            const Mat step = c.dense_unitary(1);
            Mat w = Mat::Identity(step.rows(), step.cols());
            for (int tt = 0; tt <= cfg.t_max; ++tt) {
                if (tt > 0) w = step * w;
                v[i].push_back({multipartite_ep(w, cfg.q, L, r), operator_space_ep(w, cfg.q, L)});
            }
        });
        for (int tt = 0; tt <= cfg.t_max; ++tt) {
            double a = 0.0, b = 0.0;
            for (std::size_t i = 0; i < cfg.ensemble; ++i) {
                t.add_row({(long long)g, ep, (long long)i, (long long)tt, v[i][tt].first, v[i][tt].second});
                a += v[i][tt].first;
                b += v[i][tt].second;
            }
            m.add_row({(long long)g, ep, (long long)tt, a / cfg.ensemble, b / cfg.ensemble});
        }
    }
    emit(t, cfg, "circuit_powers.csv", sum);
    emit(m, cfg, "circuit_powers_mean.csv", sum);
}

void run_ising(const ExperimentConfig& cfg, RunSummary& sum) {
    const int L = cfg.L, r = cfg.r ? cfg.r : L / 2;
    const auto times = time_grid(cfg.t_end, cfg.dt);
    std::vector<std::string> classes = cfg.classes;
    if (classes.empty()) classes = {"Integrable", "Chaotic", "Anderson", "MBL"};
    CsvTable t({{"class", "Ising class"},
                {"L", "chain length"},
                {"r", "Scott subset size"},
                {"seed", "base seed"},
                {"realization", "disorder realization"},
                {"t", "time (units of the Ising coupling)"},
                {"ep_Qr", "multipartite entangling power of exp(-iHt)"}});
    CsvTable m({{"class", "Ising class"},
                {"t", "time"},
                {"mean_ep_Qr", "mean over realizations"},
                {"std_ep_Qr", "standard deviation over realizations"},
                {"realizations", "realization count"}});
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const IsingClass cls = parse_ising_class(classes[c]);
        const auto prof = ising_class_profile(cls, L, r, times, cfg.realizations,
                                              derive_seed(cfg.seed, {kStreamIsing, (std::uint64_t)cls}), cfg.workers);
        for (std::size_t k = 0; k < prof.realizations.size(); ++k)
            for (std::size_t i = 0; i < times.size(); ++i)
                t.add_row({classes[c], (long long)L, (long long)r, (long long)cfg.seed, (long long)k, times[i],
                           prof.realizations[k][i]});
        for (std::size_t i = 0; i < times.size(); ++i)
            m.add_row({classes[c], times[i], prof.mean[i], prof.stdev[i], (long long)prof.realizations.size()});
    }
    emit(t, cfg, "ising.csv", sum);
    emit(m, cfg, "ising_mean.csv", sum);
}

}  // namespace

std::string to_string(Experiment e) {
    for (const auto& [k, v] : experiment_names())
        if (v == e) return k;
    return "?";
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw validation_error("config: top level must be a JSON object");
    ExperimentConfig c;
    c.raw = j;
    const std::string p = "config.";
    const auto name = required<std::string>(j, p, "experiment");
    const auto it = experiment_names().find(name);
    if (it == experiment_names().end()) throw validation_error(p + "experiment: unknown experiment '" + name + "'");
    c.experiment = it->second;
    c.q = field<int>(j, p, "q", 2);
    if (c.q < 2) throw validation_error(p + "q: must be >= 2");
    c.L = field<int>(j, p, "L", 0);
    if (c.L < 0 || c.L % 2) throw validation_error(p + "L: must be even and non-negative");
    if (j.contains("gates")) {
        if (!j["gates"].is_array() || j["gates"].empty()) throw validation_error(p + "gates: expected a non-empty array");
        c.gates = j["gates"];
    } else if (j.contains("gate")) {
        if (!j["gate"].is_object()) throw validation_error(p + "gate: expected an object");
        c.gates = json::array({j["gate"]});
    } else if (c.experiment != Experiment::Ising) {
        throw validation_error(p + "gate: required field missing (or give 'gates')");
    }
    c.kernel = j.contains("kernel") ? j["kernel"] : json{{"source", "random"}};
    if (!c.kernel.is_object()) throw validation_error(p + "kernel: expected an object");
    const auto ens = field<long long>(j, p, "ensemble", 100);
    if (ens < 1) throw validation_error(p + "ensemble: must be >= 1");
    c.ensemble = static_cast<std::size_t>(ens);
    if (j.contains("alpha")) {
        c.alphas.clear();
        const json& a = j["alpha"];
        if (a.is_number())
            c.alphas.push_back(a.get<double>());
        else if (a.is_array())
            for (const auto& v : a) {
                if (!v.is_number()) throw validation_error(p + "alpha: entries must be numbers");
                c.alphas.push_back(v.get<double>());
            }
        else
            throw validation_error(p + "alpha: expected a number or array");
        if (c.alphas.empty()) throw validation_error(p + "alpha: empty list");
        for (double a2 : c.alphas)
            if (!(a2 > 0.0)) throw validation_error(p + "alpha: orders must be positive");
    }
    c.t_max = field<int>(j, p, "t_max", 5);
    if (c.t_max < 1) throw validation_error(p + "t_max: must be >= 1");
    c.r = field<int>(j, p, "r", 0);
    if (c.r < 0 || (c.L > 0 && 2 * c.r > c.L)) throw validation_error(p + "r: must lie in 1..L/2");
    const auto seed = field<long long>(j, p, "seed", 1);
    if (seed < 0) throw validation_error(p + "seed: must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    c.workers = field<int>(j, p, "workers", 1);
    if (c.workers < 1) throw validation_error(p + "workers: must be >= 1");
    c.output = field<std::string>(j, p, "output", "out");
    const auto dress = field<std::string>(j, p, "dressing", "uniform");
    if (dress == "uniform")
        c.dressing = Dressing::Uniform;
    else if (dress == "per-brick")
        c.dressing = Dressing::PerBrick;
    else
        throw validation_error(p + "dressing: expected 'uniform' or 'per-brick'");
    c.memory_budget_mb = field<double>(j, p, "memory_budget_mb", 2048.0);
    if (!(c.memory_budget_mb > 0)) throw validation_error(p + "memory_budget_mb: must be positive");
    const auto samples = field<long long>(j, p, "samples", 10000);
    if (samples < 100) throw validation_error(p + "samples: must be >= 100");
    c.samples = static_cast<std::size_t>(samples);
    c.profile_every = field<int>(j, p, "profile_every", 1);
    if (c.profile_every < 0) throw validation_error(p + "profile_every: must be >= 0");
    if (j.contains("classes")) {
        if (!j["classes"].is_array()) throw validation_error(p + "classes: expected an array of class names");
        for (const auto& v : j["classes"]) {
            if (!v.is_string()) throw validation_error(p + "classes: entries must be strings");
            parse_ising_class(v.get<std::string>());
            c.classes.push_back(v.get<std::string>());
        }
    }
    c.realizations = field<int>(j, p, "realizations", 10);
    if (c.realizations < 1) throw validation_error(p + "realizations: must be >= 1");
    c.t_end = field<double>(j, p, "t_end", 10.0);
    c.dt = field<double>(j, p, "dt", 0.25);
    if (!(c.dt > 0) || c.t_end < 0) throw validation_error(p + "dt/t_end: need dt > 0 and t_end >= 0");

    switch (c.experiment) {
        case Experiment::MultipartiteProfile:
        case Experiment::CircuitPowers:
        case Experiment::Ising:
            if (c.L < 2) throw validation_error(p + "L: required (even, >= 2) for " + name);
            break;
        default: break;
    }
    if (c.experiment == Experiment::Ising && c.q != 2) throw validation_error(p + "q: the Ising experiment is qubit-only");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot read config " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw validation_error(path + ": " + e.what());
    }
    return parse_config(j);
}

void check_config_guards(const ExperimentConfig& c) {
    const double mb = c.memory_budget_mb;
    switch (c.experiment) {
        case Experiment::EntropyProfile:
            if (c.L > 0)
                check_state_budget(c.q, c.L, mb, "entropy-profile");
            else
                check_state_budget(c.q, 2 * kappa(c.t_max, 0), mb, "entropy-profile (C matrix)");
            break;
        case Experiment::VelocityVsMixing: check_state_budget(c.q, 2 * kappa(c.t_max, 0), mb, "velocity-vs-mixing"); break;
        case Experiment::MultipartiteProfile: check_state_budget(c.q, c.L, mb / std::max(1, c.workers), "multipartite-profile"); break;
        case Experiment::CircuitPowers:
            if (std::pow(double(c.q), 2 * c.L) > 4096.0)
                throw guard_error("circuit-powers: two-copy dimension q^(2L) exceeds 4096");
            break;
        case Experiment::Ising:
            if (c.L > 6) throw guard_error("ising: L exceeds the two-copy guard (6)");
            break;
        case Experiment::Bounds: check_state_budget(c.q, 8, mb, "bounds"); break;
        case Experiment::MixingScan: break;
    }
}

std::vector<NamedGate> build_gates(const ExperimentConfig& cfg) {
    std::vector<NamedGate> out;
    std::uint64_t draw = 0;
    for (std::size_t i = 0; i < cfg.gates.size(); ++i) {
        const json& g = cfg.gates[i];
        const std::string p = "config.gates[" + std::to_string(i) + "].";
        if (!g.is_object()) throw validation_error(p + ": expected an object");
        const auto fam = required<std::string>(g, p, "family");
        if (fam == "cartan") {
            if (cfg.q != 2) throw validation_error(p + "family: cartan gates need q = 2");
            CartanParams cp;
            cp.j3 = required<double>(g, p, "J3");
            cp.phi = field<double>(g, p, "phi", 0.0);
            out.push_back({"cartan J3=" + format_double(cp.j3), cartan_du(cp)});
        } else if (fam == "cartan-grid") {
            if (cfg.q != 2) throw validation_error(p + "family: cartan gates need q = 2");
            const double lo = required<double>(g, p, "J3_min"), hi = required<double>(g, p, "J3_max");
            const int n = required<int>(g, p, "count");
            if (n < 1) throw validation_error(p + "count: must be >= 1");
            for (int k = 0; k < n; ++k) {
                const double j3 = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
                out.push_back({"cartan J3=" + format_double(j3), cartan_du(j3)});
            }
        } else if (fam == "mr") {
            const int n = field<int>(g, p, "count", 1);
            const int it = field<int>(g, p, "iterations", 100);
            if (n < 1) throw validation_error(p + "count: must be >= 1");
            for (int k = 0; k < n; ++k) {
                Rng rng = make_rng(cfg.seed, {kStreamGate, draw++});
                const TwoQuditGate seed(cfg.q, haar_unitary(cfg.q * cfg.q, rng));
                out.push_back({"mr#" + std::to_string(k), mr_generate(seed, it).gate});
            }
        } else if (fam == "permutation") {
            PermutationSpec s;
            if (!g.contains("K") || !g.contains("L")) throw validation_error(p + "K/L: required for permutation gates");
            s.k = int_matrix(g["K"], p + "K");
            s.l = int_matrix(g["L"], p + "L");
            auto r = permutation_gate(s);
            if (r.gate.q() != cfg.q) throw validation_error(p + "K: size differs from q");
            out.push_back({"permutation", r.gate});
        } else if (fam == "latin") {
            auto r = permutation_gate(latin_square_spec(cfg.q));
            out.push_back({"latin", r.gate});
        } else if (fam == "swap") {
            out.push_back({"swap", TwoQuditGate(cfg.q, swap_gate(cfg.q))});
        } else if (fam == "file") {
            auto gate = load_gate(required<std::string>(g, p, "path"));
            if (gate.q() != cfg.q) throw validation_error(p + "path: gate dimension differs from q");
            out.push_back({"file", gate});
        } else {
            throw validation_error(p + "family: unknown gate family '" + fam + "'");
        }
    }
    return out;
}

PairKernel build_kernel(const ExperimentConfig& cfg) {
    const std::string p = "config.kernel.";
    const auto src = field<std::string>(cfg.kernel, p, "source", "random");
    Rng rng = make_rng(cfg.seed, {kStreamKernel});
    if (src == "diag") return diag_kernel(cfg.q);
    if (src == "unitary") return unitary_kernel(cfg.q, rng);
    if (src == "random") return random_kernel(cfg.q, rng);
    if (src == "file") {
        const auto path = required<std::string>(cfg.kernel, p, "path");
        std::ifstream f(path);
        if (!f) throw io_error("cannot read kernel file " + path);
        json j;
        try {
            j = json::parse(f);
        } catch (const json::parse_error& e) {
            throw validation_error(path + ": " + e.what());
        }
        const json& m = j.contains("m") ? j["m"] : json();
        if (!m.is_array() || m.size() != static_cast<std::size_t>(cfg.q * cfg.q))
            throw validation_error(path + ": 'm' must list q^2 [re, im] entries");
        Mat mm(cfg.q, cfg.q);
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (!m[k].is_array() || m[k].size() != 2) throw validation_error(path + ": entries must be [re, im]");
            mm(k / cfg.q, k % cfg.q) = cplx(m[k][0].get<double>(), m[k][1].get<double>());
        }
        return PairKernel::normalized(cfg.q, mm);
    }
    throw validation_error(p + "source: expected diag, unitary, random or file");
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
    check_config_guards(cfg);
    std::error_code ec;
    fs::create_directories(cfg.output, ec);
    if (ec) throw io_error("cannot create output directory " + cfg.output);
    RunSummary sum;
    sum.metadata["code_version"] = kCodeVersion;
    sum.metadata["experiment"] = to_string(cfg.experiment);
    sum.metadata["config"] = cfg.raw;
    sum.metadata["seed"] = cfg.seed;
    sum.metadata["workers"] = cfg.workers;
    sum.metadata["bound_variant"] = BoundConfig{}.tag();
    sum.metadata["dressing"] = cfg.dressing == Dressing::Uniform ? "uniform" : "per-brick";
    sum.metadata["outputs"] = json::array();
    switch (cfg.experiment) {
        case Experiment::MixingScan: run_mixing_scan(cfg, sum); break;
        case Experiment::VelocityVsMixing: run_velocity(cfg, sum); break;
        case Experiment::EntropyProfile: run_entropy_profile(cfg, sum); break;
        case Experiment::Bounds: run_bounds(cfg, sum); break;
        case Experiment::MultipartiteProfile: run_multipartite(cfg, sum); break;
        case Experiment::CircuitPowers: run_circuit_powers(cfg, sum); break;
        case Experiment::Ising: run_ising(cfg, sum); break;
    }
    const std::string meta = out_path(cfg, to_string(cfg.experiment) + ".meta.json");
    std::ofstream f(meta);
    if (!f) throw io_error("cannot write " + meta);
    f << sum.metadata.dump(2) << '\n';
    sum.files.push_back(meta);
    return sum;
}

Table1 emit_table1(const std::vector<std::string>& paths) {
    struct Acc {
        std::vector<double> scott, gm, vn;
    };
    std::map<std::pair<int, int>, Acc> acc;
    for (const auto& p0 : paths) {
        fs::path p(p0);
        if (fs::is_directory(p)) p /= "saturated.csv";
        const CsvData d = read_csv(p.string());
        const int cl = d.column("L"), cq = d.column("q"), cs = d.column("Q_half"), cg = d.column("E_GM"),
                  cv = d.column("S_VN");
        if (cl < 0 || cq < 0 || cs < 0 || cg < 0 || cv < 0)
            throw validation_error(p.string() + ": not a saturated-state table (need L, q, Q_half, E_GM, S_VN)");
        for (const auto& r : d.rows) {
            auto& a = acc[{std::stoi(r[cl]), std::stoi(r[cq])}];
            a.scott.push_back(std::stod(r[cs]));
            a.gm.push_back(std::stod(r[cg]));
            a.vn.push_back(std::stod(r[cv]));
        }
    }
    Table1 t;
    const std::vector<std::pair<int, int>> want{{8, 2}, {12, 2}, {8, 3}, {12, 3}};
    for (const auto& w : want) {
        const auto it = acc.find(w);
        if (it == acc.end()) {
            t.missing.push_back("L=" + std::to_string(w.first) + " q=" + std::to_string(w.second));
            continue;
        }
        t.rows.push_back({w.first, w.second, it->second.scott.size(), mean_of(it->second.scott), mean_of(it->second.gm),
                          mean_of(it->second.vn)});
    }
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-22s", "measure");
    os << buf;
    for (const auto& r : t.rows) {
        char label[64];
        std::snprintf(label, sizeof label, "L=%d q=%d (n=%zu)", r.L, r.q, r.members);
        std::snprintf(buf, sizeof buf, " | %-17s", label);
        os << buf;
    }
    os << " | maximum\n";
    auto line = [&](const char* name, auto get, auto maxv) {
        std::snprintf(buf, sizeof buf, "%-22s", name);
        os << buf;
        for (const auto& r : t.rows) {
            char cell[64];
            std::snprintf(cell, sizeof cell, "%6.4f (-%6.4f)", get(r), maxv(r) - get(r));
            std::snprintf(buf, sizeof buf, " | %-17s", cell);
            os << buf;
        }
        os << " | " << (std::string(name) == "S_VN (half, base q)" ? "L/2" : "1.0") << '\n';
    };
    line("Scott (r=L/2)", [](const Table1Row& r) { return r.scott; }, [](const Table1Row&) { return 1.0; });
    line("AME-GME (geom. mean)", [](const Table1Row& r) { return r.e_gm; }, [](const Table1Row&) { return 1.0; });
    line("S_VN (half, base q)", [](const Table1Row& r) { return r.s_vn; }, [](const Table1Row& r) { return r.L / 2.0; });
    for (const auto& m : t.missing) os << "missing: " << m << '\n';
    t.text = os.str();
    return t;
}

}  // namespace dualbrick
