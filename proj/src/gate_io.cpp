#include "dualbrick/gate_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dualbrick/errors.hpp"

namespace dualbrick {

std::string gate_to_json(const TwoQuditGate& u) {
    nlohmann::json j;
    j["q"] = u.q();
    nlohmann::json rows = nlohmann::json::array();
    const Mat& m = u.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) rows.push_back({m(r, c).real(), m(r, c).imag()});
    j["rows"] = std::move(rows);
    return j.dump();
}

TwoQuditGate gate_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("gate json: ") + e.what());
    }
    if (!j.contains("q") || !j["q"].is_number_integer()) throw validation_error("gate json: field 'q' missing or not an integer");
    if (!j.contains("rows") || !j["rows"].is_array()) throw validation_error("gate json: field 'rows' missing or not an array");
    const int q = j["rows"].size() > 0 ? j["q"].get<int>() : 0;
    if (q < 2) throw validation_error("gate json: q must be >= 2");
    const auto& rows = j["rows"];
    const std::size_t n = static_cast<std::size_t>(q) * q;
    if (rows.size() != n * n) throw validation_error("gate json: 'rows' must hold q^4 entries");
    Mat m(n, n);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& e = rows[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw validation_error("gate json: entry " + std::to_string(k) + " must be [re, im]");
        m(k / n, k % n) = cplx(e[0].get<double>(), e[1].get<double>());
    }
    return TwoQuditGate(q, std::move(m));
}

void save_gate(const TwoQuditGate& u, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot write gate file " + path);
    f << gate_to_json(u) << '\n';
}

TwoQuditGate load_gate(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot read gate file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return gate_from_json(ss.str());
}

}  // namespace dualbrick
