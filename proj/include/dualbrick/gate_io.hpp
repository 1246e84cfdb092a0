#pragma once

#include <string>

#include "dualbrick/gates.hpp"

namespace dualbrick {

// {"q": q, "rows": [[re, im], ...]} with the q^4 entries listed row-major
std::string gate_to_json(const TwoQuditGate& u);
TwoQuditGate gate_from_json(const std::string& text);

void save_gate(const TwoQuditGate& u, const std::string& path);
TwoQuditGate load_gate(const std::string& path);

}  // namespace dualbrick
