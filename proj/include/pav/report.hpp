#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pav/limits.hpp"
#include "pav/verify.hpp"

namespace pav {

// Shortest decimal rendering that round-trips the double exactly.
std::string format_double(double v);

// Common report header: tool identity, RNG family, master seed. Deliberately
// free of timestamps and host details so reports are byte-stable.
nlohmann::ordered_json meta_json(uint64_t seed);

// Serializers are pure functions of the result structs; callers may attach
// further keys (thresholds, pass flags) to the returned object.
nlohmann::ordered_json counts_json(const CountsReport& r);
std::string counts_csv(const CountsReport& r);

nlohmann::ordered_json uniformity_json(const std::vector<UniformityResult>& rs);
std::string uniformity_csv(const std::vector<UniformityResult>& rs);

nlohmann::ordered_json positional_json(const PositionalCheck& r);
std::string positional_csv(const PositionalCheck& r);

nlohmann::ordered_json escape_json(Pattern pat, uint64_t j, uint64_t L,
                                   const std::vector<EscapeRow>& rows);
std::string escape_csv(const std::vector<EscapeRow>& rows);

nlohmann::ordered_json cf_json(uint64_t n, uint64_t trials, XMechanism mech,
                               const std::vector<CFPoint>& pts);
std::string cf_csv(const std::vector<CFPoint>& pts);

nlohmann::ordered_json convergence_json(const ConvergenceReport& r);
std::string convergence_csv(const ConvergenceReport& r);

}  // namespace pav
