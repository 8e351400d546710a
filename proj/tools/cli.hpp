#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossk/freeboundary.hpp"

namespace crossk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitFormat = 65;

// args excludes the program name. Output goes to `out` unless --output is
// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// {"level": L, "coeffs": {"<word>": c, ...}}; absent words are zero.
nlohmann::ordered_json boundary_to_json(const freeboundary::BoundaryVector& v);
freeboundary::BoundaryVector boundary_from_json(const nlohmann::json& j);  // throws FormatError

}  // namespace crossk::cli
