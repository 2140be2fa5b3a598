#pragma once

#include <string>

namespace runlen {

/// Ascent discipline for runs: Strict uses <, NonStrict uses <=.
enum class RunKind { Strict, NonStrict };

/// Initial is the run starting at index 0; Interior is any run starting at
/// index i >= 1 conditioned on a run starting there. Interior statistics do
/// not depend on i, so no index is carried.
enum class Position { Initial, Interior };

std::string to_string(RunKind kind);
std::string to_string(Position position);

} // namespace runlen
