#include "runlen/run_kind.hpp"

namespace runlen {

std::string to_string(RunKind kind) {
    return kind == RunKind::Strict ? "strict" : "nonstrict";
}

std::string to_string(Position position) {
    return position == Position::Initial ? "initial" : "interior";
}

} // namespace runlen
