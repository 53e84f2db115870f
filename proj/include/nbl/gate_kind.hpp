#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace nbl {

/// Gate vocabulary of the netlist frontend. Not and And are the universal
/// primitive basis; the rest lower onto fixed compositions of them.
enum class GateKind { Not, And, Or, Nand, Nor, Xor, Xnor };

std::string_view to_string(GateKind kind);

/// Parses a lowercase gate keyword ("not", "and", ...).
std::optional<GateKind> gate_kind_from(std::string_view token);

std::size_t gate_arity(GateKind kind);  // 1 for Not, 2 otherwise

bool is_primitive(GateKind kind);  // Not or And

}  // namespace nbl
