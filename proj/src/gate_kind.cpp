#include "nbl/gate_kind.hpp"

namespace nbl {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Not: return "not";
    case GateKind::And: return "and";
    case GateKind::Or: return "or";
    case GateKind::Nand: return "nand";
    case GateKind::Nor: return "nor";
    case GateKind::Xor: return "xor";
    case GateKind::Xnor: return "xnor";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from(std::string_view token) {
  if (token == "not") return GateKind::Not;
  if (token == "and") return GateKind::And;
  if (token == "or") return GateKind::Or;
  if (token == "nand") return GateKind::Nand;
  if (token == "nor") return GateKind::Nor;
  if (token == "xor") return GateKind::Xor;
  if (token == "xnor") return GateKind::Xnor;
  return std::nullopt;
}

std::size_t gate_arity(GateKind kind) {
  return kind == GateKind::Not ? 1 : 2;
}

bool is_primitive(GateKind kind) {
  return kind == GateKind::Not || kind == GateKind::And;
}

}  // namespace nbl
