#pragma once

#include <cstddef>
#include <initializer_list>
#include <set>
#include <span>

#include "nbl/gate_kind.hpp"
#include "nbl/reference_system.hpp"
#include "nbl/signal.hpp"

namespace nbl::rtw {

/// Y = H - X, chip for chip. Maps L to H and H to L; any other input yields
/// a faulty (possibly +-2-valued) signal which is kept as is.
RtwSignal not_gate(const RtwSignal& x, const RtwSignal& h);

/// Y = X1 * X2 * H, chip for chip. Produces H exactly when both inputs
/// carry H, otherwise L, for logic-valid inputs.
RtwSignal and_gate(const RtwSignal& x1, const RtwSignal& x2, const RtwSignal& h);

/// Fixed compositions over not_gate/and_gate with the shared reference H:
///   OR   = NOT(AND(NOT x1, NOT x2))
///   NAND = NOT(AND(x1, x2))
///   NOR  = AND(NOT x1, NOT x2)
///   XOR  = OR(AND(x1, NOT x2), AND(NOT x1, x2))
///   XNOR = NOT(XOR)
/// The netlist lowering emits gate-for-gate the same compositions, so a
/// derived gate and its lowered form agree chip-exactly on any input.
RtwSignal derived_gate(GateKind kind, const RtwSignal& x1, const RtwSignal& x2,
                       const RtwSignal& h);

/// A set of reference indices selecting the factors of a hyperspace product.
class HyperIndexSet {
 public:
  HyperIndexSet() = default;
  HyperIndexSet(std::initializer_list<std::size_t> indices);
  explicit HyperIndexSet(std::set<std::size_t> indices);

  const std::set<std::size_t>& indices() const noexcept { return indices_; }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t size() const noexcept { return indices_.size(); }

  bool operator==(const HyperIndexSet&) const = default;

 private:
  std::set<std::size_t> indices_;
};

/// Chipwise product of the selected reference waves. The result is again a
/// -1/+1 wave; n references span 2^n - 1 distinct non-empty products.
/// Throws on an empty index set, an out-of-range index, or (for the system
/// overload) a spike backend.
RtwSignal hyperspace_product(std::span<const RtwSignal> refs,
                             const HyperIndexSet& idx);
RtwSignal hyperspace_product(const ReferenceSystem& sys, const HyperIndexSet& idx);

/// Z * H_k, chip for chip: removes H_k from a hyperspace product when
/// present and inserts it when absent (applying it twice is the identity).
/// Defined on hyperspace elements only; any zero chip in either operand is
/// rejected.
RtwSignal toggle_component(const RtwSignal& z, const RtwSignal& h_k);

}  // namespace nbl::rtw
