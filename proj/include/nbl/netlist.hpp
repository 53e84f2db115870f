#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nbl/gate_kind.hpp"
#include "nbl/reference_system.hpp"
#include "nbl/signal.hpp"

namespace nbl {

/// Parse or validation failure. line/column are 1-based; 0 means
/// not applicable (e.g. programmatic construction).
class NetlistError : public std::runtime_error {
 public:
  NetlistError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Gate {
  GateKind kind;
  std::string output;
  std::vector<std::string> inputs;
  std::size_t line = 0;  // source line when parsed, 0 otherwise

  // Structural identity; source position is not part of it.
  bool operator==(const Gate& other) const {
    return kind == other.kind && output == other.output && inputs == other.inputs;
  }
};

/// A combinational gate network over named wires. Construction validates the
/// full set of invariants and throws NetlistError on the first violation:
/// well-formed identifiers, declared arities, no duplicate declarations,
/// every wire driven at most once, inputs driven only by the environment,
/// every used wire driven, every declared output gate-driven, and no
/// combinational cycles. A validated circuit carries a topological order.
class Circuit {
 public:
  Circuit(std::vector<std::string> inputs, std::vector<std::string> outputs,
          std::vector<Gate> gates);

  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  /// Gate indices in evaluation order.
  const std::vector<std::size_t>& topo_order() const noexcept { return topo_; }

  /// True when every gate is NOT or AND.
  bool is_lowered() const noexcept;

  bool operator==(const Circuit& other) const {
    return inputs_ == other.inputs_ && outputs_ == other.outputs_ &&
           gates_ == other.gates_;
  }

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> topo_;
};

/// Line-oriented netlist grammar:
///   input <wire> | output <wire> | not <out> <in>
///   and|or|nand|nor|xor|xnor <out> <in1> <in2>
/// '#' starts a comment, blank lines are ignored, identifiers are
/// case-sensitive [A-Za-z_][A-Za-z0-9_]*, forward references are allowed.
Circuit parse_netlist(std::string_view text);

/// Renders a circuit back into grammar text; reparsing yields an equal
/// circuit.
std::string unparse(const Circuit& c);

/// Rewrites every gate onto the universal {NOT, AND} basis with fixed
/// recipes (OR -> 4 gates, NAND -> 2, NOR -> 3, XOR -> 8, XNOR -> 9);
/// fresh wires use the reserved prefix "__t". Idempotent, and the output is
/// itself parseable.
Circuit lower_circuit(const Circuit& c);

/// Boolean values for every declared input wire.
using Assignment = std::map<std::string, bool>;

struct RtwEvaluation {
  std::map<std::string, LogicClass> outputs;
  std::map<std::string, RtwSignal> wires;  // full trace, inputs included
};

struct SpikeEvaluation {
  std::map<std::string, LogicClass> outputs;
  std::map<std::string, SpikeTrain> wires;
};

/// Evaluates a circuit chip-exactly: input wires bind to the system's shared
/// H (for 1) or the zero/empty signal (for 0), gates run in topological
/// order (derived kinds route through the fixed compositions), outputs are
/// classified exactly. The signal-map overloads accept arbitrary
/// (possibly faulty) input signals instead of Boolean bindings.
RtwEvaluation evaluate_rtw(const Circuit& c, const Assignment& a,
                           const ReferenceSystem& sys);
RtwEvaluation evaluate_rtw(const Circuit& c,
                           const std::map<std::string, RtwSignal>& input_signals,
                           const ReferenceSystem& sys);
SpikeEvaluation evaluate_spike(const Circuit& c, const Assignment& a,
                               const ReferenceSystem& sys);
SpikeEvaluation evaluate_spike(const Circuit& c,
                               const std::map<std::string, SpikeTrain>& input_signals,
                               const ReferenceSystem& sys);

/// Backend-dispatching evaluation returning classifications only.
std::map<std::string, LogicClass> evaluate(const Circuit& c, const Assignment& a,
                                           const ReferenceSystem& sys);

struct TruthTable {
  std::vector<std::string> inputs;   // column order, first input most significant
  std::vector<std::string> outputs;
  std::vector<std::vector<LogicClass>> rows;  // 2^k rows in binary counting order
};

/// Exhaustive evaluation over all assignments; guarded to k <= 20 inputs.
TruthTable truth_table(const Circuit& c, const ReferenceSystem& sys);

}  // namespace nbl
