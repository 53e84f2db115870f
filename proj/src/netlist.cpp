#include "nbl/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "nbl/rtw_gates.hpp"
#include "nbl/spike_gates.hpp"

namespace nbl {

namespace {

std::string format_location(std::size_t line, std::size_t column,
                            const std::string& message) {
  std::ostringstream out;
  if (line > 0) {
    out << "line " << line;
    if (column > 0) out << ":" << column;
    out << ": ";
  }
  out << message;
  return out.str();
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const unsigned char head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
      ++i;
    }
    tokens.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return tokens;
}

}  // namespace

NetlistError::NetlistError(std::size_t line, std::size_t column,
                           const std::string& message)
    : std::runtime_error(format_location(line, column, message)),
      line_(line),
      column_(column) {}

Circuit::Circuit(std::vector<std::string> inputs, std::vector<std::string> outputs,
                 std::vector<Gate> gates)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      gates_(std::move(gates)) {
  for (const std::string& w : inputs_) {
    if (!is_identifier(w)) {
      throw NetlistError(0, 0, "invalid wire name '" + w + "'");
    }
  }
  for (const std::string& w : outputs_) {
    if (!is_identifier(w)) {
      throw NetlistError(0, 0, "invalid wire name '" + w + "'");
    }
  }

  std::unordered_set<std::string> input_set;
  for (const std::string& w : inputs_) {
    if (!input_set.insert(w).second) {
      throw NetlistError(0, 0, "duplicate declaration of input '" + w + "'");
    }
  }
  std::unordered_set<std::string> output_set;
  for (const std::string& w : outputs_) {
    if (!output_set.insert(w).second) {
      throw NetlistError(0, 0, "duplicate declaration of output '" + w + "'");
    }
  }

  // One driver per wire; inputs are driven by the environment only.
  std::unordered_map<std::string, std::size_t> driver;  // wire -> gate index
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const Gate& gate = gates_[g];
    if (!is_identifier(gate.output)) {
      throw NetlistError(gate.line, 0, "invalid wire name '" + gate.output + "'");
    }
    for (const std::string& in : gate.inputs) {
      if (!is_identifier(in)) {
        throw NetlistError(gate.line, 0, "invalid wire name '" + in + "'");
      }
    }
    if (gate.inputs.size() != gate_arity(gate.kind)) {
      throw NetlistError(gate.line, 0,
                         "arity mismatch: '" + std::string(to_string(gate.kind)) +
                             "' driving '" + gate.output + "' expects " +
                             std::to_string(gate_arity(gate.kind)) + " input(s), got " +
                             std::to_string(gate.inputs.size()));
    }
    if (input_set.contains(gate.output)) {
      throw NetlistError(gate.line, 0,
                         "wire '" + gate.output +
                             "' is multiply driven (declared input, also gate-driven)");
    }
    if (!driver.emplace(gate.output, g).second) {
      throw NetlistError(gate.line, 0,
                         "wire '" + gate.output + "' is multiply driven");
    }
  }

  for (const Gate& gate : gates_) {
    for (const std::string& in : gate.inputs) {
      if (!input_set.contains(in) && !driver.contains(in)) {
        throw NetlistError(gate.line, 0, "wire '" + in + "' is undriven");
      }
    }
  }
  for (const std::string& out : outputs_) {
    if (!driver.contains(out)) {
      throw NetlistError(0, 0, "output '" + out + "' is undriven");
    }
  }

  // Kahn's algorithm; ready gates picked in index order for determinism.
  std::vector<std::size_t> indegree(gates_.size(), 0);
  std::vector<std::vector<std::size_t>> dependents(gates_.size());
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    for (const std::string& in : gates_[g].inputs) {
      auto it = driver.find(in);
      if (it != driver.end()) {
        ++indegree[g];
        dependents[it->second].push_back(g);
      }
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    if (indegree[g] == 0) ready.push(g);
  }
  topo_.reserve(gates_.size());
  while (!ready.empty()) {
    const std::size_t g = ready.top();
    ready.pop();
    topo_.push_back(g);
    for (std::size_t d : dependents[g]) {
      if (--indegree[d] == 0) ready.push(d);
    }
  }
  if (topo_.size() != gates_.size()) {
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      if (indegree[g] > 0) {
        throw NetlistError(gates_[g].line, 0,
                           "combinational cycle through wire '" + gates_[g].output + "'");
      }
    }
  }
}

bool Circuit::is_lowered() const noexcept {
  return std::all_of(gates_.begin(), gates_.end(),
                     [](const Gate& g) { return is_primitive(g.kind); });
}

Circuit parse_netlist(std::string_view text) {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;
  std::unordered_set<std::string> declared_inputs;
  std::unordered_set<std::string> declared_outputs;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) continue;

    const Token& head = tokens[0];
    auto expect_identifier = [&](const Token& t) {
      if (!is_identifier(t.text)) {
        throw NetlistError(line_no, t.column,
                           "syntax error: expected identifier, got '" +
                               std::string(t.text) + "'");
      }
    };

    if (head.text == "input" || head.text == "output") {
      if (tokens.size() != 2) {
        throw NetlistError(line_no, head.column,
                           "syntax error: '" + std::string(head.text) +
                               "' takes exactly one wire name");
      }
      expect_identifier(tokens[1]);
      std::string wire(tokens[1].text);
      if (head.text == "input") {
        if (!declared_inputs.insert(wire).second) {
          throw NetlistError(line_no, tokens[1].column,
                             "duplicate declaration of input '" + wire + "'");
        }
        inputs.push_back(std::move(wire));
      } else {
        if (!declared_outputs.insert(wire).second) {
          throw NetlistError(line_no, tokens[1].column,
                             "duplicate declaration of output '" + wire + "'");
        }
        outputs.push_back(std::move(wire));
      }
      continue;
    }

    const std::optional<GateKind> kind = gate_kind_from(head.text);
    if (!kind) {
      if (!is_identifier(head.text)) {
        throw NetlistError(line_no, head.column,
                           "syntax error: unexpected token '" +
                               std::string(head.text) + "'");
      }
      throw NetlistError(line_no, head.column,
                         "unknown gate kind '" + std::string(head.text) + "'");
    }
    const std::size_t arity = gate_arity(*kind);
    if (tokens.size() != arity + 2) {
      throw NetlistError(line_no, head.column,
                         "arity mismatch: '" + std::string(head.text) + "' takes " +
                             std::to_string(arity) +
                             " input(s) after the output wire, got " +
                             std::to_string(tokens.size() >= 2 ? tokens.size() - 2 : 0));
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      expect_identifier(tokens[i]);
    }
    Gate gate;
    gate.kind = *kind;
    gate.output = std::string(tokens[1].text);
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      gate.inputs.emplace_back(tokens[i].text);
    }
    gate.line = line_no;
    // Duplicate drivers get their line reported here; the Circuit
    // constructor re-checks for programmatically built netlists.
    for (const Gate& prev : gates) {
      if (prev.output == gate.output) {
        throw NetlistError(line_no, tokens[1].column,
                           "wire '" + gate.output + "' is multiply driven");
      }
    }
    if (declared_inputs.contains(gate.output)) {
      throw NetlistError(line_no, tokens[1].column,
                         "wire '" + gate.output +
                             "' is multiply driven (declared input, also gate-driven)");
    }
    gates.push_back(std::move(gate));
  }

  return Circuit(std::move(inputs), std::move(outputs), std::move(gates));
}

std::string unparse(const Circuit& c) {
  std::ostringstream out;
  for (const std::string& w : c.inputs()) out << "input " << w << "\n";
  for (const std::string& w : c.outputs()) out << "output " << w << "\n";
  for (const Gate& g : c.gates()) {
    out << to_string(g.kind) << " " << g.output;
    for (const std::string& in : g.inputs) out << " " << in;
    out << "\n";
  }
  return out.str();
}

namespace {

// Fresh lowering temporaries continue past any __tN already present, so
// re-lowering or hand-written __t wires cannot collide.
std::size_t next_fresh_index(const Circuit& c) {
  std::size_t next = 0;
  auto scan = [&next](const std::string& w) {
    if (w.size() <= 3 || w.compare(0, 3, "__t") != 0) return;
    std::size_t value = 0;
    const char* first = w.data() + 3;
    const char* last = w.data() + w.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc() && ptr == last) next = std::max(next, value + 1);
  };
  for (const std::string& w : c.inputs()) scan(w);
  for (const Gate& g : c.gates()) {
    scan(g.output);
    for (const std::string& in : g.inputs) scan(in);
  }
  return next;
}

}  // namespace

Circuit lower_circuit(const Circuit& c) {
  std::size_t next = next_fresh_index(c);
  auto fresh = [&next] { return "__t" + std::to_string(next++); };

  std::vector<Gate> out;
  auto emit = [&out](GateKind kind, std::string y, std::vector<std::string> ins,
                     std::size_t line) {
    out.push_back(Gate{kind, std::move(y), std::move(ins), line});
  };
  auto emit_or = [&](const std::string& y, const std::string& a,
                     const std::string& b, std::size_t line) {
    const std::string na = fresh();
    const std::string nb = fresh();
    const std::string t = fresh();
    emit(GateKind::Not, na, {a}, line);
    emit(GateKind::Not, nb, {b}, line);
    emit(GateKind::And, t, {na, nb}, line);
    emit(GateKind::Not, y, {t}, line);
  };
  auto emit_xor = [&](const std::string& y, const std::string& a,
                      const std::string& b, std::size_t line) {
    const std::string nb = fresh();
    const std::string t1 = fresh();
    const std::string na = fresh();
    const std::string t2 = fresh();
    emit(GateKind::Not, nb, {b}, line);
    emit(GateKind::And, t1, {a, nb}, line);
    emit(GateKind::Not, na, {a}, line);
    emit(GateKind::And, t2, {na, b}, line);
    emit_or(y, t1, t2, line);
  };

  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Not:
      case GateKind::And:
        out.push_back(g);
        break;
      case GateKind::Or:
        emit_or(g.output, g.inputs[0], g.inputs[1], g.line);
        break;
      case GateKind::Nand: {
        const std::string t = fresh();
        emit(GateKind::And, t, {g.inputs[0], g.inputs[1]}, g.line);
        emit(GateKind::Not, g.output, {t}, g.line);
        break;
      }
      case GateKind::Nor: {
        const std::string na = fresh();
        const std::string nb = fresh();
        emit(GateKind::Not, na, {g.inputs[0]}, g.line);
        emit(GateKind::Not, nb, {g.inputs[1]}, g.line);
        emit(GateKind::And, g.output, {na, nb}, g.line);
        break;
      }
      case GateKind::Xor:
        emit_xor(g.output, g.inputs[0], g.inputs[1], g.line);
        break;
      case GateKind::Xnor: {
        const std::string t = fresh();
        emit_xor(t, g.inputs[0], g.inputs[1], g.line);
        emit(GateKind::Not, g.output, {t}, g.line);
        break;
      }
    }
  }
  return Circuit(c.inputs(), c.outputs(), std::move(out));
}

namespace {

void require_total_assignment(const Circuit& c, const Assignment& a) {
  for (const std::string& w : c.inputs()) {
    if (!a.contains(w)) {
      throw std::invalid_argument("evaluate: input '" + w + "' is unassigned");
    }
  }
  if (a.size() != c.inputs().size()) {
    for (const auto& [wire, value] : a) {
      (void)value;
      if (std::find(c.inputs().begin(), c.inputs().end(), wire) == c.inputs().end()) {
        throw std::invalid_argument("evaluate: '" + wire + "' is not a circuit input");
      }
    }
  }
}

template <typename Signal, typename NotFn, typename AndFn, typename DerivedFn>
std::map<std::string, Signal> run_gates(const Circuit& c,
                                        std::map<std::string, Signal> wires,
                                        NotFn do_not, AndFn do_and,
                                        DerivedFn do_derived) {
  for (const std::string& w : c.inputs()) {
    if (!wires.contains(w)) {
      throw std::invalid_argument("evaluate: input '" + w + "' has no signal");
    }
  }
  for (std::size_t gi : c.topo_order()) {
    const Gate& g = c.gates()[gi];
    if (g.kind == GateKind::Not) {
      wires.emplace(g.output, do_not(wires.at(g.inputs[0])));
    } else if (g.kind == GateKind::And) {
      wires.emplace(g.output, do_and(wires.at(g.inputs[0]), wires.at(g.inputs[1])));
    } else {
      wires.emplace(g.output,
                    do_derived(g.kind, wires.at(g.inputs[0]), wires.at(g.inputs[1])));
    }
  }
  return wires;
}

}  // namespace

RtwEvaluation evaluate_rtw(const Circuit& c,
                           const std::map<std::string, RtwSignal>& input_signals,
                           const ReferenceSystem& sys) {
  if (sys.backend() != Backend::Rtw) {
    throw std::invalid_argument("evaluate_rtw: reference system backend mismatch");
  }
  const RtwSignal& h = sys.rtw_ref(0);
  for (const auto& [wire, sig] : input_signals) {
    if (sig.size() != sys.horizon()) {
      throw std::invalid_argument("evaluate_rtw: horizon mismatch on '" + wire + "'");
    }
  }
  RtwEvaluation result;
  result.wires = run_gates<RtwSignal>(
      c, input_signals,
      [&h](const RtwSignal& x) { return rtw::not_gate(x, h); },
      [&h](const RtwSignal& a, const RtwSignal& b) { return rtw::and_gate(a, b, h); },
      [&h](GateKind kind, const RtwSignal& a, const RtwSignal& b) {
        return rtw::derived_gate(kind, a, b, h);
      });
  for (const std::string& o : c.outputs()) {
    result.outputs.emplace(o, classify(result.wires.at(o), h));
  }
  return result;
}

RtwEvaluation evaluate_rtw(const Circuit& c, const Assignment& a,
                           const ReferenceSystem& sys) {
  require_total_assignment(c, a);
  if (sys.backend() != Backend::Rtw) {
    throw std::invalid_argument("evaluate_rtw: reference system backend mismatch");
  }
  std::map<std::string, RtwSignal> inputs;
  const RtwSignal& h = sys.rtw_ref(0);
  for (const std::string& w : c.inputs()) {
    inputs.emplace(w, a.at(w) ? h : zero_signal(sys.horizon()));
  }
  return evaluate_rtw(c, inputs, sys);
}

SpikeEvaluation evaluate_spike(const Circuit& c,
                               const std::map<std::string, SpikeTrain>& input_signals,
                               const ReferenceSystem& sys) {
  if (sys.backend() != Backend::Spike) {
    throw std::invalid_argument("evaluate_spike: reference system backend mismatch");
  }
  const SpikeTrain& h = sys.spike_ref(0);
  for (const auto& [wire, sig] : input_signals) {
    if (sig.horizon() != sys.horizon()) {
      throw std::invalid_argument("evaluate_spike: horizon mismatch on '" + wire + "'");
    }
  }
  SpikeEvaluation result;
  result.wires = run_gates<SpikeTrain>(
      c, input_signals,
      [&h](const SpikeTrain& x) { return spike::not_gate(x, h); },
      [](const SpikeTrain& a, const SpikeTrain& b) { return spike::and_gate(a, b); },
      [&h](GateKind kind, const SpikeTrain& a, const SpikeTrain& b) {
        return spike::derived_gate(kind, a, b, h);
      });
  for (const std::string& o : c.outputs()) {
    result.outputs.emplace(o, classify(result.wires.at(o), h));
  }
  return result;
}

SpikeEvaluation evaluate_spike(const Circuit& c, const Assignment& a,
                               const ReferenceSystem& sys) {
  require_total_assignment(c, a);
  if (sys.backend() != Backend::Spike) {
    throw std::invalid_argument("evaluate_spike: reference system backend mismatch");
  }
  std::map<std::string, SpikeTrain> inputs;
  const SpikeTrain& h = sys.spike_ref(0);
  for (const std::string& w : c.inputs()) {
    inputs.emplace(w, a.at(w) ? h : SpikeTrain(sys.horizon()));
  }
  return evaluate_spike(c, inputs, sys);
}

std::map<std::string, LogicClass> evaluate(const Circuit& c, const Assignment& a,
                                           const ReferenceSystem& sys) {
  if (sys.backend() == Backend::Rtw) {
    return evaluate_rtw(c, a, sys).outputs;
  }
  return evaluate_spike(c, a, sys).outputs;
}

TruthTable truth_table(const Circuit& c, const ReferenceSystem& sys) {
  const std::size_t k = c.inputs().size();
  if (k > 20) {
    throw std::invalid_argument("truth_table: more than 20 inputs");
  }
  TruthTable table;
  table.inputs = c.inputs();
  table.outputs = c.outputs();
  const std::size_t rows = static_cast<std::size_t>(1) << k;
  table.rows.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    Assignment a;
    for (std::size_t j = 0; j < k; ++j) {
      // First declared input is the most significant bit of the row index.
      a[c.inputs()[j]] = ((r >> (k - 1 - j)) & 1) != 0;
    }
    const auto outs = evaluate(c, a, sys);
    std::vector<LogicClass> row;
    row.reserve(c.outputs().size());
    for (const std::string& o : c.outputs()) row.push_back(outs.at(o));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace nbl
