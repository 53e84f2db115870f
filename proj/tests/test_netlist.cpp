#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "nbl/netlist.hpp"
#include "nbl/random.hpp"
#include "support/random_circuit.hpp"

using namespace nbl;
using nbl_test::bool_evaluate;
using nbl_test::random_circuit;
using nbl_test::to_class;

namespace {

constexpr const char* kHalfAdder = R"(# half adder
input a
input b
xor sum a b
and carry a b
output sum
output carry
)";

std::size_t count_kind(const Circuit& c, GateKind kind) {
  std::size_t n = 0;
  for (const Gate& g : c.gates()) {
    if (g.kind == kind) ++n;
  }
  return n;
}

Circuit single_gate(GateKind kind) {
  std::vector<Gate> gates;
  if (gate_arity(kind) == 1) {
    gates.push_back({kind, "y", {"a"}, 0});
    return Circuit({"a"}, {"y"}, gates);
  }
  gates.push_back({kind, "y", {"a", "b"}, 0});
  return Circuit({"a", "b"}, {"y"}, gates);
}

}  // namespace

TEST_CASE("parse accepts the half adder") {
  const Circuit c = parse_netlist(kHalfAdder);
  CHECK(c.inputs() == std::vector<std::string>{"a", "b"});
  CHECK(c.outputs() == std::vector<std::string>{"sum", "carry"});
  REQUIRE(c.gates().size() == 2);
  CHECK(c.gates()[0].kind == GateKind::Xor);
  CHECK(c.gates()[0].line == 4);
  CHECK(c.gates()[1].kind == GateKind::And);
}

TEST_CASE("parse allows forward references") {
  const Circuit c = parse_netlist("input a\noutput y\nnot y t\nnot t a\n");
  CHECK(c.gates().size() == 2);
  // Topological order resolves the textual forward reference.
  CHECK(c.topo_order() == std::vector<std::size_t>{1, 0});
}

TEST_CASE("parse strips comments and blank lines anywhere") {
  const Circuit c = parse_netlist(
      "\n  input a   # the only input\n\t\noutput y#tight comment\nnot y a\n#done");
  CHECK(c.inputs() == std::vector<std::string>{"a"});
  CHECK(c.outputs() == std::vector<std::string>{"y"});
  CHECK(c.gates().size() == 1);
}

TEST_CASE("parse error reporting") {
  auto check_error = [](std::string_view text, std::size_t line,
                        std::string_view needle) {
    try {
      parse_netlist(text);
      FAIL_CHECK("expected NetlistError for: " << text);
    } catch (const NetlistError& e) {
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  check_error("input a\nand y a\noutput y\n", 2, "arity mismatch");
  check_error("input a\nnott y a\n", 2, "unknown gate kind 'nott'");
  check_error("input a\nnot 1y a\n", 2, "expected identifier");
  check_error("input a\ninput a\n", 2, "duplicate declaration of input 'a'");
  check_error("input a\noutput y\noutput y\nnot y a\n", 3,
              "duplicate declaration of output 'y'");
  check_error("input a\nnot y a\nnot y a\noutput y\n", 3, "multiply driven");
  check_error("input a\nnot a a\n", 2, "multiply driven");
  check_error("input a\noutput y\nnot y b\n", 3, "'b' is undriven");
  check_error("input a\noutput y\n", 0, "output 'y' is undriven");
  check_error("input a\noutput y\nand x a y\nand y a x\n", 3, "combinational cycle");
  check_error("input\n", 1, "exactly one wire");
}

TEST_CASE("parse error column points at the offending token") {
  try {
    parse_netlist("input a\nnot y 9bad\n");
    FAIL_CHECK("expected NetlistError");
  } catch (const NetlistError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 7);
  }
}

TEST_CASE("unparse/parse round trips random circuits") {
  auto rng = make_stream(100, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Circuit c = random_circuit(rng);
    const Circuit reparsed = parse_netlist(unparse(c));
    CHECK(reparsed == c);
  }
}

TEST_CASE("lowering recipe gate counts") {
  CHECK(lower_circuit(single_gate(GateKind::Not)).gates().size() == 1);
  CHECK(lower_circuit(single_gate(GateKind::And)).gates().size() == 1);
  CHECK(lower_circuit(single_gate(GateKind::Or)).gates().size() == 4);
  CHECK(lower_circuit(single_gate(GateKind::Nand)).gates().size() == 2);
  CHECK(lower_circuit(single_gate(GateKind::Nor)).gates().size() == 3);
  const Circuit xor_low = lower_circuit(single_gate(GateKind::Xor));
  CHECK(xor_low.gates().size() == 8);
  CHECK(count_kind(xor_low, GateKind::Not) == 5);
  CHECK(count_kind(xor_low, GateKind::And) == 3);
  CHECK(lower_circuit(single_gate(GateKind::Xnor)).gates().size() == 9);

  // Half adder: one XOR recipe plus the native AND.
  const Circuit lowered = lower_circuit(parse_netlist(kHalfAdder));
  CHECK(lowered.gates().size() == 9);
  CHECK(lowered.is_lowered());
}

TEST_CASE("lowering is idempotent") {
  auto rng = make_stream(101, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit lowered = lower_circuit(random_circuit(rng));
    CHECK(lower_circuit(lowered) == lowered);
  }
}

TEST_CASE("lowered output is parseable and avoids fresh-wire collisions") {
  const Circuit lowered = lower_circuit(parse_netlist(kHalfAdder));
  CHECK(parse_netlist(unparse(lowered)) == lowered);

  // User wires in the reserved prefix push the fresh counter past them.
  const Circuit tricky =
      parse_netlist("input __t3\noutput y\nor y __t3 __t3\n");
  const Circuit lowered_tricky = lower_circuit(tricky);
  CHECK(parse_netlist(unparse(lowered_tricky)) == lowered_tricky);
}

TEST_CASE("evaluate the half adder") {
  const Circuit c = parse_netlist(kHalfAdder);
  const auto rtw_sys = ReferenceSystem::rtw(7, 1, 1024);
  const auto outs = evaluate(c, {{"a", true}, {"b", true}}, rtw_sys);
  CHECK(outs.at("sum") == LogicClass::ValueL);
  CHECK(outs.at("carry") == LogicClass::ValueH);

  const auto spike_sys = ReferenceSystem::spike(7, 1, 1024, 0.2);
  const auto souts = evaluate(c, {{"a", true}, {"b", true}}, spike_sys);
  CHECK(souts.at("sum") == LogicClass::ValueL);
  CHECK(souts.at("carry") == LogicClass::ValueH);
}

TEST_CASE("evaluate validates assignments and backends") {
  const Circuit c = parse_netlist(kHalfAdder);
  const auto sys = ReferenceSystem::rtw(7, 1, 256);
  CHECK_THROWS_AS(evaluate(c, {{"a", true}}, sys), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(c, {{"a", true}, {"b", false}, {"c", true}}, sys),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate_spike(c, {{"a", true}, {"b", false}}, sys),
                  std::invalid_argument);
}

TEST_CASE("explicit input signals must match the system horizon") {
  const Circuit c = parse_netlist(kHalfAdder);
  const auto sys = ReferenceSystem::rtw(3, 1, 128);
  std::map<std::string, RtwSignal> inputs;
  inputs.emplace("a", zero_signal(100));  // wrong horizon
  inputs.emplace("b", zero_signal(128));
  CHECK_THROWS_AS(evaluate_rtw(c, inputs, sys), std::invalid_argument);
  // Faulty signals are accepted as long as horizons line up.
  inputs.erase("a");
  inputs.emplace("a", RtwSignal(std::vector<std::int32_t>(128, 2)));
  const auto eval = evaluate_rtw(c, inputs, sys);
  CHECK(eval.outputs.at("carry") == LogicClass::ValueL);  // 2 * 0 * H = 0
}

TEST_CASE("evaluation exposes full wire traces") {
  const Circuit c = parse_netlist(kHalfAdder);
  const auto sys = ReferenceSystem::rtw(3, 1, 128);
  const auto eval = evaluate_rtw(c, {{"a", true}, {"b", false}}, sys);
  CHECK(eval.wires.size() == 4);  // a, b, sum, carry
  for (const auto& [wire, signal] : eval.wires) {
    (void)wire;
    CHECK(signal.size() == 128);
  }
  CHECK(eval.wires.at("a") == sys.rtw_ref(0));
  CHECK(eval.wires.at("b").is_zero());
}

TEST_CASE("truth table rows count in binary with the first input as MSB") {
  const Circuit c = parse_netlist("input a\ninput b\noutput y\nand y a nb\nnot nb b\n");
  const auto sys = ReferenceSystem::rtw(5, 1, 256);
  const TruthTable t = truth_table(c, sys);
  REQUIRE(t.rows.size() == 4);
  // y = a AND (NOT b) is 1 only on the row (a=1, b=0) = binary 10.
  CHECK(t.rows[0][0] == LogicClass::ValueL);
  CHECK(t.rows[1][0] == LogicClass::ValueL);
  CHECK(t.rows[2][0] == LogicClass::ValueH);
  CHECK(t.rows[3][0] == LogicClass::ValueL);
}

TEST_CASE("truth table guards the input count") {
  std::vector<std::string> inputs;
  std::vector<Gate> gates;
  for (int i = 0; i < 21; ++i) inputs.push_back("i" + std::to_string(i));
  gates.push_back({GateKind::And, "y", {"i0", "i1"}, 0});
  const Circuit c(inputs, {"y"}, gates);
  const auto sys = ReferenceSystem::rtw(1, 1, 16);
  CHECK_THROWS_AS(truth_table(c, sys), std::invalid_argument);
}

TEST_CASE("lowering soundness and backend agreement on random circuits") {
  auto rng = make_stream(321, 0);
  const auto rtw_sys = ReferenceSystem::rtw(17, 1, 256);
  const auto spike_sys = ReferenceSystem::spike(17, 1, 256, 0.2);
  for (int trial = 0; trial < 25; ++trial) {
    const Circuit c = random_circuit(rng);
    const Circuit lowered = lower_circuit(c);
    const TruthTable t_rtw = truth_table(c, rtw_sys);
    const TruthTable t_rtw_low = truth_table(lowered, rtw_sys);
    const TruthTable t_spike = truth_table(c, spike_sys);

    REQUIRE(t_rtw.rows.size() == t_rtw_low.rows.size());
    for (std::size_t r = 0; r < t_rtw.rows.size(); ++r) {
      CHECK(t_rtw.rows[r] == t_rtw_low.rows[r]);
      CHECK(t_rtw.rows[r] == t_spike.rows[r]);

      // Plain Boolean evaluation is the independent semantics oracle.
      Assignment a;
      const std::size_t k = c.inputs().size();
      for (std::size_t j = 0; j < k; ++j) {
        a[c.inputs()[j]] = ((r >> (k - 1 - j)) & 1) != 0;
      }
      const auto expected = bool_evaluate(c, a);
      for (std::size_t o = 0; o < c.outputs().size(); ++o) {
        CHECK(t_rtw.rows[r][o] == to_class(expected.at(c.outputs()[o])));
      }
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  auto rng = make_stream(555, 0);
  const Circuit c = random_circuit(rng);
  const auto sys1 = ReferenceSystem::rtw(99, 1, 512);
  const auto sys2 = ReferenceSystem::rtw(99, 1, 512);
  Assignment a;
  for (const std::string& w : c.inputs()) a[w] = true;
  const auto e1 = evaluate_rtw(c, a, sys1);
  const auto e2 = evaluate_rtw(c, a, sys2);
  for (const auto& [wire, signal] : e1.wires) {
    CHECK(signal == e2.wires.at(wire));
  }
}
