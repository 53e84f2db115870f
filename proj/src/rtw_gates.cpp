#include "nbl/rtw_gates.hpp"

#include <stdexcept>
#include <string>

namespace nbl::rtw {

namespace {

void require_same_length(const RtwSignal& a, const RtwSignal& b, const char* op) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(op) + ": chip length mismatch");
  }
}

}  // namespace

RtwSignal not_gate(const RtwSignal& x, const RtwSignal& h) {
  require_same_length(x, h, "not_gate");
  std::vector<std::int32_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = h.chip(i) - x.chip(i);
  }
  return RtwSignal(std::move(out));
}

RtwSignal and_gate(const RtwSignal& x1, const RtwSignal& x2, const RtwSignal& h) {
  require_same_length(x1, x2, "and_gate");
  require_same_length(x1, h, "and_gate");
  std::vector<std::int32_t> out(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i) {
    out[i] = static_cast<std::int32_t>(static_cast<std::int64_t>(x1.chip(i)) *
                                       x2.chip(i) * h.chip(i));
  }
  return RtwSignal(std::move(out));
}

RtwSignal derived_gate(GateKind kind, const RtwSignal& x1, const RtwSignal& x2,
                       const RtwSignal& h) {
  switch (kind) {
    case GateKind::And:
      return and_gate(x1, x2, h);
    case GateKind::Or:
      return not_gate(and_gate(not_gate(x1, h), not_gate(x2, h), h), h);
    case GateKind::Nand:
      return not_gate(and_gate(x1, x2, h), h);
    case GateKind::Nor:
      return and_gate(not_gate(x1, h), not_gate(x2, h), h);
    case GateKind::Xor: {
      const RtwSignal t1 = and_gate(x1, not_gate(x2, h), h);
      const RtwSignal t2 = and_gate(not_gate(x1, h), x2, h);
      return not_gate(and_gate(not_gate(t1, h), not_gate(t2, h), h), h);
    }
    case GateKind::Xnor:
      return not_gate(derived_gate(GateKind::Xor, x1, x2, h), h);
    case GateKind::Not:
      break;
  }
  throw std::invalid_argument("derived_gate: NOT is unary, use not_gate");
}

HyperIndexSet::HyperIndexSet(std::initializer_list<std::size_t> indices)
    : indices_(indices) {}

HyperIndexSet::HyperIndexSet(std::set<std::size_t> indices)
    : indices_(std::move(indices)) {}

RtwSignal hyperspace_product(std::span<const RtwSignal> refs,
                             const HyperIndexSet& idx) {
  if (idx.empty()) {
    throw std::invalid_argument("hyperspace_product: empty index set");
  }
  for (std::size_t i : idx.indices()) {
    if (i >= refs.size()) {
      throw std::invalid_argument("hyperspace_product: reference index out of range");
    }
  }
  const std::size_t n = refs[*idx.indices().begin()].size();
  std::vector<std::int32_t> out(n, 1);
  for (std::size_t i : idx.indices()) {
    const RtwSignal& h = refs[i];
    if (h.size() != n) {
      throw std::invalid_argument("hyperspace_product: chip length mismatch");
    }
    for (std::size_t t = 0; t < n; ++t) {
      out[t] *= h.chip(t);
    }
  }
  return RtwSignal(std::move(out));
}

RtwSignal hyperspace_product(const ReferenceSystem& sys, const HyperIndexSet& idx) {
  if (sys.backend() != Backend::Rtw) {
    throw std::invalid_argument("hyperspace_product: requires the RTW backend");
  }
  if (idx.empty()) {
    throw std::invalid_argument("hyperspace_product: empty index set");
  }
  std::vector<std::int32_t> out(sys.horizon(), 1);
  for (std::size_t i : idx.indices()) {
    if (i >= sys.size()) {
      throw std::invalid_argument("hyperspace_product: reference index out of range");
    }
    const RtwSignal& h = sys.rtw_ref(i);
    for (std::size_t t = 0; t < out.size(); ++t) {
      out[t] *= h.chip(t);
    }
  }
  return RtwSignal(std::move(out));
}

RtwSignal toggle_component(const RtwSignal& z, const RtwSignal& h_k) {
  require_same_length(z, h_k, "toggle_component");
  std::vector<std::int32_t> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z.chip(i) == 0 || h_k.chip(i) == 0) {
      throw std::invalid_argument(
          "toggle_component: zero chip, operands must be hyperspace elements");
    }
    out[i] = z.chip(i) * h_k.chip(i);
  }
  return RtwSignal(std::move(out));
}

}  // namespace nbl::rtw
