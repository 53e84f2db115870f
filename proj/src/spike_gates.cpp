#include "nbl/spike_gates.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace nbl::spike {

namespace {

void require_same_horizon(const SpikeTrain& a, const SpikeTrain& b, const char* op) {
  if (a.horizon() != b.horizon()) {
    throw std::invalid_argument(std::string(op) + ": horizon mismatch");
  }
}

}  // namespace

OrthonOutputs orthon(const SpikeTrain& a, const SpikeTrain& b) {
  require_same_horizon(a, b, "orthon");
  std::vector<std::uint32_t> both;
  std::vector<std::uint32_t> only_a;
  std::set_intersection(a.slots().begin(), a.slots().end(), b.slots().begin(),
                        b.slots().end(), std::back_inserter(both));
  std::set_difference(a.slots().begin(), a.slots().end(), b.slots().begin(),
                      b.slots().end(), std::back_inserter(only_a));
  return OrthonOutputs{SpikeTrain(a.horizon(), std::move(both)),
                       SpikeTrain(a.horizon(), std::move(only_a))};
}

SpikeTrain not_gate(const SpikeTrain& x, const SpikeTrain& h) {
  return orthon(h, x).diff_out;
}

SpikeTrain and_gate(const SpikeTrain& x1, const SpikeTrain& x2) {
  return orthon(x1, x2).and_out;
}

SpikeTrain derived_gate(GateKind kind, const SpikeTrain& x1, const SpikeTrain& x2,
                        const SpikeTrain& h) {
  switch (kind) {
    case GateKind::And:
      return and_gate(x1, x2);
    case GateKind::Or:
      return not_gate(and_gate(not_gate(x1, h), not_gate(x2, h)), h);
    case GateKind::Nand:
      return not_gate(and_gate(x1, x2), h);
    case GateKind::Nor:
      return and_gate(not_gate(x1, h), not_gate(x2, h));
    case GateKind::Xor: {
      const SpikeTrain t1 = and_gate(x1, not_gate(x2, h));
      const SpikeTrain t2 = and_gate(not_gate(x1, h), x2);
      return not_gate(and_gate(not_gate(t1, h), not_gate(t2, h)), h);
    }
    case GateKind::Xnor:
      return not_gate(derived_gate(GateKind::Xor, x1, x2, h), h);
    case GateKind::Not:
      break;
  }
  throw std::invalid_argument("derived_gate: NOT is unary, use not_gate");
}

SpikeTrain superpose(std::span<const SpikeTrain> trains) {
  if (trains.empty()) {
    throw std::invalid_argument("superpose: need at least one train");
  }
  std::vector<std::uint32_t> merged;
  for (const SpikeTrain& t : trains) {
    require_same_horizon(trains[0], t, "superpose");
    merged.insert(merged.end(), t.slots().begin(), t.slots().end());
  }
  return SpikeTrain(trains[0].horizon(), std::move(merged));
}

SpikeTrain remove_component(const SpikeTrain& s, const SpikeTrain& h_k) {
  return orthon(s, h_k).diff_out;
}

std::set<std::size_t> decompose(const SpikeTrain& s, const ReferenceSystem& sys) {
  if (sys.backend() != Backend::Spike) {
    throw std::invalid_argument("decompose: requires the spike backend");
  }
  if (s.horizon() != sys.horizon()) {
    throw std::invalid_argument("decompose: horizon mismatch");
  }
  std::set<std::size_t> present;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const SpikeTrain& h = sys.spike_ref(i);
    const bool overlaps = std::ranges::any_of(
        s.slots(), [&h](std::uint32_t slot) { return h.contains(slot); });
    if (overlaps) present.insert(i);
  }
  return present;
}

}  // namespace nbl::spike
