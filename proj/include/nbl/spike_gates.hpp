#pragma once

#include <cstddef>
#include <set>
#include <span>

#include "nbl/gate_kind.hpp"
#include "nbl/reference_system.hpp"
#include "nbl/signal.hpp"

namespace nbl::spike {

/// The two outputs of the orthon element: spikes of A coinciding with B and
/// spikes of A free of B. Together they partition A.
struct OrthonOutputs {
  SpikeTrain and_out;   // A intersect B
  SpikeTrain diff_out;  // A minus B
};

/// Slot-aligned, delay-free orthon: a spike of A propagates to diff_out
/// unless B spikes in the same slot, in which case it goes to and_out.
OrthonOutputs orthon(const SpikeTrain& a, const SpikeTrain& b);

/// Y = H minus X (the orthon's difference output with H on the plus side).
SpikeTrain not_gate(const SpikeTrain& x, const SpikeTrain& h);

/// Y = X1 intersect X2 (the orthon's coincidence output).
SpikeTrain and_gate(const SpikeTrain& x1, const SpikeTrain& x2);

/// Same fixed compositions as the RTW derived gates, built from the spike
/// NOT/AND with the shared reference H.
SpikeTrain derived_gate(GateKind kind, const SpikeTrain& x1,
                        const SpikeTrain& x2, const SpikeTrain& h);

/// Union of spike trains; the hyperspace superposition of orthogonal
/// (disjoint) references. Requires a non-empty list over one horizon.
SpikeTrain superpose(std::span<const SpikeTrain> trains);

/// S minus H_k: strips one reference component out of a superposition.
SpikeTrain remove_component(const SpikeTrain& s, const SpikeTrain& h_k);

/// Indices i with S intersect H_i non-empty. Recovers the exact component
/// set of any union of references from a disjoint family. Spike backend only.
std::set<std::size_t> decompose(const SpikeTrain& s, const ReferenceSystem& sys);

}  // namespace nbl::spike
