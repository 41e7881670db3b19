#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "splitconv/bounds.hpp"

namespace splitconv {

// Information-flow model of split conversion. Capacities are multiples of
// alpha (alpha = 1).

enum class NodeKind { source, sink, central, collector, unchanged, retired, fresh };

struct FlowNode {
  NodeKind kind = NodeKind::source;
  std::size_t codeword = 0;  // 1-based for collector/unchanged/fresh nodes
  std::size_t index = 0;     // 0-based position within its group

  std::string label() const;
};

struct FlowEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Rational capacity;
};

struct FlowNetwork {
  std::vector<FlowNode> nodes;
  std::vector<FlowEdge> edges;
  std::size_t source = 0;
  std::size_t sink = 0;

  bool is_acyclic() const;
};

/// The kF symbols a codeword's data collector connects to: indices into that
/// codeword's unchanged nodes and new nodes.
struct CollectorSet {
  std::vector<std::size_t> unchanged;
  std::vector<std::size_t> fresh;
};

/// Node layout: s, t, c, collectors t_1..t_lambda, unchanged U_1..U_lambda,
/// retired R, new N_1..N_lambda. Throws Error(invalid_argument) for malformed
/// collector sets.
FlowNetwork build_flow_graph(const BoundInputs& b, const BetaAssignment& betas,
                             std::span<const CollectorSet> collectors);

/// Maximum s-t flow (Edmonds-Karp on exact rationals).
Rational max_flow(const FlowNetwork& net);

/// Value of the cut {s} + S_1..S_lambda + R with |S_j| = min(kF, rF).
Rational lemma_cut_value(const BoundInputs& b, const BetaAssignment& betas);

struct FeasibilityReport {
  bool feasible = false;
  Rational worst_flow;
  std::string worst_collectors;
  Rational lemma_cut_value;
  Rational required_flow;  // lambda * kF
  std::size_t configurations = 0;
};

/// Minimum max-flow over collector choices, one configuration per vector of
/// new-node counts (node symmetry within a codeword).
FeasibilityReport check_feasibility(const BoundInputs& b, const BetaAssignment& betas);

/// Same, over every kF-subset choice for every codeword. Exponential; for
/// cross-checking the symmetry reduction on small instances.
FeasibilityReport check_feasibility_exhaustive(const BoundInputs& b, const BetaAssignment& betas);

}  // namespace splitconv
