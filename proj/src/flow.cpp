#include "splitconv/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "splitconv/combinations.hpp"
#include "splitconv/error.hpp"

namespace splitconv {

std::string FlowNode::label() const {
  switch (kind) {
    case NodeKind::source: return "s";
    case NodeKind::sink: return "t";
    case NodeKind::central: return "c";
    case NodeKind::collector: return "t" + std::to_string(codeword);
    case NodeKind::unchanged: return "U" + std::to_string(codeword) + "." + std::to_string(index + 1);
    case NodeKind::retired: return "R" + std::to_string(index + 1);
    case NodeKind::fresh: return "N" + std::to_string(codeword) + "." + std::to_string(index + 1);
  }
  return "?";
}

bool FlowNetwork::is_acyclic() const {
  std::vector<std::size_t> indegree(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> out(nodes.size());
  for (const auto& e : edges) {
    out[e.from].push_back(e.to);
    ++indegree[e.to];
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::size_t seen = 0;
  while (!ready.empty()) {
    const auto v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto w : out[v])
      if (--indegree[w] == 0) ready.push_back(w);
  }
  return seen == nodes.size();
}

FlowNetwork build_flow_graph(const BoundInputs& b, const BetaAssignment& betas,
                             std::span<const CollectorSet> collectors) {
  const auto lambda = static_cast<std::size_t>(b.lambda_final);
  const auto kf = static_cast<std::size_t>(b.k_final);
  const auto rf = static_cast<std::size_t>(b.r_final);
  const auto ri = static_cast<std::size_t>(b.r_initial);
  if (collectors.size() != lambda) {
    throw Error(Errc::invalid_argument, "need one collector set per final codeword");
  }
  for (const auto& set : collectors) {
    if (set.unchanged.size() + set.fresh.size() != kf) {
      throw Error(Errc::invalid_argument, "collector set must contain exactly kF symbols");
    }
    if (std::set<std::size_t>(set.unchanged.begin(), set.unchanged.end()).size() != set.unchanged.size() ||
        std::set<std::size_t>(set.fresh.begin(), set.fresh.end()).size() != set.fresh.size()) {
      throw Error(Errc::invalid_argument, "collector set repeats a symbol");
    }
    for (auto u : set.unchanged)
      if (u >= kf) throw Error(Errc::invalid_argument, "collector references a missing unchanged symbol");
    for (auto f : set.fresh)
      if (f >= rf) throw Error(Errc::invalid_argument, "collector references a missing new symbol");
  }

  FlowNetwork net;
  auto add_node = [&](NodeKind kind, std::size_t codeword, std::size_t index) {
    net.nodes.push_back({kind, codeword, index});
    return net.nodes.size() - 1;
  };
  net.source = add_node(NodeKind::source, 0, 0);
  net.sink = add_node(NodeKind::sink, 0, 0);
  const auto central = add_node(NodeKind::central, 0, 0);
  std::vector<std::size_t> collector(lambda);
  for (std::size_t j = 0; j < lambda; ++j) collector[j] = add_node(NodeKind::collector, j + 1, 0);
  std::vector<std::vector<std::size_t>> unchanged(lambda, std::vector<std::size_t>(kf));
  for (std::size_t j = 0; j < lambda; ++j)
    for (std::size_t x = 0; x < kf; ++x) unchanged[j][x] = add_node(NodeKind::unchanged, j + 1, x);
  std::vector<std::size_t> retired(ri);
  for (std::size_t x = 0; x < ri; ++x) retired[x] = add_node(NodeKind::retired, 0, x);
  std::vector<std::vector<std::size_t>> fresh(lambda, std::vector<std::size_t>(rf));
  for (std::size_t j = 0; j < lambda; ++j)
    for (std::size_t x = 0; x < rf; ++x) fresh[j][x] = add_node(NodeKind::fresh, j + 1, x);

  const Rational one(1);
  auto add_edge = [&](std::size_t from, std::size_t to, Rational cap) { net.edges.push_back({from, to, cap}); };
  for (const auto& group : unchanged)
    for (auto u : group) {
      add_edge(net.source, u, one);
      add_edge(u, central, betas.beta1);
    }
  for (auto r : retired) {
    add_edge(net.source, r, one);
    add_edge(r, central, betas.beta2);
  }
  for (const auto& group : fresh)
    for (auto f : group) add_edge(central, f, one);
  for (std::size_t j = 0; j < lambda; ++j) {
    for (auto u : collectors[j].unchanged) add_edge(unchanged[j][u], collector[j], one);
    for (auto f : collectors[j].fresh) add_edge(fresh[j][f], collector[j], one);
    add_edge(collector[j], net.sink, Rational(b.k_final));
  }
  return net;
}

Rational max_flow(const FlowNetwork& net) {
  struct Arc {
    std::size_t to;
    std::size_t rev;
    Rational residual;
  };
  std::vector<std::vector<Arc>> g(net.nodes.size());
  for (const auto& e : net.edges) {
    g[e.from].push_back({e.to, g[e.to].size(), e.capacity});
    g[e.to].push_back({e.from, g[e.from].size() - 1, Rational(0)});
  }
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  Rational total(0);
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> parent(g.size(), {none, none});
    parent[net.source] = {net.source, none};
    std::queue<std::size_t> q;
    q.push(net.source);
    while (!q.empty() && parent[net.sink].first == none) {
      const auto v = q.front();
      q.pop();
      for (std::size_t i = 0; i < g[v].size(); ++i) {
        const auto& a = g[v][i];
        if (a.residual > Rational(0) && parent[a.to].first == none) {
          parent[a.to] = {v, i};
          q.push(a.to);
        }
      }
    }
    if (parent[net.sink].first == none) break;
    Rational push(-1);
    for (auto v = net.sink; v != net.source; v = parent[v].first) {
      const auto& a = g[parent[v].first][parent[v].second];
      if (push < Rational(0) || a.residual < push) push = a.residual;
    }
    for (auto v = net.sink; v != net.source; v = parent[v].first) {
      auto& a = g[parent[v].first][parent[v].second];
      a.residual -= push;
      g[a.to][a.rev].residual += push;
    }
    total += push;
  }
  return total;
}

Rational lemma_cut_value(const BoundInputs& b, const BetaAssignment& betas) {
  const std::int64_t m = std::min(b.k_final, b.r_final);
  return Rational(b.lambda_final * (b.k_final - m)) + Rational(b.lambda_final * m) * betas.beta1 +
         Rational(b.r_initial) * betas.beta2;
}

namespace {

std::string describe(std::span<const CollectorSet> sets) {
  std::ostringstream os;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    if (j) os << "; ";
    os << "t" << j + 1 << ":{";
    bool first = true;
    for (auto u : sets[j].unchanged) {
      os << (first ? "" : ",") << "U" << j + 1 << "." << u + 1;
      first = false;
    }
    for (auto f : sets[j].fresh) {
      os << (first ? "" : ",") << "N" << j + 1 << "." << f + 1;
      first = false;
    }
    os << "}";
  }
  return os.str();
}

template <typename Enumerate>
FeasibilityReport run_feasibility(const BoundInputs& b, const BetaAssignment& betas, Enumerate&& enumerate) {
  FeasibilityReport report;
  report.required_flow = Rational(b.lambda_final * b.k_final);
  report.lemma_cut_value = lemma_cut_value(b, betas);
  bool have = false;
  enumerate([&](std::span<const CollectorSet> sets) {
    const Rational flow = max_flow(build_flow_graph(b, betas, sets));
    ++report.configurations;
    if (!have || flow < report.worst_flow) {
      have = true;
      report.worst_flow = flow;
      report.worst_collectors = describe(sets);
    }
  });
  report.feasible = report.worst_flow >= report.required_flow;
  return report;
}

CollectorSet first_symbols(std::size_t kf, std::size_t fresh_count) {
  CollectorSet set;
  for (std::size_t x = 0; x < fresh_count; ++x) set.fresh.push_back(x);
  for (std::size_t x = 0; x < kf - fresh_count; ++x) set.unchanged.push_back(x);
  return set;
}

}  // namespace

FeasibilityReport check_feasibility(const BoundInputs& b, const BetaAssignment& betas) {
  const auto lambda = static_cast<std::size_t>(b.lambda_final);
  const auto kf = static_cast<std::size_t>(b.k_final);
  const auto max_fresh = static_cast<std::size_t>(std::min(b.k_final, b.r_final));
  return run_feasibility(b, betas, [&](auto&& visit) {
    std::vector<std::size_t> counts(lambda, 0);
    while (true) {
      std::vector<CollectorSet> sets;
      for (auto c : counts) sets.push_back(first_symbols(kf, c));
      visit(std::span<const CollectorSet>(sets));
      std::size_t j = 0;
      while (j < lambda && counts[j] == max_fresh) counts[j++] = 0;
      if (j == lambda) break;
      ++counts[j];
    }
  });
}

FeasibilityReport check_feasibility_exhaustive(const BoundInputs& b, const BetaAssignment& betas) {
  const auto lambda = static_cast<std::size_t>(b.lambda_final);
  const auto kf = static_cast<std::size_t>(b.k_final);
  const auto rf = static_cast<std::size_t>(b.r_final);
  std::vector<CollectorSet> choices;
  for_each_subset(kf + rf, kf, [&](std::span<const std::size_t> pick) {
    CollectorSet set;
    for (auto x : pick) {
      if (x < kf) {
        set.unchanged.push_back(x);
      } else {
        set.fresh.push_back(x - kf);
      }
    }
    choices.push_back(std::move(set));
    return true;
  });
  return run_feasibility(b, betas, [&](auto&& visit) {
    std::vector<std::size_t> pick(lambda, 0);
    while (true) {
      std::vector<CollectorSet> sets;
      for (auto p : pick) sets.push_back(choices[p]);
      visit(std::span<const CollectorSet>(sets));
      std::size_t j = 0;
      while (j < lambda && pick[j] + 1 == choices.size()) pick[j++] = 0;
      if (j == lambda) break;
      ++pick[j];
    }
  });
}

}  // namespace splitconv
