#include "ctr/mdp.hpp"

#include <algorithm>
#include <string>

#include "ctr/error.hpp"

namespace ctr {

bool Deployment::contains(NodeId v) const {
  return std::binary_search(nodes.begin(), nodes.end(), v);
}

Deployment Deployment::of(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  Deployment x;
  x.budget = nodes.size();
  x.nodes = std::move(nodes);
  return x;
}

BeliefVector BeliefVector::uniform_on_spot(const AttackGraph& g, double value) {
  BeliefVector b;
  b.q.assign(g.node_count(), 0.0);
  for (auto v : g.spot()) b.q[v] = value;
  return b;
}

BeliefVector BeliefVector::from_spot_values(const AttackGraph& g,
                                            std::span<const double> values) {
  if (values.size() != g.spot().size()) {
    throw Error(ErrorCode::ArgumentOutOfRange,
                "belief has " + std::to_string(values.size()) +
                    " entries for " + std::to_string(g.spot().size()) +
                    " spot nodes");
  }
  BeliefVector b;
  b.q.assign(g.node_count(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) b.q[g.spot()[i]] = values[i];
  return b;
}

BeliefVector BeliefVector::indicator(const AttackGraph& g, const Deployment& x) {
  BeliefVector b;
  b.q.assign(g.node_count(), 0.0);
  for (auto v : x.nodes) b.q[v] = 1.0;
  return b;
}

AttackMdp::AttackMdp(std::shared_ptr<const AttackGraph> graph,
                     StepDistribution dist)
    : graph_(std::move(graph)), dist_(std::move(dist)) {
  horizon_ = longest_path_bound(*graph_);
  alpha_.resize(horizon_ + 1);
  for (std::size_t c = 0; c <= horizon_; ++c) {
    alpha_[c] = dist_.survival(c) > 0.0 ? dist_.conditional_advance(c) : 0.0;
  }
  detect_.assign(graph_->node_count(), 0.0);
}

AttackMdp::AttackMdp(const AttackGraph& graph, StepDistribution dist)
    : AttackMdp(std::make_shared<const AttackGraph>(graph), std::move(dist)) {}

AttackMdp AttackMdp::with_deployment(const Deployment& x) const {
  if (mode_ != Mode::Base) {
    throw Error(ErrorCode::ArgumentOutOfRange,
                "deployment must be applied to the base kernel");
  }
  if (x.nodes.size() != x.budget) {
    throw Error(ErrorCode::BudgetMismatch,
                std::to_string(x.nodes.size()) + " protected nodes for budget " +
                    std::to_string(x.budget));
  }
  AttackMdp m = *this;
  for (auto v : x.nodes) {
    if (v >= graph_->node_count() || !graph_->is_spot(v)) {
      throw Error(ErrorCode::ArgumentOutOfRange,
                  "protected node " + std::to_string(v) + " is not in V_spot");
    }
    m.detect_[v] = 1.0;
  }
  m.mode_ = Mode::Deployment;
  m.deployment_ = x;
  return m;
}

AttackMdp AttackMdp::with_belief(const BeliefVector& q) const {
  if (mode_ != Mode::Base) {
    throw Error(ErrorCode::ArgumentOutOfRange,
                "belief must be applied to the base kernel");
  }
  if (q.q.size() != graph_->node_count()) {
    throw Error(ErrorCode::ArgumentOutOfRange, "belief vector has wrong size");
  }
  AttackMdp m = *this;
  for (NodeId v = 0; v < graph_->node_count(); ++v) {
    const double p = q.q[v];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::ArgumentOutOfRange,
                  "belief entry out of [0,1] at node " + graph_->display_name(v));
    }
    if (p != 0.0 && !graph_->is_spot(v)) {
      throw Error(ErrorCode::ArgumentOutOfRange,
                  "belief mass on non-spot node " + graph_->display_name(v));
    }
    m.detect_[v] = p;
  }
  m.mode_ = Mode::Belief;
  return m;
}

MdpState AttackMdp::state(StateIndex s) const noexcept {
  if (s == sink()) return {MdpState::Kind::Sink, 0, 0};
  if (s == expired()) return {MdpState::Kind::Expired, 0, 0};
  return {MdpState::Kind::At, static_cast<NodeId>(s / (horizon_ + 1)),
          s % (horizon_ + 1)};
}

bool AttackMdp::is_terminal(StateIndex s) const noexcept {
  if (s >= sink()) return true;
  return graph_->is_target(static_cast<NodeId>(s / (horizon_ + 1)));
}

std::span<const NodeId> AttackMdp::actions(StateIndex s) const noexcept {
  if (is_terminal(s)) return {};
  return graph_->successors(static_cast<NodeId>(s / (horizon_ + 1)));
}

TransitionRow AttackMdp::transitions(StateIndex s, NodeId next) const noexcept {
  const NodeId v = static_cast<NodeId>(s / (horizon_ + 1));
  const std::size_t c = s % (horizon_ + 1);
  const double q = detect_[v];
  TransitionRow row;
  if (mode_ == Mode::Deployment && q == 1.0) {
    row.push(sink(), 1.0);
    return row;
  }
  if (c == horizon_) {
    if (q != 0.0) {
      row.push(sink(), q);
      row.push(expired(), 1.0 - q);
    } else {
      row.push(expired(), 1.0);
    }
    return row;
  }
  const double a = alpha_[c];
  if (q == 0.0) {
    row.push(at(next, c + 1), a);
    row.push(expired(), 1.0 - a);
  } else {
    row.push(sink(), q);
    row.push(at(next, c + 1), (1.0 - q) * a);
    row.push(expired(), (1.0 - q) * (1.0 - a));
  }
  return row;
}

double action_value(const AttackMdp& m, StateIndex s, NodeId next,
                    std::span<const double> values) {
  double q = 0.0;
  for (const auto& t : m.transitions(s, next)) q += t.probability * values[t.to];
  return q;
}

namespace {

void set_boundary(const AttackMdp& m, std::vector<double>& value) {
  const auto& g = m.graph();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!g.is_target(v)) continue;
    for (std::size_t c = 0; c <= m.horizon(); ++c) value[m.at(v, c)] = 1.0;
  }
  value[m.sink()] = 0.0;
  value[m.expired()] = 0.0;
}

}  // namespace

Policy best_response(const AttackMdp& m) {
  const auto& g = m.graph();
  Policy pi;
  pi.next.assign(m.state_count(), kNoAction);
  pi.value.assign(m.state_count(), 0.0);
  set_boundary(m, pi.value);
  for (std::size_t c = m.horizon() + 1; c-- > 0;) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const StateIndex s = m.at(v, c);
      auto acts = m.actions(s);
      if (acts.empty()) continue;
      double best = -1.0;
      NodeId choice = kNoAction;
      std::size_t ties = 0;
      for (auto u : acts) {
        const double q = action_value(m, s, u, pi.value);
        if (q > best) {
          best = q;
          choice = u;
          ties = 1;
        } else if (q == best) {
          ++ties;
        }
      }
      pi.next[s] = choice;
      pi.value[s] = best;
      if (ties > 1) ++pi.tied_states;
    }
  }
  return pi;
}

std::vector<double> evaluate_policy(const AttackMdp& m, const Policy& pi) {
  const auto& g = m.graph();
  if (pi.next.size() != m.state_count()) {
    throw Error(ErrorCode::UndefinedAction,
                "policy covers " + std::to_string(pi.next.size()) +
                    " states, MDP has " + std::to_string(m.state_count()));
  }
  std::vector<double> value(m.state_count(), 0.0);
  set_boundary(m, value);
  for (std::size_t c = m.horizon() + 1; c-- > 0;) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const StateIndex s = m.at(v, c);
      if (m.actions(s).empty()) continue;
      const NodeId u = pi.next[s];
      if (u == kNoAction || !g.has_edge(v, u)) {
        throw Error(ErrorCode::UndefinedAction,
                    "no legal action at (" + g.display_name(v) + ", " +
                        std::to_string(c) + ")");
      }
      value[s] = action_value(m, s, u, value);
    }
  }
  return value;
}

InitialDistribution InitialDistribution::uniform_non_target(const AttackMdp& m) {
  const auto& g = m.graph();
  InitialDistribution nu;
  std::size_t count = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) count += g.is_target(v) ? 0 : 1;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!g.is_target(v)) nu.weights.emplace_back(m.at(v, 0), 1.0 / count);
  }
  return nu;
}

InitialDistribution InitialDistribution::uniform_entries(const AttackMdp& m) {
  const auto& entries = m.graph().entries();
  if (entries.empty()) return uniform_non_target(m);
  InitialDistribution nu;
  for (auto v : entries) nu.weights.emplace_back(m.at(v, 0), 1.0 / entries.size());
  return nu;
}

InitialDistribution InitialDistribution::point(const AttackMdp& m, NodeId v) {
  InitialDistribution nu;
  nu.weights.emplace_back(m.at(v, 0), 1.0);
  return nu;
}

InitialDistribution InitialDistribution::from_node_weights(
    const AttackMdp& m, std::span<const std::pair<NodeId, double>> w) {
  double total = 0.0;
  for (auto [v, x] : w) {
    if (!(x >= 0.0) || v >= m.graph().node_count()) {
      throw Error(ErrorCode::ArgumentOutOfRange, "invalid initial weight");
    }
    total += x;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::ArgumentOutOfRange, "initial weights sum to zero");
  }
  InitialDistribution nu;
  for (auto [v, x] : w) {
    if (x > 0.0) nu.weights.emplace_back(m.at(v, 0), x / total);
  }
  return nu;
}

double initial_value(std::span<const double> values,
                     const InitialDistribution& nu) {
  double total = 0.0;
  for (auto [s, w] : nu.weights) total += w * values[s];
  return total;
}

Policy path_policy(const AttackMdp& m, std::span<const NodeId> path) {
  const auto& g = m.graph();
  Policy pi;
  pi.next.assign(m.state_count(), kNoAction);
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    auto acts = m.actions(s);
    if (!acts.empty()) pi.next[s] = acts.front();
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] >= g.node_count() || path[i + 1] >= g.node_count() ||
        !g.has_edge(path[i], path[i + 1]) || i >= m.horizon()) {
      throw Error(ErrorCode::InvalidPath, "path step " + std::to_string(i) + " is not an edge");
    }
    pi.next[m.at(path[i], i)] = path[i + 1];
  }
  pi.value = evaluate_policy(m, pi);
  return pi;
}

double path_value_oracle(const AttackGraph& g, const StepDistribution& d,
                         std::span<const NodeId> path) {
  if (path.empty()) throw Error(ErrorCode::InvalidPath, "empty path");
  for (auto v : path) {
    if (v >= g.node_count()) throw Error(ErrorCode::InvalidPath, "unknown node");
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!g.has_edge(path[i], path[i + 1])) {
      throw Error(ErrorCode::InvalidPath,
                  "no edge " + g.display_name(path[i]) + " -> " +
                      g.display_name(path[i + 1]));
    }
  }
  if (!g.is_target(path.back())) {
    throw Error(ErrorCode::InvalidPath, "path does not end in a target");
  }
  return d.survival(path.size() - 1);
}

}  // namespace ctr
