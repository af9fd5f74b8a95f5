#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ctr/graph.hpp"
#include "ctr/step_distribution.hpp"

namespace ctr {

using StateIndex = std::uint32_t;

struct MdpState {
  enum class Kind { At, Sink, Expired };
  Kind kind = Kind::At;
  NodeId node = 0;
  std::size_t steps = 0;
};

struct Transition {
  StateIndex to = 0;
  double probability = 0.0;
};

// Outcome distribution of one (state, action) pair; at most three entries.
class TransitionRow {
 public:
  void push(StateIndex to, double p) { items_[size_++] = {to, p}; }
  const Transition* begin() const noexcept { return items_.data(); }
  const Transition* end() const noexcept { return items_.data() + size_; }
  std::size_t size() const noexcept { return size_; }
  const Transition& operator[](std::size_t i) const noexcept { return items_[i]; }

 private:
  std::array<Transition, 3> items_{};
  std::size_t size_ = 0;
};

// Pure defender strategy: h protected nodes drawn from V_spot.
struct Deployment {
  std::vector<NodeId> nodes;  // sorted ascending
  std::size_t budget = 0;

  bool contains(NodeId v) const;
  static Deployment of(std::vector<NodeId> nodes);
};

// Perceived detection probability per node; zero outside V_spot. No sum
// constraint: blind beliefs sum to h, Dirichlet beliefs to 1.
struct BeliefVector {
  std::vector<double> q;  // indexed by NodeId

  static BeliefVector uniform_on_spot(const AttackGraph& g, double value);
  // `values` in the order of g.spot().
  static BeliefVector from_spot_values(const AttackGraph& g,
                                       std::span<const double> values);
  static BeliefVector indicator(const AttackGraph& g, const Deployment& x);
};

inline constexpr NodeId kNoAction = std::numeric_limits<NodeId>::max();

// Deterministic attacker policy: the successor chosen in each state, plus
// the value vector it attains under the kernel it was computed for.
struct Policy {
  std::vector<NodeId> next;    // kNoAction where the state has no actions
  std::vector<double> value;   // per state, in [0,1]
  std::size_t tied_states = 0; // states whose argmax had more than one action
};

// Attacker MDP over states (node, steps-taken) plus absorbing Sink
// (detected) and Expired (round ended before the next step). States
// At(t, c) with t in F are terminal with value 1.
//
// Layout is flat: At(v, c) = v * (horizon + 1) + c, then Sink, Expired.
// Every MDP derived from the same graph shares the layout.
class AttackMdp {
 public:
  enum class Mode { Base, Deployment, Belief };

  AttackMdp(std::shared_ptr<const AttackGraph> graph, StepDistribution dist);
  AttackMdp(const AttackGraph& graph, StepDistribution dist);

  // Deployment kernel: occupying a protected node leads to Sink surely.
  // Throws BudgetMismatch if |x.nodes| != x.budget.
  AttackMdp with_deployment(const Deployment& x) const;
  // Belief kernel: occupying v leads to Sink with probability q(v), and
  // follows the base kernel otherwise.
  AttackMdp with_belief(const BeliefVector& q) const;

  Mode mode() const noexcept { return mode_; }
  const AttackGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const AttackGraph>& graph_ptr() const noexcept {
    return graph_;
  }
  const StepDistribution& distribution() const noexcept { return dist_; }
  const std::optional<Deployment>& deployment() const noexcept {
    return deployment_;
  }

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t state_count() const noexcept {
    return graph_->node_count() * (horizon_ + 1) + 2;
  }
  StateIndex at(NodeId v, std::size_t steps) const noexcept {
    return static_cast<StateIndex>(v * (horizon_ + 1) + steps);
  }
  StateIndex sink() const noexcept {
    return static_cast<StateIndex>(graph_->node_count() * (horizon_ + 1));
  }
  StateIndex expired() const noexcept { return sink() + 1; }
  MdpState state(StateIndex s) const noexcept;

  // Target, Sink and Expired states.
  bool is_terminal(StateIndex s) const noexcept;
  // Legal successors from s; empty for terminal and dead-end states.
  std::span<const NodeId> actions(StateIndex s) const noexcept;

  // alpha_c = Pr(N >= c+1 | N >= c), or 0 once S(c) = 0.
  double advance_probability(std::size_t steps) const noexcept {
    return alpha_[steps];
  }
  // Detection probability when occupying v under the current kernel.
  double detection(NodeId v) const noexcept { return detect_[v]; }

  // Outcomes of moving from s toward successor `next`. Advancing past the
  // horizon (only possible from unreachable states) is routed to Expired.
  TransitionRow transitions(StateIndex s, NodeId next) const noexcept;

 private:
  std::shared_ptr<const AttackGraph> graph_;
  StepDistribution dist_;
  std::size_t horizon_ = 0;
  std::vector<double> alpha_;
  std::vector<double> detect_;
  Mode mode_ = Mode::Base;
  std::optional<Deployment> deployment_;
};

// Optimal policy by backward induction over decreasing step counter.
// Ties resolve to the lowest successor id.
Policy best_response(const AttackMdp& m);

// Value of a fixed policy under m's kernel (the policy may come from a
// different kernel). Throws UndefinedAction on a missing or illegal action.
std::vector<double> evaluate_policy(const AttackMdp& m, const Policy& pi);

// Q-value of one action given successor values; shared by best_response and
// evaluate_policy so both use identical arithmetic.
double action_value(const AttackMdp& m, StateIndex s, NodeId next,
                    std::span<const double> values);

// Initial distribution nu over states.
struct InitialDistribution {
  std::vector<std::pair<StateIndex, double>> weights;

  // Uniform over At(v, 0) for v in V \ F.
  static InitialDistribution uniform_non_target(const AttackMdp& m);
  // Uniform over At(v, 0) for v in entries (falls back to V \ F if none).
  static InitialDistribution uniform_entries(const AttackMdp& m);
  static InitialDistribution point(const AttackMdp& m, NodeId v);
  // Explicit weights per node at step 0; normalised.
  static InitialDistribution from_node_weights(
      const AttackMdp& m, std::span<const std::pair<NodeId, double>> w);
};

double initial_value(std::span<const double> values,
                     const InitialDistribution& nu);

// Policy that walks `path` from At(path[0], 0): At(path[i], i) moves to
// path[i+1]. Every other state with actions takes its lowest successor.
// Throws InvalidPath when consecutive nodes are not edges.
Policy path_policy(const AttackMdp& m, std::span<const NodeId> path);

// Closed form: following `path` from its first node with a fresh counter
// succeeds with probability Pr(N >= length). Throws InvalidPath.
double path_value_oracle(const AttackGraph& g, const StepDistribution& d,
                         std::span<const NodeId> path);

}  // namespace ctr
