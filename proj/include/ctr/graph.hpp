#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ctr {

// Dense node index, 0..|V|-1.
using NodeId = std::uint32_t;
using Path = std::vector<NodeId>;

struct NodeInfo {
  std::int64_t external_id = 0;
  std::string label;
};

// Raw description of an attack graph in external ids, as read from a
// document. AttackGraph::build validates it and remaps ids.
struct GraphSpec {
  std::vector<NodeInfo> nodes;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::vector<std::int64_t> entries;
  std::vector<std::int64_t> targets;
  std::vector<std::int64_t> spot;
};

// Immutable validated DAG with entry, target (F) and protectable (V_spot)
// node sets. Dense ids follow ascending external id, successor lists are
// sorted ascending, so "lowest out-edge" and lexicographic path order are
// both defined on dense ids.
class AttackGraph {
 public:
  static AttackGraph build(const GraphSpec& spec);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> successors(NodeId v) const noexcept {
    return {succ_.data() + offsets_[v], succ_.data() + offsets_[v + 1]};
  }
  std::size_t out_degree(NodeId v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }
  bool has_edge(NodeId from, NodeId to) const noexcept;

  const std::vector<NodeId>& entries() const noexcept { return entries_; }
  const std::vector<NodeId>& targets() const noexcept { return targets_; }
  const std::vector<NodeId>& spot() const noexcept { return spot_; }
  bool is_target(NodeId v) const noexcept { return is_target_[v] != 0; }
  bool is_spot(NodeId v) const noexcept { return is_spot_[v] != 0; }
  bool is_entry(NodeId v) const noexcept { return is_entry_[v] != 0; }

  const std::vector<NodeId>& topological_order() const noexcept {
    return topo_;
  }

  std::int64_t external_id(NodeId v) const { return nodes_[v].external_id; }
  const std::string& label(NodeId v) const { return nodes_[v].label; }
  // Label when present, external id otherwise.
  std::string display_name(NodeId v) const;
  std::optional<NodeId> find(std::int64_t external_id) const;
  std::optional<NodeId> find_by_label(std::string_view label) const;

  // Non-fatal findings from validation (e.g. nodes that cannot reach F).
  const std::vector<std::string>& warnings() const noexcept {
    return warnings_;
  }

  // Canonical serialization back to the external schema.
  GraphSpec to_spec() const;

 private:
  AttackGraph() = default;

  std::vector<NodeInfo> nodes_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> succ_;
  std::size_t edge_count_ = 0;
  std::vector<NodeId> entries_, targets_, spot_;
  std::vector<char> is_target_, is_spot_, is_entry_;
  std::vector<NodeId> topo_;
  std::vector<std::string> warnings_;
};

// JSON ingestion. Throws ctr::Error on schema or invariant violations.
AttackGraph parse_graph(std::string_view document);
AttackGraph parse_graph(const nlohmann::json& document);
AttackGraph load_graph(const std::string& path);
nlohmann::json graph_to_json(const AttackGraph& g);

// Number of edges on the longest directed path.
std::size_t longest_path_bound(const AttackGraph& g);

inline constexpr std::size_t kDefaultPathLimit = 1'000'000;

// All simple paths from `from` ending in F, in lexicographic order.
std::vector<Path> enumerate_paths(const AttackGraph& g, NodeId from,
                                  std::size_t limit = kDefaultPathLimit);

// Number of from->F paths, computed by DP (no enumeration).
double count_paths(const AttackGraph& g, NodeId from);

// Edge count of the shortest path to F; nullopt when F is unreachable.
std::vector<std::optional<std::size_t>> hops_to_target(const AttackGraph& g);

// Lexicographically smallest minimum-edge path from `from` to F.
std::optional<Path> shortest_path_to_target(const AttackGraph& g,
                                            NodeId from);

// Directed shortest-path betweenness, endpoints excluded, normalized by
// (n-1)(n-2). All zeros when n < 3.
std::vector<double> betweenness_centrality(const AttackGraph& g);

// Stable 64-bit FNV-1a digest of the canonical graph serialization.
std::uint64_t graph_hash(const AttackGraph& g);

}  // namespace ctr
