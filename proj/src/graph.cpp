#include "ctr/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ctr/error.hpp"

namespace ctr {

namespace {

using nlohmann::json;

std::string join_ids(const std::vector<std::int64_t>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << " -> ";
    os << ids[i];
  }
  return os.str();
}

// Returns a cycle (closed: first == last) if one exists.
std::optional<std::vector<NodeId>> find_cycle(
    std::size_t n, const std::vector<std::size_t>& offsets,
    const std::vector<NodeId>& succ) {
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> colour(n, kWhite);
  std::vector<NodeId> stack;
  std::vector<std::size_t> cursor(n, 0);
  for (NodeId root = 0; root < n; ++root) {
    if (colour[root] != kWhite) continue;
    stack.push_back(root);
    colour[root] = kGrey;
    cursor[root] = offsets[root];
    while (!stack.empty()) {
      NodeId u = stack.back();
      if (cursor[u] == offsets[u + 1]) {
        colour[u] = kBlack;
        stack.pop_back();
        continue;
      }
      NodeId w = succ[cursor[u]++];
      if (colour[w] == kGrey) {
        auto it = std::find(stack.begin(), stack.end(), w);
        std::vector<NodeId> cycle(it, stack.end());
        cycle.push_back(w);
        return cycle;
      }
      if (colour[w] == kWhite) {
        colour[w] = kGrey;
        cursor[w] = offsets[w];
        stack.push_back(w);
      }
    }
  }
  return std::nullopt;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         std::string_view where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](const char* k) { return it.key() == k; });
    if (!ok) {
      throw Error(ErrorCode::UnknownKey,
                  "unknown key '" + it.key() + "' in " + std::string(where));
    }
  }
}

std::vector<std::int64_t> read_id_list(const json& doc, const char* key,
                                       bool required) {
  std::vector<std::int64_t> out;
  if (!doc.contains(key)) {
    if (required) {
      throw Error(ErrorCode::Schema, std::string("missing key '") + key + "'");
    }
    return out;
  }
  const json& arr = doc.at(key);
  if (!arr.is_array()) {
    throw Error(ErrorCode::Schema, std::string("'") + key + "' must be an array");
  }
  for (const auto& e : arr) {
    if (!e.is_number_integer()) {
      throw Error(ErrorCode::Schema,
                  std::string("'") + key + "' entries must be integers");
    }
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

}  // namespace

bool AttackGraph::has_edge(NodeId from, NodeId to) const noexcept {
  auto s = successors(from);
  return std::binary_search(s.begin(), s.end(), to);
}

std::string AttackGraph::display_name(NodeId v) const {
  const auto& n = nodes_[v];
  return n.label.empty() ? std::to_string(n.external_id) : n.label;
}

std::optional<NodeId> AttackGraph::find(std::int64_t external_id) const {
  auto it = std::lower_bound(
      nodes_.begin(), nodes_.end(), external_id,
      [](const NodeInfo& n, std::int64_t id) { return n.external_id < id; });
  if (it == nodes_.end() || it->external_id != external_id) return std::nullopt;
  return static_cast<NodeId>(it - nodes_.begin());
}

std::optional<NodeId> AttackGraph::find_by_label(std::string_view label) const {
  for (NodeId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].label == label) return v;
  }
  return std::nullopt;
}

AttackGraph AttackGraph::build(const GraphSpec& spec) {
  AttackGraph g;
  g.nodes_ = spec.nodes;
  std::stable_sort(g.nodes_.begin(), g.nodes_.end(),
                   [](const NodeInfo& a, const NodeInfo& b) {
                     return a.external_id < b.external_id;
                   });
  for (std::size_t i = 1; i < g.nodes_.size(); ++i) {
    if (g.nodes_[i].external_id == g.nodes_[i - 1].external_id) {
      throw Error(ErrorCode::DuplicateNode,
                  "node id " + std::to_string(g.nodes_[i].external_id) +
                      " declared twice");
    }
  }
  const std::size_t n = g.nodes_.size();
  if (n == 0) throw Error(ErrorCode::Schema, "graph has no nodes");

  auto resolve = [&](std::int64_t id, std::string_view what) -> NodeId {
    auto v = g.find(id);
    if (!v) {
      throw Error(ErrorCode::DanglingReference,
                  std::string(what) + " references unknown node " +
                      std::to_string(id));
    }
    return *v;
  };

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(spec.edges.size());
  for (auto [a, b] : spec.edges) {
    NodeId u = resolve(a, "edge");
    NodeId w = resolve(b, "edge");
    if (u == w) {
      throw Error(ErrorCode::SelfLoop,
                  "self-loop on node " + std::to_string(a));
    }
    edges.emplace_back(u, w);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1]) {
      throw Error(ErrorCode::DuplicateEdge,
                  "edge " + std::to_string(g.nodes_[edges[i].first].external_id) +
                      " -> " +
                      std::to_string(g.nodes_[edges[i].second].external_id) +
                      " listed twice");
    }
  }

  auto resolve_set = [&](const std::vector<std::int64_t>& ids,
                         std::string_view what) {
    std::vector<NodeId> out;
    for (auto id : ids) out.push_back(resolve(id, what));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  g.entries_ = resolve_set(spec.entries, "entries");
  g.targets_ = resolve_set(spec.targets, "targets");
  g.spot_ = resolve_set(spec.spot, "spot");

  if (g.targets_.empty()) throw Error(ErrorCode::EmptyTargets, "no targets");
  if (g.spot_.empty()) throw Error(ErrorCode::EmptySpot, "no protectable nodes");

  g.is_target_.assign(n, 0);
  g.is_spot_.assign(n, 0);
  g.is_entry_.assign(n, 0);
  for (auto v : g.targets_) g.is_target_[v] = 1;
  for (auto v : g.spot_) {
    if (g.is_target_[v]) {
      throw Error(ErrorCode::SpotIntersectsTargets,
                  "node " + std::to_string(g.nodes_[v].external_id) +
                      " is both a target and protectable");
    }
    g.is_spot_[v] = 1;
  }
  for (auto v : g.entries_) {
    if (g.is_target_[v]) {
      throw Error(ErrorCode::EntryIsTarget,
                  "node " + std::to_string(g.nodes_[v].external_id) +
                      " is both an entry and a target");
    }
    g.is_entry_[v] = 1;
  }

  g.offsets_.assign(n + 1, 0);
  for (auto [u, w] : edges) ++g.offsets_[u + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.succ_.resize(edges.size());
  {
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, w] : edges) g.succ_[fill[u]++] = w;
  }
  g.edge_count_ = edges.size();

  for (auto t : g.targets_) {
    if (g.out_degree(t) != 0) {
      throw Error(ErrorCode::TargetHasOutEdge,
                  "target " + std::to_string(g.nodes_[t].external_id) +
                      " has an outgoing edge to " +
                      std::to_string(
                          g.nodes_[g.successors(t).front()].external_id));
    }
  }

  if (auto cycle = find_cycle(n, g.offsets_, g.succ_)) {
    std::vector<std::int64_t> ids;
    for (auto v : *cycle) ids.push_back(g.nodes_[v].external_id);
    throw Error(ErrorCode::CycleDetected, "cycle " + join_ids(ids));
  }

  // Kahn with a min-heap on ids for a canonical order.
  std::vector<std::size_t> indeg(n, 0);
  for (auto w : g.succ_) ++indeg[w];
  std::set<NodeId> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.insert(v);
  while (!ready.empty()) {
    NodeId v = *ready.begin();
    ready.erase(ready.begin());
    g.topo_.push_back(v);
    for (auto w : g.successors(v))
      if (--indeg[w] == 0) ready.insert(w);
  }

  auto hops = hops_to_target(g);
  for (NodeId v = 0; v < n; ++v) {
    if (!hops[v]) {
      g.warnings_.push_back("node " + g.display_name(v) +
                            " cannot reach any target");
    }
  }
  return g;
}

GraphSpec AttackGraph::to_spec() const {
  GraphSpec s;
  s.nodes = nodes_;
  for (NodeId u = 0; u < node_count(); ++u)
    for (auto w : successors(u))
      s.edges.emplace_back(nodes_[u].external_id, nodes_[w].external_id);
  for (auto v : entries_) s.entries.push_back(nodes_[v].external_id);
  for (auto v : targets_) s.targets.push_back(nodes_[v].external_id);
  for (auto v : spot_) s.spot.push_back(nodes_[v].external_id);
  return s;
}

AttackGraph parse_graph(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Schema, "document must be an object");
  reject_unknown_keys(doc, {"nodes", "edges", "entries", "targets", "spot"},
                      "graph document");
  GraphSpec spec;
  if (!doc.contains("nodes") || !doc.at("nodes").is_array()) {
    throw Error(ErrorCode::Schema, "'nodes' must be an array");
  }
  for (const auto& node : doc.at("nodes")) {
    if (!node.is_object()) throw Error(ErrorCode::Schema, "node entries must be objects");
    reject_unknown_keys(node, {"id", "label"}, "node");
    if (!node.contains("id") || !node.at("id").is_number_integer()) {
      throw Error(ErrorCode::Schema, "node 'id' must be an integer");
    }
    NodeInfo info;
    info.external_id = node.at("id").get<std::int64_t>();
    if (node.contains("label")) {
      if (!node.at("label").is_string()) {
        throw Error(ErrorCode::Schema, "node 'label' must be a string");
      }
      info.label = node.at("label").get<std::string>();
    }
    spec.nodes.push_back(std::move(info));
  }
  if (!doc.contains("edges") || !doc.at("edges").is_array()) {
    throw Error(ErrorCode::Schema, "'edges' must be an array");
  }
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw Error(ErrorCode::Schema, "edges must be [src, dst] integer pairs");
    }
    spec.edges.emplace_back(e[0].get<std::int64_t>(), e[1].get<std::int64_t>());
  }
  spec.entries = read_id_list(doc, "entries", false);
  spec.targets = read_id_list(doc, "targets", true);
  spec.spot = read_id_list(doc, "spot", true);
  return AttackGraph::build(spec);
}

AttackGraph parse_graph(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line:column for the caller.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < document.size(); ++i) {
      if (document[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::Schema, "JSON syntax error at line " +
                                       std::to_string(line) + ", column " +
                                       std::to_string(col) + ": " + e.what());
  }
  return parse_graph(doc);
}

AttackGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(std::string_view(buf.str()));
}

nlohmann::json graph_to_json(const AttackGraph& g) {
  auto spec = g.to_spec();
  json doc;
  doc["nodes"] = json::array();
  for (const auto& n : spec.nodes) {
    json node = {{"id", n.external_id}};
    if (!n.label.empty()) node["label"] = n.label;
    doc["nodes"].push_back(node);
  }
  doc["edges"] = json::array();
  for (auto [a, b] : spec.edges) doc["edges"].push_back({a, b});
  doc["entries"] = spec.entries;
  doc["targets"] = spec.targets;
  doc["spot"] = spec.spot;
  return doc;
}

std::size_t longest_path_bound(const AttackGraph& g) {
  const auto& topo = g.topological_order();
  std::vector<std::size_t> longest(g.node_count(), 0);
  std::size_t best = 0;
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (auto w : g.successors(*it))
      longest[*it] = std::max(longest[*it], longest[w] + 1);
    best = std::max(best, longest[*it]);
  }
  return best;
}

std::vector<Path> enumerate_paths(const AttackGraph& g, NodeId from,
                                  std::size_t limit) {
  std::vector<Path> out;
  Path current{from};
  // Successors are sorted, so DFS emits paths in lexicographic order.
  auto dfs = [&](auto&& self, NodeId v) -> void {
    if (g.is_target(v)) {
      if (out.size() >= limit) {
        throw Error(ErrorCode::PathLimitExceeded,
                    "more than " + std::to_string(limit) + " paths");
      }
      out.push_back(current);
      return;
    }
    for (auto w : g.successors(v)) {
      current.push_back(w);
      self(self, w);
      current.pop_back();
    }
  };
  dfs(dfs, from);
  return out;
}

double count_paths(const AttackGraph& g, NodeId from) {
  std::vector<double> count(g.node_count(), 0.0);
  const auto& topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    NodeId v = *it;
    if (g.is_target(v)) {
      count[v] = 1.0;
      continue;
    }
    for (auto w : g.successors(v)) count[v] += count[w];
  }
  return count[from];
}

std::vector<std::optional<std::size_t>> hops_to_target(const AttackGraph& g) {
  std::vector<std::optional<std::size_t>> hops(g.node_count());
  const auto& topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    NodeId v = *it;
    if (g.is_target(v)) {
      hops[v] = 0;
      continue;
    }
    for (auto w : g.successors(v)) {
      if (hops[w] && (!hops[v] || *hops[w] + 1 < *hops[v])) hops[v] = *hops[w] + 1;
    }
  }
  return hops;
}

std::optional<Path> shortest_path_to_target(const AttackGraph& g, NodeId from) {
  auto hops = hops_to_target(g);
  if (!hops[from]) return std::nullopt;
  Path path{from};
  NodeId v = from;
  while (!g.is_target(v)) {
    for (auto w : g.successors(v)) {
      if (hops[w] && *hops[w] + 1 == *hops[v]) {
        v = w;
        break;
      }
    }
    path.push_back(v);
  }
  return path;
}

std::vector<double> betweenness_centrality(const AttackGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  if (n < 3) return bc;
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<NodeId> order;
  std::deque<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    queue.push_back(s);
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (auto w : g.successors(v)) {
        if (dist[w] == kUnseen) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  const double norm = static_cast<double>((n - 1) * (n - 2));
  for (auto& x : bc) x /= norm;
  return bc;
}

std::uint64_t graph_hash(const AttackGraph& g) {
  const std::string text = graph_to_json(g).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ctr
