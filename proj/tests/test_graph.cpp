#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "ctr/demo.hpp"
#include "ctr/error.hpp"
#include "ctr/graph.hpp"
#include "ctr/synthetic.hpp"

namespace ctr {
namespace {

ErrorCode code_of(const std::string& doc) {
  try {
    parse_graph(std::string_view(doc));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << doc;
  return ErrorCode::Schema;
}

TEST(Graph, DemoShape) {
  const auto g = demo_graph();
  EXPECT_EQ(g.node_count(), 6u);
  EXPECT_EQ(g.edge_count(), 7u);
  EXPECT_EQ(longest_path_bound(g), 3u);
  EXPECT_EQ(count_paths(g, 0), 3.0);
  EXPECT_EQ(enumerate_paths(g, 0).size(), 3u);
  EXPECT_EQ(g.spot().size(), 4u);
  EXPECT_TRUE(g.warnings().empty());
  EXPECT_EQ(g.display_name(4), "E");
  EXPECT_EQ(*g.find_by_label("D"), 3u);
}

TEST(Graph, DenseIdsFollowExternalOrder) {
  const auto g = parse_graph(std::string_view(R"({
    "nodes": [{"id": 40}, {"id": -3}, {"id": 7}],
    "edges": [[-3, 40], [7, 40], [-3, 7]],
    "targets": [40], "spot": [7]})"));
  EXPECT_EQ(g.external_id(0), -3);
  EXPECT_EQ(g.external_id(1), 7);
  EXPECT_EQ(g.external_id(2), 40);
  ASSERT_EQ(g.successors(0).size(), 2u);
  EXPECT_EQ(g.successors(0)[0], 1u);
  EXPECT_EQ(g.successors(0)[1], 2u);
}

TEST(Graph, RejectsMalformedDocuments) {
  const std::string base_nodes = R"("nodes": [{"id": 0}, {"id": 1}, {"id": 2}])";
  auto doc = [&](const std::string& rest) { return "{" + base_nodes + "," + rest + "}"; };
  EXPECT_EQ(code_of(doc(R"("edges": [[0,1],[1,0]], "targets": [2], "spot": [0])")),
            ErrorCode::CycleDetected);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,0]], "targets": [2], "spot": [0])")),
            ErrorCode::SelfLoop);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,1],[0,1]], "targets": [2], "spot": [0])")),
            ErrorCode::DuplicateEdge);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,9]], "targets": [2], "spot": [0])")),
            ErrorCode::DanglingReference);
  EXPECT_EQ(code_of(doc(R"("edges": [[2,0]], "targets": [2], "spot": [0])")),
            ErrorCode::TargetHasOutEdge);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,2]], "targets": [], "spot": [0])")),
            ErrorCode::EmptyTargets);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,2]], "targets": [2], "spot": [])")),
            ErrorCode::EmptySpot);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,2]], "targets": [2], "spot": [2])")),
            ErrorCode::SpotIntersectsTargets);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,2]], "entries": [2], "targets": [2], "spot": [0])")),
            ErrorCode::EntryIsTarget);
  EXPECT_EQ(code_of(doc(R"("edges": [[0,2]], "targets": [2], "spot": [0], "x": 1)")),
            ErrorCode::UnknownKey);
  EXPECT_EQ(code_of(R"({"nodes": [{"id": 0}, {"id": 0}], "edges": [], "targets": [0], "spot": [0]})"),
            ErrorCode::DuplicateNode);
  EXPECT_EQ(code_of("{\"nodes\": ["), ErrorCode::Schema);
}

TEST(Graph, WarnsOnNodesThatCannotReachTargets) {
  const auto g = parse_graph(std::string_view(R"({
    "nodes": [{"id": 0}, {"id": 1}, {"id": 2}],
    "edges": [[0, 2]], "targets": [2], "spot": [0, 1]})"));
  ASSERT_EQ(g.warnings().size(), 1u);
  EXPECT_NE(g.warnings()[0].find("cannot reach"), std::string::npos);
}

TEST(Graph, JsonRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_dag({.nodes = 9}, seed);
    const auto again = parse_graph(graph_to_json(g));
    EXPECT_EQ(graph_hash(g), graph_hash(again));
    EXPECT_EQ(graph_to_json(g), graph_to_json(again));
  }
}

TEST(Graph, PathLimit) {
  const auto g = high_redundancy_graph(6, 2, 3);
  EXPECT_THROW(enumerate_paths(g, 0, 2), Error);
}

// Brute force: enumerate every s->t path, keep the shortest ones, and count
// the share through each interior node.
std::vector<double> brute_betweenness(const AttackGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  if (n < 3) return bc;
  std::vector<std::vector<Path>> from(n);
  for (NodeId s = 0; s < n; ++s) {
    Path p{s};
    std::function<void(NodeId)> dfs = [&](NodeId v) {
      if (p.size() > 1) from[s].push_back(p);
      for (auto w : g.successors(v)) {
        p.push_back(w);
        dfs(w);
        p.pop_back();
      }
    };
    dfs(s);
  }
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = 0; t < n; ++t) {
      std::vector<const Path*> st;
      std::size_t best = SIZE_MAX;
      for (const auto& p : from[s])
        if (p.back() == t) best = std::min(best, p.size());
      for (const auto& p : from[s])
        if (p.back() == t && p.size() == best) st.push_back(&p);
      if (st.empty()) continue;
      for (NodeId v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        double through = 0;
        for (auto* p : st)
          if (std::find(p->begin() + 1, p->end() - 1, v) != p->end() - 1) through += 1;
        bc[v] += through / static_cast<double>(st.size());
      }
    }
  }
  for (auto& x : bc) x /= static_cast<double>((n - 1) * (n - 2));
  return bc;
}

TEST(Graph, BetweennessMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = random_dag({.nodes = 4 + seed % 7, .edge_probability = 0.4}, seed);
    const auto fast = betweenness_centrality(g);
    const auto slow = brute_betweenness(g);
    for (NodeId v = 0; v < g.node_count(); ++v)
      EXPECT_NEAR(fast[v], slow[v], 1e-12) << "seed " << seed << " node " << v;
  }
}

TEST(Graph, PathCountMatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = random_dag({.nodes = 10, .edge_probability = 0.45}, seed);
    for (NodeId v = 0; v < g.node_count(); ++v)
      EXPECT_EQ(count_paths(g, v), static_cast<double>(enumerate_paths(g, v).size()));
  }
}

TEST(Graph, LongestPathBoundsEveryPath) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = random_dag({.nodes = 9}, seed);
    std::size_t longest = 0;
    for (NodeId v = 0; v < g.node_count(); ++v)
      for (const auto& p : enumerate_paths(g, v)) longest = std::max(longest, p.size() - 1);
    EXPECT_EQ(longest_path_bound(g), longest);
  }
}

TEST(Graph, ShortestPathIsLexicographicallySmallest) {
  const auto g = demo_graph();
  const auto p = shortest_path_to_target(g, 0);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, (Path{0, 1, 5}));
  const auto hops = hops_to_target(g);
  EXPECT_EQ(*hops[3], 2u);
  EXPECT_EQ(*hops[5], 0u);
}

}  // namespace
}  // namespace ctr
