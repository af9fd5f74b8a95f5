#include "ctr/synthetic.hpp"

#include <algorithm>
#include <string>

#include "ctr/error.hpp"

namespace ctr {

GraphSpec random_dag_spec(const RandomDagOptions& o, std::uint64_t seed) {
  if (o.nodes < 2 || o.targets < 1 || o.targets >= o.nodes) {
    throw Error(ErrorCode::ArgumentOutOfRange, "random DAG needs 1 <= targets < nodes");
  }
  const std::size_t inner = o.nodes - o.targets;
  if (o.entries > inner || o.spot > inner) {
    throw Error(ErrorCode::ArgumentOutOfRange, "entries and spot must fit in V \\ F");
  }
  Rng rng = Rng::substream(seed, Stream::Synthetic, 0);
  GraphSpec spec;
  for (std::size_t i = 0; i < o.nodes; ++i)
    spec.nodes.push_back({static_cast<std::int64_t>(i), "n" + std::to_string(i)});
  for (std::size_t i = 0; i < inner; ++i) {
    bool any = false;
    for (std::size_t j = i + 1; j < o.nodes; ++j) {
      if (rng.uniform() < o.edge_probability) {
        spec.edges.emplace_back(i, j);
        any = true;
      }
    }
    if (!any) {
      const std::size_t j = i + 1 + static_cast<std::size_t>(rng.below(o.nodes - i - 1));
      spec.edges.emplace_back(i, j);
    }
  }
  for (std::size_t i = 0; i < o.entries; ++i) spec.entries.push_back(static_cast<std::int64_t>(i));
  for (std::size_t i = inner; i < o.nodes; ++i) spec.targets.push_back(static_cast<std::int64_t>(i));

  std::vector<std::int64_t> pool;
  for (std::size_t i = 0; i < inner; ++i) pool.push_back(static_cast<std::int64_t>(i));
  const std::size_t k = o.spot == 0 ? inner : o.spot;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  spec.spot = std::move(pool);
  return spec;
}

AttackGraph random_dag(const RandomDagOptions& options, std::uint64_t seed) {
  return AttackGraph::build(random_dag_spec(options, seed));
}

StepDistribution random_distribution(Rng& rng) {
  if (rng.uniform() < 0.5) {
    const double la = 0.5 + 3.5 * rng.uniform();
    const double ld = 0.5 + 3.5 * rng.uniform();
    return StepDistribution::geometric(la, ld);
  }
  const std::size_t len = 2 + static_cast<std::size_t>(rng.below(6));
  std::vector<double> s{1.0};
  for (std::size_t i = 1; i < len; ++i) s.push_back(s.back() * (0.5 + 0.5 * rng.uniform()));
  const double tail = rng.uniform() < 0.5 ? 0.0 : s.back() * rng.uniform();
  return StepDistribution::explicit_survival(std::move(s), tail);
}

GraphSpec high_redundancy_spec(std::size_t redundant, std::size_t funnels,
                               std::size_t feeders) {
  if (redundant < 1) throw Error(ErrorCode::ArgumentOutOfRange, "need at least one redundant route");
  GraphSpec spec;
  std::int64_t next = 0;
  auto add = [&](std::string label) {
    spec.nodes.push_back({next, std::move(label)});
    return next++;
  };
  const auto a = add("A");
  std::vector<std::int64_t> s, b;
  for (std::size_t i = 0; i < redundant; ++i) s.push_back(add("S" + std::to_string(i)));
  for (std::size_t j = 0; j < funnels; ++j) b.push_back(add("B" + std::to_string(j)));
  std::vector<std::pair<std::int64_t, std::int64_t>> feed;
  for (std::size_t j = 0; j < funnels; ++j)
    for (std::size_t i = 0; i < feeders; ++i)
      feed.emplace_back(add("C" + std::to_string(j) + "_" + std::to_string(i)), b[j]);
  const auto t = add("T");

  for (auto v : s) {
    spec.edges.emplace_back(a, v);
    spec.edges.emplace_back(v, t);
  }
  for (auto v : b) spec.edges.emplace_back(v, t);
  for (const auto& e : feed) spec.edges.push_back(e);
  spec.entries = {a};
  spec.targets = {t};
  for (const auto& n : spec.nodes)
    if (n.external_id != a && n.external_id != t) spec.spot.push_back(n.external_id);
  return spec;
}

AttackGraph high_redundancy_graph(std::size_t redundant, std::size_t funnels,
                                  std::size_t feeders) {
  return AttackGraph::build(high_redundancy_spec(redundant, funnels, feeders));
}

}  // namespace ctr
