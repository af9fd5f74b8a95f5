#include "ctr/demo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ctr/solvers.hpp"

namespace ctr {

const char* demo_graph_document() {
  return R"({
  "nodes": [
    {"id": 0, "label": "A"},
    {"id": 1, "label": "B"},
    {"id": 2, "label": "C"},
    {"id": 3, "label": "D"},
    {"id": 4, "label": "E"},
    {"id": 5, "label": "T"}
  ],
  "edges": [[0, 1], [0, 2], [0, 3], [1, 5], [2, 5], [3, 4], [4, 5]],
  "entries": [0],
  "targets": [5],
  "spot": [1, 2, 3, 4]
}
)";
}

AttackGraph demo_graph() { return parse_graph(std::string_view(demo_graph_document())); }

StepDistribution demo_distribution() {
  return StepDistribution::explicit_survival({1.0, 1.0, 0.8, 0.35}, 0.0);
}

namespace {

constexpr double kExact = 1e-9;
constexpr double kApprox = 5e-3;

std::string fixed(double x, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

DemoReport run_demo(const DemoOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  DemoReport r;
  const auto g = std::make_shared<const AttackGraph>(demo_graph());
  const AttackMdp base(g, demo_distribution());
  const NodeId a = *g->find_by_label("A");
  const auto nu = InitialDistribution::point(base, a);
  const auto& spot = g->spot();

  auto check = [&](std::string name, double value, double expected, double tol) {
    const bool ok = std::fabs(value - expected) <= tol;
    r.checks.push_back({std::move(name), value, expected, tol, ok});
  };
  auto name_of = [&](NodeId v) { return g->display_name(v); };

  // Stackelberg row: best-responding attacker against each single node.
  const auto st = solve_stackelberg(base, 1, nu);
  for (const auto& row : st.table) r.stackelberg_row.push_back(row.value);

  // Path values under the switching belief p* = 1/4 on every spot node.
  const auto pstar = base.with_belief(BeliefVector::uniform_on_spot(*g, 0.25));
  auto path_value = [&](std::initializer_list<const char*> labels) {
    Path p;
    for (auto l : labels) p.push_back(*g->find_by_label(l));
    return initial_value(path_policy(pstar, p).value, nu);
  };
  r.path_b = path_value({"A", "B", "T"});
  r.path_c = path_value({"A", "C", "T"});
  r.path_de = path_value({"A", "D", "E", "T"});
  const auto br_star = best_response(pstar);

  // Dirichlet row: alpha = M p with p_B < p_C, so every concentrated draw
  // sends the attacker through B.
  DirichletParams params;
  params.samples = options.samples;
  params.seed = options.seed;
  for (auto v : spot) {
    double p = 0.25;
    if (g->label(v) == "B") p -= options.offset;
    if (g->label(v) == "C") p += options.offset;
    params.alpha.push_back(options.concentration * p);
  }
  const auto dir = solve_dirichlet(base, 1, params, nu);
  for (const auto& row : dir.table) r.dirichlet_row.push_back(row.value);

  long double s_sum = 0.0L, d_sum = 0.0L;
  for (double v : r.stackelberg_row) s_sum += v;
  for (double v : r.dirichlet_row) d_sum += v;
  r.stackelberg_avg = static_cast<double>(s_sum / r.stackelberg_row.size());
  r.dirichlet_avg = static_cast<double>(d_sum / r.dirichlet_row.size());
  r.improvement = r.stackelberg_avg > 0.0 ? 1.0 - r.dirichlet_avg / r.stackelberg_avg : 0.0;

  const double st_expected[] = {0.80, 0.80, 0.80, 0.80};
  const double dir_expected[] = {0.00, 0.80, 0.80, 0.80};
  for (std::size_t i = 0; i < spot.size(); ++i)
    check("stackelberg[" + name_of(spot[i]) + "]", r.stackelberg_row[i], st_expected[i], kExact);
  check("stackelberg.avg", r.stackelberg_avg, 0.80, kExact);
  check("belief_pstar.path_B", r.path_b, 0.60, kExact);
  check("belief_pstar.path_C", r.path_c, 0.60, kExact);
  check("belief_pstar.path_DE", r.path_de, 0.196875, kExact);
  check("belief_pstar.path_DE~0.20", r.path_de, 0.20, kApprox);
  check("belief_pstar.best_response", initial_value(br_star.value, nu), 0.60, kExact);
  check("belief_pstar.choice_is_B",
        br_star.next[base.at(a, 0)] == *g->find_by_label("B") ? 1.0 : 0.0, 1.0, 0.0);
  for (std::size_t i = 0; i < spot.size(); ++i)
    check("dirichlet[" + name_of(spot[i]) + "]", r.dirichlet_row[i], dir_expected[i], kExact);
  check("dirichlet.avg", r.dirichlet_avg, 0.60, kExact);
  check("improvement", r.improvement, 0.25, kExact);
  check("dirichlet.choice_is_B",
        dir.deployment.nodes == std::vector<NodeId>{*g->find_by_label("B")} ? 1.0 : 0.0, 1.0,
        0.0);
  check("dirichlet.value", dir.value, 0.0, kExact);

  r.ok = true;
  for (const auto& c : r.checks) r.ok = r.ok && c.ok;
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();

  std::ostringstream out;
  out << "six-node demo: " << g->node_count() << " nodes, " << g->edge_count()
      << " edges, c_max=" << base.horizon() << ", K=" << options.samples
      << ", M=" << options.concentration << ", seed=" << options.seed << "\n";
  out << "defender protects    ";
  for (auto v : spot) out << "    " << name_of(v) << " ";
  out << "|  AVG\n";
  out << "Stackelberg          ";
  for (double v : r.stackelberg_row) out << " " << fixed(v, 2) << " ";
  out << "| " << fixed(r.stackelberg_avg, 2) << "\n";
  out << "Dirichlet x'         ";
  for (double v : r.dirichlet_row) out << " " << fixed(v, 2) << " ";
  out << "| " << fixed(r.dirichlet_avg, 2) << "\n";
  out << "belief p*: path B " << fixed(r.path_b, 2) << ", path C " << fixed(r.path_c, 2)
      << ", path D-E " << fixed(r.path_de, 6) << " (~" << fixed(r.path_de, 2) << ")\n";
  out << "Stackelberg avg " << fixed(r.stackelberg_avg, 2) << ", Dirichlet avg "
      << fixed(r.dirichlet_avg, 2) << ", improvement "
      << fixed(100.0 * r.improvement, 0) << "%\n";
  for (const auto& c : r.checks) {
    out << (c.ok ? "  ok   " : "  FAIL ") << c.name << " = " << fixed(c.value, 9)
        << " (expected " << fixed(c.expected, 9) << " +/- " << c.tolerance << ")\n";
  }
  r.text = out.str();
  return r;
}

}  // namespace ctr
