#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctr/graph.hpp"
#include "ctr/mdp.hpp"
#include "ctr/step_distribution.hpp"

namespace ctr {

// The bundled six-node instance: A -> {B, C, D}, B -> T, C -> T, D -> E,
// E -> T; F = {T}; V_spot = {B, C, D, E}; entry A.
const char* demo_graph_document();
AttackGraph demo_graph();
// S = [1, 1, 0.8, 0.35], tail 0: short routes succeed w.p. 0.8, the
// three-edge route w.p. 0.35.
StepDistribution demo_distribution();

struct DemoOptions {
  std::size_t samples = 500;     // K
  double concentration = 1e4;    // M in alpha = M p
  double offset = 0.05;          // p = (1/4 - offset, 1/4 + offset, 1/4, 1/4)
  std::uint64_t seed = 7;
};

struct DemoCheck {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

struct DemoReport {
  std::vector<double> stackelberg_row;  // per single-node deployment B..E
  std::vector<double> dirichlet_row;
  double stackelberg_avg = 0.0;
  double dirichlet_avg = 0.0;
  double improvement = 0.0;
  double path_b = 0.0, path_c = 0.0, path_de = 0.0;  // under p* = 1/4
  std::vector<DemoCheck> checks;
  bool ok = false;
  double wall_ms = 0.0;
  std::string text;  // human-readable report
};

DemoReport run_demo(const DemoOptions& options = {});

}  // namespace ctr
