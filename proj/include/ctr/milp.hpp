#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ctr/mdp.hpp"

namespace ctr {

struct LinearTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct MilpVariable {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  bool binary = false;
};

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct MilpRow {
  std::string name;
  std::vector<LinearTerm> terms;
  RowSense sense = RowSense::GreaterEqual;
  double rhs = 0.0;
};

// A linear model in the LP-file dialect's shape: minimised objective,
// named rows, per-variable bounds, binary section. Metadata travels as
// "\ key: value" comment lines.
struct MilpModel {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<LinearTerm> objective;
  std::vector<MilpVariable> variables;
  std::vector<MilpRow> rows;

  std::size_t add_variable(std::string name, double lower, double upper,
                           bool binary = false);
  std::size_t find_variable(std::string_view name) const;  // throws Schema
  std::size_t binary_count() const;
  std::string meta(std::string_view key) const;  // "" when absent

 private:
  std::map<std::string, std::size_t, std::less<>> index_;
  friend MilpModel read_lp(std::string_view text);
};

std::string write_lp(const MilpModel& model);
// Parses the dialect write_lp emits. Throws Schema on malformed input.
MilpModel read_lp(std::string_view text);

struct MilpCensus {
  std::size_t values = 0;       // v variables
  std::size_t auxiliaries = 0;  // W or w variables
  std::size_t binaries = 0;
  std::size_t variables = 0;
  std::size_t bellman_rows = 0;
  std::size_t envelope_rows = 0;
  std::size_t boundary_rows = 0;
  std::size_t budget_rows = 0;
  std::size_t rows = 0;
};

// Counts taken from the model itself, by variable and row-name prefix
// (v_, w_, x_; bell_, env_, bnd_, budget).
MilpCensus census(const MilpModel& model);

struct MilpExportOptions {
  // Emit the Dirichlet lower envelope exactly as w >= v' instead of the
  // amended w >= v' - x(v). The literal row cuts off w = 0 when x(v) = 1.
  bool literal_lower_envelope = false;
  std::uint64_t seed = 0;  // recorded in metadata only
};

// min sum nu_s v_s s.t. v_s >= sum P(s'|s,a) v_s' for every action of every
// non-terminal state, v = 0 on Sink and Expired, v = 1 on target states.
MilpModel export_attacker_lp(const AttackMdp& m, const InitialDistribution& nu);

// Defender's Stackelberg MILP over the base kernel of m with big-M
// envelopes (M = 1, m = -1). Auxiliaries W_{s,s'} exist for states on spot
// nodes only; elsewhere x(v) = 0 and the Bellman row uses v_s' directly.
MilpModel export_stackelberg_milp(const AttackMdp& m, std::size_t h,
                                  const InitialDistribution& nu);

// Defender's MILP against K fixed sampled-belief policies.
MilpModel export_dirichlet_milp(const AttackMdp& m, std::size_t h,
                                std::span<const Policy> policies,
                                const InitialDistribution& nu,
                                const MilpExportOptions& options = {});

// Variable name for node v's protection binary: the label when every label
// is a unique identifier, the external id otherwise.
std::string binary_name(const AttackGraph& g, NodeId v);

nlohmann::json milp_metadata_json(const MilpModel& model);

}  // namespace ctr
