#include "ctr/milp.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "ctr/error.hpp"

namespace ctr {

std::size_t MilpModel::add_variable(std::string name, double lower, double upper,
                                    bool binary) {
  if (index_.count(name) != 0) {
    throw Error(ErrorCode::Schema, "variable '" + name + "' declared twice");
  }
  const std::size_t id = variables.size();
  index_.emplace(name, id);
  variables.push_back({std::move(name), lower, upper, binary});
  return id;
}

std::size_t MilpModel::find_variable(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw Error(ErrorCode::Schema, "undeclared variable '" + std::string(name) + "'");
  }
  return it->second;
}

std::size_t MilpModel::binary_count() const {
  std::size_t n = 0;
  for (const auto& v : variables) n += v.binary ? 1 : 0;
  return n;
}

std::string MilpModel::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return {};
}

// ---------------------------------------------------------------------------
// Writer

namespace {

constexpr std::size_t kWrapColumn = 100;

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class LineWrapper {
 public:
  explicit LineWrapper(std::ostringstream& out) : out_(out) {}
  void start(const std::string& head) {
    out_ << ' ' << head;
    column_ = head.size() + 1;
  }
  void piece(const std::string& text) {
    if (column_ + text.size() + 1 > kWrapColumn) {
      out_ << "\n  ";
      column_ = 2;
    } else {
      out_ << ' ';
      ++column_;
    }
    out_ << text;
    column_ += text.size();
  }
  void end() { out_ << '\n'; }

 private:
  std::ostringstream& out_;
  std::size_t column_ = 0;
};

void write_terms(LineWrapper& line, const MilpModel& model,
                 const std::vector<LinearTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const double mag = t.coef < 0.0 ? -t.coef : t.coef;
    std::string piece;
    if (t.coef < 0.0) {
      piece = "- ";
    } else if (!first) {
      piece = "+ ";
    }
    if (mag != 1.0) piece += format_number(mag) + " ";
    piece += model.variables[t.var].name;
    line.piece(piece);
    first = false;
  }
  if (terms.empty()) line.piece("0");
}

const char* sense_token(RowSense s) {
  switch (s) {
    case RowSense::LessEqual: return "<=";
    case RowSense::GreaterEqual: return ">=";
    case RowSense::Equal: return "=";
  }
  return "=";
}

}  // namespace

std::string write_lp(const MilpModel& model) {
  std::ostringstream out;
  for (const auto& [k, v] : model.metadata) out << "\\ " << k << ": " << v << '\n';
  LineWrapper line(out);
  out << "Minimize\n";
  line.start("obj:");
  write_terms(line, model, model.objective);
  line.end();
  out << "Subject To\n";
  for (const auto& row : model.rows) {
    line.start(row.name + ":");
    write_terms(line, model, row.terms);
    line.piece(std::string(sense_token(row.sense)) + " " + format_number(row.rhs));
    line.end();
  }
  out << "Bounds\n";
  for (const auto& v : model.variables) {
    out << ' ' << format_number(v.lower) << " <= " << v.name << " <= "
        << format_number(v.upper) << '\n';
  }
  if (model.binary_count() > 0) {
    out << "Binaries\n";
    bool open = false;
    for (const auto& v : model.variables) {
      if (!v.binary) continue;
      if (!open) {
        line.start(v.name);
        open = true;
      } else {
        line.piece(v.name);
      }
    }
    line.end();
  }
  out << "End\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Reader

namespace {

enum class Section { Header, Objective, Rows, Bounds, Binaries, End };

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_number(const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw Error(ErrorCode::Schema, "expected a number, found '" + tok + "'");
  }
  return x;
}

bool looks_numeric(const std::string& tok) {
  const char c = tok.front();
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
}

bool is_sense(const std::string& tok) { return tok == "<=" || tok == ">=" || tok == "="; }

// Parses "[+|-] [coef] name" sequences from toks[i..] until a sense token
// or the end.
std::vector<LinearTerm> parse_terms(const MilpModel& model,
                                    const std::vector<std::string>& toks,
                                    std::size_t& i) {
  std::vector<LinearTerm> terms;
  while (i < toks.size() && !is_sense(toks[i])) {
    double sign = 1.0;
    if (toks[i] == "+" || toks[i] == "-") {
      sign = toks[i] == "-" ? -1.0 : 1.0;
      if (++i >= toks.size()) throw Error(ErrorCode::Schema, "dangling sign");
    }
    double coef = 1.0;
    if (looks_numeric(toks[i])) {
      coef = parse_number(toks[i]);
      ++i;
      if (i >= toks.size() || is_sense(toks[i])) {
        // A bare "0" is the writer's placeholder for an empty expression.
        if (coef == 0.0 && terms.empty()) break;
        throw Error(ErrorCode::Schema, "coefficient without variable");
      }
    }
    terms.push_back({model.find_variable(toks[i]), sign * coef});
    ++i;
  }
  return terms;
}

}  // namespace

MilpModel read_lp(std::string_view text) {
  MilpModel model;
  std::vector<std::string> objective_toks, row_toks, bound_lines, binary_toks;
  Section section = Section::Header;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '\\') {
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(": ");
      if (section == Section::Header && colon != std::string_view::npos) {
        model.metadata.emplace_back(std::string(body.substr(0, colon)),
                                    std::string(body.substr(colon + 2)));
      }
      continue;
    }
    if (line == "Minimize") { section = Section::Objective; continue; }
    if (line == "Subject To") { section = Section::Rows; continue; }
    if (line == "Bounds") { section = Section::Bounds; continue; }
    if (line == "Binaries") { section = Section::Binaries; continue; }
    if (line == "End") { section = Section::End; continue; }
    auto toks = split_tokens(line);
    switch (section) {
      case Section::Objective: objective_toks.insert(objective_toks.end(), toks.begin(), toks.end()); break;
      case Section::Rows: row_toks.insert(row_toks.end(), toks.begin(), toks.end()); break;
      case Section::Bounds: bound_lines.emplace_back(line); break;
      case Section::Binaries: binary_toks.insert(binary_toks.end(), toks.begin(), toks.end()); break;
      default:
        throw Error(ErrorCode::Schema,
                    "line " + std::to_string(line_no) + ": content outside any section");
    }
    if (pos > text.size()) break;
  }
  if (section != Section::End) throw Error(ErrorCode::Schema, "missing End");

  for (const auto& b : bound_lines) {
    const auto t = split_tokens(b);
    if (t.size() != 5 || t[1] != "<=" || t[3] != "<=") {
      throw Error(ErrorCode::Schema, "malformed bound '" + b + "'");
    }
    model.add_variable(t[2], parse_number(t[0]), parse_number(t[4]));
  }
  for (const auto& name : binary_toks) model.variables[model.find_variable(name)].binary = true;

  std::size_t i = 0;
  if (objective_toks.empty() || objective_toks[0] != "obj:") {
    throw Error(ErrorCode::Schema, "objective must be named 'obj'");
  }
  i = 1;
  model.objective = parse_terms(model, objective_toks, i);
  if (i != objective_toks.size()) throw Error(ErrorCode::Schema, "trailing objective tokens");

  i = 0;
  while (i < row_toks.size()) {
    const std::string& head = row_toks[i];
    if (head.size() < 2 || head.back() != ':') {
      throw Error(ErrorCode::Schema, "expected a row name, found '" + head + "'");
    }
    MilpRow row;
    row.name = head.substr(0, head.size() - 1);
    ++i;
    row.terms = parse_terms(model, row_toks, i);
    if (i + 1 >= row_toks.size()) throw Error(ErrorCode::Schema, "row '" + row.name + "' lacks a sense");
    const std::string& sense = row_toks[i];
    row.sense = sense == "<=" ? RowSense::LessEqual
                : sense == ">=" ? RowSense::GreaterEqual
                                : RowSense::Equal;
    row.rhs = parse_number(row_toks[i + 1]);
    i += 2;
    model.rows.push_back(std::move(row));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Census

MilpCensus census(const MilpModel& model) {
  MilpCensus c;
  for (const auto& v : model.variables) {
    if (v.name.rfind("v_", 0) == 0) ++c.values;
    if (v.name.rfind("w_", 0) == 0) ++c.auxiliaries;
    if (v.binary) ++c.binaries;
  }
  c.variables = model.variables.size();
  for (const auto& r : model.rows) {
    if (r.name.rfind("bell_", 0) == 0) ++c.bellman_rows;
    else if (r.name.rfind("env_", 0) == 0) ++c.envelope_rows;
    else if (r.name.rfind("bnd_", 0) == 0) ++c.boundary_rows;
    else if (r.name == "budget") ++c.budget_rows;
  }
  c.rows = model.rows.size();
  return c;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

bool labels_usable(const AttackGraph& g) {
  std::set<std::string> seen;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& l = g.label(v);
    if (!is_identifier(l) || !seen.insert(l).second) return false;
  }
  return true;
}

std::string vname(StateIndex s, std::size_t k) {
  return "v_s" + std::to_string(s) + "_k" + std::to_string(k);
}

std::string wname(StateIndex s, StateIndex sp, std::size_t k) {
  return "w_s" + std::to_string(s) + "_sp" + std::to_string(sp) + "_k" + std::to_string(k);
}

void check_budget(const AttackGraph& g, std::size_t h) {
  if (h > g.spot().size()) {
    throw Error(ErrorCode::BudgetExceedsSpot,
                "budget " + std::to_string(h) + " exceeds |V_spot| = " +
                    std::to_string(g.spot().size()));
  }
}

std::string hex64(std::uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void add_metadata(MilpModel& model, const AttackMdp& m, std::string_view kind,
                  std::size_t h, std::size_t k, std::uint64_t seed) {
  model.metadata = {
      {"model", std::string(kind)},
      {"graph-hash", hex64(graph_hash(m.graph()))},
      {"h", std::to_string(h)},
      {"K", std::to_string(k)},
      {"seed", std::to_string(seed)},
      {"states", std::to_string(m.state_count())},
      {"horizon", std::to_string(m.horizon())},
  };
}

// v variables for K copies of the state space, in layout order.
std::vector<std::vector<std::size_t>> add_value_variables(MilpModel& model,
                                                          const AttackMdp& m,
                                                          std::size_t k_count) {
  std::vector<std::vector<std::size_t>> v(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    v[k].resize(m.state_count());
    for (StateIndex s = 0; s < m.state_count(); ++s)
      v[k][s] = model.add_variable(vname(s, k), 0.0, 1.0);
  }
  return v;
}

void add_objective(MilpModel& model, const InitialDistribution& nu,
                   const std::vector<std::vector<std::size_t>>& v) {
  const double scale = 1.0 / static_cast<double>(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    for (const auto& [s, w] : nu.weights) {
      const double coef = v.size() == 1 ? w : w * scale;
      if (coef != 0.0) model.objective.push_back({v[k][s], coef});
    }
  }
}

void add_boundary_rows(MilpModel& model, const AttackMdp& m,
                       const std::vector<std::vector<std::size_t>>& v) {
  const auto& g = m.graph();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string ks = "_k" + std::to_string(k);
    model.rows.push_back({"bnd_sink" + ks, {{v[k][m.sink()], 1.0}}, RowSense::Equal, 0.0});
    model.rows.push_back({"bnd_expired" + ks, {{v[k][m.expired()], 1.0}}, RowSense::Equal, 0.0});
    for (auto t : g.targets()) {
      for (std::size_t c = 0; c <= m.horizon(); ++c) {
        const StateIndex s = m.at(t, c);
        model.rows.push_back({"bnd_s" + std::to_string(s) + ks, {{v[k][s], 1.0}},
                              RowSense::Equal, 1.0});
      }
    }
  }
}

std::vector<std::size_t> add_binaries(MilpModel& model, const AttackGraph& g) {
  std::vector<std::size_t> x(g.node_count(), SIZE_MAX);
  for (auto u : g.spot()) x[u] = model.add_variable(binary_name(g, u), 0.0, 1.0, true);
  return x;
}

void add_budget_row(MilpModel& model, const AttackGraph& g,
                    const std::vector<std::size_t>& x, std::size_t h) {
  MilpRow row{"budget", {}, RowSense::LessEqual, static_cast<double>(h)};
  for (auto u : g.spot()) row.terms.push_back({x[u], 1.0});
  model.rows.push_back(std::move(row));
}

// Successor states that can carry value out of s = At(v, c) in the base
// kernel: At(u, c+1) for the given successors (when c < horizon), then
// Expired. Sink is omitted because its value is pinned to 0.
std::vector<StateIndex> value_successors(const AttackMdp& m, StateIndex s,
                                         std::span<const NodeId> succ) {
  const auto st = m.state(s);
  std::vector<StateIndex> out;
  if (st.steps < m.horizon())
    for (auto u : succ) out.push_back(m.at(u, st.steps + 1));
  out.push_back(m.expired());
  return out;
}

}  // namespace

std::string binary_name(const AttackGraph& g, NodeId v) {
  if (labels_usable(g)) return "x_n" + g.label(v);
  const auto id = g.external_id(v);
  return id < 0 ? "x_nm" + std::to_string(-id) : "x_n" + std::to_string(id);
}

MilpModel export_attacker_lp(const AttackMdp& m, const InitialDistribution& nu) {
  MilpModel model;
  add_metadata(model, m, "attacker", 0, 1, 0);
  model.metadata.insert(model.metadata.begin() + 1,
                        {"kernel", m.mode() == AttackMdp::Mode::Base         ? "base"
                                   : m.mode() == AttackMdp::Mode::Deployment ? "deployment"
                                                                             : "belief"});
  const auto v = add_value_variables(model, m, 1);
  add_objective(model, nu, v);
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    for (auto a : m.actions(s)) {
      MilpRow row{"bell_s" + std::to_string(s) + "_a" + std::to_string(a),
                  {{v[0][s], 1.0}}, RowSense::GreaterEqual, 0.0};
      for (const auto& t : m.transitions(s, a))
        if (t.probability != 0.0) row.terms.push_back({v[0][t.to], -t.probability});
      model.rows.push_back(std::move(row));
    }
  }
  add_boundary_rows(model, m, v);
  return model;
}

MilpModel export_stackelberg_milp(const AttackMdp& m, std::size_t h,
                                  const InitialDistribution& nu) {
  const auto& g = m.graph();
  check_budget(g, h);
  const AttackMdp base(m.graph_ptr(), m.distribution());
  MilpModel model;
  add_metadata(model, base, "stackelberg", h, 1, 0);
  const auto v = add_value_variables(model, base, 1);

  // W_{s,s'} for every state on a spot node that has actions.
  std::vector<std::vector<std::pair<StateIndex, std::size_t>>> w(base.state_count());
  for (StateIndex s = 0; s < base.state_count(); ++s) {
    const auto acts = base.actions(s);
    if (acts.empty() || !g.is_spot(base.state(s).node)) continue;
    for (auto sp : value_successors(base, s, acts))
      w[s].emplace_back(sp, model.add_variable(wname(s, sp, 0), 0.0, 1.0));
  }
  const auto x = add_binaries(model, g);
  add_objective(model, nu, v);

  auto lookup = [&](StateIndex s, StateIndex sp) {
    for (const auto& [to, id] : w[s])
      if (to == sp) return id;
    return SIZE_MAX;
  };

  for (StateIndex s = 0; s < base.state_count(); ++s) {
    const bool spot = !w[s].empty();
    for (auto a : base.actions(s)) {
      MilpRow row{"bell_s" + std::to_string(s) + "_a" + std::to_string(a),
                  {{v[0][s], 1.0}}, RowSense::GreaterEqual, 0.0};
      for (const auto& t : base.transitions(s, a)) {
        if (t.probability == 0.0 || t.to == base.sink()) continue;
        const std::size_t var = spot ? lookup(s, t.to) : v[0][t.to];
        row.terms.push_back({var, -t.probability});
      }
      model.rows.push_back(std::move(row));
    }
  }
  for (StateIndex s = 0; s < base.state_count(); ++s) {
    if (w[s].empty()) continue;
    const std::size_t xv = x[base.state(s).node];
    for (const auto& [sp, id] : w[s]) {
      const std::string tag = "_s" + std::to_string(s) + "_sp" + std::to_string(sp);
      // W <= M(1 - x), W >= m(1 - x), W - v' <= M x, W - v' >= m x.
      model.rows.push_back({"env_a" + tag, {{id, 1.0}, {xv, 1.0}}, RowSense::LessEqual, 1.0});
      model.rows.push_back({"env_b" + tag, {{id, 1.0}, {xv, -1.0}}, RowSense::GreaterEqual, -1.0});
      model.rows.push_back({"env_c" + tag, {{id, 1.0}, {v[0][sp], -1.0}, {xv, -1.0}},
                            RowSense::LessEqual, 0.0});
      model.rows.push_back({"env_d" + tag, {{id, 1.0}, {v[0][sp], -1.0}, {xv, 1.0}},
                            RowSense::GreaterEqual, 0.0});
    }
  }
  add_boundary_rows(model, base, v);
  add_budget_row(model, g, x, h);
  return model;
}

MilpModel export_dirichlet_milp(const AttackMdp& m, std::size_t h,
                                std::span<const Policy> policies,
                                const InitialDistribution& nu,
                                const MilpExportOptions& options) {
  const auto& g = m.graph();
  check_budget(g, h);
  if (policies.empty()) throw Error(ErrorCode::PolicyIncomplete, "no sampled policies");
  const AttackMdp base(m.graph_ptr(), m.distribution());
  const std::size_t K = policies.size();
  for (std::size_t k = 0; k < K; ++k) {
    const auto& pi = policies[k];
    if (pi.next.size() != base.state_count()) {
      throw Error(ErrorCode::PolicyIncomplete,
                  "policy " + std::to_string(k) + " does not match the state layout");
    }
    for (StateIndex s = 0; s < base.state_count(); ++s) {
      if (base.actions(s).empty()) continue;
      const NodeId a = pi.next[s];
      if (a == kNoAction || !g.has_edge(base.state(s).node, a)) {
        throw Error(ErrorCode::PolicyIncomplete,
                    "policy " + std::to_string(k) + " has no legal action at state " +
                        std::to_string(s));
      }
    }
  }

  MilpModel model;
  add_metadata(model, base, "dirichlet", h, K, options.seed);
  if (options.literal_lower_envelope) model.metadata.emplace_back("lower-envelope", "literal");
  const auto v = add_value_variables(model, base, K);

  std::vector<std::vector<std::vector<std::pair<StateIndex, std::size_t>>>> w(K);
  for (std::size_t k = 0; k < K; ++k) {
    w[k].resize(base.state_count());
    for (StateIndex s = 0; s < base.state_count(); ++s) {
      if (base.actions(s).empty() || !g.is_spot(base.state(s).node)) continue;
      const NodeId a = policies[k].next[s];
      for (auto sp : value_successors(base, s, std::span<const NodeId>(&a, 1)))
        w[k][s].emplace_back(sp, model.add_variable(wname(s, sp, k), 0.0, 1.0));
    }
  }
  const auto x = add_binaries(model, g);
  add_objective(model, nu, v);

  for (std::size_t k = 0; k < K; ++k) {
    for (StateIndex s = 0; s < base.state_count(); ++s) {
      if (base.actions(s).empty()) continue;
      const NodeId a = policies[k].next[s];
      MilpRow row{"bell_s" + std::to_string(s) + "_k" + std::to_string(k),
                  {{v[k][s], 1.0}}, RowSense::GreaterEqual, 0.0};
      for (const auto& t : base.transitions(s, a)) {
        if (t.probability == 0.0 || t.to == base.sink()) continue;
        std::size_t var = v[k][t.to];
        for (const auto& [sp, id] : w[k][s])
          if (sp == t.to) var = id;
        row.terms.push_back({var, -t.probability});
      }
      model.rows.push_back(std::move(row));
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (StateIndex s = 0; s < base.state_count(); ++s) {
      if (w[k][s].empty()) continue;
      const std::size_t xv = x[base.state(s).node];
      for (const auto& [sp, id] : w[k][s]) {
        const std::string tag = "_s" + std::to_string(s) + "_sp" + std::to_string(sp) +
                                "_k" + std::to_string(k);
        const std::size_t vp = v[k][sp];
        model.rows.push_back({"env_c" + tag, {{id, 1.0}, {vp, -1.0}, {xv, -1.0}},
                              RowSense::LessEqual, 0.0});
        model.rows.push_back({"env_d" + tag, {{id, 1.0}, {xv, 1.0}}, RowSense::LessEqual, 1.0});
        if (options.literal_lower_envelope) {
          model.rows.push_back({"env_e" + tag, {{id, 1.0}, {vp, -1.0}},
                                RowSense::GreaterEqual, 0.0});
        } else {
          model.rows.push_back({"env_e" + tag, {{id, 1.0}, {vp, -1.0}, {xv, 1.0}},
                                RowSense::GreaterEqual, 0.0});
        }
        model.rows.push_back({"env_f" + tag, {{id, 1.0}}, RowSense::GreaterEqual, 0.0});
      }
    }
  }
  add_boundary_rows(model, base, v);
  add_budget_row(model, g, x, h);
  return model;
}

nlohmann::json milp_metadata_json(const MilpModel& model) {
  nlohmann::json j;
  j["schema"] = 1;
  for (const auto& [k, v] : model.metadata) j[k] = v;
  const auto c = census(model);
  j["census"] = {{"variables", c.variables},
                 {"values", c.values},
                 {"auxiliaries", c.auxiliaries},
                 {"binaries", c.binaries},
                 {"rows", c.rows},
                 {"bellman_rows", c.bellman_rows},
                 {"envelope_rows", c.envelope_rows},
                 {"boundary_rows", c.boundary_rows},
                 {"budget_rows", c.budget_rows}};
  return j;
}

}  // namespace ctr
