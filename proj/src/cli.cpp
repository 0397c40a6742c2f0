#include "orc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "orc/error.hpp"
#include "orc/graph.hpp"
#include "orc/numeric.hpp"
#include "orc/parallel.hpp"
#include "orc/qorc.hpp"
#include "orc/transport.hpp"

namespace orc::cli {

namespace {

using json = nlohmann::ordered_json;
using transport::Method;

constexpr const char* kVersion = "orc 0.1.0";

struct RunConfig {
  std::string command;
  std::string input;
  std::string format = "edge_list";
  std::string method;
  std::string against;
  std::vector<std::string> edges;
  bool all_edges = false;
  std::string numeric = "rational";
  double margin = 0.05;
  double eps = 1e-10;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;  // 0 = exact overlaps
  bool include_endpoints = false;
  std::size_t cap = 1'000'000;
  std::string out;
  std::string out_format = "json";
  double tol = 1e-8;
  bool tol_given = false;
  std::string trace;
  bool timing = false;
  std::size_t threads = 0;
  std::string pi_route = "direct";
  std::string spectral = "exact";
  double corrupt_alpha = 1.0;
  std::string fixture;
};

// Either a graph or an explicit local cost matrix.
struct Instance {
  std::optional<graph::Graph> g;
  Matrix<Rational> cost;
  Rational dxy{0};
};

struct EdgeFailure {
  std::optional<std::pair<graph::Vertex, graph::Vertex>> edge;
  ErrorKind kind;
  std::string message;
};

bool is_config_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidWeight:
    case ErrorKind::DuplicateEdge:
    case ErrorKind::SelfLoop:
    case ErrorKind::VertexOutOfRange:
    case ErrorKind::NotAnEdge:
    case ErrorKind::EmptyNeighborhood:
    case ErrorKind::NotATree:
    case ErrorKind::NonSquare:
    case ErrorKind::NotSquare:
    case ErrorKind::TooLarge:
    case ErrorKind::MethodMismatch:
    case ErrorKind::DimensionCap:
    case ErrorKind::UnknownFixture:
    case ErrorKind::ConfigError:
      return true;
    default:
      return false;
  }
}

std::string edge_label(const std::optional<std::pair<graph::Vertex, graph::Vertex>>& e) {
  if (!e) return "cost matrix";
  return "edge (" + std::to_string(e->first) + "," + std::to_string(e->second) + ")";
}

json num(const Rational& r) { return r.get_str(); }
json num(double d) { return d; }

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return to_string(v.get<double>());
  return v.dump();
}

// ---------------------------------------------------------------------------

Rational rational_from_json(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return parse_rational(v.dump());
  raise(ErrorKind::ParseError, "expected a number, got " + v.dump());
}

Instance load_instance(const RunConfig& cfg) {
  if (cfg.input.empty()) raise(ErrorKind::ConfigError, "--input is required");
  std::ifstream in(cfg.input);
  if (!in) raise(ErrorKind::ConfigError, "cannot open '" + cfg.input + "'");
  Instance inst;
  if (cfg.format == "cost_matrix") {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      raise(ErrorKind::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("cost") || !doc.contains("dxy")) {
      raise(ErrorKind::ParseError, "cost-matrix input needs \"cost\" and \"dxy\"");
    }
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : doc.at("cost")) {
      if (!row.is_array()) raise(ErrorKind::ParseError, "cost rows must be arrays");
      std::vector<Rational> r;
      for (const auto& v : row) {
        r.push_back(rational_from_json(v));
        if (r.back() < 0) raise(ErrorKind::InvalidWeight, "negative cost");
      }
      if (!rows.empty() && r.size() != rows.front().size()) {
        raise(ErrorKind::ParseError, "ragged cost matrix");
      }
      rows.push_back(std::move(r));
    }
    if (rows.empty() || rows.front().empty()) raise(ErrorKind::EmptyNeighborhood, "empty cost matrix");
    inst.cost = Matrix<Rational>::from_rows(rows);
    inst.dxy = rational_from_json(doc.at("dxy"));
    if (!(inst.dxy > 0)) raise(ErrorKind::InvalidWeight, "dxy must be positive");
    return inst;
  }
  graph::GraphFormat fmt;
  if (cfg.format == "edge_list") {
    fmt = graph::GraphFormat::EdgeList;
  } else if (cfg.format == "json") {
    fmt = graph::GraphFormat::Json;
  } else {
    raise(ErrorKind::ConfigError, "unknown format '" + cfg.format + "'");
  }
  inst.g = graph::load_graph(in, fmt);
  return inst;
}

std::vector<std::pair<graph::Vertex, graph::Vertex>> select_edges(const RunConfig& cfg,
                                                                  const graph::Graph& g) {
  if (cfg.all_edges && !cfg.edges.empty()) {
    raise(ErrorKind::ConfigError, "use either --edge or --all-edges");
  }
  if (cfg.all_edges) return graph::internal_edges(g);
  if (cfg.edges.empty()) raise(ErrorKind::ConfigError, "no edge selected (--edge u,v or --all-edges)");
  std::vector<std::pair<graph::Vertex, graph::Vertex>> out;
  for (const std::string& spec : cfg.edges) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) raise(ErrorKind::ConfigError, "bad edge '" + spec + "'");
    try {
      std::size_t used = 0;
      const std::string a = spec.substr(0, comma), b = spec.substr(comma + 1);
      const unsigned long u = std::stoul(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      const unsigned long v = std::stoul(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
      out.emplace_back(u, v);
    } catch (const std::logic_error&) {
      raise(ErrorKind::ConfigError, "bad edge '" + spec + "'");
    }
  }
  return out;
}

qorc::QsimConfig qsim_config(const RunConfig& cfg) {
  qorc::QsimConfig q;
  q.margin = cfg.margin;
  q.eps = cfg.eps;
  q.seed = cfg.seed;
  if (cfg.shots > 0) q.shots = cfg.shots;
  q.cap = cfg.cap;
  q.include_endpoints = cfg.include_endpoints;
  q.pi_route = cfg.pi_route == "purified" ? qorc::PiRoute::Purified : qorc::PiRoute::Direct;
  q.spectral.mode =
      cfg.spectral == "chebyshev" ? qsim::SpectralMode::Chebyshev : qsim::SpectralMode::Exact;
  q.debug_alpha_q_factor = cfg.corrupt_alpha;
  return q;
}

bool is_qsim(Method m) { return m == Method::QsimTree || m == Method::QsimPq; }

// Rejects method/instance combinations before any solver runs.
void validate(const RunConfig& cfg, const Instance& inst, Method m,
              const std::vector<std::pair<graph::Vertex, graph::Vertex>>& edges) {
  if (cfg.margin < 0 || !(cfg.eps > 0)) raise(ErrorKind::ConfigError, "margin >= 0 and eps > 0 required");
  if (!inst.g) {
    if (cfg.include_endpoints) raise(ErrorKind::ConfigError, "--include-endpoints needs a graph input");
    if (m == Method::Tree || m == Method::QsimTree) {
      raise(ErrorKind::MethodMismatch, std::string(transport::method_name(m)) + " needs a graph input");
    }
    const std::size_t p = inst.cost.rows(), q = inst.cost.cols();
    if (m == Method::QsimPq && p != q) {
      raise(ErrorKind::NotSquare, "p = " + std::to_string(p) + ", q = " + std::to_string(q));
    }
    if (m == Method::Assignment && p != q) raise(ErrorKind::MethodMismatch, "assignment needs p = q");
    if (m == Method::BruteForce && (p == q ? p > 9 : p + q > 9)) {
      raise(ErrorKind::TooLarge, "instance too large for brute force");
    }
    return;
  }
  const graph::Graph& g = *inst.g;
  if ((m == Method::Tree || m == Method::QsimTree) && !graph::verify_tree(g)) {
    raise(ErrorKind::NotATree, "input graph is not a tree");
  }
  const std::size_t extra = cfg.include_endpoints ? 1 : 0;
  for (auto [x, y] : edges) {
    const std::string where = "edge (" + std::to_string(x) + "," + std::to_string(y) + "): ";
    if (x >= g.vertex_count() || y >= g.vertex_count()) {
      raise(ErrorKind::VertexOutOfRange, where + "vertex out of range");
    }
    if (!g.has_edge(x, y)) raise(ErrorKind::NotAnEdge, where + "not an edge");
    const std::size_t p = g.degree(x) - 1 + extra, q = g.degree(y) - 1 + extra;
    if (p == 0 || q == 0) raise(ErrorKind::EmptyNeighborhood, where + "endpoint is a leaf");
    if (m == Method::QsimPq) {
      if (p != q) {
        raise(ErrorKind::NotSquare, where + "p = " + std::to_string(p) + ", q = " + std::to_string(q));
      }
      std::size_t dim = 1;
      for (std::size_t j = 0; j < p; ++j) {
        if (dim > cfg.cap / p) raise(ErrorKind::DimensionCap, where + "p^p exceeds cap");
        dim *= p;
      }
    }
    if (m == Method::Assignment && p != q) raise(ErrorKind::MethodMismatch, where + "assignment needs p = q");
    if (m == Method::BruteForce && (p == q ? p > 9 : p + q > 9)) {
      raise(ErrorKind::TooLarge, where + "too large for brute force");
    }
  }
}

// ---------------------------------------------------------------------------

struct EdgeOutcome {
  json record;
  double w1 = 0.0;  // as double, for compare
  std::optional<double> std_error;
  std::vector<qorc::AuditRecord> trace;
};

template <typename T>
struct ClassicalContext {
  std::optional<graph::GeodesicMatrix<T>> dg;
};

template <typename T>
EdgeOutcome classical_edge(const Instance& inst, const ClassicalContext<T>& ctx,
                           std::optional<std::pair<graph::Vertex, graph::Vertex>> edge, Method m,
                           bool include_endpoints) {
  graph::LocalNeighborhood<T> nb;
  if (inst.g) {
    nb = graph::neighborhood(*inst.g, *ctx.dg, edge->first, edge->second, include_endpoints);
  } else if constexpr (is_exact_v<T>) {
    nb = graph::neighborhood_from_cost<T>(inst.cost, inst.dxy);
  } else {
    nb = graph::neighborhood_from_cost<T>(inst.cost.template cast<double>(), to_double(inst.dxy));
  }
  const auto r = transport::curvature(nb, m, inst.g ? &*inst.g : nullptr, inst.g ? &*ctx.dg : nullptr);
  EdgeOutcome o;
  o.record["x"] = edge ? json(edge->first) : json(nullptr);
  o.record["y"] = edge ? json(edge->second) : json(nullptr);
  o.record["p"] = nb.p();
  o.record["q"] = nb.q();
  o.record["w1"] = num(r.w1);
  o.record["dxy"] = num(r.dxy);
  o.record["curvature"] = num(r.curvature);
  o.record["method"] = std::string(transport::method_name(m));
  o.w1 = to_double(r.w1);
  return o;
}

json diagnostics(const qorc::QsimResult& r) {
  json d;
  d["alpha"] = r.meta.alpha;
  d["alpha_q"] = r.meta.alpha_q;
  d["kappa"] = r.meta.kappa;
  if (r.std_error) d["std_error"] = *r.std_error;
  if (r.eigen) {
    d["eigen_value"] = r.eigen->value;
    d["iterations"] = r.eigen->iterations;
    d["initial_overlap"] = r.eigen->initial_overlap;
    d["gap_proxy"] = std::isinf(r.eigen->gap_proxy) ? json("inf") : json(r.eigen->gap_proxy);
    d["converged"] = r.eigen->converged;
    d["kernel_hit"] = r.eigen->kernel_hit;
  }
  return d;
}

struct QsimContext {
  std::optional<graph::GeodesicMatrix<double>> dg;
  std::optional<qorc::DistanceEncoding> enc;
};

EdgeOutcome qsim_edge(const Instance& inst, const QsimContext& ctx,
                      std::optional<std::pair<graph::Vertex, graph::Vertex>> edge, Method m,
                      qorc::QsimConfig qcfg) {
  EdgeOutcome o;
  qcfg.trace = &o.trace;
  qorc::QsimResult r;
  if (!inst.g) {
    r = qorc::w1_pq_qsim_local(inst.cost.cast<double>(), to_double(inst.dxy), qcfg);
  } else if (m == Method::QsimTree) {
    r = qorc::w1_tree_qsim(*inst.g, *ctx.dg, edge->first, edge->second, qcfg, &*ctx.enc);
  } else {
    r = qorc::w1_pq_qsim(*inst.g, *ctx.dg, edge->first, edge->second, qcfg, &*ctx.enc);
  }
  o.record["x"] = edge ? json(edge->first) : json(nullptr);
  o.record["y"] = edge ? json(edge->second) : json(nullptr);
  o.record["p"] = r.p;
  o.record["q"] = r.q;
  o.record["w1"] = r.result.w1;
  o.record["dxy"] = r.result.dxy;
  o.record["curvature"] = r.result.curvature;
  o.record["method"] = std::string(transport::method_name(m));
  o.record["diagnostics"] = diagnostics(r);
  o.w1 = r.result.w1;
  o.std_error = r.std_error;
  return o;
}

json config_echo(const RunConfig& cfg) {
  json c;
  c["command"] = cfg.command;
  c["input"] = cfg.input;
  c["format"] = cfg.format;
  c["method"] = cfg.method;
  if (cfg.command == "compare") c["against"] = cfg.against;
  c["numeric"] = cfg.numeric;
  c["all_edges"] = cfg.all_edges;
  c["edges"] = cfg.edges;
  c["margin"] = cfg.margin;
  c["eps"] = cfg.eps;
  c["seed"] = cfg.seed;
  c["shots"] = cfg.shots > 0 ? json(cfg.shots) : json(nullptr);
  c["include_endpoints"] = cfg.include_endpoints;
  c["cap"] = cfg.cap;
  c["pi_route"] = cfg.pi_route;
  c["spectral"] = cfg.spectral;
  if (cfg.command == "compare") c["tol"] = cfg.tol_given ? json(cfg.tol) : json(nullptr);
  if (cfg.corrupt_alpha != 1.0) c["debug_corrupt_alpha"] = cfg.corrupt_alpha;
  return c;
}

void write_trace(const std::string& path, const std::vector<std::optional<std::pair<graph::Vertex, graph::Vertex>>>& edges,
                 const std::vector<EdgeOutcome>& outcomes) {
  std::ofstream t(path);
  if (!t) raise(ErrorKind::ConfigError, "cannot write trace '" + path + "'");
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    for (const auto& r : outcomes[k].trace) {
      json line;
      line["edge"] = edges[k] ? json::array({edges[k]->first, edges[k]->second}) : json(nullptr);
      line["stage"] = r.stage;
      line["dim"] = r.dim;
      line["subnorm"] = r.subnorm;
      line["err"] = r.err;
      line["min_entry"] = r.min_entry;
      line["max_entry"] = r.max_entry;
      line["ledger_dev"] = r.ledger_dev ? json(*r.ledger_dev) : json(nullptr);
      for (const auto& [k2, v] : r.extras) line[k2] = std::isinf(v) ? json("inf") : json(v);
      t << line.dump() << '\n';
    }
  }
}

std::string render(const RunConfig& cfg, const json& report) {
  if (cfg.out_format == "json") return report.dump(2) + "\n";
  std::vector<std::string> cols = {"x", "y", "p", "q", "w1", "dxy", "curvature", "method"};
  if (cfg.command == "compare") {
    cols = {"x", "y", "p", "q", "dxy", "method", "against", "w1_qsim", "w1_classical", "abs_diff", "rel_diff", "pass"};
  }
  std::ostringstream s;
  for (std::size_t c = 0; c < cols.size(); ++c) s << (c ? "," : "") << cols[c];
  s << '\n';
  for (const auto& r : report.at("records")) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      s << (c ? "," : "") << (r.contains(cols[c]) ? csv_cell(r.at(cols[c])) : "");
    }
    s << '\n';
  }
  return s.str();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) raise(ErrorKind::ConfigError, "cannot write '" + cfg.out + "'");
  f << text;
}

// ---------------------------------------------------------------------------

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.method.empty()) raise(ErrorKind::ConfigError, "--method is required");
  const Method m = transport::parse_method(cfg.method);
  const bool compare = cfg.command == "compare";
  Method classical = m;
  if (compare) {
    if (!is_qsim(m)) raise(ErrorKind::ConfigError, "compare needs --method qsim_tree or qsim_pq");
    classical = cfg.against.empty() ? (m == Method::QsimTree ? Method::Tree : Method::Assignment)
                                    : transport::parse_method(cfg.against);
    if (is_qsim(classical)) raise(ErrorKind::ConfigError, "--against must be a classical method");
  }

  const Instance inst = load_instance(cfg);
  std::vector<std::optional<std::pair<graph::Vertex, graph::Vertex>>> edges;
  std::vector<std::pair<graph::Vertex, graph::Vertex>> graph_edges;
  if (inst.g) {
    graph_edges = select_edges(cfg, *inst.g);
    for (auto e : graph_edges) edges.emplace_back(e);
  } else {
    if (!cfg.edges.empty() || cfg.all_edges) {
      raise(ErrorKind::ConfigError, "edge selection does not apply to cost-matrix input");
    }
    edges.emplace_back(std::nullopt);
  }
  validate(cfg, inst, m, graph_edges);
  if (compare) validate(cfg, inst, classical, graph_edges);
  const bool exact = cfg.numeric == "rational";

  ClassicalContext<Rational> cr;
  ClassicalContext<double> cd;
  QsimContext qc;
  const graph::ApspOptions apsp{graph::ApspAlgorithm::Auto, cfg.threads};
  const qorc::QsimConfig qcfg = qsim_config(cfg);
  const bool need_classical = compare || !is_qsim(m);
  const bool need_qsim = is_qsim(m);

  std::vector<EdgeOutcome> outcomes(edges.size());
  std::vector<std::optional<EdgeFailure>> failures(edges.size());
  try {
    if (inst.g && need_classical) {
      if (exact) {
        cr.dg = graph::all_pairs_geodesic<Rational>(*inst.g, apsp);
      } else {
        cd.dg = graph::all_pairs_geodesic<double>(*inst.g, apsp);
      }
    }
    if (inst.g && need_qsim) {
      qc.dg = graph::all_pairs_geodesic<double>(*inst.g, apsp);
      qc.enc = qorc::build_distance_encoding(*qc.dg, qcfg.margin, qcfg.spectral);
    }
  } catch (const Error& e) {
    failures[0] = EdgeFailure{std::nullopt, e.kind(), e.what()};
  }

  if (!failures[0]) {
    parallel_for(edges.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        try {
          EdgeOutcome o;
          if (!compare) {
            if (is_qsim(m)) {
              o = qsim_edge(inst, qc, edges[k], m, qcfg);
            } else if (exact) {
              o = classical_edge(inst, cr, edges[k], m, cfg.include_endpoints);
            } else {
              o = classical_edge(inst, cd, edges[k], m, cfg.include_endpoints);
            }
          } else {
            o = qsim_edge(inst, qc, edges[k], m, qcfg);
            const EdgeOutcome c = exact ? classical_edge(inst, cr, edges[k], classical, cfg.include_endpoints)
                                        : classical_edge(inst, cd, edges[k], classical, cfg.include_endpoints);
            json rec;
            rec["x"] = o.record["x"];
            rec["y"] = o.record["y"];
            rec["p"] = o.record["p"];
            rec["q"] = o.record["q"];
            rec["dxy"] = c.record["dxy"];
            rec["method"] = o.record["method"];
            rec["against"] = c.record["method"];
            rec["w1_qsim"] = o.w1;
            rec["w1_classical"] = c.record["w1"];
            const double abs_diff = std::fabs(o.w1 - c.w1);
            rec["abs_diff"] = abs_diff;
            rec["rel_diff"] = c.w1 != 0.0 ? abs_diff / std::fabs(c.w1) : abs_diff;
            const double tol = (o.std_error && !cfg.tol_given) ? 5.0 * *o.std_error : cfg.tol;
            rec["tol"] = tol;
            rec["pass"] = abs_diff <= tol;
            rec["diagnostics"] = o.record["diagnostics"];
            o.record = std::move(rec);
          }
          outcomes[k] = std::move(o);
        } catch (const Error& e) {
          failures[k] = EdgeFailure{edges[k], e.kind(), e.what()};
        }
      }
    });
  }

  for (const auto& f : failures) {
    if (!f) continue;
    err << "error: " << edge_label(f->edge) << ": " << f->message << '\n';
    return is_config_error(f->kind) ? 2 : 3;
  }

  json report;
  report["version"] = kVersion;
  report["config"] = config_echo(cfg);
  report["records"] = json::array();
  for (auto& o : outcomes) report["records"].push_back(o.record);
  int code = 0;
  if (compare) {
    double max_abs = 0.0, max_rel = 0.0;
    std::size_t failed = 0;
    for (const auto& r : report["records"]) {
      max_abs = std::max(max_abs, r["abs_diff"].get<double>());
      max_rel = std::max(max_rel, r["rel_diff"].get<double>());
      if (!r["pass"].get<bool>()) ++failed;
    }
    report["summary"] = {{"max_abs_diff", max_abs}, {"max_rel_diff", max_rel},
                         {"failed_edges", failed}, {"pass", failed == 0}};
    if (failed > 0) {
      err << "compare: " << failed << " edge(s) outside tolerance, max_abs_diff " << to_string(max_abs)
          << '\n';
      code = 1;
    }
  }
  if (cfg.timing) {
    report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  if (!cfg.trace.empty()) write_trace(cfg.trace, edges, outcomes);
  emit(cfg, render(cfg, report), out);
  return code;
}

int cmd_fixture(const RunConfig& cfg, std::ostream& out) {
  std::string text;
  if (cfg.fixture == "appendix_a") {
    text = "{\"cost\": [[1, 3, 3, 2], [2, 3, 3, 3], [3, 2, 2, 3]], \"dxy\": 1}\n";
  } else if (cfg.fixture == "path4") {
    text = "0 1\n1 2\n2 3\n";
  } else if (cfg.fixture == "star") {
    text = "0 1\n0 2\n0 3\n";
  } else {
    raise(ErrorKind::UnknownFixture, "'" + cfg.fixture + "' (known: appendix_a, path4, star)");
  }
  emit(cfg, text, out);
  return 0;
}

void add_run_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "Input file")->required();
  sub->add_option("--format", cfg.format, "Input format")
      ->check(CLI::IsMember({"edge_list", "json", "cost_matrix"}));
  sub->add_option("--method", cfg.method,
                  "lp | tree | assignment | brute_force | qsim_tree | qsim_pq")
      ->required();
  sub->add_option("--edge", cfg.edges, "Edge u,v (repeatable)");
  sub->add_flag("--all-edges", cfg.all_edges, "Every edge whose endpoints both have other neighbours");
  sub->add_option("--numeric", cfg.numeric, "Arithmetic for classical methods")
      ->check(CLI::IsMember({"rational", "float"}));
  sub->add_option("--margin", cfg.margin, "Headroom in alpha = ((1+margin) max d)^4");
  sub->add_option("--eps", cfg.eps, "Power-iteration tolerance");
  sub->add_option("--seed", cfg.seed, "RNG seed");
  sub->add_option("--shots", cfg.shots, "Sampled overlaps (tree case)");
  sub->add_flag("--include-endpoints", cfg.include_endpoints, "Add x to X and y to Y");
  sub->add_option("--cap", cfg.cap, "Dimension cap for p^p");
  sub->add_option("--out", cfg.out, "Output path (default stdout)");
  sub->add_option("--out-format", cfg.out_format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--trace", cfg.trace, "Audit trace (JSON Lines)");
  sub->add_flag("--timing", cfg.timing, "Include wall time in the report");
  sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  sub->add_option("--pi-route", cfg.pi_route, "Projector construction")
      ->check(CLI::IsMember({"direct", "purified"}));
  sub->add_option("--spectral", cfg.spectral, "Fractional power evaluation")
      ->check(CLI::IsMember({"exact", "chebyshev"}));
  sub->add_option("--debug-corrupt-alpha", cfg.corrupt_alpha, "Scale the recovery multiplier")
      ->group("");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Ollivier-Ricci curvature on graphs, classical and simulated quantum", "orc"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  CLI::App* compute = app.add_subcommand("compute", "Curvature of selected edges");
  CLI::App* compare = app.add_subcommand("compare", "Simulated quantum W1 against a classical solver");
  CLI::App* fixture = app.add_subcommand("fixture", "Write a built-in input");
  add_run_options(compute, cfg);
  add_run_options(compare, cfg);
  compare->add_option("--against", cfg.against, "Classical method (default tree or assignment)");
  compare->add_option("--tol", cfg.tol, "Absolute tolerance on W1");
  fixture->add_option("name", cfg.fixture, "appendix_a | path4 | star")->required();
  fixture->add_option("--out", cfg.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (fixture->parsed()) {
      cfg.command = "fixture";
      return cmd_fixture(cfg, out);
    }
    cfg.command = compare->parsed() ? "compare" : "compute";
    if (compare->parsed()) cfg.tol_given = compare->get_option("--tol")->count() > 0;
    return cmd_run(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_config_error(e.kind()) ? 2 : 3;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("orc");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace orc::cli
