#include "orc/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>

#include "json.hpp"

#include "orc/error.hpp"
#include "orc/kernels/kernels.hpp"
#include "orc/parallel.hpp"

namespace orc::graph {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)), adj_(vertex_count), adj_edge_(vertex_count) {
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    Edge& e = edges_[k];
    if (e.u >= n_ || e.v >= n_) {
      raise(ErrorKind::VertexOutOfRange,
            "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") with N=" +
                std::to_string(n_));
    }
    if (e.u == e.v) raise(ErrorKind::SelfLoop, "vertex " + std::to_string(e.u));
    e.w.canonicalize();
    if (e.w <= 0) {
      raise(ErrorKind::InvalidWeight, "edge (" + std::to_string(e.u) + "," +
                                          std::to_string(e.v) + ") weight " + e.w.get_str());
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
    adj_edge_[e.u].push_back(k);
    adj_edge_[e.v].push_back(k);
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::vector<std::size_t> order(adj_[v].size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return adj_[v][a] < adj_[v][b]; });
    std::vector<Vertex> nbrs;
    std::vector<std::size_t> eids;
    for (std::size_t idx : order) {
      if (!nbrs.empty() && nbrs.back() == adj_[v][idx]) {
        raise(ErrorKind::DuplicateEdge, "edge (" + std::to_string(std::min(v, nbrs.back())) +
                                            "," + std::to_string(std::max(v, nbrs.back())) + ")");
      }
      nbrs.push_back(adj_[v][idx]);
      eids.push_back(adj_edge_[v][idx]);
    }
    adj_[v] = std::move(nbrs);
    adj_edge_[v] = std::move(eids);
  }
}

std::optional<std::size_t> Graph::edge_index(Vertex a, Vertex b) const {
  if (a >= n_ || b >= n_) return std::nullopt;
  const auto& nbrs = adj_[a];
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b);
  if (it == nbrs.end() || *it != b) return std::nullopt;
  return adj_edge_[a][static_cast<std::size_t>(it - nbrs.begin())];
}

Graph Graph::scaled(const Rational& factor) const {
  if (factor <= 0) raise(ErrorKind::InvalidWeight, "scale factor must be positive");
  Rational f = factor;
  f.canonicalize();
  std::vector<Edge> out = edges_;
  for (Edge& e : out) e.w *= f;
  return Graph(n_, std::move(out));
}

namespace {

Vertex parse_vertex(const std::string& token, std::size_t line) {
  if (token.empty() || !std::all_of(token.begin(), token.end(),
                                    [](char c) { return c >= '0' && c <= '9'; })) {
    raise(ErrorKind::ParseError,
          "line " + std::to_string(line) + ": bad vertex '" + token + "'");
  }
  if (token.size() > 12) {
    raise(ErrorKind::ParseError, "line " + std::to_string(line) + ": vertex index too large");
  }
  return static_cast<Vertex>(std::stoull(token));
}

Graph parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() < 2 || tokens.size() > 3) {
      raise(ErrorKind::ParseError,
            "line " + std::to_string(line_no) + ": expected 'u v [w]'");
    }
    Edge e;
    e.u = parse_vertex(tokens[0], line_no);
    e.v = parse_vertex(tokens[1], line_no);
    if (tokens.size() == 3) e.w = parse_rational(tokens[2]);
    n = std::max({n, e.u + 1, e.v + 1});
    edges.push_back(std::move(e));
  }
  return Graph(n, std::move(edges));
}

Rational json_number(const nlohmann::json& v) {
  if (v.is_number_integer()) return parse_rational(v.dump());
  if (v.is_number_float()) return parse_rational(v.dump());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  raise(ErrorKind::ParseError, "expected a number, got " + v.dump());
}

Vertex json_vertex(const nlohmann::json& v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    raise(ErrorKind::ParseError, "bad vertex index " + v.dump());
  }
  return v.get<Vertex>();
}

Graph parse_json_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    raise(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges") ||
      !doc["edges"].is_array()) {
    raise(ErrorKind::ParseError, "expected {\"n\": N, \"edges\": [[u,v,w],...]}");
  }
  const Vertex n = json_vertex(doc["n"]);
  std::vector<Edge> edges;
  for (const auto& item : doc["edges"]) {
    if (!item.is_array() || item.size() < 2 || item.size() > 3) {
      raise(ErrorKind::ParseError, "edge entry must be [u, v] or [u, v, w]: " + item.dump());
    }
    Edge e;
    e.u = json_vertex(item[0]);
    e.v = json_vertex(item[1]);
    if (item.size() == 3) e.w = json_number(item[2]);
    edges.push_back(std::move(e));
  }
  return Graph(n, std::move(edges));
}

}  // namespace

Graph parse_graph(std::string_view text, GraphFormat format) {
  return format == GraphFormat::EdgeList ? parse_edge_list(text) : parse_json_graph(text);
}

Graph load_graph(std::istream& source, GraphFormat format) {
  std::ostringstream buf;
  buf << source.rdbuf();
  return parse_graph(buf.str(), format);
}

bool verify_tree(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0 || g.edge_count() != n - 1) return false;
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

std::vector<std::pair<Vertex, Vertex>> internal_edges(const Graph& g) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (const Edge& e : g.edges()) {
    if (g.degree(e.u) >= 2 && g.degree(e.v) >= 2) out.emplace_back(e.u, e.v);
  }
  return out;
}

// ---------------------------------------------------------------------------

template <typename T>
bool GeodesicMatrix<T>::all_finite() const {
  return std::all_of(finite_.begin(), finite_.end(), [](unsigned char f) { return f != 0; });
}

template <typename T>
T GeodesicMatrix<T>::max_finite() const {
  T best(0);
  for (std::size_t k = 0; k < d_.size(); ++k) {
    if (finite_[k] && d_[k] > best) best = d_[k];
  }
  return best;
}

namespace {

template <typename T>
T edge_weight(const Edge& e) {
  return from_rational<T>(e.w);
}

template <typename T>
void dijkstra_row(const Graph& g, const std::vector<std::vector<T>>& adj_w, Vertex source,
                  std::vector<T>& dist, std::vector<unsigned char>& reached) {
  const std::size_t n = g.vertex_count();
  dist.assign(n, T(0));
  reached.assign(n, 0);
  std::vector<unsigned char> done(n, 0);
  using Item = std::pair<T, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = T(0);
  reached[source] = 1;
  heap.emplace(T(0), source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    const auto& nbrs = g.neighbors(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Vertex w = nbrs[k];
      if (done[w]) continue;
      T cand = d + adj_w[v][k];
      if (!reached[w] || cand < dist[w]) {
        reached[w] = 1;
        dist[w] = cand;
        heap.emplace(std::move(cand), w);
      }
    }
  }
}

template <typename T>
GeodesicMatrix<T> run_dijkstra(const Graph& g, std::size_t threads) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<T>> adj_w(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.neighbors(v)) adj_w[v].push_back(edge_weight<T>(g.edges()[*g.edge_index(v, w)]));
  }
  std::vector<std::vector<T>> rows(n);
  std::vector<std::vector<unsigned char>> reach(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) dijkstra_row<T>(g, adj_w, s, rows[s], reach[s]);
  });
  GeodesicMatrix<T> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (reach[i][j]) {
        out.set(i, j, rows[i][j]);
      } else {
        out.set_infinite(i, j);
      }
    }
  }
  return out;
}

template <typename T>
GeodesicMatrix<T> run_floyd(const Graph& g, std::size_t threads) {
  const std::size_t n = g.vertex_count();
  GeodesicMatrix<T> out(n);
  if constexpr (is_exact_v<T>) {
    std::vector<T> d(n * n, T(0));
    std::vector<unsigned char> fin(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) fin[i * n + i] = 1;
    for (const Edge& e : g.edges()) {
      for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        if (!fin[a * n + b] || e.w < d[a * n + b]) {
          d[a * n + b] = e.w;
          fin[a * n + b] = 1;
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        T via;
        for (std::size_t i = begin; i < end; ++i) {
          if (i == k || !fin[i * n + k]) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (!fin[k * n + j]) continue;
            via = d[i * n + k] + d[k * n + j];
            if (!fin[i * n + j] || via < d[i * n + j]) {
              d[i * n + j] = via;
              fin[i * n + j] = 1;
            }
          }
        }
      });
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (fin[i * n + j]) {
          out.set(i, j, d[i * n + j]);
        } else {
          out.set_infinite(i, j);
        }
      }
    }
  } else {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n * n, inf);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    for (const Edge& e : g.edges()) {
      const double w = e.w.get_d();
      d[e.u * n + e.v] = std::min(d[e.u * n + e.v], w);
      d[e.v * n + e.u] = std::min(d[e.v * n + e.u], w);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const std::span<const double> row_k(d.data() + k * n, n);
      parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const double d_ik = d[i * n + k];
          if (i == k || d_ik == inf) continue;
          kernels::min_plus_row(row_k, d_ik, std::span<double>(d.data() + i * n, n));
        }
      });
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (d[i * n + j] != inf) {
          out.set(i, j, d[i * n + j]);
        } else {
          out.set_infinite(i, j);
        }
      }
    }
  }
  return out;
}

// Float sums along different shortest paths can differ in the last bit;
// keep the smaller of the two directions so d is exactly symmetric.
template <typename T>
void symmetrize(GeodesicMatrix<T>& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!m.finite(i, j)) continue;
      if (m(j, i) < m(i, j)) {
        m.set(i, j, m(j, i));
      } else {
        m.set(j, i, m(i, j));
      }
    }
  }
}

}  // namespace

template <typename T>
GeodesicMatrix<T> all_pairs_geodesic(const Graph& g, const ApspOptions& options) {
  const std::size_t n = g.vertex_count();
  ApspAlgorithm algo = options.algorithm;
  if (algo == ApspAlgorithm::Auto) {
    const bool dense = n >= 2 && 4 * g.edge_count() >= n * (n - 1);
    algo = (dense && n <= 512) ? ApspAlgorithm::FloydWarshall : ApspAlgorithm::Dijkstra;
  }
  GeodesicMatrix<T> out = algo == ApspAlgorithm::FloydWarshall ? run_floyd<T>(g, options.threads)
                                                               : run_dijkstra<T>(g, options.threads);
  symmetrize(out);
  return out;
}

template <typename T>
LocalNeighborhood<T> neighborhood(const Graph& g, const GeodesicMatrix<T>& dg, Vertex x,
                                  Vertex y, bool include_endpoints) {
  if (!g.has_edge(x, y)) {
    raise(ErrorKind::NotAnEdge, "(" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  LocalNeighborhood<T> nb;
  nb.x = x;
  nb.y = y;
  for (Vertex v : g.neighbors(x)) {
    if (v != y) nb.X.push_back(v);
  }
  for (Vertex v : g.neighbors(y)) {
    if (v != x) nb.Y.push_back(v);
  }
  if (include_endpoints) {
    nb.X.push_back(x);
    nb.Y.push_back(y);
  }
  if (nb.X.empty() || nb.Y.empty()) {
    raise(ErrorKind::EmptyNeighborhood, "edge (" + std::to_string(x) + "," + std::to_string(y) +
                                            ") has p=" + std::to_string(nb.X.size()) +
                                            ", q=" + std::to_string(nb.Y.size()));
  }
  nb.cost = Matrix<T>(nb.p(), nb.q());
  for (std::size_t i = 0; i < nb.p(); ++i) {
    for (std::size_t j = 0; j < nb.q(); ++j) {
      if (!dg.finite(nb.X[i], nb.Y[j])) raise(ErrorKind::InfiniteCost);
      nb.cost(i, j) = dg(nb.X[i], nb.Y[j]);
    }
  }
  nb.dxy = dg(x, y);
  return nb;
}

template <typename T>
LocalNeighborhood<T> neighborhood_from_cost(Matrix<T> cost, T dxy) {
  if (cost.rows() == 0 || cost.cols() == 0) raise(ErrorKind::EmptyNeighborhood, "empty cost matrix");
  if (!(dxy > 0)) raise(ErrorKind::InvalidWeight, "dxy must be positive");
  for (const T& c : cost.data()) {
    if (c < 0) raise(ErrorKind::InvalidWeight, "cost entries must be nonnegative");
  }
  LocalNeighborhood<T> nb;
  nb.x = 0;
  nb.y = 0;
  for (std::size_t i = 0; i < cost.rows(); ++i) nb.X.push_back(i);
  for (std::size_t j = 0; j < cost.cols(); ++j) nb.Y.push_back(cost.rows() + j);
  nb.cost = std::move(cost);
  nb.dxy = std::move(dxy);
  return nb;
}

template class GeodesicMatrix<Rational>;
template class GeodesicMatrix<double>;
template GeodesicMatrix<Rational> all_pairs_geodesic<Rational>(const Graph&, const ApspOptions&);
template GeodesicMatrix<double> all_pairs_geodesic<double>(const Graph&, const ApspOptions&);
template LocalNeighborhood<Rational> neighborhood<Rational>(const Graph&,
                                                            const GeodesicMatrix<Rational>&,
                                                            Vertex, Vertex, bool);
template LocalNeighborhood<double> neighborhood<double>(const Graph&,
                                                        const GeodesicMatrix<double>&, Vertex,
                                                        Vertex, bool);
template LocalNeighborhood<Rational> neighborhood_from_cost<Rational>(Matrix<Rational>, Rational);
template LocalNeighborhood<double> neighborhood_from_cost<double>(Matrix<double>, double);

}  // namespace orc::graph
