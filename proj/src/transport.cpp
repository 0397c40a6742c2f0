#include "orc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "orc/error.hpp"

namespace orc::transport {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::Lp: return "lp";
    case Method::Tree: return "tree";
    case Method::Assignment: return "assignment";
    case Method::BruteForce: return "brute_force";
    case Method::QsimTree: return "qsim_tree";
    case Method::QsimPq: return "qsim_pq";
  }
  return "lp";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::Lp, Method::Tree, Method::Assignment, Method::BruteForce,
                   Method::QsimTree, Method::QsimPq}) {
    if (method_name(m) == name) return m;
  }
  raise(ErrorKind::ConfigError, "unknown method '" + std::string(name) + "'");
}

namespace {

template <typename T>
bool nearly_equal(const T& a, const T& b) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double scale = 1.0 + std::max(abs_value(a), abs_value(b));
    return abs_value(a - b) <= 1e-12 * scale;
  }
}

// Residual network for the integral transportation flow.
template <typename T>
struct FlowNetwork {
  struct Arc {
    std::size_t to;
    long long cap;
    T cost;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> out;

  explicit FlowNetwork(std::size_t nodes) : out(nodes) {}

  std::size_t add(std::size_t from, std::size_t to, long long cap, const T& cost) {
    const std::size_t id = arcs.size();
    arcs.push_back({to, cap, cost});
    arcs.push_back({from, 0, -cost});
    out[from].push_back(id);
    out[to].push_back(id + 1);
    return id;
  }
};

template <typename T>
TransportPlan<T> solve_transport(const Matrix<T>& cost) {
  const std::size_t p = cost.rows();
  const std::size_t q = cost.cols();
  if (p == 0 || q == 0) raise(ErrorKind::EmptyNeighborhood, "empty cost matrix");
  for (const T& c : cost.data()) {
    if constexpr (!is_exact_v<T>) {
      if (!std::isfinite(c)) raise(ErrorKind::InfiniteCost);
    }
    if (c < 0) raise(ErrorKind::InvalidWeight, "negative transport cost");
  }

  const std::size_t source = 0, sink = p + q + 1, nodes = p + q + 2;
  FlowNetwork<T> net(nodes);
  std::vector<std::size_t> cell_arc(p * q);
  for (std::size_t i = 0; i < p; ++i) net.add(source, 1 + i, static_cast<long long>(q), T(0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      cell_arc[i * q + j] =
          net.add(1 + i, 1 + p + j, static_cast<long long>(std::min(p, q)), cost(i, j));
    }
  }
  for (std::size_t j = 0; j < q; ++j) net.add(1 + p + j, sink, static_cast<long long>(p), T(0));

  const long long required = static_cast<long long>(p * q);
  long long sent = 0;
  std::vector<T> potential(nodes, T(0));
  std::vector<T> dist(nodes);
  std::vector<unsigned char> reached(nodes), done(nodes);
  std::vector<std::size_t> via(nodes);

  while (sent < required) {
    // Dense Dijkstra on reduced costs; V is tiny and it avoids heap copies
    // of rational keys.
    std::fill(reached.begin(), reached.end(), 0);
    std::fill(done.begin(), done.end(), 0);
    dist[source] = T(0);
    reached[source] = 1;
    for (;;) {
      std::size_t best = nodes;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (reached[v] && !done[v] && (best == nodes || dist[v] < dist[best])) best = v;
      }
      if (best == nodes) break;
      done[best] = 1;
      for (std::size_t id : net.out[best]) {
        const auto& arc = net.arcs[id];
        if (arc.cap <= 0 || done[arc.to]) continue;
        T cand = dist[best] + arc.cost + potential[best] - potential[arc.to];
        if (!reached[arc.to] || cand < dist[arc.to]) {
          dist[arc.to] = std::move(cand);
          reached[arc.to] = 1;
          via[arc.to] = id;
        }
      }
    }
    if (!reached[sink]) raise(ErrorKind::InfiniteCost, "transport network disconnected");
    for (std::size_t v = 0; v < nodes; ++v) {
      if (reached[v]) potential[v] += dist[v];
    }
    long long push = required - sent;
    for (std::size_t v = sink; v != source; v = net.arcs[via[v] ^ 1].to) {
      push = std::min(push, net.arcs[via[v]].cap);
    }
    for (std::size_t v = sink; v != source; v = net.arcs[via[v] ^ 1].to) {
      net.arcs[via[v]].cap -= push;
      net.arcs[via[v] ^ 1].cap += push;
    }
    sent += push;
  }

  TransportPlan<T> plan;
  plan.p = p;
  plan.q = q;
  plan.gamma = Matrix<T>(p, q);
  const T scale = T(static_cast<long>(p * q));
  T total(0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const long long flow = net.arcs[cell_arc[i * q + j] ^ 1].cap;
      if (flow == 0) continue;
      const T f(static_cast<long>(flow));
      plan.gamma(i, j) = f / scale;
      total += cost(i, j) * f;
    }
  }
  plan.cost_value = total / scale;
  return plan;
}

// Hungarian algorithm with potentials. a is n x n, 1-based internally.
// Returns assignment[col] = row minimizing sum a(assignment[c], c).
template <typename T>
std::vector<std::size_t> hungarian(const Matrix<T>& cost) {
  const std::size_t n = cost.rows();
  // Hungarian "rows" are the columns of cost (each column picks a row).
  auto a = [&](std::size_t hi, std::size_t hj) -> const T& { return cost(hj - 1, hi - 1); };
  std::vector<T> u(n + 1, T(0)), v(n + 1, T(0)), minv(n + 1, T(0));
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<unsigned char> used(n + 1), minv_set(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(used.begin(), used.end(), 0);
    std::fill(minv_set.begin(), minv_set.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      std::size_t j1 = 0;
      bool have_delta = false;
      T delta(0);
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        T cur = a(i0, j) - u[i0] - v[j];
        if (!minv_set[j] || cur < minv[j]) {
          minv[j] = std::move(cur);
          minv_set[j] = 1;
          way[j] = j0;
        }
        if (!have_delta || minv[j] < delta) {
          delta = minv[j];
          have_delta = true;
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> pi(n);
  for (std::size_t j = 1; j <= n; ++j) pi[match[j] - 1] = j - 1;
  return pi;
}

template <typename T>
T assignment_sum(const Matrix<T>& cost, const std::vector<std::size_t>& pi) {
  T sum(0);
  for (std::size_t i = 0; i < pi.size(); ++i) sum += cost(pi[i], i);
  return sum;
}

template <typename T>
T optimal_sum(const Matrix<T>& cost) {
  if (cost.rows() == 0) return T(0);
  return assignment_sum(cost, hungarian(cost));
}

void require_square(std::size_t rows, std::size_t cols) {
  if (rows != cols || rows == 0) {
    raise(ErrorKind::NonSquare, std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

template <typename T>
TransportPlan<T> w1_lp(const Matrix<T>& cost) {
  return solve_transport(cost);
}

template <typename T>
TransportPlan<T> w1_lp(const graph::LocalNeighborhood<T>& nb) {
  return solve_transport(nb.cost);
}

template <typename T>
T w1_tree(const graph::LocalNeighborhood<T>& nb, const graph::GeodesicMatrix<T>& dg) {
  if (nb.p() == 0 || nb.q() == 0) raise(ErrorKind::EmptyNeighborhood);
  T sx(0), sy(0);
  for (graph::Vertex v : nb.X) {
    if (!dg.finite(v, nb.x)) raise(ErrorKind::InfiniteCost);
    sx += dg(v, nb.x);
  }
  for (graph::Vertex v : nb.Y) {
    if (!dg.finite(nb.y, v)) raise(ErrorKind::InfiniteCost);
    sy += dg(nb.y, v);
  }
  return sx / T(static_cast<long>(nb.p())) + nb.dxy + sy / T(static_cast<long>(nb.q()));
}

template <typename T>
T w1_tree_checked(const graph::Graph& g, const graph::LocalNeighborhood<T>& nb,
                  const graph::GeodesicMatrix<T>& dg) {
  if (!graph::verify_tree(g)) raise(ErrorKind::NotATree);
  return w1_tree(nb, dg);
}

template <typename T>
AssignmentSolution<T> w1_assignment(const Matrix<T>& cost) {
  require_square(cost.rows(), cost.cols());
  const std::size_t p = cost.rows();
  std::vector<std::size_t> pi = hungarian(cost);
  const T best = assignment_sum(cost, pi);

  if (p <= 24) {
    // Fix pi[0], pi[1], ... to the smallest row that still admits an
    // optimal completion.
    std::vector<std::size_t> fixed;
    std::vector<unsigned char> row_used(p, 0);
    T prefix(0);
    for (std::size_t col = 0; col < p; ++col) {
      const std::size_t rest = p - col - 1;
      bool placed = false;
      for (std::size_t r = 0; r < p && !placed; ++r) {
        if (row_used[r]) continue;
        Matrix<T> sub(rest, rest);
        std::size_t si = 0;
        for (std::size_t rr = 0; rr < p; ++rr) {
          if (row_used[rr] || rr == r) continue;
          for (std::size_t cc = 0; cc < rest; ++cc) sub(si, cc) = cost(rr, col + 1 + cc);
          ++si;
        }
        T total = prefix + cost(r, col) + optimal_sum(sub);
        if (nearly_equal(total, best)) {
          fixed.push_back(r);
          row_used[r] = 1;
          prefix += cost(r, col);
          placed = true;
        }
      }
      if (!placed) break;  // float ties at the tolerance edge; keep Hungarian's answer
    }
    if (fixed.size() == p) pi = std::move(fixed);
  }

  AssignmentSolution<T> out;
  out.p = p;
  out.cost_value = assignment_sum(cost, pi) / T(static_cast<long>(p));
  out.pi = std::move(pi);
  return out;
}

template <typename T>
AssignmentSolution<T> w1_bruteforce(const Matrix<T>& cost) {
  require_square(cost.rows(), cost.cols());
  const std::size_t p = cost.rows();
  if (p > 9) raise(ErrorKind::TooLarge, "p=" + std::to_string(p) + " exceeds 9");
  std::vector<std::size_t> perm(p);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best_perm = perm;
  T best = assignment_sum(cost, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    T s = assignment_sum(cost, perm);
    if (s < best) {
      best = std::move(s);
      best_perm = perm;
    }
  }
  AssignmentSolution<T> out;
  out.p = p;
  out.pi = std::move(best_perm);
  out.cost_value = best / T(static_cast<long>(p));
  return out;
}

namespace {

struct TreeSearch {
  std::size_t p, q;
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // (row, col)
  std::vector<std::size_t> chosen;

  std::size_t find(std::vector<std::size_t>& parent, std::size_t v) const {
    while (parent[v] != v) v = parent[v];
    return v;
  }

  // Solve the tree's flows by peeling leaves; rows push q units, columns
  // absorb p units. Returns false when some arc would carry negative flow.
  bool tree_flows(std::vector<long long>& flow) const {
    const std::size_t nodes = p + q;
    std::vector<long long> net(nodes);
    for (std::size_t i = 0; i < p; ++i) net[i] = static_cast<long long>(q);
    for (std::size_t j = 0; j < q; ++j) net[p + j] = -static_cast<long long>(p);
    std::vector<std::size_t> degree(nodes, 0);
    for (std::size_t e : chosen) {
      ++degree[cells[e].first];
      ++degree[p + cells[e].second];
    }
    std::vector<unsigned char> edge_done(chosen.size(), 0);
    flow.assign(chosen.size(), 0);
    for (std::size_t removed = 0; removed + 1 < nodes;) {
      bool progressed = false;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (degree[v] != 1) continue;
        std::size_t k = 0;
        while (edge_done[k] || (cells[chosen[k]].first != v && p + cells[chosen[k]].second != v)) ++k;
        const bool is_row = v < p;
        const std::size_t u = is_row ? p + cells[chosen[k]].second : cells[chosen[k]].first;
        const long long f = is_row ? net[v] : -net[v];
        if (f < 0) return false;
        flow[k] = f;
        if (is_row) {
          net[u] += f;
        } else {
          net[u] -= f;
        }
        net[v] = 0;
        edge_done[k] = 1;
        --degree[v];
        --degree[u];
        ++removed;
        progressed = true;
      }
      if (!progressed) break;
    }
    return true;
  }

  template <typename Visit>
  void enumerate(std::size_t next, std::vector<std::size_t>& parent, Visit&& visit) {
    const std::size_t need = p + q - 1;
    if (chosen.size() == need) {
      visit();
      return;
    }
    if (cells.size() - next < need - chosen.size()) return;
    const auto [r, c] = cells[next];
    const std::size_t a = find(parent, r), b = find(parent, p + c);
    if (a != b) {
      std::vector<std::size_t> saved = parent;
      parent[a] = b;
      chosen.push_back(next);
      enumerate(next + 1, parent, visit);
      chosen.pop_back();
      parent = std::move(saved);
    }
    enumerate(next + 1, parent, visit);
  }
};

}  // namespace

template <typename T>
T lp_vertex_oracle(const Matrix<T>& cost) {
  const std::size_t p = cost.rows(), q = cost.cols();
  if (p == 0 || q == 0) raise(ErrorKind::EmptyNeighborhood, "empty cost matrix");
  if (p + q > 9) raise(ErrorKind::TooLarge, "p+q=" + std::to_string(p + q) + " exceeds 9");
  TreeSearch search{p, q, {}, {}};
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) search.cells.emplace_back(i, j);
  }
  std::vector<std::size_t> parent(p + q);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  bool have = false;
  T best(0);
  std::vector<long long> flow;
  search.enumerate(0, parent, [&] {
    if (!search.tree_flows(flow)) return;
    T total(0);
    for (std::size_t k = 0; k < flow.size(); ++k) {
      if (flow[k] == 0) continue;
      const auto [r, c] = search.cells[search.chosen[k]];
      total += cost(r, c) * T(static_cast<long>(flow[k]));
    }
    if (!have || total < best) {
      best = std::move(total);
      have = true;
    }
  });
  return best / T(static_cast<long>(p * q));
}

template <typename T>
CurvatureResult<T> make_result(const graph::LocalNeighborhood<T>& nb, T w1, Method method) {
  if (!(nb.dxy > 0)) raise(ErrorKind::InvalidWeight, "d_G(x,y) must be positive");
  CurvatureResult<T> r;
  r.x = nb.x;
  r.y = nb.y;
  r.dxy = nb.dxy;
  r.curvature = T(1) - w1 / nb.dxy;
  r.w1 = std::move(w1);
  r.method = method;
  return r;
}

template <typename T>
CurvatureResult<T> curvature(const graph::LocalNeighborhood<T>& nb, Method method,
                             const graph::Graph* g, const graph::GeodesicMatrix<T>* dg) {
  switch (method) {
    case Method::Lp:
      return make_result(nb, w1_lp(nb).cost_value, method);
    case Method::Tree:
      if (g == nullptr || dg == nullptr) {
        raise(ErrorKind::MethodMismatch, "tree method needs a graph input");
      }
      return make_result(nb, w1_tree_checked(*g, nb, *dg), method);
    case Method::Assignment:
      if (nb.p() != nb.q()) {
        raise(ErrorKind::MethodMismatch, "assignment needs p = q (p=" + std::to_string(nb.p()) +
                                             ", q=" + std::to_string(nb.q()) + ")");
      }
      return make_result(nb, w1_assignment(nb.cost).cost_value, method);
    case Method::BruteForce:
      if (nb.p() == nb.q() && nb.p() <= 9) {
        return make_result(nb, w1_bruteforce(nb.cost).cost_value, method);
      }
      return make_result(nb, lp_vertex_oracle(nb.cost), method);
    case Method::QsimTree:
    case Method::QsimPq:
      break;
  }
  raise(ErrorKind::MethodMismatch,
        std::string(method_name(method)) + " is served by the qsim pipeline");
}

#define ORC_TRANSPORT_INSTANTIATE(T)                                                       \
  template TransportPlan<T> w1_lp<T>(const Matrix<T>&);                                    \
  template TransportPlan<T> w1_lp<T>(const graph::LocalNeighborhood<T>&);                  \
  template T w1_tree<T>(const graph::LocalNeighborhood<T>&, const graph::GeodesicMatrix<T>&); \
  template T w1_tree_checked<T>(const graph::Graph&, const graph::LocalNeighborhood<T>&,   \
                                const graph::GeodesicMatrix<T>&);                          \
  template AssignmentSolution<T> w1_assignment<T>(const Matrix<T>&);                       \
  template AssignmentSolution<T> w1_bruteforce<T>(const Matrix<T>&);                       \
  template T lp_vertex_oracle<T>(const Matrix<T>&);                                        \
  template CurvatureResult<T> make_result<T>(const graph::LocalNeighborhood<T>&, T, Method); \
  template CurvatureResult<T> curvature<T>(const graph::LocalNeighborhood<T>&, Method,     \
                                           const graph::Graph*, const graph::GeodesicMatrix<T>*);

ORC_TRANSPORT_INSTANTIATE(Rational)
ORC_TRANSPORT_INSTANTIATE(double)

}  // namespace orc::transport
