#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "orc/error.hpp"
#include "orc/qorc.hpp"
#include "orc/transport.hpp"

using namespace orc;
using namespace orc::qorc;
using qsim::BlockEncoding;
using qsim::Diagonal;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an orc::Error");
  return ErrorKind::ConfigError;
}

graph::GeodesicMatrix<double> geodesics(const std::string& edges) {
  return graph::all_pairs_geodesic<double>(graph::parse_graph(edges, graph::GraphFormat::EdgeList));
}

DistanceEncoding local_encoding(const Matrix<double>& cost, double margin = 0.0) {
  const std::size_t p = cost.rows();
  graph::GeodesicMatrix<double> d(2 * p);
  for (std::size_t i = 0; i < 2 * p; ++i)
    for (std::size_t j = 0; j < 2 * p; ++j) d.set(i, j, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      d.set(i, p + j, cost(i, j));
      d.set(p + j, i, cost(i, j));
    }
  return build_distance_encoding(d, margin);
}

std::vector<std::size_t> iota_from(std::size_t start, std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = start + k;
  return v;
}

}  // namespace

TEST_CASE("distance encoding examples") {
  const auto k3 = geodesics("0 1 3\n1 2 3\n0 2 3");
  const auto enc = build_distance_encoding(k3, 0.0);
  const Diagonal e = enc.be.encoded_diagonal();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(e[i * 3 + j] == doctest::Approx(i == j ? 0.0 : 0.5));
  CHECK(enc.meta.kappa == 1.0);

  const auto path3 = build_distance_encoding(geodesics("0 1\n1 2"), 0.0);
  const Diagonal e3 = path3.be.encoded_diagonal();
  CHECK(e3[0 * 3 + 1] == doctest::Approx(0.25));
  CHECK(e3[0 * 3 + 2] == doctest::Approx(0.5));
  CHECK(path3.meta.kappa == 16.0);

  const auto path4 = build_distance_encoding(geodesics("0 1\n1 2\n2 3"), 0.0);
  CHECK(path4.meta.alpha_q == doctest::Approx(6.0));
  CHECK(path4.meta.alpha == doctest::Approx(81.0));
  CHECK(path4.be.encoded_diagonal()[0 * 4 + 3] == doctest::Approx(0.5));
  CHECK(path4.be.encoded_diagonal()[0 * 4 + 2] == doctest::Approx(2.0 / 6.0));

  const auto margin = build_distance_encoding(geodesics("0 1\n1 2\n2 3"), 0.05);
  CHECK(margin.meta.alpha == doctest::Approx(std::pow(1.05 * 3, 4)));
  CHECK(margin.meta.alpha_q == doctest::Approx(2 * 1.05 * 3));

  CHECK(kind_of([] { build_distance_encoding(graph::all_pairs_geodesic<double>(graph::Graph(2, {})), 0.0); }) ==
        ErrorKind::InfiniteDistance);
  CHECK(kind_of([] { build_distance_encoding(graph::all_pairs_geodesic<double>(graph::Graph(1, {})), 0.0); }) ==
        ErrorKind::DegenerateAllZero);
}

TEST_CASE("tree_overlap_sum examples") {
  const auto dg = geodesics("0 1 5\n1 2 3");
  const auto enc = build_distance_encoding(dg, 0.0);
  const double beta = enc.meta.alpha_q;
  const std::vector<std::size_t> one{1};
  CHECK(tree_overlap_sum(enc, 0, one) == doctest::Approx(5.0 / (2 * beta)));

  const auto star = geodesics("0 1 1\n0 2 2");
  const auto es = build_distance_encoding(star, 0.0);
  const std::vector<std::size_t> two{1, 2};
  CHECK(tree_overlap_sum(es, 0, two) == doctest::Approx(1.0 / es.meta.alpha_q));

  const std::vector<std::size_t> bad{7};
  CHECK(kind_of([&] { tree_overlap_sum(es, 0, bad); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { tree_overlap_sum(es, 0, {}); }) == ErrorKind::IndexOutOfRange);

  testgen::Rng rng(31);
  const auto g = testgen::random_tree(30, rng, 4);
  const auto d = graph::all_pairs_geodesic<double>(g);
  const auto e = build_distance_encoding(d, 0.05);
  for (std::size_t v = 0; v < 30; ++v) {
    const auto& nb = g.neighbors(v);
    const double o = tree_overlap_sum(e, v, nb);
    double sum = 0;
    for (auto u : nb) sum += d(v, u);
    CHECK(std::fabs(o * e.meta.alpha_q * (nb.size() + 1) - sum) <= 1e-10);
  }
}

TEST_CASE("w1_tree_qsim on the unit path") {
  const auto g = graph::parse_graph("0 1\n1 2\n2 3", graph::GraphFormat::EdgeList);
  const auto d = graph::all_pairs_geodesic<double>(g);
  const auto r = w1_tree_qsim(g, d, 1, 2, {});
  CHECK(r.result.w1 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(r.result.curvature == doctest::Approx(-2.0).epsilon(1e-14));

  const auto cyc = graph::parse_graph("0 1\n1 2\n2 0\n0 3", graph::GraphFormat::EdgeList);
  CHECK(kind_of([&] { w1_tree_qsim(cyc, graph::all_pairs_geodesic<double>(cyc), 0, 1, {}); }) ==
        ErrorKind::NotATree);
  CHECK(kind_of([&] { w1_tree_qsim(g, d, 0, 1, {}); }) == ErrorKind::EmptyNeighborhood);
}

TEST_CASE("w1_tree_qsim matches the closed form on random trees") {
  testgen::Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    const auto g = testgen::random_tree(testgen::uniform(rng, 4, 64), rng, 5);
    const auto d = graph::all_pairs_geodesic<double>(g);
    const auto enc = build_distance_encoding(d, 0.05);
    for (auto [x, y] : graph::internal_edges(g)) {
      const auto q = w1_tree_qsim(g, d, x, y, {}, &enc);
      const double ref = transport::w1_tree(graph::neighborhood(g, d, x, y), d);
      CHECK(std::fabs(q.result.w1 - ref) <= 1e-10);
    }
  }
}

TEST_CASE("w1_tree_qsim in shot mode stays within five standard errors") {
  testgen::Rng rng(33);
  const auto g = testgen::random_tree(20, rng, 3);
  const auto d = graph::all_pairs_geodesic<double>(g);
  QsimConfig cfg;
  cfg.shots = 1'000'000;
  cfg.seed = 99;
  for (auto [x, y] : graph::internal_edges(g)) {
    const auto q = w1_tree_qsim(g, d, x, y, cfg);
    REQUIRE(q.std_error.has_value());
    const double ref = transport::w1_tree(graph::neighborhood(g, d, x, y), d);
    CHECK(std::fabs(q.result.w1 - ref) <= 5 * *q.std_error);
    CHECK(q.result.w1 == w1_tree_qsim(g, d, x, y, cfg).result.w1);
  }
}

TEST_CASE("w1_tree_qsim with the chebyshev fourth root") {
  const auto g = graph::parse_graph("0 1\n1 2\n2 3\n2 4", graph::GraphFormat::EdgeList);
  const auto d = graph::all_pairs_geodesic<double>(g);
  QsimConfig cfg;
  cfg.spectral.mode = qsim::SpectralMode::Chebyshev;
  const auto q = w1_tree_qsim(g, d, 1, 2, cfg);
  CHECK(q.result.w1 == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("localize_DG examples") {
  const auto c1 = Matrix<double>::from_rows({{2.0}});
  const auto e1 = local_encoding(c1);
  const std::vector<std::size_t> x0{0}, y0{1};
  const auto l1 = localize_DG(e1, x0, y0);
  CHECK(l1.dim() == 1);
  CHECK(l1.encoded_diagonal()[0] * e1.meta.alpha_q == doctest::Approx(2.0));

  const auto c = Matrix<double>::from_rows({{1, 2}, {3, 4}});
  const auto enc = local_encoding(c);
  const auto X = iota_from(0, 2), Y = iota_from(2, 2);
  const auto loc = localize_DG(enc, X, Y);
  const Diagonal e = loc.encoded_diagonal();
  const double aq = enc.meta.alpha_q;
  CHECK(e[0] * aq == doctest::Approx(1));
  CHECK(e[1] * aq == doctest::Approx(3));
  CHECK(e[2] * aq == doctest::Approx(2));
  CHECK(e[3] * aq == doctest::Approx(4));

  const std::vector<std::size_t> short_y{2};
  CHECK(kind_of([&] { localize_DG(enc, X, short_y); }) == ErrorKind::SizeMismatch);
}

TEST_CASE("localize_DG via explicit permutation products") {
  // Same result through be_product with the permutation unitaries.
  const auto c = Matrix<double>::from_rows({{1, 2}, {3, 4}});
  const auto enc = local_encoding(c);
  const auto X = iota_from(0, 2), Y = iota_from(2, 2);
  std::vector<std::pair<std::size_t, std::size_t>> fixed;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) fixed.emplace_back(X[i] * 4 + Y[j], i * 2 + j);
  const auto u = qsim::PermutationSpec::complete(16, fixed);
  const auto dense = qsim::be_wrap(qsim::Operator(enc.be.op.dense()), enc.be.subnorm);
  const auto conj = qsim::be_product(qsim::be_product(qsim::be_permutation(u), dense),
                                     qsim::be_permutation(u.inverse()));
  const auto block = qsim::be_leading_block(conj, 4);
  const auto sw = qsim::PermutationSpec::swap_factors(2, 2);
  const auto swapped = qsim::be_product(qsim::be_product(qsim::be_permutation(sw), block),
                                        qsim::be_permutation(sw.inverse()));
  const auto fast = localize_DG(enc, X, Y);
  CHECK((swapped.encoded_dense() - fast.encoded_dense()).norm() <= 1e-14);
}

TEST_CASE("conjugation preserves the spectrum") {
  testgen::Rng rng(34);
  const auto c = testgen::random_int_matrix(3, 3, rng, 1, 9).cast<double>();
  const auto enc = local_encoding(c);
  Diagonal before = enc.be.encoded_diagonal();
  const std::vector<std::pair<std::size_t, std::size_t>> fixed{{5, 0}, {7, 1}};
  Diagonal after = qsim::be_conjugate(qsim::PermutationSpec::complete(36, fixed), enc.be).encoded_diagonal();
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  CHECK(before == after);
}

TEST_CASE("extract_Di examples") {
  const auto c = Matrix<double>::from_rows({{1, 2}, {3, 4}});
  const auto enc = local_encoding(c);
  const auto loc = localize_DG(enc, iota_from(0, 2), iota_from(2, 2));
  const double aq = enc.meta.alpha_q;
  const auto d1 = extract_Di(loc, 1).encoded_diagonal();
  const auto d2 = extract_Di(loc, 2).encoded_diagonal();
  CHECK(d1[0] * aq == doctest::Approx(1));
  CHECK(d1[1] * aq == doctest::Approx(3));
  CHECK(d2[0] * aq == doctest::Approx(2));
  CHECK(d2[1] * aq == doctest::Approx(4));
  CHECK(kind_of([&] { extract_Di(loc, 0); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { extract_Di(loc, 3); }) == ErrorKind::IndexOutOfRange);

  testgen::Rng rng(35);
  const auto r = testgen::random_int_matrix(4, 4, rng, 1, 20).cast<double>();
  const auto er = local_encoding(r);
  const auto lr = localize_DG(er, iota_from(0, 4), iota_from(4, 4));
  std::multiset<long> got, want;
  for (std::size_t i = 1; i <= 4; ++i)
    for (double v : extract_Di(lr, i).encoded_diagonal()) got.insert(std::lround(v * er.meta.alpha_q));
  for (double v : r.data()) want.insert(std::lround(v));
  CHECK(got == want);
}

TEST_CASE("build_DP examples") {
  const auto c = Matrix<double>::from_rows({{1, 2}, {3, 4}});
  const auto enc = local_encoding(c);
  const auto loc = localize_DG(enc, iota_from(0, 2), iota_from(2, 2));
  const std::vector<BlockEncoding> ds{extract_Di(loc, 1), extract_Di(loc, 2)};
  const auto dp = build_DP(ds);
  const Diagonal e = dp.encoded_diagonal();
  const double scale = 2 * enc.meta.alpha_q;
  const double want[] = {3, 5, 5, 7};
  for (int k = 0; k < 4; ++k) CHECK(e[k] * scale == doctest::Approx(want[k]));
  CHECK(dp.subnorm == doctest::Approx(scale));

  testgen::Rng rng(36);
  const auto r = testgen::random_int_matrix(3, 3, rng, 1, 9).cast<double>();
  const auto er = local_encoding(r);
  const auto lr = localize_DG(er, iota_from(0, 3), iota_from(3, 3));
  std::vector<BlockEncoding> d3;
  for (std::size_t i = 1; i <= 3; ++i) d3.push_back(extract_Di(lr, i));
  const Diagonal e3 = build_DP(d3).encoded_diagonal();
  REQUIRE(e3.size() == 27);
  const double s3 = 3 * er.meta.alpha_q;
  // First entries follow d11+d12+d13, d11+d12+d23, d11+d12+d33, d11+d22+d13.
  CHECK(e3[0] * s3 == doctest::Approx(r(0, 0) + r(0, 1) + r(0, 2)));
  CHECK(e3[1] * s3 == doctest::Approx(r(0, 0) + r(0, 1) + r(1, 2)));
  CHECK(e3[2] * s3 == doctest::Approx(r(0, 0) + r(0, 1) + r(2, 2)));
  CHECK(e3[3] * s3 == doctest::Approx(r(0, 0) + r(1, 1) + r(0, 2)));
  for (std::size_t k = 0; k < 27; ++k) {
    const auto dig = perm_digits(k, 3);
    const double sum = r(dig[0] - 1, 0) + r(dig[1] - 1, 1) + r(dig[2] - 1, 2);
    CHECK(std::fabs(e3[k] * s3 - sum) <= 1e-12);
  }

  std::vector<BlockEncoding> eight(8, qsim::be_identity(8));
  CHECK(kind_of([&] { build_DP(eight); }) == ErrorKind::DimensionCap);
}

TEST_CASE("perm_index") {
  const std::vector<std::size_t> a{1, 1, 1}, b{3, 3, 3}, c{1, 2, 3}, bad{1, 4, 1};
  CHECK(perm_index(a, 3) == 0);
  CHECK(perm_index(b, 3) == 26);
  CHECK(perm_index(c, 3) == 5);
  CHECK(kind_of([&] { perm_index(bad, 3); }) == ErrorKind::DigitOutOfRange);
  for (std::size_t k = 0; k < 256; ++k) CHECK(perm_index(perm_digits(k, 4), 4) == k);
}

TEST_CASE("build_Pi support and routes") {
  const auto p2 = build_Pi(2, PiRoute::Direct);
  CHECK(p2.op.diagonal() == Diagonal{0, 1, 1, 0});
  CHECK(p2.subnorm == 2.0);
  const auto p3 = build_Pi(3, PiRoute::Direct);
  CHECK(std::count(p3.op.diagonal().begin(), p3.op.diagonal().end(), 1.0) == 6);
  for (std::size_t p : {2u, 3u}) {
    const Diagonal direct = build_Pi(p, PiRoute::Direct).encoded_diagonal();
    const Diagonal purified = build_Pi(p, PiRoute::Purified).encoded_diagonal();
    REQUIRE(direct.size() == purified.size());
    for (std::size_t k = 0; k < direct.size(); ++k) CHECK(std::fabs(direct[k] - purified[k]) <= 1e-15);
  }
  CHECK(kind_of([] { build_Pi(5, PiRoute::Purified); }) == ErrorKind::DimensionCap);
  CHECK(kind_of([] { build_Pi(8, PiRoute::Direct); }) == ErrorKind::DimensionCap);
}

TEST_CASE("min_eigen_power examples") {
  const auto be = qsim::be_wrap(Diagonal{0.0, 0.5, 0.25}, 1.0);
  const auto est = min_eigen_power(be, 4.0, 1e-12, 1, 1000);
  CHECK(est.converged);
  CHECK(est.value == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(est.gap_proxy == doctest::Approx(2.0));
  CHECK(est.initial_overlap > 0.0);
  CHECK(est.initial_overlap <= 1.0);

  const auto flat = qsim::be_wrap(Diagonal{0.0, 0.3, 0.3, 0.3}, 1.0);
  const auto ef = min_eigen_power(flat, 1.0 / 0.3, 1e-12, 2, 1000);
  CHECK(ef.iterations == 1);
  CHECK(ef.value == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(std::isinf(ef.gap_proxy));

  const auto slow = min_eigen_power(be, 4.0, 1e-14, 1, 2);
  CHECK_FALSE(slow.converged);
  CHECK(slow.iterations == 2);
}

TEST_CASE("property: Rayleigh-quotient error decays geometrically") {
  testgen::Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    Diagonal d(40, 0.0);
    for (std::size_t k = 0; k < 30; ++k) d[k] = 0.1 + 0.9 * std::uniform_real_distribution<double>()(rng);
    const double lo = *std::min_element(d.begin(), d.begin() + 30);
    const double hi = *std::max_element(d.begin(), d.begin() + 30);
    const auto est = min_eigen_power(qsim::be_wrap(d, 1.0), 1.0 / lo, 1e-13, t, 10000);
    REQUIRE(est.converged);
    // In pseudoinverse units the top eigenvalue is 1 and the spread is hi / lo - 1.
    const double spread = 1.0 - lo / hi;
    const double g0 = est.initial_overlap;
    const double c0 = spread * (1 - g0 * g0) / (g0 * g0);
    for (std::size_t s = 0; s < est.rq_history.size(); ++s) {
      const double err = 1.0 - est.rq_history[s];
      CHECK(err <= c0 * std::pow(1.0 / est.gap_proxy, 2.0 * s) + 1e-14);
    }
  }
}

TEST_CASE("w1_pq_qsim examples") {
  const auto one = w1_pq_qsim_local(Matrix<double>::from_rows({{2.5}}), 1.0, {});
  CHECK(one.result.w1 == doctest::Approx(2.5).epsilon(1e-14));

  const auto two = w1_pq_qsim_local(Matrix<double>::from_rows({{1, 2}, {3, 4}}), 1.0, {});
  CHECK(two.result.w1 == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(two.result.curvature == doctest::Approx(-1.5).epsilon(1e-12));
  REQUIRE(two.eigen.has_value());
  CHECK(two.eigen->converged);

  CHECK(kind_of([] { w1_pq_qsim_local(Matrix<double>(2, 3, 1.0), 1.0, {}); }) == ErrorKind::NotSquare);
  CHECK(kind_of([] {
          QsimConfig cfg;
          cfg.cap = 10;
          w1_pq_qsim_local(Matrix<double>(3, 3, 1.0), 1.0, cfg);
        }) == ErrorKind::DimensionCap);
}

TEST_CASE("w1_pq_qsim on graphs") {
  const auto cyc = graph::parse_graph("0 1\n1 2\n2 3\n3 4\n4 5\n5 0", graph::GraphFormat::EdgeList);
  const auto d = graph::all_pairs_geodesic<double>(cyc);
  const auto r = w1_pq_qsim(cyc, d, 0, 1, {});
  CHECK(r.result.w1 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.result.curvature == doctest::Approx(-2.0).epsilon(1e-12));

  const auto lopsided = graph::parse_graph("0 1\n0 2\n0 3\n1 4", graph::GraphFormat::EdgeList);
  CHECK(kind_of([&] { w1_pq_qsim(lopsided, graph::all_pairs_geodesic<double>(lopsided), 0, 1, {}); }) ==
        ErrorKind::NotSquare);

  // Square with a diagonal: x = 0, y = 1 share both other vertices.
  const auto k4 = graph::parse_graph("0 1\n0 2\n0 3\n1 2\n1 3\n2 3", graph::GraphFormat::EdgeList);
  const auto dk = graph::all_pairs_geodesic<double>(k4);
  const auto rk = w1_pq_qsim(k4, dk, 0, 1, {});
  CHECK(rk.result.w1 == 0.0);
  CHECK(rk.eigen->kernel_hit);
  CHECK(rk.result.curvature == 1.0);
}

TEST_CASE("w1_pq_qsim matches the Hungarian solver on random instances") {
  testgen::Rng rng(38);
  for (std::size_t p : {2u, 3u, 4u, 5u}) {
    for (int t = 0; t < 10; ++t) {
      const auto c = testgen::random_int_matrix(p, p, rng, 1, 12);
      const double ref = to_double(transport::w1_assignment(c).cost_value);
      const auto q = w1_pq_qsim_local(c.cast<double>(), 1.0, {});
      CHECK(std::fabs(q.result.w1 - ref) <= 1e-8);
    }
  }
}

TEST_CASE("projector picks out exactly the permutation sums") {
  testgen::Rng rng(39);
  const auto c = testgen::random_int_matrix(3, 3, rng, 1, 9).cast<double>();
  const auto enc = local_encoding(c);
  const auto loc = localize_DG(enc, iota_from(0, 3), iota_from(3, 3));
  std::vector<BlockEncoding> ds;
  for (std::size_t i = 1; i <= 3; ++i) ds.push_back(extract_Di(loc, i));
  const auto comp = qsim::be_product(build_Pi(3, PiRoute::Direct), build_DP(ds));
  const Diagonal e = comp.encoded_diagonal();
  const double scale = 6 * 3 * enc.meta.alpha_q;
  std::multiset<long> got, want;
  double min_nonzero = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    got.insert(std::lround(e[k] * scale));
    min_nonzero = std::min(min_nonzero, e[k]);
  }
  std::vector<std::size_t> perm{0, 1, 2};
  do {
    want.insert(std::lround(c(perm[0], 0) + c(perm[1], 1) + c(perm[2], 2)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(got == want);
  const double w1 = to_double(transport::w1_bruteforce(c.cast<Rational>()).cost_value);
  CHECK(std::fabs(min_nonzero * scale - 3 * w1) <= 1e-10);
}

TEST_CASE("purified projector route gives the same W1") {
  testgen::Rng rng(40);
  const auto c = testgen::random_int_matrix(3, 3, rng, 1, 9).cast<double>();
  QsimConfig direct, purified;
  purified.pi_route = PiRoute::Purified;
  CHECK(std::fabs(w1_pq_qsim_local(c, 1.0, direct).result.w1 -
                  w1_pq_qsim_local(c, 1.0, purified).result.w1) <= 1e-10);
}

TEST_CASE("audit ledger stays exact at every stage") {
  testgen::Rng rng(41);
  const auto c = testgen::random_int_matrix(3, 3, rng, 1, 9).cast<double>();
  std::vector<AuditRecord> trace;
  QsimConfig cfg;
  cfg.trace = &trace;
  w1_pq_qsim_local(c, 1.0, cfg);
  std::map<std::string, int> seen;
  for (const auto& r : trace) {
    ++seen[r.stage];
    if (r.ledger_dev) CHECK(*r.ledger_dev <= 1e-12 * 30);
  }
  for (const char* s : {"distance_encoding", "localize", "extract_D1", "extract_D3", "build_DP",
                        "build_Pi", "composite", "min_eigen_power"}) {
    CHECK(seen[s] == 1);
  }
}

TEST_CASE("scale property of the simulated pipelines") {
  testgen::Rng rng(42);
  const auto c = testgen::random_int_matrix(3, 3, rng, 1, 9).cast<double>();
  Matrix<double> scaled = c;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) scaled(i, j) *= 2.5;
  const auto a = w1_pq_qsim_local(c, 1.0, {});
  const auto b = w1_pq_qsim_local(scaled, 2.5, {});
  CHECK(b.meta.alpha_q == doctest::Approx(2.5 * a.meta.alpha_q));
  CHECK(std::fabs(b.result.w1 - 2.5 * a.result.w1) <= 1e-10);
  CHECK(std::fabs(b.result.curvature - a.result.curvature) <= 1e-10);
}
