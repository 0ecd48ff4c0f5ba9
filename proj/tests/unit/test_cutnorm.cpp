#include <doctest.h>

#include <cmath>

#include "hypertest/cutnorm.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/rng.hpp"

using namespace hypertest;

namespace {

// Atom of face j of u: colex rank of u without its j-th entry, or -1 on repeats.
long face_atom(const std::vector<int>& u, int j) {
  std::vector<int> f;
  for (int i = 0; i < static_cast<int>(u.size()); ++i)
    if (i != j) f.push_back(u[i]);
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) return -1;
  return f.empty() ? 0 : static_cast<long>(colex_rank(f));
}

void for_each_tuple(int r, int n, const std::function<void(const std::vector<int>&, std::size_t)>& fn) {
  std::vector<int> u(r, 0);
  std::size_t idx = 0;
  for (;;) {
    fn(u, idx++);
    int l = r - 1;
    while (l >= 0 && u[l] == n - 1) u[l--] = 0;
    if (l < 0) return;
    ++u[l];
  }
}

// max over sets S_j of admissible atoms (allowed[j]) of |sum A(u) prod [face_j(u) in S_j]| / n^r.
double brute_restricted(const SymArray& a, const std::vector<std::vector<long>>& allowed) {
  const int r = a.r(), n = a.n();
  std::vector<std::size_t> masks(r, 0);
  double best = 0;
  for (;;) {
    double s = 0;
    for_each_tuple(r, n, [&](const std::vector<int>& u, std::size_t idx) {
      for (int j = 0; j < r; ++j) {
        const long at = face_atom(u, j);
        const auto& al = allowed[j];
        const auto pos = std::find(al.begin(), al.end(), at);
        if (at < 0 || pos == al.end() || !(masks[j] >> (pos - al.begin()) & 1)) return;
      }
      s += a.values()[idx];
    });
    best = std::max(best, std::abs(s));
    int j = r - 1;
    while (j >= 0 && masks[j] + 1 == (std::size_t{1} << allowed[j].size())) masks[j--] = 0;
    if (j < 0) break;
    ++masks[j];
  }
  return best / std::pow(static_cast<double>(n), r);
}

double brute_cutnorm(const SymArray& a) {
  const long atoms = static_cast<long>(binomial(a.n(), a.r() - 1));
  std::vector<long> all(atoms);
  for (long i = 0; i < atoms; ++i) all[i] = i;
  return brute_restricted(a, std::vector<std::vector<long>>(a.r(), all));
}

// Common sets S_j for all class tuples; the absolute values are summed per tuple.
double brute_cutnorm_p(const SymArray& a, const TuplePartition& p) {
  const int r = a.r(), n = a.n();
  const std::size_t atoms = p.classes.size();
  std::size_t tuples = 1;
  for (int j = 0; j < r; ++j) tuples *= static_cast<std::size_t>(p.t);
  std::vector<std::size_t> masks(r, 0);
  double best = 0;
  for (;;) {
    std::vector<double> per(tuples, 0.0);
    for_each_tuple(r, n, [&](const std::vector<int>& u, std::size_t idx) {
      std::size_t cell = 0;
      for (int j = 0; j < r; ++j) {
        const long at = face_atom(u, j);
        if (at < 0 || !(masks[j] >> at & 1)) return;
        cell = cell * static_cast<std::size_t>(p.t) + static_cast<std::size_t>(p.classes[at]);
      }
      per[cell] += a.values()[idx];
    });
    double s = 0;
    for (double x : per) s += std::abs(x);
    best = std::max(best, s);
    int j = r - 1;
    while (j >= 0 && masks[j] + 1 == (std::size_t{1} << atoms)) masks[j--] = 0;
    if (j < 0) break;
    ++masks[j];
  }
  return best / std::pow(static_cast<double>(n), r);
}

SymArray adjacency(const ColoredHypergraph& g) { return SymArray::from_color(g, 1); }

}  // namespace

TEST_CASE("exact cut norm against set enumeration") {
  for (int i = 0; i < 30; ++i) {
    const SymArray a = random_sym_array(2, 4, 500 + i, i % 2 == 0);
    CHECK(cutnorm(a, Mode::exact).value == doctest::Approx(brute_cutnorm(a)).epsilon(1e-12));
  }
  for (int i = 0; i < 3; ++i) {
    const SymArray a = random_sym_array(3, 4, 600 + i);
    CHECK(cutnorm(a, Mode::exact).value == doctest::Approx(brute_cutnorm(a)).epsilon(1e-12));
  }
}

TEST_CASE("closed-form cut norms") {
  CHECK(cutnorm(SymArray::zeros(2, 4)).value == 0.0);
  CHECK(cutnorm(SymArray::zeros(2, 4)).witness.sets.size() <= 2);
  const SymArray ones = adjacency(complete_graph(4));
  const CutResult c = cutnorm(ones);
  CHECK(c.value == doctest::Approx(12.0 / 16));
  CHECK(cutnorm(ones, Mode::heuristic, 1).value == doctest::Approx(12.0 / 16));
  const SymArray two_k2 = adjacency(ColoredHypergraph(4, 2, 2, {1, 2, 2, 2, 2, 1}));
  const SymArray c4 = adjacency(cycle_graph(4));
  const SymArray diff = two_k2 - c4;
  CHECK(cutnorm(diff).value == doctest::Approx(brute_cutnorm(diff)).epsilon(1e-12));
  CHECK(cutnorm(SymArray::zeros(2, 4), Mode::heuristic, 3).value == 0.0);
}

TEST_CASE("heuristic never exceeds exact") {
  for (int i = 0; i < 100; ++i) {
    const SymArray a = random_sym_array(2, 5, 700 + i);
    CHECK(cutnorm(a, Mode::heuristic, i).value <= cutnorm(a, Mode::exact).value + 1e-12);
  }
}

TEST_CASE("cut-P norm against enumeration and the norm chain") {
  for (int i = 0; i < 20; ++i) {
    const int r = 2 + (i % 4 == 3);
    const SymArray a = random_sym_array(r, 4, 800 + i);
    const TuplePartition p = TuplePartition::random(4, r - 1, 1 + i % 3, 900 + i);
    const double cp = cutnorm_p(a, p).value;
    if (r == 2) CHECK(cp == doctest::Approx(brute_cutnorm_p(a, p)).epsilon(1e-12));
    CHECK(cp >= cutnorm(a).value - 1e-12);
    double l1 = 0;
    for (double x : a.values()) l1 += std::abs(x);
    CHECK(cp <= l1 / std::pow(4.0, r) + 1e-12);
    CHECK(cutnorm_p(a, p, Mode::heuristic, i).value <= cp + 1e-12);
  }
  const SymArray a = random_sym_array(2, 4, 1);
  CHECK(cutnorm_p(a, TuplePartition::trivial(4, 1)).value == doctest::Approx(cutnorm(a).value));
}

TEST_CASE("cut distances") {
  const ColoredHypergraph g = random_hypergraph(5, 2, 2, 1), h = random_hypergraph(5, 2, 2, 2),
                          k = random_hypergraph(5, 2, 2, 3);
  CHECK(cut_distance(g, g).value == 0.0);
  const double gh = cut_distance(g, h).value, hk = cut_distance(h, k).value, gk = cut_distance(g, k).value;
  CHECK(gh == doctest::Approx(cut_distance(h, g).value));
  CHECK(gk <= gh + hk + 1e-12);
  // Graph and vertex-graphon distances agree.
  CHECK(cut_distance(VertexGraphon(g).step(), VertexGraphon(h).step()).value == doctest::Approx(gh).epsilon(1e-12));
  const StepGraphon u = random_step_graphon(2, 2, 3, 2, 4);
  CHECK(cut_distance(u, u).value == 0.0);
}

TEST_CASE("sup over partitions") {
  for (int i = 0; i < 20; ++i) {
    const SymArray a = random_sym_array(2, 4, 1000 + i);
    const double s1 = sup_cutnorm_over_partitions(a, 1).value;
    const double s2 = sup_cutnorm_over_partitions(a, 2).value;
    const double s3 = sup_cutnorm_over_partitions(a, 3).value;
    CHECK(s1 == doctest::Approx(cutnorm(a).value));
    CHECK(s2 >= s1 - 1e-12);
    CHECK(s3 >= s2 - 1e-12);
    // The maximizing partition attains the value.
    const SupResult sup = sup_cutnorm_over_partitions(a, 2);
    int t = 0;
    for (int c : sup.atom_class) t = std::max(t, c + 1);
    CHECK(cutnorm_p(a, TuplePartition(4, 1, t, sup.atom_class)).value == doctest::Approx(sup.value));
  }
}

TEST_CASE("array validation") {
  CHECK_THROWS_AS(SymArray(2, 2, {0, 1, 2, 0}), Error);
  CHECK_THROWS_AS(SymArray(2, 2, {0, 1, 1}), Error);
  SymArray z = SymArray::zeros(3, 3);
  const int u[3] = {0, 1, 2}, v[3] = {2, 0, 1};
  z.set_symmetric(u, 0.5);
  CHECK(z.at(v) == 0.5);
}
