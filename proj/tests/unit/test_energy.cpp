#include <doctest.h>

#include <cmath>
#include <functional>

#include "hypertest/cutnorm.hpp"
#include "hypertest/energy.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/rng.hpp"

using namespace hypertest;

namespace {

CouplingArray random_coupling(int r, int k, int q, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(std::pow(q, r));
  std::vector<std::vector<double>> a(k, std::vector<double>(n));
  for (auto& arr : a)
    for (auto& x : arr) x = 2 * rng.uniform() - 1;
  return CouplingArray(r, k, q, a);
}

// (1/n^r) sum over ordered distinct u of J^{color(u)}(class of u minus u_j, j = 1..r).
double brute_energy(const ColoredHypergraph& h, const CouplingArray& j, const std::vector<int>& cls) {
  const int n = h.n(), r = h.r();
  double s = 0;
  std::vector<int> u(r);
  std::function<void(int)> rec = [&](int i) {
    if (i == r) {
      std::vector<int> c(r);
      for (int l = 0; l < r; ++l) {
        std::vector<int> f;
        for (int x = 0; x < r; ++x)
          if (x != l) f.push_back(u[x]);
        std::sort(f.begin(), f.end());
        c[l] = f.empty() ? cls[0] : cls[colex_rank(f)];
      }
      s += j.at(h.color_of_unsorted(u), c);
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (std::find(u.begin(), u.begin() + i, v) != u.begin() + i) continue;
      u[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return s / std::pow(static_cast<double>(n), r);
}

double brute_gse(const ColoredHypergraph& h, const CouplingArray& j) {
  const std::size_t atoms = binomial(h.n(), h.r() - 1);
  std::vector<int> cls(atoms, 0);
  double best = -1e300;
  for (;;) {
    best = std::max(best, brute_energy(h, j, cls));
    std::size_t a = 0;
    while (a < atoms && cls[a] == j.q() - 1) cls[a++] = 0;
    if (a == atoms) break;
    ++cls[a];
  }
  return best;
}

}  // namespace

TEST_CASE("energy values") {
  const ColoredHypergraph k3(3, 2, 1, {1, 1, 1});
  const CouplingArray one(2, 1, 1, {{1.0}});
  CHECK(energy(k3, one, TuplePartition::trivial(3, 1)) == doctest::Approx(6.0 / 9));
  const CouplingArray zero(2, 2, 2, {{0, 0, 0, 0}, {0, 0, 0, 0}});
  CHECK(gse(random_hypergraph(5, 2, 2, 1), zero, Mode::exact).value == 0.0);
  CHECK_THROWS_AS(CouplingArray(2, 1, 1, {{1.5}}), Error);
}

TEST_CASE("energy against the direct sum and linearity") {
  for (int i = 0; i < 10; ++i) {
    const int r = 2 + i % 2;
    const ColoredHypergraph h = random_hypergraph(5, r, 2, 10 + i);
    const CouplingArray j1 = random_coupling(r, 2, 3, 20 + i), j2 = random_coupling(r, 2, 3, 30 + i);
    const TuplePartition p = TuplePartition::random(5, r - 1, 3, 40 + i);
    CHECK(energy(h, j1, p) == doctest::Approx(brute_energy(h, j1, p.classes)).epsilon(1e-12));
    std::vector<std::vector<double>> mix(2);
    for (int a = 0; a < 2; ++a)
      for (std::size_t x = 0; x < j1.arrays()[a].size(); ++x)
        mix[a].push_back(0.3 * j1.arrays()[a][x] - 0.6 * j2.arrays()[a][x]);
    const CouplingArray jm(r, 2, 3, mix);
    CHECK(energy(h, jm, p) == doctest::Approx(0.3 * energy(h, j1, p) - 0.6 * energy(h, j2, p)).epsilon(1e-12));
  }
}

TEST_CASE("exact GSE against partition enumeration; annealing matches") {
  std::vector<Color> cols(binomial(6, 2));
  SubsetTable e(6, 2);
  for (std::size_t i = 0; i < e.size(); ++i) cols[i] = (e[i][0] < 3) != (e[i][1] < 3) ? 1 : 2;
  const ColoredHypergraph k33(6, 2, 2, cols);
  const CouplingArray j(2, 2, 2, {{1, -1, -1, 1}, {0, 0, 0, 0}});
  const double ex = gse(k33, j, Mode::exact).value;
  CHECK(ex == doctest::Approx(brute_gse(k33, j)).epsilon(1e-12));
  CHECK(gse(k33, j, Mode::heuristic, 5).value == doctest::Approx(ex).epsilon(1e-12));
  for (int i = 0; i < 8; ++i) {
    const ColoredHypergraph h = random_hypergraph(4 + i % 2, 2 + (i % 4 == 3), 2, 50 + i);
    const CouplingArray jj = random_coupling(h.r(), 2, 2, 60 + i);
    const double exact = gse(h, jj, Mode::exact).value;
    CHECK(exact == doctest::Approx(brute_gse(h, jj)).epsilon(1e-12));
    const GraphGseResult heur = gse(h, jj, Mode::heuristic, i);
    CHECK(heur.value <= exact + 1e-12);
    CHECK(energy(h, jj, heur.partition) == doctest::Approx(heur.value).epsilon(1e-12));
    CHECK(exact >= energy(h, jj, TuplePartition::random(h.n(), h.r() - 1, 2, 70 + i)) - 1e-12);
  }
}

TEST_CASE("graphon energies") {
  const StepGraphon c = StepGraphon::constant(2, 2, {0.3, 0.7});
  const CouplingArray j(2, 2, 1, {{0.5}, {-0.25}});
  CHECK(gse_graphon(c, j, Mode::exact).value == doctest::Approx(0.3 * 0.5 - 0.7 * 0.25));
  for (int i = 0; i < 5; ++i) {
    const ColoredHypergraph h = random_hypergraph(4, 2, 2, 80 + i);
    const CouplingArray jj = random_coupling(2, 2, 2, 90 + i);
    const VertexGraphon w(h);
    double jmax = 0;
    for (const auto& a : jj.arrays())
      for (double x : a) jmax = std::max(jmax, std::abs(x));
    CHECK(std::abs(gse_graphon(w.step(), jj, Mode::exact).value - gse(h, jj, Mode::exact).value) <=
          w.iota_measure() * jmax + 1e-12);
  }
}

TEST_CASE("reduction arrays") {
  const std::vector<double> b0 = make_b0(2);
  CHECK(b0.size() == 16);
  CHECK(std::count(b0.begin(), b0.end(), 1.0) == 4);
  const std::vector<int> a{1};
  const std::vector<double> y{0.5, -1};
  const CouplingArray ja = make_reduction_arrays(a, 1, 2, y);
  for (int alpha = 1; alpha <= 2; ++alpha)
    for (std::size_t x = 0; x < 16; ++x) CHECK(ja.at_index(alpha, x) == doctest::Approx(y[alpha - 1] * b0[x]));
  // Maximizing the reduced energy over sign arrays recovers the sup of cut-Q norms.
  for (int i = 0; i < 3; ++i) {
    const SymArray arr = random_sym_array(2, 4, 100 + i);
    const std::vector<CutForm> forms{cut_form(arr)};
    const EnergyForm ef = energy_form(std::span<const CutForm>(forms));
    double best = -1;
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<int> signs(4);
      for (int s = 0; s < 4; ++s) signs[s] = (mask >> s & 1) ? -1 : 1;
      best = std::max(best, gse_form(ef, make_reduction_arrays(signs, 2, 2, std::vector<double>{1.0}), Mode::exact).value);
    }
    CHECK(best == doctest::Approx(sup_cutnorm_over_partitions(arr, 2).value).epsilon(1e-12));
  }
}

TEST_CASE("concentration experiment") {
  const ColoredHypergraph h = random_hypergraph(8, 2, 2, 3);
  const CouplingArray j = random_coupling(2, 2, 2, 4);
  const ConcentrationReport full = concentration_experiment(h, j, 8, 10, 5);
  CHECK(full.iqr == doctest::Approx(0.0).epsilon(1e-12));
  const ConcentrationReport rep = concentration_experiment(h, j, 5, 40, 6);
  CHECK(rep.values.size() == 40);
  CHECK(rep.q1 <= rep.median);
  CHECK(rep.median <= rep.q3);
  for (std::size_t i = 0; i < rep.deviations.size(); ++i) {
    CHECK(rep.tail_freq[i] >= 0);
    CHECK(rep.tail_freq[i] <= 1);
    CHECK(rep.azuma_bound[i] == doctest::Approx(2 * std::exp(-rep.deviations[i] * rep.deviations[i] * 5 / 32)));
  }
}
