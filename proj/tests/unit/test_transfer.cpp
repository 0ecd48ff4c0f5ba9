#include <doctest.h>

#include <cmath>

#include "hypertest/density.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/rng.hpp"
#include "hypertest/testers.hpp"
#include "hypertest/transfer.hpp"

using namespace hypertest;

namespace {

// Exact TV of two product measures on q0 independent draws.
double product_tv(const std::vector<double>& a, const std::vector<double>& b, int q0) {
  const std::size_t m = a.size();
  std::size_t total = 1;
  for (int i = 0; i < q0; ++i) total *= m;
  double s = 0;
  for (std::size_t x = 0; x < total; ++x) {
    double pa = 1, pb = 1;
    std::size_t y = x;
    for (int i = 0; i < q0; ++i) {
      pa *= a[y % m];
      pb *= b[y % m];
      y /= m;
    }
    s += std::abs(pa - pb);
  }
  return s / 2;
}

}  // namespace

TEST_CASE("discolor inverts the colorings") {
  for (int i = 0; i < 5; ++i) {
    const int r = 2 + i % 2;
    const StepGraphon u = random_step_graphon(r, 2, 3, 2, 10 + i);
    const StepGraphon uh = random_coloring(u, 3, 20 + i);
    CHECK(uh.k() == 6);
    CHECK(arrays_symmetric(uh));
    CHECK(l1_distance(discolor(uh, 3), u) == doctest::Approx(0.0).epsilon(1e-12));
    const StepGraphon v = random_step_graphon(r, 2, 4, 3, 30 + i);
    const StepGraphon vh = transfer_coloring(uh, v, 3);
    CHECK(l1_distance(discolor(vh, 3), v) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(l1_distance(transfer_coloring(uh, u, 3), uh) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("empty source colors split evenly") {
  const StepGraphon uh = StepGraphon::constant(2, 4, {0, 0, 0.5, 0.5});
  const StepGraphon v = StepGraphon::constant(2, 2, {0.6, 0.4});
  const StepGraphon vh = transfer_coloring(uh, v, 2);
  const std::vector<int> cls{0, 0};
  CHECK(vh.at(1, cls) == doctest::Approx(0.3));
  CHECK(vh.at(2, cls) == doctest::Approx(0.3));
  CHECK(vh.at(3, cls) == doctest::Approx(0.2));
  CHECK(vh.at(4, cls) == doctest::Approx(0.2));
}

TEST_CASE("base case") {
  const std::vector<double> vol{0.25, 0.75};
  const BaseCaseReport same = base_case_transfer(vol, {0.05, 0.2, 0.5, 0.25}, 2, 2);
  CHECK(same.tv == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(same.u_hat[0] == doctest::Approx(0.05));
  CHECK(same.u_hat[3] == doctest::Approx(0.25));
  const BaseCaseReport empty = base_case_transfer({0.5, 0.5}, {0, 0, 0.4, 0.6}, 2, 1);
  CHECK(empty.u_hat[0] == doctest::Approx(0.25));
  CHECK(empty.u_hat[1] == doctest::Approx(0.25));
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const int t = 1 + i % 3, k = 1 + (i / 3) % 3, q0 = 1 + i % 3;
    std::vector<double> u(t), vh(t * k);
    double su = 0, sv = 0;
    for (auto& x : u) su += x = rng.uniform() + 0.01;
    for (auto& x : vh) sv += x = rng.uniform() + 0.01;
    for (auto& x : u) x /= su;
    for (auto& x : vh) x /= sv;
    const BaseCaseReport rep = base_case_transfer(u, vh, k, q0);
    CHECK(rep.tv == doctest::Approx(product_tv(rep.u_hat, vh, q0)).epsilon(1e-12));
    for (int a = 0; a < t; ++a) {
      double s = 0;
      for (int b = 0; b < k; ++b) s += rep.u_hat[a * k + b];
      CHECK(s == doctest::Approx(u[a]).epsilon(1e-12));
    }
    CHECK(rep.union_bound_holds);
  }
}

TEST_CASE("lift keeps the discoloring") {
  const StepGraphon uh0 = random_coloring(random_step_graphon(2, 2, 4, 2, 7), 2, 8);
  const StepGraphon u = discolor(uh0, 2);
  const LatentSample s = sample_graphon_latent(uh0, 40, 9);
  const ColoredHypergraph v_hat = s.graph.to_hypergraph();
  LatentSample su;
  su.latents = s.latents;
  su.graph = SampledColoredGraph(discolor(v_hat, 2));
  LiftOptions opt;
  opt.seed = 3;
  const LiftReport rep = lift_coloring(u, su, v_hat, 2, opt);
  CHECK(rep.discolor_error == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.u_hat.k() == 4);
  CHECK(rep.tv >= 0);
  CHECK(rep.tv <= 1);
  CHECK(rep.delta_used >= opt.delta_floor);
}

TEST_CASE("nd pipeline brackets") {
  const ParameterFn w = signed_color_density(2);
  for (int i = 0; i < 4; ++i) {
    const ColoredHypergraph g = random_simple_graph(5, 2, 0.5, 40 + i);
    const double f = nd_parameter(w, g, SearchMode::exhaustive, 0).value;
    LiftOptions opt;
    opt.seed = i;
    opt.diagnostics = false;
    const NdEstimateReport low = nd_estimate_pipeline(g, 2, w.fn, 4, opt);
    CHECK(low.transferred <= f + 1e-9);
    CHECK(low.gap == doctest::Approx(std::abs(low.f_hat - low.transferred)));
    const NdEstimateReport full = nd_estimate_pipeline(g, 2, w.fn, 5, opt);
    CHECK(full.f_hat == doctest::Approx(f));
  }
}
