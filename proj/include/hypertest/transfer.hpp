#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hypertest/common.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/hypercore.hpp"
#include "hypertest/regularity.hpp"

namespace hypertest {

// [W, k]: merges colors (alpha, beta) into alpha. Diagonal mass is kept.
StepGraphon discolor(const StepGraphon& w, int k);

// Random [t]x[k]-coloring of a t-colored graphon on the same partition:
// U^{alpha,beta} = U^alpha p_{alpha,beta} with random symmetric proportions.
StepGraphon random_coloring(const StepGraphon& u, int k, std::uint64_t seed);

// k-coloring of v guided by u_hat: V^{a,b} = V^a [U^{a,b}/U^a, or 1/k where
// U^a = 0], evaluated on the common refinement of both partitions.
StepGraphon transfer_coloring(const StepGraphon& u_hat, const StepGraphon& v, int k);

struct BaseCaseReport {
  std::vector<double> u_hat;      // refined volumes, index (alpha-1) k + (beta-1)
  double tv = 0;                  // exact TV of the two q0-sample distributions
  double max_delta = 0;           // max_alpha |lambda(A^alpha) - lambda(B^alpha)|
  double bound = 0;               // (q0^{k+1}/2) max_delta
  bool bound_holds = true;
  double union_bound = 0;         // q0 (1/2) sum_alpha |lambda(A^alpha) - lambda(B^alpha)|
  bool union_bound_holds = true;
};

// r = 1 transfer. u_vol: lambda(B^alpha) for alpha in [t]; v_hat_vol: the
// refined sample volumes lambda(A^{alpha,beta}) (t*k entries). The result
// splits each B^alpha in the proportions of A^alpha (evenly when empty).
BaseCaseReport base_case_transfer(const std::vector<double>& u_vol, const std::vector<double>& v_hat_vol, int k,
                                  int q0);

struct LiftOptions {
  double delta = 0.1;
  double delta_floor = 0.02;  // regularity parameter is max(theoretical value, floor)
  int q0 = 2;
  Mode reg_mode = Mode::heuristic;
  int reg_max_rounds = 0;     // 0: ceil(1/eps^2)
  std::uint64_t seed = 0;
  bool diagnostics = true;    // heuristic cut distances of intermediate stages
};

struct LiftStage {
  std::string name;
  double value = 0;
  std::string note;
};

struct LiftReport {
  StepGraphon u_hat;
  double delta_theory = 0;
  double delta_used = 0;
  int t_p = 0, t_r = 0, t_s = 0, t_pp = 0;
  std::vector<LiftStage> stages;
  double discolor_error = 0;  // L1 distance between [u_hat,k] and u
  double tv = -1;             // tv(mu(q0,u_hat), mu(q0,v_hat)); -1 when not computed
  std::vector<LiftReport> inner;  // recursive levels (r >= 3)
};

// Colors u (t-colored, r in {2,3}) so that its q0-samples resemble those of
// v_hat, a [t]x[k]-coloring of the sample drawn from u with the latents in
// `sample`.
LiftReport lift_coloring(const StepGraphon& u, const LatentSample& sample, const ColoredHypergraph& v_hat, int k,
                         const LiftOptions& opt = {});

// Witness on [t]x[k]-colored hypergraphs (palette index (alpha-1)k+beta).
using ColoredWitness = std::function<double(const ColoredHypergraph&)>;

struct NdEstimateReport {
  double f_hat = 0;            // max over k-colorings of the sample
  double transferred = 0;      // witness of the rounded coloring of g
  double gap = 0;
  ColoredHypergraph sample_coloring;
  ColoredHypergraph g_coloring;
  std::vector<int> sample_vertices;
  LiftReport lift;
};

NdEstimateReport nd_estimate_pipeline(const ColoredHypergraph& g, int k, const ColoredWitness& witness, int q,
                                      const LiftOptions& opt = {});

}  // namespace hypertest
