#include "suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hypertest/cutnorm.hpp"
#include "hypertest/density.hpp"
#include "hypertest/energy.hpp"
#include "hypertest/graphon.hpp"
#include "hypertest/regularity.hpp"
#include "hypertest/rng.hpp"
#include "hypertest/testers.hpp"
#include "hypertest/transfer.hpp"

namespace hypertest::acceptance {

namespace {

// Pinned tolerances.
constexpr double kTol = 1e-9;        // exact identities and inequalities
constexpr double kEqualTol = 1e-9;   // heuristic equals exact
constexpr double kRuntimeC1 = 60.0;  // seconds
constexpr double kRuntimeC11 = 600.0;
constexpr double kLiftTvMax = 0.15;

struct Counts {
  int desk, smoke;
  int operator()(Level l) const { return l == Level::desk ? desk : smoke; }
};

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

CouplingArray random_coupling(int r, int k, int q, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t n = 1;
  for (int i = 0; i < r; ++i) n *= static_cast<std::size_t>(q);
  std::vector<std::vector<double>> a(k, std::vector<double>(n));
  for (auto& arr : a)
    for (auto& x : arr) x = 2 * rng.uniform() - 1;
  return CouplingArray(r, k, q, std::move(a));
}

// C1: counting lemma on random pairs of 2-colored step graphons.
CriterionResult c1(Level level, std::uint64_t seed) {
  const int pairs = Counts{50, 5}(level);
  const auto start = std::chrono::steady_clock::now();
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    const int tu = 1 + i % 3, tw = 1 + (i / 3) % 3;
    const StepGraphon u = random_step_graphon(2, 2, 4, tu, mix_seed(seed, 2 * i));
    const StepGraphon w = random_step_graphon(2, 2, 4, tw, mix_seed(seed, 2 * i + 1));
    const CountingReport rep = counting_bound_check(u, w, 3);
    violations += rep.violations;
    worst = std::min(worst, rep.worst_slack);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CriterionResult r;
  r.pass = violations == 0 && secs < kRuntimeC1;
  r.detail = std::to_string(pairs) + " pairs, violations=" + std::to_string(violations) +
             ", min slack=" + fmt(worst) + ", " + fmt(secs, 3) + "s (limit " + fmt(kRuntimeC1) + "s)";
  return r;
}

// Largest |t(F,G) - t(F,W_G)| over iota-free F on [q].
double embedding_gap(const ColoredHypergraph& g, int q) {
  const SampleDistribution dg = sample_distribution(g, q);
  const SampleDistribution dw = sample_distribution(VertexGraphon(g), q);
  double gap = 0;
  for (std::size_t i = 0; i < dg.support_size(); ++i) {
    if (dg.decode(i).has_iota()) continue;
    gap = std::max(gap, std::abs(dg.prob(i) - dw.prob(i)));
  }
  return gap;
}

// C2: embedding bound, all graphs on 6 vertices and a corpus on 10.
CriterionResult c2(Level level, std::uint64_t seed) {
  const int q = 3;
  const double c = static_cast<double>(binomial(q, 2));
  int violations = 0;
  std::size_t checked = 0;
  double worst6 = 0, worst10 = 0;
  {
    const int n = 6;
    const double bound = c / (n - c);
    const std::size_t edges = binomial(n, 2);
    const std::size_t total = level == Level::desk ? (std::size_t{1} << edges) : 64;
    std::vector<double> gaps(total);
    parallel_for(total, [&](std::size_t mask) {
      std::vector<Color> cols(edges);
      for (std::size_t e = 0; e < edges; ++e) cols[e] = (mask >> e & 1) ? 1 : 2;
      gaps[mask] = embedding_gap(ColoredHypergraph(n, 2, 2, cols), q);
    });
    for (double g : gaps) {
      worst6 = std::max(worst6, g);
      violations += g > bound + kTol;
    }
    checked += total;
  }
  {
    const int n = 10;
    const double bound = c / (n - c);
    std::vector<ColoredHypergraph> corpus{complete_graph(n), empty_graph(n), cycle_graph(n)};
    const int random = Counts{300, 10}(level);
    for (int i = 0; i < random; ++i)
      corpus.push_back(random_simple_graph(n, 2, 0.1 + 0.8 * (i % 9) / 8.0, mix_seed(seed, 1000 + i)));
    std::vector<double> gaps(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) { gaps[i] = embedding_gap(corpus[i], q); });
    for (double g : gaps) {
      worst10 = std::max(worst10, g);
      violations += g > bound + kTol;
    }
    checked += corpus.size();
  }
  CriterionResult r;
  r.pass = violations == 0;
  r.detail = std::to_string(checked) + " graphs, violations=" + std::to_string(violations) + ", max gap n=6: " +
             fmt(worst6) + " (bound 1), n=10: " + fmt(worst10) + " (bound " + fmt(3.0 / 7) + ")";
  return r;
}

// Brute-force max over all events of the union support.
double brute_max_event(const SampleDistribution& a, const SampleDistribution& b) {
  std::vector<double> diff;
  for (std::size_t i = 0; i < a.support_size(); ++i)
    if (a.prob(i) != 0 || b.prob(i) != 0) diff.push_back(a.prob(i) - b.prob(i));
  const std::size_t m = diff.size();
  double best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) s += diff[i];
    best = std::max(best, std::abs(s));
  }
  return best;
}

// C3: half-sum TV equals the max-event TV.
CriterionResult c3(Level level, std::uint64_t seed) {
  const int pairs = Counts{100, 10}(level);
  int mismatches = 0, brute = 0;
  double worst = 0;
  for (int i = 0; i < pairs; ++i) {
    Rng rng(mix_seed(seed, i));
    const int r = 1 + static_cast<int>(rng.below(3));
    const int q = r + static_cast<int>(rng.below(static_cast<std::uint64_t>(4 - r)));
    const int k = 1 + static_cast<int>(rng.below(2));
    SampleDistribution a, b;
    if (r == 1) {
      std::vector<double> pa(k), pb(k);
      double sa = 0, sb = 0;
      for (int c = 0; c < k; ++c) {
        sa += pa[c] = rng.uniform() + 1e-3;
        sb += pb[c] = rng.uniform() + 1e-3;
      }
      for (int c = 0; c < k; ++c) {
        pa[c] /= sa;
        pb[c] /= sb;
      }
      a = sample_distribution(StepGraphon::constant(1, k, pa), q);
      b = sample_distribution(StepGraphon::constant(1, k, pb), q);
    } else if (i % 2 == 0) {
      a = sample_distribution(random_step_graphon(r, k, 2, 2, rng.next()), q);
      b = sample_distribution(random_step_graphon(r, k, 2, 2, rng.next()), q);
    } else {
      const int n = q + 2;
      a = sample_distribution(random_hypergraph(n, r, k, rng.next()), q);
      b = sample_distribution(random_hypergraph(n, r, k, rng.next()), q);
    }
    const TvResult tv = tv_distance(a, b);
    // Mass of the reported event, recomputed from scratch.
    double ea = 0, eb = 0;
    for (std::size_t idx : tv.event) {
      ea += a.prob(idx);
      eb += b.prob(idx);
    }
    double gap = std::max(std::abs(tv.half_sum - tv.max_event), std::abs(tv.half_sum - std::abs(ea - eb)));
    std::size_t support = 0;
    for (std::size_t j = 0; j < a.support_size(); ++j) support += a.prob(j) != 0 || b.prob(j) != 0;
    if (support <= 20) {
      gap = std::max(gap, std::abs(tv.half_sum - brute_max_event(a, b)));
      ++brute;
    }
    worst = std::max(worst, gap);
    mismatches += gap > kTol;
  }
  CriterionResult r;
  r.pass = mismatches == 0;
  r.detail = std::to_string(pairs) + " pairs (" + std::to_string(brute) +
             " with brute-force events), mismatches=" + std::to_string(mismatches) + ", max |diff|=" + fmt(worst);
  return r;
}

// C4: cut-norm heuristic against exact enumeration.
CriterionResult c4(Level level, std::uint64_t seed) {
  struct Batch {
    int r, count;
    double need;
  };
  const Batch batches[] = {{2, Counts{200, 10}(level), 0.95}, {3, Counts{50, 5}(level), 0.85}};
  bool pass = true;
  std::string detail;
  for (const auto& b : batches) {
    std::vector<char> equal(b.count), above(b.count);
    parallel_for(b.count, [&](std::size_t i) {
      const SymArray a = random_sym_array(b.r, 4, mix_seed(seed, b.r * 1000 + i));
      const double ex = cutnorm(a, Mode::exact).value;
      const double he = cutnorm(a, Mode::heuristic, mix_seed(seed, b.r * 1000 + i + 500)).value;
      equal[i] = std::abs(ex - he) <= kEqualTol;
      above[i] = he > ex + kEqualTol;
    });
    const int eq = static_cast<int>(std::count(equal.begin(), equal.end(), 1));
    const int ab = static_cast<int>(std::count(above.begin(), above.end(), 1));
    const double frac = static_cast<double>(eq) / b.count;
    pass = pass && frac >= b.need && ab == 0;
    detail += (detail.empty() ? "" : "; ") + std::string("r=") + std::to_string(b.r) + ": " + std::to_string(eq) +
              "/" + std::to_string(b.count) + " equal (need " + fmt(b.need) + "), above exact=" + std::to_string(ab);
  }
  return {0, "", pass, detail, 0};
}

// C5: cut norm <= cut-P norm <= normalized 1-norm.
CriterionResult c5(Level level, std::uint64_t seed) {
  const int count = Counts{200, 10}(level);
  std::vector<char> bad(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    const int r = 2 + static_cast<int>(rng.below(2));
    const int n = r == 2 ? 3 + static_cast<int>(rng.below(2)) : 4;
    const int t = 1 + static_cast<int>(rng.below(3));
    const SymArray a = random_sym_array(r, n, rng.next(), rng.coin());
    const TuplePartition p = TuplePartition::random(n, r - 1, t, rng.next());
    const double c = cutnorm(a, Mode::exact).value;
    const double cp = cutnorm_p(a, p, Mode::exact).value;
    double l1 = 0;
    for (double x : a.values()) l1 += std::abs(x);
    l1 /= std::pow(static_cast<double>(n), r);
    bad[i] = c > cp + kTol || cp > l1 + kTol;
  });
  const int v = static_cast<int>(std::count(bad.begin(), bad.end(), 1));
  return {0, "", v == 0, std::to_string(count) + " instances, violations=" + std::to_string(v), 0};
}

// C6: max over sign arrays of the reduced energy equals the sup of cut-Q norms.
CriterionResult c6(Level level, std::uint64_t seed) {
  const int count = Counts{20, 3}(level);
  const int r = 2, t = 2;
  const std::size_t patterns = std::size_t{1} << (t * t);
  int mismatches = 0;
  double worst = 0;
  for (int i = 0; i < count; ++i) {
    const int n = 3 + i % 3;
    const SymArray a = random_sym_array(r, n, mix_seed(seed, i));
    const std::vector<CutForm> forms{cut_form(a)};
    const double sup = sup_cutnorm_over_forms(forms, t, Mode::exact).value;
    const EnergyForm ef = energy_form(std::span<const CutForm>(forms));
    const std::vector<double> y{1.0};
    std::vector<double> vals(patterns);
    parallel_for(patterns, [&](std::size_t mask) {
      std::vector<int> signs(t * t);
      for (int s = 0; s < t * t; ++s) signs[s] = (mask >> s & 1) ? -1 : 1;
      vals[mask] = gse_form(ef, make_reduction_arrays(signs, t, r, y), Mode::exact).value;
    });
    const double best = *std::max_element(vals.begin(), vals.end());
    worst = std::max(worst, std::abs(best - sup));
    mismatches += std::abs(best - sup) > kTol;
  }
  return {0, "", mismatches == 0,
          std::to_string(count) + " instances (n=3..5, t=2), mismatches=" + std::to_string(mismatches) +
              ", max |diff|=" + fmt(worst),
          0};
}

// C7: GSE sampling concentration and exact-vs-anneal agreement.
CriterionResult c7(Level level, std::uint64_t seed) {
  const int trials = Counts{200, 20}(level);
  const ColoredHypergraph h = random_hypergraph(60, 2, 2, mix_seed(seed, 0));
  const CouplingArray j = random_coupling(2, 2, 2, mix_seed(seed, 1));
  const ConcentrationReport small = concentration_experiment(h, j, 10, trials, mix_seed(seed, 2));
  const ConcentrationReport large = concentration_experiment(h, j, 30, trials, mix_seed(seed, 3));
  const bool iqr_ok = large.iqr <= small.iqr;
  const int corpus = Counts{50, 5}(level);
  std::vector<char> agree(corpus);
  parallel_for(corpus, [&](std::size_t i) {
    const int n = 3 + static_cast<int>(i % 4);
    const ColoredHypergraph g = random_hypergraph(n, 2, 2, mix_seed(seed, 100 + i));
    const CouplingArray jj = random_coupling(2, 2, 2, mix_seed(seed, 200 + i));
    const double ex = gse(g, jj, Mode::exact).value;
    const double he = gse(g, jj, Mode::heuristic, mix_seed(seed, 300 + i)).value;
    agree[i] = std::abs(ex - he) <= kEqualTol;
  });
  const int ag = static_cast<int>(std::count(agree.begin(), agree.end(), 1));
  return {0, "", iqr_ok && ag == corpus,
          "IQR n'=10: " + fmt(small.iqr) + ", n'=30: " + fmt(large.iqr) + " (" + std::to_string(trials) +
              " trials); exact=anneal on " + std::to_string(ag) + "/" + std::to_string(corpus),
          0};
}

// C8: weak regularity with an exact check of the final residual.
CriterionResult c8(Level level, std::uint64_t seed) {
  const int count = Counts{30, 3}(level);
  const double eps = 0.25;
  const int t = 2;
  const int round_cap = static_cast<int>(std::ceil(1 / (eps * eps)));
  const ClassCountBound bound = class_count_bound(2, 2, eps, t);
  std::vector<std::string> fails(count);
  std::vector<double> exact(count);
  std::vector<int> classes(count), rounds(count);
  parallel_for(count, [&](std::size_t i) {
    const StepGraphon w = random_step_graphon(2, 2, 6, 4, mix_seed(seed, i));
    RegularityOptions opt;
    opt.seed = mix_seed(seed, 1000 + i);
    const RegularityResult res = weak_regularize(w, eps, t, opt);
    rounds[i] = res.rounds;
    classes[i] = res.p.t();
    const GraphonCutForms forms = graphon_cut_forms(w, res.v);
    exact[i] = sup_cutnorm_over_forms(forms.per_color, res.p.t() * t, Mode::exact).value;
    if (res.rounds > round_cap) fails[i] = "rounds";
    else if (!bound.admits(res.p.t())) fails[i] = "classes";
    else if (exact[i] > eps + kTol) fails[i] = "residual";
  });
  int bad = 0;
  std::string first;
  for (int i = 0; i < count; ++i)
    if (!fails[i].empty()) {
      ++bad;
      if (first.empty()) first = " first failure: instance " + std::to_string(i) + " (" + fails[i] + ")";
    }
  return {0, "", bad == 0,
          std::to_string(count) + " graphons, max rounds=" + std::to_string(*std::max_element(rounds.begin(), rounds.end())) +
              " (cap " + std::to_string(round_cap) + "), max classes=" +
              std::to_string(*std::max_element(classes.begin(), classes.end())) + ", max exact residual=" +
              fmt(*std::max_element(exact.begin(), exact.end())) + ", failures=" + std::to_string(bad) + first,
          0};
}

// C9: transferred-coloring distance bound.
CriterionResult c9(Level level, std::uint64_t seed) {
  const int count = Counts{50, 5}(level);
  std::vector<double> slack(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    const int t = 1 + static_cast<int>(rng.below(2)), k = 2 + static_cast<int>(rng.below(2));
    const StepGraphon base = random_step_graphon(2, t, 3, 2, rng.next());
    const StepGraphon u_hat = random_coloring(base, k, rng.next());
    const StepGraphon v = random_step_graphon(2, t, 3, 2, rng.next());
    const StepGraphon v_hat = transfer_coloring(u_hat, v, k);
    const GridPartition& p = v_hat.partition();
    const double lhs = cut_distance(u_hat, v_hat, Mode::exact, 0, &p).value;
    const double rhs = cut_distance(discolor(u_hat, k), v, Mode::exact, 0, &p).value;
    slack[i] = k * rhs - lhs;
  });
  const int v = static_cast<int>(std::count_if(slack.begin(), slack.end(), [](double s) { return s < -kTol; }));
  return {0, "", v == 0,
          std::to_string(count) + " instances, violations=" + std::to_string(v) +
              ", min slack=" + fmt(*std::min_element(slack.begin(), slack.end())),
          0};
}

// Direct TV of two i.i.d. product distributions over q0 draws.
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

std::vector<double> random_simplex(Rng& rng, int m) {
  std::vector<double> v(m);
  double s = 0;
  for (auto& x : v) s += x = rng.uniform() + 1e-3;
  for (auto& x : v) x /= s;
  return v;
}

// C10: base case r = 1.
CriterionResult c10(Level level, std::uint64_t seed) {
  const int count = Counts{100, 10}(level);
  int closed_bad = 0, bound_bad = 0, union_bad = 0;
  int bound_bad_q[4] = {0, 0, 0, 0}, per_q[4] = {0, 0, 0, 0};
  for (int i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed, i));
    const int t = 1 + static_cast<int>(rng.below(3)), k = 1 + static_cast<int>(rng.below(3));
    const int q0 = 1 + i % 3;
    const std::vector<double> u = random_simplex(rng, t), vh = random_simplex(rng, t * k);
    const BaseCaseReport rep = base_case_transfer(u, vh, k, q0);
    closed_bad += std::abs(rep.tv - product_tv(rep.u_hat, vh, q0)) > kTol;
    ++per_q[q0];
    if (!rep.bound_holds) {
      ++bound_bad;
      ++bound_bad_q[q0];
    }
    union_bad += !rep.union_bound_holds;
  }
  std::string d = std::to_string(count) + " vectors, closed-form mismatches=" + std::to_string(closed_bad) +
                  ", bound violations=" + std::to_string(bound_bad) + " (q0=1: " + std::to_string(bound_bad_q[1]) +
                  "/" + std::to_string(per_q[1]) + ", q0=2: " + std::to_string(bound_bad_q[2]) + "/" +
                  std::to_string(per_q[2]) + ", q0=3: " + std::to_string(bound_bad_q[3]) + "/" +
                  std::to_string(per_q[3]) + "), union-bound q0*sum|d|/2 violations=" + std::to_string(union_bad);
  return {0, "", closed_bad == 0 && bound_bad == 0, d, 0};
}

// C11: end-to-end lift at r = 2 with a planted coloring.
CriterionResult c11(Level level, std::uint64_t seed) {
  const int seeds = Counts{20, 3}(level);
  const int k = 2, q = 200, q0 = 2;
  const auto start = std::chrono::steady_clock::now();
  const StepGraphon u_hat0 = random_coloring(random_step_graphon(2, 2, 4, 2, mix_seed(seed, 0)), k, mix_seed(seed, 1));
  const StepGraphon u = discolor(u_hat0, k);
  std::vector<double> tvs(seeds);
  parallel_for(seeds, [&](std::size_t i) {
    const LatentSample s = sample_graphon_latent(u_hat0, q, mix_seed(seed, 100 + i));
    const ColoredHypergraph v_hat = s.graph.to_hypergraph();
    LatentSample su;
    su.latents = s.latents;
    su.graph = SampledColoredGraph(discolor(v_hat, k));
    LiftOptions opt;
    opt.q0 = q0;
    opt.seed = mix_seed(seed, 200 + i);
    opt.diagnostics = false;
    tvs[i] = lift_coloring(u, su, v_hat, k, opt).tv;
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<double> sorted = tvs;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2;
  return {0, "", median <= kLiftTvMax && secs < kRuntimeC11,
          "median tv over " + std::to_string(seeds) + " seeds=" + fmt(median) + " (limit " + fmt(kLiftTvMax) +
              "), max=" + fmt(sorted.back()) + ", " + fmt(secs, 3) + "s",
          0};
}

// C12: exhaustive f(G) between the transferred value and f_hat + gap.
CriterionResult c12(Level level, std::uint64_t seed) {
  const int count = Counts{20, 3}(level);
  const int k = 2;
  const ParameterFn witness = signed_color_density(k);
  std::vector<std::string> fails(count);
  parallel_for(count, [&](std::size_t i) {
    const int n = 4 + static_cast<int>(i % 3);
    const ColoredHypergraph g = random_simple_graph(n, 2, 0.3 + 0.4 * ((i / 3) % 3) / 2.0, mix_seed(seed, i));
    const double f = nd_parameter(witness, g, SearchMode::exhaustive, 0).value;
    LiftOptions opt;
    opt.seed = mix_seed(seed, 1000 + i);
    opt.diagnostics = false;
    const NdEstimateReport rep = nd_estimate_pipeline(g, k, witness.fn, n - 1, opt);
    if (rep.transferred > f + kTol) fails[i] = "transferred above f";
    else if (f > rep.f_hat + rep.gap + kTol) fails[i] = "f above f_hat + gap";
  });
  int bad = 0;
  std::string first;
  for (int i = 0; i < count; ++i)
    if (!fails[i].empty()) {
      ++bad;
      if (first.empty()) first = "; first failure: instance " + std::to_string(i) + " (" + fails[i] + ")";
    }
  return {0, "", bad == 0, std::to_string(count) + " graphs on 4..6 vertices, violations=" + std::to_string(bad) + first,
          0};
}

// C13: property tester thresholds.
CriterionResult c13(Level level, std::uint64_t seed) {
  const int trials = Counts{500, 50}(level);
  const int n = 8, q = 4;
  const double eps = 0.3;
  const PropertyTester tester = trivial_complete_tester(2, q);
  const PropertyFn prop = complete_property();
  std::vector<ColoredHypergraph> far{empty_graph(n)};
  for (std::uint64_t s = 0; far.size() < 4; ++s) {
    ColoredHypergraph g = random_simple_graph(n, 2, 0.5, mix_seed(seed, 50 + s));
    if (eps_far(prop, g, eps)) far.push_back(std::move(g));
  }
  // Adversarial: the fewest 4-cliques destroyed by 9 missing edges.
  {
    ColoredHypergraph c = complete_graph(n);
    std::vector<Color> cols = c.colors();
    for (int v = 1; v < n; ++v) {
      const int e[2] = {0, v};
      cols[colex_rank(e)] = 2;
    }
    const int e12[2] = {1, 2}, e13[2] = {1, 3};
    cols[colex_rank(e12)] = 2;
    cols[colex_rank(e13)] = 2;
    far.emplace_back(n, 2, 2, std::move(cols));
  }
  auto sigma = [&](double p) { return std::sqrt(p * (1 - p) / trials); };
  bool pass = true;
  std::ostringstream d;
  const AcceptanceReport mem = acceptance_frequency(tester, complete_graph(n), q, trials, mix_seed(seed, 1));
  pass = pass && mem.frequency >= 0.6 - 3 * sigma(0.6) && mem.exact >= 0.6 - kTol;
  d << "member freq=" << fmt(mem.frequency, 4) << " (exact " << fmt(mem.exact, 4) << ")";
  double worst = 0, worst_exact = 0;
  for (std::size_t i = 0; i < far.size(); ++i) {
    if (!eps_far(prop, far[i], eps)) throw Error("corpus graph is not eps-far");
    const AcceptanceReport rep = acceptance_frequency(tester, far[i], q, trials, mix_seed(seed, 10 + i));
    worst = std::max(worst, rep.frequency);
    worst_exact = std::max(worst_exact, rep.exact);
    pass = pass && rep.frequency <= 0.4 + 3 * sigma(0.4) && rep.exact <= 0.4 + kTol;
  }
  d << "; " << far.size() << " far graphs, max freq=" << fmt(worst, 4) << " (max exact " << fmt(worst_exact, 4)
    << "), " << trials << " trials";
  return {0, "", pass, d.str(), 0};
}

}  // namespace

Level parse_level(const std::string& s) {
  if (s == "desk") return Level::desk;
  if (s == "smoke") return Level::smoke;
  throw Error("unknown suite level: " + s);
}

std::vector<CriterionResult> run_all(Level level, std::uint64_t seed, std::ostream* live) {
  using Fn = CriterionResult (*)(Level, std::uint64_t);
  struct Entry {
    const char* name;
    Fn fn;
  };
  const Entry entries[] = {
      {"counting lemma", c1},
      {"embedding bound", c2},
      {"tv identity", c3},
      {"cut-norm heuristic vs exact", c4},
      {"norm chain", c5},
      {"energy reduction", c6},
      {"gse concentration and anneal", c7},
      {"weak regularity", c8},
      {"coloring transfer bound", c9},
      {"base case r=1", c10},
      {"end-to-end lift r=2", c11},
      {"nd parameter sandwich", c12},
      {"property tester thresholds", c13},
  };
  std::vector<CriterionResult> out;
  int id = 0;
  for (const auto& e : entries) {
    ++id;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = e.fn(level, mix_seed(seed, static_cast<std::uint64_t>(id)));
    } catch (const std::exception& ex) {
      res.pass = false;
      res.detail = std::string("error: ") + ex.what();
    }
    res.id = id;
    res.name = e.name;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (live) *live << format_line(res) << std::endl;
    out.push_back(std::move(res));
  }
  return out;
}

std::string format_line(const CriterionResult& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << " C" << c.id << " " << c.name << ": " << c.detail << " [" << std::fixed
     << std::setprecision(2) << c.seconds << "s]";
  return os.str();
}

}  // namespace hypertest::acceptance
