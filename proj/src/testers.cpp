#include "hypertest/testers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "hypertest/common.hpp"
#include "hypertest/rng.hpp"

namespace hypertest {

double color_density(const ColoredHypergraph& g, Color c) {
  if (g.edge_count() == 0) return 0;
  const auto hits = std::count(g.colors().begin(), g.colors().end(), c);
  return static_cast<double>(hits) / static_cast<double>(g.edge_count());
}

ParameterFn edge_density_parameter() {
  return {"edge-density", 2, 2, [](const ColoredHypergraph& g) { return color_density(g, 1); }, 1.0};
}

ParameterFn triangle_density_parameter() {
  auto fn = [](const ColoredHypergraph& g) {
    if (g.r() != 2) throw Error("triangle density needs a 2-graph");
    const int n = g.n();
    if (n < 3) return 0.0;
    std::uint64_t hits = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const int ab[2] = {a, b};
        if (g.color_of(ab) != 1) continue;
        for (int c = b + 1; c < n; ++c) {
          const int ac[2] = {a, c}, bc[2] = {b, c};
          hits += g.color_of(ac) == 1 && g.color_of(bc) == 1;
        }
      }
    return static_cast<double>(hits) / static_cast<double>(binomial(n, 3));
  };
  return {"triangle-density", 2, 2, fn, 3.0};
}

ParameterFn signed_color_density(int k) {
  auto fn = [k](const ColoredHypergraph& g) {
    return color_density(g, pair_color(1, 1, k)) - color_density(g, pair_color(1, 2, k));
  };
  return {"signed-color-density", 2, 2 * k, fn, 2.0};
}

ParameterFn color11_density(int k) {
  return {"color11-density", 2, 2 * k,
          [k](const ColoredHypergraph& g) { return color_density(g, pair_color(1, 1, k)); }, 1.0};
}

PropertyFn complete_property() {
  PropertyFn p;
  p.name = "complete";
  p.r = 2;
  p.k = 2;
  p.member = [](const ColoredHypergraph& g) {
    return std::all_of(g.colors().begin(), g.colors().end(), [](Color c) { return c == 1; });
  };
  p.sample_member = p.member;
  p.distance = [](const ColoredHypergraph& g) {
    return static_cast<std::uint64_t>(std::count_if(g.colors().begin(), g.colors().end(), [](Color c) { return c != 1; }));
  };
  return p;
}

PropertyFn all_color11_property(int k) {
  PropertyFn p;
  p.name = "all-color11";
  p.r = 2;
  p.k = 2 * k;
  const Color c11 = pair_color(1, 1, k);
  p.member = [c11](const ColoredHypergraph& g) {
    return std::all_of(g.colors().begin(), g.colors().end(), [c11](Color c) { return c == c11; });
  };
  p.sample_member = p.member;
  p.distance = [c11](const ColoredHypergraph& g) {
    return static_cast<std::uint64_t>(
        std::count_if(g.colors().begin(), g.colors().end(), [c11](Color c) { return c != c11; }));
  };
  return p;
}

bool relabel_invariant(const std::function<double(const ColoredHypergraph&)>& f, int r, int k, int n, int trials,
                       std::uint64_t seed) {
  for (int i = 0; i < trials; ++i) {
    const ColoredHypergraph g = random_hypergraph(n, r, k, mix_seed(seed, 2 * i));
    Rng rng(mix_seed(seed, 2 * i + 1));
    const std::vector<int> perm = rng.ordered_sample(n, n);
    if (std::abs(f(g) - f(relabel(g, perm))) > 1e-12) return false;
  }
  return true;
}

namespace {

constexpr int kSpotVertices = 6;
constexpr int kSpotTrials = 10;

ParameterFn checked(ParameterFn f) {
  if (!relabel_invariant(f.fn, f.r, f.k, kSpotVertices, kSpotTrials, 0x5eed))
    throw Error("parameter " + f.name + " is not relabeling invariant");
  return f;
}

PropertyFn checked(PropertyFn p) {
  auto as_real = [&p](const ColoredHypergraph& g) { return p.member(g) ? 1.0 : 0.0; };
  if (!relabel_invariant(as_real, p.r, p.k, kSpotVertices, kSpotTrials, 0x5eed))
    throw Error("property " + p.name + " is not relabeling invariant");
  return p;
}

}  // namespace

ParameterFn lookup_parameter(const std::string& name, int k) {
  if (name == "edge-density") return checked(edge_density_parameter());
  if (name == "triangle-density") return checked(triangle_density_parameter());
  if (name == "signed-color-density") return checked(signed_color_density(k));
  if (name == "color11-density") return checked(color11_density(k));
  throw Error("unknown parameter: " + name);
}

PropertyFn lookup_property(const std::string& name, int k) {
  if (name == "complete") return checked(complete_property());
  if (name == "all-color11") return checked(all_color11_property(k));
  throw Error("unknown property: " + name);
}

std::vector<std::string> parameter_names() {
  return {"edge-density", "triangle-density", "signed-color-density", "color11-density"};
}
std::vector<std::string> property_names() { return {"complete", "all-color11"}; }

WilsonInterval wilson(std::uint64_t hits, std::uint64_t n, double z) {
  if (n == 0) return {0, 1};
  if (hits == 0 || hits == n) {
    const double nn = static_cast<double>(n), edge = z * z / (nn + z * z);
    return hits == 0 ? WilsonInterval{0, edge} : WilsonInterval{1 - edge, 1};
  }
  const double nn = static_cast<double>(n), p = static_cast<double>(hits) / nn, z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ProbeReport probe_sample_complexity(const ParameterFn& f, const ColoredHypergraph& g, double eps,
                                    const std::vector<int>& q_grid, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error("trials must be positive");
  ProbeReport rep;
  rep.eps = eps;
  const double full = f.fn(g);
  for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
    const int q = q_grid[qi];
    if (q < g.r() || q > g.n()) throw Error("sample size outside [r, n]");
    std::vector<char> fail(trials);
    parallel_for(trials, [&](std::size_t i) {
      const auto s = sample_subgraph(g, q, mix_seed(mix_seed(seed, qi), i)).to_hypergraph();
      fail[i] = std::abs(full - f.fn(s)) > eps;
    });
    ProbeRow row;
    row.q = q;
    row.trials = static_cast<std::uint64_t>(trials);
    row.failures = static_cast<std::uint64_t>(std::count(fail.begin(), fail.end(), 1));
    row.rate = static_cast<double>(row.failures) / trials;
    row.ci = wilson(row.failures, row.trials);
    if (!rep.q_star && row.ci.hi < eps) rep.q_star = q;
    rep.rows.push_back(row);
  }
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    for (std::size_t j = i + 1; j < rep.rows.size(); ++j) {
      if (rep.rows[j].q < rep.rows[i].q) continue;
      const double w = (rep.rows[i].ci.hi - rep.rows[i].ci.lo) + (rep.rows[j].ci.hi - rep.rows[j].ci.lo);
      if (rep.rows[j].rate > rep.rows[i].rate + w) rep.monotone = false;
    }
  return rep;
}

NdValue nd_parameter(const ParameterFn& witness, const ColoredHypergraph& g, SearchMode mode, std::uint64_t seed,
                     int restarts) {
  if (witness.k % g.k() != 0) throw Error("witness palette is not a refinement of the graph palette");
  const int k = witness.k / g.k();
  NdValue out;
  out.mode = mode;
  if (mode == SearchMode::exhaustive) {
    out.value = -std::numeric_limits<double>::infinity();
    enumerate_colorings(g, k, [&](const ColoredHypergraph& c) {
      const double v = witness.fn(c);
      if (v > out.value) {
        out.value = v;
        out.coloring = c;
      }
    });
    return out;
  }
  out.lower_bound = true;
  const std::size_t m = g.edge_count();
  std::vector<NdValue> best(std::max(1, restarts));
  parallel_for(best.size(), [&](std::size_t rs) {
    Rng rng(mix_seed(seed, rs));
    std::vector<Color> cols(m);
    for (std::size_t e = 0; e < m; ++e) {
      const int beta = rs == 0 ? 1 : 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      cols[e] = pair_color(g.color(e), beta, k);
    }
    ColoredHypergraph cur(g.n(), g.r(), witness.k, cols);
    double val = witness.fn(cur);
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t e = 0; e < m && !improved; ++e) {
        const Color old = cols[e];
        for (int b = 1; b <= k && !improved; ++b) {
          const Color c = pair_color(g.color(e), b, k);
          if (c == old) continue;
          cols[e] = c;
          ColoredHypergraph cand(g.n(), g.r(), witness.k, cols);
          const double v = witness.fn(cand);
          if (v > val + 1e-12) {
            val = v;
            cur = std::move(cand);
            improved = true;
          } else {
            cols[e] = old;
          }
        }
      }
    }
    best[rs].value = val;
    best[rs].coloring = std::move(cur);
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < best.size(); ++i)
    if (best[i].value > best[arg].value) arg = i;
  out.value = best[arg].value;
  out.coloring = std::move(best[arg].coloring);
  return out;
}

PropertyTester trivial_complete_tester(int k, int q_q) {
  PropertyTester t;
  t.witness = all_color11_property(k);
  t.k = k;
  t.q_q = q_q;
  return t;
}

double witness_sample_density(const PropertyTester& t, const ColoredHypergraph& h) {
  const int n = h.n();
  if (t.q_q > n) throw Error("witness sample size exceeds the graph");
  SubsetTable subsets(n, t.q_q);
  require_budget(static_cast<double>(subsets.size()), "witness sample density");
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < subsets.size(); ++i) hits += t.witness.sample_member(induced(h, subsets[i]));
  return static_cast<double>(hits) / static_cast<double>(subsets.size());
}

TesterRun property_decision(const PropertyTester& t, const ColoredHypergraph& sample) {
  TesterRun run;
  run.best_t = -1;
  enumerate_colorings(sample, t.k, [&](const ColoredHypergraph& c) {
    if (run.best_t >= t.accept_threshold) return;
    const double v = witness_sample_density(t, c);
    if (v > run.best_t) {
      run.best_t = v;
      run.best_coloring = c;
    }
  });
  run.accepted = run.best_t >= t.accept_threshold;
  return run;
}

TesterRun property_tester(const PropertyTester& t, const ColoredHypergraph& h, int q, std::uint64_t seed) {
  if (q < h.r() || q > h.n()) throw Error("sample size outside [r, n]");
  Rng rng(seed);
  std::vector<int> verts = rng.ordered_sample(h.n(), q);
  TesterRun run = property_decision(t, induced(h, verts));
  run.sample_vertices = std::move(verts);
  return run;
}

double exact_acceptance(const PropertyTester& t, const ColoredHypergraph& h, int q) {
  SubsetTable subsets(h.n(), q);
  require_budget(static_cast<double>(subsets.size()), "exact acceptance");
  std::vector<char> acc(subsets.size());
  parallel_for(subsets.size(), [&](std::size_t i) { acc[i] = property_decision(t, induced(h, subsets[i])).accepted; });
  return static_cast<double>(std::count(acc.begin(), acc.end(), 1)) / static_cast<double>(subsets.size());
}

AcceptanceReport acceptance_frequency(const PropertyTester& t, const ColoredHypergraph& h, int q, int trials,
                                      std::uint64_t seed) {
  AcceptanceReport rep;
  std::vector<char> acc(trials);
  parallel_for(trials, [&](std::size_t i) { acc[i] = property_tester(t, h, q, mix_seed(seed, i)).accepted; });
  rep.trials = static_cast<std::uint64_t>(trials);
  rep.accepts = static_cast<std::uint64_t>(std::count(acc.begin(), acc.end(), 1));
  rep.frequency = static_cast<double>(rep.accepts) / trials;
  rep.ci = wilson(rep.accepts, rep.trials);
  rep.exact = exact_acceptance(t, h, q);
  return rep;
}

bool eps_far(const PropertyFn& p, const ColoredHypergraph& h, double eps, FarNorm norm) {
  if (!p.distance) throw Error("property " + p.name + " has no edit distance");
  const double scale = norm == FarNorm::binomial ? binomial_d(h.n(), h.r()) : static_cast<double>(h.n()) * h.n();
  return static_cast<double>(p.distance(h)) >= eps * scale;
}

}  // namespace hypertest
