#include "hypertest/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hypertest/cutnorm.hpp"
#include "hypertest/rng.hpp"

namespace hypertest {

namespace {

// Edges of [q] grouped by their largest vertex: with colex order the edges
// whose maximum is i occupy ranks [C(i,r), C(i+1,r)).
struct EdgeLayout {
  SubsetTable edges;
  std::vector<std::size_t> first;  // first[i] = C(i, r)
  EdgeLayout(int q, int r) : edges(q, r), first(q + 1) {
    for (int i = 0; i <= q; ++i) first[i] = static_cast<std::size_t>(binomial(i, r));
  }
};

// Walks every injection (or increasing map) phi: [q] -> [n]. `edge_ok` is
// called for each edge as soon as its vertices are placed; returning false
// prunes the branch. `leaf` runs at complete maps.
template <class EdgeFn, class LeafFn>
void walk_maps(const ColoredHypergraph& g, int q, SampleLabeling labeling, EdgeFn edge_ok, LeafFn leaf) {
  const int n = g.n(), r = g.r();
  EdgeLayout lay(q, r);
  std::vector<int> phi(q, -1);
  std::vector<char> used(n, 0);
  std::vector<int> verts(r);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == q) {
      leaf();
      return;
    }
    const int start = (labeling == SampleLabeling::sorted && i > 0) ? phi[i - 1] + 1 : 0;
    for (int v = start; v < n; ++v) {
      if (used[v]) continue;
      phi[i] = v;
      used[v] = 1;
      bool ok = true;
      for (std::size_t e = lay.first[i]; e < lay.first[i + 1] && ok; ++e) {
        auto s = lay.edges[e];
        for (int j = 0; j < r; ++j) verts[j] = phi[s[j]];
        std::sort(verts.begin(), verts.end());
        ok = edge_ok(e, g.color_of(verts));
      }
      if (ok) self(self, i + 1);
      used[v] = 0;
    }
  };
  rec(rec, 0);
}

double map_count(int n, int q, SampleLabeling labeling) {
  return labeling == SampleLabeling::uniform ? static_cast<double>(falling(n, q))
                                             : static_cast<double>(binomial(n, q));
}

template <class Host>
void check_pattern(const SampledColoredGraph& f, const Host& g) {
  if (f.r() != g.r()) throw Error("pattern and host have different uniformity");
  if (f.k() != g.k()) throw Error("pattern and host have different palettes");
}

// Enumerates the joint law of the class labels of all (r-1)-subsets of [q]
// under a step graphon's partition: fn(weight, classes in colex order).
void for_each_sample_classes(const GridPartition& p, int r, int q,
                             const std::function<void(double, std::span<const int>)>& fn) {
  const int m = r - 1;
  if (m == 0) {
    std::vector<int> c{p.label(0)};
    fn(1.0, c);
    return;
  }
  const GridGeometry& geom = p.geometry();
  const int top_cells = geom.cells(m);
  const std::size_t lower_count = geom.cell_count() / static_cast<std::size_t>(top_cells);
  std::vector<SparseDist> lower_dist(lower_count);
  for (std::size_t lc = 0; lc < lower_count; ++lc) {
    std::map<int, double> acc;
    for (int z = 0; z < top_cells; ++z) acc[p.label(lc * top_cells + z)] += geom.width(m, z);
    for (const auto& [c, w] : acc)
      if (w > 0) lower_dist[lc].emplace_back(c, w);
  }
  // Lower latent sets of [q]: sizes 1..m-1, stored level by level.
  std::vector<SubsetTable> levels;
  std::vector<std::size_t> offset;
  std::size_t lower_sets = 0;
  for (int l = 1; l < m; ++l) {
    levels.emplace_back(q, l);
    offset.push_back(lower_sets);
    lower_sets += levels.back().size();
  }
  SubsetTable tops(q, m);
  const auto& axes = geom.axes();
  const int dim = geom.dim();
  // For each top set and non-top axis, the global index of the lower set.
  std::vector<std::vector<std::size_t>> top_axis(tops.size(), std::vector<std::size_t>(dim - 1));
  std::vector<int> sub;
  for (std::size_t f = 0; f < tops.size(); ++f) {
    auto s = tops[f];
    for (int a = 0; a + 1 < dim; ++a) {
      sub.clear();
      for (int x : axes[a]) sub.push_back(s[x]);
      top_axis[f][a] = offset[sub.size() - 1] + colex_rank(sub);
    }
  }
  double est = 1;
  for (int l = 1; l < m; ++l) est *= std::pow(static_cast<double>(geom.cells(l)), levels[l - 1].size());
  est *= std::pow(static_cast<double>(p.t()), static_cast<double>(tops.size()));
  require_budget(est, "graphon sample enumeration");

  std::vector<int> level_of(lower_sets);
  for (int l = 1; l < m; ++l)
    for (std::size_t i = 0; i < levels[l - 1].size(); ++i) level_of[offset[l - 1] + i] = l;
  std::vector<int> cell(lower_sets, 0);
  std::vector<const SparseDist*> law(tops.size());
  std::vector<int> classes(tops.size());
  for (;;) {
    double vol = 1.0;
    for (std::size_t i = 0; i < lower_sets; ++i) vol *= geom.width(level_of[i], cell[i]);
    for (std::size_t f = 0; f < tops.size(); ++f) {
      std::size_t lc = 0;
      for (int a = 0; a + 1 < dim; ++a)
        lc += static_cast<std::size_t>(cell[top_axis[f][a]]) * (geom.stride(a) / top_cells);
      law[f] = &lower_dist[lc];
    }
    auto rec = [&](auto&& self, std::size_t f, double w) -> void {
      if (f == tops.size()) {
        fn(w, classes);
        return;
      }
      for (const auto& [c, pr] : *law[f]) {
        classes[f] = c;
        self(self, f + 1, w * pr);
      }
    };
    if (vol > 0) rec(rec, 0, vol);
    std::size_t i = lower_sets;
    while (i > 0) {
      if (++cell[i - 1] < geom.cells(level_of[i - 1])) break;
      cell[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
}

// For each edge of [q] (colex), the colex ranks of its faces [e]\{e_l}.
std::vector<std::vector<std::size_t>> edge_faces(int q, int r) {
  SubsetTable edges(q, r);
  std::vector<std::vector<std::size_t>> out(edges.size(), std::vector<std::size_t>(r));
  std::vector<int> face;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto s = edges[e];
    for (int l = 0; l < r; ++l) {
      face.clear();
      for (int i = 0; i < r; ++i)
        if (i != l) face.push_back(s[i]);
      out[e][l] = colex_rank(face);
    }
  }
  return out;
}

}  // namespace

Rational density_graph_exact(const SampledColoredGraph& f, const ColoredHypergraph& g, SampleLabeling labeling) {
  check_pattern(f, g);
  const int q = f.q();
  if (q > g.n()) throw Error("pattern has more vertices than the host");
  const double total = map_count(g.n(), q, labeling);
  require_budget(total, "exact homomorphism density");
  Rational out{0, static_cast<std::uint64_t>(total)};
  if (f.has_iota()) return out;
  walk_maps(
      g, q, labeling, [&](std::size_t e, Color c) { return c == f.color(e); }, [&] { ++out.num; });
  return out;
}

double density_graph(const SampledColoredGraph& f, const ColoredHypergraph& g, SampleLabeling labeling) {
  return density_graph_exact(f, g, labeling).value();
}

DensityResult density_graph_mc(const SampledColoredGraph& f, const ColoredHypergraph& g, std::uint64_t samples,
                               std::uint64_t seed) {
  check_pattern(f, g);
  if (f.q() > g.n()) throw Error("pattern has more vertices than the host");
  if (samples == 0) throw Error("sample count must be positive");
  Rng rng(seed);
  const int r = g.r();
  SubsetTable edges(f.q(), r);
  std::vector<int> verts(r);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::vector<int> phi = rng.ordered_sample(g.n(), f.q());
    bool ok = true;
    for (std::size_t e = 0; e < edges.size() && ok; ++e) {
      auto es = edges[e];
      for (int j = 0; j < r; ++j) verts[j] = phi[es[j]];
      std::sort(verts.begin(), verts.end());
      ok = g.color_of(verts) == f.color(e);
    }
    hits += ok;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1 - p) / static_cast<double>(samples)), Mode::mc, std::nullopt};
}

DensityResult density_graphon(const SampledColoredGraph& f, const StepGraphon& w, bool mc_fallback,
                              std::uint64_t samples, std::uint64_t seed) {
  check_pattern(f, w);
  const int q = f.q(), r = w.r();
  if (q < r) throw Error("pattern must have at least r vertices");
  const auto faces = edge_faces(q, r);
  std::vector<int> classes(r);
  double sum = 0;
  try {
    for_each_sample_classes(w.partition(), r, q, [&](double weight, std::span<const int> fc) {
      double prod = weight;
      for (std::size_t e = 0; e < faces.size() && prod > 0; ++e) {
        for (int l = 0; l < r; ++l) classes[l] = fc[faces[e][l]];
        prod *= w.at(f.color(e), classes);
      }
      sum += prod;
    });
  } catch (const BudgetExceeded&) {
    if (!mc_fallback) throw;
    return density_graphon_mc(f, w, samples, seed);
  }
  return {sum, 0.0, Mode::exact, std::nullopt};
}

DensityResult density_graphon_mc(const SampledColoredGraph& f, const StepGraphon& w, std::uint64_t samples,
                                 std::uint64_t seed) {
  check_pattern(f, w);
  const int q = f.q(), r = w.r();
  if (q < r) throw Error("pattern must have at least r vertices");
  if (samples == 0) throw Error("sample count must be positive");
  const auto faces = edge_faces(q, r);
  Rng rng(seed);
  std::vector<int> classes(r);
  double s1 = 0, s2 = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::vector<std::vector<double>> latents;
    for (int l = 1; l <= r - 1; ++l) {
      std::vector<double> xs(binomial(q, l));
      for (auto& x : xs) x = rng.uniform();
      latents.push_back(std::move(xs));
    }
    const std::vector<int> fc = face_classes(w.partition(), r, q, latents);
    double prod = 1;
    for (std::size_t e = 0; e < faces.size() && prod > 0; ++e) {
      for (int l = 0; l < r; ++l) classes[l] = fc[faces[e][l]];
      prod *= w.at(f.color(e), classes);
    }
    s1 += prod;
    s2 += prod * prod;
  }
  const double n = static_cast<double>(samples);
  const double mean = s1 / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  return {mean, std::sqrt(var / n), Mode::mc, std::nullopt};
}

SampleDistribution::SampleDistribution(int q, int r, int k, bool iota, std::vector<double> probs)
    : q_(q), r_(r), k_(k), iota_(iota), probs_(std::move(probs)) {
  const double expect = std::pow(static_cast<double>(k + 1), static_cast<double>(binomial(q, r)));
  if (static_cast<double>(probs_.size()) != expect) throw Error("distribution has the wrong support size");
}

std::size_t SampleDistribution::encode(const EdgeColoring& f) const {
  if (f.n() != q_ || f.r() != r_ || f.k() != k_) throw Error("graph does not match the distribution's (q,r,k)");
  std::size_t idx = 0, mul = 1;
  for (std::size_t e = 0; e < f.edge_count(); ++e) {
    idx += f.color(e) * mul;
    mul *= static_cast<std::size_t>(k_ + 1);
  }
  return idx;
}

SampledColoredGraph SampleDistribution::decode(std::size_t index) const {
  std::vector<Color> colors(binomial(q_, r_));
  for (auto& c : colors) {
    c = static_cast<Color>(index % static_cast<std::size_t>(k_ + 1));
    index /= static_cast<std::size_t>(k_ + 1);
  }
  return SampledColoredGraph(q_, r_, k_, std::move(colors));
}

std::string SampleDistribution::key(const EdgeColoring& f) {
  std::ostringstream os;
  for (std::size_t e = 0; e < f.edge_count(); ++e) os << (e ? "," : "") << f.color(e);
  return os.str();
}

double SampleDistribution::total() const {
  double s = 0;
  for (double p : probs_) s += p;
  return s;
}

namespace {

std::size_t support_size(int q, int r, int k) {
  const double s = std::pow(static_cast<double>(k + 1), static_cast<double>(binomial(q, r)));
  require_budget(s, "sample distribution support");
  return static_cast<std::size_t>(s);
}

}  // namespace

SampleDistribution sample_distribution(const ColoredHypergraph& g, int q, SampleLabeling labeling) {
  if (q < g.r() || q > g.n()) throw Error("sample size must lie in [r, n]");
  const std::size_t support = support_size(q, g.r(), g.k());
  const double total = map_count(g.n(), q, labeling);
  require_budget(total, "sample distribution maps");
  const std::size_t edges = static_cast<std::size_t>(binomial(q, g.r()));
  std::vector<std::size_t> place(edges);
  std::size_t mul = 1;
  for (std::size_t e = 0; e < edges; ++e, mul *= static_cast<std::size_t>(g.k() + 1)) place[e] = mul;
  std::vector<std::uint64_t> counts(support, 0);
  std::vector<std::size_t> partial(edges + 1, 0);
  // Edges arrive in colex order, so partial[e+1] extends partial[e].
  walk_maps(
      g, q, labeling,
      [&](std::size_t e, Color c) {
        partial[e + 1] = partial[e] + c * place[e];
        return true;
      },
      [&] { ++counts[partial[edges]]; });
  std::vector<double> probs(support);
  for (std::size_t i = 0; i < support; ++i) probs[i] = static_cast<double>(counts[i]) / total;
  return SampleDistribution(q, g.r(), g.k(), false, std::move(probs));
}

SampleDistribution sample_distribution(const StepGraphon& w, int q) {
  const int r = w.r(), k = w.k();
  if (q < r) throw Error("sample size must be at least r");
  const std::size_t support = support_size(q, r, k);
  const auto faces = edge_faces(q, r);
  const std::size_t edges = faces.size();
  std::vector<double> probs(support, 0.0);
  std::vector<int> classes(r);
  std::vector<std::vector<std::pair<Color, double>>> law(edges);
  std::vector<std::size_t> place(edges);
  std::size_t mul = 1;
  for (std::size_t e = 0; e < edges; ++e, mul *= static_cast<std::size_t>(k + 1)) place[e] = mul;
  for_each_sample_classes(w.partition(), r, q, [&](double weight, std::span<const int> fc) {
    for (std::size_t e = 0; e < edges; ++e) {
      for (int l = 0; l < r; ++l) classes[l] = fc[faces[e][l]];
      const std::size_t idx = w.index(classes);
      law[e].clear();
      for (int a = w.iota_allowed() ? 0 : 1; a <= k; ++a) {
        const double p = w.at_index(a, idx);
        if (p > kUnityTol) law[e].emplace_back(static_cast<Color>(a), p);
      }
    }
    auto rec = [&](auto&& self, std::size_t e, std::size_t idx, double p) -> void {
      if (e == edges) {
        probs[idx] += p;
        return;
      }
      for (const auto& [c, pc] : law[e]) self(self, e + 1, idx + c * place[e], p * pc);
    };
    rec(rec, 0, 0, weight);
  });
  return SampleDistribution(q, r, k, w.iota_allowed(), std::move(probs));
}

TvResult tv_distance(const SampleDistribution& a, const SampleDistribution& b) {
  if (a.q() != b.q() || a.r() != b.r() || a.k() != b.k())
    throw Error("distributions have mismatched (q, r, k)");
  TvResult out;
  double pos_a = 0, pos_b = 0, neg_a = 0, neg_b = 0;
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < a.support_size(); ++i) {
    const double d = a.prob(i) - b.prob(i);
    out.half_sum += std::abs(d);
    if (d > 0) {
      pos_a += a.prob(i);
      pos_b += b.prob(i);
      pos.push_back(i);
    } else {
      neg_a += a.prob(i);
      neg_b += b.prob(i);
      neg.push_back(i);
    }
  }
  out.half_sum /= 2;
  const double up = pos_a - pos_b, down = neg_b - neg_a;
  if (up >= down) {
    out.max_event = up;
    out.event = std::move(pos);
  } else {
    out.max_event = down;
    out.event = std::move(neg);
  }
  if (std::abs(out.half_sum - out.max_event) > 1e-9)
    throw Error("total variation forms disagree: " + std::to_string(out.half_sum) + " vs " +
                std::to_string(out.max_event));
  return out;
}

CountingReport counting_bound_check(const StepGraphon& u, const StepGraphon& w, int q) {
  if (u.r() != w.r() || u.k() != w.k()) throw Error("graphons have different (r,k)");
  const int r = u.r(), k = u.k();
  CountingReport rep;
  rep.cut_distance = cut_distance(u, w, Mode::exact).value;
  rep.count_constant = static_cast<double>(binomial(q, r));
  const SampleDistribution mu = sample_distribution(u, q);
  const SampleDistribution mw = sample_distribution(w, q);
  const double bound = rep.count_constant * rep.cut_distance;
  rep.worst_slack = bound;
  for (std::size_t i = 0; i < mu.support_size(); ++i) {
    const SampledColoredGraph f = mu.decode(i);
    if (f.has_iota()) continue;
    ++rep.graphs_checked;
    const double gap = std::abs(mu.prob(i) - mw.prob(i));
    rep.max_density_gap = std::max(rep.max_density_gap, gap);
    const double slack = bound - gap;
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < -1e-9) ++rep.violations;
  }
  rep.dvar = tv_distance(mu, mw).half_sum;
  const double qr = std::pow(static_cast<double>(q), r);
  rep.dvar_bound = std::pow(static_cast<double>(k), qr) * qr / (2 * factorial(r)) * rep.cut_distance;
  rep.dvar_ok = rep.dvar <= rep.dvar_bound + 1e-9;
  return rep;
}

}  // namespace hypertest
