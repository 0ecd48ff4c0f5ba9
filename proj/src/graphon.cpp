#include "hypertest/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hypertest/combinatorics.hpp"
#include "hypertest/common.hpp"
#include "hypertest/rng.hpp"

namespace hypertest {

namespace {

constexpr double kMaxArrayEntries = 6e7;

// Index of the sorted multiset b (size m, entries < n) among m-multisets.
std::size_t multiset_rank(std::vector<int> b) {
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += static_cast<int>(i);
  return colex_rank(b);
}

bool next_tuple(std::vector<int>& idx, int t) {
  int i = static_cast<int>(idx.size());
  while (i > 0) {
    if (++idx[i - 1] < t) return true;
    idx[i - 1] = 0;
    --i;
  }
  return false;
}

}  // namespace

StepGraphon::StepGraphon(int r, int k, GridPartition partition, std::vector<std::vector<double>> arrays,
                         bool iota_allowed)
    : r_(r), k_(k), partition_(std::move(partition)), arrays_(std::move(arrays)), iota_allowed_(iota_allowed) {
  if (r < 1 || r > 4) throw Error("step graphons support r in 1..4");
  if (k < 1) throw Error("palette size must be positive");
  if (partition_.r_minus_1() != r - 1) throw Error("partition dimension does not match r-1");
  if (static_cast<int>(arrays_.size()) != k) throw Error("need one array per color");
  const double entries = std::pow(static_cast<double>(t()), r);
  if (entries * k > kMaxArrayEntries) throw Error("step graphon arrays too large");
  const std::size_t n = static_cast<std::size_t>(entries);
  for (const auto& a : arrays_)
    if (a.size() != n) throw Error("array size must be t^r = " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (int a = 0; a < k; ++a) {
      double v = arrays_[a][i];
      if (!(v >= -kUnityTol && v <= 1 + kUnityTol)) throw Error("array entry outside [0,1]");
      s += v;
    }
    if (iota_allowed_ ? s > 1 + 1e-9 : std::abs(s - 1.0) > 1e-9)
      throw Error("colors do not form a partition of unity (sum " + std::to_string(s) + ")");
  }
  if (!arrays_symmetric(*this, 1e-9)) throw Error("step graphon arrays are not symmetric");
}

StepGraphon StepGraphon::constant(int r, int k, const std::vector<double>& probs, int resolution) {
  if (static_cast<int>(probs.size()) != k) throw Error("need k probabilities");
  std::vector<std::vector<double>> arrays;
  for (double p : probs) arrays.push_back({p});
  return StepGraphon(r, k, GridPartition::trivial(GridGeometry::uniform(r - 1, resolution)), std::move(arrays));
}

std::size_t StepGraphon::index(std::span<const int> classes) const {
  std::size_t idx = 0;
  const std::size_t tt = static_cast<std::size_t>(t());
  for (int c : classes) idx = idx * tt + static_cast<std::size_t>(c);
  return idx;
}

double StepGraphon::at_index(int alpha, std::size_t idx) const {
  if (alpha == 0) {
    double s = 0;
    for (const auto& a : arrays_) s += a[idx];
    return std::max(0.0, 1.0 - s);
  }
  return arrays_[alpha - 1][idx];
}

double StepGraphon::at(int alpha, std::span<const int> classes) const { return at_index(alpha, index(classes)); }

StepGraphon StepGraphon::rebase(const GridGeometry& finer) const {
  return StepGraphon(r_, k_, partition_.rebase(finer), arrays_, iota_allowed_);
}

bool arrays_symmetric(const StepGraphon& w, double tol) {
  const int r = w.r();
  const int t = w.t();
  auto perms = all_permutations(r);
  std::vector<int> idx(r, 0), p(r);
  do {
    std::size_t base = w.index(idx);
    for (const auto& perm : perms) {
      for (int i = 0; i < r; ++i) p[i] = idx[perm[i]];
      std::size_t other = w.index(p);
      for (const auto& a : w.arrays())
        if (std::abs(a[base] - a[other]) > tol) return false;
    }
  } while (next_tuple(idx, t));
  return true;
}

StepGraphon symmetrize(const StepGraphon& w) {
  const int r = w.r();
  auto perms = all_permutations(r);
  std::vector<std::vector<double>> out(w.k(), std::vector<double>(w.array_size(), 0.0));
  std::vector<int> idx(r, 0), p(r);
  do {
    std::size_t base = w.index(idx);
    for (const auto& perm : perms) {
      for (int i = 0; i < r; ++i) p[i] = idx[perm[i]];
      std::size_t other = w.index(p);
      for (int a = 0; a < w.k(); ++a) out[a][base] += w.arrays()[a][other];
    }
    for (int a = 0; a < w.k(); ++a) out[a][base] /= static_cast<double>(perms.size());
  } while (next_tuple(idx, w.t()));
  return StepGraphon(r, w.k(), w.partition(), std::move(out), w.iota_allowed());
}

VertexGraphon::VertexGraphon(ColoredHypergraph g) : g_(std::move(g)) {
  const int n = g_.n(), r = g_.r(), k = g_.k();
  if (r == 1) {
    std::vector<double> probs(k, 0.0);
    for (Color c : g_.colors()) probs[c - 1] += 1.0 / n;
    step_ = StepGraphon::constant(1, k, probs);
    return;
  }
  const int m = r - 1;
  std::vector<std::vector<double>> breaks;
  breaks.push_back(GridGeometry::uniform(1, n).breaks(1));
  for (int l = 2; l <= m; ++l) breaks.push_back({0.0, 1.0});
  GridGeometry geom(m, breaks);
  const int t = static_cast<int>(binomial(n + m - 1, m));
  std::vector<int> labels(geom.cell_count());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    auto coords = geom.decode(c);
    coords.resize(m);  // singleton axes come first
    labels[c] = static_cast<int>(multiset_rank(coords));
  }
  GridPartition part(geom, std::move(labels), t);
  const double entries = std::pow(static_cast<double>(t), r);
  if (entries * k > kMaxArrayEntries) throw Error("hypergraph too large for the vertex step representation");
  std::vector<std::vector<double>> arrays(k, std::vector<double>(static_cast<std::size_t>(entries), 0.0));
  SubsetTable edges(n, r);
  auto perms = all_permutations(r);
  std::vector<int> tuple(r), pt(r), face;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto s = edges[e];
    for (int l = 0; l < r; ++l) {
      face.clear();
      for (int i = 0; i < r; ++i)
        if (i != l) face.push_back(s[i]);
      tuple[l] = static_cast<int>(multiset_rank(face));
    }
    for (const auto& perm : perms) {
      std::size_t idx = 0;
      for (int i = 0; i < r; ++i) idx = idx * static_cast<std::size_t>(t) + static_cast<std::size_t>(tuple[perm[i]]);
      arrays[g_.color(e) - 1][idx] = 1.0;
    }
  }
  step_ = StepGraphon(r, k, std::move(part), std::move(arrays), true);
}

double VertexGraphon::iota_measure() const { return integral(step_, 0); }

VertexGraphon embed(const ColoredHypergraph& g) { return VertexGraphon(g); }

double evaluate(const StepGraphon& w, int alpha, std::span<const double> point) {
  const int r = w.r();
  if (alpha < 0 || alpha > w.k()) throw Error("color out of range");
  GraphonCoordinates gc(r);
  if (point.size() != gc.coords.size())
    throw Error("point needs " + std::to_string(gc.coords.size()) + " coordinates");
  for (double x : point)
    if (!(x >= 0.0 && x <= 1.0)) throw Error("coordinate outside [0,1)");
  std::vector<int> classes(r);
  std::vector<double> sub(w.geometry().dim());
  for (int l = 0; l < r; ++l) {
    for (int a = 0; a < w.geometry().dim(); ++a) sub[a] = point[gc.face_axis[l][a]];
    classes[l] = w.partition().class_of(sub);
  }
  return w.at(alpha, classes);
}

double evaluate(const VertexGraphon& w, int alpha, std::span<const double> point) {
  const int r = w.r();
  if (r == 1) return evaluate(w.step(), alpha, point);
  GraphonCoordinates gc(r);
  if (point.size() != gc.coords.size())
    throw Error("point needs " + std::to_string(gc.coords.size()) + " coordinates");
  const int n = w.graph().n();
  std::vector<int> v(r);
  for (int i = 0; i < r; ++i) {
    double x = point[i];  // singletons come first
    if (!(x >= 0.0 && x <= 1.0)) throw Error("coordinate outside [0,1)");
    v[i] = std::min(n - 1, static_cast<int>(x * n));
  }
  std::vector<int> s = v;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) return alpha == 0 ? 1.0 : 0.0;
  return w.graph().color_of(s) == alpha ? 1.0 : 0.0;
}

std::vector<int> face_classes(const GridPartition& p, int r, int q, const std::vector<std::vector<double>>& latents) {
  const int m = r - 1;
  if (m == 0) return {p.label(0)};
  SubsetTable faces(q, m);
  const auto& axes = p.geometry().axes();
  std::vector<int> out(faces.size());
  std::vector<double> point(axes.size());
  std::vector<int> sub;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    auto s = faces[f];
    for (std::size_t a = 0; a < axes.size(); ++a) {
      sub.clear();
      for (int x : axes[a]) sub.push_back(s[x]);
      point[a] = latents[sub.size() - 1][colex_rank(sub)];
    }
    out[f] = p.class_of(point);
  }
  return out;
}

namespace {

LatentSample draw_sample(const StepGraphon& w, int q, Rng& rng) {
  const int r = w.r();
  if (q < r) throw Error("sample size q must be at least r");
  LatentSample out;
  for (int l = 1; l <= r - 1; ++l) {
    std::vector<double> xs(binomial(q, l));
    for (auto& x : xs) x = rng.uniform();
    out.latents.push_back(std::move(xs));
  }
  std::vector<int> fc = face_classes(w.partition(), r, q, out.latents);
  SubsetTable edges(q, r);
  std::vector<Color> colors(edges.size());
  std::vector<int> classes(r), face;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto s = edges[e];
    for (int l = 0; l < r; ++l) {
      face.clear();
      for (int i = 0; i < r; ++i)
        if (i != l) face.push_back(s[i]);
      classes[l] = fc[colex_rank(face)];
    }
    const std::size_t idx = w.index(classes);
    const double u = rng.uniform();
    double acc = 0;
    Color c = kIota;
    for (int a = 1; a <= w.k(); ++a) {
      acc += w.at_index(a, idx);
      if (u < acc) {
        c = static_cast<Color>(a);
        break;
      }
    }
    if (c == kIota && !w.iota_allowed()) c = static_cast<Color>(w.k());  // rounding guard
    colors[e] = c;
  }
  out.graph = SampledColoredGraph(q, r, w.k(), std::move(colors));
  return out;
}

}  // namespace

LatentSample sample_graphon_latent(const StepGraphon& w, int q, std::uint64_t seed) {
  Rng rng(seed);
  return draw_sample(w, q, rng);
}

SampledColoredGraph sample_graphon(const StepGraphon& w, int q, std::uint64_t seed) {
  return sample_graphon_latent(w, q, seed).graph;
}

SampledColoredGraph sample_graphon(const VertexGraphon& w, int q, std::uint64_t seed, bool condition_no_iota,
                                   int max_attempts) {
  Rng rng(seed);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    LatentSample s = draw_sample(w.step(), q, rng);
    if (!condition_no_iota || !s.graph.has_iota()) return s.graph;
  }
  throw Error("rejection budget exceeded after " + std::to_string(max_attempts) + " attempts");
}

std::pair<StepGraphon, StepGraphon> on_common_grid(const StepGraphon& a, const StepGraphon& b) {
  if (a.r() != b.r()) throw Error("graphons have different uniformity");
  GridGeometry geom = GridGeometry::merge(a.geometry(), b.geometry());
  return {a.geometry() == geom ? a : a.rebase(geom), b.geometry() == geom ? b : b.rebase(geom)};
}

StepGraphon step_average(const StepGraphon& w, const GridPartition& p) {
  const int r = w.r(), k = w.k();
  if (p.r_minus_1() != r - 1) throw Error("partition dimension does not match the graphon");
  std::vector<std::pair<int, int>> pairs;
  GridPartition joint = GridPartition::meet(w.partition(), p, &pairs);
  const std::size_t n = static_cast<std::size_t>(std::pow(static_cast<double>(p.t()), r));
  std::vector<std::vector<double>> num(k, std::vector<double>(n, 0.0));
  std::vector<double> den(n, 0.0);
  std::vector<int> wt(r), pt(r);
  const std::size_t ptt = static_cast<std::size_t>(p.t());
  for_each_class_tuple(joint.geometry(), r, [&](std::size_t c) { return joint.label(c); },
                       [&](double weight, std::span<const int> tuple) {
                         std::size_t pidx = 0;
                         for (int l = 0; l < r; ++l) {
                           wt[l] = pairs[tuple[l]].first;
                           pidx = pidx * ptt + static_cast<std::size_t>(pairs[tuple[l]].second);
                         }
                         const std::size_t widx = w.index(wt);
                         den[pidx] += weight;
                         for (int a = 0; a < k; ++a) num[a][pidx] += weight * w.at_index(a + 1, widx);
                       });
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (int a = 0; a < k; ++a) s += num[a][i];
    for (int a = 0; a < k; ++a) num[a][i] = (den[i] > 0 && s > 0) ? num[a][i] / s : 1.0 / k;
  }
  return symmetrize(StepGraphon(r, k, p, std::move(num), false));
}

double integral(const StepGraphon& w, int alpha) {
  double s = 0;
  for_each_class_tuple(w.geometry(), w.r(), [&](std::size_t c) { return w.partition().label(c); },
                       [&](double weight, std::span<const int> tuple) { s += weight * w.at(alpha, tuple); });
  return s;
}

double l1_distance(const StepGraphon& a, const StepGraphon& b) {
  if (a.r() != b.r() || a.k() != b.k()) throw Error("graphons have different (r,k)");
  std::vector<std::pair<int, int>> pairs;
  GridPartition joint = GridPartition::meet(a.partition(), b.partition(), &pairs);
  const int r = a.r();
  std::vector<int> ta(r), tb(r);
  double s = 0;
  for_each_class_tuple(joint.geometry(), r, [&](std::size_t c) { return joint.label(c); },
                       [&](double weight, std::span<const int> tuple) {
                         for (int l = 0; l < r; ++l) {
                           ta[l] = pairs[tuple[l]].first;
                           tb[l] = pairs[tuple[l]].second;
                         }
                         const std::size_t ia = a.index(ta), ib = b.index(tb);
                         for (int c = 1; c <= a.k(); ++c) s += weight * std::abs(a.at_index(c, ia) - b.at_index(c, ib));
                       });
  return s;
}

StepGraphon random_step_graphon(int r, int k, int g, int t, std::uint64_t seed) {
  Rng rng(seed);
  GridGeometry geom = GridGeometry::uniform(r - 1, g);
  std::vector<int> labels(geom.cell_count());
  std::map<std::size_t, int> orbit_class;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    std::size_t rep = geom.canonical_cell(c);
    auto it = orbit_class.find(rep);
    if (it == orbit_class.end()) it = orbit_class.emplace(rep, static_cast<int>(rng.below(t))).first;
    labels[c] = it->second;
  }
  GridPartition part = GridPartition(geom, std::move(labels), t).compressed();
  const int tt = part.t();
  const std::size_t n = static_cast<std::size_t>(std::pow(static_cast<double>(tt), r));
  std::vector<std::vector<double>> arrays(k, std::vector<double>(n, 0.0));
  std::vector<int> idx(r, 0);
  auto perms = all_permutations(r);
  std::vector<double> draw(k);
  do {
    if (!std::is_sorted(idx.begin(), idx.end())) continue;
    double s = 0;
    for (auto& x : draw) s += (x = rng.uniform() + 1e-3);
    for (const auto& perm : perms) {
      std::size_t i = 0;
      for (int l = 0; l < r; ++l) i = i * static_cast<std::size_t>(tt) + static_cast<std::size_t>(idx[perm[l]]);
      for (int a = 0; a < k; ++a) arrays[a][i] = draw[a] / s;
    }
  } while (next_tuple(idx, tt));
  return StepGraphon(r, k, std::move(part), std::move(arrays));
}

}  // namespace hypertest
