#include "hypertest/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hypertest/cutnorm.hpp"
#include "hypertest/density.hpp"
#include "hypertest/rng.hpp"

namespace hypertest {

namespace {

std::size_t array_entries(int t, int r) { return static_cast<std::size_t>(std::pow(static_cast<double>(t), r)); }

// Decodes a row-major index over [t]^r into classes.
void decode_tuple(std::size_t idx, int t, std::span<int> out) {
  for (std::size_t l = out.size(); l-- > 0;) {
    out[l] = static_cast<int>(idx % static_cast<std::size_t>(t));
    idx /= static_cast<std::size_t>(t);
  }
}

std::size_t encode_tuple(std::span<const int> cls, int t) {
  std::size_t idx = 0;
  for (int c : cls) idx = idx * static_cast<std::size_t>(t) + static_cast<std::size_t>(c);
  return idx;
}

// Grid of the vertex step representation of an n-vertex sample: n equal
// cells on singleton axes and one cell on every higher axis.
GridGeometry vertex_geometry(int m, int n) {
  std::vector<std::vector<double>> breaks;
  breaks.push_back(GridGeometry::uniform(1, n).breaks(1));
  for (int l = 2; l <= m; ++l) breaks.push_back({0.0, 1.0});
  return GridGeometry(m, breaks);
}

// Partition of the sample grid induced by p through the sample latents: the
// cell of a vertex tuple gets p's class at the tuple's latent point.
GridPartition sample_partition(const GridPartition& p, int q, const std::vector<std::vector<double>>& latents) {
  const int m = p.r_minus_1();
  const GridGeometry geom = vertex_geometry(m, q);
  const auto& axes = geom.axes();
  std::vector<int> labels(geom.cell_count());
  std::vector<double> point(axes.size());
  std::vector<int> verts;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const auto coords = geom.decode(c);
    for (std::size_t a = 0; a < axes.size(); ++a) {
      verts.clear();
      for (int x : axes[a]) verts.push_back(coords[x]);
      std::sort(verts.begin(), verts.end());
      const bool distinct = std::adjacent_find(verts.begin(), verts.end()) == verts.end();
      if (verts.size() == 1)
        point[a] = latents[0][verts[0]];
      else
        point[a] = distinct ? latents[verts.size() - 1][colex_rank(verts)] : 0.5;
    }
    labels[c] = p.class_of(point);
  }
  return GridPartition(geom, std::move(labels), p.t());
}

std::vector<double> cell_midpoint(const GridGeometry& g, std::size_t cell) {
  const auto c = g.decode(cell);
  std::vector<double> pt(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) {
    const auto& b = g.breaks(g.axis_level(static_cast<int>(a)));
    pt[a] = (b[c[a]] + b[c[a] + 1]) / 2;
  }
  return pt;
}

double delta_theory(double delta, int r, int k, int t, int q0) {
  const double qr = std::pow(static_cast<double>(q0), r);
  const double log_den = std::log(4.0 * k) + qr * std::log(static_cast<double>(k) * t) + std::log(qr);
  return std::exp(std::log(delta) + std::log(factorial(r)) - log_den);
}

}  // namespace

StepGraphon discolor(const StepGraphon& w, int k) {
  if (k < 1 || w.k() % k != 0) throw Error("palette size is not a multiple of k");
  const int t = w.k() / k;
  std::vector<std::vector<double>> arrays(t, std::vector<double>(w.array_size(), 0.0));
  for (int a = 1; a <= t; ++a)
    for (int b = 1; b <= k; ++b) {
      const auto& src = w.array(pair_color(a, b, k));
      for (std::size_t i = 0; i < src.size(); ++i) arrays[a - 1][i] += src[i];
    }
  return StepGraphon(w.r(), t, w.partition(), std::move(arrays), w.iota_allowed());
}

StepGraphon random_coloring(const StepGraphon& u, int k, std::uint64_t seed) {
  if (k < 1) throw Error("k must be positive");
  const int r = u.r(), t = u.k(), tc = u.t();
  Rng rng(seed);
  const std::size_t n = u.array_size();
  std::vector<std::vector<double>> props(n);
  std::vector<int> cls(r), sorted(r);
  for (std::size_t idx = 0; idx < n; ++idx) {
    decode_tuple(idx, tc, cls);
    sorted = cls;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != cls) continue;
    auto& p = props[idx];
    p.resize(static_cast<std::size_t>(t * k));
    for (int a = 0; a < t; ++a) {
      double s = 0;
      for (int b = 0; b < k; ++b) s += p[a * k + b] = rng.uniform() + 1e-3;
      for (int b = 0; b < k; ++b) p[a * k + b] /= s;
    }
  }
  std::vector<std::vector<double>> arrays(t * k, std::vector<double>(n, 0.0));
  for (std::size_t idx = 0; idx < n; ++idx) {
    decode_tuple(idx, tc, cls);
    sorted = cls;
    std::sort(sorted.begin(), sorted.end());
    const auto& p = props[encode_tuple(sorted, tc)];
    for (int a = 1; a <= t; ++a)
      for (int b = 1; b <= k; ++b)
        arrays[pair_color(a, b, k) - 1][idx] = u.at_index(a, idx) * p[(a - 1) * k + (b - 1)];
  }
  return StepGraphon(r, t * k, u.partition(), std::move(arrays), u.iota_allowed());
}

StepGraphon transfer_coloring(const StepGraphon& u_hat, const StepGraphon& v, int k) {
  if (u_hat.r() != v.r()) throw Error("graphons have different uniformity");
  if (u_hat.k() != v.k() * k) throw Error("u_hat must be [t]x[k]-colored where v is t-colored");
  const int r = v.r(), t = v.k();
  std::vector<std::pair<int, int>> pairs;
  GridPartition joint = GridPartition::meet(u_hat.partition(), v.partition(), &pairs);
  const int tj = joint.t();
  const std::size_t n = array_entries(tj, r);
  if (static_cast<double>(n) * t * k > 6e7) throw BudgetExceeded("transferred coloring has too many class tuples");
  std::vector<std::vector<double>> arrays(t * k, std::vector<double>(n, 0.0));
  std::vector<int> cls(r), cu(r), cv(r);
  for (std::size_t idx = 0; idx < n; ++idx) {
    decode_tuple(idx, tj, cls);
    for (int l = 0; l < r; ++l) {
      cu[l] = pairs[cls[l]].first;
      cv[l] = pairs[cls[l]].second;
    }
    const std::size_t iu = u_hat.index(cu), iv = v.index(cv);
    for (int a = 1; a <= t; ++a) {
      double ua = 0;
      for (int b = 1; b <= k; ++b) ua += u_hat.at_index(pair_color(a, b, k), iu);
      const double va = v.at_index(a, iv);
      for (int b = 1; b <= k; ++b)
        arrays[pair_color(a, b, k) - 1][idx] = va * (ua > 0 ? u_hat.at_index(pair_color(a, b, k), iu) / ua : 1.0 / k);
    }
  }
  return StepGraphon(r, t * k, std::move(joint), std::move(arrays), v.iota_allowed());
}

BaseCaseReport base_case_transfer(const std::vector<double>& u_vol, const std::vector<double>& v_hat_vol, int k,
                                  int q0) {
  const int t = static_cast<int>(u_vol.size());
  if (t < 1 || k < 1) throw Error("need t >= 1 and k >= 1");
  if (static_cast<int>(v_hat_vol.size()) != t * k) throw Error("refined volumes need t*k entries");
  if (q0 < 1) throw Error("q0 must be positive");
  double su = 0, sv = 0;
  for (double x : u_vol) {
    if (x < -1e-12) throw Error("volumes must be nonnegative");
    su += x;
  }
  for (double x : v_hat_vol) {
    if (x < -1e-12) throw Error("volumes must be nonnegative");
    sv += x;
  }
  if (std::abs(su - 1) > 1e-9 || std::abs(sv - 1) > 1e-9) throw Error("volumes must sum to one");
  BaseCaseReport rep;
  rep.u_hat.resize(t * k);
  double abs_sum = 0;
  for (int a = 0; a < t; ++a) {
    double la = 0;
    for (int b = 0; b < k; ++b) la += v_hat_vol[a * k + b];
    for (int b = 0; b < k; ++b) rep.u_hat[a * k + b] = u_vol[a] * (la > 0 ? v_hat_vol[a * k + b] / la : 1.0 / k);
    const double d = std::abs(la - u_vol[a]);
    rep.max_delta = std::max(rep.max_delta, d);
    abs_sum += d;
  }
  const StepGraphon wu = StepGraphon::constant(1, t * k, rep.u_hat);
  const StepGraphon wv = StepGraphon::constant(1, t * k, v_hat_vol);
  rep.tv = tv_distance(sample_distribution(wu, q0), sample_distribution(wv, q0)).half_sum;
  rep.bound = std::pow(static_cast<double>(q0), k + 1) / 2 * rep.max_delta;
  rep.bound_holds = rep.tv <= rep.bound + 1e-12;
  rep.union_bound = q0 * abs_sum / 2;
  rep.union_bound_holds = rep.tv <= rep.union_bound + 1e-12;
  return rep;
}

namespace {

// Splits each class P_i of p along the top axis into consecutive pieces whose
// measures in every fiber follow targets(lower cell, i, j). The result labels
// class (i, j) as i * tr + j before compression.
GridPartition stack_fibers(const GridPartition& p, const GridGeometry& lower_grid, int tr,
                           const std::function<double(std::size_t, int, int)>& target,
                           std::vector<std::pair<int, int>>* pairs) {
  const int m = p.r_minus_1();
  const int tp = p.t();
  std::vector<std::vector<double>> breaks(m);
  for (int l = 1; l < m; ++l) {
    std::vector<double> b = p.geometry().breaks(l);
    const auto& extra = lower_grid.breaks(l);
    b.insert(b.end(), extra.begin(), extra.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), b.end());
    breaks[l - 1] = std::move(b);
  }
  breaks[m - 1] = p.geometry().breaks(m);
  const GridGeometry g0(m, breaks);
  const GridPartition p0 = p.geometry() == g0 ? p : p.rebase(g0);
  const int top = g0.cells(m);
  const std::size_t lower_count = g0.cell_count() / static_cast<std::size_t>(top);
  // Cumulative targets per lower cell and class, scaled to the fiber measure.
  std::vector<std::vector<std::vector<double>>> cum(lower_count, std::vector<std::vector<double>>(tp));
  std::vector<double> cuts = g0.breaks(m);
  for (std::size_t lc = 0; lc < lower_count; ++lc) {
    std::vector<double> len(tp, 0.0);
    for (int z = 0; z < top; ++z) len[p0.label(lc * top + z)] += g0.width(m, z);
    for (int i = 0; i < tp; ++i) {
      std::vector<double> tg(tr);
      double s = 0;
      for (int j = 0; j < tr; ++j) s += tg[j] = std::max(0.0, target(lc, i, j));
      auto& c = cum[lc][i];
      c.resize(tr);
      double acc = 0;
      for (int j = 0; j < tr; ++j) {
        acc += s > 0 ? tg[j] * len[i] / s : len[i] / tr;
        c[j] = acc;
      }
      c[tr - 1] = len[i];
      // Map the interior cut points to coordinates on the top axis.
      double before = 0;
      int j = 0;
      for (int z = 0; z < top && j < tr - 1; ++z) {
        if (p0.label(lc * top + z) != i) continue;
        const double w = g0.width(m, z), start = g0.breaks(m)[z];
        while (j < tr - 1 && c[j] < before + w) {
          if (c[j] > before) cuts.push_back(start + (c[j] - before));
          ++j;
        }
        before += w;
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
             cuts.end());
  cuts.front() = 0.0;
  cuts.back() = 1.0;
  breaks[m - 1] = cuts;
  const GridGeometry g2(m, breaks);
  const int top2 = g2.cells(m);
  std::vector<int> labels(g2.cell_count());
  for (std::size_t lc = 0; lc < lower_count; ++lc) {
    for (int z2 = 0; z2 < top2; ++z2) {
      const double mid = (cuts[z2] + cuts[z2 + 1]) / 2;
      const int z = g0.locate(m, mid);
      const int i = p0.label(lc * top + z);
      double pos = mid - g0.breaks(m)[z];
      for (int y = 0; y < z; ++y)
        if (p0.label(lc * top + y) == i) pos += g0.width(m, y);
      const auto& c = cum[lc][i];
      int j = 0;
      while (j < tr - 1 && pos >= c[j]) ++j;
      labels[lc * top2 + z2] = i * tr + j;
    }
  }
  std::vector<int> old_of_new;
  GridPartition out = GridPartition(g2, std::move(labels), tp * tr).compressed(&old_of_new);
  if (pairs) {
    pairs->clear();
    for (int o : old_of_new) pairs->emplace_back(o / tr, o % tr);
  }
  return out;
}

// (r-1)-marginal of p: w^i(y) = measure of class i in the fiber over lower
// cell y. The marginal lives on the lower levels of p's grid with one class
// per lower cell orbit.
StepGraphon marginal_graphon(const GridPartition& p) {
  const int m = p.r_minus_1();
  if (m < 2) throw Error("marginal graphons need r >= 3");
  const GridGeometry& g = p.geometry();
  std::vector<std::vector<double>> lower_breaks;
  for (int l = 1; l < m; ++l) lower_breaks.push_back(g.breaks(l));
  const GridGeometry lg(m - 1, lower_breaks);
  // One class per cell of the lower (m-1)-grid, made symmetric by orbits.
  std::map<std::size_t, int> orbit;
  std::vector<int> labels(lg.cell_count());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    auto [it, fresh] = orbit.emplace(lg.canonical_cell(c), static_cast<int>(orbit.size()));
    labels[c] = it->second;
  }
  const int to = static_cast<int>(orbit.size());
  GridPartition lp(lg, labels, to);
  std::vector<std::size_t> rep_cell(to);
  for (std::size_t c = labels.size(); c-- > 0;) rep_cell[labels[c]] = c;
  // The marginal graphon has uniformity m on grid lg: its faces are the
  // (m-1)-subsets of [m]. A tuple of face classes corresponds to a cell of
  // the m-dimensional lower space of p when the tuple is consistent.
  const int r2 = m;
  const int top = g.cells(m);
  std::vector<std::vector<double>> arrays(p.t(), std::vector<double>(array_entries(to, r2), 0.0));
  std::vector<int> cls(r2);
  // For r2 = 2 (the only case supported) the faces are single coordinates.
  if (r2 != 2) throw Error("marginal graphons are implemented for r = 3 only");
  for (std::size_t idx = 0; idx < arrays[0].size(); ++idx) {
    decode_tuple(idx, to, cls);
    // face l = [2]\{l}: face 0 is coordinate 1, face 1 is coordinate 0.
    const auto c1 = lg.decode(rep_cell[cls[1]]);
    const auto c2 = lg.decode(rep_cell[cls[0]]);
    std::vector<int> coords{c1[0], c2[0], 0};
    for (int z = 0; z < top; ++z) {
      coords[2] = z;
      arrays[p.label(g.encode(coords))][idx] += g.width(m, z);
    }
  }
  return StepGraphon(r2, p.t(), lp, std::move(arrays));
}

}  // namespace

LiftReport lift_coloring(const StepGraphon& u, const LatentSample& sample, const ColoredHypergraph& v_hat, int k,
                         const LiftOptions& opt) {
  const int r = u.r(), t = u.k();
  if (r < 2 || r > 3) throw Error("lift_coloring supports r in {2, 3}");
  const int q = sample.graph.q();
  if (v_hat.n() != q || v_hat.r() != r || v_hat.k() != t * k) throw Error("v_hat must be a [t]x[k]-coloring of the sample");
  if (!(discolor(v_hat, k) == sample.graph.to_hypergraph())) throw Error("v_hat does not discolor to the sample");
  LiftReport rep;
  rep.delta_theory = delta_theory(opt.delta, r, k, t, opt.q0);
  rep.delta_used = std::max(rep.delta_theory, opt.delta_floor);
  const double dl = rep.delta_used;

  RegularityOptions ro;
  ro.mode = opt.reg_mode;
  ro.max_rounds = opt.reg_max_rounds;
  // (1) W1 on P.
  ro.seed = mix_seed(opt.seed, 1);
  const RegularityResult reg_u = weak_regularize(u, dl / 2, 2, ro);
  const GridPartition& p = reg_u.p;
  const StepGraphon& w1 = reg_u.v;
  rep.t_p = p.t();
  rep.stages.push_back({"reg_u_residual", reg_u.achieved, std::to_string(reg_u.rounds) + " rounds"});
  // (2) P' on the sample grid.
  const GridPartition pp = sample_partition(p, q, sample.latents);
  // (3) Z_hat on R.
  ro.seed = mix_seed(opt.seed, 3);
  const StepGraphon vh = VertexGraphon(v_hat).step();
  const RegularityResult reg_v = weak_regularize(vh, dl, 1, ro);
  const GridPartition& rr = reg_v.p;
  const StepGraphon& zh = reg_v.v;
  rep.t_r = rr.t();
  rep.stages.push_back({"reg_vhat_residual", reg_v.achieved, std::to_string(reg_v.rounds) + " rounds"});
  // (4) W2 = sampled W1, colored by Z_hat.
  const StepGraphon w2(r, t, pp, w1.arrays());
  const StepGraphon w2h = transfer_coloring(zh, w2, k);
  rep.t_s = w2h.t();
  if (opt.diagnostics) {
    try {
      rep.stages.push_back({"cut_Zhat_W2hat", cut_distance(zh, w2h, Mode::heuristic, mix_seed(opt.seed, 4)).value,
                            "heuristic"});
    } catch (const BudgetExceeded&) {
      rep.stages.push_back({"cut_Zhat_W2hat", -1, "skipped: budget"});
    }
  }
  // (5) Marginals and the refined partition P''.
  const int tr = rr.t();
  std::vector<std::vector<int>> count(p.t(), std::vector<int>(tr, 0));
  std::vector<std::pair<int, int>> pairs;
  GridPartition ppp;
  if (r == 2) {
    for (int v = 0; v < q; ++v) ++count[pp.label(v)][rr.class_of(cell_midpoint(pp.geometry(), v))];
    std::vector<double> vol = p.class_volumes(), vhat(p.t() * tr);
    for (int i = 0; i < p.t(); ++i)
      for (int j = 0; j < tr; ++j) vhat[i * tr + j] = static_cast<double>(count[i][j]) / q;
    const BaseCaseReport base = base_case_transfer(vol, vhat, tr, opt.q0);
    rep.stages.push_back({"base_case_tv", base.tv, "marginal transfer at r=1"});
    ppp = stack_fibers(p, GridGeometry(0, {}), tr,
                       [&](std::size_t, int i, int j) { return base.u_hat[i * tr + j]; }, &pairs);
  } else {
    const StepGraphon w = marginal_graphon(p);
    // Colored (r-1)-graph of the sample: class (i, j) of each vertex pair.
    SubsetTable pairs_q(q, 2);
    std::vector<Color> colors(pairs_q.size());
    const GridGeometry& sg = pp.geometry();
    for (std::size_t e = 0; e < pairs_q.size(); ++e) {
      auto s = pairs_q[e];
      const std::vector<int> coords{s[0], s[1], 0};
      const std::size_t cell = sg.encode(coords);
      colors[e] = pair_color(pp.label(cell) + 1, rr.class_of(cell_midpoint(sg, cell)) + 1, tr);
    }
    const ColoredHypergraph uh(q, 2, p.t() * tr, std::move(colors));
    // The marginal sample: vertex latents are shared, classes come from P'.
    LatentSample sub;
    sub.latents = {sample.latents[0]};
    sub.graph = SampledColoredGraph(discolor(uh, tr));
    LiftOptions inner = opt;
    inner.delta = opt.delta / 4;
    inner.seed = mix_seed(opt.seed, 5);
    inner.diagnostics = false;
    LiftReport low = lift_coloring(w, sub, uh, tr, inner);
    const StepGraphon& wh = low.u_hat;
    rep.inner.push_back(std::move(low));
    // Lower cell of P's grid -> classes of the two faces under wh's partition.
    const GridGeometry& g = p.geometry();
    std::vector<std::vector<double>> lb{g.breaks(1)};
    const GridGeometry lower = GridGeometry::merge(GridGeometry(1, lb), wh.geometry());
    ppp = stack_fibers(
        p, lower, tr,
        [&](std::size_t lc, int i, int j) {
          // lc indexes cells of the merged lower levels, row-major (x1, x2).
          const int n1 = lower.cells(1);
          const double x1 = (lower.breaks(1)[lc / n1] + lower.breaks(1)[lc / n1 + 1]) / 2;
          const double x2 = (lower.breaks(1)[lc % n1] + lower.breaks(1)[lc % n1 + 1]) / 2;
          const std::vector<double> pt1{x1}, pt2{x2};
          const std::vector<int> cls{wh.partition().class_of(pt2), wh.partition().class_of(pt1)};
          return wh.at(pair_color(i + 1, j + 1, tr), cls);
        },
        &pairs);
  }
  rep.t_pp = ppp.t();
  // (6) W1_hat on P''.
  const int tpp = ppp.t();
  const std::size_t n = array_entries(tpp, r);
  if (static_cast<double>(n) * t * k > 6e7) throw BudgetExceeded("refined partition has too many class tuples");
  std::vector<std::vector<double>> arrays(t * k, std::vector<double>(n, 0.0));
  std::vector<int> cls(r), ci(r), cj(r);
  for (std::size_t idx = 0; idx < n; ++idx) {
    decode_tuple(idx, tpp, cls);
    for (int l = 0; l < r; ++l) {
      ci[l] = pairs[cls[l]].first;
      cj[l] = pairs[cls[l]].second;
    }
    const std::size_t ia = w1.index(ci), ib = zh.index(cj);
    for (int a = 1; a <= t; ++a) {
      double ba = 0;
      for (int b = 1; b <= k; ++b) ba += zh.at_index(pair_color(a, b, k), ib);
      const double aa = w1.at_index(a, ia);
      for (int b = 1; b <= k; ++b)
        arrays[pair_color(a, b, k) - 1][idx] = aa * (ba > 0 ? zh.at_index(pair_color(a, b, k), ib) / ba : 1.0 / k);
    }
  }
  const StepGraphon w1h(r, t * k, ppp, std::move(arrays));
  // (7) Color u.
  rep.u_hat = transfer_coloring(w1h, u, k);
  rep.discolor_error = l1_distance(discolor(rep.u_hat, k), u);
  if (opt.q0 >= r) {
    try {
      rep.tv = tv_distance(sample_distribution(rep.u_hat, opt.q0), sample_distribution(v_hat, opt.q0)).half_sum;
    } catch (const BudgetExceeded&) {
      rep.tv = -1;
    }
  }
  return rep;
}

NdEstimateReport nd_estimate_pipeline(const ColoredHypergraph& g, int k, const ColoredWitness& witness, int q,
                                      const LiftOptions& opt) {
  const int n = g.n(), r = g.r();
  if (q < r || q > n) throw Error("sample size must lie in [r, n]");
  NdEstimateReport rep;
  Rng rng(mix_seed(opt.seed, 0));
  rep.sample_vertices = rng.ordered_sample(n, q);
  const ColoredHypergraph s = induced(g, rep.sample_vertices);
  // Latents consistent with the chosen vertices: X_p falls in vertex p's interval.
  LatentSample ls;
  ls.graph = SampledColoredGraph(s);
  std::vector<double> x1(q);
  for (int p = 0; p < q; ++p) x1[p] = (rep.sample_vertices[p] + rng.uniform()) / n;
  ls.latents.push_back(std::move(x1));
  for (int l = 2; l <= r - 1; ++l) {
    std::vector<double> xs(binomial(q, l));
    for (auto& x : xs) x = rng.uniform();
    ls.latents.push_back(std::move(xs));
  }
  rep.f_hat = -std::numeric_limits<double>::infinity();
  enumerate_colorings(s, k, [&](const ColoredHypergraph& c) {
    const double v = witness(c);
    if (v > rep.f_hat) {
      rep.f_hat = v;
      rep.sample_coloring = c;
    }
  });
  const StepGraphon u = VertexGraphon(g).step();
  LiftOptions lo = opt;
  lo.seed = mix_seed(opt.seed, 1);
  rep.lift = lift_coloring(u, ls, rep.sample_coloring, k, lo);
  const StepGraphon& uh = rep.lift.u_hat;
  // Randomized rounding: shared latents per vertex and per lower subset.
  Rng rr(mix_seed(opt.seed, 2));
  std::vector<std::vector<double>> lat;
  std::vector<double> xv(n);
  for (int v = 0; v < n; ++v) xv[v] = (v + rr.uniform()) / n;
  lat.push_back(xv);
  for (int l = 2; l <= r - 1; ++l) {
    std::vector<double> xs(binomial(n, l));
    for (auto& x : xs) x = rr.uniform();
    lat.push_back(std::move(xs));
  }
  const std::vector<int> fc = face_classes(uh.partition(), r, n, lat);
  SubsetTable edges(n, r);
  std::vector<Color> colors(edges.size());
  std::vector<int> cls(r), face;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto es = edges[e];
    for (int l = 0; l < r; ++l) {
      face.clear();
      for (int i = 0; i < r; ++i)
        if (i != l) face.push_back(es[i]);
      cls[l] = fc[r == 1 ? 0 : colex_rank(face)];
    }
    const int a = g.color(e);
    double tot = 0;
    for (int b = 1; b <= k; ++b) tot += uh.at(pair_color(a, b, k), cls);
    const double y = rr.uniform() * tot;
    int beta = k;
    double acc = 0;
    for (int b = 1; b <= k; ++b) {
      acc += uh.at(pair_color(a, b, k), cls);
      if (y < acc) {
        beta = b;
        break;
      }
    }
    if (tot <= 0) beta = 1 + static_cast<int>(rr.below(static_cast<std::uint64_t>(k)));
    colors[e] = pair_color(a, beta, k);
  }
  rep.g_coloring = ColoredHypergraph(n, r, g.k() * k, std::move(colors));
  rep.transferred = witness(rep.g_coloring);
  rep.gap = std::abs(rep.f_hat - rep.transferred);
  return rep;
}

}  // namespace hypertest
