#include "hypertest/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hypertest/rng.hpp"

namespace hypertest {

CouplingArray::CouplingArray(int r, int k, int q, std::vector<std::vector<double>> arrays)
    : r_(r), k_(k), q_(q), arrays_(std::move(arrays)) {
  if (r < 1 || k < 1 || q < 1) throw Error("coupling array needs r, k, q >= 1");
  if (static_cast<int>(arrays_.size()) != k) throw Error("coupling array needs one array per color");
  const double size = std::pow(static_cast<double>(q), r);
  if (size > 6e7) throw BudgetExceeded("coupling array too large");
  for (const auto& a : arrays_) {
    if (static_cast<double>(a.size()) != size) throw Error("coupling array has the wrong size");
    for (double x : a)
      if (!(std::abs(x) <= 1.0 + 1e-12)) throw Error("coupling array entries must lie in [-1, 1]");
  }
}

std::size_t CouplingArray::index(std::span<const int> classes) const {
  std::size_t idx = 0;
  for (int c : classes) idx = idx * static_cast<std::size_t>(q_) + static_cast<std::size_t>(c);
  return idx;
}

double CouplingArray::at(int alpha, std::span<const int> classes) const { return arrays_[alpha - 1][index(classes)]; }

CouplingArray CouplingArray::operator-() const {
  auto a = arrays_;
  for (auto& v : a)
    for (auto& x : v) x = -x;
  return CouplingArray(r_, k_, q_, std::move(a));
}

void EnergyForm::build_incidence() {
  incidence.assign(atoms, {});
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (int l = 0; l < r; ++l) {
      const auto x = terms[i].atoms[l];
      auto& inc = incidence[x];
      if (inc.empty() || inc.back() != i) inc.push_back(static_cast<std::uint32_t>(i));
    }
  }
}

EnergyForm energy_form(const ColoredHypergraph& h) {
  const int n = h.n(), r = h.r();
  if (r > 4) throw Error("uniformity above 4 is not supported");
  EnergyForm f;
  f.r = r;
  f.k = h.k();
  f.atoms = r == 1 ? 1 : static_cast<std::size_t>(binomial(n, r - 1));
  const double w = std::pow(static_cast<double>(n), -r);
  SubsetTable edges(n, r);
  std::vector<int> u(r), face;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto s = edges[e];
    std::copy(s.begin(), s.end(), u.begin());
    do {
      EnergyTerm t;
      t.color = h.color(e);
      t.weight = w;
      for (int j = 0; j < r; ++j) {
        face.clear();
        for (int x : s)
          if (x != u[j]) face.push_back(x);
        t.atoms[j] = static_cast<std::uint32_t>(r == 1 ? 0 : colex_rank(face));
      }
      f.terms.push_back(t);
    } while (std::next_permutation(u.begin(), u.end()));
  }
  f.build_incidence();
  return f;
}

EnergyForm energy_form(const StepGraphon& w) {
  const int r = w.r();
  const GridGeometry& geom = w.geometry();
  require_budget(cell_config_count(geom, r), "graphon energy form");
  EnergyForm f;
  f.r = r;
  f.k = w.k();
  std::map<std::size_t, std::uint32_t> orbit_id;
  std::vector<std::uint32_t> atom_of_cell(geom.cell_count());
  for (std::size_t c = 0; c < geom.cell_count(); ++c) {
    auto [it, fresh] = orbit_id.emplace(geom.canonical_cell(c), static_cast<std::uint32_t>(orbit_id.size()));
    atom_of_cell[c] = it->second;
  }
  f.atoms = orbit_id.size();
  std::map<std::pair<std::array<std::uint32_t, 4>, std::uint16_t>, double> acc;
  std::vector<int> cls(r);
  for_each_cell_config(geom, r, [&](double vol, std::span<const std::size_t> faces) {
    std::array<std::uint32_t, 4> atoms{};
    for (int l = 0; l < r; ++l) {
      atoms[l] = atom_of_cell[faces[l]];
      cls[l] = w.partition().label(faces[l]);
    }
    const std::size_t idx = w.index(cls);
    for (int a = 1; a <= w.k(); ++a) {
      const double v = vol * w.at_index(a, idx);
      if (v != 0.0) acc[{atoms, static_cast<std::uint16_t>(a)}] += v;
    }
  });
  for (const auto& [key, v] : acc) f.terms.push_back({key.first, key.second, v});
  f.build_incidence();
  return f;
}

EnergyForm energy_form(std::span<const CutForm> forms) {
  if (forms.empty()) throw Error("no forms given");
  EnergyForm f;
  f.r = forms[0].r;
  f.k = static_cast<int>(forms.size());
  f.atoms = forms[0].atoms;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].atoms != f.atoms || forms[i].r != f.r) throw Error("forms disagree on atoms");
    for (const auto& t : forms[i].terms) f.terms.push_back({t.atoms, static_cast<std::uint16_t>(i + 1), t.weight});
  }
  f.build_incidence();
  return f;
}

namespace {

void check_coupling(const EnergyForm& f, const CouplingArray& j) {
  if (j.r() != f.r) throw Error("coupling array has the wrong uniformity");
  if (j.k() < f.k) throw Error("coupling array has fewer colors than the input");
}

double term_value(const EnergyForm& f, const CouplingArray& j, const EnergyTerm& t, std::span<const int> cls) {
  std::size_t idx = 0;
  for (int l = 0; l < f.r; ++l) idx = idx * static_cast<std::size_t>(j.q()) + static_cast<std::size_t>(cls[t.atoms[l]]);
  return t.weight * j.at_index(t.color, idx);
}

// Energy change when atom x moves to class c.
double move_delta(const EnergyForm& f, const CouplingArray& j, std::vector<int>& cls, std::uint32_t x, int c) {
  const int old = cls[x];
  if (old == c) return 0.0;
  double before = 0, after = 0;
  for (auto ti : f.incidence[x]) before += term_value(f, j, f.terms[ti], cls);
  cls[x] = c;
  for (auto ti : f.incidence[x]) after += term_value(f, j, f.terms[ti], cls);
  cls[x] = old;
  return after - before;
}

GseResult gse_exact(const EnergyForm& f, const CouplingArray& j) {
  const int q = j.q();
  const std::size_t a = f.atoms;
  require_budget(std::pow(static_cast<double>(q), static_cast<double>(a)), "exact ground state energy");
  std::vector<int> cls(a, 0);
  double e = energy(f, j, cls);
  GseResult out{e, cls, Mode::exact};
  if (q == 1) return out;
  for (;;) {
    std::size_t i = a;
    while (i > 0 && cls[i - 1] == q - 1) {
      e += move_delta(f, j, cls, static_cast<std::uint32_t>(i - 1), 0);
      cls[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    e += move_delta(f, j, cls, static_cast<std::uint32_t>(i - 1), cls[i - 1] + 1);
    ++cls[i - 1];
    if (e > out.value + 1e-12) {
      out.value = e;
      out.atom_class = cls;
    }
  }
  out.value = energy(f, j, out.atom_class);
  return out;
}

GseResult anneal_once(const EnergyForm& f, const CouplingArray& j, Rng& rng, const AnnealOptions& opt) {
  const int q = j.q();
  const std::size_t a = f.atoms;
  std::vector<int> cls(a);
  for (auto& c : cls) c = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
  double e = energy(f, j, cls);
  std::vector<int> best = cls;
  double best_e = e;
  if (q > 1 && a > 0) {
    const std::size_t moves = opt.moves_per_level > 0
                                  ? static_cast<std::size_t>(opt.moves_per_level)
                                  : std::max<std::size_t>(16, a * static_cast<std::size_t>(q - 1));
    auto propose = [&](std::uint32_t& x, int& c) {
      x = static_cast<std::uint32_t>(rng.below(a));
      c = static_cast<int>(rng.below(static_cast<std::uint64_t>(q - 1)));
      if (c >= cls[x]) ++c;
    };
    double t0 = 0;
    for (std::size_t i = 0; i < moves; ++i) {
      std::uint32_t x;
      int c;
      propose(x, c);
      t0 = std::max(t0, std::abs(move_delta(f, j, cls, x, c)));
    }
    if (t0 > 0) {
      for (double temp = t0; temp > t0 * opt.final_ratio; temp *= opt.cooling) {
        for (std::size_t i = 0; i < moves; ++i) {
          std::uint32_t x;
          int c;
          propose(x, c);
          const double d = move_delta(f, j, cls, x, c);
          if (d >= 0 || rng.uniform() < std::exp(d / temp)) {
            cls[x] = c;
            e += d;
            if (e > best_e) {
              best_e = e;
              best = cls;
            }
          }
        }
      }
    }
    // Greedy polish from the best state seen.
    cls = best;
    e = best_e;
    for (bool improved = true; improved;) {
      improved = false;
      for (std::uint32_t x = 0; x < a; ++x)
        for (int c = 0; c < q; ++c) {
          const double d = move_delta(f, j, cls, x, c);
          if (d > 1e-12) {
            cls[x] = c;
            e += d;
            improved = true;
          }
        }
    }
    best = cls;
  }
  return {energy(f, j, best), best, Mode::heuristic};
}

}  // namespace

double energy(const EnergyForm& f, const CouplingArray& j, std::span<const int> atom_class) {
  check_coupling(f, j);
  if (atom_class.size() != f.atoms) throw Error("partition size does not match the number of tuples");
  for (int c : atom_class)
    if (c < 0 || c >= j.q()) throw Error("partition class count does not match the coupling array");
  double s = 0;
  for (const auto& t : f.terms) s += term_value(f, j, t, atom_class);
  return s;
}

double energy(const ColoredHypergraph& h, const CouplingArray& j, const TuplePartition& p) {
  if (p.n != h.n() || p.r_minus_1 != h.r() - 1) throw Error("partition does not match the hypergraph");
  if (p.t != j.q()) throw Error("partition class count does not match the coupling array");
  return energy(energy_form(h), j, p.classes);
}

GseResult gse_form(const EnergyForm& f, const CouplingArray& j, Mode mode, std::uint64_t seed,
                   const AnnealOptions& opt) {
  check_coupling(f, j);
  if (mode == Mode::exact) return gse_exact(f, j);
  if (opt.restarts < 1) throw Error("restarts must be positive");
  std::vector<GseResult> runs(opt.restarts);
  parallel_for(static_cast<std::size_t>(opt.restarts), [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    runs[i] = anneal_once(f, j, rng, opt);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value > runs[best].value) best = i;
  return runs[best];
}

GraphGseResult gse(const ColoredHypergraph& h, const CouplingArray& j, Mode mode, std::uint64_t seed,
                   const AnnealOptions& opt) {
  const GseResult g = gse_form(energy_form(h), j, mode, seed, opt);
  return {g.value, TuplePartition(h.n(), h.r() - 1, j.q(), g.atom_class), g.mode};
}

GseResult gse_graphon(const StepGraphon& w, const CouplingArray& j, Mode mode, std::uint64_t seed,
                      const AnnealOptions& opt) {
  return gse_form(energy_form(w), j, mode, seed, opt);
}

std::vector<double> make_b0(int r) {
  const std::size_t side = std::size_t{1} << r;
  std::vector<double> b(static_cast<std::size_t>(std::pow(static_cast<double>(side), r)), 0.0);
  for (std::size_t idx = 0; idx < b.size(); ++idx) {
    std::size_t x = idx;
    bool one = true;
    for (int l = r - 1; l >= 0; --l) {
      const std::size_t mask = x % side;
      x /= side;
      one = one && ((mask >> l) & 1u);
    }
    b[idx] = one ? 1.0 : 0.0;
  }
  return b;
}

CouplingArray make_reduction_arrays(std::span<const int> a, int t, int r, std::span<const double> y) {
  const std::size_t tuples = static_cast<std::size_t>(std::pow(static_cast<double>(t), r));
  if (a.size() != tuples) throw Error("sign array has the wrong size");
  for (int s : a)
    if (s != 1 && s != -1) throw Error("sign array entries must be +1 or -1");
  const int side = 1 << r;
  const int q = t * side;
  const std::vector<double> b0 = make_b0(r);
  const std::size_t size = static_cast<std::size_t>(std::pow(static_cast<double>(q), r));
  std::vector<std::vector<double>> arrays;
  for (double ya : y) {
    std::vector<double> j(size, 0.0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      std::size_t x = idx, ai = 0, bi = 0, amul = 1, bmul = 1;
      for (int l = r - 1; l >= 0; --l) {
        const std::size_t c = x % static_cast<std::size_t>(q);
        x /= static_cast<std::size_t>(q);
        ai += (c / side) * amul;
        bi += (c % side) * bmul;
        amul *= static_cast<std::size_t>(t);
        bmul *= static_cast<std::size_t>(side);
      }
      j[idx] = ya * a[ai] * b0[bi];
    }
    arrays.push_back(std::move(j));
  }
  return CouplingArray(r, static_cast<int>(y.size()), q, std::move(arrays));
}

std::vector<int> reduced_to_partition(std::span<const int> reduced, int r) {
  std::vector<int> out(reduced.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) out[i] = reduced[i] >> r;
  return out;
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

ConcentrationReport concentration_experiment(const ColoredHypergraph& h, const CouplingArray& j, int sample_size,
                                             int trials, std::uint64_t seed, std::vector<double> deviations,
                                             const AnnealOptions& opt) {
  if (sample_size < h.r() || sample_size > h.n()) throw Error("sample size must lie in [r, n]");
  if (trials < 1) throw Error("trials must be positive");
  ConcentrationReport rep;
  rep.sample_size = sample_size;
  rep.trials = trials;
  rep.values.resize(trials);
  for (int i = 0; i < trials; ++i) {
    const ColoredHypergraph s = sample_subgraph(h, sample_size, mix_seed(seed, 2 * i)).to_hypergraph();
    rep.values[i] = gse(s, j, Mode::heuristic, mix_seed(seed, 2 * i + 1), opt).value;
  }
  std::vector<double> sorted = rep.values;
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) rep.mean += v;
  rep.mean /= trials;
  rep.q1 = quantile(sorted, 0.25);
  rep.median = quantile(sorted, 0.5);
  rep.q3 = quantile(sorted, 0.75);
  rep.iqr = rep.q3 - rep.q1;
  rep.deviations = std::move(deviations);
  for (double d : rep.deviations) {
    int hits = 0;
    for (double v : rep.values) hits += std::abs(v - rep.mean) >= d;
    rep.tail_freq.push_back(static_cast<double>(hits) / trials);
    rep.azuma_bound.push_back(2 * std::exp(-d * d * sample_size / (8.0 * h.r() * h.r())));
  }
  return rep;
}

}  // namespace hypertest
