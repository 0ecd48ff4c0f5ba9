#include "hypertest/cutnorm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "hypertest/energy.hpp"
#include "hypertest/rng.hpp"

namespace hypertest {

SymArray::SymArray(int r, int n, std::vector<double> values) : r_(r), n_(n), values_(std::move(values)) {
  if (r < 1 || n < 1) throw Error("array needs r >= 1 and n >= 1");
  const double size = std::pow(static_cast<double>(n), r);
  if (size > 6e7) throw BudgetExceeded("array too large");
  if (static_cast<double>(values_.size()) != size) throw Error("array has the wrong number of entries");
  std::vector<int> u(r, 0), v(r);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    std::size_t x = i;
    for (int l = r - 1; l >= 0; --l) {
      u[l] = static_cast<int>(x % n);
      x /= n;
    }
    v = u;
    std::sort(v.begin(), v.end());
    if (std::abs(values_[index(v)] - values_[i]) > 1e-12) throw Error("array is not symmetric");
  }
}

SymArray SymArray::zeros(int r, int n) {
  return SymArray(r, n, std::vector<double>(static_cast<std::size_t>(std::pow(static_cast<double>(n), r)), 0.0));
}

std::size_t SymArray::index(std::span<const int> u) const {
  std::size_t idx = 0;
  for (int x : u) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(x);
  return idx;
}

void SymArray::set_symmetric(std::span<const int> u, double v) {
  std::vector<int> w(u.begin(), u.end());
  std::sort(w.begin(), w.end());
  do values_[index(w)] = v;
  while (std::next_permutation(w.begin(), w.end()));
}

SymArray SymArray::from_color(const EdgeColoring& g, Color alpha) {
  SymArray a = zeros(g.r(), g.n());
  SubsetTable edges(g.n(), g.r());
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (g.color(e) == alpha) a.set_symmetric(edges[e], 1.0);
  return a;
}

SymArray SymArray::operator-(const SymArray& o) const {
  if (r_ != o.r_ || n_ != o.n_) throw Error("array shapes differ");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - o.values_[i];
  SymArray out;
  out.r_ = r_;
  out.n_ = n_;
  out.values_ = std::move(v);
  return out;
}

SymArray SymArray::operator+(const SymArray& o) const {
  if (r_ != o.r_ || n_ != o.n_) throw Error("array shapes differ");
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
  SymArray out;
  out.r_ = r_;
  out.n_ = n_;
  out.values_ = std::move(v);
  return out;
}

SymArray random_sym_array(int r, int n, std::uint64_t seed, bool zero_diagonal) {
  Rng rng(seed);
  SymArray a = SymArray::zeros(r, n);
  std::vector<int> u(r, 0);
  // Non-decreasing tuples in lex order.
  for (;;) {
    bool distinct = true;
    for (int l = 1; l < r; ++l) distinct = distinct && u[l] != u[l - 1];
    const double v = 2 * rng.uniform() - 1;
    if (distinct || !zero_diagonal) a.set_symmetric(u, v);
    int l = r - 1;
    while (l >= 0 && u[l] == n - 1) --l;
    if (l < 0) break;
    ++u[l];
    for (int m = l + 1; m < r; ++m) u[m] = u[l];
  }
  return a;
}

TuplePartition::TuplePartition(int n_, int r1, int t_, std::vector<int> cls)
    : n(n_), r_minus_1(r1), t(t_), classes(std::move(cls)) {
  if (t < 1) throw Error("partition needs at least one class");
  const std::size_t expect = r1 == 0 ? 1 : static_cast<std::size_t>(binomial(n, r1));
  if (classes.size() != expect) throw Error("partition has the wrong number of tuples");
  for (int c : classes)
    if (c < 0 || c >= t) throw Error("partition class out of range");
}

TuplePartition TuplePartition::trivial(int n, int r1) {
  const std::size_t size = r1 == 0 ? 1 : static_cast<std::size_t>(binomial(n, r1));
  return TuplePartition(n, r1, 1, std::vector<int>(size, 0));
}

TuplePartition TuplePartition::random(int n, int r1, int t, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t size = r1 == 0 ? 1 : static_cast<std::size_t>(binomial(n, r1));
  std::vector<int> c(size);
  for (auto& x : c) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(t)));
  return TuplePartition(n, r1, t, std::move(c));
}

void CutForm::aggregate() {
  std::sort(terms.begin(), terms.end(), [](const CutTerm& a, const CutTerm& b) { return a.atoms < b.atoms; });
  std::vector<CutTerm> out;
  for (const auto& t : terms) {
    if (!out.empty() && out.back().atoms == t.atoms)
      out.back().weight += t.weight;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const CutTerm& t) { return t.weight == 0.0; });
  terms = std::move(out);
}

CutForm cut_form(const SymArray& a) {
  const int r = a.r(), n = a.n();
  if (r > 4) throw Error("uniformity above 4 is not supported");
  CutForm f;
  f.r = r;
  f.atoms = r == 1 ? 1 : static_cast<std::size_t>(binomial(n, r - 1));
  const double scale = std::pow(static_cast<double>(n), -r);
  std::vector<int> u(r, 0), face;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t x = i;
    for (int l = r - 1; l >= 0; --l) {
      u[l] = static_cast<int>(x % n);
      x /= n;
    }
    const double v = a.values()[i];
    if (v == 0.0) continue;
    CutTerm t;
    t.weight = v * scale;
    bool ok = true;
    for (int j = 0; j < r && ok; ++j) {
      face.clear();
      for (int l = 0; l < r; ++l)
        if (l != j) face.push_back(u[l]);
      std::sort(face.begin(), face.end());
      for (std::size_t l = 1; l < face.size(); ++l) ok = ok && face[l] != face[l - 1];
      t.atoms[j] = static_cast<std::uint32_t>(r == 1 ? 0 : colex_rank(face));
    }
    if (ok) f.terms.push_back(t);
  }
  f.aggregate();
  return f;
}

GraphonCutForms graphon_cut_forms(const StepGraphon& u, const StepGraphon& w, const GridGeometry* extra) {
  if (u.r() != w.r() || u.k() != w.k()) throw Error("graphons have different (r,k)");
  const int r = u.r(), k = u.k();
  GraphonCutForms out;
  GridGeometry geom = GridGeometry::merge(u.geometry(), w.geometry());
  if (extra) geom = GridGeometry::merge(geom, *extra);
  out.geometry = geom;
  require_budget(cell_config_count(geom, r), "graphon cut form");
  const StepGraphon ur = u.geometry() == geom ? u : u.rebase(geom);
  const StepGraphon wr = w.geometry() == geom ? w : w.rebase(geom);
  std::map<std::size_t, std::uint32_t> orbit_id;
  out.atom_of_cell.resize(geom.cell_count());
  for (std::size_t c = 0; c < geom.cell_count(); ++c) {
    const std::size_t canon = geom.canonical_cell(c);
    auto [it, fresh] = orbit_id.emplace(canon, static_cast<std::uint32_t>(orbit_id.size()));
    if (fresh) out.atom_cell.push_back(canon);
    out.atom_of_cell[c] = it->second;
  }
  out.atoms = orbit_id.size();
  out.per_color.assign(k, CutForm{});
  for (auto& f : out.per_color) {
    f.r = r;
    f.atoms = out.atoms;
  }
  std::vector<int> cu(r), cw(r);
  for_each_cell_config(geom, r, [&](double vol, std::span<const std::size_t> faces) {
    CutTerm t;
    for (int l = 0; l < r; ++l) {
      cu[l] = ur.partition().label(faces[l]);
      cw[l] = wr.partition().label(faces[l]);
      t.atoms[l] = out.atom_of_cell[faces[l]];
    }
    const std::size_t iu = ur.index(cu), iw = wr.index(cw);
    for (int a = 1; a <= k; ++a) {
      t.weight = vol * (ur.at_index(a, iu) - wr.at_index(a, iw));
      if (t.weight != 0.0) out.per_color[a - 1].terms.push_back(t);
    }
  });
  for (auto& f : out.per_color) f.aggregate();
  return out;
}

namespace {

using Membership = std::vector<std::vector<char>>;

Membership to_membership(const CutForm& f, const CutWitness& s) {
  if (static_cast<int>(s.sets.size()) != f.r) throw Error("witness has the wrong number of sets");
  Membership m(f.r, std::vector<char>(f.atoms, 0));
  for (int j = 0; j < f.r; ++j)
    for (auto x : s.sets[j]) {
      if (x >= f.atoms) throw Error("witness atom out of range");
      m[j][x] = 1;
    }
  return m;
}

CutWitness to_witness(const Membership& m) {
  CutWitness w;
  for (const auto& set : m) {
    std::vector<std::uint32_t> s;
    for (std::size_t x = 0; x < set.size(); ++x)
      if (set[x]) s.push_back(static_cast<std::uint32_t>(x));
    w.sets.push_back(std::move(s));
  }
  return w;
}

double value_of(const CutForm& f, const Membership& m) {
  double s = 0;
  for (const auto& t : f.terms) {
    bool in = true;
    for (int j = 0; j < f.r && in; ++j) in = m[j][t.atoms[j]];
    if (in) s += t.weight;
  }
  return s;
}

std::size_t tuple_index(const CutTerm& t, std::span<const int> cls, int tc, int len) {
  std::size_t idx = 0;
  for (int j = 0; j < len; ++j) idx = idx * static_cast<std::size_t>(tc) + static_cast<std::size_t>(cls[t.atoms[j]]);
  return idx;
}

std::vector<double> class_sums(const CutForm& f, const Membership& m, std::span<const int> cls, int tc) {
  std::vector<double> acc(static_cast<std::size_t>(std::pow(static_cast<double>(tc), f.r)), 0.0);
  for (const auto& t : f.terms) {
    bool in = true;
    for (int j = 0; j < f.r && in; ++j) in = m[j][t.atoms[j]];
    if (in) acc[tuple_index(t, cls, tc, f.r)] += t.weight;
  }
  return acc;
}

double abs_sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::abs(x);
  return s;
}

void check_classes(const CutForm& f, std::span<const int> cls, int t) {
  if (cls.size() != f.atoms) throw Error("partition size does not match the number of tuples");
  for (int c : cls)
    if (c < 0 || c >= t) throw Error("partition class out of range");
}

// Sets S_1..S_{r-1} from an enumeration mask.
void decode_mask(std::uint64_t mask, std::size_t a, int sets, Membership& m) {
  for (int j = 0; j < sets; ++j)
    for (std::size_t x = 0; x < a; ++x) m[j][x] = static_cast<char>((mask >> (j * a + x)) & 1u);
}

}  // namespace

double cut_value(const CutForm& f, const CutWitness& s) { return value_of(f, to_membership(f, s)); }

double cut_p_value(const CutForm& f, std::span<const int> atom_class, int t, const CutWitness& s) {
  check_classes(f, atom_class, t);
  return abs_sum(class_sums(f, to_membership(f, s), atom_class, t));
}

CutResult form_cutnorm_exact(const CutForm& f, int max_bits) {
  const int r = f.r;
  const std::size_t a = f.atoms;
  const double bits = static_cast<double>(r - 1) * static_cast<double>(a);
  if (bits > max_bits || bits > 62) throw BudgetExceeded("exact cut norm needs 2^" + std::to_string(bits) + " sets");
  require_budget(std::ldexp(1.0, static_cast<int>(bits)), "exact cut norm");
  const std::uint64_t total = std::uint64_t{1} << static_cast<int>(bits);
  // Outer masks are split across workers; ties keep the smallest mask.
  const unsigned workers = std::max(1u, std::min<unsigned>(thread_count(), static_cast<unsigned>(total)));
  struct Best {
    double value = -1;
    std::uint64_t mask = 0;
    bool negative = false;
  };
  std::vector<Best> best(workers);
  parallel_for(workers, [&](std::size_t w) {
    Membership m(r, std::vector<char>(a, 0));
    std::vector<double> coef(a);
    for (std::uint64_t mask = w; mask < total; mask += workers) {
      decode_mask(mask, a, r - 1, m);
      std::fill(coef.begin(), coef.end(), 0.0);
      for (const auto& t : f.terms) {
        bool in = true;
        for (int j = 0; j + 1 < r && in; ++j) in = m[j][t.atoms[j]];
        if (in) coef[t.atoms[r - 1]] += t.weight;
      }
      double pos = 0, neg = 0;
      for (double c : coef) (c > 0 ? pos : neg) += c;
      const bool negative = -neg > pos;
      const double v = negative ? -neg : pos;
      if (v > best[w].value) best[w] = {v, mask, negative};
    }
  });
  Best b = best[0];
  for (const auto& x : best)
    if (x.value > b.value || (x.value == b.value && x.mask < b.mask)) b = x;
  Membership m(r, std::vector<char>(a, 0));
  decode_mask(b.mask, a, r - 1, m);
  std::vector<double> coef(a, 0.0);
  for (const auto& t : f.terms) {
    bool in = true;
    for (int j = 0; j + 1 < r && in; ++j) in = m[j][t.atoms[j]];
    if (in) coef[t.atoms[r - 1]] += t.weight;
  }
  for (std::size_t x = 0; x < a; ++x) m[r - 1][x] = b.negative ? coef[x] < 0 : coef[x] > 0;
  CutResult out;
  out.witness = to_witness(m);
  out.value = std::abs(value_of(f, m));
  out.mode = Mode::exact;
  return out;
}

namespace {

// Linear coefficient of each atom in set j with the other sets fixed; `sign`
// optionally weights terms by their class-tuple sign.
void coefficients(const CutForm& f, const Membership& m, int j, std::vector<double>& coef,
                  const std::function<double(const CutTerm&)>& sign) {
  std::fill(coef.begin(), coef.end(), 0.0);
  for (const auto& t : f.terms) {
    bool in = true;
    for (int l = 0; l < f.r && in; ++l)
      if (l != j) in = m[l][t.atoms[l]];
    if (in) coef[t.atoms[j]] += sign ? sign(t) * t.weight : t.weight;
  }
}

Membership initial_sets(const CutForm& f, int restart, Rng& rng) {
  Membership m(f.r, std::vector<char>(f.atoms, 1));
  if (restart >= 2)
    for (auto& set : m)
      for (auto& x : set) x = rng.coin();
  return m;
}

}  // namespace

CutResult form_cutnorm_heuristic(const CutForm& f, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw Error("restarts must be positive");
  std::vector<CutResult> runs(restarts);
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    Membership m = initial_sets(f, static_cast<int>(i), rng);
    std::vector<double> coef(f.atoms);
    double cur = sign * value_of(f, m);
    for (int sweep = 0; sweep < 1000; ++sweep) {
      for (int j = 0; j < f.r; ++j) {
        coefficients(f, m, j, coef, nullptr);
        for (std::size_t x = 0; x < f.atoms; ++x) {
          if (sign * coef[x] > 0) m[j][x] = 1;
          else if (sign * coef[x] < 0) m[j][x] = 0;
        }
      }
      const double next = sign * value_of(f, m);
      if (next <= cur + 1e-15) break;
      cur = next;
    }
    runs[i].value = std::abs(value_of(f, m));
    runs[i].witness = to_witness(m);
    runs[i].mode = Mode::heuristic;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value > runs[best].value) best = i;
  return runs[best];
}

CutResult form_cutnorm_p_exact(const CutForm& f, std::span<const int> atom_class, int t, int max_bits) {
  check_classes(f, atom_class, t);
  const int r = f.r;
  const std::size_t a = f.atoms;
  const double bits = static_cast<double>(r - 1) * static_cast<double>(a);
  if (bits > max_bits || bits > 62) throw BudgetExceeded("exact cut-P norm needs 2^" + std::to_string(bits) + " sets");
  const std::size_t lower = static_cast<std::size_t>(std::pow(static_cast<double>(t), r - 1));
  std::vector<std::vector<std::uint32_t>> members(t);
  for (std::size_t x = 0; x < a; ++x) members[atom_class[x]].push_back(static_cast<std::uint32_t>(x));
  // Per class of the last atom: best subset by direct enumeration or by sign
  // patterns over the lower class tuples, whichever is smaller.
  double inner = 0;
  for (const auto& mem : members) inner += std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(mem.size(), lower)));
  require_budget(std::ldexp(1.0, static_cast<int>(bits)) * inner, "exact cut-P norm");
  const std::uint64_t total = std::uint64_t{1} << static_cast<int>(bits);

  auto best_last = [&](const std::vector<double>& coef, std::vector<char>& last, double& value) {
    value = 0;
    std::vector<double> sums(lower);
    for (int c = 0; c < t; ++c) {
      const auto& mem = members[c];
      double best = 0;
      std::uint64_t best_choice = 0;
      const bool by_subset = mem.size() <= lower;
      const std::uint64_t choices = std::uint64_t{1} << (by_subset ? mem.size() : lower);
      for (std::uint64_t ch = 0; ch < choices; ++ch) {
        double v = 0;
        if (by_subset) {
          std::fill(sums.begin(), sums.end(), 0.0);
          for (std::size_t i = 0; i < mem.size(); ++i)
            if ((ch >> i) & 1u)
              for (std::size_t jl = 0; jl < lower; ++jl) sums[jl] += coef[jl * a + mem[i]];
          for (double s : sums) v += std::abs(s);
        } else {
          for (auto x : mem) {
            double s = 0;
            for (std::size_t jl = 0; jl < lower; ++jl) s += ((ch >> jl) & 1u ? -1.0 : 1.0) * coef[jl * a + x];
            v += std::max(0.0, s);
          }
        }
        if (v > best) {
          best = v;
          best_choice = ch;
        }
      }
      value += best;
      for (std::size_t i = 0; i < mem.size(); ++i) {
        const auto x = mem[i];
        if (by_subset) {
          last[x] = static_cast<char>((best_choice >> i) & 1u);
        } else {
          double s = 0;
          for (std::size_t jl = 0; jl < lower; ++jl)
            s += ((best_choice >> jl) & 1u ? -1.0 : 1.0) * coef[jl * a + x];
          last[x] = s > 0;
        }
      }
    }
  };
  auto lower_coef = [&](const Membership& m, std::vector<double>& coef) {
    std::fill(coef.begin(), coef.end(), 0.0);
    for (const auto& term : f.terms) {
      bool in = true;
      for (int j = 0; j + 1 < r && in; ++j) in = m[j][term.atoms[j]];
      if (in) coef[tuple_index(term, atom_class, t, r - 1) * a + term.atoms[r - 1]] += term.weight;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(thread_count(), static_cast<unsigned>(total)));
  std::vector<std::pair<double, std::uint64_t>> best(workers, {-1.0, 0});
  parallel_for(workers, [&](std::size_t w) {
    Membership m(r, std::vector<char>(a, 0));
    std::vector<double> coef(lower * a);
    for (std::uint64_t mask = w; mask < total; mask += workers) {
      decode_mask(mask, a, r - 1, m);
      lower_coef(m, coef);
      double v;
      best_last(coef, m[r - 1], v);
      if (v > best[w].first) best[w] = {v, mask};
    }
  });
  auto b = best[0];
  for (const auto& x : best)
    if (x.first > b.first || (x.first == b.first && x.second < b.second)) b = x;
  Membership m(r, std::vector<char>(a, 0));
  decode_mask(b.second, a, r - 1, m);
  std::vector<double> coef(lower * a);
  lower_coef(m, coef);
  double v;
  best_last(coef, m[r - 1], v);
  CutResult out;
  out.witness = to_witness(m);
  const auto sums = class_sums(f, m, atom_class, t);
  out.value = abs_sum(sums);
  for (double s : sums) out.witness.signs.push_back(s < 0 ? -1 : 1);
  out.mode = Mode::exact;
  return out;
}

CutResult form_cutnorm_p_heuristic(const CutForm& f, std::span<const int> atom_class, int t, int restarts,
                                   std::uint64_t seed) {
  check_classes(f, atom_class, t);
  if (restarts < 1) throw Error("restarts must be positive");
  std::vector<CutResult> runs(restarts);
  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t i) {
    Rng rng(mix_seed(seed, i));
    Membership m = initial_sets(f, static_cast<int>(i), rng);
    std::vector<double> coef(f.atoms);
    std::vector<double> sums = class_sums(f, m, atom_class, t);
    if (i % 2 == 1)
      for (auto& s : sums) s = -s;
    double cur = abs_sum(sums);
    for (int sweep = 0; sweep < 1000; ++sweep) {
      std::vector<double> sign(sums.size());
      for (std::size_t c = 0; c < sums.size(); ++c) sign[c] = sums[c] < 0 ? -1.0 : 1.0;
      auto term_sign = [&](const CutTerm& term) { return sign[tuple_index(term, atom_class, t, f.r)]; };
      for (int j = 0; j < f.r; ++j) {
        coefficients(f, m, j, coef, term_sign);
        for (std::size_t x = 0; x < f.atoms; ++x) {
          if (coef[x] > 0) m[j][x] = 1;
          else if (coef[x] < 0) m[j][x] = 0;
        }
      }
      sums = class_sums(f, m, atom_class, t);
      const double next = abs_sum(sums);
      if (next <= cur + 1e-15) break;
      cur = next;
    }
    runs[i].witness = to_witness(m);
    sums = class_sums(f, m, atom_class, t);
    runs[i].value = abs_sum(sums);
    for (double s : sums) runs[i].witness.signs.push_back(s < 0 ? -1 : 1);
    runs[i].mode = Mode::heuristic;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value > runs[best].value) best = i;
  return runs[best];
}

SupResult sup_cutnorm_over_forms(std::span<const CutForm> forms, int t, Mode mode, std::uint64_t seed) {
  if (forms.empty()) throw Error("no forms given");
  if (t < 1) throw Error("class bound must be positive");
  const std::size_t a = forms[0].atoms;
  const int r = forms[0].r;
  for (const auto& f : forms)
    if (f.atoms != a || f.r != r) throw Error("forms disagree on atoms");
  SupResult out;
  out.mode = mode;
  if (mode == Mode::exact) {
    const int blocks = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), a));
    require_budget(stirling2(static_cast<int>(a), blocks), "partition enumeration");
    out.value = -1;
    for_each_set_partition(static_cast<int>(a), blocks, [&](const std::vector<int>& cls) {
      double v = 0;
      for (const auto& f : forms) v += form_cutnorm_p_exact(f, cls, blocks).value;
      if (v > out.value) {
        out.value = v;
        out.atom_class = cls;
      }
    });
    return out;
  }
  // Heuristic: maximize the reduced energy over every sign pattern A^alpha.
  const std::size_t tuples = static_cast<std::size_t>(std::pow(static_cast<double>(t), r));
  const double patterns = std::ldexp(1.0, static_cast<int>(tuples * forms.size()));
  require_budget(patterns, "sign patterns for the energy reduction");
  const EnergyForm ef = energy_form(forms);
  const std::uint64_t count = static_cast<std::uint64_t>(patterns);
  std::vector<GseResult> results(count);
  const std::vector<double> one{1.0};
  parallel_for(count, [&](std::size_t p) {
    std::vector<std::vector<double>> arrays;
    for (std::size_t alpha = 0; alpha < forms.size(); ++alpha) {
      std::vector<int> a_sign(tuples);
      for (std::size_t i = 0; i < tuples; ++i) a_sign[i] = (p >> (alpha * tuples + i)) & 1u ? -1 : 1;
      arrays.push_back(make_reduction_arrays(a_sign, t, r, one).arrays()[0]);
    }
    CouplingArray j(r, static_cast<int>(forms.size()), t << r, std::move(arrays));
    AnnealOptions opt;
    opt.restarts = 4;
    results[p] = gse_form(ef, j, Mode::heuristic, mix_seed(seed, p), opt);
  });
  std::size_t best = 0;
  for (std::size_t p = 1; p < count; ++p)
    if (results[p].value > results[best].value) best = p;
  out.value = results[best].value;
  out.atom_class = reduced_to_partition(results[best].atom_class, r);
  return out;
}

CutResult cutnorm(const SymArray& a, Mode mode, std::uint64_t seed) {
  const CutForm f = cut_form(a);
  return mode == Mode::exact ? form_cutnorm_exact(f) : form_cutnorm_heuristic(f, 16, seed);
}

CutResult cutnorm_p(const SymArray& a, const TuplePartition& p, Mode mode, std::uint64_t seed) {
  if (p.n != a.n() || p.r_minus_1 != a.r() - 1) throw Error("partition does not match the array");
  const CutForm f = cut_form(a);
  return mode == Mode::exact ? form_cutnorm_p_exact(f, p.classes, p.t)
                             : form_cutnorm_p_heuristic(f, p.classes, p.t, 16, seed);
}

SupResult sup_cutnorm_over_partitions(const SymArray& a, int t, Mode mode, std::uint64_t seed) {
  const CutForm f = cut_form(a);
  return sup_cutnorm_over_forms(std::span<const CutForm>(&f, 1), t, mode, seed);
}

CutDistanceResult cut_distance(const ColoredHypergraph& g, const ColoredHypergraph& h, Mode mode, std::uint64_t seed,
                               const TuplePartition* p) {
  if (g.n() != h.n() || g.r() != h.r() || g.k() != h.k()) throw Error("hypergraphs have different (n,r,k)");
  CutDistanceResult out;
  out.mode = mode;
  for (int a = 1; a <= g.k(); ++a) {
    const SymArray d = SymArray::from_color(g, static_cast<Color>(a)) - SymArray::from_color(h, static_cast<Color>(a));
    CutResult c = p ? cutnorm_p(d, *p, mode, mix_seed(seed, a)) : cutnorm(d, mode, mix_seed(seed, a));
    out.value += c.value;
    out.per_color.push_back(std::move(c));
  }
  return out;
}

CutDistanceResult cut_distance(const StepGraphon& u, const StepGraphon& w, Mode mode, std::uint64_t seed,
                               const GridPartition* p) {
  const GraphonCutForms forms = graphon_cut_forms(u, w, p ? &p->geometry() : nullptr);
  std::vector<int> cls;
  int t = 1;
  if (p) {
    const GridPartition pr = p->geometry() == forms.geometry ? *p : p->rebase(forms.geometry);
    t = pr.t();
    for (auto cell : forms.atom_cell) cls.push_back(pr.label(cell));
  }
  CutDistanceResult out;
  out.mode = mode;
  for (std::size_t a = 0; a < forms.per_color.size(); ++a) {
    const CutForm& f = forms.per_color[a];
    CutResult c;
    if (p)
      c = mode == Mode::exact ? form_cutnorm_p_exact(f, cls, t) : form_cutnorm_p_heuristic(f, cls, t, 16, mix_seed(seed, a));
    else
      c = mode == Mode::exact ? form_cutnorm_exact(f) : form_cutnorm_heuristic(f, 16, mix_seed(seed, a));
    out.value += c.value;
    out.per_color.push_back(std::move(c));
  }
  return out;
}

}  // namespace hypertest
