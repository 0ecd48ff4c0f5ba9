#include "hypertest/regularity.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hypertest/cutnorm.hpp"
#include "hypertest/rng.hpp"

namespace hypertest {

namespace {

struct Residual {
  double value = 0;
  std::vector<CutResult> witnesses;  // per color
  std::vector<int> q_classes;        // the Q used, over atoms
};

int class_count(const std::vector<int>& cls) {
  int qt = 0;
  for (int c : cls) qt = std::max(qt, c + 1);
  return qt;
}

double q_value(const GraphonCutForms& forms, const std::vector<int>& cls, int restarts, std::uint64_t seed,
               std::vector<CutResult>* witnesses) {
  const int qt = class_count(cls);
  double total = 0;
  for (std::size_t alpha = 0; alpha < forms.per_color.size(); ++alpha) {
    CutResult c = form_cutnorm_p_heuristic(forms.per_color[alpha], cls, qt, restarts, mix_seed(seed, alpha));
    total += c.value;
    if (witnesses) witnesses->push_back(std::move(c));
  }
  return total;
}

// Renumbers classes by first appearance; returns the class count.
int normalize(std::vector<int>& cls) {
  std::map<int, int> ids;
  for (int& c : cls) c = ids.emplace(c, static_cast<int>(ids.size())).first->second;
  return static_cast<int>(ids.size());
}

constexpr std::size_t kLocalSearchAtoms = 32;

// Heuristic choice of Q: the best of P, the singletons (when allowed), and P
// cut by each color's plain cut-norm witness, followed by single-atom moves
// on small atom sets.
std::vector<int> heuristic_q(int q_bound, const RegularityOptions& opt, std::uint64_t seed,
                             const GraphonCutForms& forms, const std::vector<int>& p_atoms) {
  const std::size_t a = forms.atoms;
  std::vector<std::vector<int>> cands{p_atoms};
  if (a <= static_cast<std::size_t>(q_bound)) {
    std::vector<int> single(a);
    for (std::size_t x = 0; x < a; ++x) single[x] = static_cast<int>(x);
    cands.push_back(std::move(single));
  }
  for (std::size_t alpha = 0; alpha < forms.per_color.size(); ++alpha) {
    const CutResult plain = form_cutnorm_heuristic(forms.per_color[alpha], opt.restarts, mix_seed(seed, 100 + alpha));
    std::vector<int> cls(a);
    for (std::size_t x = 0; x < a; ++x) cls[x] = p_atoms[x];
    for (const auto& set : plain.witness.sets) {
      std::vector<char> in(a, 0);
      for (auto x : set) in[x] = 1;
      for (std::size_t x = 0; x < a; ++x) cls[x] = 2 * cls[x] + in[x];
    }
    if (normalize(cls) <= q_bound) cands.push_back(std::move(cls));
  }
  const int eval_restarts = std::max(2, opt.restarts / 4);
  std::size_t best = 0;
  std::vector<double> vals;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    vals.push_back(q_value(forms, cands[i], eval_restarts, mix_seed(seed, 200 + i), nullptr));
    if (vals[i] > vals[best]) best = i;
  }
  std::vector<int> cur = cands[best];
  double cur_val = vals[best];
  if (a > kLocalSearchAtoms) return cur;
  std::uint64_t step = 0;
  for (int pass = 0; pass < 3; ++pass) {
    bool improved = false;
    for (std::size_t x = 0; x < a; ++x) {
      const int used = class_count(cur);
      const int limit = std::min(q_bound, used + 1);
      for (int c = 0; c < limit; ++c) {
        if (c == cur[x]) continue;
        std::vector<int> cand = cur;
        cand[x] = c;
        normalize(cand);
        const double v = q_value(forms, cand, eval_restarts, mix_seed(seed, 1000 + step++), nullptr);
        if (v > cur_val + 1e-12) {
          cur = std::move(cand);
          cur_val = v;
          improved = true;
          break;
        }
      }
    }
    if (!improved) break;
  }
  return cur;
}

Residual measure(int q_bound, const RegularityOptions& opt,
                 std::uint64_t seed, const GraphonCutForms& forms, const std::vector<int>& p_atoms) {
  Residual out;
  if (opt.mode == Mode::exact) {
    const SupResult sup = sup_cutnorm_over_forms(forms.per_color, q_bound, Mode::exact, seed);
    out.q_classes = sup.atom_class;
    const int qt = class_count(out.q_classes);
    for (const CutForm& f : forms.per_color) {
      CutResult c = form_cutnorm_p_exact(f, out.q_classes, qt);
      out.value += c.value;
      out.witnesses.push_back(std::move(c));
    }
    return out;
  }
  out.q_classes = heuristic_q(q_bound, opt, seed, forms, p_atoms);
  out.value = q_value(forms, out.q_classes, opt.restarts, seed, &out.witnesses);
  return out;
}

// Refines p's labels by membership of each atom in the given atom sets.
GridPartition refine(const GridPartition& p, const std::vector<std::uint32_t>& atom_of_cell,
                     const std::vector<std::vector<char>>& marks) {
  std::map<std::vector<int>, int> ids;
  std::vector<int> labels(p.labels().size());
  std::vector<int> key;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    key.assign(1, p.label(c));
    for (const auto& m : marks) key.push_back(m[atom_of_cell[c]]);
    auto [it, fresh] = ids.emplace(key, static_cast<int>(ids.size()));
    labels[c] = it->second;
  }
  return GridPartition(p.geometry(), std::move(labels), static_cast<int>(ids.size())).compressed();
}

}  // namespace

RegularityResult weak_regularize(const StepGraphon& w, double eps, int t, const RegularityOptions& opt) {
  if (!(eps > 0)) throw Error("eps must be positive");
  if (t < 1) throw Error("t must be positive");
  const int max_rounds = opt.max_rounds > 0 ? opt.max_rounds : static_cast<int>(std::ceil(1.0 / (eps * eps) - 1e-12));
  RegularityResult res;
  res.mode = opt.mode;
  if (w.t() <= t) {
    // w's own partition is already admissible and leaves no residual.
    res.v = w;
    res.p = w.partition();
    res.converged = true;
    res.trace.push_back({0, 0.0, w.t(), 0.0});
    return res;
  }
  GridPartition p = GridPartition::trivial(w.geometry());
  StepGraphon v = step_average(w, p);
  const int rk = w.r() * w.k();
  double log2_s = 0;  // s(1) = 1
  for (int round = 0;; ++round) {
    const GraphonCutForms forms = graphon_cut_forms(w, v);
    if (!(forms.geometry == w.geometry())) throw Error("regularization grid mismatch");
    std::vector<int> p_atoms;
    for (auto cell : forms.atom_cell) p_atoms.push_back(p.label(cell));
    const Residual r = measure(p.t() * t, opt, mix_seed(opt.seed, round), forms, p_atoms);
    res.trace.push_back({round, r.value, p.t(), log2_s});
    if (res.trace.size() > 1 && r.value > res.trace[res.trace.size() - 2].residual + 1e-12) res.monotone = false;
    res.achieved = r.value;
    if (r.value <= eps) {
      res.converged = true;
      break;
    }
    if (round == max_rounds) break;
    std::vector<std::vector<char>> marks;
    for (const auto& c : r.witnesses)
      for (const auto& set : c.witness.sets) {
        std::vector<char> m(forms.atoms, 0);
        for (auto x : set) m[x] = 1;
        marks.push_back(std::move(m));
      }
    GridPartition next = refine(p, forms.atom_of_cell, marks);
    if (next.t() == p.t()) {
      std::vector<std::vector<char>> qmarks;
      int qt = 0;
      for (int c : r.q_classes) qt = std::max(qt, c + 1);
      for (int c = 0; c < qt; ++c) {
        std::vector<char> m(forms.atoms, 0);
        for (std::size_t x = 0; x < forms.atoms; ++x) m[x] = r.q_classes[x] == c;
        qmarks.push_back(std::move(m));
      }
      next = refine(p, forms.atom_of_cell, qmarks);
    }
    if (next.t() == p.t()) {
      res.exhausted = true;
      break;
    }
    p = std::move(next);
    v = step_average(w, p);
    ++res.rounds;
    const double s = std::exp2(log2_s);
    log2_s += rk * std::log2(s * t + 1);
  }
  res.v = std::move(v);
  res.p = std::move(p);
  return res;
}

std::string trace_csv(const RegularityResult& res) {
  std::ostringstream os;
  os << "round,residual,classes,log2_s\n";
  os.precision(12);
  for (const auto& row : res.trace) os << row.round << ',' << row.residual << ',' << row.classes << ',' << row.log2_s << '\n';
  return os.str();
}

bool ClassCountBound::admits(double m) const {
  if (exact) return boost::multiprecision::cpp_int(static_cast<std::uint64_t>(m)) <= *exact;
  if (std::isinf(log2)) return true;
  return std::log2(m) <= log2;
}

std::string ClassCountBound::to_string() const {
  if (exact) return exact->str();
  std::ostringstream os;
  if (std::isinf(log2))
    os << "2^(2^" << log2log2 << ")";
  else
    os << "2^" << log2;
  return os.str();
}

ClassCountBound class_count_bound(int r, int k, double eps, int t) {
  if (!(eps > 0)) throw Error("eps must be positive");
  if (r < 1 || k < 1 || t < 1) throw Error("r, k, t must be positive");
  ClassCountBound b;
  const double expo = 4.0 / (eps * eps);
  const double base_bits = std::log2(2.0 * t);
  const double log2_e = expo * std::log2(static_cast<double>(r * k + 1));
  b.log2log2 = log2_e + std::log2(base_bits);
  b.log2 = std::exp2(log2_e) * base_bits;
  const double rounded = std::round(expo);
  if (std::abs(expo - rounded) < 1e-9 && log2_e < 62 && std::exp2(log2_e) * base_bits <= 1e6) {
    std::uint64_t e = 1;
    for (int i = 0; i < static_cast<int>(rounded); ++i) e *= static_cast<std::uint64_t>(r * k + 1);
    b.exact = boost::multiprecision::pow(boost::multiprecision::cpp_int(2 * t), static_cast<unsigned>(e));
  }
  return b;
}

}  // namespace hypertest
