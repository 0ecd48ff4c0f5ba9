#include "hypertest/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hypertest/combinatorics.hpp"
#include "hypertest/common.hpp"

namespace hypertest {

namespace {
constexpr double kBreakTol = 1e-12;
}

GridGeometry::GridGeometry(int m, std::vector<std::vector<double>> breaks) : m_(m), breaks_(std::move(breaks)) {
  if (m < 0) throw Error("grid dimension parameter must be nonnegative");
  if (static_cast<int>(breaks_.size()) != m) throw Error("grid needs one breakpoint list per level");
  for (auto& b : breaks_) {
    if (b.size() < 2 || std::abs(b.front()) > kBreakTol || std::abs(b.back() - 1.0) > kBreakTol)
      throw Error("grid breakpoints must start at 0 and end at 1");
    b.front() = 0.0;
    b.back() = 1.0;
    for (std::size_t i = 1; i < b.size(); ++i)
      if (!(b[i] > b[i - 1])) throw Error("grid breakpoints must be strictly increasing");
  }
  axes_ = graded_subsets(m, m);
  strides_.assign(axes_.size(), 1);
  for (int a = static_cast<int>(axes_.size()) - 2; a >= 0; --a)
    strides_[a] = strides_[a + 1] * static_cast<std::size_t>(cells(axis_level(a + 1)));
  cell_count_ = 1;
  for (int a = 0; a < dim(); ++a) cell_count_ *= static_cast<std::size_t>(cells(axis_level(a)));
  for (const auto& perm : all_permutations(m)) {
    std::vector<int> img(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      std::vector<int> s;
      for (int x : axes_[a]) s.push_back(perm[x]);
      std::sort(s.begin(), s.end());
      img[a] = static_cast<int>(graded_index(m, m, s));
    }
    axis_perms_.push_back(std::move(img));
  }
}

GridGeometry GridGeometry::uniform(int m, int g) {
  if (g < 1) throw Error("grid resolution must be positive");
  std::vector<double> b(g + 1);
  for (int i = 0; i <= g; ++i) b[i] = static_cast<double>(i) / g;
  return GridGeometry(m, std::vector<std::vector<double>>(m, b));
}

GridGeometry GridGeometry::merge(const GridGeometry& a, const GridGeometry& b) {
  if (a.m() != b.m()) throw Error("cannot merge grids of different dimension");
  std::vector<std::vector<double>> out(a.m());
  for (int l = 1; l <= a.m(); ++l) {
    std::vector<double> all = a.breaks(l);
    all.insert(all.end(), b.breaks(l).begin(), b.breaks(l).end());
    std::sort(all.begin(), all.end());
    for (double x : all)
      if (out[l - 1].empty() || x - out[l - 1].back() > kBreakTol) out[l - 1].push_back(x);
    out[l - 1].back() = 1.0;
  }
  return GridGeometry(a.m(), std::move(out));
}

std::vector<int> GridGeometry::decode(std::size_t cell) const {
  std::vector<int> c(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    c[a] = static_cast<int>(cell / strides_[a]);
    cell %= strides_[a];
  }
  return c;
}

std::size_t GridGeometry::encode(std::span<const int> coords) const {
  std::size_t cell = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a) cell += static_cast<std::size_t>(coords[a]) * strides_[a];
  return cell;
}

double GridGeometry::volume(std::size_t cell) const {
  double v = 1.0;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    int i = static_cast<int>(cell / strides_[a]);
    cell %= strides_[a];
    v *= width(axis_level(static_cast<int>(a)), i);
  }
  return v;
}

int GridGeometry::locate(int level, double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw Error("grid coordinate outside [0,1]: " + std::to_string(x));
  const auto& b = breaks_[level - 1];
  auto it = std::upper_bound(b.begin(), b.end(), x);
  int idx = static_cast<int>(it - b.begin()) - 1;
  return std::clamp(idx, 0, static_cast<int>(b.size()) - 2);
}

std::size_t GridGeometry::cell_of(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim()) throw Error("point dimension does not match grid");
  std::size_t cell = 0;
  for (int a = 0; a < dim(); ++a) cell += static_cast<std::size_t>(locate(axis_level(a), point[a])) * strides_[a];
  return cell;
}

bool GridGeometry::is_uniform() const {
  for (const auto& b : breaks_) {
    const double n = static_cast<double>(b.size() - 1);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (std::abs(b[i] - static_cast<double>(i) / n) > 1e-12) return false;
  }
  return true;
}

int GridGeometry::resolution() const {
  if (!is_uniform()) return 0;
  if (m_ == 0) return 1;
  int g = cells(1);
  for (int l = 2; l <= m_; ++l)
    if (cells(l) != g) return 0;
  return g;
}

bool GridGeometry::refines(const GridGeometry& coarse) const {
  if (coarse.m() != m_) return false;
  for (int l = 1; l <= m_; ++l)
    for (double x : coarse.breaks(l)) {
      const auto& b = breaks(l);
      auto it = std::lower_bound(b.begin(), b.end(), x - kBreakTol);
      if (it == b.end() || std::abs(*it - x) > kBreakTol) return false;
    }
  return true;
}

std::size_t GridGeometry::coarse_cell(std::size_t cell, const GridGeometry& coarse) const {
  std::size_t out = 0;
  for (int a = 0; a < dim(); ++a) {
    int i = static_cast<int>(cell / strides_[a]);
    cell %= strides_[a];
    const int level = axis_level(a);
    const double mid = 0.5 * (breaks(level)[i] + breaks(level)[i + 1]);
    out += static_cast<std::size_t>(coarse.locate(level, mid)) * coarse.stride(a);
  }
  return out;
}

std::size_t GridGeometry::permute_cell(std::size_t cell, int perm) const {
  std::vector<int> c = decode(cell);
  std::vector<int> out(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) out[axis_perms_[perm][a]] = c[a];
  return encode(out);
}

std::size_t GridGeometry::canonical_cell(std::size_t cell) const {
  std::size_t best = cell;
  for (int p = 1; p < permutation_count(); ++p) best = std::min(best, permute_cell(cell, p));
  return best;
}

GridPartition::GridPartition(GridGeometry geom, std::vector<int> labels, int t)
    : geom_(std::move(geom)), labels_(std::move(labels)), t_(t) {
  if (labels_.size() != geom_.cell_count())
    throw Error("partition needs " + std::to_string(geom_.cell_count()) + " labels, got " +
                std::to_string(labels_.size()));
  if (t_ < 1) throw Error("partition needs at least one class");
  for (int c : labels_)
    if (c < 0 || c >= t_) throw Error("partition label out of range");
  if (!is_symmetric()) throw Error("partition labels are not symmetric under coordinate permutations");
}

GridPartition GridPartition::uniform(int m, int g, std::vector<int> labels) {
  int t = labels.empty() ? 1 : *std::max_element(labels.begin(), labels.end()) + 1;
  return GridPartition(GridGeometry::uniform(m, g), std::move(labels), t);
}

GridPartition GridPartition::trivial(GridGeometry geom) {
  std::size_t n = geom.cell_count();
  return GridPartition(std::move(geom), std::vector<int>(n, 0), 1);
}

std::vector<double> GridPartition::class_volumes() const {
  std::vector<double> v(t_, 0.0);
  for (std::size_t c = 0; c < labels_.size(); ++c) v[labels_[c]] += geom_.volume(c);
  return v;
}

bool GridPartition::is_symmetric() const {
  for (int p = 1; p < geom_.permutation_count(); ++p)
    for (std::size_t c = 0; c < labels_.size(); ++c)
      if (labels_[geom_.permute_cell(c, p)] != labels_[c]) return false;
  return true;
}

GridPartition GridPartition::rebase(const GridGeometry& finer) const {
  if (!finer.refines(geom_)) throw Error("target grid does not refine the partition's grid");
  std::vector<int> labels(finer.cell_count());
  for (std::size_t c = 0; c < labels.size(); ++c) labels[c] = labels_[finer.coarse_cell(c, geom_)];
  return GridPartition(finer, std::move(labels), t_);
}

GridPartition GridPartition::meet(const GridPartition& a, const GridPartition& b,
                                  std::vector<std::pair<int, int>>* pairs) {
  GridGeometry geom = GridGeometry::merge(a.geometry(), b.geometry());
  GridPartition ra = a.geometry() == geom ? a : a.rebase(geom);
  GridPartition rb = b.geometry() == geom ? b : b.rebase(geom);
  std::map<std::pair<int, int>, int> ids;
  std::vector<int> labels(geom.cell_count());
  std::vector<std::pair<int, int>> order;
  for (std::size_t c = 0; c < labels.size(); ++c) {
    auto key = std::make_pair(ra.label(c), rb.label(c));
    auto it = ids.find(key);
    if (it == ids.end()) {
      it = ids.emplace(key, static_cast<int>(order.size())).first;
      order.push_back(key);
    }
    labels[c] = it->second;
  }
  if (pairs) *pairs = order;
  return GridPartition(geom, std::move(labels), static_cast<int>(order.size()));
}

GridPartition GridPartition::compressed(std::vector<int>* old_of_new) const {
  std::vector<int> remap(t_, -1);
  std::vector<int> back;
  std::vector<int> labels(labels_.size());
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    int& slot = remap[labels_[c]];
    if (slot < 0) {
      slot = static_cast<int>(back.size());
      back.push_back(labels_[c]);
    }
    labels[c] = slot;
  }
  if (old_of_new) *old_of_new = back;
  return GridPartition(geom_, std::move(labels), static_cast<int>(back.size()));
}

GraphonCoordinates::GraphonCoordinates(int r_) : r(r_) {
  coords = graded_subsets(r, r - 1);
  const auto axes = graded_subsets(r - 1, r - 1);
  face_axis.assign(r, std::vector<int>(axes.size()));
  for (int l = 0; l < r; ++l) {
    std::vector<int> face;
    for (int i = 0; i < r; ++i)
      if (i != l) face.push_back(i);
    for (std::size_t a = 0; a < axes.size(); ++a) {
      std::vector<int> s;
      for (int x : axes[a]) s.push_back(face[x]);
      face_axis[l][a] = static_cast<int>(graded_index(r, r - 1, s));
    }
  }
}

void for_each_face_law(const GridGeometry& geom, int r, const std::function<int(std::size_t)>& label,
                       const std::function<void(double, const std::vector<const SparseDist*>&)>& fn) {
  const int m = r - 1;
  if (geom.m() != m) throw Error("grid dimension does not match uniformity");
  if (m == 0) {
    SparseDist d{{label(0), 1.0}};
    std::vector<const SparseDist*> laws{&d};
    fn(1.0, laws);
    return;
  }
  const int top_cells = geom.cells(m);
  const std::size_t lower_count = geom.cell_count() / static_cast<std::size_t>(top_cells);
  std::vector<SparseDist> lower_dist(lower_count);
  for (std::size_t lc = 0; lc < lower_count; ++lc) {
    std::map<int, double> acc;
    for (int z = 0; z < top_cells; ++z) acc[label(lc * top_cells + z)] += geom.width(m, z);
    lower_dist[lc].assign(acc.begin(), acc.end());
  }
  GraphonCoordinates gc(r);
  std::vector<int> lower_coords;
  for (std::size_t i = 0; i < gc.coords.size(); ++i)
    if (static_cast<int>(gc.coords[i].size()) < m) lower_coords.push_back(static_cast<int>(i));
  std::vector<int> cell(gc.coords.size(), 0);
  std::vector<const SparseDist*> laws(r);
  const int dim = geom.dim();
  for (;;) {
    double vol = 1.0;
    for (int ci : lower_coords) vol *= geom.width(static_cast<int>(gc.coords[ci].size()), cell[ci]);
    for (int l = 0; l < r; ++l) {
      std::size_t lc = 0;
      for (int a = 0; a + 1 < dim; ++a)
        lc += static_cast<std::size_t>(cell[gc.face_axis[l][a]]) * (geom.stride(a) / top_cells);
      laws[l] = &lower_dist[lc];
    }
    fn(vol, laws);
    std::size_t i = lower_coords.size();
    while (i > 0) {
      int ci = lower_coords[i - 1];
      if (++cell[ci] < geom.cells(static_cast<int>(gc.coords[ci].size()))) break;
      cell[ci] = 0;
      --i;
    }
    if (i == 0) break;
  }
}

void for_each_class_tuple(const GridGeometry& geom, int r, const std::function<int(std::size_t)>& label,
                          const std::function<void(double, std::span<const int>)>& fn) {
  std::vector<int> tuple(r);
  for_each_face_law(geom, r, label, [&](double vol, const std::vector<const SparseDist*>& laws) {
    std::function<void(int, double)> rec = [&](int l, double w) {
      if (l == r) {
        fn(w, tuple);
        return;
      }
      for (const auto& [c, p] : *laws[l]) {
        tuple[l] = c;
        rec(l + 1, w * p);
      }
    };
    rec(0, vol);
  });
}

double cell_config_count(const GridGeometry& geom, int r) {
  GraphonCoordinates gc(r);
  double n = 1;
  for (const auto& c : gc.coords) n *= geom.cells(static_cast<int>(c.size()));
  return n;
}

void for_each_cell_config(const GridGeometry& geom, int r,
                          const std::function<void(double, std::span<const std::size_t>)>& fn) {
  if (geom.m() != r - 1) throw Error("grid dimension does not match uniformity");
  GraphonCoordinates gc(r);
  const int nc = static_cast<int>(gc.coords.size());
  std::vector<int> cell(nc, 0);
  std::vector<std::size_t> faces(r, 0);
  for (;;) {
    double vol = 1.0;
    for (int i = 0; i < nc; ++i) vol *= geom.width(static_cast<int>(gc.coords[i].size()), cell[i]);
    for (int l = 0; l < r; ++l) {
      std::size_t fc = 0;
      for (int a = 0; a < geom.dim(); ++a) fc += static_cast<std::size_t>(cell[gc.face_axis[l][a]]) * geom.stride(a);
      faces[l] = fc;
    }
    fn(vol, faces);
    int i = nc;
    while (i > 0) {
      if (++cell[i - 1] < geom.cells(static_cast<int>(gc.coords[i - 1].size()))) break;
      cell[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
}

}  // namespace hypertest
