#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hypertest {

// Rectilinear grid on [0,1]^{H([m])}. Axes are the nonempty subsets of [m] in
// (cardinality, lex) order; all axes of the same cardinality ("level") share
// one breakpoint vector, which keeps every grid symmetric under S_m.
class GridGeometry {
 public:
  GridGeometry() : GridGeometry(0, {}) {}
  GridGeometry(int m, std::vector<std::vector<double>> breaks);
  static GridGeometry uniform(int m, int g);
  // Finest grid refining both inputs (union of breakpoints per level).
  static GridGeometry merge(const GridGeometry& a, const GridGeometry& b);

  int m() const { return m_; }
  int dim() const { return static_cast<int>(axes_.size()); }
  const std::vector<std::vector<int>>& axes() const { return axes_; }
  int axis_level(int a) const { return static_cast<int>(axes_[a].size()); }
  int cells(int level) const { return static_cast<int>(breaks_[level - 1].size()) - 1; }
  const std::vector<double>& breaks(int level) const { return breaks_[level - 1]; }
  const std::vector<std::vector<double>>& all_breaks() const { return breaks_; }
  double width(int level, int i) const { return breaks_[level - 1][i + 1] - breaks_[level - 1][i]; }
  std::size_t cell_count() const { return cell_count_; }

  std::vector<int> decode(std::size_t cell) const;
  std::size_t encode(std::span<const int> coords) const;
  std::size_t stride(int axis) const { return strides_[axis]; }
  double volume(std::size_t cell) const;
  // Half-open cell lookup; 1.0 maps to the last cell.
  int locate(int level, double x) const;
  std::size_t cell_of(std::span<const double> point) const;

  bool is_uniform() const;
  // Cells per axis of a uniform grid whose levels all agree; 0 otherwise.
  int resolution() const;
  bool refines(const GridGeometry& coarse) const;
  // The cell of `coarse` containing the given cell of this (finer) grid.
  std::size_t coarse_cell(std::size_t cell, const GridGeometry& coarse) const;

  int permutation_count() const { return static_cast<int>(axis_perms_.size()); }
  std::size_t permute_cell(std::size_t cell, int perm) const;
  // Smallest cell index in the S_m orbit of `cell`.
  std::size_t canonical_cell(std::size_t cell) const;

  bool operator==(const GridGeometry& o) const { return m_ == o.m_ && breaks_ == o.breaks_; }

 private:
  int m_;
  std::vector<std::vector<double>> breaks_;
  std::vector<std::vector<int>> axes_;
  std::vector<std::size_t> strides_;
  std::size_t cell_count_ = 1;
  std::vector<std::vector<int>> axis_perms_;  // axis_perms_[p][a] = image axis of a
};

// Symmetric partition of [0,1]^{H([r-1])} into t classes, each class a union
// of grid cells. Class ids are 0-based internally.
class GridPartition {
 public:
  GridPartition() = default;
  GridPartition(GridGeometry geom, std::vector<int> labels, int t);
  static GridPartition uniform(int m, int g, std::vector<int> labels);
  static GridPartition trivial(GridGeometry geom);

  int r_minus_1() const { return geom_.m(); }
  const GridGeometry& geometry() const { return geom_; }
  int t() const { return t_; }
  int resolution() const { return geom_.resolution(); }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t cell) const { return labels_[cell]; }
  int class_of(std::span<const double> point) const { return labels_[geom_.cell_of(point)]; }
  std::vector<double> class_volumes() const;
  bool is_symmetric() const;
  // Same partition expressed on a finer grid.
  GridPartition rebase(const GridGeometry& finer) const;
  // Common refinement: classes are the co-occurring (a, b) label pairs.
  // `pairs` receives the pair for each new class when non-null.
  static GridPartition meet(const GridPartition& a, const GridPartition& b,
                            std::vector<std::pair<int, int>>* pairs = nullptr);
  // Drops unused class ids, renumbering by first appearance in cell order.
  GridPartition compressed(std::vector<int>* old_of_new = nullptr) const;

  bool operator==(const GridPartition& o) const { return geom_ == o.geom_ && labels_ == o.labels_ && t_ == o.t_; }

 private:
  GridGeometry geom_;
  std::vector<int> labels_;
  int t_ = 0;
};

using SparseDist = std::vector<std::pair<int, double>>;

// Coordinates of an r-graphon point: subsets of [r] with 1..r-1 elements,
// in (cardinality, lex) order, plus for each face l = [r]\{l} the coordinate
// index of each axis of [r-1] (order-preserving relabeling of the face).
struct GraphonCoordinates {
  explicit GraphonCoordinates(int r);
  int r;
  std::vector<std::vector<int>> coords;
  std::vector<std::vector<int>> face_axis;  // face_axis[l][a] = coordinate index
};

// Iterates the lower configurations of an r-graphon on `geom` (cells of all
// coordinates of size < r-1). For each, fn receives the configuration volume
// and, per face, the distribution over class labels obtained by integrating
// the face's top coordinate. `label` maps a cell of the (r-1)-grid to a class.
void for_each_face_law(const GridGeometry& geom, int r, const std::function<int(std::size_t)>& label,
                       const std::function<void(double, const std::vector<const SparseDist*>&)>& fn);

// Joint measure of face-class tuples: fn(weight, classes) over all tuples with
// positive measure. Tuples are ordered by face index (class of [r]\{l} first
// for l = 0).
void for_each_class_tuple(const GridGeometry& geom, int r, const std::function<int(std::size_t)>& label,
                          const std::function<void(double, std::span<const int>)>& fn);

// Iterates every full cell configuration of [0,1]^{H([r],r-1)}: fn(volume,
// face cells). Cost is the product of all coordinate cell counts.
void for_each_cell_config(const GridGeometry& geom, int r,
                          const std::function<void(double, std::span<const std::size_t>)>& fn);
double cell_config_count(const GridGeometry& geom, int r);

}  // namespace hypertest
