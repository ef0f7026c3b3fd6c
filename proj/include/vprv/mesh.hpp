#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vprv {

inline constexpr int max_axes = 3;
inline constexpr int max_degree = 3;

/// Requested extent of one coordinate axis.
struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  int elements = 1;
  bool periodic = true;
};

/// Resolved axis of a uniform tensor-product mesh.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double length = 0.0;
  double h = 0.0;      // element size
  double dnode = 0.0;  // node spacing h / degree
  int elements = 0;
  int nodes = 0;  // degree * elements if periodic, degree * elements + 1 otherwise
  bool periodic = true;

  double coord(int node) const { return lo + dnode * node; }
};

/// Uniform mesh of tensor-product Q_k Lagrange elements on an axis-aligned box.
///
/// Node and element ids are row-major with the last axis fastest: on a
/// phase-space mesh with axes [x, v], the node pairing x-node i with v-node j
/// has id i * Nv + j.  Periodic axes identify the closing node with the first
/// one, so they carry degree * elements distinct nodes.  The leading
/// `spatial_axes` axes are position axes, any remaining ones are velocity axes.
class TensorMesh {
 public:
  TensorMesh(std::span<const AxisSpec> specs, int degree, int spatial_axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  int degree() const { return degree_; }
  int spatial_axes() const { return spatial_axes_; }
  int velocity_axes() const { return dim() - spatial_axes_; }
  const Axis& axis(int a) const { return axes_[a]; }
  const std::vector<Axis>& axes() const { return axes_; }

  long total_nodes() const { return total_nodes_; }
  long total_elements() const { return total_elements_; }
  int nodes_per_element() const { return nodes_per_element_; }
  double volume() const;

  void node_multi(long node, int out[max_axes]) const;
  long node_id(const int multi[max_axes]) const;
  void element_multi(long elem, int out[max_axes]) const;
  long element_id(const int multi[max_axes]) const;

  /// Global node of local tensor node `local` (lexicographic, last axis
  /// fastest) of element `elem`.
  long element_node(long elem, int local) const;
  void element_nodes(long elem, int out[]) const;

  void coords(long node, double out[max_axes]) const;

  /// Nodes in the support of the basis function of `node` (its patch),
  /// sorted ascending.  Interior nodes of a Q2 element in 2D get 9 members,
  /// shared corner nodes up to (2k+1)^d.
  std::span<const int> patch(long node) const;
  const std::vector<int>& patch_offsets() const { return patch_offsets_; }
  const std::vector<int>& patch_nodes() const { return patch_nodes_; }

  /// Node permutation realizing coordinate reflection along one axis
  /// (used to map f(x, v) to f(x, -v)).  Requires the axis to be symmetric
  /// about zero.  The permutation is an involution.
  std::vector<int> reflection_map(int axis) const;

 private:
  void build_patches();

  std::vector<Axis> axes_;
  int degree_ = 1;
  int spatial_axes_ = 0;
  int nodes_per_element_ = 0;
  long total_nodes_ = 0;
  long total_elements_ = 0;
  std::array<long, max_axes> node_stride_{};
  std::array<long, max_axes> elem_stride_{};
  std::vector<int> patch_offsets_;
  std::vector<int> patch_nodes_;
};

/// Permute a nodal field by a node permutation: out[i] = in[perm[i]].
std::vector<double> apply_permutation(std::span<const int> perm,
                                      std::span<const double> in);

}  // namespace vprv
