#include "vprv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vprv {

namespace {

int wrap_index(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

TensorMesh::TensorMesh(std::span<const AxisSpec> specs, int degree,
                       int spatial_axes)
    : degree_(degree), spatial_axes_(spatial_axes) {
  if (specs.empty() || specs.size() > max_axes)
    throw std::invalid_argument("mesh: axis count must be 1.." +
                                std::to_string(max_axes));
  if (degree < 1 || degree > max_degree)
    throw std::invalid_argument("mesh: degree must be 1.." +
                                std::to_string(max_degree));
  if (spatial_axes < 1 || spatial_axes > static_cast<int>(specs.size()))
    throw std::invalid_argument("mesh: invalid spatial axis count");

  for (const AxisSpec& s : specs) {
    if (!(s.hi > s.lo)) throw std::invalid_argument("mesh: axis needs hi > lo");
    if (s.elements < 1)
      throw std::invalid_argument("mesh: axis needs at least one element");
    Axis ax;
    ax.lo = s.lo;
    ax.hi = s.hi;
    ax.length = s.hi - s.lo;
    ax.elements = s.elements;
    ax.periodic = s.periodic;
    ax.h = ax.length / s.elements;
    ax.dnode = ax.h / degree;
    ax.nodes = degree * s.elements + (s.periodic ? 0 : 1);
    axes_.push_back(ax);
  }

  nodes_per_element_ = 1;
  for (int a = 0; a < dim(); ++a) nodes_per_element_ *= degree_ + 1;

  total_nodes_ = 1;
  total_elements_ = 1;
  for (int a = dim() - 1; a >= 0; --a) {
    node_stride_[a] = total_nodes_;
    elem_stride_[a] = total_elements_;
    total_nodes_ *= axes_[a].nodes;
    total_elements_ *= axes_[a].elements;
  }

  build_patches();
}

double TensorMesh::volume() const {
  double v = 1.0;
  for (const Axis& ax : axes_) v *= ax.length;
  return v;
}

void TensorMesh::node_multi(long node, int out[max_axes]) const {
  for (int a = 0; a < dim(); ++a) {
    out[a] = static_cast<int>(node / node_stride_[a]);
    node %= node_stride_[a];
  }
}

long TensorMesh::node_id(const int multi[max_axes]) const {
  long id = 0;
  for (int a = 0; a < dim(); ++a) id += multi[a] * node_stride_[a];
  return id;
}

void TensorMesh::element_multi(long elem, int out[max_axes]) const {
  for (int a = 0; a < dim(); ++a) {
    out[a] = static_cast<int>(elem / elem_stride_[a]);
    elem %= elem_stride_[a];
  }
}

long TensorMesh::element_id(const int multi[max_axes]) const {
  long id = 0;
  for (int a = 0; a < dim(); ++a) id += multi[a] * elem_stride_[a];
  return id;
}

long TensorMesh::element_node(long elem, int local) const {
  int em[max_axes];
  element_multi(elem, em);
  long id = 0;
  for (int a = dim() - 1; a >= 0; --a) {
    int la = local % (degree_ + 1);
    local /= degree_ + 1;
    int n = em[a] * degree_ + la;
    if (axes_[a].periodic) n = wrap_index(n, axes_[a].nodes);
    id += n * node_stride_[a];
  }
  return id;
}

void TensorMesh::element_nodes(long elem, int out[]) const {
  for (int l = 0; l < nodes_per_element_; ++l)
    out[l] = static_cast<int>(element_node(elem, l));
}

void TensorMesh::coords(long node, double out[max_axes]) const {
  int nm[max_axes];
  node_multi(node, nm);
  for (int a = 0; a < dim(); ++a) out[a] = axes_[a].coord(nm[a]);
}

std::span<const int> TensorMesh::patch(long node) const {
  return {patch_nodes_.data() + patch_offsets_[node],
          static_cast<size_t>(patch_offsets_[node + 1] -
                              patch_offsets_[node])};
}

void TensorMesh::build_patches() {
  // per-axis 1d patches: nodes of every element touching the node
  std::array<std::vector<std::vector<int>>, max_axes> axis_patch;
  for (int a = 0; a < dim(); ++a) {
    const Axis& ax = axes_[a];
    axis_patch[a].resize(ax.nodes);
    for (int e = 0; e < ax.elements; ++e) {
      for (int s = 0; s <= degree_; ++s) {
        int owner = e * degree_ + s;
        if (ax.periodic) owner = wrap_index(owner, ax.nodes);
        if (owner >= ax.nodes) continue;  // closing node of a periodic run
        for (int t = 0; t <= degree_; ++t) {
          int member = e * degree_ + t;
          if (ax.periodic) member = wrap_index(member, ax.nodes);
          axis_patch[a][owner].push_back(member);
        }
      }
    }
    for (std::vector<int>& p : axis_patch[a]) {
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
    }
  }

  patch_offsets_.assign(total_nodes_ + 1, 0);
  patch_nodes_.clear();
  int nm[max_axes];
  for (long n = 0; n < total_nodes_; ++n) {
    node_multi(n, nm);
    // product of per-axis lists, outer axis slowest, keeps ids ascending
    std::array<const std::vector<int>*, max_axes> lists{};
    size_t total = 1;
    for (int a = 0; a < dim(); ++a) {
      lists[a] = &axis_patch[a][nm[a]];
      total *= lists[a]->size();
    }
    std::array<size_t, max_axes> idx{};
    for (size_t c = 0; c < total; ++c) {
      long id = 0;
      for (int a = 0; a < dim(); ++a)
        id += (*lists[a])[idx[a]] * node_stride_[a];
      patch_nodes_.push_back(static_cast<int>(id));
      for (int a = dim() - 1; a >= 0; --a) {
        if (++idx[a] < lists[a]->size()) break;
        idx[a] = 0;
      }
    }
    patch_offsets_[n + 1] = static_cast<int>(patch_nodes_.size());
  }
}

std::vector<int> TensorMesh::reflection_map(int axis) const {
  const Axis& ax = axes_[axis];
  if (std::abs(ax.lo + ax.hi) > 1e-12 * ax.length)
    throw std::invalid_argument(
        "mesh: reflection needs an axis symmetric about zero");
  std::vector<int> axmap(ax.nodes);
  for (int m = 0; m < ax.nodes; ++m)
    axmap[m] = ax.periodic ? wrap_index(ax.nodes - m, ax.nodes)
                           : ax.nodes - 1 - m;
  std::vector<int> perm(total_nodes_);
  int nm[max_axes];
  for (long n = 0; n < total_nodes_; ++n) {
    node_multi(n, nm);
    nm[axis] = axmap[nm[axis]];
    perm[n] = static_cast<int>(node_id(nm));
  }
  return perm;
}

std::vector<double> apply_permutation(std::span<const int> perm,
                                      std::span<const double> in) {
  std::vector<double> out(in.size());
  for (size_t i = 0; i < in.size(); ++i) out[i] = in[perm[i]];
  return out;
}

}  // namespace vprv
