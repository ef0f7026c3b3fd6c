#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "vprv/mesh.hpp"

namespace vprv {

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& pts, std::vector<double>& wts);

/// Equispaced Lagrange basis of degree k on [0, 1]: value and derivative of
/// shape function p at xi.
double lagrange_value(int degree, int p, double xi);
double lagrange_grad(int degree, int p, double xi);

/// Exact integrals of the degree-k shape functions over [0, 1].  These double
/// as the per-element charge-reduction weight fractions and the per-axis
/// lumped-mass fractions: k=1 (1/2, 1/2), k=2 (1/6, 2/3, 1/6),
/// k=3 (1/8, 3/8, 3/8, 1/8).
std::array<double, max_degree + 1> shape_integrals(int degree);

/// Tabulated 1d shape data at quadrature points, shared by all axes.
struct ReferenceElement {
  int degree = 1;
  int nq = 3;                    // points per direction, default degree + 2
  std::vector<double> qpt, qwt;  // on [0, 1]
  std::vector<double> val;       // nq x (degree+1), q-major
  std::vector<double> grad;      // d/dxi on [0, 1], same layout

  ReferenceElement() = default;
  ReferenceElement(int degree, int nq);
  double value(int q, int p) const { return val[q * (degree + 1) + p]; }
  double gradient(int q, int p) const { return grad[q * (degree + 1) + p]; }
};

/// Shared CSR sparsity; rows follow mesh nodes, row columns are the patch.
struct SparsityPattern {
  int rows = 0;
  std::vector<int> offsets;
  std::vector<int> cols;

  int find(int row, int col) const;  // index into values, -1 if absent
};

/// CSR matrix on a shared pattern.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(std::shared_ptr<const SparsityPattern> pattern)
      : pattern_(std::move(pattern)),
        values_(pattern_->offsets.back(), 0.0) {}

  int rows() const { return pattern_->rows; }
  const SparsityPattern& pattern() const { return *pattern_; }
  std::shared_ptr<const SparsityPattern> pattern_ptr() const {
    return pattern_;
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  void zero() { std::fill(values_.begin(), values_.end(), 0.0); }

  double entry(int row, int col) const;
  std::span<const int> row_cols(int row) const;
  std::span<const double> row_values(int row) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += A x
  void multiply_add(std::span<const double> x, std::span<double> y) const;
  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
};

/// One component of an advection field beta, matched to a mesh axis.
struct AdvectionComponent {
  enum class Kind {
    zero,
    constant,    // fixed value
    coordinate,  // the coordinate of `axis` at the evaluation point
    axis_field,  // nodal field over the 1d nodes of `axis`, constant across
                 // the other axes (electric field broadcast over v)
    node_field,  // nodal field over the full mesh
  };
  Kind kind = Kind::zero;
  double value = 0.0;
  int axis = 0;
  std::vector<double> values;

  static AdvectionComponent zero_component() { return {}; }
  static AdvectionComponent constant(double v);
  static AdvectionComponent coordinate(int axis);
  static AdvectionComponent axis_field(int axis, std::vector<double> v);
  static AdvectionComponent node_field(std::vector<double> v);
};

/// Advection field with one component per mesh axis.
struct AdvectionField {
  std::vector<AdvectionComponent> comp;

  /// Component value at a mesh node.
  double at_node(const TensorMesh& mesh, int component, long node) const;
  /// Largest Euclidean norm over mesh nodes.
  double max_norm(const TensorMesh& mesh) const;
};

/// Anisotropic viscosity given as one nodal field per mesh axis.
struct ViscosityField {
  std::vector<std::vector<double>> eps;

  static ViscosityField zero(const TensorMesh& mesh);
  static ViscosityField uniform(const TensorMesh& mesh,
                                std::span<const double> per_axis);
  double max_entry(int axis) const;
};

/// Element-loop assembler for mass, advection and diffusion forms on a
/// TensorMesh.  The sparsity pattern and per-element scatter slots are built
/// once; assembly into an existing operator only rewrites values.  With
/// workers > 1 elements are processed in contiguous stripes with private
/// accumulators merged in stripe order: deterministic for a fixed worker
/// count, and within 1e-15 of the serial sums for any count.
class Assembler {
 public:
  explicit Assembler(const TensorMesh& mesh, int nq = 0, int workers = 1);

  const TensorMesh& mesh() const { return *mesh_; }
  const ReferenceElement& ref() const { return ref_; }
  std::shared_ptr<const SparsityPattern> pattern() const { return pattern_; }
  void set_workers(int workers) { workers_ = workers; }
  int workers() const { return workers_; }

  SparseOperator create() const { return SparseOperator(pattern_); }

  /// (psi_j, psi_i)
  void mass(SparseOperator& out) const;
  /// (beta . grad psi_j, psi_i)
  void advection(const AdvectionField& beta, SparseOperator& out) const;
  /// sum_a (eps_a d_a psi_j, d_a psi_i), nodal eps interpolated with the
  /// same Q_k basis
  void diffusion(const ViscosityField& eps, SparseOperator& out) const;
  /// constant-coefficient variant; eps_a = coeff[a]
  void diffusion(std::span<const double> coeff, SparseOperator& out) const;
  /// (d_a psi_j, psi_i), used for gradient recovery
  void axis_gradient(int axis, SparseOperator& out) const;

  /// Load vector (g, psi_i) for nodal g interpolated with the basis.
  void load(std::span<const double> g, std::span<double> out) const;

  /// Load vector (|g_h + beta . grad f_h|, psi_i), the right-hand side of the
  /// smoothed residual projection.
  void residual_load(const AdvectionField& beta, std::span<const double> f,
                     std::span<const double> g, std::span<double> out) const;

  /// Visit every quadrature point of the interpolant of `values` with
  /// fn(coords, value, weight); used for moment and error integrals.
  using QuadratureFn = std::function<void(const double*, double, double)>;
  void quadrature_scan(std::span<const double> values,
                       const QuadratureFn& fn) const;

  /// Per-node integrals of the basis functions (tensor product of the 1d
  /// lumped weights); equals the row sums of the mass matrix.
  std::vector<double> lumped_mass() const;

 private:
  struct FormSpec;
  void assemble_form(const FormSpec& spec, SparseOperator& out) const;
  void scan(std::span<const double> values, const QuadratureFn* fn,
            std::span<double> load_out) const;
  template <class Kernel>
  void assemble(SparseOperator& out, const Kernel& kernel) const;

  const TensorMesh* mesh_;
  ReferenceElement ref_;
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<int> enodes_;  // elements x nloc
  std::vector<int> slots_;   // elements x nloc^2 -> value index
  int workers_ = 1;
};

/// Integrals of the nodal basis along one axis (composite Newton-Cotes
/// weights scaled by the element size).
std::vector<double> axis_integral_weights(const Axis& axis, int degree);

/// Evaluate a nodal field at an arbitrary point inside the box.
double eval_field(const TensorMesh& mesh, std::span<const double> values,
                  const double point[max_axes]);

}  // namespace vprv
