#include "vprv/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <thread>

namespace vprv {

void gauss_legendre(int n, std::vector<double>& pts, std::vector<double>& wts) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  pts.assign(n, 0.0);
  wts.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
      double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    if (n == 1) {
      x = 0.0;
      w = 2.0;
    }
    pts[i] = 0.5 * (1.0 - x);
    pts[n - 1 - i] = 0.5 * (1.0 + x);
    wts[i] = wts[n - 1 - i] = 0.5 * w;
  }
}

double lagrange_value(int degree, int p, double xi) {
  double v = 1.0;
  for (int m = 0; m <= degree; ++m) {
    if (m == p) continue;
    v *= (xi * degree - m) / (p - m);
  }
  return v;
}

double lagrange_grad(int degree, int p, double xi) {
  double g = 0.0;
  for (int r = 0; r <= degree; ++r) {
    if (r == p) continue;
    double term = static_cast<double>(degree) / (p - r);
    for (int m = 0; m <= degree; ++m) {
      if (m == p || m == r) continue;
      term *= (xi * degree - m) / (p - m);
    }
    g += term;
  }
  return g;
}

std::array<double, max_degree + 1> shape_integrals(int degree) {
  switch (degree) {
    case 1:
      return {1.0 / 2.0, 1.0 / 2.0, 0.0, 0.0};
    case 2:
      return {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 0.0};
    case 3:
      return {1.0 / 8.0, 3.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0};
    default:
      throw std::invalid_argument("shape_integrals: unsupported degree");
  }
}

ReferenceElement::ReferenceElement(int degree_in, int nq_in)
    : degree(degree_in), nq(nq_in > 0 ? nq_in : degree_in + 2) {
  gauss_legendre(nq, qpt, qwt);
  val.resize(nq * (degree + 1));
  grad.resize(nq * (degree + 1));
  for (int q = 0; q < nq; ++q) {
    for (int p = 0; p <= degree; ++p) {
      val[q * (degree + 1) + p] = lagrange_value(degree, p, qpt[q]);
      grad[q * (degree + 1) + p] = lagrange_grad(degree, p, qpt[q]);
    }
  }
}

int SparsityPattern::find(int row, int col) const {
  const int* b = cols.data() + offsets[row];
  const int* e = cols.data() + offsets[row + 1];
  const int* it = std::lower_bound(b, e, col);
  if (it == e || *it != col) return -1;
  return static_cast<int>(it - cols.data());
}

double SparseOperator::entry(int row, int col) const {
  int k = pattern_->find(row, col);
  return k < 0 ? 0.0 : values_[k];
}

std::span<const int> SparseOperator::row_cols(int row) const {
  return {pattern_->cols.data() + pattern_->offsets[row],
          static_cast<size_t>(pattern_->offsets[row + 1] -
                              pattern_->offsets[row])};
}

std::span<const double> SparseOperator::row_values(int row) const {
  return {values_.data() + pattern_->offsets[row],
          static_cast<size_t>(pattern_->offsets[row + 1] -
                              pattern_->offsets[row])};
}

void SparseOperator::multiply(std::span<const double> x,
                              std::span<double> y) const {
  const int n = pattern_->rows;
  const int* off = pattern_->offsets.data();
  const int* col = pattern_->cols.data();
  const double* v = values_.data();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = off[i]; k < off[i + 1]; ++k) s += v[k] * x[col[k]];
    y[i] = s;
  }
}

void SparseOperator::multiply_add(std::span<const double> x,
                                  std::span<double> y) const {
  const int n = pattern_->rows;
  const int* off = pattern_->offsets.data();
  const int* col = pattern_->cols.data();
  const double* v = values_.data();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = off[i]; k < off[i + 1]; ++k) s += v[k] * x[col[k]];
    y[i] += s;
  }
}

std::vector<double> SparseOperator::row_sums() const {
  std::vector<double> s(rows(), 0.0);
  for (int i = 0; i < rows(); ++i)
    for (double v : row_values(i)) s[i] += v;
  return s;
}

std::vector<double> SparseOperator::column_sums() const {
  std::vector<double> s(rows(), 0.0);
  const int* col = pattern_->cols.data();
  for (size_t k = 0; k < values_.size(); ++k) s[col[k]] += values_[k];
  return s;
}

AdvectionComponent AdvectionComponent::constant(double v) {
  AdvectionComponent c;
  c.kind = Kind::constant;
  c.value = v;
  return c;
}

AdvectionComponent AdvectionComponent::coordinate(int axis) {
  AdvectionComponent c;
  c.kind = Kind::coordinate;
  c.axis = axis;
  return c;
}

AdvectionComponent AdvectionComponent::axis_field(int axis,
                                                  std::vector<double> v) {
  AdvectionComponent c;
  c.kind = Kind::axis_field;
  c.axis = axis;
  c.values = std::move(v);
  return c;
}

AdvectionComponent AdvectionComponent::node_field(std::vector<double> v) {
  AdvectionComponent c;
  c.kind = Kind::node_field;
  c.values = std::move(v);
  return c;
}

double AdvectionField::at_node(const TensorMesh& mesh, int component,
                               long node) const {
  const AdvectionComponent& c = comp[component];
  switch (c.kind) {
    case AdvectionComponent::Kind::zero:
      return 0.0;
    case AdvectionComponent::Kind::constant:
      return c.value;
    case AdvectionComponent::Kind::coordinate:
    case AdvectionComponent::Kind::axis_field: {
      int nm[max_axes];
      mesh.node_multi(node, nm);
      if (c.kind == AdvectionComponent::Kind::coordinate)
        return mesh.axis(c.axis).coord(nm[c.axis]);
      return c.values[nm[c.axis]];
    }
    case AdvectionComponent::Kind::node_field:
      return c.values[node];
  }
  return 0.0;
}

double AdvectionField::max_norm(const TensorMesh& mesh) const {
  double best = 0.0;
  for (long n = 0; n < mesh.total_nodes(); ++n) {
    double s = 0.0;
    for (size_t c = 0; c < comp.size(); ++c) {
      double v = at_node(mesh, static_cast<int>(c), n);
      s += v * v;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

ViscosityField ViscosityField::zero(const TensorMesh& mesh) {
  ViscosityField f;
  f.eps.assign(mesh.dim(), std::vector<double>(mesh.total_nodes(), 0.0));
  return f;
}

ViscosityField ViscosityField::uniform(const TensorMesh& mesh,
                                       std::span<const double> per_axis) {
  ViscosityField f;
  for (int a = 0; a < mesh.dim(); ++a)
    f.eps.emplace_back(mesh.total_nodes(), per_axis[a]);
  return f;
}

double ViscosityField::max_entry(int axis) const {
  double m = 0.0;
  for (double v : eps[axis]) m = std::max(m, v);
  return m;
}

struct Assembler::FormSpec {
  enum class Type {
    mass,
    advection,
    diffusion_field,
    diffusion_const,
    gradient
  };
  Type type = Type::mass;
  const AdvectionField* beta = nullptr;
  const ViscosityField* eps = nullptr;
  const double* coeff = nullptr;
  int axis = 0;
};

Assembler::Assembler(const TensorMesh& mesh, int nq, int workers)
    : mesh_(&mesh),
      ref_(mesh.degree(), nq > 0 ? nq : mesh.degree() + 2),
      workers_(workers) {
  auto pat = std::make_shared<SparsityPattern>();
  pat->rows = static_cast<int>(mesh.total_nodes());
  pat->offsets = mesh.patch_offsets();
  pat->cols = mesh.patch_nodes();
  pattern_ = pat;

  const int nloc = mesh.nodes_per_element();
  const long ne = mesh.total_elements();
  enodes_.resize(ne * nloc);
  slots_.resize(ne * nloc * nloc);
  for (long e = 0; e < ne; ++e) {
    int* en = &enodes_[e * nloc];
    mesh.element_nodes(e, en);
    int* slot = &slots_[e * nloc * nloc];
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) {
        int s = pattern_->find(en[i], en[j]);
        if (s < 0) throw std::logic_error("assembler: pattern misses entry");
        slot[i * nloc + j] = s;
      }
  }
}

namespace {

// per-axis decompositions of flattened local-node / quadrature indices,
// last axis fastest
void decompose(int count1d, int dim, int flat, int out[max_axes]) {
  for (int a = dim - 1; a >= 0; --a) {
    out[a] = flat % count1d;
    flat /= count1d;
  }
}

}  // namespace

template <class Kernel>
void Assembler::assemble(SparseOperator& out, const Kernel& kernel) const {
  out.zero();
  const int nloc = mesh_->nodes_per_element();
  const long ne = mesh_->total_elements();
  auto run = [&](long e0, long e1, double* vals) {
    std::vector<double> local(nloc * nloc);
    for (long e = e0; e < e1; ++e) {
      std::fill(local.begin(), local.end(), 0.0);
      kernel(e, local.data());
      const int* slot = &slots_[e * nloc * nloc];
      for (int ij = 0; ij < nloc * nloc; ++ij) vals[slot[ij]] += local[ij];
    }
  };
  if (workers_ <= 1 || ne < 2) {
    run(0, ne, out.values().data());
    return;
  }
  const int nw = static_cast<int>(std::min<long>(workers_, ne));
  std::vector<std::vector<double>> priv(
      nw, std::vector<double>(out.values().size(), 0.0));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) {
    long e0 = ne * w / nw;
    long e1 = ne * (w + 1) / nw;
    pool.emplace_back(run, e0, e1, priv[w].data());
  }
  for (std::thread& t : pool) t.join();
  double* vals = out.values().data();
  for (int w = 0; w < nw; ++w)
    for (size_t k = 0; k < priv[w].size(); ++k) vals[k] += priv[w][k];
}

namespace {

struct ElementGeometry {
  double org[max_axes];
  double h[max_axes];
  double inv_h[max_axes];
  double detj = 1.0;
  int em[max_axes];
};

ElementGeometry element_geometry(const TensorMesh& mesh, long e) {
  ElementGeometry g;
  mesh.element_multi(e, g.em);
  g.detj = 1.0;
  for (int a = 0; a < mesh.dim(); ++a) {
    const Axis& ax = mesh.axis(a);
    g.h[a] = ax.h;
    g.inv_h[a] = 1.0 / ax.h;
    g.org[a] = ax.lo + g.em[a] * ax.h;
    g.detj *= ax.h;
  }
  return g;
}

int wrap_axis_node(const Axis& ax, int unwrapped) {
  if (!ax.periodic) return unwrapped;
  int r = unwrapped % ax.nodes;
  return r < 0 ? r + ax.nodes : r;
}

}  // namespace

void Assembler::assemble_form(const FormSpec& spec, SparseOperator& out) const {
  const TensorMesh& mesh = *mesh_;
  const int dim = mesh.dim();
  const int k1 = mesh.degree() + 1;
  const int nloc = mesh.nodes_per_element();
  int nqtot = 1;
  for (int a = 0; a < dim; ++a) nqtot *= ref_.nq;

  std::vector<int> locd(nloc * dim), qd(nqtot * dim);
  for (int l = 0; l < nloc; ++l) decompose(k1, dim, l, &locd[l * dim]);
  for (int q = 0; q < nqtot; ++q) decompose(ref_.nq, dim, q, &qd[q * dim]);

  const bool need_grad = spec.type != FormSpec::Type::mass;

  auto kernel = [&](long e, double* local) {
    ElementGeometry geo = element_geometry(mesh, e);
    const int* en = &enodes_[e * nloc];
    double psi[64];
    double dpsi[max_axes][64];
    double flux[64];
    for (int q = 0; q < nqtot; ++q) {
      const int* qa = &qd[q * dim];
      double w = geo.detj;
      const double* bv[max_axes];
      const double* bg[max_axes];
      for (int a = 0; a < dim; ++a) {
        w *= ref_.qwt[qa[a]];
        bv[a] = &ref_.val[qa[a] * k1];
        bg[a] = &ref_.grad[qa[a] * k1];
      }
      for (int l = 0; l < nloc; ++l) {
        const int* ld = &locd[l * dim];
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= bv[a][ld[a]];
        psi[l] = v;
      }
      if (need_grad) {
        for (int a = 0; a < dim; ++a) {
          for (int l = 0; l < nloc; ++l) {
            const int* ld = &locd[l * dim];
            double g = bg[a][ld[a]] * geo.inv_h[a];
            for (int b = 0; b < dim; ++b)
              if (b != a) g *= bv[b][ld[b]];
            dpsi[a][l] = g;
          }
        }
      }
      switch (spec.type) {
        case FormSpec::Type::mass: {
          for (int i = 0; i < nloc; ++i) {
            double c = w * psi[i];
            double* row = local + i * nloc;
            for (int j = 0; j < nloc; ++j) row[j] += c * psi[j];
          }
          break;
        }
        case FormSpec::Type::advection: {
          std::fill(flux, flux + nloc, 0.0);
          for (int a = 0; a < dim; ++a) {
            const AdvectionComponent& c = spec.beta->comp[a];
            double bval = 0.0;
            switch (c.kind) {
              case AdvectionComponent::Kind::zero:
                continue;
              case AdvectionComponent::Kind::constant:
                bval = c.value;
                break;
              case AdvectionComponent::Kind::coordinate:
                bval = geo.org[c.axis] + ref_.qpt[qa[c.axis]] * geo.h[c.axis];
                break;
              case AdvectionComponent::Kind::axis_field: {
                const Axis& ax = mesh.axis(c.axis);
                int base = geo.em[c.axis] * mesh.degree();
                double s = 0.0;
                for (int p = 0; p < k1; ++p)
                  s += bv[c.axis][p] * c.values[wrap_axis_node(ax, base + p)];
                bval = s;
                break;
              }
              case AdvectionComponent::Kind::node_field: {
                double s = 0.0;
                for (int l = 0; l < nloc; ++l) s += psi[l] * c.values[en[l]];
                bval = s;
                break;
              }
            }
            for (int j = 0; j < nloc; ++j) flux[j] += bval * dpsi[a][j];
          }
          for (int i = 0; i < nloc; ++i) {
            double c = w * psi[i];
            double* row = local + i * nloc;
            for (int j = 0; j < nloc; ++j) row[j] += c * flux[j];
          }
          break;
        }
        case FormSpec::Type::diffusion_field:
        case FormSpec::Type::diffusion_const: {
          for (int a = 0; a < dim; ++a) {
            double eps;
            if (spec.type == FormSpec::Type::diffusion_const) {
              eps = spec.coeff[a];
            } else {
              const std::vector<double>& ea = spec.eps->eps[a];
              double s = 0.0;
              for (int l = 0; l < nloc; ++l) s += psi[l] * ea[en[l]];
              eps = s;
            }
            if (eps == 0.0) continue;
            double we = w * eps;
            for (int i = 0; i < nloc; ++i) {
              double c = we * dpsi[a][i];
              double* row = local + i * nloc;
              for (int j = 0; j < nloc; ++j) row[j] += c * dpsi[a][j];
            }
          }
          break;
        }
        case FormSpec::Type::gradient: {
          const double* da = dpsi[spec.axis];
          for (int i = 0; i < nloc; ++i) {
            double c = w * psi[i];
            double* row = local + i * nloc;
            for (int j = 0; j < nloc; ++j) row[j] += c * da[j];
          }
          break;
        }
      }
    }
  };
  assemble(out, kernel);
}

void Assembler::mass(SparseOperator& out) const {
  FormSpec s;
  s.type = FormSpec::Type::mass;
  assemble_form(s, out);
}

void Assembler::advection(const AdvectionField& beta,
                          SparseOperator& out) const {
  FormSpec s;
  s.type = FormSpec::Type::advection;
  s.beta = &beta;
  assemble_form(s, out);
}

void Assembler::diffusion(const ViscosityField& eps, SparseOperator& out) const {
  FormSpec s;
  s.type = FormSpec::Type::diffusion_field;
  s.eps = &eps;
  assemble_form(s, out);
}

void Assembler::diffusion(std::span<const double> coeff,
                          SparseOperator& out) const {
  FormSpec s;
  s.type = FormSpec::Type::diffusion_const;
  s.coeff = coeff.data();
  assemble_form(s, out);
}

void Assembler::axis_gradient(int axis, SparseOperator& out) const {
  FormSpec s;
  s.type = FormSpec::Type::gradient;
  s.axis = axis;
  assemble_form(s, out);
}

std::vector<double> Assembler::lumped_mass() const {
  const TensorMesh& mesh = *mesh_;
  std::vector<std::vector<double>> axw;
  for (int a = 0; a < mesh.dim(); ++a)
    axw.push_back(axis_integral_weights(mesh.axis(a), mesh.degree()));
  std::vector<double> m(mesh.total_nodes());
  int nm[max_axes];
  for (long n = 0; n < mesh.total_nodes(); ++n) {
    mesh.node_multi(n, nm);
    double v = 1.0;
    for (int a = 0; a < mesh.dim(); ++a) v *= axw[a][nm[a]];
    m[n] = v;
  }
  return m;
}

std::vector<double> axis_integral_weights(const Axis& axis, int degree) {
  std::array<double, max_degree + 1> frac = shape_integrals(degree);
  std::vector<double> w(axis.nodes, 0.0);
  for (int e = 0; e < axis.elements; ++e) {
    for (int p = 0; p <= degree; ++p) {
      int n = wrap_axis_node(axis, e * degree + p);
      w[n] += axis.h * frac[p];
    }
  }
  return w;
}

void Assembler::load(std::span<const double> g, std::span<double> out) const {
  scan(g, nullptr, out);
}

void Assembler::residual_load(const AdvectionField& beta,
                              std::span<const double> f,
                              std::span<const double> g,
                              std::span<double> out) const {
  const TensorMesh& mesh = *mesh_;
  const int dim = mesh.dim();
  const int k1 = mesh.degree() + 1;
  const int nloc = mesh.nodes_per_element();
  int nqtot = 1;
  for (int a = 0; a < dim; ++a) nqtot *= ref_.nq;
  std::vector<int> locd(nloc * dim), qd(nqtot * dim);
  for (int l = 0; l < nloc; ++l) decompose(k1, dim, l, &locd[l * dim]);
  for (int q = 0; q < nqtot; ++q) decompose(ref_.nq, dim, q, &qd[q * dim]);

  std::fill(out.begin(), out.end(), 0.0);
  double psi[64];
  double dpsi[max_axes][64];
  int en[64];
  for (long e = 0; e < mesh.total_elements(); ++e) {
    ElementGeometry geo = element_geometry(mesh, e);
    mesh.element_nodes(e, en);
    for (int q = 0; q < nqtot; ++q) {
      const int* qa = &qd[q * dim];
      double w = geo.detj;
      const double* bv[max_axes];
      const double* bg[max_axes];
      for (int a = 0; a < dim; ++a) {
        w *= ref_.qwt[qa[a]];
        bv[a] = &ref_.val[qa[a] * k1];
        bg[a] = &ref_.grad[qa[a] * k1];
      }
      for (int l = 0; l < nloc; ++l) {
        const int* ld = &locd[l * dim];
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= bv[a][ld[a]];
        psi[l] = v;
      }
      for (int a = 0; a < dim; ++a) {
        for (int l = 0; l < nloc; ++l) {
          const int* ld = &locd[l * dim];
          double gr = bg[a][ld[a]] * geo.inv_h[a];
          for (int b = 0; b < dim; ++b)
            if (b != a) gr *= bv[b][ld[b]];
          dpsi[a][l] = gr;
        }
      }
      double resid = 0.0;
      for (int l = 0; l < nloc; ++l) resid += psi[l] * g[en[l]];
      for (int a = 0; a < dim; ++a) {
        const AdvectionComponent& c = beta.comp[a];
        if (c.kind == AdvectionComponent::Kind::zero) continue;
        double bval = 0.0;
        switch (c.kind) {
          case AdvectionComponent::Kind::zero:
            break;
          case AdvectionComponent::Kind::constant:
            bval = c.value;
            break;
          case AdvectionComponent::Kind::coordinate:
            bval = geo.org[c.axis] + ref_.qpt[qa[c.axis]] * geo.h[c.axis];
            break;
          case AdvectionComponent::Kind::axis_field: {
            const Axis& ax = mesh.axis(c.axis);
            int base = geo.em[c.axis] * mesh.degree();
            double s = 0.0;
            for (int p = 0; p < k1; ++p)
              s += bv[c.axis][p] * c.values[wrap_axis_node(ax, base + p)];
            bval = s;
            break;
          }
          case AdvectionComponent::Kind::node_field: {
            double s = 0.0;
            for (int l = 0; l < nloc; ++l) s += psi[l] * c.values[en[l]];
            bval = s;
            break;
          }
        }
        double df = 0.0;
        for (int l = 0; l < nloc; ++l) df += dpsi[a][l] * f[en[l]];
        resid += bval * df;
      }
      double v = w * std::abs(resid);
      for (int i = 0; i < nloc; ++i) out[en[i]] += v * psi[i];
    }
  }
}

void Assembler::scan(std::span<const double> values,
                     const QuadratureFn* fn, std::span<double> load_out) const {
  const TensorMesh& mesh = *mesh_;
  const int dim = mesh.dim();
  const int k1 = mesh.degree() + 1;
  const int nloc = mesh.nodes_per_element();
  int nqtot = 1;
  for (int a = 0; a < dim; ++a) nqtot *= ref_.nq;
  std::vector<int> locd(nloc * dim), qd(nqtot * dim);
  for (int l = 0; l < nloc; ++l) decompose(k1, dim, l, &locd[l * dim]);
  for (int q = 0; q < nqtot; ++q) decompose(ref_.nq, dim, q, &qd[q * dim]);

  if (!load_out.empty()) std::fill(load_out.begin(), load_out.end(), 0.0);
  double psi[64];
  int en[64];
  double coords[max_axes];
  for (long e = 0; e < mesh.total_elements(); ++e) {
    ElementGeometry geo = element_geometry(mesh, e);
    mesh.element_nodes(e, en);
    for (int q = 0; q < nqtot; ++q) {
      const int* qa = &qd[q * dim];
      double w = geo.detj;
      const double* bv[max_axes];
      for (int a = 0; a < dim; ++a) {
        w *= ref_.qwt[qa[a]];
        bv[a] = &ref_.val[qa[a] * k1];
        coords[a] = geo.org[a] + ref_.qpt[qa[a]] * geo.h[a];
      }
      for (int l = 0; l < nloc; ++l) {
        const int* ld = &locd[l * dim];
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= bv[a][ld[a]];
        psi[l] = v;
      }
      double fv = 0.0;
      for (int l = 0; l < nloc; ++l) fv += psi[l] * values[en[l]];
      if (fn) (*fn)(coords, fv, w);
      if (!load_out.empty())
        for (int i = 0; i < nloc; ++i) load_out[en[i]] += w * fv * psi[i];
    }
  }
}

void Assembler::quadrature_scan(std::span<const double> values,
                                const QuadratureFn& fn) const {
  scan(values, &fn, {});
}

double eval_field(const TensorMesh& mesh, std::span<const double> values,
                  const double point[max_axes]) {
  const int dim = mesh.dim();
  const int k = mesh.degree();
  int em[max_axes] = {0, 0, 0};
  double xi[max_axes];
  for (int a = 0; a < dim; ++a) {
    const Axis& ax = mesh.axis(a);
    double x = point[a];
    if (ax.periodic) {
      x = std::fmod(x - ax.lo, ax.length);
      if (x < 0) x += ax.length;
      x += ax.lo;
    }
    int e = static_cast<int>(std::floor((x - ax.lo) / ax.h));
    e = std::clamp(e, 0, ax.elements - 1);
    em[a] = e;
    xi[a] = (x - (ax.lo + e * ax.h)) / ax.h;
  }
  long elem = mesh.element_id(em);
  const int nloc = mesh.nodes_per_element();
  double bv[max_axes][max_degree + 1];
  for (int a = 0; a < dim; ++a)
    for (int p = 0; p <= k; ++p) bv[a][p] = lagrange_value(k, p, xi[a]);
  double s = 0.0;
  for (int l = 0; l < nloc; ++l) {
    int ld[max_axes];
    decompose(k + 1, dim, l, ld);
    double v = values[mesh.element_node(elem, l)];
    for (int a = 0; a < dim; ++a) v *= bv[a][ld[a]];
    s += v;
  }
  return s;
}

}  // namespace vprv
