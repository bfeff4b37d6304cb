#include "hps/patch.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Sparse>

#include "hps/errors.hpp"

namespace hps {

using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplets = std::vector<Eigen::Triplet<double>>;

namespace {

constexpr double kMaxCondition = 1e13;

// Chebyshev-Lobatto points cos(pi j / n), descending, with their differentiation matrix.
void chebyshev(int n, std::vector<double>& x, Eigen::MatrixXd& d) {
  x.resize(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) x[j] = std::sin(std::numbers::pi * (n - 2.0 * j) / (2.0 * n));
  d.setZero(n + 1, n + 1);
  auto c = [n](int j) { return ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j)
      if (i != j) d(i, j) = c(i) / c(j) / (x[i] - x[j]);
    d(i, i) = -d.row(i).sum();
  }
}

Eigen::MatrixXd fourier_diff(int m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  const double h = 2.0 * std::numbers::pi / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const int k = i - j;
      d(i, j) = 0.5 * ((k % 2) ? -1.0 : 1.0) / std::tan(0.5 * k * h);
    }
  return d;
}

// Band-limited interpolation weights on an even number of equispaced angles.
void trig_weights(int m, double theta, double* w) {
  const double h = 2.0 * std::numbers::pi / m;
  for (int j = 0; j < m; ++j) {
    const double d = theta - j * h;
    const double s = std::sin(0.5 * d);
    if (std::abs(s) < 1e-14) {
      for (int k = 0; k < m; ++k) w[k] = 0.0;
      w[j] = 1.0;
      return;
    }
    w[j] = std::sin(0.5 * m * d) / (m * std::tan(0.5 * d));
  }
}

void interp_1d(const std::vector<double>& nodes, const std::vector<double>& bary, double t,
               double* w) {
  const std::size_t n = nodes.size();
  double denom = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = t - nodes[j];
    if (d == 0.0) {
      for (std::size_t k = 0; k < n; ++k) w[k] = 0.0;
      w[j] = 1.0;
      return;
    }
    w[j] = bary[j] / d;
    denom += w[j];
  }
  for (std::size_t j = 0; j < n; ++j) w[j] /= denom;
}

}  // namespace

double perimeter(const Patch& patch) {
  if (const auto* d = std::get_if<DiskPatch>(&patch)) return 2.0 * std::numbers::pi * d->radius;
  return 4.0 * std::get<SquarePatch>(patch).square.side;
}

bool patch_contains(const Patch& patch, Point p, double tol) {
  if (const auto* d = std::get_if<DiskPatch>(&patch))
    return std::hypot(p.x - d->center.x, p.y - d->center.y) <= d->radius * (1.0 + tol);
  return std::get<SquarePatch>(patch).square.contains(p, tol * std::get<SquarePatch>(patch).square.side);
}

std::string describe(const Patch& patch) {
  std::ostringstream os;
  if (const auto* d = std::get_if<DiskPatch>(&patch))
    os << "disk patch (center " << d->center.x << "," << d->center.y << "; radius " << d->radius << ")";
  else {
    const auto& s = std::get<SquarePatch>(patch).square;
    os << "square patch (corner " << s.corner.x << "," << s.corner.y << "; side " << s.side << ")";
  }
  return os.str();
}

struct PatchSolver::Impl {
  struct BoundaryNode {
    int node;
    std::vector<Point> normals;  // two at square corners
  };

  Patch patch;
  std::vector<Point> nodes;
  SparseRow op, gx, gy;
  std::vector<BoundaryNode> boundary;
  std::vector<bool> on_boundary;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double condition = 0.0;

  // Chebyshev nodes (full diameter on a disk) and their barycentric weights.
  std::vector<double> cheb;
  std::vector<double> cheb_bary;
  int rings = 0;   // disk: positive-radius Chebyshev points
  int angles = 0;  // disk: Fourier points
  int p = 0;       // square: points per axis

  void build_disk(const DiskPatch& disk, const ScalarField& a, const ScalarField& b, int order, int angular);
  void build_square(const SquarePatch& sq, const ScalarField& a, const ScalarField& b, int order);
  double arclength(Point x, Point normal) const;
  void interp_row(Point pt, double* row) const;
};

void PatchSolver::Impl::build_disk(const DiskPatch& disk, const ScalarField& a,
                                   const ScalarField& b, int order, int angular) {
  rings = (order + 1) / 2;
  angles = angular > 0 ? angular + (angular % 2) : 2 * 2 * rings;
  const int n_cheb = 2 * rings - 1;  // odd, so r = 0 is never a node
  Eigen::MatrixXd d;
  chebyshev(n_cheb, cheb, d);
  cheb_bary = barycentric_weights(cheb);
  const double radius = disk.radius;
  const int m = rings * angles;
  const int half_turn = angles / 2;

  nodes.resize(static_cast<std::size_t>(m));
  Eigen::VectorXd r(m), cos_t(m), sin_t(m), a_val(m), b_val(m);
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < angles; ++j) {
      const int k = i * angles + j;
      const double theta = 2.0 * std::numbers::pi * j / angles;
      r[k] = radius * cheb[i];
      cos_t[k] = std::cos(theta);
      sin_t[k] = std::sin(theta);
      nodes[k] = disk.center + Point{r[k] * cos_t[k], r[k] * sin_t[k]};
      a_val[k] = a(nodes[k]);
      b_val[k] = b(nodes[k]);
    }

  // d/dr on the folded grid: the node at -r, theta is the node at r, theta + pi.
  Triplets tr;
  tr.reserve(static_cast<std::size_t>(m) * 2 * rings);
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < angles; ++j) {
      const int row = i * angles + j;
      for (int q = 0; q < rings; ++q) tr.emplace_back(row, q * angles + j, d(i, q) / radius);
      for (int q = 0; q < rings; ++q)
        tr.emplace_back(row, (rings - 1 - q) * angles + (j + half_turn) % angles,
                        d(i, rings + q) / radius);
    }
  SparseRow dr(m, m);
  dr.setFromTriplets(tr.begin(), tr.end());

  const Eigen::MatrixXd dtheta = fourier_diff(angles);
  Triplets tt;
  tt.reserve(static_cast<std::size_t>(m) * angles);
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < angles; ++j)
      for (int q = 0; q < angles; ++q)
        if (q != j) tt.emplace_back(i * angles + j, i * angles + q, dtheta(j, q));
  SparseRow dt(m, m);
  dt.setFromTriplets(tt.begin(), tt.end());

  const Eigen::VectorXd inv_r = r.cwiseInverse();
  SparseRow radial = inv_r.asDiagonal() * SparseRow(dr * (r.cwiseProduct(a_val)).asDiagonal() * dr);
  SparseRow angular_part = inv_r.cwiseAbs2().asDiagonal() * SparseRow(dt * a_val.asDiagonal() * dt);
  SparseRow mass(m, m);
  {
    Triplets tb;
    for (int k = 0; k < m; ++k) tb.emplace_back(k, k, b_val[k]);
    mass.setFromTriplets(tb.begin(), tb.end());
  }
  op = mass - radial - angular_part;
  gx = SparseRow(cos_t.asDiagonal() * dr) - SparseRow(sin_t.cwiseProduct(inv_r).asDiagonal() * dt);
  gy = SparseRow(sin_t.asDiagonal() * dr) + SparseRow(cos_t.cwiseProduct(inv_r).asDiagonal() * dt);

  on_boundary.assign(static_cast<std::size_t>(m), false);
  for (int j = 0; j < angles; ++j) {
    on_boundary[j] = true;
    boundary.push_back({j, {Point{cos_t[j], sin_t[j]}}});
  }
}

void PatchSolver::Impl::build_square(const SquarePatch& sq, const ScalarField& a,
                                     const ScalarField& b, int order) {
  p = std::max(order, 3);
  Eigen::MatrixXd d;
  chebyshev(p - 1, cheb, d);
  cheb_bary = barycentric_weights(cheb);
  const double half = 0.5 * sq.square.side;
  const Point c = sq.square.center();
  const int m = p * p;

  nodes.resize(static_cast<std::size_t>(m));
  Eigen::VectorXd a_val(m), b_val(m);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      const int k = i * p + j;
      nodes[k] = c + Point{half * cheb[i], half * cheb[j]};
      a_val[k] = a(nodes[k]);
      b_val[k] = b(nodes[k]);
    }

  Triplets tx, ty;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int q = 0; q < p; ++q) {
        tx.emplace_back(i * p + j, q * p + j, d(i, q) / half);
        ty.emplace_back(i * p + j, i * p + q, d(j, q) / half);
      }
  gx.resize(m, m);
  gx.setFromTriplets(tx.begin(), tx.end());
  gy.resize(m, m);
  gy.setFromTriplets(ty.begin(), ty.end());

  SparseRow mass(m, m);
  {
    Triplets tb;
    for (int k = 0; k < m; ++k) tb.emplace_back(k, k, b_val[k]);
    mass.setFromTriplets(tb.begin(), tb.end());
  }
  op = mass - SparseRow(gx * a_val.asDiagonal() * gx) - SparseRow(gy * a_val.asDiagonal() * gy);

  on_boundary.assign(static_cast<std::size_t>(m), false);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      std::vector<Point> normals;
      if (i == 0) normals.push_back({1.0, 0.0});
      if (i == p - 1) normals.push_back({-1.0, 0.0});
      if (j == 0) normals.push_back({0.0, 1.0});
      if (j == p - 1) normals.push_back({0.0, -1.0});
      if (normals.empty()) continue;
      on_boundary[i * p + j] = true;
      boundary.push_back({i * p + j, std::move(normals)});
    }
}

double PatchSolver::Impl::arclength(Point x, Point normal) const {
  if (const auto* d = std::get_if<DiskPatch>(&patch)) {
    double theta = std::atan2(x.y - d->center.y, x.x - d->center.x);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    return d->radius * theta;
  }
  const Square& s = std::get<SquarePatch>(patch).square;
  const double x0 = s.corner.x, y0 = s.corner.y, len = s.side;
  if (normal.y < -0.5) return x.x - x0;
  if (normal.x > 0.5) return len + (x.y - y0);
  if (normal.y > 0.5) return 2.0 * len + (x0 + len - x.x);
  return 3.0 * len + (y0 + len - x.y);
}

void PatchSolver::Impl::interp_row(Point pt, double* row) const {
  const int m = static_cast<int>(nodes.size());
  for (int k = 0; k < m; ++k) row[k] = 0.0;
  std::vector<double> wc(cheb.size());
  if (const auto* d = std::get_if<DiskPatch>(&patch)) {
    const double dx = pt.x - d->center.x, dy = pt.y - d->center.y;
    const double rho = std::hypot(dx, dy) / d->radius;
    const double theta = std::atan2(dy, dx);
    interp_1d(cheb, cheb_bary, std::min(rho, 1.0), wc.data());
    std::vector<double> w0(static_cast<std::size_t>(angles)), w1(static_cast<std::size_t>(angles));
    trig_weights(angles, theta, w0.data());
    trig_weights(angles, theta + std::numbers::pi, w1.data());
    for (int i = 0; i < rings; ++i) {
      const double wr = wc[static_cast<std::size_t>(i)];
      const double wn = wc[static_cast<std::size_t>(2 * rings - 1 - i)];  // node at -r_i
      for (int j = 0; j < angles; ++j) row[i * angles + j] = wr * w0[j] + wn * w1[j];
    }
    return;
  }
  const Square& s = std::get<SquarePatch>(patch).square;
  const Point c = s.center();
  const double half = 0.5 * s.side;
  std::vector<double> wy(cheb.size());
  interp_1d(cheb, cheb_bary, (pt.x - c.x) / half, wc.data());
  interp_1d(cheb, cheb_bary, (pt.y - c.y) / half, wy.data());
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) row[i * p + j] = wc[i] * wy[j];
}

PatchSolver::PatchSolver(const ScalarField& a, const ScalarField& b, const Patch& patch,
                         int order, int angular, FlopCounter* flops)
    : impl_(std::make_unique<Impl>()) {
  if (order < 2) throw std::invalid_argument("PatchSolver: order must be >= 2");
  impl_->patch = patch;
  if (const auto* d = std::get_if<DiskPatch>(&patch)) {
    if (!(d->radius > 0.0)) throw std::invalid_argument("PatchSolver: radius must be > 0");
    impl_->build_disk(*d, a, b, order, angular);
  } else {
    impl_->build_square(std::get<SquarePatch>(patch), a, b, order);
  }

  Eigen::MatrixXd system = Eigen::MatrixXd(impl_->op);
  for (const auto& bn : impl_->boundary) {
    system.row(bn.node).setZero();
    const double share = 1.0 / static_cast<double>(bn.normals.size());
    for (const Point& n : bn.normals) {
      for (SparseRow::InnerIterator it(impl_->gx, bn.node); it; ++it)
        system(bn.node, it.col()) += share * n.x * it.value();
      for (SparseRow::InnerIterator it(impl_->gy, bn.node); it; ++it)
        system(bn.node, it.col()) += share * n.y * it.value();
    }
  }
  impl_->lu.compute(system);
  add_flops(flops, lu_flops(static_cast<double>(system.rows())));
  const double rcond = impl_->lu.rcond();
  impl_->condition = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(impl_->condition <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "collocation system on " << describe(patch) << " is singular or ill-conditioned"
        << " (condition estimate " << impl_->condition << ")";
    throw DegenerateProblemError(msg.str());
  }
}

PatchSolver::~PatchSolver() = default;
PatchSolver::PatchSolver(PatchSolver&&) noexcept = default;
PatchSolver& PatchSolver::operator=(PatchSolver&&) noexcept = default;

const Patch& PatchSolver::patch() const { return impl_->patch; }
int PatchSolver::unknowns() const { return static_cast<int>(impl_->nodes.size()); }
const std::vector<Point>& PatchSolver::nodes() const { return impl_->nodes; }
double PatchSolver::condition_estimate() const { return impl_->condition; }

Eigen::MatrixXd PatchSolver::solve(std::span<const BoundaryFlux> fluxes, FlopCounter* flops) const {
  const int m = unknowns();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(fluxes.size()));
  for (const auto& bn : impl_->boundary) {
    const Point x = impl_->nodes[bn.node];
    for (std::size_t f = 0; f < fluxes.size(); ++f) {
      double g = 0.0;
      for (const Point& n : bn.normals) g += fluxes[f](BoundaryPoint{x, n, impl_->arclength(x, n)});
      rhs(bn.node, static_cast<Eigen::Index>(f)) = g / static_cast<double>(bn.normals.size());
    }
  }
  add_flops(flops, lu_solve_flops(m, static_cast<double>(fluxes.size())));
  return impl_->lu.solve(rhs);
}

Eigen::MatrixXd PatchSolver::evaluation_matrix(std::span<const Point> points,
                                               FieldComponent c) const {
  const int m = unknowns();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> e(
      static_cast<Eigen::Index>(points.size()), m);
  for (std::size_t q = 0; q < points.size(); ++q) {
    if (!patch_contains(impl_->patch, points[q], 1e-10))
      throw std::invalid_argument("evaluation point lies outside " + describe(impl_->patch));
    impl_->interp_row(points[q], e.row(static_cast<Eigen::Index>(q)).data());
  }
  switch (c) {
    case FieldComponent::value: return e;
    case FieldComponent::dx: return e * impl_->gx;
    case FieldComponent::dy: return e * impl_->gy;
  }
  return e;
}

double PatchSolver::interior_residual(const Eigen::VectorXd& grid) const {
  const Eigen::VectorXd r = impl_->op * grid;
  double res = 0.0, op_norm = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    if (impl_->on_boundary[static_cast<std::size_t>(k)]) continue;
    res = std::max(res, std::abs(r[k]));
    op_norm = std::max(op_norm, impl_->op.row(k).cwiseAbs().sum());
  }
  const double scale = op_norm * grid.cwiseAbs().maxCoeff();
  return scale > 0.0 ? res / scale : res;
}

double PatchSolution::value(Point p) const {
  return (solver_->evaluation_matrix(std::span(&p, 1), FieldComponent::value) * grid_)(0);
}

Point PatchSolution::gradient(Point p) const {
  const double gx = (solver_->evaluation_matrix(std::span(&p, 1), FieldComponent::dx) * grid_)(0);
  const double gy = (solver_->evaluation_matrix(std::span(&p, 1), FieldComponent::dy) * grid_)(0);
  return {gx, gy};
}

Eigen::VectorXd PatchSolution::values(std::span<const Point> points) const {
  return solver_->evaluation_matrix(points, FieldComponent::value) * grid_;
}

PatchSolution solve_patch(const ProblemSpec& spec, const Patch& patch,
                          const BoundaryFlux& flux, int p_patch) {
  auto solver = std::make_shared<const PatchSolver>(spec.a, spec.b, patch, p_patch);
  Eigen::MatrixXd grid = solver->solve(std::span(&flux, 1));
  return PatchSolution(std::move(solver), grid.col(0));
}

}  // namespace hps
