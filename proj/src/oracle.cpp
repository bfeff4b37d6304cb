#include "hps/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "hps/errors.hpp"

namespace hps {

NeumannData AnalyticSolution::data() const {
  auto g = grad;
  return {name, [g](Point p, Orientation o) {
            const Point d = g(p);
            return o == Orientation::vertical ? d.x : d.y;
          }};
}

ProblemSpec AnalyticSolution::problem() const {
  ProblemSpec spec;
  spec.a = a();
  spec.b = b();
  spec.data = data();
  return spec;
}

AnalyticSolution cosh_x_solution(double kappa) {
  return {"cosh_x_k" + std::to_string(static_cast<int>(kappa)), kappa,
          [kappa](Point p) { return std::cosh(kappa * p.x); },
          [kappa](Point p) { return Point{kappa * std::sinh(kappa * p.x), 0.0}; }};
}

AnalyticSolution exp_y_solution(double kappa) {
  return {"exp_y_k" + std::to_string(static_cast<int>(kappa)), kappa,
          [kappa](Point p) { return std::exp(kappa * p.y); },
          [kappa](Point p) { return Point{0.0, kappa * std::exp(kappa * p.y)}; }};
}

AnalyticSolution plane_wave_solution(double kappa, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const int deg = static_cast<int>(std::lround(theta * 180.0 / std::numbers::pi));
  return {"plane_k" + std::to_string(static_cast<int>(kappa)) + "_deg" + std::to_string(deg), kappa,
          [=](Point p) { return std::cosh(kappa * (c * p.x + s * p.y)); },
          [=](Point p) {
            const double sh = kappa * std::sinh(kappa * (c * p.x + s * p.y));
            return Point{c * sh, s * sh};
          }};
}

AnalyticSolution radial_solution(double kappa, Point source) {
  return {"radial_k" + std::to_string(static_cast<int>(kappa)), kappa,
          [=](Point p) {
            const Point d = p - source;
            return std::cyl_bessel_k(0.0, kappa * std::hypot(d.x, d.y));
          },
          [=](Point p) {
            const Point d = p - source;
            const double r = std::hypot(d.x, d.y);
            const double f = -kappa * std::cyl_bessel_k(1.0, kappa * r) / r;
            return Point{f * d.x, f * d.y};
          }};
}

std::vector<AnalyticSolution> analytic_suite() {
  std::vector<AnalyticSolution> out;
  for (double k : {1.0, 2.0}) {
    out.push_back(cosh_x_solution(k));
    out.push_back(exp_y_solution(k));
  }
  for (double theta : {0.0, std::numbers::pi / 6.0}) out.push_back(plane_wave_solution(1.0, theta));
  out.push_back(radial_solution(1.0, Point{-1.5, 0.5}));
  return out;
}

double pde_residual(const AnalyticSolution& s, const std::vector<Point>& points, double step) {
  static constexpr double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const double k2 = s.kappa * s.kappa;
  double worst = 0.0, scale = 0.0;
  for (const Point& p : points) {
    double div = 0.0;
    for (int m = 0; m < 4; ++m) {
      const double d = (m + 1) * step;
      div += c[m] * (s.grad(p + Point{d, 0.0}).x - s.grad(p - Point{d, 0.0}).x);
      div += c[m] * (s.grad(p + Point{0.0, d}).y - s.grad(p - Point{0.0, d}).y);
    }
    div /= step;
    const double phi = s.phi(p);
    worst = std::max(worst, std::abs(-div + k2 * phi));
    scale = std::max(scale, std::abs(k2 * phi));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double FdSolution::sample(Point p) const {
  if (!domain.contains(p, 1e-12)) throw std::invalid_argument("FdSolution::sample: point outside domain");
  const double fx = std::clamp((p.x - domain.corner.x) / h(), 0.0, static_cast<double>(grid_n));
  const double fy = std::clamp((p.y - domain.corner.y) / h(), 0.0, static_cast<double>(grid_n));
  const int i = std::min(static_cast<int>(fx), grid_n - 1);
  const int j = std::min(static_cast<int>(fy), grid_n - 1);
  const double tx = fx - i, ty = fy - j;
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
         (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

FdSolution fd_solve(const ScalarField& a, const ScalarField& b, const NeumannData& data,
                    const Square& domain, int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("fd_solve: grid_n must be at least 16");
  const int m = grid_n + 1;
  const double h = domain.side / grid_n;
  const double ih2 = 1.0 / (h * h);
  auto idx = [m](int i, int j) { return j * m + i; };
  auto node = [&](double i, double j) { return domain.corner + Point{i * h, j * h}; };

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(m) * m * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m * m);

  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int row = idx(i, j);
      double diag = b(node(i, j));
      if (!(diag > 0.0))
        throw DegenerateProblemError("fd_solve: b must be strictly positive; the pure Neumann problem has no unique solution");
      // Each of the four neighbours; a missing one is a ghost node eliminated with the
      // Neumann data, phi_ghost = phi_mirror -/+ 2 h dphi.
      const struct { int di, dj; } dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& d : dirs) {
        const double coef = a(node(i + 0.5 * d.di, j + 0.5 * d.dj)) * ih2;
        diag += coef;
        int ni = i + d.di, nj = j + d.dj;
        if (ni >= 0 && ni < m && nj >= 0 && nj < m) {
          trips.emplace_back(row, idx(ni, nj), -coef);
          continue;
        }
        const Orientation o = d.di != 0 ? Orientation::vertical : Orientation::horizontal;
        const double g = data(node(i, j), o);
        const double step = d.di != 0 ? d.di : d.dj;
        // phi_ghost = phi_mirror + 2 h step * g
        ni = i - d.di;
        nj = j - d.dj;
        trips.emplace_back(row, idx(ni, nj), -coef);
        rhs[row] += coef * 2.0 * h * step * g;
      }
      trips.emplace_back(row, row, diag);
    }
  }
  Eigen::SparseMatrix<double> mat(m * m, m * m);
  mat.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(mat);
  lu.factorize(mat);
  if (lu.info() != Eigen::Success) throw DegenerateProblemError("fd_solve: singular system");
  FdSolution out{domain, grid_n, lu.solve(rhs)};
  if (lu.info() != Eigen::Success || !out.phi.allFinite())
    throw DegenerateProblemError("fd_solve: solve failed");
  return out;
}

}  // namespace hps
