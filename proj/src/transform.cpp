#include "toric/transform.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "toric/error.hpp"

namespace toric {

SymplecticPotential::SymplecticPotential(const Polytope& P, Eigen::VectorXd beta, SmoothPart f)
    : P_(P), beta_(std::move(beta)), f_(std::move(f)) {
  if (beta_.size() != P_.facet_count())
    throw Error(ErrorCode::InvalidInput, "beta length must match facet count");
  if (beta_.minCoeff() <= 0) throw Error(ErrorCode::InvalidAngles, "beta must be positive");
}

double SymplecticPotential::value(const Eigen::VectorXd& x) const {
  double u = 0;
  for (int j = 0; j < P_.facet_count(); ++j) {
    double l = P_.facet_value(j, x);
    if (l < 0)
      throw Error(ErrorCode::EvaluationOutsideDomain, "point outside the closed polytope", j);
    if (l > 0) u += l * std::log(l) / beta_[j];
  }
  if (f_) u += f_.value(x);
  return u;
}

Eigen::VectorXd SymplecticPotential::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(P_.dimension());
  for (int j = 0; j < P_.facet_count(); ++j) {
    double l = P_.facet_value(j, x);
    if (l <= 0)
      throw Error(ErrorCode::EvaluationOutsideDomain, "gradient needs an interior point", j);
    g += (1.0 + std::log(l)) / beta_[j] * P_.facet(j).normal.cast<double>();
  }
  if (f_) g += f_.gradient(x);
  return g;
}

Eigen::MatrixXd SymplecticPotential::hessian(const Eigen::VectorXd& x) const {
  const int n = P_.dimension();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < P_.facet_count(); ++j) {
    double l = P_.facet_value(j, x);
    if (l <= 0)
      throw Error(ErrorCode::EvaluationOutsideDomain, "hessian needs an interior point", j);
    Eigen::VectorXd v = P_.facet(j).normal.cast<double>();
    H += v * v.transpose() / (beta_[j] * l);
  }
  if (f_) H += f_.hessian(x);
  return H;
}

SymplecticPotential guillemin_potential(const Polytope& P, const Eigen::VectorXd& beta) {
  return SymplecticPotential(P, beta);
}

GridPotential::GridPotential(GridSpec spec, bool is_reference)
    : spec_(spec), is_reference_(is_reference), values_(Eigen::VectorXd::Zero(spec.size())) {
  if (spec_.m < 2) throw Error(ErrorCode::InvalidInput, "grid needs at least 2 points per axis");
  if (spec_.R <= 0) throw Error(ErrorCode::InvalidInput, "grid radius must be positive");
}

long GridPotential::index(const std::vector<int>& multi) const {
  long flat = 0;
  for (int d = 0; d < spec_.dim; ++d) flat = flat * spec_.m + multi[d];
  return flat;
}

std::vector<int> GridPotential::multi_index(long flat) const {
  std::vector<int> multi(spec_.dim);
  for (int d = spec_.dim - 1; d >= 0; --d) {
    multi[d] = static_cast<int>(flat % spec_.m);
    flat /= spec_.m;
  }
  return multi;
}

Eigen::VectorXd GridPotential::node(long flat) const {
  std::vector<int> multi = multi_index(flat);
  Eigen::VectorXd rho(spec_.dim);
  for (int d = 0; d < spec_.dim; ++d) rho[d] = -spec_.R + multi[d] * spec_.h();
  return rho;
}

bool GridPotential::is_interior(long flat, int margin) const {
  std::vector<int> multi = multi_index(flat);
  for (int d = 0; d < spec_.dim; ++d)
    if (multi[d] < margin || multi[d] >= spec_.m - margin) return false;
  return true;
}

void GridPotential::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IOError, "cannot write '" + path + "'");
  for (int d = 0; d < spec_.dim; ++d) out << "rho_" << d + 1 << ",";
  out << "value\n";
  char buf[64];
  for (long i = 0; i < spec_.size(); ++i) {
    Eigen::VectorXd rho = node(i);
    for (int d = 0; d < spec_.dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", rho[d]);
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", values_[i]);
    out << buf << "\n";
  }
}

void GridPotential::save_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot write '" + path + "'");
  int32_t n = spec_.dim, m = spec_.m;
  double R = spec_.R;
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&m), sizeof(m));
  out.write(reinterpret_cast<const char*>(&R), sizeof(R));
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(sizeof(double) * values_.size()));
}

GridPotential GridPotential::load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot open '" + path + "'");
  int32_t n = 0, m = 0;
  double R = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&m), sizeof(m));
  in.read(reinterpret_cast<char*>(&R), sizeof(R));
  if (!in || n < 1 || n > 3 || m < 2)
    throw Error(ErrorCode::IOError, "bad grid header in '" + path + "'");
  GridPotential g(GridSpec{n, m, R});
  in.read(reinterpret_cast<char*>(g.values().data()),
          static_cast<std::streamsize>(sizeof(double) * g.values().size()));
  if (!in) throw Error(ErrorCode::IOError, "truncated grid file '" + path + "'");
  return g;
}

namespace {

// Damped Newton for grad u(x) = rho with the fraction-to-boundary rule:
// no facet value may shrink by more than half in one step. Near the box
// corners the maximizer sits within a few ulps of a vertex of P, where the
// residual cannot be driven below the machine granularity of x; the value
// phi = x.rho - u(x) is second-order insensitive to that, so stagnation at
// step sizes near ulp(x) counts as converged.
Eigen::VectorXd invert_gradient(const SymplecticPotential& u, const Eigen::VectorXd& rho,
                                Eigen::VectorXd x, long node_id) {
  const Polytope& P = u.polytope();
  const double res_tol = 1e-12 * (1.0 + rho.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < 400; ++it) {
    Eigen::VectorXd g = u.gradient(x) - rho;
    double ng = g.lpNorm<Eigen::Infinity>();
    if (ng <= res_tol) return x;
    Eigen::MatrixXd H = u.hessian(x);
    Eigen::VectorXd step = H.ldlt().solve(-g);
    double t = 1.0;
    for (int j = 0; j < P.facet_count(); ++j) {
      double dl = P.facet(j).normal.cast<double>().dot(step);
      if (dl < 0) {
        double lj = P.facet_value(j, x);
        t = std::min(t, 0.5 * lj / (-dl));
      }
    }
    const double granularity = 1e-15 * (1.0 + x.lpNorm<Eigen::Infinity>());
    bool accepted = false;
    for (int halvings = 0; halvings <= 60; ++halvings) {
      if (t * step.lpNorm<Eigen::Infinity>() <= granularity) return x;
      Eigen::VectorXd xn = x + t * step;
      if (P.facet_values(xn).minCoeff() > 0) {
        double ngn = (u.gradient(xn) - rho).lpNorm<Eigen::Infinity>();
        if (ngn <= res_tol || ngn <= (1.0 - 0.25 * t) * ng) {
          x = xn;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted)
      throw Error(ErrorCode::InversionFailure,
                  "gradient inversion stalled at node " + std::to_string(node_id), node_id);
  }
  throw Error(ErrorCode::InversionFailure,
              "gradient inversion did not converge at node " + std::to_string(node_id), node_id);
}

}  // namespace

LegendreResult legendre_to_rho(const SymplecticPotential& u, const GridSpec& grid) {
  const Polytope& P = u.polytope();
  if (grid.dim != P.dimension())
    throw Error(ErrorCode::InvalidInput, "grid dimension must match the polytope");
  LegendreResult out{GridPotential(grid, true), Eigen::MatrixXd(grid.size(), grid.dim)};

  Eigen::VectorXd center = P.barycenter_d();
  for (long i = 0; i < grid.size(); ++i) {
    // Warm start from the neighbor along the fastest axis, else the row above.
    Eigen::VectorXd x0 = center;
    if (i % grid.m != 0)
      x0 = out.points.row(i - 1);
    else if (i >= grid.m)
      x0 = out.points.row(i - grid.m);
    Eigen::VectorXd rho = out.phi.node(i);
    Eigen::VectorXd x = invert_gradient(u, rho, x0, i);
    out.points.row(i) = x;
    out.phi[i] = x.dot(rho) - u.value(x);
  }
  return out;
}

Eigen::VectorXd grid_gradient(const GridPotential& phi, long flat) {
  const auto& s = phi.spec();
  Eigen::VectorXd g(s.dim);
  long stride = 1;
  for (int d = s.dim - 1; d >= 0; --d) {
    g[d] = (phi[flat + stride] - phi[flat - stride]) / (2 * s.h());
    stride *= s.m;
  }
  return g;
}

Eigen::MatrixXd grid_hessian(const GridPotential& phi, long flat) {
  const auto& s = phi.spec();
  const double h2 = s.h() * s.h();
  Eigen::MatrixXd H(s.dim, s.dim);
  std::vector<long> strides(s.dim);
  long str = 1;
  for (int d = s.dim - 1; d >= 0; --d) {
    strides[d] = str;
    str *= s.m;
  }
  for (int a = 0; a < s.dim; ++a) {
    H(a, a) = (phi[flat + strides[a]] - 2 * phi[flat] + phi[flat - strides[a]]) / h2;
    for (int b = a + 1; b < s.dim; ++b) {
      double v = (phi[flat + strides[a] + strides[b]] + phi[flat - strides[a] - strides[b]] -
                  phi[flat + strides[a] - strides[b]] - phi[flat - strides[a] + strides[b]]) /
                 (4 * h2);
      H(a, b) = H(b, a) = v;
    }
  }
  return H;
}

SampledConjugate legendre_to_x(const GridPotential& phi, const std::vector<Eigen::VectorXd>& xs) {
  const auto& s = phi.spec();
  SampledConjugate out;
  out.points = xs;
  out.values.resize(static_cast<long>(xs.size()));
  out.err.resize(static_cast<long>(xs.size()));
  out.boundary_hit.assign(xs.size(), false);

  for (size_t k = 0; k < xs.size(); ++k) {
    const Eigen::VectorXd& x = xs[k];
    long best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < s.size(); ++i) {
      double v = x.dot(phi.node(i)) - phi[i];
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    double val = best_val;
    double err = s.h() * s.h();
    if (!phi.is_interior(best)) {
      out.boundary_hit[k] = true;
      err = std::abs(val) * 0.1 + 1.0;  // sup may escape the box; flag loudly
    } else {
      // One interior Newton correction on rho -> x.rho - phi(rho) using the
      // local quadratic model; clamped to the surrounding cell.
      Eigen::VectorXd g = grid_gradient(phi, best);
      Eigen::MatrixXd H = grid_hessian(phi, best);
      Eigen::VectorXd delta = H.ldlt().solve(x - g);
      double cap = s.h();
      for (int d = 0; d < s.dim; ++d) delta[d] = std::clamp(delta[d], -cap, cap);
      Eigen::VectorXd rho = phi.node(best) + delta;
      double quad = phi[best] + g.dot(delta) + 0.5 * delta.dot(H * delta);
      double refined = x.dot(rho) - quad;
      if (refined >= val) {
        err = std::abs(refined - val);
        val = refined;
      }
    }
    out.values[k] = val;
    out.err[k] = err;
  }
  return out;
}

MomentImageReport moment_map_image(const GridPotential& phi, const Polytope& P) {
  const auto& s = phi.spec();
  MomentImageReport rep;
  rep.min_facet_value = std::numeric_limits<double>::infinity();

  std::vector<Eigen::VectorXd> grads;
  for (long i = 0; i < s.size(); ++i) {
    if (!phi.is_interior(i)) continue;
    Eigen::VectorXd g = grid_gradient(phi, i);
    grads.push_back(g);
    rep.min_facet_value = std::min(rep.min_facet_value, P.facet_values(g).minCoeff());
  }

  // Support-function gap between the discrete gradient image and P over a
  // fan of directions: facet normals plus a uniform angular sample.
  std::vector<Eigen::VectorXd> dirs;
  for (int j = 0; j < P.facet_count(); ++j) {
    Eigen::VectorXd v = P.facet(j).normal.cast<double>();
    dirs.push_back(v / v.norm());
    dirs.push_back(-v / v.norm());
  }
  if (s.dim == 1) {
    Eigen::VectorXd e(1);
    e << 1;
    dirs.push_back(e);
    dirs.push_back(-e);
  } else if (s.dim == 2) {
    for (int k = 0; k < 64; ++k) {
      Eigen::VectorXd d(2);
      d << std::cos(2 * M_PI * k / 64.0), std::sin(2 * M_PI * k / 64.0);
      dirs.push_back(d);
    }
  } else {
    for (const auto& v : P.vertices().vertices) {
      Eigen::VectorXd d = rat_to_vec(v.point) - P.barycenter_d();
      if (d.norm() > 0) dirs.push_back(d / d.norm());
    }
  }

  double gap = 0;
  for (const auto& d : dirs) {
    double h_img = -std::numeric_limits<double>::infinity();
    for (const auto& g : grads) h_img = std::max(h_img, g.dot(d));
    double h_poly = -std::numeric_limits<double>::infinity();
    for (const auto& v : P.vertices().vertices)
      h_poly = std::max(h_poly, rat_to_vec(v.point).dot(d));
    gap = std::max(gap, std::abs(h_img - h_poly));
  }
  rep.hausdorff_gap = gap;
  return rep;
}

}  // namespace toric
