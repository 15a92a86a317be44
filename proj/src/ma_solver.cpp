#include "toric/ma_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "toric/error.hpp"

namespace toric {

namespace {

constexpr double kEps = 2.2e-16;

double safe_exp(double x) { return std::exp(std::clamp(x, -700.0, 700.0)); }

struct Lattice {
  GridSpec spec;
  std::vector<long> strides;
  double h, h2;

  explicit Lattice(const GridSpec& s) : spec(s), strides(s.dim), h(s.h()), h2(s.h() * s.h()) {
    long str = 1;
    for (int d = s.dim - 1; d >= 0; --d) {
      strides[d] = str;
      str *= s.m;
    }
  }

  bool interior(long i, int margin = 1) const {
    long rest = i;
    for (int d = spec.dim - 1; d >= 0; --d) {
      long ix = rest % spec.m;
      rest /= spec.m;
      if (ix < margin || ix >= spec.m - margin) return false;
    }
    return true;
  }

  // Nearest node with every axis index clamped to [1, m-2].
  long inward(long i) const {
    long rest = i, out = 0;
    for (int d = spec.dim - 1; d >= 0; --d) {
      long ix = rest % spec.m;
      rest /= spec.m;
      ix = std::clamp(ix, 1L, static_cast<long>(spec.m) - 2);
      out += ix * strides[d];
    }
    return out;
  }
};

enum class Mode { Plain, Kappa, Gauge };

// Multilinear interpolation weights for the node cell containing rho = 0.
std::vector<std::pair<long, double>> center_weights(const Lattice& lat) {
  const int n = lat.spec.dim;
  const double pos = (lat.spec.m - 1) / 2.0;  // grid coordinate of rho = 0
  long base = 0;
  std::vector<double> frac(n);
  std::vector<bool> split(n);
  for (int d = 0; d < n; ++d) {
    long lo = static_cast<long>(std::floor(pos));
    frac[d] = pos - lo;
    split[d] = frac[d] > 1e-12;
    base += lo * lat.strides[d];
  }
  std::vector<std::pair<long, double>> out;
  long corners = 1L << n;
  for (long mask = 0; mask < corners; ++mask) {
    double w = 1;
    long node = base;
    bool skip = false;
    for (int d = 0; d < n; ++d) {
      if (mask & (1L << d)) {
        if (!split[d]) {
          skip = true;
          break;
        }
        w *= frac[d];
        node += lat.strides[d];
      } else {
        w *= split[d] ? 1 - frac[d] : 1.0;
      }
    }
    if (!skip && w > 0) out.emplace_back(node, w);
  }
  return out;
}

// One nonlinear system r(phi) = 0 at fixed s, with the optional free
// constant (s = 0) and translation-gauge border (s = alpha).
class MASystem {
public:
  MASystem(const MAProblem& pb, double s, Mode mode, double tol, double report_tol)
      : pb_(pb), lat_(pb.grid), s_(s), mode_(mode), tol_(tol), report_tol_(report_tol) {
    const int n = lat_.spec.dim;
    size_ = lat_.spec.size();
    nn_ = size_ + (mode == Mode::Kappa ? 1 : 0) + (mode == Mode::Gauge ? n : 0);
    phihat_max_ = pb.ref.phi.values().lpNorm<Eigen::Infinity>();
    // Absolute cancellation floor of a central second difference, and the
    // induced floor on the log-det residual at each node.
    noise_d2_ = 40.0 * kEps * (1.0 + phihat_max_) / lat_.h2;
    center_ = center_weights(lat_);
  }

  long system_size() const { return nn_; }
  long grid_size() const { return size_; }
  const Lattice& lattice() const { return lat_; }

  double row_floor(long i) const { return noise_d2_ * pb_.residual_floor[i]; }

  // Residual of the full system. J is filled when trip != nullptr.
  // Returns false when a trustworthy interior node has det <= 0.
  bool evaluate(const GridPotential& phi, double kappa, const Eigen::VectorXd& lambda,
                Eigen::VectorXd& F, std::vector<Eigen::Triplet<double>>* trip,
                std::vector<long>* bad_nodes = nullptr) const {
    const int n = lat_.spec.dim;
    const double h = lat_.h, h2 = lat_.h2;
    const auto& str = lat_.strides;
    const auto& v = phi.values();
    const auto& vh = pb_.ref.phi.values();
    const double alpha = pb_.cone.alpha;
    const Eigen::VectorXd& c = pb_.cone.c;

    F.setZero(nn_);
    bool convex_ok = true;

    Eigen::MatrixXd H(n, n), W(n, n);
    for (long i = 0; i < size_; ++i) {
      if (!lat_.interior(i)) {
        // Neumann tie for psi = phi - phihat.
        long nb = lat_.inward(i);
        F[i] = (v[i] - v[nb]) - (vh[i] - vh[nb]);
        if (trip) {
          trip->emplace_back(i, i, 1.0);
          trip->emplace_back(i, nb, -1.0);
        }
        continue;
      }

      for (int a = 0; a < n; ++a) {
        H(a, a) = (v[i + str[a]] - 2 * v[i] + v[i - str[a]]) / h2;
        for (int b = a + 1; b < n; ++b) {
          double x = (v[i + str[a] + str[b]] + v[i - str[a] - str[b]] -
                      v[i + str[a] - str[b]] - v[i - str[a] + str[b]]) /
                     (4 * h2);
          H(a, b) = H(b, a) = x;
        }
      }
      double det = H.determinant();
      double det_floor = row_floor(i) * std::max(pb_.ref_det[i], 1e-300);
      if (det <= 0) {
        if (det < -3 * det_floor) {
          convex_ok = false;
          if (bad_nodes && bad_nodes->size() < 16) bad_nodes->push_back(i);
        }
        det = std::max(det_floor, 1e-300);
      }

      double w = s_ * (v[i] - pb_.tau_dot_rho[i]) + (alpha - s_) * (vh[i] - pb_.tau_dot_rho[i]);
      double cgrad = 0;
      for (int d = 0; d < n; ++d) cgrad += c[d] * (v[i + str[d]] - v[i - str[d]]) / (2 * h);

      double r = std::log(det) + w + cgrad;
      if (mode_ == Mode::Kappa) r -= kappa;
      if (mode_ == Mode::Gauge)
        for (int d = 0; d < n; ++d)
          r += lambda[d] * (pb_.cone.tau[d] - (v[i + str[d]] - v[i - str[d]]) / (2 * h));
      F[i] = r;

      if (trip) {
        W = H.inverse();
        double diag = 0;
        for (int a = 0; a < n; ++a) diag += W(a, a) * (-2.0 / h2);
        diag += s_;
        trip->emplace_back(i, i, diag);
        for (int a = 0; a < n; ++a) {
          double waa = W(a, a) / h2;
          double cd = c[a] / (2 * h);
          if (mode_ == Mode::Gauge) cd += -lambda[a] / (2 * h);
          trip->emplace_back(i, i + str[a], waa + cd);
          trip->emplace_back(i, i - str[a], waa - cd);
          for (int b = a + 1; b < n; ++b) {
            double wab = 2 * W(a, b) / (4 * h2);
            trip->emplace_back(i, i + str[a] + str[b], wab);
            trip->emplace_back(i, i - str[a] - str[b], wab);
            trip->emplace_back(i, i + str[a] - str[b], -wab);
            trip->emplace_back(i, i - str[a] + str[b], -wab);
          }
        }
        if (mode_ == Mode::Kappa) trip->emplace_back(i, size_, -1.0);
        if (mode_ == Mode::Gauge)
          for (int d = 0; d < n; ++d)
            trip->emplace_back(i, size_ + d,
                               pb_.cone.tau[d] - (v[i + str[d]] - v[i - str[d]]) / (2 * h));
      }
    }

    if (mode_ == Mode::Kappa) {
      // Fix the mean of psi on the interior; kappa absorbs the constant.
      double mean = 0;
      long count = 0;
      for (long i = 0; i < size_; ++i)
        if (lat_.interior(i)) {
          mean += v[i] - vh[i];
          ++count;
        }
      F[size_] = mean / count;
      if (trip)
        for (long i = 0; i < size_; ++i)
          if (lat_.interior(i)) trip->emplace_back(size_, i, 1.0 / count);
    }

    if (mode_ == Mode::Gauge) {
      // Pin the chart: interpolated grad phi at rho = 0 equals tau.
      for (int d = 0; d < n; ++d) {
        double g = 0;
        for (const auto& [node, wt] : center_) g += wt * (v[node + str[d]] - v[node - str[d]]) / (2 * h);
        F[size_ + d] = g - pb_.cone.tau[d];
        if (trip)
          for (const auto& [node, wt] : center_) {
            trip->emplace_back(size_ + d, node + str[d], wt / (2 * h));
            trip->emplace_back(size_ + d, node - str[d], -wt / (2 * h));
          }
      }
    }
    return convex_ok;
  }

  // Norm that ignores components below the per-node cancellation floor.
  double masked_norm(const Eigen::VectorXd& F) const {
    double acc = 0;
    for (long i = 0; i < size_; ++i) {
      if (lat_.interior(i) && std::abs(F[i]) <= 3 * row_floor(i)) continue;
      acc += F[i] * F[i];
    }
    for (long i = size_; i < nn_; ++i) acc += F[i] * F[i];
    return std::sqrt(acc);
  }

  bool converged(const Eigen::VectorXd& F) const {
    for (long i = 0; i < size_; ++i) {
      double lim = lat_.interior(i) ? std::max(tol_, 3 * row_floor(i)) : 1e-9;
      if (std::abs(F[i]) > lim) return false;
    }
    for (long i = size_; i < nn_; ++i)
      if (std::abs(F[i]) > 1e-9) return false;
    return true;
  }

private:
  const MAProblem& pb_;
  Lattice lat_;
  double s_;
  Mode mode_;
  double tol_, report_tol_;
  long size_ = 0, nn_ = 0;
  double phihat_max_ = 0, noise_d2_ = 0;
  std::vector<std::pair<long, double>> center_;
};

double auto_tol(const GridSpec& g, double requested) {
  if (requested > 0) return requested;
  return g.dim == 1 ? 1e-9 : 1e-7;
}

double auto_report_tol(const GridSpec& g, double requested) {
  if (requested > 0) return requested;
  return g.dim == 1 ? 1e-6 : 1e-4;
}

// Damped Newton at fixed s. Returns iteration count, throws NonConvergence.
int newton_at_s(const MAProblem& pb, GridPotential& phi, double s, Mode mode,
                const SolverConfig& cfg, double* residual_out) {
  MASystem sys(pb, s, mode, auto_tol(pb.grid, cfg.tol), auto_report_tol(pb.grid, cfg.report_tol));
  const long size = sys.grid_size();
  const long nn = sys.system_size();
  const int n = pb.grid.dim;

  double kappa = 0;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  Eigen::VectorXd F;
  std::vector<Eigen::Triplet<double>> trip;
  GridPotential trial = phi;

  for (int it = 0; it < cfg.max_newton; ++it) {
    trip.clear();
    bool convex = sys.evaluate(phi, kappa, lambda, F, &trip);
    if (!convex && it == 0)
      throw Error(ErrorCode::NonConvexIterate, "initial iterate is not discretely convex");
    if (sys.converged(F)) {
      if (residual_out) *residual_out = F.lpNorm<Eigen::Infinity>();
      return it;
    }

    Eigen::SparseMatrix<double> J(nn, nn);
    J.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorCode::NonConvergence, "linear solver failed at s = " + std::to_string(s));
    Eigen::VectorXd delta = lu.solve(-F);

    double base = sys.masked_norm(F);
    double t = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= 40; ++halvings) {
      double step_inf = t * delta.head(size).lpNorm<Eigen::Infinity>();
      if (step_inf <= 1e-14 * (1 + phi.values().lpNorm<Eigen::Infinity>())) {
        if (residual_out) *residual_out = F.lpNorm<Eigen::Infinity>();
        if (sys.converged(F)) return it;
        throw Error(ErrorCode::NonConvergence,
                    "newton stagnated at s = " + std::to_string(s) +
                        ", residual " + std::to_string(base));
      }
      trial.values() = phi.values() + t * delta.head(size);
      double kappa_t = kappa + (mode == Mode::Kappa ? t * delta[size] : 0.0);
      Eigen::VectorXd lambda_t = lambda;
      if (mode == Mode::Gauge) lambda_t += t * delta.tail(n);
      Eigen::VectorXd Ft;
      bool convex_t = sys.evaluate(trial, kappa_t, lambda_t, Ft, nullptr);
      if (convex_t && sys.masked_norm(Ft) <= (1 - cfg.armijo * t) * base + 1e-300) {
        phi.values() = trial.values();
        kappa = kappa_t;
        lambda = lambda_t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted)
      throw Error(ErrorCode::NonConvergence,
                  "line search failed at s = " + std::to_string(s));
  }

  sys.evaluate(phi, kappa, lambda, F, nullptr);
  if (sys.converged(F)) {
    if (residual_out) *residual_out = F.lpNorm<Eigen::Infinity>();
    return cfg.max_newton;
  }
  throw Error(ErrorCode::NonConvergence,
              "newton did not converge at s = " + std::to_string(s));
}

}  // namespace

double default_box_radius(const Polytope& P, const Eigen::VectorXd& tau, double alpha) {
  double dist = P.boundary_distance(tau);
  if (dist <= 0) throw Error(ErrorCode::TauOutsidePolytope, "tau is not strictly interior");
  return 20.0 / (alpha * dist);
}

MAProblem setup_problem(const Polytope& P, double alpha, const Eigen::VectorXd& tau,
                        const GridSpec& grid, double soliton_tol) {
  if (alpha <= 0) throw Error(ErrorCode::InvalidInput, "alpha must be positive");
  ConeData cone = make_cone_data(P, alpha, tau, soliton_tol);
  if (cone.beta.minCoeff() <= 0 || cone.beta.maxCoeff() > 1.0 + 1e-12)
    throw Error(ErrorCode::InvalidAngles, "cone angles must lie in (0, 1]");

  MAProblem pb{P, cone, grid, legendre_to_rho(guillemin_potential(P, cone.beta), grid),
               Eigen::VectorXd(), Eigen::VectorXd(), Eigen::VectorXd()};

  SymplecticPotential uhat = guillemin_potential(P, cone.beta);
  const long size = grid.size();
  pb.ref_det.resize(size);
  pb.residual_floor.resize(size);
  pb.tau_dot_rho.resize(size);
  for (long i = 0; i < size; ++i) {
    Eigen::VectorXd x = pb.ref.points.row(i);
    Eigen::MatrixXd Hu = uhat.hessian(x);
    pb.ref_det[i] = 1.0 / Hu.determinant();       // det grad^2 phihat
    pb.residual_floor[i] = Hu.trace();            // trace (grad^2 phihat)^{-1}
    pb.tau_dot_rho[i] = tau.dot(pb.ref.phi.node(i));
  }
  return pb;
}

MAProblem setup_problem(const Polytope& P, double alpha, const Eigen::VectorXd& tau, int m,
                        double soliton_tol) {
  GridSpec g{P.dimension(), m, default_box_radius(P, tau, alpha)};
  return setup_problem(P, alpha, tau, g, soliton_tol);
}

ResidualReport residual(const MAProblem& problem, const GridPotential& phi, double s) {
  MASystem sys(problem, s, Mode::Plain, auto_tol(problem.grid, 0), auto_report_tol(problem.grid, 0));
  Eigen::VectorXd F;
  std::vector<long> bad;
  bool convex = sys.evaluate(phi, 0, Eigen::VectorXd::Zero(problem.grid.dim), F, nullptr, &bad);
  if (!convex) {
    std::ostringstream msg;
    msg << "iterate is not discretely convex at nodes";
    for (long b : bad) msg << " " << b;
    throw Error(ErrorCode::NonConvexIterate, msg.str());
  }

  const Lattice& lat = sys.lattice();
  ResidualReport rep;
  rep.field = Eigen::VectorXd::Zero(problem.grid.size());
  const double report_tol = auto_report_tol(problem.grid, 0);
  double l2acc = 0;
  for (long i = 0; i < problem.grid.size(); ++i) {
    if (!lat.interior(i)) continue;
    rep.field[i] = F[i];
    double a = std::abs(F[i]);
    if (!lat.interior(i, 4)) {
      rep.boundary_layer_sup = std::max(rep.boundary_layer_sup, a);
      continue;
    }
    if (3 * sys.row_floor(i) <= 0.5 * report_tol) {
      rep.sup = std::max(rep.sup, a);
      l2acc += a * a;
      ++rep.core_nodes;
    } else {
      rep.sup_unresolved = std::max(rep.sup_unresolved, a);
    }
  }
  double cell = std::pow(lat.h, problem.grid.dim);
  rep.l2 = std::sqrt(l2acc * cell);
  return rep;
}

Eigen::VectorXd identity_check(const MAProblem& problem, const GridPotential& phi) {
  const int n = problem.grid.dim;
  const double alpha = problem.cone.alpha;
  const long size = problem.grid.size();
  const auto& v = phi.values();

  double wmin = std::numeric_limits<double>::infinity();
  for (long i = 0; i < size; ++i)
    wmin = std::min(wmin, alpha * (v[i] - problem.tau_dot_rho[i]));

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  double total = 0;
  for (long i = 0; i < size; ++i) {
    double w = alpha * (v[i] - problem.tau_dot_rho[i]) - wmin;
    double weight = safe_exp(-w);
    Eigen::VectorXd xhat = problem.ref.points.row(i);
    acc += weight * (xhat - problem.cone.tau);
    total += weight;
  }
  return acc / total;
}

double volume_check(const MAProblem& problem, const GridPotential& phi) {
  Lattice lat(problem.grid);
  const int n = problem.grid.dim;
  const auto& v = phi.values();
  const auto& str = lat.strides;
  double acc = 0;
  Eigen::MatrixXd H(n, n);
  for (long i = 0; i < problem.grid.size(); ++i) {
    if (!lat.interior(i)) continue;
    for (int a = 0; a < n; ++a) {
      H(a, a) = (v[i + str[a]] - 2 * v[i] + v[i - str[a]]) / lat.h2;
      for (int b = a + 1; b < n; ++b) {
        double x = (v[i + str[a] + str[b]] + v[i - str[a] - str[b]] -
                    v[i + str[a] - str[b]] - v[i - str[a] + str[b]]) /
                   (4 * lat.h2);
        H(a, b) = H(b, a) = x;
      }
    }
    acc += H.determinant();
  }
  return acc * std::pow(lat.h, n);
}

SolveDiagnostics solve_diagnostics(const MAProblem& problem, const GridPotential& phi) {
  SolveDiagnostics d;
  d.residual = residual(problem, phi, problem.cone.alpha);
  d.identity = identity_check(problem, phi);
  d.volume = volume_check(problem, phi);
  d.volume_rel_err = std::abs(d.volume - to_double(problem.P.volume())) /
                     to_double(problem.P.volume());
  d.image = moment_map_image(phi, problem.P);
  return d;
}

SolveReport solve_continuity(const MAProblem& problem, const SolverConfig& config,
                             const GridPotential* warm) {
  const double alpha = problem.cone.alpha;
  SolveReport report;
  report.phi = GridPotential(problem.grid, false);

  if (warm) {
    if (warm->spec().m != problem.grid.m || warm->spec().dim != problem.grid.dim ||
        warm->spec().R != problem.grid.R)
      throw Error(ErrorCode::InvalidInput, "warm start grid mismatch");
    report.phi.values() = warm->values();
    try {
      double res = 0;
      int iters = newton_at_s(problem, report.phi, alpha,
                              config.gauge_fix ? Mode::Gauge : Mode::Plain, config, &res);
      report.path.push_back({alpha, iters, res});
      report.total_newton = iters;
      report.diag = solve_diagnostics(problem, report.phi);
      return report;
    } catch (const Error&) {
      report.path.clear();  // fall through to the full path
    }
  }

  report.phi.values() = problem.ref.phi.values();

  double res = 0;
  int iters = newton_at_s(problem, report.phi, 0.0, Mode::Kappa, config, &res);
  report.path.push_back({0.0, iters, res});
  report.total_newton += iters;

  // March to alpha with adaptive halving of failed intervals.
  double s_cur = 0.0;
  const double ds0 = alpha / config.s_steps;
  double ds = ds0;
  int refinements = 0;
  while (s_cur < alpha - 1e-15) {
    double s_next = std::min(alpha, s_cur + ds);
    GridPotential attempt = report.phi;
    try {
      Mode mode = (s_next >= alpha - 1e-15 && config.gauge_fix) ? Mode::Gauge : Mode::Plain;
      iters = newton_at_s(problem, attempt, s_next, mode, config, &res);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonConvergence && e.code() != ErrorCode::NonConvexIterate) throw;
      if (++refinements > config.max_refinements * config.s_steps)
        throw Error(ErrorCode::NonConvergence,
                    "continuity path failed near s = " + std::to_string(s_next) + ": " + e.what());
      ds *= 0.5;
      if (ds < ds0 / 64.0)
        throw Error(ErrorCode::NonConvergence,
                    "continuity step underflow near s = " + std::to_string(s_next));
      continue;
    }
    report.phi.values() = attempt.values();
    report.path.push_back({s_next, iters, res});
    report.total_newton += iters;
    s_cur = s_next;
    ds = std::min(ds * 2.0, ds0);
  }

  report.diag = solve_diagnostics(problem, report.phi);
  return report;
}

// ---------------------------------------------------------------------------
// 1-D Chebyshev-collocation oracle.

namespace {

struct Cheb {
  Eigen::VectorXd xi;      // Lobatto nodes on [-1, 1], xi_0 = 1
  Eigen::MatrixXd D;       // differentiation matrix on [-1, 1]
  Eigen::VectorXd bary_w;  // barycentric weights

  explicit Cheb(int M) : xi(M + 1), D(M + 1, M + 1), bary_w(M + 1) {
    for (int j = 0; j <= M; ++j) xi[j] = std::cos(M_PI * j / M);
    auto cc = [&](int j) { return (j == 0 || j == M) ? 2.0 : 1.0; };
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j)
        if (i != j)
          D(i, j) = (cc(i) / cc(j)) * ((i + j) % 2 ? -1.0 : 1.0) / (xi[i] - xi[j]);
    for (int i = 0; i <= M; ++i) {
      double sum = 0;
      for (int j = 0; j <= M; ++j)
        if (j != i) sum += D(i, j);
      D(i, i) = -sum;
    }
    for (int j = 0; j <= M; ++j)
      bary_w[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == M) ? 0.5 : 1.0);
  }
};

double bary_eval(const Eigen::VectorXd& nodes, const Eigen::VectorXd& w,
                 const Eigen::VectorXd& vals, double x) {
  double num = 0, den = 0;
  for (int j = 0; j < nodes.size(); ++j) {
    double d = x - nodes[j];
    if (std::abs(d) < 1e-14) return vals[j];
    double t = w[j] / d;
    num += t * vals[j];
    den += t;
  }
  return num / den;
}

}  // namespace

double OracleSolution::eval_f(double x) const {
  Eigen::VectorXd w(nodes.size());
  int M = static_cast<int>(nodes.size()) - 1;
  for (int j = 0; j <= M; ++j)
    w[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == M) ? 0.5 : 1.0);
  return bary_eval(nodes, w, f_values, x);
}

double OracleSolution::eval_u(double x) const {
  double l_lo = x - a, l_hi = b - x;
  double u = eval_f(x);
  if (l_lo > 0) u += l_lo * std::log(l_lo) / cone.beta[0];
  if (l_hi > 0) u += l_hi * std::log(l_hi) / cone.beta[1];
  return u;
}

OracleSolution ode_oracle_1d(const MAProblem& problem, const OracleConfig& config) {
  if (problem.P.dimension() != 1)
    throw Error(ErrorCode::InvalidInput, "the collocation oracle is 1-D only");
  const Polytope& P = problem.P;
  if (P.facet_count() != 2)
    throw Error(ErrorCode::InvalidInput, "interval must have exactly two facets");

  // Identify lo (v = +1) and hi (v = -1) facets.
  int lo = P.facet(0).normal[0] == 1 ? 0 : 1;
  int hi = 1 - lo;
  if (P.facet(lo).normal[0] != 1 || P.facet(hi).normal[0] != -1)
    throw Error(ErrorCode::InvalidInput, "interval normals must be +-1");
  const double a = -to_double(P.facet(lo).offset);
  const double b = to_double(P.facet(hi).offset);
  const double alpha = problem.cone.alpha;
  const double tau = problem.cone.tau[0];
  const double c = problem.cone.c[0];
  const double beta_lo = problem.cone.beta[lo];
  const double beta_hi = problem.cone.beta[hi];

  const int M = config.degree;
  Cheb ch(M);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Eigen::VectorXd x = (mid + half * ch.xi.array()).matrix();
  Eigen::MatrixXd D = ch.D / half;
  Eigen::MatrixXd D2 = D * D;

  Eigen::VectorXd l_lo = (x.array() - a).matrix();
  Eigen::VectorXd l_hi = (b - x.array()).matrix();

  // Gauge u'(tau) = 0: interpolation row for f'(tau).
  Eigen::VectorXd interp_row(M + 1);
  {
    double den = 0;
    Eigen::VectorXd t(M + 1);
    bool at_node = false;
    for (int j = 0; j <= M; ++j) {
      double d = tau - x[j];
      if (std::abs(d) < 1e-13) {
        interp_row.setZero();
        interp_row[j] = 1;
        at_node = true;
        break;
      }
      t[j] = ch.bary_w[j] / d;
      den += t[j];
    }
    if (!at_node) interp_row = t / den;
  }
  Eigen::VectorXd gauge_row = interp_row.transpose() * D;
  double uhat_prime_tau =
      (1 + std::log(tau - a)) / beta_lo - (1 + std::log(b - tau)) / beta_hi;

  const double slope = alpha * (1.0 / beta_lo - 1.0 / beta_hi);

  Eigen::VectorXd f = Eigen::VectorXd::Constant(
      M + 1, -std::log(l_hi.sum() / (M + 1) / beta_lo + l_lo.sum() / (M + 1) / beta_hi) / alpha);
  double lambda = 0;

  auto assemble = [&](const Eigen::VectorXd& fv, double lam, Eigen::VectorXd& F,
                      Eigen::MatrixXd* J) {
    Eigen::VectorXd Df = D * fv;
    Eigen::VectorXd D2f = D2 * fv;
    F.resize(M + 2);
    if (J) J->setZero(M + 2, M + 2);
    for (int k = 0; k <= M; ++k) {
      double Hk = -alpha * fv[k] + alpha * (x[k] - tau) * Df[k] + (x[k] - tau) * slope - c * x[k];
      double E = safe_exp(Hk);
      F[k] = l_hi[k] / beta_lo + l_lo[k] / beta_hi + l_lo[k] * l_hi[k] * D2f[k] - E +
             lam * (x[k] - tau);
      if (J) {
        for (int j = 0; j <= M; ++j)
          (*J)(k, j) = l_lo[k] * l_hi[k] * D2(k, j) -
                       E * (-alpha * (k == j ? 1.0 : 0.0) + alpha * (x[k] - tau) * D(k, j));
        (*J)(k, M + 1) = x[k] - tau;
      }
    }
    F[M + 1] = uhat_prime_tau + gauge_row.dot(fv);
    if (J) J->row(M + 1).head(M + 1) = gauge_row;
  };

  Eigen::VectorXd F;
  Eigen::MatrixXd J;
  for (int it = 0; it < config.max_newton; ++it) {
    assemble(f, lambda, F, &J);
    double nf = F.lpNorm<Eigen::Infinity>();
    if (nf <= config.tol) {
      OracleSolution sol;
      sol.nodes = x;
      sol.f_values = f;
      sol.a = a;
      sol.b = b;
      sol.cone = problem.cone;
      // report beta in (lo, hi) order for eval_u
      sol.cone.beta.resize(2);
      sol.cone.beta << beta_lo, beta_hi;
      return sol;
    }
    Eigen::VectorXd step = J.partialPivLu().solve(-F);
    double t = 1.0;
    double base = F.norm();
    bool ok = false;
    for (int halvings = 0; halvings <= 50; ++halvings) {
      Eigen::VectorXd ft = f + t * step.head(M + 1);
      double lt = lambda + t * step[M + 1];
      Eigen::VectorXd Ft;
      assemble(ft, lt, Ft, nullptr);
      if (Ft.norm() <= (1 - 1e-4 * t) * base) {
        f = ft;
        lambda = lt;
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) throw Error(ErrorCode::OracleNonConvergence, "oracle line search failed");
  }
  throw Error(ErrorCode::OracleNonConvergence, "oracle newton did not converge");
}

}  // namespace toric
