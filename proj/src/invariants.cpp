#include "toric/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "toric/error.hpp"
#include "toric/moments.hpp"

namespace toric {

Rational greatest_ricci_lower_bound_exact(const Polytope& P) {
  const RatVec& pc = P.barycenter();
  Rational max_l(0);
  for (int j = 0; j < P.facet_count(); ++j) max_l = std::max(max_l, P.facet_value(j, pc));
  return Rational(1) / max_l;
}

double greatest_ricci_lower_bound(const Polytope& P) {
  return to_double(greatest_ricci_lower_bound_exact(P));
}

namespace {

template <class F>
void for_each_combination(int n, int k, F&& f) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

SInvariantResult s_invariant(const Polytope& P) {
  // LP over (tau, t): minimize t with l_j(tau) <= t and l_j(tau) >= 0.
  // The feasible set is pointed (P bounded), so the optimum is attained at
  // a basic point with n+1 tight constraints; enumerate those exactly.
  const int n = P.dimension();
  const int N = P.facet_count();
  const int vars = n + 1;

  // Constraint rows a.(tau,t) = b when tight:
  //   type A (k < N):  v_j . tau - t = -lambda_j   (l_j = t)
  //   type B (k >= N): v_j . tau     = -lambda_j   (l_j = 0)
  auto row = [&](int k, RatVec& a, Rational& b) {
    bool upper = k < N;
    int j = upper ? k : k - N;
    a.assign(vars, Rational(0));
    for (int i = 0; i < n; ++i) a[i] = Rational(P.facet(j).normal[i]);
    if (upper) a[n] = Rational(-1);
    b = -P.facet(j).offset;
  };

  bool found = false;
  Rational best_t;
  std::vector<RatVec> best_points;

  for_each_combination(2 * N, vars, [&](const std::vector<int>& J) {
    std::vector<RatVec> A;
    RatVec b;
    for (int k : J) {
      RatVec a;
      Rational bi;
      row(k, a, bi);
      A.push_back(std::move(a));
      b.push_back(bi);
    }
    RatVec z;
    if (!solve_rational_system(A, b, z)) return;
    RatVec tau(z.begin(), z.begin() + n);
    Rational t = z[n];
    for (int j = 0; j < N; ++j) {
      Rational lv = P.facet_value(j, tau);
      if (lv < 0 || lv > t) return;
    }
    if (!found || t < best_t) {
      found = true;
      best_t = t;
      best_points.clear();
      best_points.push_back(tau);
    } else if (t == best_t) {
      bool dup = false;
      for (const auto& p : best_points) dup |= (p == tau);
      if (!dup) best_points.push_back(tau);
    }
  });

  if (!found) throw Error(ErrorCode::LPFailure, "no basic feasible point found");

  SInvariantResult out;
  out.t_exact = best_t;
  out.s_exact = Rational(1) / best_t;
  out.s_value = to_double(out.s_exact);
  out.optimal_vertices = best_points;

  // The average of all optimal basic points lies in the relative interior
  // of the optimal face; it is interior to P exactly when some optimizer is.
  RatVec avg(n, Rational(0));
  for (const auto& p : best_points)
    for (int i = 0; i < n; ++i) avg[i] += p[i];
  for (int i = 0; i < n; ++i) avg[i] /= Rational(static_cast<long>(best_points.size()));
  out.optimal_tau_exact = avg;
  out.optimal_tau = rat_to_vec(avg);

  out.solvable_at_S = true;
  for (int j = 0; j < N; ++j) {
    Rational lv = P.facet_value(j, avg);
    if (lv == 0) {
      out.zero_facets.push_back(j);
      out.solvable_at_S = false;
    }
    if (lv == best_t) out.max_facets.push_back(j);
  }

  std::ostringstream face;
  face << (best_points.size() == 1 ? "point" : "face") << "; max on facets {";
  for (size_t i = 0; i < out.max_facets.size(); ++i)
    face << (i ? "," : "") << out.max_facets[i];
  face << "}";
  if (!out.zero_facets.empty()) {
    face << "; on boundary facets {";
    for (size_t i = 0; i < out.zero_facets.size(); ++i)
      face << (i ? "," : "") << out.zero_facets[i];
    face << "}";
  }
  out.optimal_face = face.str();
  return out;
}

ConeData cone_angles(const Polytope& P, double alpha, const Eigen::VectorXd& tau) {
  if (alpha <= 0) throw Error(ErrorCode::InvalidInput, "alpha must be positive");
  Eigen::VectorXd lv = P.facet_values(tau);
  if (lv.minCoeff() <= 0)
    throw Error(ErrorCode::TauOutsidePolytope, "tau is not strictly interior");
  ConeData cd;
  cd.alpha = alpha;
  cd.tau = tau;
  cd.beta = alpha * lv;
  cd.divisor_coeffs = Eigen::VectorXd::Ones(lv.size()) - cd.beta;
  cd.angle_warning = (cd.beta.maxCoeff() >= 1.0);
  return cd;
}

Eigen::VectorXd solve_soliton_field(const Polytope& P, const Eigen::VectorXd& tau,
                                    const SolitonOptions& opts) {
  const int n = P.dimension();
  if (P.facet_values(tau).minCoeff() <= 0)
    throw Error(ErrorCode::TauOutsidePolytope, "tau is not strictly interior");

  Eigen::VectorXd c = opts.initial.size() == n ? opts.initial : Eigen::VectorXd::Zero(n);

  auto objective = [&](const Eigen::VectorXd& cv) {
    return std::log(exp_moments(P, cv, 0).value) - cv.dot(tau);
  };

  double g_val = objective(c);
  for (int it = 0; it < opts.max_iterations; ++it) {
    MomentResult m = exp_moments(P, c, 2);
    Eigen::VectorXd grad = m.mean() - tau;
    if (grad.lpNorm<Eigen::Infinity>() <= opts.tol) return c;

    Eigen::MatrixXd H = m.covariance();
    Eigen::VectorXd step = H.ldlt().solve(-grad);
    double t = 1.0;
    double slope = grad.dot(step);
    // The Armijo decrease falls below the float resolution of G once the
    // gradient is small; from there plain Newton steps are safe.
    if (grad.lpNorm<Eigen::Infinity>() > 1e-8) {
      while (true) {
        double trial = objective(c + t * step);
        if (trial <= g_val + opts.armijo * t * slope + 4e-16 * (1 + std::abs(g_val))) break;
        t *= 0.5;
        if (t < std::ldexp(1.0, -30))
          throw Error(ErrorCode::NonConvergence, "soliton line search stalled");
      }
    }
    c += t * step;
    g_val = objective(c);
  }
  MomentResult m = exp_moments(P, c, 1);
  double res = (m.mean() - tau).lpNorm<Eigen::Infinity>();
  if (res <= opts.tol) return c;
  throw Error(ErrorCode::NonConvergence,
              "soliton Newton did not reach tol, residual " + std::to_string(res));
}

ConeData make_cone_data(const Polytope& P, double alpha, const Eigen::VectorXd& tau,
                        double soliton_tol) {
  ConeData cd = cone_angles(P, alpha, tau);
  SolitonOptions opts;
  opts.tol = soliton_tol;
  cd.c = solve_soliton_field(P, tau, opts);
  return cd;
}

}  // namespace toric
