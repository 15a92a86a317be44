#ifndef TORIC_INVARIANTS_HPP
#define TORIC_INVARIANTS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "toric/polytope.hpp"

namespace toric {

// Data of a conical Einstein/soliton structure on the polytope: the
// Einstein constant, the center tau, the soliton coefficients c with
// weighted_barycenter(P, c) = tau, and the angles beta_j = alpha l_j(tau).
struct ConeData {
  double alpha = 0.0;
  Eigen::VectorXd tau;
  Eigen::VectorXd c;
  Eigen::VectorXd beta;
  Eigen::VectorXd divisor_coeffs;  // 1 - beta_j
  bool angle_warning = false;      // some beta_j >= 1
};

struct SInvariantResult {
  double s_value = 0.0;
  Rational s_exact;
  Rational t_exact;                 // optimal value of min max_j l_j
  RatVec optimal_tau_exact;         // relative-interior point of the optimal face
  Eigen::VectorXd optimal_tau;
  bool solvable_at_S = false;       // optimal tau can be chosen interior to P
  std::vector<RatVec> optimal_vertices;
  std::vector<int> max_facets;      // facets attaining the max at optimal_tau
  std::vector<int> zero_facets;     // facets vanishing at optimal_tau
  std::string optimal_face;         // human-readable description
};

// min_j 1 / l_j(P_C) with P_C the exact barycenter.
Rational greatest_ricci_lower_bound_exact(const Polytope& P);
double greatest_ricci_lower_bound(const Polytope& P);

// Exact LP: minimize t subject to 0 <= l_j(tau) <= t, S = 1/t*.
SInvariantResult s_invariant(const Polytope& P);

// beta_j = alpha l_j(tau); throws TauOutsidePolytope when tau is not
// strictly interior, sets angle_warning when some beta_j >= 1.
ConeData cone_angles(const Polytope& P, double alpha, const Eigen::VectorXd& tau);

struct SolitonOptions {
  double tol = 1e-11;       // on the gradient sup-norm
  int max_iterations = 100;
  double armijo = 1e-4;
  Eigen::VectorXd initial;  // empty = start from zero
};

// The unique c with weighted_barycenter(P, c) = tau, by damped Newton on
// the strictly convex G(c) = log int_P e^{c.(x - tau)} dx.
Eigen::VectorXd solve_soliton_field(const Polytope& P, const Eigen::VectorXd& tau,
                                    const SolitonOptions& opts = {});

// Full cone data for (P, alpha, tau): solves for c and assembles beta.
ConeData make_cone_data(const Polytope& P, double alpha, const Eigen::VectorXd& tau,
                        double soliton_tol = 1e-11);

}  // namespace toric

#endif
