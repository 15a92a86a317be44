#ifndef TORIC_MA_SOLVER_HPP
#define TORIC_MA_SOLVER_HPP

#include <Eigen/Dense>
#include <vector>

#include "toric/invariants.hpp"
#include "toric/polytope.hpp"
#include "toric/transform.hpp"

namespace toric {

// det(grad^2 phi) = exp(-s(phi - tau.rho) - (alpha-s)(phihat - tau.rho)
//                       - c.grad phi),   s in [0, alpha],
// discretized with second-order central differences on [-R, R]^n and a
// homogeneous Neumann condition for psi = phi - phihat on the box.
struct MAProblem {
  Polytope P;
  ConeData cone;
  GridSpec grid;
  LegendreResult ref;              // phihat with exact maximizers grad phihat
  Eigen::VectorXd ref_det;         // det grad^2 phihat per node, analytic
  Eigen::VectorXd residual_floor;  // trace grad^2 uhat at the maximizer; scales
                                   // the cancellation floor of the log-det rows
  Eigen::VectorXd tau_dot_rho;
};

// Box radius from the decay bound: w grows like alpha * dist(tau, dP) * |rho|,
// sized so the truncated weight is below e^{-20} ~ 2e-9.
double default_box_radius(const Polytope& P, const Eigen::VectorXd& tau, double alpha);

MAProblem setup_problem(const Polytope& P, double alpha, const Eigen::VectorXd& tau,
                        const GridSpec& grid, double soliton_tol = 1e-11);
// Convenience: grid from m and the default radius rule.
MAProblem setup_problem(const Polytope& P, double alpha, const Eigen::VectorXd& tau, int m,
                        double soliton_tol = 1e-11);

struct SolverConfig {
  double tol = 0;         // Newton target on resolvable rows; 0 = auto per dim
  double report_tol = 0;  // diagnostic core threshold; 0 = auto (1e-6 / 1e-4)
  int s_steps = 8;
  int max_newton = 60;
  double armijo = 1e-4;
  int max_refinements = 5;  // adaptive halvings of an s-interval
  bool gauge_fix = true;    // pin grad phi(0) = tau at s = alpha
  bool verbose = false;
};

struct ResidualReport {
  double sup = 0;           // over the resolvable interior core (3h layer excluded)
  double l2 = 0;            // discrete L2 over the same core
  double sup_unresolved = 0;        // remaining interior nodes (noise-floor bound)
  double boundary_layer_sup = 0;    // the excluded 3h layer
  long core_nodes = 0;
  Eigen::VectorXd field;    // full grid, zero on the outer ring
};

ResidualReport residual(const MAProblem& problem, const GridPotential& phi, double s);

struct SStepStat {
  double s = 0;
  int newton_iterations = 0;
  double residual_sup = 0;
};

struct SolveDiagnostics {
  ResidualReport residual;
  Eigen::VectorXd identity;      // crucial-identity vector, expected ~ 0
  double volume = 0;             // int det grad^2 phi
  double volume_rel_err = 0;
  MomentImageReport image;
};

struct SolveReport {
  GridPotential phi;
  std::vector<SStepStat> path;
  int total_newton = 0;
  SolveDiagnostics diag;
};

// Damped-Newton continuity method from s = 0 to s = alpha with warm starts
// and adaptive step halving. When `warm` is given, tries a direct solve at
// s = alpha from it before falling back to the full path.
SolveReport solve_continuity(const MAProblem& problem, const SolverConfig& config = {},
                             const GridPotential* warm = nullptr);

// Normalized crucial-identity vector
//   (1/V) int (grad phihat - tau) e^{-w} drho,  w = alpha (phi - tau.rho),
// evaluated with the exact reference maximizers; ~0 for solutions at s = alpha.
Eigen::VectorXd identity_check(const MAProblem& problem, const GridPotential& phi);

// int det(grad^2 phi) drho, to compare with Vol(P).
double volume_check(const MAProblem& problem, const GridPotential& phi);

SolveDiagnostics solve_diagnostics(const MAProblem& problem, const GridPotential& phi);

// Independent 1-D oracle: Chebyshev collocation in x on the symplectic side
// for the smooth correction f in u = uhat + f, multiplied through by
// l_1 l_2 so the system is regular up to the endpoints, Newton-solved with
// the same gauge u'(tau) = 0 as the main solver.
struct OracleSolution {
  Eigen::VectorXd nodes;     // Chebyshev-Lobatto points in [a, b]
  Eigen::VectorXd f_values;  // smooth part at the nodes
  double a = 0, b = 0;
  ConeData cone;

  double eval_f(double x) const;  // barycentric interpolation
  double eval_u(double x) const;  // uhat(x) + f(x)
};

struct OracleConfig {
  int degree = 220;
  double tol = 1e-10;
  int max_newton = 80;
};

OracleSolution ode_oracle_1d(const MAProblem& problem, const OracleConfig& config = {});

}  // namespace toric

#endif
