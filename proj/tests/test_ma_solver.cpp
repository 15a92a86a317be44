#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "toric/ma_solver.hpp"

using namespace toric;

namespace {

// Closed-form symplectic potential for the interval [-1,1] at angle alpha:
// u = (1/alpha)[(1+x)log(1+x) + (1-x)log(1-x)] + (1/alpha) log(alpha/2).
double u_closed(double x, double alpha) {
  double A = 0;
  if (1 + x > 0) A += (1 + x) * std::log(1 + x);
  if (1 - x > 0) A += (1 - x) * std::log(1 - x);
  return (A + std::log(alpha / 2.0)) / alpha;
}

// The matching Kahler-side solution: x(rho) = tanh(alpha rho / 2).
double phi_closed(double rho, double alpha) {
  double t = std::tanh(alpha * rho / 2.0);
  return t * rho - u_closed(t, alpha);
}

double solved_u_error(const MAProblem& pb, const SolveReport& rep, double alpha,
                      double band = 0.9, double step = 0.025) {
  std::vector<Eigen::VectorXd> xs;
  for (double x = -band; x <= band + 1e-12; x += step) {
    Eigen::VectorXd v(1);
    v << x;
    xs.push_back(v);
  }
  SampledConjugate rec = legendre_to_x(rep.phi, xs);
  double worst = 0;
  for (size_t k = 0; k < xs.size(); ++k)
    worst = std::max(worst, std::abs(rec.values[k] - u_closed(xs[k][0], alpha)));
  (void)pb;
  return worst;
}

}  // namespace

TEST_CASE("setup assembles cone data") {
  Polytope I = tst::interval("1", "1");
  Eigen::VectorXd tau0 = Eigen::VectorXd::Zero(1);

  MAProblem p1 = setup_problem(I, 1.0, tau0, 65);
  CHECK(p1.cone.c[0] == 0.0);
  CHECK(p1.cone.beta[0] == doctest::Approx(1.0));
  CHECK(p1.cone.beta[1] == doctest::Approx(1.0));
  CHECK(p1.grid.R == doctest::Approx(20.0));

  MAProblem p2 = setup_problem(I, 0.5, tau0, 65);
  CHECK(p2.cone.beta[0] == doctest::Approx(0.5));

  Eigen::VectorXd tau(1);
  tau << 0.2;
  MAProblem p3 = setup_problem(I, 0.5, tau, 65);
  CHECK(p3.cone.c[0] == doctest::Approx(0.6150).epsilon(2e-3));
  CHECK(p3.cone.beta[0] == doctest::Approx(0.6));
  CHECK(p3.cone.beta[1] == doctest::Approx(0.4));

  // angles above 1 are rejected at setup
  CHECK_THROWS_AS(setup_problem(I, 1.2, tau0, 65), Error);
}

TEST_CASE("residual of the reference potential is finite and as computed") {
  Polytope I = tst::interval("1", "1");
  MAProblem pb = setup_problem(I, 1.0, Eigen::VectorXd::Zero(1), 257);
  ResidualReport rep = residual(pb, pb.ref.phi, 0.0);
  CHECK(std::isfinite(rep.sup));
  CHECK(rep.l2 > 0);

  // spot check one interior node: r = log(D2 phihat) + alpha (phihat - tau.rho)
  long i = pb.grid.size() / 2 + 7;
  double h = pb.grid.h();
  double d2 = (pb.ref.phi[i + 1] - 2 * pb.ref.phi[i] + pb.ref.phi[i - 1]) / (h * h);
  double expect = std::log(d2) + 1.0 * (pb.ref.phi[i] - 0.0);
  CHECK(rep.field[i] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("sampling the exact solution shows second-order residual decay") {
  Polytope I = tst::interval("1", "1");
  double sup_coarse = 0, sup_fine = 0;
  for (int m : {257, 513}) {
    MAProblem pb = setup_problem(I, 1.0, Eigen::VectorXd::Zero(1), m);
    GridPotential exact(pb.grid);
    for (long i = 0; i < pb.grid.size(); ++i) exact[i] = phi_closed(exact.node(i)[0], 1.0);
    ResidualReport rep = residual(pb, exact, 1.0);
    (m == 257 ? sup_coarse : sup_fine) = rep.sup;
  }
  double ratio = sup_coarse / sup_fine;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.5);
}

TEST_CASE("fubini-study closed form is reproduced") {
  Polytope I = tst::interval("1", "1");
  MAProblem pb = setup_problem(I, 1.0, Eigen::VectorXd::Zero(1), 513);
  SolveReport rep = solve_continuity(pb);
  for (const auto& st : rep.path) CHECK(st.residual_sup < 1e-6);
  CHECK(solved_u_error(pb, rep, 1.0) < 2e-4);
  CHECK(rep.diag.volume_rel_err < 0.01);
  CHECK(rep.diag.identity.lpNorm<Eigen::Infinity>() < 1e-5);
  CHECK(rep.diag.image.hausdorff_gap < 2 * pb.grid.h());
}

TEST_CASE("conical football closed forms") {
  Polytope I = tst::interval("1", "1");
  for (double alpha : {0.5, 0.75}) {
    CAPTURE(alpha);
    MAProblem pb = setup_problem(I, alpha, Eigen::VectorXd::Zero(1), 513);
    SolveReport rep = solve_continuity(pb);
    CHECK(solved_u_error(pb, rep, alpha) < 2e-4);
    CHECK(rep.diag.residual.sup < 1e-6);
  }
}

TEST_CASE("oracle constants match the closed forms") {
  Polytope I = tst::interval("1", "1");
  {
    MAProblem pb = setup_problem(I, 1.0, Eigen::VectorXd::Zero(1), 65);
    OracleConfig cfg;
    cfg.degree = 64;
    OracleSolution sol = ode_oracle_1d(pb, cfg);
    for (int k = 0; k < sol.f_values.size(); ++k)
      CHECK(sol.f_values[k] == doctest::Approx(-std::log(2.0)).epsilon(1e-9));
  }
  {
    MAProblem pb = setup_problem(I, 0.5, Eigen::VectorXd::Zero(1), 65);
    OracleConfig cfg;
    cfg.degree = 64;
    OracleSolution sol = ode_oracle_1d(pb, cfg);
    double expect = 2.0 * std::log(0.25);  // (1/alpha) log(alpha/2)
    for (int k = 0; k < sol.f_values.size(); ++k)
      CHECK(sol.f_values[k] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("oracle agrees with the main solver on a soliton instance") {
  Polytope I = tst::interval("1", "1");
  Eigen::VectorXd tau(1);
  tau << 0.2;
  MAProblem pb = setup_problem(I, 0.5, tau, 513);
  SolveReport rep = solve_continuity(pb);
  OracleSolution sol = ode_oracle_1d(pb);

  std::vector<Eigen::VectorXd> xs;
  for (double x = -0.9; x <= 0.9 + 1e-12; x += 0.03) {
    Eigen::VectorXd v(1);
    v << x;
    xs.push_back(v);
  }
  SampledConjugate rec = legendre_to_x(rep.phi, xs);
  double worst = 0;
  for (size_t k = 0; k < xs.size(); ++k)
    worst = std::max(worst, std::abs(rec.values[k] - sol.eval_u(xs[k][0])));
  CHECK(worst < 5e-4);

  // identity and volume diagnostics on an asymmetric solve
  CHECK(rep.diag.identity.lpNorm<Eigen::Infinity>() < 1e-5);
  CHECK(rep.diag.volume_rel_err < 0.01);
}

TEST_CASE("identity check flags non-solutions on asymmetric data") {
  Polytope I = tst::interval("1", "3");  // [-1, 3]
  Eigen::VectorXd tau(1);
  tau << 0.4;
  MAProblem pb = setup_problem(I, 0.4, tau, 257);
  // phihat itself is not a solution at s = alpha; the identity is visibly off
  double off = identity_check(pb, pb.ref.phi).lpNorm<Eigen::Infinity>();
  CHECK(off > 1e-3);
  // symmetric case: antisymmetry kills the integrand even for non-solutions
  MAProblem pbs = setup_problem(tst::interval("1", "1"), 0.5, Eigen::VectorXd::Zero(1), 257);
  CHECK(identity_check(pbs, pbs.ref.phi).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("volume check on the reference potential") {
  // the moment map is a bijection onto P whether or not phi solves anything
  Polytope I = tst::interval("1", "1");
  MAProblem pb = setup_problem(I, 0.5, Eigen::VectorXd::Zero(1), 513);
  CHECK(volume_check(pb, pb.ref.phi) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("nonconvex iterates are rejected with node ids") {
  Polytope I = tst::interval("1", "1");
  MAProblem pb = setup_problem(I, 1.0, Eigen::VectorXd::Zero(1), 129);
  GridPotential bad = pb.ref.phi;
  long mid = pb.grid.size() / 2;
  bad[mid] += 1.0;  // a spike makes the neighbors concave
  CHECK_THROWS_AS(residual(pb, bad, 1.0), Error);
  try {
    residual(pb, bad, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConvexIterate);
  }
}

TEST_CASE("uniqueness probe: perturbed starts agree") {
  Polytope I = tst::interval("1", "1");
  MAProblem pb = setup_problem(I, 0.75, Eigen::VectorXd::Zero(1), 257);
  SolveReport base = solve_continuity(pb);

  // restart from two different smooth perturbations of the solved potential
  GridPotential warm1 = base.phi, warm2 = base.phi;
  for (long i = 0; i < pb.grid.size(); ++i) {
    double rho = warm1.node(i)[0];
    warm1[i] += 0.05 * std::exp(-rho * rho);
    warm2[i] -= 0.04 * std::exp(-0.5 * rho * rho);
  }
  SolveReport r1 = solve_continuity(pb, {}, &warm1);
  SolveReport r2 = solve_continuity(pb, {}, &warm2);
  CHECK((r1.phi.values() - r2.phi.values()).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("cone angle recovery from the solved potential") {
  Polytope I = tst::interval("1", "1");
  double alpha = 0.5;
  MAProblem pb = setup_problem(I, alpha, Eigen::VectorXd::Zero(1), 513);
  SolveReport rep = solve_continuity(pb);

  // fit u against {1, l, l log l, l^2} on the band l in [0.02, 0.2] near x = 1
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ls;
  for (double l = 0.02; l <= 0.2 + 1e-12; l += 0.01) {
    Eigen::VectorXd v(1);
    v << 1.0 - l;
    xs.push_back(v);
    ls.push_back(l);
  }
  SampledConjugate rec = legendre_to_x(rep.phi, xs);
  Eigen::MatrixXd A(static_cast<long>(ls.size()), 4);
  Eigen::VectorXd b(static_cast<long>(ls.size()));
  for (size_t k = 0; k < ls.size(); ++k) {
    double l = ls[k];
    A(static_cast<long>(k), 0) = 1;
    A(static_cast<long>(k), 1) = l;
    A(static_cast<long>(k), 2) = l * std::log(l);
    A(static_cast<long>(k), 3) = l * l;
    b[static_cast<long>(k)] = rec.values[static_cast<long>(k)];
  }
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  CHECK(coef[2] == doctest::Approx(1.0 / alpha).epsilon(0.05));
}

TEST_CASE("triangle at alpha=1 solves and pushes the right volume") {
  Polytope T = tst::p2_triangle();
  Eigen::VectorXd tau0 = Eigen::VectorXd::Zero(2);
  MAProblem pb = setup_problem(T, 1.0, tau0, 129);
  SolveReport rep = solve_continuity(pb);
  CHECK(rep.diag.residual.sup < 1e-4);
  CHECK(rep.diag.volume == doctest::Approx(4.5).epsilon(0.02));
  CHECK(rep.diag.image.hausdorff_gap < 2 * pb.grid.h());
}
