#ifndef TORIC_TRANSFORM_HPP
#define TORIC_TRANSFORM_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "toric/polytope.hpp"

namespace toric {

// Optional smooth correction on top of the Guillemin part.
struct SmoothPart {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
  explicit operator bool() const { return static_cast<bool>(value); }
};

// Conical symplectic potential u(x) = sum_j beta_j^{-1} l_j(x) log l_j(x)
// + f(x) on the closed polytope. The value extends by l log l -> 0 at the
// facets; gradient and Hessian are only defined in the interior.
class SymplecticPotential {
public:
  SymplecticPotential(const Polytope& P, Eigen::VectorXd beta, SmoothPart f = {});

  const Polytope& polytope() const { return P_; }
  const Eigen::VectorXd& beta() const { return beta_; }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

private:
  Polytope P_;
  Eigen::VectorXd beta_;
  SmoothPart f_;
};

SymplecticPotential guillemin_potential(const Polytope& P, const Eigen::VectorXd& beta);

struct GridSpec {
  int dim = 1;
  int m = 0;        // points per axis, including both endpoints
  double R = 0.0;   // box [-R, R]^dim

  double h() const { return 2.0 * R / (m - 1); }
  long size() const {
    long s = 1;
    for (int i = 0; i < dim; ++i) s *= m;
    return s;
  }
};

// Scalar samples on the uniform grid over [-R, R]^n, row-major with the
// first axis slowest. Carries the reference-potential flag of the spec.
class GridPotential {
public:
  GridPotential() = default;
  GridPotential(GridSpec spec, bool is_reference = false);

  const GridSpec& spec() const { return spec_; }
  bool is_reference() const { return is_reference_; }
  void set_reference(bool r) { is_reference_ = r; }

  double& operator[](long i) { return values_[i]; }
  double operator[](long i) const { return values_[i]; }
  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }

  long index(const std::vector<int>& multi) const;
  std::vector<int> multi_index(long flat) const;
  Eigen::VectorXd node(long flat) const;
  bool is_interior(long flat, int margin = 1) const;

  void save_csv(const std::string& path) const;
  void save_binary(const std::string& path) const;
  static GridPotential load_binary(const std::string& path);

private:
  GridSpec spec_;
  bool is_reference_ = false;
  Eigen::VectorXd values_;
};

// phi(rho) = sup_x (x.rho - u(x)); `points` row i holds the maximizer,
// i.e. grad phi at node i, exact to Newton tolerance.
struct LegendreResult {
  GridPotential phi;
  Eigen::MatrixXd points;
};

LegendreResult legendre_to_rho(const SymplecticPotential& u, const GridSpec& grid);

// Discrete conjugate u(x) = max over grid nodes of (x.rho - phi) with a
// local quadratic refinement; err is a per-point resolution estimate and
// boundary_hit flags maximizers on the truncation box.
struct SampledConjugate {
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd values;
  Eigen::VectorXd err;
  std::vector<bool> boundary_hit;
};

SampledConjugate legendre_to_x(const GridPotential& phi, const std::vector<Eigen::VectorXd>& xs);

struct MomentImageReport {
  double min_facet_value = 0.0;  // min over facets/nodes of l_j(grad phi)
  double hausdorff_gap = 0.0;    // support-function gap between the image and P
};

MomentImageReport moment_map_image(const GridPotential& phi, const Polytope& P);

// Central-difference gradient/Hessian at an interior node.
Eigen::VectorXd grid_gradient(const GridPotential& phi, long flat);
Eigen::MatrixXd grid_hessian(const GridPotential& phi, long flat);

}  // namespace toric

#endif
