#ifndef TORIC_MOMENTS_HPP
#define TORIC_MOMENTS_HPP

#include <Eigen/Dense>
#include <vector>

#include "toric/polytope.hpp"

namespace toric {

// Exponential moments of the polytope: value = int_P e^{c.x} dx and, when
// requested, first = int_P x e^{c.x} dx and second = int_P x x^T e^{c.x} dx.
struct MomentResult {
  int order = 0;
  double value = 0.0;
  Eigen::VectorXd first;
  Eigen::MatrixXd second;

  Eigen::VectorXd mean() const { return first / value; }
  Eigen::MatrixXd covariance() const {
    Eigen::VectorXd m = mean();
    return second / value - m * m.transpose();
  }
};

// Divided difference of exp at the given nodes, computed as the corner
// entry of the exponential of the bidiagonal node matrix (exact for
// confluent nodes, stable for clustered ones).
double exp_divided_difference(const Eigen::VectorXd& nodes);

// Exact kernel: int over the simplex of e^{c.x} = n! vol * exp[c.v_0,...,c.v_n].
double simplex_exp_integral(const std::vector<Eigen::VectorXd>& verts, const Eigen::VectorXd& c);

MomentResult exp_moments(const Polytope& P, const Eigen::VectorXd& c, int order);

Eigen::VectorXd weighted_barycenter(const Polytope& P, const Eigen::VectorXd& c);

namespace detail {
// Tensor Gauss-Legendre rule on [0,1], 24 points per axis.
const std::vector<double>& gl_nodes01();
const std::vector<double>& gl_weights01();
// Quadrature-only moments over one simplex (used as the cross-check route).
MomentResult simplex_moments_quadrature(const std::vector<Eigen::VectorXd>& verts,
                                        const Eigen::VectorXd& c, int order);
}  // namespace detail

}  // namespace toric

#endif
