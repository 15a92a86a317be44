#include "toric/moments.hpp"

#include <cmath>

#include "toric/error.hpp"

namespace toric {

namespace detail {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n,
// mapped to [0,1]. n = 24 integrates polynomials up to degree 47.
void compute_gl(int n, std::vector<double>& x01, std::vector<double>& w01) {
  x01.resize(n);
  w01.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x01[i] = 0.5 * (x + 1.0);
    w01[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

struct GLRule {
  std::vector<double> x, w;
  GLRule() { compute_gl(24, x, w); }
};

const GLRule& gl_rule() {
  static GLRule rule;
  return rule;
}

}  // namespace

const std::vector<double>& gl_nodes01() { return gl_rule().x; }
const std::vector<double>& gl_weights01() { return gl_rule().w; }

MomentResult simplex_moments_quadrature(const std::vector<Eigen::VectorXd>& verts,
                                        const Eigen::VectorXd& c, int order) {
  const int n = static_cast<int>(c.size());
  const auto& xs = gl_nodes01();
  const auto& ws = gl_weights01();
  const int q = static_cast<int>(xs.size());

  Eigen::MatrixXd E(n, n);
  for (int i = 0; i < n; ++i) E.col(i) = verts[i + 1] - verts[0];
  double jac = std::abs(E.determinant());

  MomentResult out;
  out.order = order;
  out.first = Eigen::VectorXd::Zero(n);
  out.second = Eigen::MatrixXd::Zero(n, n);

  auto accumulate = [&](const Eigen::VectorXd& t, double w) {
    Eigen::VectorXd x = verts[0] + E * t;
    double f = w * jac * std::exp(c.dot(x));
    out.value += f;
    if (order >= 1) out.first += f * x;
    if (order >= 2) out.second += f * x * x.transpose();
  };

  // Duffy map [0,1]^n -> standard simplex, with Jacobian (1-u_1)^{n-1}(1-u_2)^{n-2}...
  if (n == 1) {
    for (int i = 0; i < q; ++i) {
      Eigen::VectorXd t(1);
      t << xs[i];
      accumulate(t, ws[i]);
    }
  } else if (n == 2) {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        Eigen::VectorXd t(2);
        t << xs[i], xs[j] * (1 - xs[i]);
        accumulate(t, ws[i] * ws[j] * (1 - xs[i]));
      }
  } else {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) {
          Eigen::VectorXd t(3);
          double u1 = xs[i], u2 = xs[j], u3 = xs[k];
          t << u1, u2 * (1 - u1), u3 * (1 - u1) * (1 - u2);
          accumulate(t, ws[i] * ws[j] * ws[k] * (1 - u1) * (1 - u1) * (1 - u2));
        }
  }
  return out;
}

}  // namespace detail

double exp_divided_difference(const Eigen::VectorXd& nodes) {
  // Opitz: exp[y_0..y_k] is the (0,k) entry of expm(T) for the upper
  // bidiagonal T with the nodes on the diagonal and ones above it.
  // Scaling and squaring with a plain Taylor series; T is at most 4x4 here
  // and the scaled norm is <= 1/2, so the series converges fast.
  const int k = static_cast<int>(nodes.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  double shift = nodes.mean();
  for (int i = 0; i < k; ++i) {
    T(i, i) = nodes[i] - shift;
    if (i + 1 < k) T(i, i + 1) = 1.0;
  }
  double norm = T.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  T /= std::pow(2.0, squarings);

  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(k, k);
  for (int j = 1; j <= 24; ++j) {
    term = (term * T) / j;
    E += term;
  }
  for (int s = 0; s < squarings; ++s) E = E * E;
  return std::exp(shift) * E(0, k - 1);
}

double simplex_exp_integral(const std::vector<Eigen::VectorXd>& verts, const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size());
  if (static_cast<int>(verts.size()) != n + 1)
    throw Error(ErrorCode::InvalidInput, "simplex needs n+1 vertices");
  Eigen::MatrixXd E(n, n);
  for (int i = 0; i < n; ++i) E.col(i) = verts[i + 1] - verts[0];
  double det = E.determinant();
  if (det == 0.0) throw Error(ErrorCode::DegenerateSimplex, "simplex has zero volume");
  Eigen::VectorXd y(n + 1);
  for (int i = 0; i <= n; ++i) y[i] = c.dot(verts[i]);
  // n! * vol = |det|
  return std::abs(det) * exp_divided_difference(y);
}

MomentResult exp_moments(const Polytope& P, const Eigen::VectorXd& c, int order) {
  if (c.size() != P.dimension())
    throw Error(ErrorCode::InvalidInput, "weight vector has wrong dimension");
  const int n = P.dimension();
  MomentResult out;
  out.order = order;
  out.first = Eigen::VectorXd::Zero(n);
  out.second = Eigen::MatrixXd::Zero(n, n);

  for (const auto& s : P.triangulation()) {
    std::vector<Eigen::VectorXd> verts;
    verts.reserve(s.verts.size());
    for (const auto& v : s.verts) verts.push_back(rat_to_vec(v));
    // Order 0 through the exact divided-difference kernel; higher moments
    // by per-simplex quadrature.
    out.value += simplex_exp_integral(verts, c);
    if (order >= 1) {
      MomentResult m = detail::simplex_moments_quadrature(verts, c, order);
      out.first += m.first;
      if (order >= 2) out.second += m.second;
    }
  }
  return out;
}

Eigen::VectorXd weighted_barycenter(const Polytope& P, const Eigen::VectorXd& c) {
  MomentResult m = exp_moments(P, c, 1);
  return m.first / m.value;
}

}  // namespace toric
