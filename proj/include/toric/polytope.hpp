#ifndef TORIC_POLYTOPE_HPP
#define TORIC_POLYTOPE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "toric/rational.hpp"

namespace toric {

// A facet inequality l_j(x) = normal . x + offset > 0 with integral normal.
struct Facet {
  Eigen::VectorXi normal;
  Rational offset;
};

struct Vertex {
  RatVec point;
  std::vector<int> active;  // all facets with l_j(point) == 0, sorted
};

struct VertexFan {
  std::vector<Vertex> vertices;
};

struct DelzantFailure {
  int vertex_index;
  enum Reason { NonSimple, NonUnimodular, NonPrimitive } reason;
};

struct DelzantReport {
  bool is_delzant = true;
  std::vector<DelzantFailure> failures;
};

struct Simplex {
  std::vector<RatVec> verts;  // n+1 affinely independent points
  Rational volume;            // positive
};

// Bounded full-dimensional polytope {x : l_j(x) > 0} with exact rational
// data. Construction validates boundedness, a nonempty interior, facet
// irredundancy and (unless raw=true) primitivity of the normals; the vertex
// fan, star triangulation, volume and barycenter are computed eagerly, so a
// constructed instance is immutable and safe for concurrent reads.
class Polytope {
public:
  Polytope(int dim, std::vector<Facet> facets, bool raw_normals = false,
           std::string name = "");

  int dimension() const { return dim_; }
  int facet_count() const { return static_cast<int>(facets_.size()); }
  const Facet& facet(int j) const { return facets_[j]; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::string& name() const { return name_; }

  Rational facet_value(int j, const RatVec& x) const;
  RatVec facet_values_exact(const RatVec& x) const;
  Eigen::VectorXd facet_values(const Eigen::VectorXd& x) const;
  double facet_value(int j, const Eigen::VectorXd& x) const;

  bool contains(const Eigen::VectorXd& x, double slack = 0.0) const;

  const VertexFan& vertices() const { return fan_; }
  DelzantReport is_delzant() const;

  const Rational& volume() const { return volume_; }
  const RatVec& barycenter() const { return barycenter_; }
  Eigen::VectorXd barycenter_d() const;
  const std::vector<Simplex>& triangulation() const { return triangulation_; }

  double diameter() const { return diameter_; }
  // Euclidean distance from an interior point to the boundary.
  double boundary_distance(const Eigen::VectorXd& x) const;

  // Affine images used by tests and the family module. `U` must be
  // unimodular (integral, det = +-1); translation maps P to P + a.
  Polytope apply_unimodular(const Eigen::MatrixXi& U) const;
  Polytope translate(const RatVec& a) const;
  Polytope dilate(const Rational& k) const;

private:
  void enumerate_vertices();
  void check_bounded() const;
  void check_redundancy() const;
  void triangulate();

  int dim_;
  std::vector<Facet> facets_;
  bool raw_normals_;
  std::string name_;
  VertexFan fan_;
  std::vector<Simplex> triangulation_;
  Rational volume_;
  RatVec barycenter_;
  double diameter_ = 0.0;
};

Eigen::VectorXd rat_to_vec(const RatVec& x);

}  // namespace toric

#endif
