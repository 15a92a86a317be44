#include "toric/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "toric/error.hpp"

namespace toric {

namespace {

bool is_primitive(const Eigen::VectorXi& v) {
  long g = 0;
  for (int i = 0; i < v.size(); ++i) g = std::gcd(g, static_cast<long>(std::abs(v[i])));
  return g == 1;
}

bool is_zero(const Eigen::VectorXi& v) {
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

// Visits all k-subsets of {0..n-1} in lexicographic order.
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

RatVec average(const std::vector<RatVec>& pts, int dim) {
  RatVec c(dim, Rational(0));
  for (const auto& p : pts)
    for (int i = 0; i < dim; ++i) c[i] += p[i];
  Rational k(static_cast<long>(pts.size()));
  for (int i = 0; i < dim; ++i) c[i] /= k;
  return c;
}

}  // namespace

Eigen::VectorXd rat_to_vec(const RatVec& x) {
  Eigen::VectorXd v(static_cast<int>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) v[static_cast<int>(i)] = to_double(x[i]);
  return v;
}

Polytope::Polytope(int dim, std::vector<Facet> facets, bool raw_normals, std::string name)
    : dim_(dim), facets_(std::move(facets)), raw_normals_(raw_normals), name_(std::move(name)) {
  if (dim_ < 1 || dim_ > 3)
    throw Error(ErrorCode::InvalidInput, "dimension must be 1, 2 or 3");
  for (size_t j = 0; j < facets_.size(); ++j) {
    if (facets_[j].normal.size() != dim_)
      throw Error(ErrorCode::InvalidInput, "normal length mismatch at facet " + std::to_string(j), j);
    if (is_zero(facets_[j].normal))
      throw Error(ErrorCode::InvalidInput, "zero normal at facet " + std::to_string(j), j);
    if (!raw_normals_ && !is_primitive(facets_[j].normal))
      throw Error(ErrorCode::NonPrimitiveNormal,
                  "normal of facet " + std::to_string(j) + " is not primitive", j);
  }
  if (static_cast<int>(facets_.size()) < dim_ + 1)
    throw Error(ErrorCode::Unbounded, "fewer than n+1 facets");

  check_bounded();
  enumerate_vertices();
  check_redundancy();
  triangulate();
}

Rational Polytope::facet_value(int j, const RatVec& x) const {
  Rational v = facets_[j].offset;
  for (int i = 0; i < dim_; ++i) v += Rational(facets_[j].normal[i]) * x[i];
  return v;
}

RatVec Polytope::facet_values_exact(const RatVec& x) const {
  RatVec out;
  out.reserve(facets_.size());
  for (int j = 0; j < facet_count(); ++j) out.push_back(facet_value(j, x));
  return out;
}

double Polytope::facet_value(int j, const Eigen::VectorXd& x) const {
  double v = to_double(facets_[j].offset);
  for (int i = 0; i < dim_; ++i) v += facets_[j].normal[i] * x[i];
  return v;
}

Eigen::VectorXd Polytope::facet_values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(facet_count());
  for (int j = 0; j < facet_count(); ++j) out[j] = facet_value(j, x);
  return out;
}

bool Polytope::contains(const Eigen::VectorXd& x, double slack) const {
  for (int j = 0; j < facet_count(); ++j)
    if (facet_value(j, x) <= slack) return false;
  return true;
}

void Polytope::check_bounded() const {
  // The recession cone {d : v_j . d >= 0 for all j} must be {0}. A
  // nontrivial cone either contains a line (normals do not span R^n) or a
  // ray with n-1 linearly independent tight constraints, so for n <= 3 it
  // is enough to test the finitely many candidate directions.
  std::vector<RatVec> rows;
  for (const auto& f : facets_) {
    RatVec r(dim_);
    for (int i = 0; i < dim_; ++i) r[i] = Rational(f.normal[i]);
    rows.push_back(std::move(r));
  }
  // Rational rank of the normal matrix.
  {
    std::vector<RatVec> A = rows;
    int rank = 0;
    for (int col = 0; col < dim_; ++col) {
      size_t piv = rank;
      while (piv < A.size() && A[piv][col] == 0) ++piv;
      if (piv == A.size()) continue;
      std::swap(A[piv], A[rank]);
      for (size_t r = 0; r < A.size(); ++r) {
        if (static_cast<int>(r) == rank || A[r][col] == 0) continue;
        Rational f = A[r][col] / A[rank][col];
        for (int k = 0; k < dim_; ++k) A[r][k] -= f * A[rank][k];
      }
      ++rank;
    }
    if (rank < dim_)
      throw Error(ErrorCode::Unbounded, "facet normals do not span the space");
  }

  std::vector<Eigen::VectorXi> candidates;
  if (dim_ == 1) {
    Eigen::VectorXi e(1);
    e << 1;
    candidates.push_back(e);
  } else if (dim_ == 2) {
    for (const auto& f : facets_) {
      Eigen::VectorXi d(2);
      d << -f.normal[1], f.normal[0];
      candidates.push_back(d);
    }
  } else {
    for (size_t a = 0; a < facets_.size(); ++a)
      for (size_t b = a + 1; b < facets_.size(); ++b) {
        const auto& u = facets_[a].normal;
        const auto& v = facets_[b].normal;
        Eigen::VectorXi d(3);
        d << u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0];
        if (!is_zero(d)) candidates.push_back(d);
      }
  }
  for (const auto& d : candidates) {
    for (int sign : {1, -1}) {
      bool feasible = true;
      for (const auto& f : facets_) {
        long dot = 0;
        for (int i = 0; i < dim_; ++i) dot += static_cast<long>(f.normal[i]) * d[i] * sign;
        if (dot < 0) {
          feasible = false;
          break;
        }
      }
      if (feasible)
        throw Error(ErrorCode::Unbounded, "recession cone contains a ray");
    }
  }
}

void Polytope::enumerate_vertices() {
  const int N = facet_count();
  std::vector<Vertex> verts;
  for_each_combination(N, dim_, [&](const std::vector<int>& J) {
    std::vector<RatVec> A;
    RatVec b;
    for (int j : J) {
      RatVec row(dim_);
      for (int i = 0; i < dim_; ++i) row[i] = Rational(facets_[j].normal[i]);
      A.push_back(std::move(row));
      b.push_back(-facets_[j].offset);
    }
    RatVec x;
    if (!solve_rational_system(A, b, x)) return;
    std::vector<int> active;
    for (int j = 0; j < N; ++j) {
      Rational v = facet_value(j, x);
      if (v < 0) return;  // infeasible intersection
      if (v == 0) active.push_back(j);
    }
    for (const auto& w : verts)
      if (w.point == x) return;  // already found via another subset
    verts.push_back(Vertex{std::move(x), std::move(active)});
  });

  if (verts.empty())
    throw Error(ErrorCode::EmptyInterior, "facet system is infeasible");

  // A flat (lower-dimensional) solution set also counts as empty interior;
  // the vertex average detects it exactly.
  std::vector<RatVec> pts;
  for (const auto& v : verts) pts.push_back(v.point);
  RatVec c = average(pts, dim_);
  for (int j = 0; j < facet_count(); ++j)
    if (facet_value(j, c) <= 0)
      throw Error(ErrorCode::EmptyInterior, "interior of the facet system is empty");

  std::sort(verts.begin(), verts.end(), [](const Vertex& a, const Vertex& b) {
    for (size_t i = 0; i < a.point.size(); ++i) {
      if (a.point[i] < b.point[i]) return true;
      if (a.point[i] > b.point[i]) return false;
    }
    return false;
  });
  fan_.vertices = std::move(verts);

  diameter_ = 0.0;
  for (size_t a = 0; a < fan_.vertices.size(); ++a)
    for (size_t b = a + 1; b < fan_.vertices.size(); ++b) {
      double d2 = 0;
      for (int i = 0; i < dim_; ++i) {
        double d = to_double(fan_.vertices[a].point[i] - fan_.vertices[b].point[i]);
        d2 += d * d;
      }
      diameter_ = std::max(diameter_, std::sqrt(d2));
    }
}

void Polytope::check_redundancy() const {
  for (int j = 0; j < facet_count(); ++j) {
    bool touches = false;
    for (const auto& v : fan_.vertices)
      if (facet_value(j, v.point) == 0) {
        touches = true;
        break;
      }
    if (!touches)
      throw Error(ErrorCode::RedundantFacet,
                  "facet " + std::to_string(j) + " never attains zero on the closure", j);
  }
}

void Polytope::triangulate() {
  std::vector<RatVec> pts;
  for (const auto& v : fan_.vertices) pts.push_back(v.point);
  RatVec center = average(pts, dim_);

  triangulation_.clear();
  auto push_simplex = [&](std::vector<RatVec> verts) {
    // volume = |det[v_i - v_0]| / n!
    std::vector<RatVec> M;
    for (int i = 1; i <= dim_; ++i) {
      RatVec row(dim_);
      for (int k = 0; k < dim_; ++k) row[k] = verts[i][k] - verts[0][k];
      M.push_back(std::move(row));
    }
    Rational det = rational_det(M);
    if (det < 0) det = -det;
    long fact = 1;
    for (int i = 2; i <= dim_; ++i) fact *= i;
    Rational vol = det / fact;
    if (vol == 0) return;
    triangulation_.push_back(Simplex{std::move(verts), std::move(vol)});
  };

  if (dim_ == 1) {
    push_simplex({fan_.vertices.front().point, fan_.vertices.back().point});
  } else if (dim_ == 2) {
    for (int j = 0; j < facet_count(); ++j) {
      std::vector<RatVec> on;
      for (const auto& v : fan_.vertices)
        if (facet_value(j, v.point) == 0) on.push_back(v.point);
      if (on.size() != 2) continue;  // facet touching only at a vertex
      push_simplex({center, on[0], on[1]});
    }
  } else {
    for (int j = 0; j < facet_count(); ++j) {
      std::vector<const Vertex*> on;
      for (const auto& v : fan_.vertices)
        if (facet_value(j, v.point) == 0) on.push_back(&v);
      if (on.size() < 3) continue;
      std::vector<RatVec> fpts;
      for (auto* v : on) fpts.push_back(v->point);
      RatVec fcenter = average(fpts, dim_);
      // Edges of the 2-face: vertex pairs sharing a second facet.
      for (size_t a = 0; a < on.size(); ++a)
        for (size_t b = a + 1; b < on.size(); ++b) {
          int shared = 0;
          for (int fa : on[a]->active)
            if (std::find(on[b]->active.begin(), on[b]->active.end(), fa) != on[b]->active.end())
              ++shared;
          if (shared < 2) continue;
          push_simplex({center, fcenter, on[a]->point, on[b]->point});
        }
    }
  }

  volume_ = Rational(0);
  RatVec first(dim_, Rational(0));
  for (const auto& s : triangulation_) {
    volume_ += s.volume;
    RatVec c = average(s.verts, dim_);
    for (int i = 0; i < dim_; ++i) first[i] += s.volume * c[i];
  }
  if (volume_ == 0)
    throw Error(ErrorCode::EmptyInterior, "polytope has zero volume");
  barycenter_.assign(dim_, Rational(0));
  for (int i = 0; i < dim_; ++i) barycenter_[i] = first[i] / volume_;
}

Eigen::VectorXd Polytope::barycenter_d() const { return rat_to_vec(barycenter_); }

DelzantReport Polytope::is_delzant() const {
  DelzantReport report;
  for (size_t vi = 0; vi < fan_.vertices.size(); ++vi) {
    const auto& v = fan_.vertices[vi];
    if (static_cast<int>(v.active.size()) != dim_) {
      report.failures.push_back({static_cast<int>(vi), DelzantFailure::NonSimple});
      continue;
    }
    bool prim_ok = true;
    for (int j : v.active)
      if (!is_primitive(facets_[j].normal)) {
        report.failures.push_back({static_cast<int>(vi), DelzantFailure::NonPrimitive});
        prim_ok = false;
        break;
      }
    if (!prim_ok) continue;
    std::vector<RatVec> M;
    for (int j : v.active) {
      RatVec row(dim_);
      for (int i = 0; i < dim_; ++i) row[i] = Rational(facets_[j].normal[i]);
      M.push_back(std::move(row));
    }
    Rational det = rational_det(M);
    if (det != 1 && det != -1)
      report.failures.push_back({static_cast<int>(vi), DelzantFailure::NonUnimodular});
  }
  report.is_delzant = report.failures.empty();
  return report;
}

double Polytope::boundary_distance(const Eigen::VectorXd& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < facet_count(); ++j) {
    double norm = facets_[j].normal.cast<double>().norm();
    best = std::min(best, facet_value(j, x) / norm);
  }
  return best;
}

Polytope Polytope::apply_unimodular(const Eigen::MatrixXi& U) const {
  if (U.rows() != dim_ || U.cols() != dim_)
    throw Error(ErrorCode::InvalidInput, "unimodular matrix has wrong shape");
  std::vector<RatVec> M;
  for (int r = 0; r < dim_; ++r) {
    RatVec row(dim_);
    for (int c = 0; c < dim_; ++c) row[c] = Rational(U(r, c));
    M.push_back(std::move(row));
  }
  Rational det = rational_det(M);
  if (det != 1 && det != -1)
    throw Error(ErrorCode::InvalidInput, "matrix is not unimodular");

  // P -> U P, so normals transform by the inverse transpose, which is
  // integral exactly when det U = +-1.
  std::vector<Facet> out;
  for (const auto& f : facets_) {
    RatVec rhs(dim_);
    for (int i = 0; i < dim_; ++i) rhs[i] = Rational(f.normal[i]);
    // Solve U^T w = v  =>  w = U^{-T} v.
    std::vector<RatVec> UT;
    for (int r = 0; r < dim_; ++r) {
      RatVec row(dim_);
      for (int c = 0; c < dim_; ++c) row[c] = Rational(U(c, r));
      UT.push_back(std::move(row));
    }
    RatVec w;
    solve_rational_system(UT, rhs, w);
    Eigen::VectorXi nw(dim_);
    for (int i = 0; i < dim_; ++i) {
      if (denominator(w[i]) != 1)
        throw Error(ErrorCode::InvalidInput, "non-integral transformed normal");
      nw[i] = static_cast<int>(numerator(w[i]).convert_to<long>());
    }
    out.push_back(Facet{nw, f.offset});
  }
  return Polytope(dim_, std::move(out), raw_normals_, name_);
}

Polytope Polytope::translate(const RatVec& a) const {
  // P + a: l'_j(y) = l_j(y - a).
  std::vector<Facet> out = facets_;
  for (auto& f : out)
    for (int i = 0; i < dim_; ++i) f.offset -= Rational(f.normal[i]) * a[i];
  return Polytope(dim_, std::move(out), raw_normals_, name_);
}

Polytope Polytope::dilate(const Rational& k) const {
  if (k <= 0) throw Error(ErrorCode::InvalidInput, "dilation factor must be positive");
  std::vector<Facet> out = facets_;
  for (auto& f : out) f.offset *= k;
  return Polytope(dim_, std::move(out), raw_normals_, name_);
}

}  // namespace toric
