#pragma once

#include "polydeg/common.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

namespace polydeg {

// Facet inequality a.x <= b, with |a| = 1 and a lying in the direction space
// of the affine hull.
struct Halfspace {
  VectorXd normal;
  double offset = 0.0;
  double slack(const VectorXd& x) const { return offset - normal.dot(x); }
};

// A face of a polytope: the vertex subset maximizing some linear functional,
// together with the affine hull of that subset.
struct Face {
  std::vector<int> vertices;  // indices into the polytope's vertex list
  int dim = 0;
  VectorXd base;
  MatrixXd basis;                 // ambient x dim, orthonormal columns
  std::vector<int> active_facets; // facets containing the face

  MatrixXd tangent_projector() const {
    if (dim == 0) return MatrixXd::Zero(base.size(), base.size());
    return basis * basis.transpose();
  }
  VectorXd project_affine(const VectorXd& z) const {
    if (dim == 0) return base;
    return base + basis * (basis.transpose() * (z - base));
  }
};

struct ProjectionResult {
  VectorXd point;
  int face = -1;
};

struct Standardization;  // defined after Polytope

namespace detail {

// Orthonormal basis of the span of the columns of M, rank cut relative to the
// largest singular value.
inline MatrixXd orthonormal_span(const MatrixXd& M, double rel_tol = 1e-9) {
  if (M.cols() == 0 || M.rows() == 0) return MatrixXd(M.rows(), 0);
  Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeThinU);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > rel_tol * std::max(smax, 1.0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace detail

class Polytope {
 public:
  static constexpr int kMaxPoints = 64;
  static constexpr int kMaxDim = 8;
  static constexpr int kMaxFacets = 16;
  static constexpr double kGeomTol = 1e-9;

  Polytope() = default;

  // Build from a point cloud: dedups, drops non-extreme points, computes the
  // affine hull, facets and the full face lattice.
  static Polytope from_vertices(const std::vector<VectorXd>& points) {
    if (points.empty()) throw SizeGuardExceeded("from_vertices needs at least one point");
    Polytope p;
    p.ambient_ = static_cast<int>(points[0].size());

    std::vector<VectorXd> pts;
    for (const auto& q : points) {
      if (static_cast<int>(q.size()) != p.ambient_)
        throw SizeGuardExceeded("inconsistent point dimensions");
      bool dup = false;
      for (const auto& r : pts)
        if ((q - r).norm() <= kGeomTol) { dup = true; break; }
      if (!dup) pts.push_back(q);
    }
    if (static_cast<int>(pts.size()) > kMaxPoints)
      throw SizeGuardExceeded("more than 64 distinct points");

    p.hull_base_ = pts[0];
    MatrixXd diffs(p.ambient_, static_cast<int>(pts.size()) - 1);
    for (size_t i = 1; i < pts.size(); ++i) diffs.col(static_cast<int>(i - 1)) = pts[i] - pts[0];
    p.hull_basis_ = detail::orthonormal_span(diffs);
    p.dim_ = static_cast<int>(p.hull_basis_.cols());
    if (p.dim_ > kMaxDim) throw SizeGuardExceeded("intrinsic dimension exceeds 8");

    // Work in intrinsic coordinates.
    MatrixXd Y(p.dim_, static_cast<int>(pts.size()));
    for (size_t i = 0; i < pts.size(); ++i)
      Y.col(static_cast<int>(i)) = p.hull_basis_.transpose() * (pts[i] - p.hull_base_);

    p.compute_facets(Y);
    p.select_vertices(pts, Y);
    p.compute_faces();
    return p;
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  const std::vector<VectorXd>& vertices() const { return vertices_; }
  const VectorXd& vertex(int i) const { return vertices_[i]; }
  const std::vector<Halfspace>& halfspaces() const { return facets_; }
  const VectorXd& hull_base() const { return hull_base_; }
  const MatrixXd& hull_basis() const { return hull_basis_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int i) const { return faces_[i]; }
  int whole_face_index() const { return whole_face_; }

  VectorXd barycenter() const {
    VectorXd c = VectorXd::Zero(ambient_);
    for (const auto& v : vertices_) c += v;
    return c / static_cast<double>(vertices_.size());
  }

  VectorXd project_to_hull(const VectorXd& z) const {
    return hull_base_ + hull_basis_ * (hull_basis_.transpose() * (z - hull_base_));
  }

  double hull_distance(const VectorXd& z) const { return (z - project_to_hull(z)).norm(); }

  // Signed distance-like membership: max facet violation plus hull deviation.
  double membership_violation(const VectorXd& z) const {
    double viol = hull_distance(z);
    for (const auto& h : facets_) viol = std::max(viol, -h.slack(z));
    return viol;
  }
  bool contains(const VectorXd& z, double tol = kGeomTol) const {
    return membership_violation(z) <= tol;
  }

  // Nearest point in the polytope and the unique face whose relative interior
  // holds it.  Exact at desk scale: tries faces by increasing dimension and
  // accepts the one whose affine projection satisfies membership plus the
  // variational inequality <v - x, z - x> <= 0 at every vertex v.
  ProjectionResult nearest_point(const VectorXd& z) const {
    VectorXd zh = project_to_hull(z);
    double scale = 1.0 + zh.norm();
    for (int fi : faces_by_dim_) {
      const Face& f = faces_[fi];
      VectorXd x = f.project_affine(zh);
      if (!contains(x, 10 * kGeomTol)) continue;
      bool ok = true;
      for (const auto& v : vertices_) {
        if ((v - x).dot(z - x) > kGeomTol * scale * 10) { ok = false; break; }
      }
      if (ok) return {x, fi};
    }
    // Numerically ambiguous input; fall back to the best candidate.
    throw Error("ProjectionFailure", "no face satisfied the variational inequality");
  }

  // Derivative of the nearest-point map at z: the orthogonal projector onto
  // the active face's direction space.  Requires the projection to sit
  // strictly inside its cell; otherwise the active set is unstable.
  MatrixXd projection_jacobian(const VectorXd& z, double margin_tol = 1e-8) const {
    auto pr = nearest_point(z);
    double m = cell_margin(z, pr);
    if (m < margin_tol)
      throw OnCellBoundary("active-face margin " + std::to_string(m));
    return faces_[pr.face].tangent_projector();
  }

  // Minimum of (a) the slack of facets not containing the active face at the
  // projected point and (b) the smallest multiplier expressing z - x over the
  // active facet normals (strict complementarity).
  double cell_margin(const VectorXd& z, const ProjectionResult& pr) const {
    const Face& f = faces_[pr.face];
    double margin = std::numeric_limits<double>::infinity();
    std::set<int> active(f.active_facets.begin(), f.active_facets.end());
    for (int i = 0; i < static_cast<int>(facets_.size()); ++i)
      if (!active.count(i)) margin = std::min(margin, facets_[i].slack(pr.point));
    if (!f.active_facets.empty()) {
      VectorXd w = z - pr.point;
      VectorXd wh = hull_basis_ * (hull_basis_.transpose() * w);
      MatrixXd A(ambient_, static_cast<int>(f.active_facets.size()));
      for (size_t j = 0; j < f.active_facets.size(); ++j)
        A.col(static_cast<int>(j)) = facets_[f.active_facets[j]].normal;
      VectorXd lam = A.completeOrthogonalDecomposition().solve(wh);
      margin = std::min(margin, lam.minCoeff());
    }
    return margin;
  }

  // Whether direction d lies in the normal cone of the given face: every face
  // vertex must maximize x -> d.x over the polytope.
  bool normal_cone_contains(int face_index, const VectorXd& d, double tol = kGeomTol) const {
    const Face& f = faces_[face_index];
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices_) best = std::max(best, d.dot(v));
    for (int vi : f.vertices)
      if (d.dot(vertices_[vi]) < best - tol * (1.0 + std::abs(best))) return false;
    return true;
  }

  // Homothety toward an interior point c with ratio chosen so every vertex
  // moves by at most eps; Hausdorff distance to the original is then <= eps.
  Polytope shrink_toward(const VectorXd& c, double eps) const {
    double maxd = 0;
    for (const auto& v : vertices_) maxd = std::max(maxd, (v - c).norm());
    if (maxd <= 0) return *this;  // single point
    double lam = std::min(1.0, eps / maxd);
    std::vector<VectorXd> nv;
    for (const auto& v : vertices_) nv.push_back((1 - lam) * v + lam * c);
    Polytope out = from_vertices(nv);
    if (lam < 1.0 && (out.num_vertices() != num_vertices() ||
                      out.halfspaces().size() != facets_.size()))
      throw Error("ShrinkDegenerate", "homothety changed the face structure");
    return out;
  }

  Polytope shrink(double eps) const { return shrink_toward(barycenter(), eps); }

  // Alternate interior shrink family used to exercise independence of the
  // epsilon-approximation: homothety toward a deterministically skewed
  // interior point instead of the barycenter.
  Polytope shrink_skewed(double eps) const {
    int nv = num_vertices();
    VectorXd c = VectorXd::Zero(ambient_);
    double wsum = 0;
    for (int i = 0; i < nv; ++i) {
      double w = 1.0 + 0.5 * (i + 1) / static_cast<double>(nv);
      c += w * vertices_[i];
      wsum += w;
    }
    c /= wsum;
    return shrink_toward(c, eps);
  }

  // Proxy for the inradius: smallest facet slack at the barycenter.
  double inradius_proxy() const {
    if (facets_.empty()) return 0.0;
    VectorXd c = barycenter();
    double r = std::numeric_limits<double>::infinity();
    for (const auto& h : facets_) r = std::min(r, h.slack(c));
    return r;
  }

  // Embed into the affine hull of the unit simplex of R^{dim+1}: intrinsic
  // coordinates pass through the simplex barycenter along an orthonormal
  // basis of the zero-sum hyperplane.  Returns the standard polytope and the
  // affine bijection with its exact inverse.
  Standardization standardize() const;

  bool is_standard(double tol = 1e-9) const {
    if (dim_ != ambient_ - 1) return false;
    for (const auto& v : vertices_)
      if (std::abs(v.sum() - 1.0) > tol) return false;
    return true;
  }

 private:
  void compute_facets(const MatrixXd& Y) {
    facets_.clear();
    int k = dim_;
    int n = static_cast<int>(Y.cols());
    if (k == 0) return;

    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, Y.col(i).norm());

    // Enumerate k-subsets of points; keep hyperplanes supporting all points.
    double combinations = 1;
    for (int i = 0; i < k; ++i) combinations *= static_cast<double>(n - i) / (i + 1);
    if (combinations > 2e6) throw SizeGuardExceeded("facet enumeration too large");

    std::vector<int> idx(k);
    std::vector<std::pair<VectorXd, double>> found;  // intrinsic-space facets
    auto consider = [&]() {
      VectorXd nrm;
      if (k == 1) {
        nrm = VectorXd::Ones(1);
      } else {
        MatrixXd D(k, k - 1);
        for (int j = 1; j < k; ++j) D.col(j - 1) = Y.col(idx[j]) - Y.col(idx[0]);
        Eigen::JacobiSVD<MatrixXd> svd(D, Eigen::ComputeFullU);
        int rank = 0;
        double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
          if (svd.singularValues()[i] > 1e-9 * std::max(smax, 1.0)) ++rank;
        if (rank != k - 1) return;  // not spanning a hyperplane
        nrm = svd.matrixU().col(k - 1);
      }
      double beta = nrm.dot(Y.col(idx[0]));
      double lo = 0, hi = 0;
      for (int i = 0; i < n; ++i) {
        double s = nrm.dot(Y.col(i)) - beta;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      double tol = kGeomTol * scale * 10;
      if (hi <= tol) found.emplace_back(nrm, beta);
      else if (lo >= -tol) found.emplace_back(-nrm, -beta);
    };
    // iterate subsets
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (n >= k) {
      while (true) {
        consider();
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    // Deduplicate in intrinsic space, convert to ambient.
    std::vector<std::pair<VectorXd, double>> dedup;
    for (auto& [nrm, beta] : found) {
      bool dup = false;
      for (auto& [n2, b2] : dedup)
        if ((nrm - n2).norm() < 1e-7 && std::abs(beta - b2) < 1e-7 * scale) { dup = true; break; }
      if (!dup) dedup.emplace_back(nrm, beta);
    }
    for (auto& [nrm, beta] : dedup) {
      Halfspace h;
      h.normal = hull_basis_ * nrm;
      h.offset = beta + nrm.dot(hull_basis_.transpose() * hull_base_);
      facets_.push_back(std::move(h));
    }
    // Deterministic order.
    std::sort(facets_.begin(), facets_.end(), [](const Halfspace& a, const Halfspace& b) {
      for (int i = 0; i < a.normal.size(); ++i) {
        if (std::abs(a.normal[i] - b.normal[i]) > 1e-12) return a.normal[i] < b.normal[i];
      }
      return a.offset < b.offset;
    });
  }

  void select_vertices(const std::vector<VectorXd>& pts, const MatrixXd&) {
    vertices_.clear();
    if (dim_ == 0) {
      vertices_.push_back(pts[0]);
      return;
    }
    for (const auto& q : pts) {
      MatrixXd act(ambient_, 0);
      for (const auto& h : facets_) {
        if (std::abs(h.slack(q)) <= 10 * kGeomTol * (1.0 + q.norm())) {
          act.conservativeResize(Eigen::NoChange, act.cols() + 1);
          act.col(act.cols() - 1) = h.normal;
        }
      }
      if (static_cast<int>(detail::orthonormal_span(act).cols()) == dim_)
        vertices_.push_back(q);
    }
    if (vertices_.empty())
      throw Error("HullFailure", "no extreme points identified");
  }

  void compute_faces() {
    faces_.clear();
    int nf = static_cast<int>(facets_.size());
    if (nf > kMaxFacets) throw SizeGuardExceeded("facet count exceeds 16");
    int nv = num_vertices();

    std::vector<std::uint64_t> facet_mask(nf, 0);
    for (int f = 0; f < nf; ++f)
      for (int v = 0; v < nv; ++v)
        if (std::abs(facets_[f].slack(vertices_[v])) <=
            10 * kGeomTol * (1.0 + vertices_[v].norm()))
          facet_mask[f] |= (std::uint64_t{1} << v);

    std::uint64_t all = nv == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << nv) - 1);
    std::map<std::uint64_t, std::uint64_t> seen;  // vertex mask -> facet subset mask
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << nf); ++sub) {
      std::uint64_t vm = all;
      for (int f = 0; f < nf; ++f)
        if (sub & (std::uint64_t{1} << f)) vm &= facet_mask[f];
      if (vm == 0) continue;
      auto it = seen.find(vm);
      if (it == seen.end()) seen[vm] = sub;
      else it->second |= sub;  // accumulate all facets containing this face
    }

    for (auto& [vm, fsub] : seen) {
      Face face;
      for (int v = 0; v < nv; ++v)
        if (vm & (std::uint64_t{1} << v)) face.vertices.push_back(v);
      // active facets: all facets containing every vertex of the face
      for (int f = 0; f < nf; ++f)
        if ((facet_mask[f] & vm) == vm) face.active_facets.push_back(f);
      face.base = vertices_[face.vertices[0]];
      MatrixXd D(ambient_, static_cast<int>(face.vertices.size()) - 1);
      for (size_t j = 1; j < face.vertices.size(); ++j)
        D.col(static_cast<int>(j - 1)) = vertices_[face.vertices[j]] - face.base;
      face.basis = detail::orthonormal_span(D);
      face.dim = static_cast<int>(face.basis.cols());
      faces_.push_back(std::move(face));
    }

    // Sort by (dim, vertex list) for deterministic, min-dim-first scans.
    std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
      if (a.dim != b.dim) return a.dim < b.dim;
      return a.vertices < b.vertices;
    });
    faces_by_dim_.resize(faces_.size());
    for (size_t i = 0; i < faces_.size(); ++i) faces_by_dim_[static_cast<int>(i)] = static_cast<int>(i);
    for (size_t i = 0; i < faces_.size(); ++i)
      if (static_cast<int>(faces_[i].vertices.size()) == num_vertices()) whole_face_ = static_cast<int>(i);
  }

  int ambient_ = 0;
  int dim_ = 0;
  std::vector<VectorXd> vertices_;
  VectorXd hull_base_;
  MatrixXd hull_basis_;
  std::vector<Halfspace> facets_;
  std::vector<Face> faces_;
  std::vector<int> faces_by_dim_;
  int whole_face_ = -1;
};

struct Standardization {
  Polytope standard;
  AffineMap to_standard;
  AffineMap from_standard;
};

inline Standardization Polytope::standardize() const {
  int k = dim_;
  int d = k + 1;
  VectorXd ones = VectorXd::Ones(d);
  Eigen::HouseholderQR<MatrixXd> qr(ones);
  MatrixXd Q = qr.householderQ();
  MatrixXd M = Q.rightCols(k);  // orthonormal basis of the zero-sum subspace
  VectorXd cd = ones / static_cast<double>(d);

  AffineMap fwd{M * hull_basis_.transpose(),
                cd - M * (hull_basis_.transpose() * hull_base_)};
  AffineMap bwd{hull_basis_ * M.transpose(),
                hull_base_ - hull_basis_ * (M.transpose() * cd)};

  std::vector<VectorXd> sv;
  for (const auto& v : vertices_) sv.push_back(fwd(v));
  return Standardization{from_vertices(sv), fwd, bwd};
}

}  // namespace polydeg
