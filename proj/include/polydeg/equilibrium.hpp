#pragma once

#include "polydeg/common.hpp"
#include "polydeg/polygame.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polydeg {

// A polytope game with an additive per-player bonus on the payoff gradient:
// payoffs V_n(p) + p_n . bonus_n.
struct BonusGame {
  const PolytopeGame* game = nullptr;
  std::vector<VectorXd> bonus;  // empty means zero

  int num_players() const { return game->num_players(); }
  const Polytope& polytope(int n) const { return game->polytope(n); }

  VectorXd gradient(int n, const std::vector<VectorXd>& prof) const {
    VectorXd g = game->gradient(n, prof);
    if (!bonus.empty()) g += bonus[n];
    return g;
  }
  MatrixXd gradient_jacobian(int n, int m, const std::vector<VectorXd>& prof) const {
    return game->gradient_jacobian(n, m, prof);
  }
  double best_reply_gain(const std::vector<VectorXd>& prof) const {
    double worst = 0;
    for (int n = 0; n < num_players(); ++n) {
      VectorXd g = gradient(n, prof);
      double own = prof[n].dot(g);
      for (const auto& v : polytope(n).vertices())
        worst = std::max(worst, v.dot(g) - own);
    }
    return worst;
  }
};

struct EquilibriumSolution {
  std::vector<VectorXd> profile;
  std::vector<int> faces;   // face index per player
  bool continuum = false;
  double vi_gain = 0;       // worst best-reply gain (<= tol)
  // Connectivity hints: samples cut from one convex per-tuple solution set
  // share a group, so clustering can rejoin a sparsely sampled continuum.
  std::vector<int> groups;
};

struct EnumerationOptions {
  double vi_tol = 1e-9;          // acceptance for the variational inequality
  double membership_tol = 1e-9;
  double dedup_tol = 1e-7;
  int max_faces_per_player = 64;
  // Newton settings (3 players)
  int newton_max_iter = 200;
  double newton_tol = 1e-11;
  int newton_starts = 8;
  std::uint64_t seed = 0;
  std::vector<std::string>* log = nullptr;  // skipped-tuple notes, when wanted
};

namespace detail {

struct FaceParam {
  const Face* face;
  VectorXd base;
  MatrixXd basis;  // ambient x dim
  int dim;
};

inline FaceParam face_param(const Polytope& P, int fi) {
  const Face& f = P.face(fi);
  return {&f, f.base, f.basis, f.dim};
}

// Clip a line t -> x0 + t*dir to the region where `ok` holds, by bisection
// from a feasible t = 0.  Returns the extreme feasible t in each direction.
template <typename OkFn>
inline std::pair<double, double> clip_line(const OkFn& ok, double reach) {
  auto extend = [&](double sgn) {
    double lo = 0, hi = reach;
    if (ok(sgn * hi)) return sgn * hi;
    for (int it = 0; it < 60; ++it) {
      double mid = (lo + hi) / 2;
      if (ok(sgn * mid)) lo = mid;
      else hi = mid;
    }
    return sgn * lo;
  };
  return {extend(-1.0), extend(1.0)};
}

}  // namespace detail

// Exhaustive face-tuple enumeration of the equilibria of a (bonus-perturbed)
// polytope-form game.  Per tuple the stationarity conditions are linear for
// two players and solved exactly; three players run a damped Newton from the
// tuple centroid plus seeded random starts.  Positive-dimensional solution
// sets are sampled and flagged `continuum`.
class EquilibriumEnumerator {
 public:
  EquilibriumEnumerator(const BonusGame& g, EnumerationOptions opts = {})
      : g_(g), opts_(opts) {
    N_ = g.num_players();
    if (N_ > 3) throw SizeGuardExceeded("enumeration supports at most 3 players");
    for (int n = 0; n < N_; ++n) {
      if (static_cast<int>(g.polytope(n).faces().size()) > opts_.max_faces_per_player)
        throw SizeGuardExceeded("face count exceeds the enumeration guard");
    }
  }

  std::vector<EquilibriumSolution> run() {
    std::vector<EquilibriumSolution> out;
    std::vector<int> tuple(N_, 0);
    iterate_tuples(tuple, 0, out);
    return out;
  }

 private:
  void iterate_tuples(std::vector<int>& tuple, int pos, std::vector<EquilibriumSolution>& out) {
    if (pos == N_) {
      solve_tuple(tuple, out);
      return;
    }
    for (int f = 0; f < static_cast<int>(g_.polytope(pos).faces().size()); ++f) {
      tuple[pos] = f;
      iterate_tuples(tuple, pos + 1, out);
    }
  }

  std::vector<VectorXd> assemble(const std::vector<detail::FaceParam>& fp,
                                 const VectorXd& y) const {
    std::vector<VectorXd> prof;
    int at = 0;
    for (int n = 0; n < N_; ++n) {
      VectorXd p = fp[n].base;
      if (fp[n].dim > 0) p += fp[n].basis * y.segment(at, fp[n].dim);
      at += fp[n].dim;
      prof.push_back(std::move(p));
    }
    return prof;
  }

  bool feasible(const std::vector<VectorXd>& prof) const {
    for (int n = 0; n < N_; ++n)
      if (!g_.polytope(n).contains(prof[n], opts_.membership_tol * 10)) return false;
    return true;
  }

  void accept(const std::vector<VectorXd>& prof, const std::vector<int>& tuple, bool continuum,
              int group, std::vector<EquilibriumSolution>& out) {
    double gain = g_.best_reply_gain(prof);
    double scale = 1.0;
    for (int n = 0; n < N_; ++n) scale = std::max(scale, g_.gradient(n, prof).lpNorm<Eigen::Infinity>());
    if (gain > opts_.vi_tol * scale * 10) return;
    for (auto& s : out) {
      if (profile_distance(s.profile, prof) <= opts_.dedup_tol) {
        s.continuum = s.continuum || continuum;
        s.groups.push_back(group);
        return;
      }
    }
    out.push_back({prof, tuple, continuum, gain, {group}});
  }

  int fresh_group() { return next_group_++; }

  void solve_tuple(const std::vector<int>& tuple, std::vector<EquilibriumSolution>& out) {
    std::vector<detail::FaceParam> fp;
    int total = 0;
    for (int n = 0; n < N_; ++n) {
      fp.push_back(detail::face_param(g_.polytope(n), tuple[n]));
      total += fp.back().dim;
    }

    if (N_ <= 2) solve_linear(fp, tuple, total, out);
    else solve_newton(fp, tuple, total, out);
  }

  // Stationarity: basis_n' * grad_n(p_{-n}) = 0 for each player; affine in
  // the other players' coordinates when N <= 2.
  void solve_linear(const std::vector<detail::FaceParam>& fp, const std::vector<int>& tuple,
                    int total, std::vector<EquilibriumSolution>& out) {
    MatrixXd A = MatrixXd::Zero(total, total);
    VectorXd rhs = VectorXd::Zero(total);
    auto base_prof = assemble(fp, VectorXd::Zero(total));

    int row = 0;
    for (int n = 0; n < N_; ++n) {
      if (fp[n].dim == 0) continue;
      VectorXd g0 = g_.gradient(n, base_prof);
      rhs.segment(row, fp[n].dim) = -(fp[n].basis.transpose() * g0);
      int col = 0;
      for (int m = 0; m < N_; ++m) {
        if (fp[m].dim > 0 && m != n) {
          MatrixXd J = g_.gradient_jacobian(n, m, base_prof);
          A.block(row, col, fp[n].dim, fp[m].dim) =
              fp[n].basis.transpose() * J * fp[m].basis;
        }
        col += fp[m].dim;
      }
      row += fp[n].dim;
    }

    if (total == 0) {
      auto prof = assemble(fp, VectorXd(0));
      if (feasible(prof)) accept(prof, tuple, false, fresh_group(), out);
      return;
    }

    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
    cod.setThreshold(1e-10);
    VectorXd x0 = cod.solve(rhs);
    if ((A * x0 - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) return;  // inconsistent

    int rank = static_cast<int>(cod.rank());
    if (rank == total) {
      auto prof = assemble(fp, x0);
      if (feasible(prof)) accept(prof, tuple, false, fresh_group(), out);
      return;
    }

    // Positive-dimensional solution set: sample it.
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
    MatrixXd kernel = svd.matrixV().rightCols(total - rank);
    sample_continuum(fp, tuple, A, rhs, x0, kernel, out);
  }

  // The per-tuple solution set (affine solutions meeting the faces and the
  // variational inequality) is sampled at its face-tuple vertices, a feasible
  // anchor, and clipped extremes along each kernel direction; all samples
  // share one connectivity group.
  void sample_continuum(const std::vector<detail::FaceParam>& fp, const std::vector<int>& tuple,
                        const MatrixXd& A, const VectorXd& rhs, const VectorXd& x0,
                        const MatrixXd& kernel, std::vector<EquilibriumSolution>& out) {
    int group = fresh_group();
    double eq_tol = 1e-7 * (1.0 + rhs.norm());

    // Face-tuple vertices lying on the solution set.
    std::vector<int> vidx(N_, 0);
    sample_vertices(fp, tuple, A, rhs, eq_tol, group, vidx, 0, out);

    double reach = 1.0;
    for (int n = 0; n < N_; ++n)
      for (const auto& v : g_.polytope(n).vertices()) reach = std::max(reach, 4 * v.norm());

    // Infeasibility measure on the solution affine set: membership violation
    // plus excess best-reply gain.  Zero exactly on the usable portion.
    auto badness = [&](const VectorXd& y) {
      auto prof = assemble(fp, y);
      double viol = 0;
      for (int n = 0; n < N_; ++n)
        viol = std::max(viol, g_.polytope(n).membership_violation(prof[n]));
      return std::max(viol, g_.best_reply_gain(prof));
    };
    double accept_tol = opts_.vi_tol * 10;
    auto usable = [&](const VectorXd& y) { return badness(y) <= accept_tol; };

    // Feasible anchor on the solution set: the least-norm solution, the
    // centroid projection, then a grid scan along the kernel directions with
    // local refinement (the usable portion can be a narrow window anywhere
    // on the affine set).
    VectorXd anchor = x0;
    if (!usable(anchor)) {
      VectorXd yc = centroid_coords(fp);
      anchor = x0 + kernel * (kernel.transpose() * (yc - x0));
    }
    if (!usable(anchor)) {
      bool found = false;
      for (int k = 0; k < kernel.cols() && !found; ++k) {
        double best_t = 0, best_b = std::numeric_limits<double>::infinity();
        double step = reach / 32.0;
        for (int s = 0; s <= 64; ++s) {
          double t = reach * (static_cast<double>(s) / 32.0 - 1.0);
          double b = badness(anchor + t * kernel.col(k));
          if (b < best_b) {
            best_b = b;
            best_t = t;
          }
        }
        // golden-section refinement around the best grid point
        double lo = best_t - step, hi = best_t + step;
        for (int it = 0; it < 80 && best_b > accept_tol; ++it) {
          double m1 = lo + 0.382 * (hi - lo);
          double m2 = lo + 0.618 * (hi - lo);
          double b1 = badness(anchor + m1 * kernel.col(k));
          double b2 = badness(anchor + m2 * kernel.col(k));
          if (b1 < b2) {
            hi = m2;
            if (b1 < best_b) { best_b = b1; best_t = m1; }
          } else {
            lo = m1;
            if (b2 < best_b) { best_b = b2; best_t = m2; }
          }
        }
        if (best_b <= accept_tol) {
          anchor = anchor + best_t * kernel.col(k);
          found = true;
        }
      }
      if (!found && kernel.cols() >= 2) {
        Rng probe(0xabcdef12u + static_cast<std::uint64_t>(group));
        for (int s = 0; s < 256 && !found; ++s) {
          VectorXd cand =
              anchor + kernel * probe.normal_vector(static_cast<int>(kernel.cols())) * (reach / 3);
          if (usable(cand)) {
            anchor = cand;
            found = true;
          }
        }
      }
      if (!found) return;
    }
    auto prof0 = assemble(fp, anchor);
    accept(prof0, tuple, true, group, out);

    for (int k = 0; k < kernel.cols(); ++k) {
      VectorXd dir = kernel.col(k);
      auto ok = [&](double t) { return usable(anchor + t * dir); };
      auto [lo, hi] = detail::clip_line(ok, reach);
      for (double t : {lo, hi, (lo + hi) / 2}) {
        if (ok(t)) accept(assemble(fp, anchor + t * dir), tuple, true, group, out);
      }
    }
  }

  void sample_vertices(const std::vector<detail::FaceParam>& fp, const std::vector<int>& tuple,
                       const MatrixXd& A, const VectorXd& rhs, double eq_tol, int group,
                       std::vector<int>& vidx, int pos, std::vector<EquilibriumSolution>& out) {
    if (pos == N_) {
      std::vector<VectorXd> prof;
      VectorXd y(A.cols());
      int at = 0;
      for (int n = 0; n < N_; ++n) {
        const VectorXd& v = g_.polytope(n).vertex(fp[n].face->vertices[vidx[n]]);
        prof.push_back(v);
        if (fp[n].dim > 0) {
          y.segment(at, fp[n].dim) = fp[n].basis.transpose() * (v - fp[n].base);
          at += fp[n].dim;
        }
      }
      if ((A * y - rhs).lpNorm<Eigen::Infinity>() <= eq_tol)
        accept(prof, tuple, true, group, out);
      return;
    }
    for (size_t i = 0; i < fp[pos].face->vertices.size(); ++i) {
      vidx[pos] = static_cast<int>(i);
      sample_vertices(fp, tuple, A, rhs, eq_tol, group, vidx, pos + 1, out);
    }
  }

  VectorXd centroid_coords(const std::vector<detail::FaceParam>& fp) const {
    int total = 0;
    for (int n = 0; n < N_; ++n) total += fp[n].dim;
    VectorXd y(total);
    int at = 0;
    for (int n = 0; n < N_; ++n) {
      if (fp[n].dim == 0) continue;
      VectorXd c = VectorXd::Zero(fp[n].base.size());
      for (int vi : fp[n].face->vertices) c += g_.polytope(n).vertex(vi);
      c /= static_cast<double>(fp[n].face->vertices.size());
      y.segment(at, fp[n].dim) = fp[n].basis.transpose() * (c - fp[n].base);
      at += fp[n].dim;
    }
    return y;
  }

  void solve_newton(const std::vector<detail::FaceParam>& fp, const std::vector<int>& tuple,
                    int total, std::vector<EquilibriumSolution>& out) {
    if (total == 0) {
      auto prof = assemble(fp, VectorXd(0));
      if (feasible(prof)) accept(prof, tuple, false, fresh_group(), out);
      return;
    }
    auto residual = [&](const VectorXd& y) {
      auto prof = assemble(fp, y);
      VectorXd r(total);
      int row = 0;
      for (int n = 0; n < N_; ++n) {
        if (fp[n].dim == 0) continue;
        r.segment(row, fp[n].dim) = fp[n].basis.transpose() * g_.gradient(n, prof);
        row += fp[n].dim;
      }
      return r;
    };
    auto jacobian = [&](const VectorXd& y) {
      auto prof = assemble(fp, y);
      MatrixXd J = MatrixXd::Zero(total, total);
      int row = 0;
      for (int n = 0; n < N_; ++n) {
        if (fp[n].dim == 0) continue;
        int col = 0;
        for (int m = 0; m < N_; ++m) {
          if (fp[m].dim > 0 && m != n)
            J.block(row, col, fp[n].dim, fp[m].dim) =
                fp[n].basis.transpose() * g_.gradient_jacobian(n, m, prof) * fp[m].basis;
          col += fp[m].dim;
        }
        row += fp[n].dim;
      }
      return J;
    };

    Rng rng(opts_.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<VectorXd> starts{centroid_coords(fp)};
    for (int s = 0; s < opts_.newton_starts; ++s)
      starts.push_back(centroid_coords(fp) + 0.5 * rng.normal_vector(total));

    bool any_converged = false;
    for (const auto& y0 : starts) {
      VectorXd y = y0;
      double res = residual(y).norm();
      bool converged = false;
      for (int it = 0; it < opts_.newton_max_iter; ++it) {
        if (res < opts_.newton_tol) { converged = true; break; }
        VectorXd step = jacobian(y).completeOrthogonalDecomposition().solve(-residual(y));
        double damp = 1.0;
        while (damp > 1e-6) {
          VectorXd ytry = y + damp * step;
          double rtry = residual(ytry).norm();
          if (rtry < res) { y = ytry; res = rtry; break; }
          damp /= 2;
        }
        if (damp <= 1e-6) break;  // no progress
      }
      if (!converged && res >= opts_.newton_tol) continue;
      any_converged = true;
      auto prof = assemble(fp, y);
      if (feasible(prof)) accept(prof, tuple, false, fresh_group(), out);
    }
    if (!any_converged && opts_.log) {
      std::string msg = "newton: no start converged on face tuple (";
      for (int n = 0; n < N_; ++n) msg += (n ? "," : "") + std::to_string(tuple[n]);
      opts_.log->push_back(msg + "), tuple skipped");
    }
  }

  BonusGame g_;
  EnumerationOptions opts_;
  int N_ = 0;
  int next_group_ = 0;
};

inline std::vector<EquilibriumSolution> enumerate_equilibria(const PolytopeGame& game,
                                                             const std::vector<VectorXd>& bonus = {},
                                                             EnumerationOptions opts = {}) {
  BonusGame bg{&game, bonus};
  return EquilibriumEnumerator(bg, opts).run();
}

// ---------------------------------------------------------------------------
// GPS fixed-point maps and the displacement Jacobian.

struct GpsMaps {
  const BonusGame* g;

  std::vector<VectorXd> w(const std::vector<VectorXd>& sigma) const {
    std::vector<VectorXd> out;
    for (int n = 0; n < g->num_players(); ++n)
      out.push_back(sigma[n] + g->gradient(n, sigma));
    return out;
  }
  std::vector<VectorXd> retract(const std::vector<VectorXd>& z) const {
    std::vector<VectorXd> out;
    for (int n = 0; n < g->num_players(); ++n)
      out.push_back(g->polytope(n).nearest_point(z[n]).point);
    return out;
  }
  // Phi = r . w  (fixed points are the equilibria)
  std::vector<VectorXd> phi(const std::vector<VectorXd>& sigma) const { return retract(w(sigma)); }
  // Psi = w . r  (the commuted map); f = id - Psi is the displacement
  std::vector<VectorXd> psi(const std::vector<VectorXd>& z) const { return w(retract(z)); }
  std::vector<VectorXd> displacement(const std::vector<VectorXd>& z) const {
    auto p = psi(z);
    std::vector<VectorXd> out;
    for (int n = 0; n < g->num_players(); ++n) out.push_back(z[n] - p[n]);
    return out;
  }
};

// Jacobian of f = id - w . r at z, assembled blockwise: Dr is block-diagonal
// with the projection Jacobians, Dw has identity diagonal and the bilinear
// coupling blocks off-diagonal.  Throws OnCellBoundary when any projection
// sits on a cell boundary.
inline MatrixXd displacement_jacobian(const BonusGame& g, const std::vector<VectorXd>& z,
                                      double margin_tol = 1e-8,
                                      double* margin_out = nullptr) {
  int N = g.num_players();
  std::vector<int> dims;
  int total = 0;
  for (int n = 0; n < N; ++n) {
    dims.push_back(g.polytope(n).ambient_dim());
    total += dims.back();
  }
  std::vector<MatrixXd> Dr(N);
  std::vector<VectorXd> r(N);
  double margin = std::numeric_limits<double>::infinity();
  for (int n = 0; n < N; ++n) {
    auto pr = g.polytope(n).nearest_point(z[n]);
    r[n] = pr.point;
    double m = g.polytope(n).cell_margin(z[n], pr);
    margin = std::min(margin, m);
    if (m < margin_tol)
      throw OnCellBoundary("projection margin " + std::to_string(m) + " for player " +
                           std::to_string(n + 1));
    Dr[n] = g.polytope(n).face(pr.face).tangent_projector();
  }
  if (margin_out) *margin_out = margin;

  MatrixXd J = MatrixXd::Identity(total, total);
  int row = 0;
  for (int n = 0; n < N; ++n) {
    int col = 0;
    for (int m = 0; m < N; ++m) {
      if (m == n) {
        J.block(row, col, dims[n], dims[n]) -= Dr[n];
      } else {
        MatrixXd C = g.gradient_jacobian(n, m, r);
        J.block(row, col, dims[n], dims[m]) -= C * Dr[m];
      }
      col += dims[m];
    }
    row += dims[n];
  }
  return J;
}

// ---------------------------------------------------------------------------
// Components.

struct EquilibriumComponent {
  std::vector<std::vector<VectorXd>> points;       // equilibrium samples
  std::vector<std::vector<VectorXd>> region_points;  // densified cover for U
  bool continuum = false;
  std::string label;
  double rho_u = 0.05;  // neighborhood radius for the degree formulas

  const std::vector<std::vector<VectorXd>>& cover() const {
    return region_points.empty() ? points : region_points;
  }
  double distance_to(const std::vector<VectorXd>& prof) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : cover()) best = std::min(best, profile_distance(p, prof));
    return best;
  }
  void map_points(const std::function<std::vector<VectorXd>(const std::vector<VectorXd>&)>& f) {
    for (auto& p : points) p = f(p);
    for (auto& p : region_points) p = f(p);
  }
};

// Single-linkage clustering of equilibrium samples at gap rho; samples from
// one per-tuple solution set (shared group) are linked regardless of gap.
inline std::vector<EquilibriumComponent> cluster_components(
    const std::vector<EquilibriumSolution>& sols, double rho = 1e-3) {
  int n = static_cast<int>(sols.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto share_group = [&](int i, int j) {
    for (int a : sols[i].groups)
      for (int b : sols[j].groups)
        if (a == b) return true;
    return false;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (share_group(i, j) || profile_distance(sols[i].profile, sols[j].profile) <= rho)
        parent[find(i)] = find(j);

  std::map<int, EquilibriumComponent> comps;
  std::map<int, std::vector<int>> members;
  for (int i = 0; i < n; ++i) {
    auto& c = comps[find(i)];
    c.points.push_back(sols[i].profile);
    c.continuum = c.continuum || sols[i].continuum;
    members[find(i)].push_back(i);
  }
  // Densify the neighborhood cover of continuum components: interpolate
  // between samples of the same convex solution piece.
  for (auto& [k, c] : comps) {
    c.region_points = c.points;
    if (!c.continuum) continue;
    const auto& ms = members[k];
    for (size_t a = 0; a < ms.size(); ++a)
      for (size_t b = a + 1; b < ms.size(); ++b) {
        const auto& sa = sols[ms[a]];
        const auto& sb = sols[ms[b]];
        bool shared = false;
        for (int ga : sa.groups)
          for (int gb : sb.groups)
            if (ga == gb) shared = true;
        if (!shared) continue;
        double d = profile_distance(sa.profile, sb.profile);
        int steps = static_cast<int>(std::ceil(d / 0.02));
        for (int s2 = 1; s2 < steps; ++s2) {
          double t = static_cast<double>(s2) / steps;
          std::vector<VectorXd> mid;
          for (size_t p = 0; p < sa.profile.size(); ++p)
            mid.push_back((1 - t) * sa.profile[p] + t * sb.profile[p]);
          c.region_points.push_back(std::move(mid));
        }
      }
  }
  std::vector<EquilibriumComponent> out;
  for (auto& [k, c] : comps) out.push_back(std::move(c));
  // deterministic order: by first point, lexicographic
  std::sort(out.begin(), out.end(), [](const EquilibriumComponent& a, const EquilibriumComponent& b) {
    const auto& pa = a.points[0];
    const auto& pb = b.points[0];
    for (size_t n2 = 0; n2 < pa.size(); ++n2)
      for (int i = 0; i < pa[n2].size(); ++i) {
        if (std::abs(pa[n2][i] - pb[n2][i]) > 1e-12) return pa[n2][i] < pb[n2][i];
      }
    return false;
  });
  for (size_t i = 0; i < out.size(); ++i)
    if (out[i].label.empty()) out[i].label = "component-" + std::to_string(i);
  return out;
}

}  // namespace polydeg
