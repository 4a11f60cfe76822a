#pragma once

#include "polydeg/common.hpp"
#include "polydeg/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace polydeg {

// Dense multilinear payoff tensor, one entry per tuple of ambient coordinates.
class MultiTensor {
 public:
  MultiTensor() = default;
  explicit MultiTensor(std::vector<int> dims) : dims_(std::move(dims)) {
    strides_.assign(dims_.size(), 1);
    long long total = 1;
    for (int i = static_cast<int>(dims_.size()) - 1; i >= 0; --i) {
      strides_[i] = total;
      total *= dims_[i];
    }
    data_.assign(static_cast<size_t>(total), 0.0);
  }

  const std::vector<int>& dims() const { return dims_; }
  long long size() const { return static_cast<long long>(data_.size()); }

  double& at(const std::vector<int>& idx) { return data_[flat(idx)]; }
  double at(const std::vector<int>& idx) const { return data_[flat(idx)]; }
  double& flat_at(long long i) { return data_[static_cast<size_t>(i)]; }
  double flat_at(long long i) const { return data_[static_cast<size_t>(i)]; }

  void unflatten(long long f, std::vector<int>& idx) const {
    idx.resize(dims_.size());
    for (size_t m = 0; m < dims_.size(); ++m) {
      idx[m] = static_cast<int>(f / strides_[m]);
      f %= strides_[m];
    }
  }

  // Full multilinear evaluation at one vector per mode.
  double eval(const std::vector<VectorXd>& xs) const {
    double out = 0;
    std::vector<int> idx;
    for (long long f = 0; f < size(); ++f) {
      unflatten(f, idx);
      double term = data_[static_cast<size_t>(f)];
      for (size_t m = 0; m < dims_.size(); ++m) term *= xs[m][idx[m]];
      out += term;
    }
    return out;
  }

  // Coefficient vector of mode n: contraction over all other modes.
  VectorXd contract_except(int n, const std::vector<VectorXd>& xs) const {
    VectorXd out = VectorXd::Zero(dims_[n]);
    std::vector<int> idx;
    for (long long f = 0; f < size(); ++f) {
      unflatten(f, idx);
      double term = data_[static_cast<size_t>(f)];
      for (size_t m = 0; m < dims_.size(); ++m)
        if (static_cast<int>(m) != n) term *= xs[m][idx[m]];
      out[idx[n]] += term;
    }
    return out;
  }

  // d(contract_except(n))/d(x_m): dims[n] x dims[m].
  MatrixXd contract_except_pair(int n, int m, const std::vector<VectorXd>& xs) const {
    MatrixXd out = MatrixXd::Zero(dims_[n], dims_[m]);
    std::vector<int> idx;
    for (long long f = 0; f < size(); ++f) {
      unflatten(f, idx);
      double term = data_[static_cast<size_t>(f)];
      for (size_t k = 0; k < dims_.size(); ++k)
        if (static_cast<int>(k) != n && static_cast<int>(k) != m) term *= xs[k][idx[k]];
      out(idx[n], idx[m]) += term;
    }
    return out;
  }

  // Mode-m product with a matrix Z (out dim Z.rows()).
  MultiTensor mode_multiply(int m, const MatrixXd& Z) const {
    std::vector<int> ndims = dims_;
    ndims[m] = static_cast<int>(Z.rows());
    MultiTensor out(ndims);
    std::vector<int> idx, oidx;
    for (long long f = 0; f < size(); ++f) {
      unflatten(f, idx);
      double v = data_[static_cast<size_t>(f)];
      if (v == 0.0) continue;
      oidx = idx;
      for (int j = 0; j < Z.rows(); ++j) {
        oidx[m] = j;
        out.at(oidx) += Z(j, idx[m]) * v;
      }
    }
    return out;
  }

 private:
  long long flat(const std::vector<int>& idx) const {
    long long f = 0;
    for (size_t m = 0; m < dims_.size(); ++m) f += strides_[m] * idx[m];
    return f;
  }

  std::vector<int> dims_;
  std::vector<long long> strides_;
  std::vector<double> data_;
};

// One product term of a sparse multiaffine payoff: coeff * prod p_m[coord_m]
// over the players with coord_m >= 0.
struct SparseTerm {
  double coeff = 0;
  std::vector<int> coord;  // -1 where the player does not appear
};

struct EquilibriumCheck {
  bool is_equilibrium = true;
  double worst_violation = 0;
  int player = -1;
  int vertex = -1;
};

// Polytope-form game: per-player strategy polytopes plus payoffs that are
// affine in each player's coordinates.  Payoffs are one of
//   - a dense multilinear tensor (standard games),
//   - sparse product terms over coordinates (enabling form),
//   - an affine lift into another game (reductions).
class PolytopeGame {
 public:
  enum class Rep { Tensor, Sparse, Lifted };

  static PolytopeGame from_tensor(std::vector<Polytope> polys, std::vector<MultiTensor> tensors) {
    PolytopeGame g;
    g.rep_ = Rep::Tensor;
    g.polys_ = std::move(polys);
    g.tensors_ = std::move(tensors);
    g.check_dims();
    return g;
  }

  static PolytopeGame from_sparse(std::vector<Polytope> polys,
                                  std::vector<std::vector<SparseTerm>> terms) {
    PolytopeGame g;
    g.rep_ = Rep::Sparse;
    g.polys_ = std::move(polys);
    g.sparse_ = std::move(terms);
    return g;
  }

  static PolytopeGame lifted(std::vector<Polytope> polys, std::shared_ptr<const PolytopeGame> base,
                             std::vector<AffineMap> lifts) {
    PolytopeGame g;
    g.rep_ = Rep::Lifted;
    g.polys_ = std::move(polys);
    g.base_ = std::move(base);
    g.lifts_ = std::move(lifts);
    return g;
  }

  Rep rep() const { return rep_; }
  int num_players() const { return static_cast<int>(polys_.size()); }
  const Polytope& polytope(int n) const { return polys_[n]; }
  const std::vector<Polytope>& polytopes() const { return polys_; }
  const MultiTensor& tensor(int n) const { return tensors_[n]; }
  const std::vector<std::vector<SparseTerm>>& sparse_terms() const { return sparse_; }

  std::vector<int> ambient_dims() const {
    std::vector<int> d;
    for (const auto& p : polys_) d.push_back(p.ambient_dim());
    return d;
  }

  void check_membership(const std::vector<VectorXd>& profile, double tol = 1e-9) const {
    for (int n = 0; n < num_players(); ++n) {
      double v = polys_[n].membership_violation(profile[n]);
      if (v > tol)
        throw OutsidePolytope("player " + std::to_string(n + 1) + " point violates by " +
                              std::to_string(v));
    }
  }

  VectorXd payoff(const std::vector<VectorXd>& profile) const {
    check_membership(profile);
    return payoff_unchecked(profile);
  }

  // Evaluation through the multiaffine extension; no membership check.
  VectorXd payoff_unchecked(const std::vector<VectorXd>& profile) const {
    VectorXd out(num_players());
    for (int n = 0; n < num_players(); ++n) out[n] = payoff_one(n, profile);
    return out;
  }

  double payoff_one(int n, const std::vector<VectorXd>& profile) const {
    switch (rep_) {
      case Rep::Tensor:
        return tensors_[n].eval(profile);
      case Rep::Sparse: {
        double s = 0;
        for (const auto& t : sparse_[n]) {
          double term = t.coeff;
          for (int m = 0; m < num_players(); ++m)
            if (t.coord[m] >= 0) term *= profile[m][t.coord[m]];
          s += term;
        }
        return s;
      }
      case Rep::Lifted:
        return base_->payoff_one(n, lift_profile(profile));
    }
    return 0;
  }

  // Linear coefficient of player n's coordinates: V_n(p) = p_n . grad + const,
  // holding p_{-n} fixed.  For tensor games this is V^{s,n}(sigma_{-n}).
  VectorXd gradient(int n, const std::vector<VectorXd>& profile) const {
    switch (rep_) {
      case Rep::Tensor:
        return tensors_[n].contract_except(n, profile);
      case Rep::Sparse: {
        VectorXd g = VectorXd::Zero(polys_[n].ambient_dim());
        for (const auto& t : sparse_[n]) {
          if (t.coord[n] < 0) continue;
          double term = t.coeff;
          for (int m = 0; m < num_players(); ++m)
            if (m != n && t.coord[m] >= 0) term *= profile[m][t.coord[m]];
          g[t.coord[n]] += term;
        }
        return g;
      }
      case Rep::Lifted: {
        VectorXd gb = base_->gradient(n, lift_profile(profile));
        return lifts_[n].A.transpose() * gb;
      }
    }
    return {};
  }

  // d(gradient_n)/d(p_m) for m != n.
  MatrixXd gradient_jacobian(int n, int m, const std::vector<VectorXd>& profile) const {
    switch (rep_) {
      case Rep::Tensor:
        return tensors_[n].contract_except_pair(n, m, profile);
      case Rep::Sparse: {
        MatrixXd J = MatrixXd::Zero(polys_[n].ambient_dim(), polys_[m].ambient_dim());
        for (const auto& t : sparse_[n]) {
          if (t.coord[n] < 0 || t.coord[m] < 0) continue;
          double term = t.coeff;
          for (int k = 0; k < num_players(); ++k)
            if (k != n && k != m && t.coord[k] >= 0) term *= profile[k][t.coord[k]];
          J(t.coord[n], t.coord[m]) += term;
        }
        return J;
      }
      case Rep::Lifted: {
        MatrixXd Jb = base_->gradient_jacobian(n, m, lift_profile(profile));
        return lifts_[n].A.transpose() * Jb * lifts_[m].A;
      }
    }
    return {};
  }

  // The spec-level gradient operation: defined for standard (tensor) games.
  VectorXd payoff_gradient(int n, const std::vector<VectorXd>& profile) const {
    if (rep_ != Rep::Tensor)
      throw Error("NotStandard", "payoff_gradient requires the dense tensor representation");
    return gradient(n, profile);
  }

  EquilibriumCheck is_equilibrium(const std::vector<VectorXd>& profile, double tol = 1e-8) const {
    EquilibriumCheck r;
    for (int n = 0; n < num_players(); ++n) {
      VectorXd g = gradient(n, profile);
      double own = profile[n].dot(g);
      for (int v = 0; v < polys_[n].num_vertices(); ++v) {
        double gain = polys_[n].vertex(v).dot(g) - own;
        if (gain > r.worst_violation) {
          r.worst_violation = gain;
          r.player = n;
          r.vertex = v;
        }
      }
    }
    r.is_equilibrium = r.worst_violation <= tol;
    return r;
  }

  // Mean of the vertices: the uniform distribution over vertices as a point.
  std::vector<VectorXd> vertex_uniform_profile() const {
    std::vector<VectorXd> out;
    for (const auto& p : polys_) {
      VectorXd c = VectorXd::Zero(p.ambient_dim());
      for (const auto& v : p.vertices()) c += v;
      out.push_back(c / p.num_vertices());
    }
    return out;
  }

  struct Decomposition {
    std::vector<MultiTensor> zero_mean;  // per player
    std::vector<VectorXd> bonus;         // g_n
  };

  // V^s = Vbar + g with g_{n x_n} = V^s_n(x_n, sigma*_{-n}) at the uniform
  // vertex distribution; requires the tensor representation.  Subtracting
  // g_n[i_n] from every entry with n-index i_n is the multilinear
  // representative of x -> g_n(x_n) on the simplex hyperplane products.
  Decomposition decompose() const {
    if (rep_ != Rep::Tensor) throw Error("NotStandard", "decompose requires tensor payoffs");
    Decomposition d;
    auto star = vertex_uniform_profile();
    std::vector<int> idx;
    for (int n = 0; n < num_players(); ++n) {
      VectorXd g = tensors_[n].contract_except(n, star);
      MultiTensor bar = tensors_[n];
      for (long long f = 0; f < bar.size(); ++f) {
        bar.unflatten(f, idx);
        bar.flat_at(f) -= g[idx[n]];
      }
      d.zero_mean.push_back(std::move(bar));
      d.bonus.push_back(std::move(g));
    }
    return d;
  }

  std::shared_ptr<const PolytopeGame> base() const { return base_; }
  const std::vector<AffineMap>& lifts() const { return lifts_; }

 private:
  std::vector<VectorXd> lift_profile(const std::vector<VectorXd>& profile) const {
    std::vector<VectorXd> out;
    for (int n = 0; n < num_players(); ++n) out.push_back(lifts_[n](profile[n]));
    return out;
  }

  void check_dims() const {
    for (int n = 0; n < num_players(); ++n) {
      const auto& dims = tensors_[n].dims();
      if (static_cast<int>(dims.size()) != num_players())
        throw Error("BadTensor", "tensor order must equal the number of players");
      for (int m = 0; m < num_players(); ++m)
        if (dims[m] != polys_[m].ambient_dim())
          throw Error("BadTensor", "tensor dimension mismatch");
    }
  }

  Rep rep_ = Rep::Tensor;
  std::vector<Polytope> polys_;
  std::vector<MultiTensor> tensors_;
  std::vector<std::vector<SparseTerm>> sparse_;
  std::shared_ptr<const PolytopeGame> base_;
  std::vector<AffineMap> lifts_;
};

// Affine surjection q_n: P_n -> Pbar_n with a stored affine right inverse.
struct ReductionMap {
  std::vector<AffineMap> q;
  std::vector<AffineMap> j;
  std::vector<Polytope> targets;
};

namespace detail {

inline std::vector<VectorXd> random_profile(const PolytopeGame& g, Rng& rng) {
  std::vector<VectorXd> p;
  for (int n = 0; n < g.num_players(); ++n) {
    const Polytope& P = g.polytope(n);
    VectorXd w(P.num_vertices());
    for (int i = 0; i < w.size(); ++i) w[i] = -std::log(rng.uniform(1e-12, 1.0));
    w /= w.sum();
    VectorXd x = VectorXd::Zero(P.ambient_dim());
    for (int i = 0; i < P.num_vertices(); ++i) x += w[i] * P.vertex(i);
    p.push_back(x);
  }
  return p;
}

// Least-norm affine section of the linear map x -> Mx restricted to the
// affine slice {ones.x = 1} (when requested): j(y) = A+ [y; 1].
inline AffineMap least_squares_section(const MatrixXd& M, bool unit_sum_slice) {
  MatrixXd A;
  if (unit_sum_slice) {
    A.resize(M.rows() + 1, M.cols());
    A.topRows(M.rows()) = M;
    A.bottomRows(1) = Eigen::RowVectorXd::Ones(M.cols());
  } else {
    A = M;
  }
  MatrixXd pinv = A.completeOrthogonalDecomposition().pseudoInverse();
  AffineMap j;
  j.A = pinv.leftCols(M.rows());
  j.b = unit_sum_slice ? VectorXd(pinv.col(M.rows())) : VectorXd(VectorXd::Zero(M.cols()));
  return j;
}

}  // namespace detail

// Checks Eq-style fiber constancy of payoffs for a candidate reduction map:
// points with equal image must give every player equal payoffs against
// sampled opponent profiles.
inline void validate_reduction(const PolytopeGame& game, const ReductionMap& q,
                               std::uint64_t seed = 12345, int samples = 40,
                               double tol = 1e-8) {
  Rng rng(seed);
  for (int n = 0; n < game.num_players(); ++n) {
    // surjectivity onto the target: every target vertex is hit by q(j(.))
    for (const auto& tv : q.targets[n].vertices()) {
      if ((q.q[n](q.j[n](tv)) - tv).norm() > 1e-10)
        throw InvalidReduction("right inverse fails at a target vertex");
    }
    // fiber directions: kernel of q_n within the hull directions of P_n
    const Polytope& P = game.polytope(n);
    MatrixXd K = q.q[n].A * P.hull_basis();
    Eigen::JacobiSVD<MatrixXd> svd(K, Eigen::ComputeFullV);
    int rank = 0;
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-10 * std::max(1.0, smax)) ++rank;
    MatrixXd kerdirs = P.hull_basis() * svd.matrixV().rightCols(P.dim() - rank);
    if (kerdirs.cols() == 0) continue;  // injective on the hull, nothing to check

    for (int s = 0; s < samples; ++s) {
      auto prof = detail::random_profile(game, rng);
      VectorXd dir = kerdirs * rng.normal_vector(static_cast<int>(kerdirs.cols()));
      if (dir.norm() < 1e-12) continue;
      dir.normalize();
      // step inside the polytope along the fiber
      double step = 1.0;
      VectorXd p2;
      while (step > 1e-6) {
        p2 = prof[n] + step * dir;
        if (game.polytope(n).contains(p2, 1e-9)) break;
        step /= 2;
      }
      if (!game.polytope(n).contains(p2, 1e-9)) continue;
      auto prof2 = prof;
      prof2[n] = p2;
      for (int m = 0; m < game.num_players(); ++m) {
        double a = game.payoff_one(m, prof);
        double b = game.payoff_one(m, prof2);
        if (std::abs(a - b) > tol)
          throw InvalidReduction("payoffs differ by " + std::to_string(std::abs(a - b)) +
                                 " across a fiber of player " + std::to_string(n + 1));
      }
    }
  }
}

// The q-reduction: target polytopes with payoffs realized through the right
// inverse, Vbar_n(x) = V_n(j(x)).
inline PolytopeGame apply_reduction(const PolytopeGame& game, const ReductionMap& q,
                                    bool validate = true) {
  if (validate) validate_reduction(game, q);
  auto base = std::make_shared<PolytopeGame>(game);
  return PolytopeGame::lifted(q.targets, base, q.j);
}

struct MaximalReduction {
  PolytopeGame reduced;
  ReductionMap map;
  std::vector<std::string> warnings;
};

// Quotient by payoff-equivalence of player coordinates: per player, the
// linear map M_n: x_n -> (G_m(x_n, s_{-n}))_{m, s_{-n}} is formed on vertex
// tuples; the reduced polytope is the image of P_n under an orthonormal basis
// of row-space(M_n).
inline MaximalReduction maximal_reduction(const PolytopeGame& game) {
  int N = game.num_players();
  MaximalReduction out;

  // Vertex-tuple payoff table (the normal-form lift).
  std::vector<int> counts;
  long long tuples = 1;
  for (int n = 0; n < N; ++n) {
    counts.push_back(game.polytope(n).num_vertices());
    tuples *= counts.back();
    if (tuples > 200000) throw SizeGuardExceeded("too many vertex tuples");
  }

  auto tuple_payoff = [&](const std::vector<int>& idx) {
    std::vector<VectorXd> prof;
    for (int n = 0; n < N; ++n) prof.push_back(game.polytope(n).vertex(idx[n]));
    return game.payoff_unchecked(prof);
  };

  ReductionMap rm;
  std::vector<Polytope> targets;
  for (int n = 0; n < N; ++n) {
    long long rows_count = N;
    for (int m = 0; m < N; ++m)
      if (m != n) rows_count *= counts[m];
    MatrixXd M(rows_count, counts[n]);
    // enumerate opponent tuples
    std::vector<int> oppdims;
    for (int m = 0; m < N; ++m)
      if (m != n) oppdims.push_back(counts[m]);
    long long opp_total = 1;
    for (int d : oppdims) opp_total *= d;
    for (long long o = 0; o < opp_total; ++o) {
      std::vector<int> idx(N, 0);
      long long rem = o;
      for (int m = N - 1; m >= 0; --m) {
        if (m == n) continue;
        idx[m] = static_cast<int>(rem % counts[m]);
        rem /= counts[m];
      }
      for (int i = 0; i < counts[n]; ++i) {
        idx[n] = i;
        VectorXd pay = tuple_payoff(idx);
        for (int m = 0; m < N; ++m) M(o * N + m, i) = pay[m];
      }
    }

    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv[0] : 0.0;
    double thr = 1e-9 * std::max(smax, 1.0);
    int rank = 0;
    bool ambiguous = false;
    for (int i = 0; i < sv.size(); ++i) {
      if (sv[i] > thr / 10) ++rank;
      if (sv[i] > thr / 10 && sv[i] < thr * 10) ambiguous = true;
    }
    if (ambiguous)
      out.warnings.push_back("player " + std::to_string(n + 1) +
                             ": rank decision ambiguous, larger rank kept");

    MatrixXd R = svd.matrixV().leftCols(rank);  // row-space basis, |S_n| x r
    AffineMap qn{R.transpose(), VectorXd::Zero(rank)};
    AffineMap jn = detail::least_squares_section(R.transpose(), /*unit_sum_slice=*/true);

    // Image polytope of the per-vertex mixture simplex: q_n of the canonical
    // vertices, which in the original coordinates are the polytope vertices
    // mapped through their mixture representation.  Payoff-wise only the
    // mixture weights matter, so the quotient acts on the weight simplex.
    std::vector<VectorXd> img;
    for (int i = 0; i < counts[n]; ++i) {
      VectorXd e = VectorXd::Zero(counts[n]);
      e[i] = 1.0;
      img.push_back(qn(e));
    }
    targets.push_back(Polytope::from_vertices(img));
    rm.q.push_back(std::move(qn));
    rm.j.push_back(std::move(jn));
  }
  rm.targets = targets;

  // Reduced payoffs: lift back to the vertex-mixture simplex game.
  std::vector<Polytope> simplices;
  std::vector<MultiTensor> tensors;
  for (int n = 0; n < N; ++n) {
    std::vector<VectorXd> versus;
    for (int i = 0; i < counts[n]; ++i) {
      VectorXd e = VectorXd::Zero(counts[n]);
      e[i] = 1.0;
      versus.push_back(e);
    }
    simplices.push_back(Polytope::from_vertices(versus));
  }
  for (int n = 0; n < N; ++n) {
    MultiTensor t(counts);
    std::vector<int> idx(N, 0);
    for (long long f = 0; f < t.size(); ++f) {
      t.unflatten(f, idx);
      t.flat_at(f) = tuple_payoff(idx)[n];
    }
    tensors.push_back(std::move(t));
  }
  auto mixture_game =
      std::make_shared<PolytopeGame>(PolytopeGame::from_tensor(simplices, tensors));

  out.reduced = PolytopeGame::lifted(rm.targets, mixture_game, rm.j);
  out.map = std::move(rm);
  return out;
}

struct StandardizedGame {
  PolytopeGame game;                 // tensor representation over standard polytopes
  std::vector<AffineMap> to_std;     // e_n
  std::vector<AffineMap> from_std;   // e_n^{-1}
};

// Standard polytope form: per-player standardization plus the dense payoff
// tensor obtained by multilinear interpolation at d_n affinely independent
// vertices per player.
inline StandardizedGame standardize_game(const PolytopeGame& game) {
  int N = game.num_players();
  StandardizedGame out;
  std::vector<Polytope> spolys;
  std::vector<MatrixXd> bases;  // d_n x d_n, rows = interpolation points in std coords
  std::vector<std::vector<VectorXd>> orig_pts(N);

  for (int n = 0; n < N; ++n) {
    auto s = game.polytope(n).standardize();
    out.to_std.push_back(s.to_standard);
    out.from_std.push_back(s.from_standard);

    int d = s.standard.ambient_dim();
    // d affinely independent vertices; they exist since dim = d-1
    MatrixXd Y(d, d);
    std::vector<VectorXd> chosen;
    MatrixXd sofar(d, 0);
    for (const auto& v : s.standard.vertices()) {
      MatrixXd trial(d, sofar.cols() + 1);
      trial << sofar, v;
      if (trial.colPivHouseholderQr().rank() == trial.cols()) {
        sofar = trial;
        chosen.push_back(v);
        if (static_cast<int>(chosen.size()) == d) break;
      }
    }
    if (static_cast<int>(chosen.size()) != d)
      throw Error("Standardize", "could not find affinely independent vertex set");
    for (int i = 0; i < d; ++i) Y.row(i) = chosen[i].transpose();
    bases.push_back(Y);
    for (const auto& v : chosen) orig_pts[n].push_back(s.from_standard(v));
    spolys.push_back(std::move(s.standard));
  }

  std::vector<int> dims;
  for (const auto& p : spolys) dims.push_back(p.ambient_dim());

  std::vector<MultiTensor> tensors;
  for (int n = 0; n < N; ++n) {
    MultiTensor W(dims);
    std::vector<int> idx;
    for (long long f = 0; f < W.size(); ++f) {
      W.unflatten(f, idx);
      std::vector<VectorXd> prof;
      for (int m = 0; m < N; ++m) prof.push_back(orig_pts[m][idx[m]]);
      W.flat_at(f) = game.payoff_one(n, prof);
    }
    // solve the interpolation system mode by mode: T = W x_m Y_m^{-1}
    MultiTensor T = W;
    for (int m = 0; m < N; ++m) T = T.mode_multiply(m, bases[m].inverse());
    tensors.push_back(std::move(T));
  }
  out.game = PolytopeGame::from_tensor(spolys, tensors);
  return out;
}

}  // namespace polydeg
