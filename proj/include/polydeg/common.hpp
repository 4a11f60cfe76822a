#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace polydeg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Errors carry a machine-readable class name; the CLI prints them as
// "ERROR <class>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(std::string cls, const std::string& detail)
      : std::runtime_error(cls + ": " + detail), class_(std::move(cls)) {}
  const std::string& error_class() const { return class_; }

 private:
  std::string class_;
};

struct SyntaxError : Error {
  explicit SyntaxError(const std::string& d) : Error("SyntaxError", d) {}
};
struct DanglingReference : Error {
  explicit DanglingReference(const std::string& d) : Error("DanglingReference", d) {}
};
struct DuplicateId : Error {
  explicit DuplicateId(const std::string& d) : Error("DuplicateId", d) {}
};
struct NatureProbabilityError : Error {
  explicit NatureProbabilityError(const std::string& d) : Error("NatureProbability", d) {}
};
struct PerfectRecallViolation : Error {
  explicit PerfectRecallViolation(const std::string& d) : Error("PerfectRecallViolation", d) {}
};
struct SizeGuardExceeded : Error {
  explicit SizeGuardExceeded(const std::string& d) : Error("SizeGuard", d) {}
};
struct OnCellBoundary : Error {
  explicit OnCellBoundary(const std::string& d) : Error("OnCellBoundary", d) {}
};
struct NotInterior : Error {
  explicit NotInterior(const std::string& d) : Error("NotInterior", d) {}
};
struct InvalidReduction : Error {
  explicit InvalidReduction(const std::string& d) : Error("InvalidReduction", d) {}
};
struct Inconclusive : Error {
  explicit Inconclusive(const std::string& d) : Error("Inconclusive", d) {}
};
struct NeighborhoodInvalid : Error {
  explicit NeighborhoodInvalid(const std::string& d) : Error("NeighborhoodInvalid", d) {}
};
struct OutsidePolytope : Error {
  explicit OutsidePolytope(const std::string& d) : Error("OutsidePolytope", d) {}
};

// An affine map x -> A x + b together with its target dimension.
struct AffineMap {
  MatrixXd A;
  VectorXd b;

  VectorXd operator()(const VectorXd& x) const { return A * x + b; }
  int in_dim() const { return static_cast<int>(A.cols()); }
  int out_dim() const { return static_cast<int>(A.rows()); }

  static AffineMap identity(int dim) {
    return {MatrixXd::Identity(dim, dim), VectorXd::Zero(dim)};
  }
  // this after other: x -> this(other(x))
  AffineMap compose(const AffineMap& other) const {
    return {A * other.A, A * other.b + b};
  }
};

// Deterministic RNG stream; every randomized routine takes an explicit seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen_);
  }
  double normal() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(gen_);
  }
  VectorXd normal_vector(int n) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  // Uniform over the solid Euclidean ball of the given radius.
  VectorXd ball(int n, double radius) {
    VectorXd v = normal_vector(n);
    double nrm = v.norm();
    if (nrm < 1e-300) return VectorXd::Zero(n);
    double u = uniform(0.0, 1.0);
    return v * (radius * std::pow(u, 1.0 / n) / nrm);
  }
  std::uint64_t integer() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

inline VectorXd concat(const std::vector<VectorXd>& parts) {
  int n = 0;
  for (const auto& p : parts) n += static_cast<int>(p.size());
  VectorXd out(n);
  int at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += static_cast<int>(p.size());
  }
  return out;
}

inline std::vector<VectorXd> split(const VectorXd& x, const std::vector<int>& dims) {
  std::vector<VectorXd> parts;
  int at = 0;
  for (int d : dims) {
    parts.push_back(x.segment(at, d));
    at += d;
  }
  return parts;
}

inline double profile_distance(const std::vector<VectorXd>& a, const std::vector<VectorXd>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm();
  return std::sqrt(s);
}

}  // namespace polydeg
