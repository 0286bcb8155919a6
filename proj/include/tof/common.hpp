#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace tof {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class ErrorKind { config, numerical, assumption, domain };

// Every module error carries a kind (mapped to a CLI exit code) and a short
// machine-readable code such as "no-front" or "newton-divergence".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message);
  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

int exit_code(ErrorKind kind);
const char* kind_name(ErrorKind kind);

// Uniform grid on [x_min, x_max] with n nodes.
struct Grid1D {
  double x_min = -100.0;
  double x_max = 100.0;
  int n = 2000;

  static Grid1D make(double x_min, double x_max, int n);
  double h() const { return (x_max - x_min) / (n - 1); }
  double x(int i) const { return x_min + i * h(); }
  bool same_as(const Grid1D& other) const;
};

// Element (v, rho) of the extended phase space. v is stored interleaved:
// v[2i], v[2i+1] are the two real components at node i.
struct ExtendedState {
  Eigen::VectorXd v;
  Vec2 rho = Vec2::Zero();

  ExtendedState() = default;
  explicit ExtendedState(int n) : v(Eigen::VectorXd::Zero(2 * n)) {}

  int nodes() const { return static_cast<int>(v.size() / 2); }
  Vec2 at(int i) const { return Vec2(v[2 * i], v[2 * i + 1]); }
  void set(int i, const Vec2& u) {
    v[2 * i] = u[0];
    v[2 * i + 1] = u[1];
  }

  ExtendedState& operator+=(const ExtendedState& o);
  ExtendedState& operator-=(const ExtendedState& o);
  ExtendedState& operator*=(double a);
};

ExtendedState operator+(ExtendedState a, const ExtendedState& b);
ExtendedState operator-(ExtendedState a, const ExtendedState& b);
ExtendedState operator*(double a, ExtendedState b);

// Least-squares line y = a + b t; r2 is the coefficient of determination.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  double max_residual = 0.0;
};
LinearFit linear_fit(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace tof
