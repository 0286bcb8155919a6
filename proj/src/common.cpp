#include "tof/common.hpp"

#include <cmath>

namespace tof {

Error::Error(ErrorKind kind, std::string code, const std::string& message)
    : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::assumption: return 4;
    case ErrorKind::numerical:
    case ErrorKind::domain: return 3;
  }
  return 3;
}

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::assumption: return "assumption";
    case ErrorKind::domain: return "domain";
  }
  return "numerical";
}

Grid1D Grid1D::make(double x_min, double x_max, int n) {
  if (n < 3) throw Error(ErrorKind::config, "grid", "grid needs n >= 3");
  if (!(x_max > x_min)) throw Error(ErrorKind::config, "grid", "grid needs x_max > x_min");
  return Grid1D{x_min, x_max, n};
}

bool Grid1D::same_as(const Grid1D& o) const {
  return n == o.n && x_min == o.x_min && x_max == o.x_max;
}

ExtendedState& ExtendedState::operator+=(const ExtendedState& o) {
  v += o.v;
  rho += o.rho;
  return *this;
}
ExtendedState& ExtendedState::operator-=(const ExtendedState& o) {
  v -= o.v;
  rho -= o.rho;
  return *this;
}
ExtendedState& ExtendedState::operator*=(double a) {
  v *= a;
  rho *= a;
  return *this;
}
ExtendedState operator+(ExtendedState a, const ExtendedState& b) { return a += b; }
ExtendedState operator-(ExtendedState a, const ExtendedState& b) { return a -= b; }
ExtendedState operator*(double a, ExtendedState b) { return b *= a; }

LinearFit linear_fit(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t m = t.size();
  if (m < 2 || y.size() != m) throw Error(ErrorKind::numerical, "fit", "linear fit needs at least two points");
  double st = 0, sy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    st += t[k];
    sy += y[k];
  }
  const double tm = st / m, ym = sy / m;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    stt += (t[k] - tm) * (t[k] - tm);
    sty += (t[k] - tm) * (y[k] - ym);
    syy += (y[k] - ym) * (y[k] - ym);
  }
  LinearFit f;
  f.slope = stt > 0 ? sty / stt : 0.0;
  f.intercept = ym - f.slope * tm;
  double sse = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double r = y[k] - f.intercept - f.slope * t[k];
    sse += r * r;
    f.max_residual = std::max(f.max_residual, std::abs(r));
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  return f;
}

}  // namespace tof
