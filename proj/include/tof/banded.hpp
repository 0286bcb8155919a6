#pragma once

#include <complex>
#include <vector>

namespace tof {

// Square band matrix in LAPACK general-band storage, with room for the
// fill-in produced by partial pivoting. Entries outside the band are zero.
template <typename T>
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
  T get(int i, int j) const;
  void set(int i, int j, T value);
  void add(int i, int j, T value);
  // y = A x
  void multiply(const T* x, T* y) const;
  // y = A^T x
  void multiply_transpose(const T* x, T* y) const;
  // returns a copy with a*A + b*I
  BandMatrix shifted(T a, T b) const;

  T* data() { return ab_.data(); }
  const T* data() const { return ab_.data(); }
  int ldab() const { return 2 * kl_ + ku_ + 1; }

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<T> ab_;
};

// LU factorization with partial pivoting (LAPACK xGBTRF / xGBTRS).
template <typename T>
class BandedLU {
 public:
  BandedLU() = default;
  // Throws Error(numerical, "lu-singular") on an exactly zero pivot.
  explicit BandedLU(BandMatrix<T> a);

  int size() const { return a_.size(); }
  // Solves in place; trans is 'N', 'T' or 'C'.
  void solve(T* b, char trans = 'N') const;
  void solve(std::vector<T>& b, char trans = 'N') const { solve(b.data(), trans); }

 private:
  BandMatrix<T> a_;
  std::vector<int> ipiv_;
};

using RealBand = BandMatrix<double>;
using ComplexBand = BandMatrix<std::complex<double>>;

}  // namespace tof
