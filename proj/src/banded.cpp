#include "tof/banded.hpp"

#include "tof/common.hpp"

#include <algorithm>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info);
void zgbtrf_(const int* m, const int* n, const int* kl, const int* ku, std::complex<double>* ab, const int* ldab,
             int* ipiv, int* info);
void zgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const std::complex<double>* ab, const int* ldab, const int* ipiv, std::complex<double>* b,
             const int* ldb, int* info);
}

namespace tof {

template <typename T>
BandMatrix<T>::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ab_(static_cast<std::size_t>(2 * kl + ku + 1) * n, T(0)) {}

template <typename T>
T BandMatrix<T>::get(int i, int j) const {
  if (!in_band(i, j)) return T(0);
  return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab()];
}

template <typename T>
void BandMatrix<T>::set(int i, int j, T value) {
  if (!in_band(i, j)) throw Error(ErrorKind::numerical, "band", "entry outside band");
  ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab()] = value;
}

template <typename T>
void BandMatrix<T>::add(int i, int j, T value) {
  if (!in_band(i, j)) throw Error(ErrorKind::numerical, "band", "entry outside band");
  ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab()] += value;
}

template <typename T>
void BandMatrix<T>::multiply(const T* x, T* y) const {
  for (int i = 0; i < n_; ++i) {
    T s(0);
    const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
    for (int j = j0; j <= j1; ++j) s += get(i, j) * x[j];
    y[i] = s;
  }
}

template <typename T>
void BandMatrix<T>::multiply_transpose(const T* x, T* y) const {
  for (int j = 0; j < n_; ++j) {
    T s(0);
    const int i0 = std::max(0, j - ku_), i1 = std::min(n_ - 1, j + kl_);
    for (int i = i0; i <= i1; ++i) s += get(i, j) * x[i];
    y[j] = s;
  }
}

template <typename T>
BandMatrix<T> BandMatrix<T>::shifted(T a, T b) const {
  BandMatrix<T> out = *this;
  for (auto& e : out.ab_) e *= a;
  for (int i = 0; i < n_; ++i) out.add(i, i, b);
  return out;
}

namespace {
void gbtrf(int n, int kl, int ku, double* ab, int ldab, int* ipiv, int* info) {
  dgbtrf_(&n, &n, &kl, &ku, ab, &ldab, ipiv, info);
}
void gbtrf(int n, int kl, int ku, std::complex<double>* ab, int ldab, int* ipiv, int* info) {
  zgbtrf_(&n, &n, &kl, &ku, ab, &ldab, ipiv, info);
}
void gbtrs(char t, int n, int kl, int ku, const double* ab, int ldab, const int* ipiv, double* b, int* info) {
  const int one = 1;
  dgbtrs_(&t, &n, &kl, &ku, &one, ab, &ldab, ipiv, b, &n, info);
}
void gbtrs(char t, int n, int kl, int ku, const std::complex<double>* ab, int ldab, const int* ipiv,
           std::complex<double>* b, int* info) {
  const int one = 1;
  zgbtrs_(&t, &n, &kl, &ku, &one, ab, &ldab, ipiv, b, &n, info);
}
}  // namespace

template <typename T>
BandedLU<T>::BandedLU(BandMatrix<T> a) : a_(std::move(a)), ipiv_(a_.size()) {
  int info = 0;
  gbtrf(a_.size(), a_.kl(), a_.ku(), a_.data(), a_.ldab(), ipiv_.data(), &info);
  if (info > 0) throw Error(ErrorKind::numerical, "lu-singular", "banded LU hit an exactly zero pivot");
  if (info < 0) throw Error(ErrorKind::numerical, "lu-args", "banded LU called with invalid arguments");
}

template <typename T>
void BandedLU<T>::solve(T* b, char trans) const {
  int info = 0;
  gbtrs(trans, a_.size(), a_.kl(), a_.ku(), a_.data(), a_.ldab(), ipiv_.data(), b, &info);
  if (info != 0) throw Error(ErrorKind::numerical, "lu-args", "banded solve failed");
}

template class BandMatrix<double>;
template class BandMatrix<std::complex<double>>;
template class BandedLU<double>;
template class BandedLU<std::complex<double>>;

}  // namespace tof
