#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cqcode/errors.hpp"

namespace cqcode {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double kHermTol = 1e-10;       // allowed ||M - M^dag||_max at construction
inline constexpr double kPsdClipTol = 1e-9;     // eigenvalues above -kPsdClipTol count as zero
inline constexpr double kSupportTol = 1e-12;    // eigenvalues below this are off-support
inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 14;

// Dense complex Hermitian matrix. Construction symmetrizes and rejects inputs
// further than kHermTol from Hermitian.
class HermMat {
 public:
  explicit HermMat(Mat m);

  static HermMat identity(int dim);
  static HermMat zero(int dim);
  static HermMat diag(const std::vector<double>& entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& raw() const { return m_; }

  double trace() const { return m_.trace().real(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

  HermMat operator+(const HermMat& o) const;
  HermMat operator-(const HermMat& o) const;
  HermMat scaled(double c) const;

 private:
  Mat m_;
};

// Hermitian, PSD up to -1e-9, unit trace up to 1e-9.
class DensityMat {
 public:
  explicit DensityMat(HermMat m);

  int dim() const { return mat_.dim(); }
  const HermMat& mat() const { return mat_; }
  const Mat& raw() const { return mat_.raw(); }

 private:
  HermMat mat_;
};

struct EighResult {
  std::vector<double> eigenvalues;  // ascending
  Mat eigenvectors;                 // columns, unitary
};

// Eigendecomposition of a Hermitian matrix; m = V diag(lambda) V^dag.
EighResult eigh(const HermMat& m);

// Spectral power on the support: V diag(lambda_i^alpha) V^dag with 0^alpha := 0
// for every alpha (including negative). Eigenvalues in [-1e-9, kSupportTol]
// are treated as zero; anything below -1e-9 raises DomainError.
HermMat mat_pow(const HermMat& m, double alpha);

// Kronecker product, index = i_a * dim(b) + i_b. Dimension above dim_cap
// raises SizeError.
HermMat tensor(const HermMat& a, const HermMat& b, std::size_t dim_cap = kDefaultDimCap);
DensityMat tensor(const DensityMat& a, const DensityMat& b, std::size_t dim_cap = kDefaultDimCap);

struct OpLeqResult {
  bool holds;
  double min_eig;  // smallest eigenvalue of b - a
};

// Operator order check: a <= b + tol, reported via the minimum eigenvalue of b - a.
OpLeqResult op_leq(const HermMat& a, const HermMat& b, double tol);

// log Tr A^p for a PSD matrix A, evaluated in the log domain so that very
// large/small powers neither overflow nor underflow. Off-support eigenvalues
// contribute nothing; returns -inf when A has empty support.
double log_trace_power(const HermMat& a, double p);

}  // namespace cqcode
