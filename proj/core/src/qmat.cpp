#include "cqcode/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cqcode {

HermMat::HermMat(Mat m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("HermMat: matrix must be square");
  }
  if (m.size() == 0) {  // empty placeholder
    m_ = std::move(m);
    return;
  }
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermTol) {
    throw DomainError("HermMat: not Hermitian, ||M - M^dag||_max = " + std::to_string(dev));
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

HermMat HermMat::identity(int dim) { return HermMat(Mat::Identity(dim, dim)); }

HermMat HermMat::zero(int dim) { return HermMat(Mat::Zero(dim, dim)); }

HermMat HermMat::diag(const std::vector<double>& entries) {
  Mat m = Mat::Zero(static_cast<int>(entries.size()), static_cast<int>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return HermMat(m);
}

HermMat HermMat::operator+(const HermMat& o) const {
  if (dim() != o.dim()) throw ShapeError("HermMat::operator+: dim mismatch");
  return HermMat(m_ + o.m_);
}

HermMat HermMat::operator-(const HermMat& o) const {
  if (dim() != o.dim()) throw ShapeError("HermMat::operator-: dim mismatch");
  return HermMat(m_ - o.m_);
}

HermMat HermMat::scaled(double c) const { return HermMat(c * m_); }

DensityMat::DensityMat(HermMat m) : mat_(std::move(m)) {
  const double tr = mat_.trace();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw DomainError("DensityMat: trace deviates from 1 by " + std::to_string(tr - 1.0));
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(mat_.raw(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("DensityMat: eigensolver failed");
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPsdClipTol) {
    throw DomainError("DensityMat: min eigenvalue " + std::to_string(min_eig));
  }
}

EighResult eigh(const HermMat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m.raw());
  if (es.info() != Eigen::Success) throw NumericalFailure("eigh: eigensolver did not converge");
  EighResult r;
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m.dim());
  r.eigenvectors = es.eigenvectors();
  return r;
}

HermMat mat_pow(const HermMat& m, double alpha) {
  const EighResult e = eigh(m);
  Eigen::VectorXd powered(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    double lam = e.eigenvalues[i];
    if (lam < -kPsdClipTol) {
      throw DomainError("mat_pow: eigenvalue " + std::to_string(lam) + " below -1e-9");
    }
    if (lam <= kSupportTol) {
      powered(i) = 0.0;  // 0^alpha := 0, also for negative alpha
    } else {
      powered(i) = std::pow(lam, alpha);
    }
  }
  Mat out = e.eigenvectors * powered.asDiagonal() * e.eigenvectors.adjoint();
  return HermMat(std::move(out));
}

HermMat tensor(const HermMat& a, const HermMat& b, std::size_t dim_cap) {
  const std::size_t dim = static_cast<std::size_t>(a.dim()) * static_cast<std::size_t>(b.dim());
  if (dim > dim_cap) {
    throw SizeError("tensor: dimension " + std::to_string(dim) + " exceeds cap " +
                    std::to_string(dim_cap));
  }
  const int da = a.dim(), db = b.dim();
  Mat out(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a.raw()(i, j) * b.raw();
  return HermMat(std::move(out));
}

DensityMat tensor(const DensityMat& a, const DensityMat& b, std::size_t dim_cap) {
  return DensityMat(tensor(a.mat(), b.mat(), dim_cap));
}

OpLeqResult op_leq(const HermMat& a, const HermMat& b, double tol) {
  if (a.dim() != b.dim()) throw ShapeError("op_leq: dim mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(b.raw() - a.raw(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("op_leq: eigensolver failed");
  const double min_eig = es.eigenvalues().minCoeff();
  return {min_eig >= -tol, min_eig};
}

double log_trace_power(const HermMat& a, double p) {
  const EighResult e = eigh(a);
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(e.eigenvalues.size());
  for (double lam : e.eigenvalues) {
    if (lam < -kPsdClipTol) {
      throw DomainError("log_trace_power: eigenvalue " + std::to_string(lam) + " below -1e-9");
    }
    if (lam <= kSupportTol) continue;
    const double l = p * std::log(lam);
    logs.push_back(l);
    max_log = std::max(max_log, l);
  }
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - max_log);
  return max_log + std::log(acc);
}

}  // namespace cqcode
