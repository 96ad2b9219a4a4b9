#include "cqcode/schur.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace cqcode {

namespace {

std::vector<std::vector<int>> partitions_of(int n, int max_rows) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == max_rows) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

// Murnaghan-Nakayama character chi_lambda(mu) via beta-set rim-hook removal.
long long mn_char(std::vector<int> lambda, std::vector<int> mu,
                  std::map<std::pair<std::vector<int>, std::vector<int>>, long long>& memo) {
  while (!lambda.empty() && lambda.back() == 0) lambda.pop_back();
  while (!mu.empty() && mu.back() == 0) mu.pop_back();
  if (lambda.empty()) return 1;
  const auto key = std::make_pair(lambda, mu);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  const int hook = mu.front();
  std::vector<int> mu_rest(mu.begin() + 1, mu.end());
  const int m = static_cast<int>(lambda.size());
  std::vector<int> beta(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) beta[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(i)] + (m - 1 - i);

  long long acc = 0;
  for (int i = 0; i < m; ++i) {
    const int b = beta[static_cast<std::size_t>(i)];
    const int target = b - hook;
    if (target < 0) continue;
    if (std::find(beta.begin(), beta.end(), target) != beta.end()) continue;
    int height = 0;
    for (int v : beta) {
      if (v > target && v < b) ++height;
    }
    std::vector<int> beta2 = beta;
    beta2[static_cast<std::size_t>(i)] = target;
    std::sort(beta2.begin(), beta2.end(), std::greater<int>());
    std::vector<int> lambda2(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) lambda2[static_cast<std::size_t>(j)] = beta2[static_cast<std::size_t>(j)] - (m - 1 - j);
    while (!lambda2.empty() && lambda2.back() == 0) lambda2.pop_back();
    const long long sign = (height % 2 == 0) ? 1 : -1;
    acc += sign * mn_char(lambda2, mu_rest, memo);
  }
  memo[key] = acc;
  return acc;
}

std::vector<int> cycle_type(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> cycles;
  for (int i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    int len = 0, j = i;
    while (!seen[static_cast<std::size_t>(j)]) {
      seen[static_cast<std::size_t>(j)] = true;
      j = perm[static_cast<std::size_t>(j)];
      ++len;
    }
    cycles.push_back(len);
  }
  std::sort(cycles.begin(), cycles.end(), std::greater<int>());
  return cycles;
}

std::size_t pow_size(int d, int n) {
  std::size_t out = 1;
  for (int i = 0; i < n; ++i) out *= static_cast<std::size_t>(d);
  return out;
}

}  // namespace

IsotypicDecomp isotypic(int n, int d, std::size_t dim_cap) {
  if (n < 1 || d < 2) throw DomainError("isotypic: need n >= 1, d >= 2");
  const std::size_t dim = pow_size(d, n);
  if (dim > dim_cap) throw SizeError("isotypic: d^n exceeds the dimension cap");

  const auto lambdas = partitions_of(n, d);
  std::map<std::pair<std::vector<int>, std::vector<int>>, long long> memo;
  std::vector<int> ones(static_cast<std::size_t>(n), 1);
  std::vector<long long> dims;
  dims.reserve(lambdas.size());
  for (const auto& l : lambdas) dims.push_back(mn_char(l, ones, memo));

  // accumulate (f_lambda / n!) sum_g chi_lambda(g) U_g per block
  std::vector<Eigen::MatrixXd> acc(lambdas.size(),
                                   Eigen::MatrixXd::Zero(static_cast<long>(dim), static_cast<long>(dim)));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  // digit strides: position i has stride d^(n-1-i)
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) stride[static_cast<std::size_t>(i)] = pow_size(d, n - 1 - i);

  do {
    const auto type = cycle_type(perm);
    std::vector<long long> coeff(lambdas.size());
    for (std::size_t li = 0; li < lambdas.size(); ++li) coeff[li] = mn_char(lambdas[li], type, memo);
    // U_g maps |i_0 ... i_{n-1}> to the state with digit i_k moved to slot
    // perm[k]
    for (std::size_t src = 0; src < dim; ++src) {
      std::size_t dst = 0;
      std::size_t rem = src;
      for (int i = 0; i < n; ++i) {
        const std::size_t digit = rem / stride[static_cast<std::size_t>(i)];
        rem %= stride[static_cast<std::size_t>(i)];
        dst += digit * stride[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      }
      for (std::size_t li = 0; li < lambdas.size(); ++li) {
        if (coeff[li] != 0) {
          acc[li](static_cast<long>(dst), static_cast<long>(src)) +=
              static_cast<double>(coeff[li]);
        }
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  double nfact = std::tgamma(n + 1.0);
  IsotypicDecomp decomp;
  decomp.n = n;
  decomp.d = d;
  long total_dim = 0;
  Mat sum = Mat::Zero(static_cast<long>(dim), static_cast<long>(dim));
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    Mat p = (static_cast<double>(dims[li]) / nfact) * acc[li].cast<Cplx>();
    HermMat proj(std::move(p));
    const long bdim = std::lround(proj.trace());
    if (bdim < 0) throw NumericalFailure("isotypic: negative block dimension");
    if (bdim == 0) continue;  // partition not realized for this d
    sum += proj.raw();
    total_dim += bdim;
    decomp.blocks.push_back({lambdas[li], std::move(proj), bdim});
  }
  if (total_dim != static_cast<long>(dim)) {
    throw NumericalFailure("isotypic: block dims sum to " + std::to_string(total_dim));
  }
  if ((sum - Mat::Identity(static_cast<long>(dim), static_cast<long>(dim))).cwiseAbs().maxCoeff() >
      1e-9) {
    throw NumericalFailure("isotypic: completeness violated");
  }
  for (std::size_t i = 0; i < decomp.blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < decomp.blocks.size(); ++j) {
      const double overlap =
          (decomp.blocks[i].projector.raw() * decomp.blocks[j].projector.raw()).cwiseAbs().maxCoeff();
      if (overlap > 1e-9) throw NumericalFailure("isotypic: projectors not orthogonal");
    }
  }
  return decomp;
}

UniversalState rho_univ(int n, int d, std::size_t dim_cap) {
  const IsotypicDecomp dec = isotypic(n, d, dim_cap);
  const std::size_t dim = pow_size(d, n);
  Mat mix = Mat::Zero(static_cast<long>(dim), static_cast<long>(dim));
  const double w = 1.0 / static_cast<double>(dec.blocks.size());
  for (const auto& b : dec.blocks) mix += (w / static_cast<double>(b.block_dim)) * b.projector.raw();
  return {n, d, DensityMat(HermMat(std::move(mix)))};
}

std::vector<std::vector<int>> value_blocks(const std::vector<const std::vector<int>*>& seqs) {
  if (seqs.empty() || seqs.front()->empty()) throw DomainError("value_blocks: empty input");
  const int n = static_cast<int>(seqs.front()->size());
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) {
    std::vector<int> key;
    key.reserve(seqs.size());
    for (const auto* s : seqs) {
      if (static_cast<int>(s->size()) != n) throw ShapeError("value_blocks: length mismatch");
      key.push_back((*s)[static_cast<std::size_t>(i)]);
    }
    auto [it, inserted] = ids.try_emplace(key, static_cast<int>(blocks.size()));
    if (inserted) blocks.emplace_back();
    blocks[static_cast<std::size_t>(it->second)].push_back(i);
  }
  return blocks;
}

DensityMat rho_blocks(const std::vector<std::vector<int>>& blocks, int d, std::size_t dim_cap) {
  int n = 0;
  for (const auto& b : blocks) n += static_cast<int>(b.size());
  {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (const auto& b : blocks)
      for (int p : b) {
        if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
          throw DomainError("rho_blocks: blocks must partition the positions");
        }
        seen[static_cast<std::size_t>(p)] = true;
      }
  }
  const std::size_t dim = pow_size(d, n);
  if (dim > dim_cap) throw SizeError("rho_blocks: d^n exceeds the dimension cap");

  // cache the universal factors per block size
  std::map<int, Mat> univ;
  for (const auto& b : blocks) {
    const int m = static_cast<int>(b.size());
    if (!univ.count(m)) univ[m] = rho_univ(m, d, dim_cap).mat.raw();
  }
  Mat contig = Mat::Identity(1, 1);
  std::vector<int> order;
  for (const auto& b : blocks) {
    const Mat& f = univ[static_cast<int>(b.size())];
    Mat next(contig.rows() * f.rows(), contig.cols() * f.cols());
    for (long i = 0; i < contig.rows(); ++i)
      for (long j = 0; j < contig.cols(); ++j)
        next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = contig(i, j) * f;
    contig = std::move(next);
    order.insert(order.end(), b.begin(), b.end());
  }

  // permute: slot k of the contiguous operator holds position order[k]
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) stride[static_cast<std::size_t>(i)] = pow_size(d, n - 1 - i);
  std::vector<std::size_t> sigma(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::size_t rem = idx, packed = 0;
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      digits[static_cast<std::size_t>(i)] = rem / stride[static_cast<std::size_t>(i)];
      rem %= stride[static_cast<std::size_t>(i)];
    }
    for (int k = 0; k < n; ++k) {
      packed += digits[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] *
                pow_size(d, n - 1 - k);
    }
    sigma[idx] = packed;
  }
  Mat out(static_cast<long>(dim), static_cast<long>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      out(static_cast<long>(i), static_cast<long>(j)) =
          contig(static_cast<long>(sigma[i]), static_cast<long>(sigma[j]));
  return DensityMat(HermMat(std::move(out)));
}

DensityMat rho_of_word(const std::vector<int>& word, int d, std::size_t dim_cap) {
  return rho_blocks(value_blocks({&word}), d, dim_cap);
}

Mat common_eigenbasis(const std::vector<HermMat>& ops, double tol) {
  if (ops.empty()) throw DomainError("common_eigenbasis: no operators");
  const int dim = ops.front().dim();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].dim() != dim) throw ShapeError("common_eigenbasis: dim mismatch");
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double comm =
          (ops[i].raw() * ops[j].raw() - ops[j].raw() * ops[i].raw()).cwiseAbs().maxCoeff();
      if (comm > tol) {
        throw NumericalFailure("common_eigenbasis: commutator norm " + std::to_string(comm));
      }
    }
  }
  Mat basis = Mat::Identity(dim, dim);
  std::vector<std::pair<int, int>> segments{{0, dim}};  // [start, end)
  for (const auto& op : ops) {
    std::vector<std::pair<int, int>> next_segments;
    for (const auto& [start, end] : segments) {
      const int len = end - start;
      if (len == 1) {
        next_segments.emplace_back(start, end);
        continue;
      }
      const Mat sub = basis.middleCols(start, len).adjoint() * op.raw() * basis.middleCols(start, len);
      Eigen::SelfAdjointEigenSolver<Mat> es(HermMat(sub).raw());
      if (es.info() != Eigen::Success) throw NumericalFailure("common_eigenbasis: eigh failed");
      basis.middleCols(start, len) = (basis.middleCols(start, len) * es.eigenvectors()).eval();
      // split at eigenvalue gaps
      int seg_start = start;
      for (int i = 1; i < len; ++i) {
        if (es.eigenvalues()(i) - es.eigenvalues()(i - 1) > 1e-8) {
          next_segments.emplace_back(seg_start, start + i);
          seg_start = start + i;
        }
      }
      next_segments.emplace_back(seg_start, end);
    }
    segments = std::move(next_segments);
  }
  return basis;
}

void validate_povm(const DecoderPOVM& povm) {
  const int dim = povm.dim();
  Mat sum = povm.remainder.raw();
  for (const auto& e : povm.elements) {
    Eigen::SelfAdjointEigenSolver<Mat> es(e.raw(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw NumericalFailure("validate_povm: element not PSD");
    }
    sum += e.raw();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(povm.remainder.raw(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw NumericalFailure("validate_povm: remainder not PSD");
  }
  if ((sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-8) {
    throw NumericalFailure("validate_povm: completeness violated");
  }
}

DecoderPOVM sqrt_measurement(std::vector<HermMat> tests) {
  if (tests.empty()) throw DomainError("sqrt_measurement: no tests");
  const int dim = tests.front().dim();
  Mat s = Mat::Zero(dim, dim);
  for (const auto& t : tests) s += t.raw();
  const EighResult es = eigh(HermMat(s));
  Eigen::VectorXd inv_sqrt(dim);
  for (int i = 0; i < dim; ++i) {
    const double lam = es.eigenvalues[static_cast<std::size_t>(i)];
    inv_sqrt(i) = lam > 1e-10 ? 1.0 / std::sqrt(lam) : 0.0;
  }
  const Mat root = es.eigenvectors * inv_sqrt.asDiagonal() * es.eigenvectors.adjoint();

  DecoderPOVM povm;
  Mat total = Mat::Zero(dim, dim);
  povm.elements.reserve(tests.size());
  for (const auto& t : tests) {
    Mat e = root * t.raw() * root;
    total += e;
    povm.elements.emplace_back(std::move(e));
  }
  povm.remainder = HermMat(Mat::Identity(dim, dim) - total);
  povm.tests = std::move(tests);
  validate_povm(povm);
  return povm;
}

namespace {

// Threshold projector onto the subspace where diag(a) >= c * diag(b) in the
// supplied common eigenbasis; ties within 1e-10 are included.
std::vector<bool> geq_indicator(const Mat& basis, const HermMat& a, double c, const HermMat& b) {
  const int dim = a.dim();
  std::vector<bool> ind(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const auto v = basis.col(i);
    const double av = (v.adjoint() * a.raw() * v).real()(0, 0);
    const double bv = (v.adjoint() * b.raw() * v).real()(0, 0);
    ind[static_cast<std::size_t>(i)] = av >= c * bv - 1e-10;
  }
  return ind;
}

HermMat projector_from(const Mat& basis, const std::vector<bool>& ind) {
  const int dim = static_cast<int>(ind.size());
  Mat p = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (ind[static_cast<std::size_t>(i)]) p += basis.col(i) * basis.col(i).adjoint();
  }
  return HermMat(std::move(p));
}

std::vector<bool> and_ind(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<bool> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

}  // namespace

BcdDecoders build_bcd_decoders(const BCDPair& pair, const PackedCode& code, double slack_a,
                               double slack_b, std::size_t dim_cap) {
  if (code.setting != PackedCode::Setting::superposition) {
    throw DomainError("build_bcd_decoders: code must be a superposition code");
  }
  const int n = code.n;
  // thresholds from the actual codebook rates: C1 = M_B e^{n r_B},
  // C2 = M_A e^{n r_A}; negative slacks are allowed (the finite-n spectra sit
  // well below the asymptotic scale)
  const double m_a = static_cast<double>(code.cloud.size());
  const double m_b = static_cast<double>(code.satellites.front().size());
  const double c1 = m_b * std::exp(n * slack_b);
  const double c2 = m_a * std::exp(n * slack_a);
  const std::size_t dim_y = pow_size(pair.w_y.out_dim, n);
  const std::size_t dim_z = pow_size(pair.w_z.out_dim, n);
  if (dim_y > dim_cap || dim_z > dim_cap) {
    throw SizeError("build_bcd_decoders: output dimension exceeds the cap");
  }
  if (m_a * m_b == 1.0) {  // a single message is always decoded correctly
    BcdDecoders out;
    out.y.elements = {HermMat::identity(static_cast<int>(dim_y))};
    out.y.remainder = HermMat::zero(static_cast<int>(dim_y));
    out.y.tests = out.y.elements;
    out.z.elements = {HermMat::identity(static_cast<int>(dim_z))};
    out.z.remainder = HermMat::zero(static_cast<int>(dim_z));
    out.z.tests = out.z.elements;
    return out;
  }

  // receiver Y
  const int dy = pair.w_y.out_dim;
  const DensityMat univ_y = rho_blocks({[&] {
                                          std::vector<int> all(static_cast<std::size_t>(n));
                                          std::iota(all.begin(), all.end(), 0);
                                          return all;
                                        }()},
                                       dy, dim_cap);
  std::vector<HermMat> tests_y;
  for (std::size_t j = 0; j < code.cloud.size(); ++j) {
    const DensityMat rho_u = rho_blocks(value_blocks({&code.cloud[j]}), dy, dim_cap);
    for (std::size_t k = 0; k < code.satellites[j].size(); ++k) {
      const DensityMat rho_ux =
          rho_blocks(value_blocks({&code.cloud[j], &code.satellites[j][k]}), dy, dim_cap);
      const Mat basis = common_eigenbasis({rho_ux.mat(), rho_u.mat(), univ_y.mat()});
      const auto ind1 = geq_indicator(basis, rho_ux.mat(), c1, rho_u.mat());
      const auto ind2 = geq_indicator(basis, rho_u.mat(), c2, univ_y.mat());
      tests_y.push_back(projector_from(basis, and_ind(ind1, ind2)));
    }
  }

  // receiver Z
  const int dz = pair.w_z.out_dim;
  const DensityMat univ_z = rho_blocks({[&] {
                                          std::vector<int> all(static_cast<std::size_t>(n));
                                          std::iota(all.begin(), all.end(), 0);
                                          return all;
                                        }()},
                                       dz, dim_cap);
  std::vector<HermMat> tests_z;
  for (std::size_t j = 0; j < code.cloud.size(); ++j) {
    const DensityMat rho_u = rho_blocks(value_blocks({&code.cloud[j]}), dz, dim_cap);
    const Mat basis = common_eigenbasis({rho_u.mat(), univ_z.mat()});
    const auto ind = geq_indicator(basis, rho_u.mat(), c2, univ_z.mat());
    tests_z.push_back(projector_from(basis, ind));
  }

  return {sqrt_measurement(std::move(tests_y)), sqrt_measurement(std::move(tests_z))};
}

MacDecoders build_mac_decoders(const MACChannel& mac, const PackedCode& code, double slack_a,
                               double slack_b, MacDecodeMode mode, std::size_t dim_cap) {
  if (code.setting != PackedCode::Setting::mac) {
    throw DomainError("build_mac_decoders: code must be a MAC code");
  }
  const int n = code.n;
  const int d = mac.out_dim;
  // thresholds from the actual codebook rates: C1 = M_B e^{n r_B},
  // C2 = M_A e^{n r_A}; negative slacks are allowed at micro scale
  const double c1 = static_cast<double>(code.b_words.size()) * std::exp(n * slack_b);
  const double c2 = static_cast<double>(code.a_words.size()) * std::exp(n * slack_a);
  if (pow_size(d, n) > dim_cap) {
    throw SizeError("build_mac_decoders: output dimension exceeds the cap");
  }
  if (code.a_words.size() * code.b_words.size() == 1) {
    const int dim = static_cast<int>(pow_size(d, n));
    MacDecoders out;
    out.mode = mode;
    DecoderPOVM full;
    full.elements = {HermMat::identity(dim)};
    full.remainder = HermMat::zero(dim);
    full.tests = full.elements;
    if (mode == MacDecodeMode::separate) {
      out.a = full;
      out.b = full;
    } else {
      out.joint = full;
    }
    return out;
  }

  const DensityMat rho_t = rho_blocks(value_blocks({&code.t_seq}), d, dim_cap);
  std::vector<DensityMat> rho_ta, rho_tb;
  rho_ta.reserve(code.a_words.size());
  for (const auto& a : code.a_words)
    rho_ta.push_back(rho_blocks(value_blocks({&code.t_seq, &a}), d, dim_cap));
  rho_tb.reserve(code.b_words.size());
  for (const auto& b : code.b_words)
    rho_tb.push_back(rho_blocks(value_blocks({&code.t_seq, &b}), d, dim_cap));

  auto rho_tab = [&](std::size_t j, std::size_t k) {
    return rho_blocks(value_blocks({&code.t_seq, &code.a_words[j], &code.b_words[k]}), d, dim_cap);
  };

  MacDecoders out;
  out.mode = mode;
  if (mode == MacDecodeMode::joint || mode == MacDecodeMode::alt) {
    std::vector<HermMat> tests;
    for (std::size_t j = 0; j < code.a_words.size(); ++j) {
      for (std::size_t k = 0; k < code.b_words.size(); ++k) {
        const DensityMat pair_state = rho_tab(j, k);
        const Mat basis = common_eigenbasis({pair_state.mat(), rho_ta[j].mat(), rho_t.mat()});
        const auto ind1 = geq_indicator(basis, pair_state.mat(), c1, rho_ta[j].mat());
        if (mode == MacDecodeMode::joint) {
          const auto ind2 = geq_indicator(basis, rho_ta[j].mat(), c2, rho_t.mat());
          tests.push_back(projector_from(basis, and_ind(ind1, ind2)));
        } else {
          const auto ind3 = geq_indicator(basis, pair_state.mat(), c1 * c2, rho_t.mat());
          tests.push_back(projector_from(basis, and_ind(ind1, ind3)));
        }
      }
    }
    out.joint = sqrt_measurement(std::move(tests));
    return out;
  }

  // separate decoding: B-tests from (1)&(3), A-tests from (4)&(3)
  const int dim = rho_t.dim();
  std::vector<Mat> b_sums(code.b_words.size(), Mat::Zero(dim, dim));
  std::vector<Mat> a_sums(code.a_words.size(), Mat::Zero(dim, dim));
  for (std::size_t j = 0; j < code.a_words.size(); ++j) {
    for (std::size_t k = 0; k < code.b_words.size(); ++k) {
      const DensityMat pair_state = rho_tab(j, k);
      {
        const Mat basis = common_eigenbasis({pair_state.mat(), rho_ta[j].mat(), rho_t.mat()});
        const auto ind1 = geq_indicator(basis, pair_state.mat(), c1, rho_ta[j].mat());
        const auto ind3 = geq_indicator(basis, pair_state.mat(), c1 * c2, rho_t.mat());
        b_sums[k] += projector_from(basis, and_ind(ind1, ind3)).raw();
      }
      {
        const Mat basis = common_eigenbasis({pair_state.mat(), rho_tb[k].mat(), rho_t.mat()});
        const auto ind4 = geq_indicator(basis, pair_state.mat(), c2, rho_tb[k].mat());
        const auto ind3 = geq_indicator(basis, pair_state.mat(), c1 * c2, rho_t.mat());
        a_sums[j] += projector_from(basis, and_ind(ind4, ind3)).raw();
      }
    }
  }
  std::vector<HermMat> a_tests, b_tests;
  for (auto& m : a_sums) a_tests.emplace_back(std::move(m));
  for (auto& m : b_sums) b_tests.emplace_back(std::move(m));
  out.a = sqrt_measurement(std::move(a_tests));
  out.b = sqrt_measurement(std::move(b_tests));
  return out;
}

DecoderPOVM convert_separate_to_joint(const DecoderPOVM& povm_a, const DecoderPOVM& povm_b) {
  if (povm_a.dim() != povm_b.dim()) throw ShapeError("convert_separate_to_joint: dim mismatch");
  const int dim = povm_a.dim();

  std::vector<Mat> b_roots;
  b_roots.reserve(povm_b.elements.size());
  auto root_of = [&](const HermMat& e) {
    const EighResult es = eigh(e);
    Eigen::VectorXd r(dim);
    for (int i = 0; i < dim; ++i) {
      r(i) = es.eigenvalues[static_cast<std::size_t>(i)] > 0.0
                 ? std::sqrt(es.eigenvalues[static_cast<std::size_t>(i)])
                 : 0.0;
    }
    return Mat(es.eigenvectors * r.asDiagonal() * es.eigenvectors.adjoint());
  };
  for (const auto& e : povm_b.elements) b_roots.push_back(root_of(e));

  DecoderPOVM out;
  Mat total = Mat::Zero(dim, dim);
  for (std::size_t j = 0; j < povm_a.elements.size(); ++j) {
    for (std::size_t k = 0; k < povm_b.elements.size(); ++k) {
      Mat e = b_roots[k] * povm_a.elements[j].raw() * b_roots[k];
      total += e;
      out.elements.emplace_back(std::move(e));
    }
  }
  out.remainder = HermMat(Mat::Identity(dim, dim) - total);
  validate_povm(out);
  return out;
}

DensityMat channel_word_state(const CQChannel& w, const std::vector<int>& word,
                              std::size_t dim_cap) {
  if (word.empty()) throw DomainError("channel_word_state: empty word");
  DensityMat state = w.at(word.front());
  for (std::size_t i = 1; i < word.size(); ++i) state = tensor(state, w.at(word[i]), dim_cap);
  return state;
}

DensityMat mac_word_state(const MACChannel& w, const std::vector<int>& a_word,
                          const std::vector<int>& b_word, std::size_t dim_cap) {
  if (a_word.size() != b_word.size() || a_word.empty()) {
    throw ShapeError("mac_word_state: word length mismatch");
  }
  DensityMat state = w.at(a_word.front(), b_word.front());
  for (std::size_t i = 1; i < a_word.size(); ++i) {
    state = tensor(state, w.at(a_word[i], b_word[i]), dim_cap);
  }
  return state;
}

double error_probability(const std::vector<DensityMat>& message_states, const DecoderPOVM& povm) {
  if (message_states.size() != povm.elements.size()) {
    throw ShapeError("error_probability: message count != POVM size");
  }
  double correct = 0.0;
  for (std::size_t m = 0; m < message_states.size(); ++m) {
    if (message_states[m].dim() != povm.dim()) throw ShapeError("error_probability: dim mismatch");
    correct += (message_states[m].raw() * povm.elements[m].raw()).trace().real();
  }
  const double eps = 1.0 - correct / static_cast<double>(message_states.size());
  return std::clamp(eps, 0.0, 1.0);
}

BcdErrors bcd_error_probability(const BCDPair& pair, const PackedCode& code,
                                const BcdDecoders& dec, std::size_t dim_cap) {
  std::vector<DensityMat> states_y, states_z;
  for (std::size_t j = 0; j < code.cloud.size(); ++j) {
    for (const auto& x : code.satellites[j]) {
      states_y.push_back(channel_word_state(pair.w_y, x, dim_cap));
      states_z.push_back(channel_word_state(pair.w_z, x, dim_cap));
    }
  }
  BcdErrors out;
  out.eps_y = error_probability(states_y, dec.y);
  // receiver Z decodes j only: average over satellites per cloud
  double correct = 0.0;
  std::size_t idx = 0;
  for (std::size_t j = 0; j < code.cloud.size(); ++j) {
    for (std::size_t k = 0; k < code.satellites[j].size(); ++k, ++idx) {
      correct += (states_z[idx].raw() * dec.z.elements[j].raw()).trace().real();
    }
  }
  out.eps_z = std::clamp(1.0 - correct / static_cast<double>(states_z.size()), 0.0, 1.0);
  return out;
}

double mac_error_probability(const MACChannel& mac, const PackedCode& code,
                             const DecoderPOVM& joint, std::size_t dim_cap) {
  std::vector<DensityMat> states;
  for (const auto& a : code.a_words)
    for (const auto& b : code.b_words) states.push_back(mac_word_state(mac, a, b, dim_cap));
  return error_probability(states, joint);
}

SeparateErrors mac_error_probability_separate(const MACChannel& mac, const PackedCode& code,
                                              const DecoderPOVM& povm_a,
                                              const DecoderPOVM& povm_b, std::size_t dim_cap) {
  SeparateErrors out;
  double correct_a = 0.0, correct_b = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < code.a_words.size(); ++j) {
    for (std::size_t k = 0; k < code.b_words.size(); ++k, ++count) {
      const DensityMat s = mac_word_state(mac, code.a_words[j], code.b_words[k], dim_cap);
      correct_a += (s.raw() * povm_a.elements[j].raw()).trace().real();
      correct_b += (s.raw() * povm_b.elements[k].raw()).trace().real();
    }
  }
  out.eps_a = std::clamp(1.0 - correct_a / static_cast<double>(count), 0.0, 1.0);
  out.eps_b = std::clamp(1.0 - correct_b / static_cast<double>(count), 0.0, 1.0);
  return out;
}

HnTerms hn_terms(const std::vector<DensityMat>& message_states,
                 const std::vector<HermMat>& tests) {
  if (message_states.size() != tests.size()) throw ShapeError("hn_terms: size mismatch");
  HnTerms out;
  const int dim = tests.front().dim();
  Mat test_sum = Mat::Zero(dim, dim);
  for (const auto& t : tests) test_sum += t.raw();
  for (std::size_t m = 0; m < message_states.size(); ++m) {
    const Mat& rho = message_states[m].raw();
    out.miss += 1.0 - (rho * tests[m].raw()).trace().real();
    out.false_alarm += (rho * (test_sum - tests[m].raw())).trace().real();
  }
  out.miss /= static_cast<double>(message_states.size());
  out.false_alarm /= static_cast<double>(message_states.size());
  return out;
}

}  // namespace cqcode
