#include "cqcode/infomeasure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cqcode {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453;
}  // namespace

bool Measure::infinite() const { return std::isinf(value); }

double Measure::in(Unit target) const {
  if (target == unit) return value;
  return target == Unit::bits ? value / kLn2 : value * kLn2;
}

Dist::Dist(std::vector<double> p) : probs(std::move(p)) {
  if (probs.empty()) throw DomainError("Dist: empty");
  double sum = 0.0;
  for (double& v : probs) {
    if (v < -1e-12) throw DomainError("Dist: negative probability " + std::to_string(v));
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("Dist: sums to " + std::to_string(sum));
}

Dist Dist::uniform(int size) {
  return Dist(std::vector<double>(static_cast<std::size_t>(size), 1.0 / size));
}

MarkovTriple::MarkovTriple(Dist t, std::vector<Dist> a_rows, std::vector<Dist> b_rows)
    : p_t(std::move(t)), p_a_given_t(std::move(a_rows)), p_b_given_t(std::move(b_rows)) {
  if (p_a_given_t.size() != static_cast<std::size_t>(p_t.size()) ||
      p_b_given_t.size() != static_cast<std::size_t>(p_t.size())) {
    throw ShapeError("MarkovTriple: conditional row count != |T|");
  }
  for (const auto& r : p_a_given_t)
    if (r.size() != p_a_given_t.front().size()) throw ShapeError("MarkovTriple: ragged A rows");
  for (const auto& r : p_b_given_t)
    if (r.size() != p_b_given_t.front().size()) throw ShapeError("MarkovTriple: ragged B rows");
}

MarkovTriple MarkovTriple::from_ux(Dist p_u, std::vector<Dist> p_x_given_u) {
  std::vector<Dist> b_rows(static_cast<std::size_t>(p_u.size()), Dist({1.0}));
  return MarkovTriple(std::move(p_u), std::move(p_x_given_u), std::move(b_rows));
}

MarkovTriple MarkovTriple::product(const Dist& p_a, const Dist& p_b) {
  return MarkovTriple(Dist({1.0}), {p_a}, {p_b});
}

Measure vn_entropy(const DensityMat& rho) {
  const EighResult e = eigh(rho.mat());
  double h = 0.0;
  for (double lam : e.eigenvalues) {
    if (lam > kSupportTol) h -= lam * std::log(lam);
  }
  return {h, Unit::nats};
}

namespace {

DensityMat ensemble_average(const std::vector<std::pair<double, DensityMat>>& ens) {
  Mat avg = Mat::Zero(ens.front().second.dim(), ens.front().second.dim());
  for (const auto& [p, w] : ens) avg += p * w.raw();
  return DensityMat(HermMat(std::move(avg)));
}

double holevo_nats(const std::vector<std::pair<double, DensityMat>>& ens) {
  double value = vn_entropy(ensemble_average(ens)).value;
  for (const auto& [p, w] : ens) {
    if (p > 0.0) value -= p * vn_entropy(w).value;
  }
  return std::max(value, 0.0);
}

}  // namespace

Measure holevo_mi(const Dist& p, const CQChannel& w) {
  if (p.size() != w.input_size) throw ShapeError("holevo_mi: |X| mismatch");
  std::vector<std::pair<double, DensityMat>> ens;
  ens.reserve(static_cast<std::size_t>(p.size()));
  for (int x = 0; x < p.size(); ++x) ens.emplace_back(p[x], w.at(x));
  return {holevo_nats(ens), Unit::nats};
}

Measure holevo_value(const CondEnsemble& e) {
  double acc = 0.0;
  for (std::size_t u = 0; u < e.weights.size(); ++u) {
    if (e.weights[u] > 0.0) acc += e.weights[u] * holevo_nats(e.blocks[u]);
  }
  return {acc, Unit::nats};
}

CondEnsemble ensemble_common(const MarkovTriple& p_ux, const CQChannel& w) {
  if (p_ux.a_size() != w.input_size) throw ShapeError("ensemble_common: |X| mismatch");
  CondEnsemble e;
  e.weights = {1.0};
  e.blocks.resize(1);
  for (int u = 0; u < p_ux.t_size(); ++u) {
    Mat avg = Mat::Zero(w.out_dim, w.out_dim);
    for (int x = 0; x < w.input_size; ++x) avg += p_ux.p_a_given_t[u][x] * w.at(x).raw();
    e.blocks[0].emplace_back(p_ux.p_t[u], DensityMat(HermMat(std::move(avg))));
  }
  return e;
}

CondEnsemble ensemble_private(const MarkovTriple& p_ux, const CQChannel& w) {
  if (p_ux.a_size() != w.input_size) throw ShapeError("ensemble_private: |X| mismatch");
  CondEnsemble e;
  for (int u = 0; u < p_ux.t_size(); ++u) {
    e.weights.push_back(p_ux.p_t[u]);
    std::vector<std::pair<double, DensityMat>> block;
    for (int x = 0; x < w.input_size; ++x) block.emplace_back(p_ux.p_a_given_t[u][x], w.at(x));
    e.blocks.push_back(std::move(block));
  }
  return e;
}

CondEnsemble ensemble_marginal(const MarkovTriple& p_ux, const CQChannel& w) {
  if (p_ux.a_size() != w.input_size) throw ShapeError("ensemble_marginal: |X| mismatch");
  std::vector<double> marginal(static_cast<std::size_t>(w.input_size), 0.0);
  for (int u = 0; u < p_ux.t_size(); ++u)
    for (int x = 0; x < w.input_size; ++x)
      marginal[static_cast<std::size_t>(x)] += p_ux.p_t[u] * p_ux.p_a_given_t[u][x];
  CondEnsemble e;
  e.weights = {1.0};
  e.blocks.resize(1);
  for (int x = 0; x < w.input_size; ++x)
    e.blocks[0].emplace_back(marginal[static_cast<std::size_t>(x)], w.at(x));
  return e;
}

CondEnsemble ensemble_mac(const MACChannel& w, const MarkovTriple& joint, MacInfo which) {
  if (joint.a_size() != w.a_size || joint.b_size() != w.b_size) {
    throw ShapeError("ensemble_mac: alphabet mismatch");
  }
  CondEnsemble e;
  const int ts = joint.t_size(), as = w.a_size, bs = w.b_size;

  auto avg_over_b = [&](int t, int a) {
    Mat m = Mat::Zero(w.out_dim, w.out_dim);
    for (int b = 0; b < bs; ++b) m += joint.p_b_given_t[t][b] * w.at(a, b).raw();
    return DensityMat(HermMat(std::move(m)));
  };
  auto avg_over_a = [&](int t, int b) {
    Mat m = Mat::Zero(w.out_dim, w.out_dim);
    for (int a = 0; a < as; ++a) m += joint.p_a_given_t[t][a] * w.at(a, b).raw();
    return DensityMat(HermMat(std::move(m)));
  };

  switch (which) {
    case MacInfo::a_given_t:
      for (int t = 0; t < ts; ++t) {
        e.weights.push_back(joint.p_t[t]);
        std::vector<std::pair<double, DensityMat>> block;
        for (int a = 0; a < as; ++a) block.emplace_back(joint.p_a_given_t[t][a], avg_over_b(t, a));
        e.blocks.push_back(std::move(block));
      }
      break;
    case MacInfo::b_given_t:
      for (int t = 0; t < ts; ++t) {
        e.weights.push_back(joint.p_t[t]);
        std::vector<std::pair<double, DensityMat>> block;
        for (int b = 0; b < bs; ++b) block.emplace_back(joint.p_b_given_t[t][b], avg_over_a(t, b));
        e.blocks.push_back(std::move(block));
      }
      break;
    case MacInfo::b_given_at:
      for (int t = 0; t < ts; ++t)
        for (int a = 0; a < as; ++a) {
          e.weights.push_back(joint.p_t[t] * joint.p_a_given_t[t][a]);
          std::vector<std::pair<double, DensityMat>> block;
          for (int b = 0; b < bs; ++b) block.emplace_back(joint.p_b_given_t[t][b], w.at(a, b));
          e.blocks.push_back(std::move(block));
        }
      break;
    case MacInfo::a_given_bt:
      for (int t = 0; t < ts; ++t)
        for (int b = 0; b < bs; ++b) {
          e.weights.push_back(joint.p_t[t] * joint.p_b_given_t[t][b]);
          std::vector<std::pair<double, DensityMat>> block;
          for (int a = 0; a < as; ++a) block.emplace_back(joint.p_a_given_t[t][a], w.at(a, b));
          e.blocks.push_back(std::move(block));
        }
      break;
    case MacInfo::ab_given_t:
      for (int t = 0; t < ts; ++t) {
        e.weights.push_back(joint.p_t[t]);
        std::vector<std::pair<double, DensityMat>> block;
        for (int a = 0; a < as; ++a)
          for (int b = 0; b < bs; ++b)
            block.emplace_back(joint.p_a_given_t[t][a] * joint.p_b_given_t[t][b], w.at(a, b));
        e.blocks.push_back(std::move(block));
      }
      break;
  }
  return e;
}

Measure cond_mi(const MarkovTriple& joint, const CQChannel& w) {
  return holevo_value(ensemble_private(joint, w));
}

Measure cond_mi(const MarkovTriple& joint, const MACChannel& w) {
  return holevo_value(ensemble_mac(w, joint, MacInfo::b_given_at));
}

Measure mac_mi(const MACChannel& w, const MarkovTriple& joint, MacInfo which) {
  return holevo_value(ensemble_mac(w, joint, which));
}

Measure mac_renyi_mi(const MACChannel& w, const MarkovTriple& joint, MacInfo which,
                     double alpha) {
  return renyi_value(ensemble_mac(w, joint, which), alpha);
}

Measure petz_renyi_div(const DensityMat& rho, const DensityMat& sigma, double alpha) {
  if (rho.dim() != sigma.dim()) throw ShapeError("petz_renyi_div: dim mismatch");
  if (alpha <= 0.0 || alpha == 1.0) throw DomainError("petz_renyi_div: alpha must be in (0,1)u(1,inf)");
  if (alpha > 1.0) {
    // +inf when supp(rho) escapes supp(sigma)
    const HermMat ker = HermMat::identity(sigma.dim()) - mat_pow(sigma.mat(), 0.0);
    const double leak = (rho.raw() * ker.raw()).trace().real();
    if (leak > 1e-12) return {kInf, Unit::nats};
  }
  const HermMat ra = mat_pow(rho.mat(), alpha);
  const HermMat sb = mat_pow(sigma.mat(), 1.0 - alpha);
  const double t = (ra.raw() * sb.raw()).trace().real();
  if (t <= 0.0) return {kInf, Unit::nats};
  return {std::log(t) / (alpha - 1.0), Unit::nats};
}

namespace {

// alpha * log( sum_u w_u Tr (sum_x p W^alpha)^(1/alpha) ), stabilized as
// max_u z_u + alpha * log sum exp((z_u - z_max)/alpha) with
// z_u = alpha log w_u + alpha log_trace_power(A_u, 1/alpha).
// At alpha = 0 this degenerates to max_u log lambda_max(sum_x p Pi_x).
double alpha_log_term(const CondEnsemble& e, double alpha) {
  std::vector<double> z;
  z.reserve(e.weights.size());
  if (alpha == 0.0) {
    for (std::size_t u = 0; u < e.weights.size(); ++u) {
      if (e.weights[u] <= 0.0) continue;
      Mat acc = Mat::Zero(e.dim(), e.dim());
      for (const auto& [p, w] : e.blocks[u]) {
        if (p > 0.0) acc += p * mat_pow(w.mat(), 0.0).raw();
      }
      Eigen::SelfAdjointEigenSolver<Mat> es(acc, Eigen::EigenvaluesOnly);
      const double lmax = es.eigenvalues().maxCoeff();
      if (lmax > 0.0) z.push_back(std::log(lmax));
    }
    if (z.empty()) return -kInf;
    return *std::max_element(z.begin(), z.end());
  }
  for (std::size_t u = 0; u < e.weights.size(); ++u) {
    if (e.weights[u] <= 0.0) continue;
    Mat acc = Mat::Zero(e.dim(), e.dim());
    for (const auto& [p, w] : e.blocks[u]) {
      if (p > 0.0) acc += p * mat_pow(w.mat(), alpha).raw();
    }
    const double ltp = log_trace_power(HermMat(std::move(acc)), 1.0 / alpha);
    if (std::isinf(ltp)) continue;
    z.push_back(alpha * std::log(e.weights[u]) + alpha * ltp);
  }
  if (z.empty()) return -kInf;
  const double zmax = *std::max_element(z.begin(), z.end());
  double acc = 0.0;
  for (double v : z) acc += std::exp((v - zmax) / alpha);
  return zmax + alpha * std::log(acc);
}

}  // namespace

Measure renyi_value(const CondEnsemble& e, double alpha) {
  if (alpha <= 0.0 || alpha == 1.0) throw DomainError("renyi_value: alpha must be in (0,1)u(1,inf)");
  const double alt = alpha_log_term(e, alpha);
  return {alt / (alpha - 1.0), Unit::nats};
}

Measure renyi_info(const CondEnsemble& e, double alpha) {
  if (alpha < 0.0) throw DomainError("renyi_info: alpha must be >= 0");
  if (alpha == 1.0) return holevo_value(e);
  if (alpha == 0.0) return {-alpha_log_term(e, 0.0), Unit::nats};
  return renyi_value(e, alpha);
}

double s_times_renyi(const CondEnsemble& e, double s) {
  if (s < 0.0 || s > 1.0) throw DomainError("s_times_renyi: s out of [0,1]");
  if (s == 0.0) return 0.0;
  return -alpha_log_term(e, 1.0 - s);
}

Measure renyi_mi_sibson(const Dist& p, const CQChannel& w, double alpha) {
  if (alpha <= 0.0 || alpha == 1.0) {
    throw DomainError("renyi_mi_sibson: alpha must be in (0,1)u(1,inf)");
  }
  if (p.size() != w.input_size) throw ShapeError("renyi_mi_sibson: |X| mismatch");
  CondEnsemble e;
  e.weights = {1.0};
  e.blocks.resize(1);
  for (int x = 0; x < p.size(); ++x) e.blocks[0].emplace_back(p[x], w.at(x));
  return renyi_value(e, alpha);
}

Measure renyi_cmi(const MarkovTriple& joint, const CQChannel& w, double alpha) {
  if (alpha <= 0.0 || alpha == 1.0) throw DomainError("renyi_cmi: alpha must be in (0,1)u(1,inf)");
  return renyi_value(ensemble_private(joint, w), alpha);
}

}  // namespace cqcode
