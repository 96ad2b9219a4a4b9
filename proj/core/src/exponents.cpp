#include "cqcode/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cqcode {

RateSpec::RateSpec(double ra, double rb, double sa, double sb)
    : r_a_rate(ra), r_b_rate(rb), slack_a(sa), slack_b(sb) {
  if (ra < 0 || rb < 0) throw DomainError("RateSpec: rates must be >= 0");
  if (sa < 0 || sb < 0) throw DomainError("RateSpec: slacks must be >= 0");
}

namespace {

constexpr int kGridPoints = 64;
constexpr double kGolden = 0.6180339887498949;
constexpr double kSTol = 1e-6;

// Grid-then-golden maximization of a scalar function on [0,1]. The objective
// need not be unimodal, hence the grid stage.
std::pair<double, double> maximize_on_unit(const std::function<double(double)>& f) {
  double best_s = 0.0, best_v = f(0.0);
  for (int i = 1; i <= kGridPoints; ++i) {
    const double s = static_cast<double>(i) / kGridPoints;
    const double v = f(s);
    if (v > best_v) {
      best_v = v;
      best_s = s;
    }
  }
  double lo = std::max(0.0, best_s - 1.0 / kGridPoints);
  double hi = std::min(1.0, best_s + 1.0 / kGridPoints);
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > kSTol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double vm = f(mid);
  if (vm > best_v) return {vm, mid};
  return {best_v, best_s};
}

ExponentTerm detection_term(const std::string& name, const CondEnsemble& e, double offset) {
  auto [v, s] = max_over_s(e, offset);
  return {name, v, s, false};
}

ExponentTerm slack_term(const std::string& name, double value) { return {name, value, 0.0, true}; }

ExponentReport assemble(std::vector<ExponentTerm> terms) {
  ExponentReport rep;
  rep.term_breakdown = std::move(terms);
  rep.value = rep.term_breakdown.front().value;
  for (const auto& t : rep.term_breakdown) rep.value = std::min(rep.value, t.value);
  rep.value = std::max(rep.value, 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : rep.term_breakdown) {
    if (!t.is_slack && t.value < best) {
      best = t.value;
      rep.maximizing_s = t.maximizing_s;
    }
  }
  return rep;
}

}  // namespace

std::pair<double, double> max_over_s(const CondEnsemble& e, double offset) {
  auto obj = [&](double s) { return s_times_renyi(e, s) - s * offset; };
  auto [v, s] = maximize_on_unit(obj);
  return {std::max(v, 0.0), s};
}

ExponentReport exp_bcd_y(const BCDPair& pair, const MarkovTriple& p_ux, const RateSpec& spec) {
  if (p_ux.b_size() != 1) throw ShapeError("exp_bcd_y: triple must encode P_UX (|B| = 1)");
  const CondEnsemble common = ensemble_common(p_ux, pair.w_y);
  const CondEnsemble priv = ensemble_private(p_ux, pair.w_y);
  return assemble({
      detection_term("common_detection", common, spec.r_a_rate + spec.slack_a),
      slack_term("common_slack", spec.slack_a),
      detection_term("private_detection", priv, spec.r_b_rate + spec.slack_b),
      slack_term("private_slack", spec.slack_b),
  });
}

ExponentReport exp_bcd_z(const BCDPair& pair, const MarkovTriple& p_ux, const RateSpec& spec) {
  if (p_ux.b_size() != 1) throw ShapeError("exp_bcd_z: triple must encode P_UX (|B| = 1)");
  const CondEnsemble common = ensemble_common(p_ux, pair.w_z);
  return assemble({
      detection_term("common_detection", common, spec.r_a_rate + spec.slack_a),
      slack_term("common_slack", spec.slack_a),
  });
}

std::pair<double, double> exp_opt_over_slack(const std::function<Measure(double)>& I_of_alpha,
                                             double rate) {
  if (rate < 0.0) throw DomainError("exp_opt_over_slack: rate must be >= 0");
  auto obj = [&](double s) {
    if (s == 0.0) return 0.0;
    const double info = I_of_alpha(1.0 - s).in(Unit::nats);
    return s * (info - rate) / (1.0 + s);
  };
  auto [v, s] = maximize_on_unit(obj);
  (void)s;
  const double clipped = std::max(v, 0.0);
  return {clipped, clipped};
}

ExponentReport exp_mac_joint(const MACChannel& mac, const MarkovTriple& triple,
                             const RateSpec& spec) {
  const CondEnsemble a_t = ensemble_mac(mac, triple, MacInfo::a_given_t);
  const CondEnsemble b_at = ensemble_mac(mac, triple, MacInfo::b_given_at);
  return assemble({
      detection_term("a_detection", a_t, spec.r_a_rate + spec.slack_a),
      slack_term("a_slack", spec.slack_a),
      detection_term("b_detection", b_at, spec.r_b_rate + spec.slack_b),
      slack_term("b_slack", spec.slack_b),
  });
}

std::pair<ExponentReport, ExponentReport> exp_mac_separate(const MACChannel& mac,
                                                           const MarkovTriple& triple,
                                                           const RateSpec& spec) {
  const CondEnsemble a_bt = ensemble_mac(mac, triple, MacInfo::a_given_bt);
  const CondEnsemble b_at = ensemble_mac(mac, triple, MacInfo::b_given_at);
  const CondEnsemble ab_t = ensemble_mac(mac, triple, MacInfo::ab_given_t);
  const double sum_rate = spec.r_a_rate + spec.r_b_rate + spec.slack_a + spec.slack_b;

  ExponentReport a = assemble({
      detection_term("a_detection", a_bt, spec.r_a_rate + spec.slack_a),
      slack_term("a_slack", spec.slack_a),
      detection_term("joint_detection", ab_t, sum_rate),
      slack_term("joint_slack", spec.slack_a + spec.slack_b),
  });
  ExponentReport b = assemble({
      detection_term("b_detection", b_at, spec.r_b_rate + spec.slack_b),
      slack_term("b_slack", spec.slack_b),
      detection_term("joint_detection", ab_t, sum_rate),
      slack_term("joint_slack", spec.slack_a + spec.slack_b),
  });
  return {std::move(a), std::move(b)};
}

ExponentReport exp_mac_joint_general(const MACChannel& mac, const MarkovTriple& triple,
                                     const RateSpec& spec) {
  const CondEnsemble a_bt = ensemble_mac(mac, triple, MacInfo::a_given_bt);
  const CondEnsemble b_at = ensemble_mac(mac, triple, MacInfo::b_given_at);
  const CondEnsemble ab_t = ensemble_mac(mac, triple, MacInfo::ab_given_t);
  const double sum_rate = spec.r_a_rate + spec.r_b_rate + spec.slack_a + spec.slack_b;

  ExponentTerm a_det = detection_term("a_detection", a_bt, spec.r_a_rate + spec.slack_a);
  ExponentTerm joint_det = detection_term("joint_detection", ab_t, sum_rate);
  ExponentTerm b_det = detection_term("b_detection_half", b_at, spec.r_b_rate + spec.slack_b);
  b_det.value *= 0.5;
  ExponentTerm joint_det_half = joint_det;
  joint_det_half.name = "joint_detection_half";
  joint_det_half.value *= 0.5;

  return assemble({
      a_det,
      slack_term("a_slack", spec.slack_a),
      joint_det,
      slack_term("joint_slack", spec.slack_a + spec.slack_b),
      b_det,
      slack_term("b_slack_half", 0.5 * spec.slack_b),
      joint_det_half,
      slack_term("joint_slack_half", 0.5 * (spec.slack_a + spec.slack_b)),
  });
}

ExponentReport exp_superposition_alt(const BCDPair& pair, const MarkovTriple& p_ux,
                                     const RateSpec& spec) {
  if (p_ux.b_size() != 1) throw ShapeError("exp_superposition_alt: triple must encode P_UX");
  const CondEnsemble marginal = ensemble_marginal(p_ux, pair.w_y);
  const CondEnsemble priv = ensemble_private(p_ux, pair.w_y);
  const double sum_rate = spec.r_a_rate + spec.r_b_rate + spec.slack_a + spec.slack_b;
  return assemble({
      detection_term("sum_detection", marginal, sum_rate),
      slack_term("sum_slack", spec.slack_a + spec.slack_b),
      detection_term("private_detection", priv, spec.r_b_rate + spec.slack_b),
      slack_term("private_slack", spec.slack_b),
  });
}

}  // namespace cqcode
