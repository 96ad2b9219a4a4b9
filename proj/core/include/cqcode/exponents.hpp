#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cqcode/channels.hpp"
#include "cqcode/infomeasure.hpp"

namespace cqcode {

// Rates and slack parameters, all in nats per channel use.
struct RateSpec {
  double r_a_rate = 0.0;  // R_A
  double r_b_rate = 0.0;  // R_B
  double slack_a = 0.0;   // r_A
  double slack_b = 0.0;   // r_B

  RateSpec(double ra, double rb, double sa, double sb);
};

struct ExponentTerm {
  std::string name;
  double value = 0.0;
  double maximizing_s = 0.0;  // 0 for pure slack terms
  bool is_slack = false;
};

struct ExponentReport {
  double value = 0.0;         // min over the breakdown, clipped at 0
  double maximizing_s = 0.0;  // s of the binding detection term
  std::vector<ExponentTerm> term_breakdown;
};

// max over s in [0,1] of s*(I_{1-s}(ensemble) - offset): coarse 64-point grid
// followed by golden-section refinement around the best bracket.
std::pair<double, double> max_over_s(const CondEnsemble& e, double offset);  // (value, s*)

// Receiver-Y exponent of the universal superposition code. The triple encodes
// P_UX (|B| = 1 required).
ExponentReport exp_bcd_y(const BCDPair& pair, const MarkovTriple& p_ux, const RateSpec& spec);

// Receiver-Z exponent (common message only).
ExponentReport exp_bcd_z(const BCDPair& pair, const MarkovTriple& p_ux, const RateSpec& spec);

// Closed optimization over the slack: max over s in [0,1] of
// s*(I_{1-s} - rate)/(1+s), clipped at 0; the optimal slack equals the value.
std::pair<double, double> exp_opt_over_slack(const std::function<Measure(double)>& I_of_alpha,
                                             double rate);

// Joint-decoding MAC exponent (corner points).
ExponentReport exp_mac_joint(const MACChannel& mac, const MarkovTriple& triple,
                             const RateSpec& spec);

// Separate-decoding exponents, one per sender.
std::pair<ExponentReport, ExponentReport> exp_mac_separate(const MACChannel& mac,
                                                           const MarkovTriple& triple,
                                                           const RateSpec& spec);

// Joint decoding for general points via the gentle-operator conversion:
// eight-term min including the half-weighted sender-B terms.
ExponentReport exp_mac_joint_general(const MACChannel& mac, const MarkovTriple& triple,
                                     const RateSpec& spec);

// Alternate superposition decoder for receiver Y, with the sum-rate term.
ExponentReport exp_superposition_alt(const BCDPair& pair, const MarkovTriple& p_ux,
                                     const RateSpec& spec);

}  // namespace cqcode
