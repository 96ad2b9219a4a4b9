#pragma once

#include <utility>
#include <vector>

#include "cqcode/channels.hpp"
#include "cqcode/qmat.hpp"

namespace cqcode {

enum class Unit { bits, nats };

struct Measure {
  double value = 0.0;
  Unit unit = Unit::nats;

  bool infinite() const;
  double in(Unit target) const;  // unit conversion
  Measure to(Unit target) const { return {in(target), target}; }
};

// Probability vector; entries >= 0 and summing to 1 within 1e-9.
struct Dist {
  std::vector<double> probs;

  explicit Dist(std::vector<double> p);
  static Dist uniform(int size);
  int size() const { return static_cast<int>(probs.size()); }
  double operator[](int i) const { return probs[static_cast<std::size_t>(i)]; }
};

// Joint distribution of (A, T, B) with the Markov structure A - T - B, stored
// as P_T with conditional rows P_{A|T} and P_{B|T}. Doubles as the BCD input
// distribution P_{UX} via T -> U, A -> X with |B| = 1.
struct MarkovTriple {
  Dist p_t;
  std::vector<Dist> p_a_given_t;
  std::vector<Dist> p_b_given_t;

  MarkovTriple(Dist t, std::vector<Dist> a_rows, std::vector<Dist> b_rows);
  static MarkovTriple from_ux(Dist p_u, std::vector<Dist> p_x_given_u);
  static MarkovTriple product(const Dist& p_a, const Dist& p_b);

  int t_size() const { return p_t.size(); }
  int a_size() const { return p_a_given_t.front().size(); }
  int b_size() const { return p_b_given_t.front().size(); }
};

// Generic conditional ensemble: outer weights w_u and per-u ensembles of
// (probability, state). Every Holevo/Renyi quantity in this toolkit reduces
// to one of these.
struct CondEnsemble {
  std::vector<double> weights;
  std::vector<std::vector<std::pair<double, DensityMat>>> blocks;

  int dim() const { return blocks.front().front().second.dim(); }
};

Measure vn_entropy(const DensityMat& rho);

// Holevo information of the ensemble {p(x), W_x}.
Measure holevo_mi(const Dist& p, const CQChannel& w);

// I(X;Y|U) for a BCD input distribution (triple encodes P_UX, |B| = 1).
Measure cond_mi(const MarkovTriple& joint, const CQChannel& w);
// I(B;Y|AT) for a MAC input distribution.
Measure cond_mi(const MarkovTriple& joint, const MACChannel& w);

// Petz Renyi divergence D_alpha(rho || sigma); +inf when alpha > 1 and the
// support of rho escapes the support of sigma.
Measure petz_renyi_div(const DensityMat& rho, const DensityMat& sigma, double alpha);

// Sibson/Gallager closed form of min_sigma D_alpha(rho_XY || rho_X x sigma).
Measure renyi_mi_sibson(const Dist& p, const CQChannel& w, double alpha);

// Conditional Renyi mutual information I_alpha(X;Y|U) in its closed form.
Measure renyi_cmi(const MarkovTriple& joint, const CQChannel& w, double alpha);

// The five conditional informations of a MAC under a Markov triple.
enum class MacInfo { a_given_t, b_given_at, a_given_bt, b_given_t, ab_given_t };

Measure mac_mi(const MACChannel& w, const MarkovTriple& joint, MacInfo which);
Measure mac_renyi_mi(const MACChannel& w, const MarkovTriple& joint, MacInfo which, double alpha);

// Ensemble builders (also used by the exponent bounds).
CondEnsemble ensemble_common(const MarkovTriple& p_ux, const CQChannel& w);    // I(U;Y)
CondEnsemble ensemble_private(const MarkovTriple& p_ux, const CQChannel& w);   // I(X;Y|U)
CondEnsemble ensemble_marginal(const MarkovTriple& p_ux, const CQChannel& w);  // I(X;Y)
CondEnsemble ensemble_mac(const MACChannel& w, const MarkovTriple& joint, MacInfo which);

// Closed-form values on a conditional ensemble, in nats.
Measure holevo_value(const CondEnsemble& e);
Measure renyi_value(const CondEnsemble& e, double alpha);

// renyi_value extended to the closed endpoints: alpha = 1 is the Holevo
// quantity, alpha = 0 the support-projector limit.
Measure renyi_info(const CondEnsemble& e, double alpha);

// s * I_{1-s}(ensemble) evaluated stably for s in [0, 1]; the s = 1 endpoint
// uses the exact support-projector limit.
double s_times_renyi(const CondEnsemble& e, double s);

}  // namespace cqcode
