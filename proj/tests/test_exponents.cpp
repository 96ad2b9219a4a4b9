#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cqcode/exponents.hpp"
#include "test_common.hpp"

using namespace cqcode;
using namespace cqtest;

namespace {

// dense-grid maximization of s(I_{1-s} - offset), step 1e-4
std::pair<double, double> grid_max_s(const CondEnsemble& e, double offset) {
  double best = 0.0, best_s = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double s = static_cast<double>(i) / 10000.0;
    const double v = s_times_renyi(e, s) - s * offset;
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  return {best, best_s};
}

BCDPair noiseless_pair() { return BCDPair(noiseless_bit(), noiseless_bit()); }

// binary U with a noisy-copy coupling to X: both region bounds strictly
// positive, so (0.2, 0.2) nats with slack 0.05 sits strictly inside
MarkovTriple noisy_copy_ux(double flip = 0.15) {
  return MarkovTriple::from_ux(Dist::uniform(2),
                               {Dist({1 - flip, flip}), Dist({flip, 1 - flip})});
}

double min_term(const ExponentReport& r) {
  double m = r.term_breakdown.front().value;
  for (const auto& t : r.term_breakdown) m = std::min(m, t.value);
  return m;
}

}  // namespace

TEST_CASE("report value equals the breakdown minimum") {
  const BCDPair pair = noiseless_pair();
  const RateSpec spec(0.2, 0.2, 0.05, 0.05);
  for (const auto& rep : {exp_bcd_y(pair, noisy_copy_ux(), spec),
                          exp_bcd_z(pair, noisy_copy_ux(), spec),
                          exp_superposition_alt(pair, noisy_copy_ux(), spec)}) {
    CHECK(rep.value == doctest::Approx(std::max(min_term(rep), 0.0)).epsilon(1e-12));
    CHECK(rep.value >= 0.0);
  }
}

TEST_CASE("exp_bcd_y is zero at capacity with zero slack") {
  const BCDPair pair = noiseless_pair();
  const MarkovTriple ux = noisy_copy_ux();
  const double ra = holevo_value(ensemble_common(ux, pair.w_y)).value;
  const double rb = holevo_value(ensemble_private(ux, pair.w_y)).value;
  const ExponentReport rep = exp_bcd_y(pair, ux, RateSpec(ra, rb, 0.0, 0.0));
  CHECK(rep.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("exp_bcd_y positive strictly inside the region") {
  const ExponentReport rep =
      exp_bcd_y(noiseless_pair(), noisy_copy_ux(), RateSpec(0.2, 0.2, 0.05, 0.05));
  CHECK(rep.value > 0.0);
}

TEST_CASE("exp_bcd_y matches the dense s-grid oracle") {
  const BCDPair pair(bsc_channel(0.05), bsc_channel(0.2));
  const MarkovTriple ux = noisy_copy_ux(0.1);
  const RateSpec spec(0.1, 0.15, 0.03, 0.04);
  const ExponentReport rep = exp_bcd_y(pair, ux, spec);

  auto [gv_a, gs_a] = grid_max_s(ensemble_common(ux, pair.w_y), spec.r_a_rate + spec.slack_a);
  auto [gv_b, gs_b] = grid_max_s(ensemble_private(ux, pair.w_y), spec.r_b_rate + spec.slack_b);
  const double expected = std::min(std::min(gv_a, spec.slack_a), std::min(gv_b, spec.slack_b));
  CHECK(rep.value == doctest::Approx(expected).epsilon(1e-5));
  (void)gs_a;
  (void)gs_b;
}

TEST_CASE("exp_bcd_z basics and slack fixed point") {
  const BCDPair pair(noiseless_bit(), bsc_channel(0.2));
  const MarkovTriple ux = noisy_copy_ux();

  // R_A >= I(U;Z), slack 0 -> 0
  const double iuz = holevo_value(ensemble_common(ux, pair.w_z)).value;
  CHECK(exp_bcd_z(pair, ux, RateSpec(iuz + 0.01, 0.0, 0.0, 0.0)).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  // with the closed-form optimal slack, the bound equals that slack
  const double ra = 0.5 * iuz;
  const CondEnsemble common_z = ensemble_common(ux, pair.w_z);
  auto i_of_alpha = [&](double alpha) { return renyi_info(common_z, alpha); };
  auto [slack, value] = exp_opt_over_slack(i_of_alpha, ra);
  CHECK(slack == doctest::Approx(value));
  const ExponentReport rep = exp_bcd_z(pair, ux, RateSpec(ra, 0.0, slack, 0.0));
  CHECK(rep.value == doctest::Approx(value).epsilon(1e-5));

  // W_Z = W_Y: the Z exponent equals the common part of the Y breakdown
  const BCDPair same(bsc_channel(0.1), bsc_channel(0.1));
  const RateSpec spec(0.1, 0.1, 0.02, 0.02);
  const ExponentReport y = exp_bcd_y(same, ux, spec);
  const ExponentReport z = exp_bcd_z(same, ux, spec);
  CHECK(z.term_breakdown[0].value == doctest::Approx(y.term_breakdown[0].value).epsilon(1e-9));
}

TEST_CASE("exp_opt_over_slack endpoints") {
  const MarkovTriple ux = noisy_copy_ux();
  const CondEnsemble common = ensemble_common(ux, noiseless_bit());
  auto i_of_alpha = [&](double alpha) { return renyi_info(common, alpha); };
  // rate at I(1): zero exponent, zero slack
  auto [s0, v0] = exp_opt_over_slack(i_of_alpha, holevo_value(common).value);
  CHECK(s0 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(v0 == doctest::Approx(0.0).epsilon(1e-9));

  // constant information c at rate 0: sup_s s*c/(1+s) = c/2 at s = 1
  const double c = 0.37;
  auto [s1, v1] = exp_opt_over_slack([&](double) { return Measure{c, Unit::nats}; }, 0.0);
  CHECK(v1 == doctest::Approx(c / 2).epsilon(1e-8));
  CHECK(s1 == doctest::Approx(c / 2).epsilon(1e-8));
}

TEST_CASE("exp_opt_over_slack matches the two-variable grid search") {
  const MarkovTriple ux = noisy_copy_ux(0.1);
  const CondEnsemble common = ensemble_common(ux, bsc_channel(0.05));
  auto i_of_alpha = [&](double alpha) { return renyi_info(common, alpha); };
  const double rate = 0.1;
  auto [slack, value] = exp_opt_over_slack(i_of_alpha, rate);

  double best = 0.0;
  for (int ri = 0; ri <= 600; ++ri) {
    const double r = ri * 1e-3;
    double inner = 0.0;
    for (int si = 0; si <= 1000; ++si) {
      const double s = si * 1e-3;
      inner = std::max(inner, s_times_renyi(common, s) - s * (rate + r));
    }
    best = std::max(best, std::min(inner, r));
  }
  CHECK(value == doctest::Approx(best).epsilon(1e-4));
  CHECK(slack == doctest::Approx(best).epsilon(1e-4));
}

TEST_CASE("MAC exponents: zero at capacity, positive inside, grid oracle") {
  const CompoundFamily fam = build_example1();
  const auto& s2 = fam.mac_members[0];
  const MarkovTriple uniform = MarkovTriple::product(Dist::uniform(2), Dist::uniform(2));

  const double ia = mac_mi(s2, uniform, MacInfo::a_given_t).value;
  const double ib = mac_mi(s2, uniform, MacInfo::b_given_at).value;
  CHECK(exp_mac_joint(s2, uniform, RateSpec(ia, ib, 0.0, 0.0)).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  // strictly inside (S2MAC: I(A;Y) = 0, so bias the input)
  const MarkovTriple biased = MarkovTriple::product(Dist::uniform(2), Dist({0.85, 0.15}));
  const RateSpec inside(0.05, 0.1, 0.02, 0.02);
  const ExponentReport rep = exp_mac_joint(s2, biased, inside);
  CHECK(rep.value > 0.0);

  auto [gv_a, s_a] = grid_max_s(ensemble_mac(s2, biased, MacInfo::a_given_t), 0.05 + 0.02);
  auto [gv_b, s_b] = grid_max_s(ensemble_mac(s2, biased, MacInfo::b_given_at), 0.1 + 0.02);
  CHECK(rep.value ==
        doctest::Approx(std::min({gv_a, 0.02, gv_b, 0.02})).epsilon(1e-5));
  (void)s_a;
  (void)s_b;
}

TEST_CASE("separate-decoding exponents and the eight-term recombination") {
  std::mt19937_64 rng(12);
  const MACChannel mac = random_mac_channel(2, 2, 2, rng);
  const MarkovTriple triple = MarkovTriple::product(Dist({0.6, 0.4}), Dist({0.3, 0.7}));
  const RateSpec spec(0.04, 0.05, 0.02, 0.03);

  auto [rep_a, rep_b] = exp_mac_separate(mac, triple, spec);
  CHECK(rep_a.value >= 0.0);
  CHECK(rep_b.value >= 0.0);
  CHECK(rep_a.term_breakdown.size() == 4);

  // grid oracle for the B report
  auto [gv_b, s_b] = grid_max_s(ensemble_mac(mac, triple, MacInfo::b_given_at),
                                spec.r_b_rate + spec.slack_b);
  auto [gv_ab, s_ab] = grid_max_s(ensemble_mac(mac, triple, MacInfo::ab_given_t),
                                  spec.r_a_rate + spec.r_b_rate + spec.slack_a + spec.slack_b);
  CHECK(rep_b.value ==
        doctest::Approx(std::min({gv_b, spec.slack_b, gv_ab, spec.slack_a + spec.slack_b}))
            .epsilon(1e-5));
  (void)s_b;
  (void)s_ab;

  // Ex3BC is the definitional recombination min(A-report, half the B-report)
  const ExponentReport joint = exp_mac_joint_general(mac, triple, spec);
  CHECK(joint.term_breakdown.size() == 8);
  CHECK(joint.value == doctest::Approx(std::min(rep_a.value, 0.5 * rep_b.value)).epsilon(1e-9));
  CHECK(joint.value > 0.0);
}

TEST_CASE("superposition alt decoder exponent") {
  const BCDPair pair = noiseless_pair();
  const MarkovTriple ux = noisy_copy_ux();

  // zero at sum capacity with zero slack
  const double isum = holevo_value(ensemble_marginal(ux, pair.w_y)).value;
  const double ipriv = holevo_value(ensemble_private(ux, pair.w_y)).value;
  CHECK(exp_superposition_alt(pair, ux, RateSpec(isum - ipriv, ipriv, 0.0, 0.0)).value ==
        doctest::Approx(0.0).epsilon(1e-9));

  const RateSpec inside(0.1, 0.1, 0.03, 0.03);
  const ExponentReport rep = exp_superposition_alt(pair, ux, inside);
  CHECK(rep.value > 0.0);

  auto [gv_sum, s1] = grid_max_s(ensemble_marginal(ux, pair.w_y), 0.2 + 0.06);
  auto [gv_priv, s2] = grid_max_s(ensemble_private(ux, pair.w_y), 0.1 + 0.03);
  CHECK(rep.value == doctest::Approx(std::min({gv_sum, 0.06, gv_priv, 0.03})).epsilon(1e-5));
  (void)s1;
  (void)s2;
}

TEST_CASE("exponents never increase with the rates") {
  const BCDPair pair(bsc_channel(0.05), bsc_channel(0.15));
  const MarkovTriple ux = noisy_copy_ux(0.1);
  const CompoundFamily fam = build_example1();
  const auto& s2 = fam.mac_members[0];
  const MarkovTriple biased = MarkovTriple::product(Dist::uniform(2), Dist({0.8, 0.2}));

  double prev_y = 1e9, prev_z = 1e9, prev_mac = 1e9, prev_gen = 1e9, prev_alt = 1e9;
  for (double rate : {0.02, 0.06, 0.1, 0.2, 0.4}) {
    const RateSpec spec(rate, rate, 0.02, 0.02);
    const double y = exp_bcd_y(pair, ux, spec).value;
    const double z = exp_bcd_z(pair, ux, spec).value;
    const double m = exp_mac_joint(s2, biased, spec).value;
    const double g = exp_mac_joint_general(s2, biased, spec).value;
    const double alt = exp_superposition_alt(pair, ux, spec).value;
    CHECK(y <= prev_y + 1e-9);
    CHECK(z <= prev_z + 1e-9);
    CHECK(m <= prev_mac + 1e-9);
    CHECK(g <= prev_gen + 1e-9);
    CHECK(alt <= prev_alt + 1e-9);
    prev_y = y;
    prev_z = z;
    prev_mac = m;
    prev_gen = g;
    prev_alt = alt;
  }
}

TEST_CASE("golden section agrees with the dense grid on random instances") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const CQChannel w = random_cq_channel(2, 2, rng);
    const Dist p = random_dist(2, rng);
    CondEnsemble e;
    e.weights = {1.0};
    e.blocks.resize(1);
    for (int x = 0; x < 2; ++x) e.blocks[0].emplace_back(p[x], w.at(x));
    std::uniform_real_distribution<double> off(0.0, 0.3);
    const double offset = off(rng);
    auto [v, s] = max_over_s(e, offset);
    auto [gv, gs] = grid_max_s(e, offset);
    CHECK(std::abs(v - gv) <= 1e-5);
    if (gv > 1e-7) CHECK(std::abs(s - gs) <= 1.5e-4);
  }
}

TEST_CASE("exponents remain well defined on non-commuting outputs") {
  const CompoundFamily tilted = build_quantum_tilt(build_example1(), 0.2);
  const MarkovTriple biased = MarkovTriple::product(Dist::uniform(2), Dist({0.85, 0.15}));
  const RateSpec spec(0.03, 0.05, 0.02, 0.02);
  for (const auto& mac : tilted.mac_members) {
    const ExponentReport rep = exp_mac_joint(mac, biased, spec);
    CHECK(rep.value >= 0.0);
    CHECK(std::isfinite(rep.value));
    auto [a, b] = exp_mac_separate(mac, biased, spec);
    CHECK(std::isfinite(a.value));
    CHECK(std::isfinite(b.value));
  }
  // the tilted S2MAC at small angle stays close to the classical exponent
  const CompoundFamily classical = build_example1();
  const CompoundFamily nearly = build_quantum_tilt(classical, 1e-3);
  const double e0 = exp_mac_joint(classical.mac_members[0], biased, spec).value;
  const double e1 = exp_mac_joint(nearly.mac_members[0], biased, spec).value;
  CHECK(std::abs(e0 - e1) <= 1e-2);
}

TEST_CASE("rate spec validation") {
  CHECK_THROWS_AS(RateSpec(-0.1, 0.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(RateSpec(0.1, 0.0, -0.2, 0.0), DomainError);
  const MarkovTriple mac_triple = MarkovTriple::product(Dist::uniform(2), Dist::uniform(2));
  CHECK_THROWS_AS(
      exp_bcd_y(noiseless_pair(), mac_triple, RateSpec(0.1, 0.1, 0.0, 0.0)), ShapeError);
}
