#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cqcode/serialization.hpp"
#include "cqcode/typeclasses.hpp"

using namespace cqcode;

namespace {

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

std::vector<int> counts_of(const std::vector<int>& seq, int alphabet) {
  std::vector<int> c(static_cast<std::size_t>(alphabet), 0);
  for (int v : seq) ++c[static_cast<std::size_t>(v)];
  return c;
}

}  // namespace

TEST_CASE("enum_types enumeration") {
  const auto t22 = enum_types(2, 2);
  REQUIRE(t22.size() == 3);
  CHECK(t22[0].counts == std::vector<int>{0, 2});
  CHECK(t22[2].counts == std::vector<int>{2, 0});

  CHECK(enum_types(4, 2).size() == 5);

  for (int n : {4, 8, 12, 20}) {
    for (int k : {2, 3, 4}) {
      CHECK(enum_types(n, k).size() ==
            static_cast<std::size_t>(binom(n + k - 1, k - 1)));
    }
  }
  CHECK_THROWS_AS(enum_types(1000, 8), SizeError);
}

TEST_CASE("uniform type-class size dominates the entropy bound") {
  // |T_P| = C(4,2) = 6 >= e^{4 h(1/2)} / (1+4)^2
  const double h = std::log(2.0);
  CHECK(6.0 >= std::exp(4 * h) / std::pow(5.0, 2.0));
}

TEST_CASE("pack_single: vacuous single-codeword code") {
  const TypeVec type(8, {4, 4});
  const PackedCode code = pack_single(8, type, 0.2, 1.0, 0);
  CHECK(code.codewords.size() == 1);  // ceil(e^{1.6 - 4.76})
  for (const auto& [k, v] : code.margins) CHECK(v == doctest::Approx(0.0));
  CHECK(counts_of(code.codewords[0], 2) == type.counts);
}

TEST_CASE("pack_single: nontrivial codebook verifies") {
  const TypeVec type(8, {4, 4});
  const double rate = 0.55;  // ~80% of H = ln 2
  const PackedCode code = pack_single(8, type, rate, 0.5, 3);
  CHECK(code.codewords.size() == 8);  // ceil(e^{4.4 - 2.38})
  std::set<std::vector<int>> distinct(code.codewords.begin(), code.codewords.end());
  CHECK(distinct.size() == code.codewords.size());
  for (const auto& w : code.codewords) CHECK(counts_of(w, 2) == type.counts);

  const auto margins = verify_packing(code);
  REQUIRE(margins.count("eq20") == 1);
  CHECK(margins.at("eq20") <= 1.0 + 1e-12);
  CHECK(margins.at("eq20") == doctest::Approx(code.margins.at("eq20")));
}

TEST_CASE("pack_single rejects rates at or above the entropy") {
  const TypeVec type(8, {4, 4});
  CHECK_THROWS_AS(pack_single(8, type, std::log(2.0), 1.0, 0), DomainError);
  CHECK_THROWS_AS(pack_single(8, type, 0.8, 1.0, 0), DomainError);
  CHECK_THROWS_AS(pack_superposition(8, JointTypeUX(8, {{2, 2}, {2, 2}}), 0.7, 0.3, 1.0, 0),
                  DomainError);
}

TEST_CASE("pack_single fails loudly when the type class is too small") {
  // message count 16 > |T_P| = 6
  CHECK_THROWS_AS(pack_single(4, TypeVec(4, {2, 2}), 0.69, 0.0, 0), PackingFailure);
}

TEST_CASE("pack_superposition at micro scale") {
  const JointTypeUX joint(8, {{2, 2}, {2, 2}});
  CHECK(joint.entropy_u_nats() == doctest::Approx(std::log(2.0)));
  CHECK(joint.entropy_x_given_u_nats() == doctest::Approx(std::log(2.0)));

  // vacuous sizes first
  const PackedCode tiny = pack_superposition(8, joint, 0.2, 0.2, 1.0, 0);
  CHECK(tiny.cloud.size() == 1);
  CHECK(tiny.satellites.front().size() == 1);

  // nontrivial: M_U, M_X >= 2 (the finite-n bounds leave room only near the
  // conditional entropies, with a large enough size discount)
  const PackedCode code = pack_superposition(8, joint, 0.55, 0.55, 0.78, 1);
  CHECK(code.cloud.size() >= 2);
  CHECK(code.satellites.front().size() >= 2);
  for (const auto& [k, v] : code.margins) {
    CAPTURE(k);
    CHECK(v <= 1.0 + 1e-12);
  }
  // satellites are jointly typed with their cloud
  for (std::size_t j = 0; j < code.cloud.size(); ++j) {
    for (const auto& x : code.satellites[j]) {
      std::vector<std::vector<int>> cnt(2, std::vector<int>(2, 0));
      for (int i = 0; i < 8; ++i) {
        ++cnt[static_cast<std::size_t>(code.cloud[j][static_cast<std::size_t>(i)])]
             [static_cast<std::size_t>(x[static_cast<std::size_t>(i)])];
      }
      CHECK(cnt == joint.counts);
    }
  }
}

TEST_CASE("pack_mac at micro scale") {
  MacTypeSpec spec;
  spec.t_counts = {3, 3};
  spec.a_counts = {{2, 1}, {1, 2}};
  spec.b_counts = {{2, 1}, {1, 2}};
  const double h_third = std::log(3.0) / 3.0 + 2.0 * std::log(1.5) / 3.0;  // h(1/3) nats
  CHECK(spec.entropy_a_given_t_nats() == doctest::Approx(h_third).epsilon(1e-12));
  CHECK(spec.t_sequence() == std::vector<int>{0, 0, 0, 1, 1, 1});

  const PackedCode tiny = pack_mac(6, spec, 0.2, 0.2, 1.0, 0);
  CHECK(tiny.a_words.size() == 1);
  CHECK(tiny.b_words.size() == 1);

  const PackedCode code = pack_mac(6, spec, 0.6, 0.6, 0.9, 2);
  CHECK(code.a_words.size() >= 2);
  CHECK(code.b_words.size() >= 2);
  for (const auto& [k, v] : code.margins) {
    CAPTURE(k);
    CHECK(v <= 1.0 + 1e-12);
  }
  // conditional typing per t block
  for (const auto& a : code.a_words) {
    std::vector<int> c0(2, 0), c1(2, 0);
    for (int i = 0; i < 6; ++i) {
      auto& c = (code.t_seq[static_cast<std::size_t>(i)] == 0) ? c0 : c1;
      ++c[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])];
    }
    CHECK(c0 == spec.a_counts[0]);
    CHECK(c1 == spec.a_counts[1]);
  }

  CHECK_THROWS_AS(pack_mac(6, spec, 0.7, 0.2, 1.0, 0), DomainError);
}

TEST_CASE("singleton T reduces pack_mac to a product of type packings") {
  MacTypeSpec spec;
  spec.t_counts = {8};
  spec.a_counts = {{4, 4}};
  spec.b_counts = {{4, 4}};
  const PackedCode code = pack_mac(8, spec, 0.52, 0.52, 0.73, 5);
  CHECK(code.a_words.size() >= 2);
  CHECK(code.b_words.size() >= 2);
  CHECK(code.t_seq == std::vector<int>(8, 0));
  for (const auto& a : code.a_words) CHECK(counts_of(a, 2) == std::vector<int>{4, 4});
  for (const auto& b : code.b_words) CHECK(counts_of(b, 2) == std::vector<int>{4, 4});
}

TEST_CASE("verify_orbit_bounds on packed codes") {
  // single
  const PackedCode single = pack_single(8, TypeVec(8, {4, 4}), 0.55, 0.5, 3);
  const OrbitReport r1 = verify_orbit_bounds(single);
  REQUIRE(r1.entries.size() == 1);
  CHECK(r1.entries[0].equation == "8");
  CHECK(r1.ok());

  // superposition
  const PackedCode sup =
      pack_superposition(8, JointTypeUX(8, {{2, 2}, {2, 2}}), 0.55, 0.55, 0.78, 1);
  const OrbitReport r2 = verify_orbit_bounds(sup);
  REQUIRE(r2.entries.size() == 2);
  CHECK(r2.ok());
  for (const auto& e : r2.entries) CHECK(e.pairs_checked > 0);

  // mac
  MacTypeSpec spec;
  spec.t_counts = {3, 3};
  spec.a_counts = {{2, 1}, {1, 2}};
  spec.b_counts = {{2, 1}, {1, 2}};
  const PackedCode mac = pack_mac(6, spec, 0.6, 0.6, 0.9, 2);
  const OrbitReport r3 = verify_orbit_bounds(mac);
  REQUIRE(r3.entries.size() == 3);
  CHECK(r3.ok());
}

TEST_CASE("verify_orbit_bounds flags a clustered codebook") {
  // all codewords equal up to one adjacent swap: heavy orbit collisions
  PackedCode bad;
  bad.setting = PackedCode::Setting::single;
  bad.n = 8;
  bad.alphabet = 2;
  bad.rate = 0.2;   // tight bound: e^{-n(H-R)} = e^{-3.95}
  bad.slack_c = 0.0;
  std::vector<int> base{0, 0, 0, 0, 1, 1, 1, 1};
  bad.codewords.push_back(base);
  for (int i = 0; i < 4; ++i) {
    auto w = base;
    std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i + 4)]);
    bad.codewords.push_back(w);
  }
  const OrbitReport rep = verify_orbit_bounds(bad);
  CHECK(rep.worst() > 1.0);
  const auto margins = verify_packing(bad);
  CHECK(margins.at("eq20") > 1.0);
}

TEST_CASE("orbit average is constant across orbit representatives") {
  // brute-force check of the counting identity on a tiny instance: average
  // membership over the stabilizer group equals count/|orbit| for any
  // representative of the same conditional type
  const std::vector<int> x{0, 0, 1, 1};
  const PermGroupHandle h = PermGroupHandle::of({x});
  CHECK(std::exp(h.log_order) == doctest::Approx(4.0));  // 2! * 2!
  for (const auto& [i, j] : h.generators) {
    CHECK(x[static_cast<std::size_t>(i)] == x[static_cast<std::size_t>(j)]);
  }

  const std::vector<std::vector<int>> codebook{{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 1, 0}};
  // orbit of target under S_x: all sequences with the same per-block counts
  auto orbit_average = [&](const std::vector<int>& target) {
    // enumerate the 4 block permutations explicitly: swap positions {0,1}
    // and/or {2,3}
    double hits = 0.0;
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        auto t = target;
        if (s1) std::swap(t[0], t[1]);
        if (s2) std::swap(t[2], t[3]);
        hits += std::count(codebook.begin(), codebook.end(), t) > 0 ? 1.0 : 0.0;
      }
    return hits / 4.0;
  };
  // two representatives of the same conditional type given x
  CHECK(orbit_average({0, 1, 0, 1}) == doctest::Approx(orbit_average({1, 0, 1, 0})));
}

TEST_CASE("packed code JSON round trip") {
  const PackedCode code = pack_single(8, TypeVec(8, {4, 4}), 0.55, 0.5, 3);
  const std::string text = packed_code_to_json_text(code);
  const PackedCode back = packed_code_from_json_text(text);
  CHECK(back.codewords == code.codewords);
  CHECK(back.n == code.n);
  CHECK(back.seed == code.seed);
  CHECK(back.margins.at("eq20") == doctest::Approx(code.margins.at("eq20")));

  MacTypeSpec spec;
  spec.t_counts = {3, 3};
  spec.a_counts = {{2, 1}, {1, 2}};
  spec.b_counts = {{2, 1}, {1, 2}};
  const PackedCode mac = pack_mac(6, spec, 0.6, 0.6, 0.9, 2);
  const PackedCode mac_back = packed_code_from_json_text(packed_code_to_json_text(mac));
  CHECK(mac_back.a_words == mac.a_words);
  CHECK(mac_back.b_words == mac.b_words);
  CHECK(mac_back.t_seq == mac.t_seq);

  // unsorted t sequences are rejected
  std::string mangled = packed_code_to_json_text(mac);
  const auto pos = mangled.find("\"t_seq\"");
  REQUIRE(pos != std::string::npos);
  std::string bad = mangled;
  bad.replace(bad.find("[", pos), bad.find("]", pos) - bad.find("[", pos) + 1,
              "[1,0,0,1,1,0]");
  CHECK_THROWS_AS(packed_code_from_json_text(bad), ParseError);
}

TEST_CASE("construction is seed-deterministic") {
  const TypeVec type(8, {4, 4});
  const PackedCode a = pack_single(8, type, 0.55, 0.5, 42);
  const PackedCode b = pack_single(8, type, 0.55, 0.5, 42);
  CHECK(a.codewords == b.codewords);
  CHECK(packed_code_to_json_text(a) == packed_code_to_json_text(b));
}
