#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqcode/errors.hpp"

namespace cqcode {

// Empirical distribution of a length-n sequence, as symbol counts.
struct TypeVec {
  int n = 0;
  std::vector<int> counts;

  TypeVec(int n, std::vector<int> counts);
  int alphabet_size() const { return static_cast<int>(counts.size()); }
  double entropy_nats() const;
};

// All types on the given alphabet: compositions of n into |X| parts.
std::vector<TypeVec> enum_types(int n, int alphabet_size, std::size_t cap = 10'000'000);

// Conditional type: one output-type row per input symbol, row sums matching
// the base counts.
struct CondType {
  std::vector<TypeVec> rows;

  CondType(std::vector<TypeVec> rows, const TypeVec& base);
};

// Joint U x X type for superposition codebooks: counts[u][x] summing to n.
struct JointTypeUX {
  int n = 0;
  std::vector<std::vector<int>> counts;

  JointTypeUX(int n, std::vector<std::vector<int>> counts);
  int u_size() const { return static_cast<int>(counts.size()); }
  int x_size() const { return static_cast<int>(counts.front().size()); }
  TypeVec marginal_u() const;
  double entropy_joint_nats() const;
  double entropy_u_nats() const;
  double entropy_x_given_u_nats() const;
};

// MAC type data: t-blocks with per-block A- and B-compositions (the joint
// P(a,b|t) is the product of the conditionals, per the Markov structure).
struct MacTypeSpec {
  std::vector<int> t_counts;
  std::vector<std::vector<int>> a_counts;  // per t
  std::vector<std::vector<int>> b_counts;  // per t

  int n() const;
  int t_size() const { return static_cast<int>(t_counts.size()); }
  int a_size() const { return static_cast<int>(a_counts.front().size()); }
  int b_size() const { return static_cast<int>(b_counts.front().size()); }
  void validate() const;
  double entropy_a_given_t_nats() const;
  double entropy_b_given_t_nats() const;
  std::vector<int> t_sequence() const;  // sorted block form
};

// Codebook with packing-margin certificates. The margins map holds, per
// inequality family, the worst count/bound ratio found by the exhaustive
// verifier (<= 1 for a valid code).
struct PackedCode {
  enum class Setting { single, superposition, mac };

  Setting setting = Setting::single;
  int n = 0;
  std::uint64_t seed = 0;
  double slack_c = 1.0;

  // single
  std::vector<std::vector<int>> codewords;
  double rate = 0.0;
  int alphabet = 0;

  // superposition
  std::vector<std::vector<int>> cloud;                    // u(j)
  std::vector<std::vector<std::vector<int>>> satellites;  // x(j,k)
  double rate_u = 0.0, rate_x = 0.0;
  int u_alphabet = 0, x_alphabet = 0;

  // mac
  std::vector<int> t_seq;
  std::vector<std::vector<int>> a_words, b_words;
  double rate_a = 0.0, rate_b = 0.0;
  int a_alphabet = 0, b_alphabet = 0;

  std::map<std::string, double> margins;
};

// Codebook constructors: uniform draws from the (conditional) type classes
// with rejection of packing violators, retrying up to 50 seeds.
PackedCode pack_single(int n, const TypeVec& type, double rate_nats, double slack_exponent,
                       std::uint64_t seed);
PackedCode pack_superposition(int n, const JointTypeUX& joint, double rate_u_nats,
                              double rate_x_nats, double slack_exponent, std::uint64_t seed);
PackedCode pack_mac(int n, const MacTypeSpec& type, double rate_a_nats, double rate_b_nats,
                    double slack_exponent, std::uint64_t seed);

// From-scratch re-verification of every packing inequality family, exhaustive
// over conditional types. Keys match PackedCode::margins.
std::map<std::string, double> verify_packing(const PackedCode& code);

// Orbit target for verify_orbit_bounds: one sequence for single-terminal
// codes, a pair for superposition ((u, x)) and MAC ((a, b)) codes.
struct OrbitTarget {
  std::vector<int> first;
  std::vector<int> second;
};

struct OrbitReport {
  struct Entry {
    std::string equation;
    double worst_ratio = 0.0;
    long pairs_checked = 0;
  };
  std::vector<Entry> entries;
  double worst() const;
  bool ok() const { return worst() <= 1.0 + 1e-12; }
};

// Exact stabilizer-orbit averages of the codebook distribution against the
// i.i.d. product weight, per the applicable inequality family. Orbit sizes
// are products of per-block multinomials; the group is never enumerated.
OrbitReport verify_orbit_bounds(const PackedCode& code,
                                const std::vector<OrbitTarget>& extra_targets = {});

// Stabilizer handle: generators are transpositions inside equal-value blocks
// of the base sequence(s).
struct PermGroupHandle {
  std::vector<std::vector<int>> base;
  std::vector<std::pair<int, int>> generators;
  double log_order = 0.0;

  static PermGroupHandle of(const std::vector<std::vector<int>>& sequences);
};

}  // namespace cqcode
