#pragma once

#include <vector>

#include "cqcode/qmat.hpp"

namespace cqcode {

// Classical-quantum channel x -> W_x on a fixed output space.
struct CQChannel {
  int input_size = 0;
  int out_dim = 0;
  std::vector<DensityMat> states;  // one per x

  CQChannel(int input_size, std::vector<DensityMat> st);
  const DensityMat& at(int x) const { return states.at(static_cast<std::size_t>(x)); }
};

// Two-sender channel (a, b) -> W_{a,b}, states stored row-major with b fastest.
struct MACChannel {
  int a_size = 0;
  int b_size = 0;
  int out_dim = 0;
  std::vector<DensityMat> states;

  MACChannel(int a_size, int b_size, std::vector<DensityMat> st);
  const DensityMat& at(int a, int b) const {
    return states.at(static_cast<std::size_t>(a) * static_cast<std::size_t>(b_size) +
                     static_cast<std::size_t>(b));
  }
};

// Broadcast channel with degraded message sets: a common input alphabet feeding
// receiver Y (private + common messages) and receiver Z (common message only).
struct BCDPair {
  CQChannel w_y;
  CQChannel w_z;

  BCDPair(CQChannel y, CQChannel z);
  int input_size() const { return w_y.input_size; }
};

enum class FamilyKind { bcd, mac };

// Finite theta-indexed family of channels sharing their input alphabet(s).
// Output dimensions may differ across members.
struct CompoundFamily {
  FamilyKind kind;
  std::vector<BCDPair> bcd_members;
  std::vector<MACChannel> mac_members;

  static CompoundFamily of_bcd(std::vector<BCDPair> members);
  static CompoundFamily of_mac(std::vector<MACChannel> members);
  std::size_t size() const {
    return kind == FamilyKind::bcd ? bcd_members.size() : mac_members.size();
  }
};

// Diagonal embedding of a classical channel given by a row-stochastic matrix.
CQChannel classical_embed(const std::vector<std::vector<double>>& transition);

// Same for a two-sender channel; row index is a * b_size + b.
MACChannel classical_embed_mac(int a_size, int b_size,
                               const std::vector<std::vector<double>>& transition);

// h(p) in bits.
double binary_entropy_bits(double p);
// Inverse of h on [0, 1/2], by bisection.
double binary_entropy_inverse_bits(double value);
// Crossover probability with h(p0) = 1/2 bits.
double example1_p0();

// Compound MAC of the sum-modulo-2 channel (theta = 0) and the product of two
// independent BSC(p0) channels (theta = 1).
CompoundFamily build_example1();

// Compound MAC of two deterministic binary-output channels: theta = 0 fires on
// "not both zero" (OR), theta = 1 fires on "both one" (AND).
CompoundFamily build_example2();

// Replace each classical outcome bit of a commuting (diagonal, qubit-factor)
// family by a qubit state: 0 -> cos(phi)|0> + sin(phi)|1>, 1 -> |1>.
CompoundFamily build_quantum_tilt(const CompoundFamily& base, double phi);

// Two-member MAC family that listens to sender A (theta = 0) or sender B
// (theta = 1) through the same one-sender channel.
CompoundFamily build_channel_swap(const CQChannel& w);

}  // namespace cqcode
