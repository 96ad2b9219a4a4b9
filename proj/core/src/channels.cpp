#include "cqcode/channels.hpp"

#include <cmath>
#include <string>

namespace cqcode {

namespace {

void check_states(const std::vector<DensityMat>& st, const char* what) {
  if (st.empty()) throw DomainError(std::string(what) + ": no states");
  const int d = st.front().dim();
  for (const auto& s : st) {
    if (s.dim() != d) throw ShapeError(std::string(what) + ": states have mixed output dims");
  }
}

}  // namespace

CQChannel::CQChannel(int input_size_, std::vector<DensityMat> st)
    : input_size(input_size_), states(std::move(st)) {
  check_states(states, "CQChannel");
  if (static_cast<std::size_t>(input_size) != states.size()) {
    throw ShapeError("CQChannel: input_size does not match number of states");
  }
  out_dim = states.front().dim();
}

MACChannel::MACChannel(int a_size_, int b_size_, std::vector<DensityMat> st)
    : a_size(a_size_), b_size(b_size_), states(std::move(st)) {
  check_states(states, "MACChannel");
  if (states.size() != static_cast<std::size_t>(a_size) * static_cast<std::size_t>(b_size)) {
    throw ShapeError("MACChannel: grid incomplete");
  }
  out_dim = states.front().dim();
}

BCDPair::BCDPair(CQChannel y, CQChannel z) : w_y(std::move(y)), w_z(std::move(z)) {
  if (w_y.input_size != w_z.input_size) {
    throw ShapeError("BCDPair: input alphabets differ");
  }
}

CompoundFamily CompoundFamily::of_bcd(std::vector<BCDPair> members) {
  if (members.empty()) throw DomainError("CompoundFamily: empty family");
  const int in = members.front().input_size();
  for (const auto& m : members) {
    if (m.input_size() != in) throw ShapeError("CompoundFamily: members disagree on |X|");
  }
  CompoundFamily f{FamilyKind::bcd, std::move(members), {}};
  return f;
}

CompoundFamily CompoundFamily::of_mac(std::vector<MACChannel> members) {
  if (members.empty()) throw DomainError("CompoundFamily: empty family");
  const int a = members.front().a_size, b = members.front().b_size;
  for (const auto& m : members) {
    if (m.a_size != a || m.b_size != b) {
      throw ShapeError("CompoundFamily: members disagree on alphabet sizes");
    }
  }
  CompoundFamily f{FamilyKind::mac, {}, std::move(members)};
  return f;
}

namespace {

DensityMat diag_state(const std::vector<double>& row) {
  double sum = 0.0;
  for (double p : row) {
    if (p < -1e-12) throw DomainError("classical_embed: negative entry " + std::to_string(p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError("classical_embed: row sums to " + std::to_string(sum));
  }
  std::vector<double> clipped = row;
  for (double& p : clipped) p = std::max(p, 0.0);
  return DensityMat(HermMat::diag(clipped));
}

}  // namespace

CQChannel classical_embed(const std::vector<std::vector<double>>& transition) {
  if (transition.empty()) throw DomainError("classical_embed: empty matrix");
  const std::size_t cols = transition.front().size();
  std::vector<DensityMat> states;
  states.reserve(transition.size());
  for (const auto& row : transition) {
    if (row.size() != cols) throw ShapeError("classical_embed: ragged rows");
    states.push_back(diag_state(row));
  }
  return CQChannel(static_cast<int>(transition.size()), std::move(states));
}

MACChannel classical_embed_mac(int a_size, int b_size,
                               const std::vector<std::vector<double>>& transition) {
  CQChannel flat = classical_embed(transition);
  if (flat.input_size != a_size * b_size) {
    throw ShapeError("classical_embed_mac: row count != |A||B|");
  }
  return MACChannel(a_size, b_size, std::move(flat.states));
}

double binary_entropy_bits(double p) {
  if (p < 0.0 || p > 1.0) throw DomainError("binary_entropy_bits: p out of [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double binary_entropy_inverse_bits(double value) {
  if (value < 0.0 || value > 1.0 + 1e-12) {
    throw DomainError("binary_entropy_inverse_bits: value out of [0,1]");
  }
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy_bits(mid) < value) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double example1_p0() { return binary_entropy_inverse_bits(0.5); }

CompoundFamily build_example1() {
  // theta = 0: Y = A xor B on a 2-dimensional output.
  std::vector<std::vector<double>> s2mac(4, std::vector<double>(2, 0.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) s2mac[static_cast<std::size_t>(a * 2 + b)][a ^ b] = 1.0;

  // theta = 1: (A xor Z_A, B xor Z_B) with independent BSC(p0) noise, output
  // indexed y = 2*y_a + y_b.
  const double p0 = example1_p0();
  std::vector<std::vector<double>> prod(4, std::vector<double>(4, 0.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ya = 0; ya < 2; ++ya)
        for (int yb = 0; yb < 2; ++yb) {
          const double pa = (ya == a) ? 1.0 - p0 : p0;
          const double pb = (yb == b) ? 1.0 - p0 : p0;
          prod[static_cast<std::size_t>(a * 2 + b)][static_cast<std::size_t>(ya * 2 + yb)] =
              pa * pb;
        }

  std::vector<MACChannel> members;
  members.push_back(classical_embed_mac(2, 2, s2mac));
  members.push_back(classical_embed_mac(2, 2, prod));
  return CompoundFamily::of_mac(std::move(members));
}

CompoundFamily build_example2() {
  // theta = 0: Y = 0 only when A = B = 0.
  std::vector<std::vector<double>> or_ch(4, std::vector<double>(2, 0.0));
  // theta = 1: Y = 1 only when A = B = 1.
  std::vector<std::vector<double>> and_ch(4, std::vector<double>(2, 0.0));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      or_ch[static_cast<std::size_t>(a * 2 + b)][(a == 0 && b == 0) ? 0 : 1] = 1.0;
      and_ch[static_cast<std::size_t>(a * 2 + b)][(a == 1 && b == 1) ? 1 : 0] = 1.0;
    }
  std::vector<MACChannel> members;
  members.push_back(classical_embed_mac(2, 2, or_ch));
  members.push_back(classical_embed_mac(2, 2, and_ch));
  return CompoundFamily::of_mac(std::move(members));
}

namespace {

DensityMat tilt_state(const DensityMat& classical, double phi) {
  const int d = classical.dim();
  int k = 0;
  while ((1 << k) < d) ++k;
  if ((1 << k) != d) throw DomainError("build_quantum_tilt: output dim is not a power of 2");
  const double offdiag = (classical.raw() - Mat(classical.raw().diagonal().asDiagonal()))
                             .cwiseAbs()
                             .maxCoeff();
  if (offdiag > 1e-12) throw DomainError("build_quantum_tilt: base outputs must be diagonal");

  Eigen::Vector2cd v0, v1;
  v0 << std::cos(phi), std::sin(phi);
  v1 << 0.0, 1.0;
  const Mat proj0 = v0 * v0.adjoint();
  const Mat proj1 = v1 * v1.adjoint();

  Mat out = Mat::Zero(d, d);
  for (int y = 0; y < d; ++y) {
    const double w = classical.raw()(y, y).real();
    if (w <= 0.0) continue;
    Mat factor = Mat::Identity(1, 1);
    for (int bit = k - 1; bit >= 0; --bit) {
      const int val = (y >> bit) & 1;
      const Mat& p = (val == 0) ? proj0 : proj1;
      Mat next(factor.rows() * 2, factor.cols() * 2);
      for (int i = 0; i < factor.rows(); ++i)
        for (int j = 0; j < factor.cols(); ++j) next.block(i * 2, j * 2, 2, 2) = factor(i, j) * p;
      factor = std::move(next);
    }
    out += w * factor;
  }
  return DensityMat(HermMat(std::move(out)));
}

}  // namespace

CompoundFamily build_quantum_tilt(const CompoundFamily& base, double phi) {
  if (base.kind == FamilyKind::mac) {
    std::vector<MACChannel> members;
    members.reserve(base.mac_members.size());
    for (const auto& m : base.mac_members) {
      std::vector<DensityMat> st;
      st.reserve(m.states.size());
      for (const auto& s : m.states) st.push_back(tilt_state(s, phi));
      members.emplace_back(m.a_size, m.b_size, std::move(st));
    }
    return CompoundFamily::of_mac(std::move(members));
  }
  std::vector<BCDPair> members;
  members.reserve(base.bcd_members.size());
  for (const auto& m : base.bcd_members) {
    std::vector<DensityMat> sy, sz;
    for (const auto& s : m.w_y.states) sy.push_back(tilt_state(s, phi));
    for (const auto& s : m.w_z.states) sz.push_back(tilt_state(s, phi));
    members.emplace_back(CQChannel(m.w_y.input_size, std::move(sy)),
                         CQChannel(m.w_z.input_size, std::move(sz)));
  }
  return CompoundFamily::of_bcd(std::move(members));
}

CompoundFamily build_channel_swap(const CQChannel& w) {
  const int x = w.input_size;
  std::vector<DensityMat> listen_a, listen_b;
  listen_a.reserve(static_cast<std::size_t>(x) * static_cast<std::size_t>(x));
  listen_b.reserve(listen_a.capacity());
  for (int a = 0; a < x; ++a)
    for (int b = 0; b < x; ++b) {
      listen_a.push_back(w.at(a));
      listen_b.push_back(w.at(b));
    }
  std::vector<MACChannel> members;
  members.emplace_back(x, x, std::move(listen_a));
  members.emplace_back(x, x, std::move(listen_b));
  return CompoundFamily::of_mac(std::move(members));
}

}  // namespace cqcode
