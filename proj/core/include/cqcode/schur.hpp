#pragma once

#include <optional>
#include <vector>

#include "cqcode/channels.hpp"
#include "cqcode/qmat.hpp"
#include "cqcode/typeclasses.hpp"

namespace cqcode {

// One isotypic component of the symmetric-group action on (C^d)^{tensor n}.
struct IsotypicBlock {
  std::vector<int> partition;  // of n, at most d rows
  HermMat projector;
  long block_dim = 0;  // rank of the projector
};

// Full decomposition: projectors are mutually orthogonal and sum to the
// identity; block dims sum to d^n.
struct IsotypicDecomp {
  int n = 0;
  int d = 0;
  std::vector<IsotypicBlock> blocks;
};

IsotypicDecomp isotypic(int n, int d, std::size_t dim_cap = kDefaultDimCap);

// Equal-weight mixture of the normalized isotypic projectors; commutes with
// every permutation of the tensor factors.
struct UniversalState {
  int n = 0;
  int d = 0;
  DensityMat mat;
};

UniversalState rho_univ(int n, int d, std::size_t dim_cap = kDefaultDimCap);

// Tensor product of universal states over an arbitrary partition of the
// positions, conjugated into place. For partitions P refining Q the results
// commute, which is what the decoder projections rely on.
DensityMat rho_blocks(const std::vector<std::vector<int>>& blocks, int d,
                      std::size_t dim_cap = kDefaultDimCap);

// rho for one word: universal states over the word's per-symbol blocks.
DensityMat rho_of_word(const std::vector<int>& word, int d,
                       std::size_t dim_cap = kDefaultDimCap);

// Positions of each distinct value tuple, ordered by first occurrence of the
// tuple (one sequence: per-symbol blocks; several: their joint refinement).
std::vector<std::vector<int>> value_blocks(const std::vector<const std::vector<int>*>& seqs);

// Common eigenbasis of pairwise-commuting Hermitian operators, built by
// degeneracy-safe block refinement. Throws NumericalFailure when a pairwise
// commutator exceeds tol.
Mat common_eigenbasis(const std::vector<HermMat>& ops, double tol = 1e-8);

// POVM from square-root normalization of test operators. `elements` are
// message-indexed; `remainder` absorbs the kernel of the test sum (counted
// as an error for every message). `tests` keeps the pre-normalization
// operators for diagnostics.
struct DecoderPOVM {
  std::vector<HermMat> elements;
  HermMat remainder = HermMat(Mat{});
  std::vector<HermMat> tests;

  int dim() const { return remainder.dim(); }
};

// Checks PSD elements (>= -1e-9) and completeness (1e-8).
void validate_povm(const DecoderPOVM& povm);

DecoderPOVM sqrt_measurement(std::vector<HermMat> tests);

struct BcdDecoders {
  DecoderPOVM y;  // over (j, k), j-major
  DecoderPOVM z;  // over j
};

// Universal decoders for a superposition code: spectral-threshold projections
// among the commuting family (rho_word, rho_cloud, rho_univ), square-root
// normalized. The channel pair supplies the output dimensions only.
BcdDecoders build_bcd_decoders(const BCDPair& pair, const PackedCode& code, double slack_a,
                               double slack_b, std::size_t dim_cap = kDefaultDimCap);

enum class MacDecodeMode { joint, separate, alt };

struct MacDecoders {
  MacDecodeMode mode = MacDecodeMode::joint;
  std::optional<DecoderPOVM> joint;  // (j, k) j-major
  std::optional<DecoderPOVM> a;     // over j
  std::optional<DecoderPOVM> b;     // over k
};

MacDecoders build_mac_decoders(const MACChannel& mac, const PackedCode& code, double slack_a,
                               double slack_b, MacDecodeMode mode,
                               std::size_t dim_cap = kDefaultDimCap);

// Gentle-operator conversion of a separate decoder into a joint one:
// D_{j,k} = B_k^{1/2} A_j B_k^{1/2}.
DecoderPOVM convert_separate_to_joint(const DecoderPOVM& povm_a, const DecoderPOVM& povm_b);

// n-fold product states of a codeword.
DensityMat channel_word_state(const CQChannel& w, const std::vector<int>& word,
                              std::size_t dim_cap = kDefaultDimCap);
DensityMat mac_word_state(const MACChannel& w, const std::vector<int>& a_word,
                          const std::vector<int>& b_word,
                          std::size_t dim_cap = kDefaultDimCap);

// Exact average error: mean over messages of Tr rho_m (I - D_m).
double error_probability(const std::vector<DensityMat>& message_states, const DecoderPOVM& povm);

struct BcdErrors {
  double eps_y = 0.0;
  double eps_z = 0.0;
};
BcdErrors bcd_error_probability(const BCDPair& pair, const PackedCode& code,
                                const BcdDecoders& dec, std::size_t dim_cap = kDefaultDimCap);

double mac_error_probability(const MACChannel& mac, const PackedCode& code,
                             const DecoderPOVM& joint, std::size_t dim_cap = kDefaultDimCap);

struct SeparateErrors {
  double eps_a = 0.0;
  double eps_b = 0.0;
};
SeparateErrors mac_error_probability_separate(const MACChannel& mac, const PackedCode& code,
                                              const DecoderPOVM& povm_a,
                                              const DecoderPOVM& povm_b,
                                              std::size_t dim_cap = kDefaultDimCap);

// Average missed-detection and false-alarm weights of the unnormalized tests,
// the two sides of the square-root-measurement error bound.
struct HnTerms {
  double miss = 0.0;
  double false_alarm = 0.0;
};
HnTerms hn_terms(const std::vector<DensityMat>& message_states,
                 const std::vector<HermMat>& tests);

}  // namespace cqcode
