// Copyright 2026 The specjacobi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specjacobi/decoder.hpp"
#include "specjacobi/distribution.hpp"

namespace specjacobi {

/// Largest V^L the exact enumeration will accept.
inline constexpr std::size_t kMaxEnumeratedSequences = 1'000'000;

/// Dense law over all V^L token sequences. Sequences are indexed in base V
/// with the first token as the most significant digit.
class SequenceDistribution {
 public:
  /// Throws std::invalid_argument if V^L exceeds kMaxEnumeratedSequences.
  SequenceDistribution(std::size_t vocab_size, std::size_t length);

  std::size_t vocab_size() const noexcept { return vocab_size_; }
  std::size_t length() const noexcept { return length_; }
  std::size_t support_capacity() const noexcept { return probs_.size(); }

  std::size_t index_of(std::span<const TokenId> sequence) const;
  std::vector<TokenId> sequence_at(std::size_t index) const;

  double operator[](std::span<const TokenId> sequence) const { return probs_[index_of(sequence)]; }
  double& at(std::size_t index) { return probs_.at(index); }
  double at(std::size_t index) const { return probs_.at(index); }
  std::span<const double> probs() const noexcept { return probs_; }
  double total() const noexcept;

 private:
  std::size_t vocab_size_;
  std::size_t length_;
  std::vector<double> probs_;
};

/// Law of the token produced by one draft-then-verify step when the draft
/// was sampled from d_ref and verification targets d_new:
///   min(d_new, d_ref) + P_reject * normalize(max(0, d_new - d_ref)),
///   P_reject = sum_x max(0, d_new[x] - d_ref[x]).
/// Analytically equal to d_new for every pair.
Distribution one_step_marginal(const Distribution& d_ref, const Distribution& d_new);

/// Exact chain-rule law of the shaped autoregressive process over the
/// config's grid (L = H * W tokens).
SequenceDistribution enumerate_ar_distribution(const LoadedModel& model, const DecodeConfig& config);

/// Empirical law of decode() over `trials` runs; trial i uses seed
/// derive_seed(config.seed, i). `threads` = 0 picks the hardware count.
/// The result does not depend on the thread count.
SequenceDistribution mc_decode_distribution(const LoadedModel& model, const DecodeConfig& config,
                                            std::uint64_t trials, unsigned threads = 0);

/// Half the L1 distance. Throws std::invalid_argument on shape mismatch.
double tv_distance(const SequenceDistribution& p, const SequenceDistribution& q);

/// Max L-infinity error of one_step_marginal against d_new over
/// `pairs_per_vocab` random pairs per vocabulary size. Pairs are flat
/// Dirichlet draws, a third of them with entries zeroed to mimic top-K.
double one_step_identity_max_error(std::span<const std::size_t> vocab_sizes,
                                   std::size_t pairs_per_vocab, std::uint64_t seed);

/// Verdict of the `oracle` CLI subcommand.
struct OracleVerdict {
  double identity_max_err = 0.0;
  double tv_sjd = 0.0;
  double tv_sjdpp = 0.0;
  bool pass = false;
};

inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kSjdTvTolerance = 0.01;
inline constexpr double kSjdppTvTolerance = 0.05;

/// The tiny end-to-end configuration: HashLogit V=4, c=2, sharpness 3,
/// 2x2 grid, window 2, random init.
ModelSpec oracle_model_spec();
DecodeConfig oracle_decode_config(DecodeMode mode);

/// Runs the identity sweep (10,000 pairs at V in {2,3,8,64}) and the SJD /
/// SJD++ Monte Carlo comparisons with `trials` runs each.
OracleVerdict run_oracle_suite(std::uint64_t trials, unsigned threads = 0);

}  // namespace specjacobi
