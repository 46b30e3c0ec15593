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

#include "specjacobi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace specjacobi {

SequenceDistribution::SequenceDistribution(std::size_t vocab_size, std::size_t length)
    : vocab_size_(vocab_size), length_(length) {
  if (vocab_size < 1) throw std::invalid_argument("sequence distribution: empty vocabulary");
  std::size_t count = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (count > kMaxEnumeratedSequences / vocab_size)
      throw std::invalid_argument("sequence distribution: V^L exceeds 1e6");
    count *= vocab_size;
  }
  probs_.assign(count, 0.0);
}

std::size_t SequenceDistribution::index_of(std::span<const TokenId> sequence) const {
  if (sequence.size() != length_) throw std::invalid_argument("sequence distribution: wrong length");
  std::size_t index = 0;
  for (TokenId t : sequence) {
    if (t >= vocab_size_) throw std::invalid_argument("sequence distribution: token outside vocabulary");
    index = index * vocab_size_ + t;
  }
  return index;
}

std::vector<TokenId> SequenceDistribution::sequence_at(std::size_t index) const {
  std::vector<TokenId> seq(length_);
  for (std::size_t i = length_; i-- > 0;) {
    seq[i] = static_cast<TokenId>(index % vocab_size_);
    index /= vocab_size_;
  }
  return seq;
}

double SequenceDistribution::total() const noexcept {
  double sum = 0.0;
  for (double p : probs_) sum += p;
  return sum;
}

Distribution one_step_marginal(const Distribution& d_ref, const Distribution& d_new) {
  if (d_ref.size() != d_new.size()) throw std::invalid_argument("one_step_marginal: size mismatch");
  const std::size_t vocab = d_new.size();
  std::vector<double> accept(vocab), excess(vocab);
  double reject_mass = 0.0;
  for (std::size_t v = 0; v < vocab; ++v) {
    const auto t = static_cast<TokenId>(v);
    // P(draft = x, accepted) = d_ref[x] * min(1, d_new[x] / d_ref[x]).
    accept[v] = d_ref[t] * std::min(1.0, safe_ratio(d_new[t], d_ref[t]));
    excess[v] = std::max(0.0, d_new[t] - d_ref[t]);
    reject_mass += excess[v];
  }
  std::vector<double> marginal(vocab);
  for (std::size_t v = 0; v < vocab; ++v) {
    const double residual = reject_mass > 0.0 ? excess[v] / reject_mass : 0.0;
    marginal[v] = accept[v] + reject_mass * residual;
  }
  return Distribution(std::move(marginal));
}

namespace {

void enumerate_from(WindowEvaluator& evaluator, std::vector<TokenId>& prefix, double mass,
                    std::size_t index, SequenceDistribution& out) {
  if (prefix.size() == out.length()) {
    out.at(index) = mass;
    return;
  }
  const TokenId placeholder[1] = {0};
  const Distribution next = evaluator.eval_window(prefix, placeholder)[0];
  for (std::size_t v = 0; v < out.vocab_size(); ++v) {
    const double p = next[static_cast<TokenId>(v)];
    if (p <= 0.0) continue;
    prefix.push_back(static_cast<TokenId>(v));
    enumerate_from(evaluator, prefix, mass * p, index * out.vocab_size() + v, out);
    prefix.pop_back();
  }
}

}  // namespace

SequenceDistribution enumerate_ar_distribution(const LoadedModel& model, const DecodeConfig& config) {
  validate(model.spec);
  validate(config, model.spec.vocab_size);
  SequenceDistribution out(model.spec.vocab_size, config.total_tokens());
  WindowEvaluator evaluator(model.model, ShapingOptions::from(model.spec, config));
  std::vector<TokenId> prefix;
  enumerate_from(evaluator, prefix, 1.0, 0, out);
  return out;
}

SequenceDistribution mc_decode_distribution(const LoadedModel& model, const DecodeConfig& config,
                                            std::uint64_t trials, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("mc_decode_distribution: trials must be >= 1");
  SequenceDistribution out(model.spec.vocab_size, config.total_tokens());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<std::vector<std::uint64_t>> counts(threads,
                                                 std::vector<std::uint64_t>(out.support_capacity(), 0));
  auto worker = [&](unsigned w) {
    DecodeConfig run = config;
    for (std::uint64_t i = w; i < trials; i += threads) {
      run.seed = derive_seed(config.seed, i);
      const RunResult r = decode(model, run);
      ++counts[w][out.index_of(r.tokens)];
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
  }
  for (std::size_t i = 0; i < out.support_capacity(); ++i) {
    std::uint64_t c = 0;
    for (const auto& per : counts) c += per[i];
    out.at(i) = static_cast<double>(c) / static_cast<double>(trials);
  }
  return out;
}

double tv_distance(const SequenceDistribution& p, const SequenceDistribution& q) {
  if (p.vocab_size() != q.vocab_size() || p.length() != q.length())
    throw std::invalid_argument("tv_distance: mismatched shapes");
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.support_capacity(); ++i) l1 += std::abs(p.at(i) - q.at(i));
  return 0.5 * l1;
}

namespace {

Distribution random_distribution(std::size_t vocab, bool sparse, Rng& rng) {
  std::vector<double> w(vocab);
  for (auto& x : w) x = -std::log1p(-rng.uniform());
  if (sparse && vocab > 1) {
    // Keep a random nonempty subset, as top-K truncation would.
    const std::size_t keep = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(vocab));
    std::vector<std::size_t> order(vocab);
    for (std::size_t i = 0; i < vocab; ++i) order[i] = i;
    for (std::size_t i = vocab - 1; i > 0; --i) {
      const auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
      std::swap(order[i], order[std::min(k, i)]);
    }
    for (std::size_t i = std::min(keep, vocab); i < vocab; ++i) w[order[i]] = 0.0;
  }
  return Distribution::normalized(std::move(w));
}

}  // namespace

double one_step_identity_max_error(std::span<const std::size_t> vocab_sizes, std::size_t pairs_per_vocab,
                                   std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t vocab : vocab_sizes) {
    for (std::size_t i = 0; i < pairs_per_vocab; ++i) {
      const bool sparse = i % 3 == 2;
      const Distribution d_ref = random_distribution(vocab, sparse, rng);
      const Distribution d_new = random_distribution(vocab, sparse, rng);
      const Distribution marginal = one_step_marginal(d_ref, d_new);
      for (std::size_t v = 0; v < vocab; ++v) {
        const auto t = static_cast<TokenId>(v);
        worst = std::max(worst, std::abs(marginal[t] - d_new[t]));
      }
    }
  }
  return worst;
}

ModelSpec oracle_model_spec() {
  ModelSpec spec;
  spec.kind = ModelKind::HashLogit;
  spec.vocab_size = 4;
  spec.hash.context_len = 2;
  spec.hash.sharpness = 3.0;
  spec.hash.model_seed = 0;
  return spec;
}

DecodeConfig oracle_decode_config(DecodeMode mode) {
  DecodeConfig config;
  config.mode = mode;
  config.window = 2;
  config.init = InitStrategy::Random;
  config.grid = {2, 2};
  config.seed = 20260101;
  return config;
}

OracleVerdict run_oracle_suite(std::uint64_t trials, unsigned threads) {
  OracleVerdict verdict;
  const std::size_t vocabs[] = {2, 3, 8, 64};
  verdict.identity_max_err = one_step_identity_max_error(vocabs, 10'000, 7);

  const LoadedModel model = load_model(oracle_model_spec());
  const SequenceDistribution exact = enumerate_ar_distribution(model, oracle_decode_config(DecodeMode::AR));
  verdict.tv_sjd =
      tv_distance(exact, mc_decode_distribution(model, oracle_decode_config(DecodeMode::SJD), trials, threads));
  verdict.tv_sjdpp = tv_distance(
      exact, mc_decode_distribution(model, oracle_decode_config(DecodeMode::SJDPP), trials, threads));
  verdict.pass = verdict.identity_max_err < kIdentityTolerance && verdict.tv_sjd < kSjdTvTolerance &&
                 verdict.tv_sjdpp < kSjdppTvTolerance;
  return verdict;
}

}  // namespace specjacobi
