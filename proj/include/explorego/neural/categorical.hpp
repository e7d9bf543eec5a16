#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "explorego/check.hpp"
#include "explorego/rng.hpp"

namespace explorego::neural {

/// Categorical distribution from unnormalised logits via a max-shifted
/// softmax. Sampling uses inverse-CDF on the caller's RNG stream; log
/// probabilities and entropy are in nats.
template <class T>
struct Categorical {
  std::vector<T> probs;
  std::vector<T> logp;

  static Categorical from_logits(std::span<const T> logits) {
    check(!logits.empty(), "categorical needs at least one logit");
    Categorical d;
    d.probs.resize(logits.size());
    d.logp.resize(logits.size());
    T max_logit = logits[0];
    for (T v : logits) max_logit = std::max(max_logit, v);
    double total = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
      const double e = std::exp(double(logits[i] - max_logit));
      d.probs[i] = static_cast<T>(e);
      total += e;
    }
    const double log_total = std::log(total);
    for (size_t i = 0; i < logits.size(); ++i) {
      d.probs[i] = static_cast<T>(double(d.probs[i]) / total);
      d.logp[i] = static_cast<T>(double(logits[i] - max_logit) - log_total);
    }
    return d;
  }

  int sample(Rng& rng) const {
    const double u = rng.next_double();
    double cum = 0.0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += double(probs[i]);
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  int mode() const {
    int best = 0;
    for (size_t i = 1; i < probs.size(); ++i)
      if (probs[i] > probs[best]) best = static_cast<int>(i);
    return best;
  }

  T log_prob(int a) const { return logp[a]; }

  T entropy() const {
    double h = 0.0;
    for (size_t i = 0; i < probs.size(); ++i)
      if (probs[i] > T(0)) h -= double(probs[i]) * double(logp[i]);
    return static_cast<T>(h);
  }
};

}  // namespace explorego::neural
