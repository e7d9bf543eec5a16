#pragma once

#include <cmath>

#include "explorego/neural/mlp.hpp"

namespace explorego::neural {

/// Bias-corrected Adam over one Mlp's parameters. Stepping several Adam
/// instances together (actor + critic, or heads + trunk) is equivalent to a
/// single optimiser over the concatenated parameters because the update is
/// element-wise.
template <class T>
struct Adam {
  T lr = T(1e-3);
  T beta1 = T(0.9);
  T beta2 = T(0.999);
  T eps = T(1e-8);
  long step = 0;

  std::vector<std::vector<T>> m_w, v_w, m_b, v_b;

  void init_like(const Mlp<T>& net) {
    const size_t n = net.layers.size();
    m_w.resize(n); v_w.resize(n); m_b.resize(n); v_b.resize(n);
    for (size_t l = 0; l < n; ++l) {
      m_w[l].assign(net.layers[l].w.size(), T(0));
      v_w[l].assign(net.layers[l].w.size(), T(0));
      m_b[l].assign(net.layers[l].b.size(), T(0));
      v_b[l].assign(net.layers[l].b.size(), T(0));
    }
  }

  void update(Mlp<T>& net, const Grads<T>& g) {
    ++step;
    const T bc1 = T(1) - std::pow(beta1, T(step));
    const T bc2 = T(1) - std::pow(beta2, T(step));
    auto apply = [&](std::vector<T>& p, const std::vector<T>& grad, std::vector<T>& m,
                     std::vector<T>& v) {
      for (size_t i = 0; i < p.size(); ++i) {
        m[i] = beta1 * m[i] + (T(1) - beta1) * grad[i];
        v[i] = beta2 * v[i] + (T(1) - beta2) * grad[i] * grad[i];
        const T m_hat = m[i] / bc1;
        const T v_hat = v[i] / bc2;
        p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
      }
    };
    for (size_t l = 0; l < net.layers.size(); ++l) {
      apply(net.layers[l].w, g.dw[l], m_w[l], v_w[l]);
      apply(net.layers[l].b, g.db[l], m_b[l], v_b[l]);
    }
  }
};

/// Polyak averaging for target networks: target <- tau * online + (1 - tau)
/// * target. tau = 1 copies, tau = 0 is a no-op.
template <class T>
void soft_update(Mlp<T>& target, const Mlp<T>& online, T tau) {
  check(target.layers.size() == online.layers.size(), "soft_update shape mismatch");
  for (size_t l = 0; l < target.layers.size(); ++l) {
    auto& t = target.layers[l];
    const auto& o = online.layers[l];
    for (size_t i = 0; i < t.w.size(); ++i) t.w[i] = tau * o.w[i] + (T(1) - tau) * t.w[i];
    for (size_t i = 0; i < t.b.size(); ++i) t.b[i] = tau * o.b[i] + (T(1) - tau) * t.b[i];
  }
}

}  // namespace explorego::neural
