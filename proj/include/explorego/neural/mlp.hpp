#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "explorego/check.hpp"
#include "explorego/rng.hpp"

namespace explorego::neural {

/// Dense feed-forward network: affine layers with rectifier activations on
/// hidden layers and (by default) an identity output. Weights are row-major
/// [out x in]. Templated on the scalar type; agents run the float
/// instantiation, tests use double where tight tolerances are needed.
template <class T>
struct Mlp {
  struct Layer {
    int in = 0, out = 0;
    std::vector<T> w;  // out * in, row-major
    std::vector<T> b;  // out
  };

  std::vector<Layer> layers;
  /// Trunk networks (shared encoders) rectify their final layer too.
  bool relu_output = false;

  int input_size() const { return layers.empty() ? 0 : layers.front().in; }
  int output_size() const { return layers.empty() ? 0 : layers.back().out; }

  size_t param_count() const {
    size_t n = 0;
    for (const auto& l : layers) n += l.w.size() + l.b.size();
    return n;
  }

  /// Scaled-uniform fan-in init, U(-sqrt(3/fan_in), sqrt(3/fan_in)), biases
  /// zero. The final layer's weights are multiplied by last_layer_scale
  /// (0.01 for actor heads keeps initial policies near uniform).
  static Mlp make(const std::vector<int>& sizes, Rng& rng, T last_layer_scale = T(1),
                  bool relu_output = false) {
    check(sizes.size() >= 2, "Mlp needs at least an input and an output size");
    Mlp net;
    net.relu_output = relu_output;
    net.layers.resize(sizes.size() - 1);
    for (size_t l = 0; l + 1 < sizes.size(); ++l) {
      auto& layer = net.layers[l];
      layer.in = sizes[l];
      layer.out = sizes[l + 1];
      check(layer.in > 0 && layer.out > 0, "Mlp layer sizes must be positive");
      layer.w.resize(static_cast<size_t>(layer.in) * layer.out);
      layer.b.assign(layer.out, T(0));
      const T bound = std::sqrt(T(3) / T(layer.in));
      const T scale = (l + 2 == sizes.size()) ? last_layer_scale : T(1);
      for (auto& w : layer.w) w = scale * static_cast<T>(rng.uniform(-double(bound), double(bound)));
    }
    return net;
  }
};

/// Per-layer inputs retained by forward for the backward pass. x[l] is the
/// input to layer l; x[layers.size()] is the network output.
template <class T>
struct Cache {
  std::vector<std::vector<T>> x;
};

/// Parameter gradients with the same shapes as the owning Mlp. backward()
/// accumulates, so zero() between batches.
template <class T>
struct Grads {
  std::vector<std::vector<T>> dw, db;

  void init_like(const Mlp<T>& net) {
    dw.resize(net.layers.size());
    db.resize(net.layers.size());
    for (size_t l = 0; l < net.layers.size(); ++l) {
      dw[l].assign(net.layers[l].w.size(), T(0));
      db[l].assign(net.layers[l].b.size(), T(0));
    }
  }

  void zero() {
    for (auto& g : dw) std::fill(g.begin(), g.end(), T(0));
    for (auto& g : db) std::fill(g.begin(), g.end(), T(0));
  }

  void scale(T factor) {
    for (auto& g : dw)
      for (auto& v : g) v *= factor;
    for (auto& g : db)
      for (auto& v : g) v *= factor;
  }
};

template <class T>
void forward(const Mlp<T>& net, std::span<const T> x, std::vector<T>& y,
             Cache<T>* cache = nullptr) {
  check(static_cast<int>(x.size()) == net.input_size(), "forward input size mismatch");
  if (cache != nullptr) {
    cache->x.resize(net.layers.size() + 1);
    cache->x[0].assign(x.begin(), x.end());
  }
  std::vector<T> buf(x.begin(), x.end());
  std::vector<T> next;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    next.assign(layer.out, T(0));
    for (int o = 0; o < layer.out; ++o) {
      const T* w = layer.w.data() + static_cast<size_t>(o) * layer.in;
      T acc = layer.b[o];
      for (int i = 0; i < layer.in; ++i) acc += w[i] * buf[i];
      next[o] = acc;
    }
    const bool rectify = (l + 1 < net.layers.size()) || net.relu_output;
    if (rectify)
      for (auto& v : next) v = v > T(0) ? v : T(0);
    buf.swap(next);
    if (cache != nullptr) cache->x[l + 1] = buf;
  }
  y = std::move(buf);
}

/// Exact reverse-mode gradients. dy is dL/d(output); parameter gradients are
/// accumulated into g, and dL/d(input) is written to dx when non-null.
template <class T>
void backward(const Mlp<T>& net, const Cache<T>& cache, std::span<const T> dy,
              Grads<T>& g, std::vector<T>* dx = nullptr) {
  check(cache.x.size() == net.layers.size() + 1, "backward cache does not match net");
  check(static_cast<int>(dy.size()) == net.output_size(), "backward dy size mismatch");

  std::vector<T> delta(dy.begin(), dy.end());
  std::vector<T> prev;
  for (size_t l = net.layers.size(); l-- > 0;) {
    const auto& layer = net.layers[l];
    const bool rectified = (l + 1 < net.layers.size()) || net.relu_output;
    if (rectified) {
      const auto& out = cache.x[l + 1];
      for (int o = 0; o < layer.out; ++o)
        if (out[o] <= T(0)) delta[o] = T(0);
    }
    const auto& in = cache.x[l];
    for (int o = 0; o < layer.out; ++o) {
      const T d = delta[o];
      g.db[l][o] += d;
      if (d == T(0)) continue;
      T* dw = g.dw[l].data() + static_cast<size_t>(o) * layer.in;
      for (int i = 0; i < layer.in; ++i) dw[i] += d * in[i];
    }
    if (l > 0 || dx != nullptr) {
      prev.assign(layer.in, T(0));
      for (int o = 0; o < layer.out; ++o) {
        const T d = delta[o];
        if (d == T(0)) continue;
        const T* w = layer.w.data() + static_cast<size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) prev[i] += d * w[i];
      }
      delta.swap(prev);
    }
  }
  if (dx != nullptr) *dx = std::move(delta);
}

/// Joint L2 norm over several gradient sets, accumulated in double.
template <class T>
double global_grad_norm(std::span<Grads<T>* const> all) {
  double sum = 0.0;
  for (const auto* g : all) {
    for (const auto& layer : g->dw)
      for (T v : layer) sum += double(v) * double(v);
    for (const auto& layer : g->db)
      for (T v : layer) sum += double(v) * double(v);
  }
  return std::sqrt(sum);
}

/// Rescales all gradients jointly so their global L2 norm is at most
/// max_norm; no-op when already within bounds.
template <class T>
void clip_global_norm(std::span<Grads<T>* const> all, T max_norm) {
  check(max_norm > T(0), "clip_global_norm needs a positive max_norm");
  const double norm = global_grad_norm(all);
  if (norm <= double(max_norm)) return;
  const T factor = static_cast<T>(double(max_norm) / norm);
  for (auto* g : all) g->scale(factor);
}

template <class T>
void clip_global_norm(Grads<T>& g, T max_norm) {
  Grads<T>* one[] = {&g};
  clip_global_norm(std::span<Grads<T>* const>(one), max_norm);
}

}  // namespace explorego::neural
