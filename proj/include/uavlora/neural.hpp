#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uavlora/rng.hpp"

namespace uavlora {

// Flat 64-bit parameter storage with named slices and a shape-aligned
// gradient buffer.
struct ParamVector {
  struct Slice {
    std::string name;
    std::size_t offset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;  // 1 for vectors

    std::size_t count() const { return rows * cols; }
  };

  std::vector<double> values;
  std::vector<double> grads;
  std::vector<Slice> layout;

  std::size_t add(const std::string& name, std::size_t rows, std::size_t cols);
  const Slice& find(const std::string& name) const;
  std::size_t size() const { return values.size(); }
  void zero_grads();
  double grad_norm() const;
  void clip_grad_norm(double max_norm);
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step_count = 0;
};

// Bias-corrected Adam step over the whole vector; grads are left untouched.
void adam_step(ParamVector& params, AdamState& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

// ---- math helpers ----

// Shifted log-softmax; logits and out may alias.
void log_softmax(std::span<const double> logits, std::span<double> out);
// Entropy of a categorical given its log-probabilities.
double entropy_from_logp(std::span<const double> logp);
// Inverse-CDF sample; u in [0,1).
int sample_from_logp(std::span<const double> logp, double u);
int argmax(std::span<const double> x);

// ---- recurrent trunk: dense embed + ReLU + GRU cell ----

struct TrunkLayout {
  std::size_t w_embed = 0, b_embed = 0;
  std::size_t w_ih = 0, w_hh = 0, b_ih = 0, b_hh = 0;
  int in_dim = 0;
  int hidden = 0;
};

TrunkLayout add_trunk(ParamVector& pv, const std::string& prefix, int in_dim,
                      int hidden);

// Everything the backward pass needs from one forward step.
struct TrunkCache {
  std::vector<double> x, e_pre, e, h_in;
  std::vector<double> gi, gh;      // 3H gate pre-activations, order r,z,n
  std::vector<double> r, z, n, h_out;
};

void trunk_forward(const ParamVector& pv, const TrunkLayout& L,
                   std::span<const double> x, std::span<const double> h_in,
                   TrunkCache& cache);

// Accumulates parameter gradients for dL/dh_out; gradients w.r.t. the
// incoming hidden state are added to dh_in when provided (hidden states are
// replayed from collection time during updates, so callers usually pass
// nothing).
void trunk_backward(ParamVector& pv, const TrunkLayout& L,
                    const TrunkCache& cache, std::span<const double> dh_out,
                    std::span<double> dh_in = {});

// ---- dense head ----

struct DenseLayout {
  std::size_t w = 0, b = 0;
  int in = 0, out = 0;
};

DenseLayout add_dense(ParamVector& pv, const std::string& prefix, int in,
                      int out);
void dense_forward(const ParamVector& pv, const DenseLayout& L,
                   std::span<const double> x, std::span<double> y);
void dense_backward(ParamVector& pv, const DenseLayout& L,
                    std::span<const double> x, std::span<const double> dy,
                    std::span<double> dx);

// Uniform +-sqrt(6/(fan_in+fan_out)) on matrices, zero on vectors (biases).
void init_params(ParamVector& pv, Rng& rng);

}  // namespace uavlora
