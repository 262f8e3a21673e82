#pragma once

#include <array>
#include <span>
#include <vector>

#include "uavlora/neural.hpp"

namespace uavlora {

// Recurrent actor: observation -> dense+ReLU -> GRU -> per-slot categorical
// heads over (SF, TP, BW). All slots share the trunk; each slot has its own
// three heads.
class PolicyNet {
 public:
  PolicyNet(int quota, int hidden, std::array<int, 3> head_sizes);

  struct Fwd {
    TrunkCache trunk;
    std::vector<double> logp;  // quota * slot_stride, log-probabilities
  };

  ParamVector allocate(Rng& rng) const;

  void forward(const ParamVector& pv, std::span<const double> obs,
               std::span<const double> h_in, Fwd& fwd) const;

  // dlogp holds dLoss/dlogp (same layout as Fwd::logp); entries for padded
  // slots must be zero.
  void backward(ParamVector& pv, const Fwd& fwd,
                std::span<const double> dlogp) const;

  int quota() const { return quota_; }
  int hidden_dim() const { return hidden_; }
  int input_dim() const { return quota_ * 4; }
  int head_size(int head) const { return head_sizes_[head]; }
  int slot_stride() const { return stride_; }
  int head_offset(int slot, int head) const;

  std::span<const double> head_logp(const Fwd& fwd, int slot, int head) const {
    return {fwd.logp.data() + head_offset(slot, head),
            static_cast<std::size_t>(head_sizes_[head])};
  }

 private:
  int quota_;
  int hidden_;
  std::array<int, 3> head_sizes_;
  int stride_;
  ParamVector proto_;
  TrunkLayout trunk_;
  std::vector<std::array<DenseLayout, 3>> heads_;  // per slot
};

// Centralized critic: global state -> dense+ReLU -> GRU -> scalar value.
class CriticNet {
 public:
  CriticNet(int in_dim, int hidden);

  struct Fwd {
    TrunkCache trunk;
    double value = 0.0;
  };

  ParamVector allocate(Rng& rng) const;
  double forward(const ParamVector& pv, std::span<const double> x,
                 std::span<const double> h_in, Fwd& fwd) const;
  void backward(ParamVector& pv, const Fwd& fwd, double dvalue) const;

  int input_dim() const { return in_dim_; }
  int hidden_dim() const { return hidden_; }

 private:
  int in_dim_;
  int hidden_;
  ParamVector proto_;
  TrunkLayout trunk_;
  DenseLayout head_;
};

}  // namespace uavlora
