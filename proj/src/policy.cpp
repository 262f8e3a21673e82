#include "uavlora/policy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavlora {

PolicyNet::PolicyNet(int quota, int hidden, std::array<int, 3> head_sizes)
    : quota_(quota),
      hidden_(hidden),
      head_sizes_(head_sizes),
      stride_(head_sizes[0] + head_sizes[1] + head_sizes[2]) {
  if (quota < 1 || hidden < 1) {
    throw std::invalid_argument("policy net needs quota >= 1, hidden >= 1");
  }
  trunk_ = add_trunk(proto_, "actor", input_dim(), hidden_);
  heads_.resize(quota_);
  for (int s = 0; s < quota_; ++s) {
    const std::string p = "actor.slot" + std::to_string(s);
    heads_[s][0] = add_dense(proto_, p + ".sf", hidden_, head_sizes_[0]);
    heads_[s][1] = add_dense(proto_, p + ".tp", hidden_, head_sizes_[1]);
    heads_[s][2] = add_dense(proto_, p + ".bw", hidden_, head_sizes_[2]);
  }
}

int PolicyNet::head_offset(int slot, int head) const {
  int off = slot * stride_;
  for (int h = 0; h < head; ++h) off += head_sizes_[h];
  return off;
}

ParamVector PolicyNet::allocate(Rng& rng) const {
  ParamVector pv = proto_;
  init_params(pv, rng);
  return pv;
}

void PolicyNet::forward(const ParamVector& pv, std::span<const double> obs,
                        std::span<const double> h_in, Fwd& fwd) const {
  trunk_forward(pv, trunk_, obs, h_in, fwd.trunk);
  fwd.logp.resize(static_cast<std::size_t>(quota_) * stride_);
  std::vector<double> logits;
  for (int s = 0; s < quota_; ++s) {
    for (int h = 0; h < 3; ++h) {
      logits.resize(head_sizes_[h]);
      dense_forward(pv, heads_[s][h], fwd.trunk.h_out, logits);
      log_softmax(logits, {fwd.logp.data() + head_offset(s, h),
                           static_cast<std::size_t>(head_sizes_[h])});
    }
  }
}

void PolicyNet::backward(ParamVector& pv, const Fwd& fwd,
                         std::span<const double> dlogp) const {
  std::vector<double> dh(hidden_, 0.0);
  std::vector<double> dlogits;
  for (int s = 0; s < quota_; ++s) {
    for (int h = 0; h < 3; ++h) {
      const int off = head_offset(s, h);
      const int n = head_sizes_[h];
      // through log-softmax: dlogits = dlogp - p * sum(dlogp)
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += dlogp[off + i];
      if (total == 0.0) {
        bool all_zero = true;
        for (int i = 0; i < n && all_zero; ++i) {
          all_zero = dlogp[off + i] == 0.0;
        }
        if (all_zero) continue;  // padded slot, nothing to do
      }
      dlogits.resize(n);
      for (int i = 0; i < n; ++i) {
        dlogits[i] = dlogp[off + i] - std::exp(fwd.logp[off + i]) * total;
      }
      dense_backward(pv, heads_[s][h], fwd.trunk.h_out, dlogits, dh);
    }
  }
  trunk_backward(pv, trunk_, fwd.trunk, dh);
}

CriticNet::CriticNet(int in_dim, int hidden) : in_dim_(in_dim), hidden_(hidden) {
  if (in_dim < 1 || hidden < 1) {
    throw std::invalid_argument("critic net needs in_dim >= 1, hidden >= 1");
  }
  trunk_ = add_trunk(proto_, "critic", in_dim_, hidden_);
  head_ = add_dense(proto_, "critic.value", hidden_, 1);
}

ParamVector CriticNet::allocate(Rng& rng) const {
  ParamVector pv = proto_;
  init_params(pv, rng);
  return pv;
}

double CriticNet::forward(const ParamVector& pv, std::span<const double> x,
                          std::span<const double> h_in, Fwd& fwd) const {
  trunk_forward(pv, trunk_, x, h_in, fwd.trunk);
  double value = 0.0;
  dense_forward(pv, head_, fwd.trunk.h_out, {&value, 1});
  fwd.value = value;
  return value;
}

void CriticNet::backward(ParamVector& pv, const Fwd& fwd, double dvalue) const {
  std::vector<double> dh(hidden_, 0.0);
  dense_backward(pv, head_, fwd.trunk.h_out, {&dvalue, 1}, dh);
  trunk_backward(pv, trunk_, fwd.trunk, dh);
}

}  // namespace uavlora
