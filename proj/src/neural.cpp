#include "uavlora/neural.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavlora/kernels.hpp"

namespace uavlora {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

std::size_t ParamVector::add(const std::string& name, std::size_t rows,
                             std::size_t cols) {
  const std::size_t offset = values.size();
  layout.push_back({name, offset, rows, cols});
  values.resize(offset + rows * cols, 0.0);
  grads.resize(values.size(), 0.0);
  return offset;
}

const ParamVector::Slice& ParamVector::find(const std::string& name) const {
  for (const auto& s : layout) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no parameter slice named " + name);
}

void ParamVector::zero_grads() {
  std::fill(grads.begin(), grads.end(), 0.0);
}

double ParamVector::grad_norm() const {
  const double sq = kernels::ops().dot(grads.data(), grads.data(), grads.size());
  return std::sqrt(sq);
}

void ParamVector::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (norm > max_norm && norm > 0.0) {
    kernels::ops().scale(max_norm / norm, grads.data(), grads.size());
  }
}

void adam_step(ParamVector& params, AdamState& state, double lr, double beta1,
               double beta2, double eps) {
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.step_count = 0;
  }
  state.step_count += 1;
  const double corr1 = 1.0 - std::pow(beta1, state.step_count);
  const double corr2 = 1.0 - std::pow(beta2, state.step_count);
  kernels::ops().adam_step(params.values.data(), params.grads.data(),
                           state.m.data(), state.v.data(), params.size(), lr,
                           beta1, beta2, eps, corr1, corr2);
}

void log_softmax(std::span<const double> logits, std::span<double> out) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
}

double entropy_from_logp(std::span<const double> logp) {
  double h = 0.0;
  for (double lp : logp) h -= std::exp(lp) * lp;
  return h;
}

int sample_from_logp(std::span<const double> logp, double u) {
  double cum = 0.0;
  for (std::size_t i = 0; i < logp.size(); ++i) {
    cum += std::exp(logp[i]);
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(logp.size()) - 1;
}

int argmax(std::span<const double> x) {
  int best = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > x[best]) best = static_cast<int>(i);
  }
  return best;
}

TrunkLayout add_trunk(ParamVector& pv, const std::string& prefix, int in_dim,
                      int hidden) {
  TrunkLayout L;
  L.in_dim = in_dim;
  L.hidden = hidden;
  L.w_embed = pv.add(prefix + ".embed.w", hidden, in_dim);
  L.b_embed = pv.add(prefix + ".embed.b", hidden, 1);
  L.w_ih = pv.add(prefix + ".gru.w_ih", 3 * hidden, hidden);
  L.w_hh = pv.add(prefix + ".gru.w_hh", 3 * hidden, hidden);
  L.b_ih = pv.add(prefix + ".gru.b_ih", 3 * hidden, 1);
  L.b_hh = pv.add(prefix + ".gru.b_hh", 3 * hidden, 1);
  return L;
}

void trunk_forward(const ParamVector& pv, const TrunkLayout& L,
                   std::span<const double> x, std::span<const double> h_in,
                   TrunkCache& c) {
  const auto& k = kernels::ops();
  const int H = L.hidden;
  if (static_cast<int>(x.size()) != L.in_dim ||
      static_cast<int>(h_in.size()) != H) {
    throw std::invalid_argument("trunk_forward: shape mismatch");
  }
  c.x.assign(x.begin(), x.end());
  c.h_in.assign(h_in.begin(), h_in.end());
  c.e_pre.resize(H);
  c.e.resize(H);
  c.gi.resize(3 * H);
  c.gh.resize(3 * H);
  c.r.resize(H);
  c.z.resize(H);
  c.n.resize(H);
  c.h_out.resize(H);

  const double* vals = pv.values.data();
  k.matvec(vals + L.w_embed, c.x.data(), c.e_pre.data(), H, L.in_dim);
  for (int i = 0; i < H; ++i) {
    c.e_pre[i] += vals[L.b_embed + i];
    c.e[i] = c.e_pre[i] > 0.0 ? c.e_pre[i] : 0.0;
  }
  k.matvec(vals + L.w_ih, c.e.data(), c.gi.data(), 3 * H, H);
  k.matvec(vals + L.w_hh, c.h_in.data(), c.gh.data(), 3 * H, H);
  for (int i = 0; i < 3 * H; ++i) {
    c.gi[i] += vals[L.b_ih + i];
    c.gh[i] += vals[L.b_hh + i];
  }
  for (int i = 0; i < H; ++i) {
    c.r[i] = sigmoid(c.gi[i] + c.gh[i]);
    c.z[i] = sigmoid(c.gi[H + i] + c.gh[H + i]);
    c.n[i] = std::tanh(c.gi[2 * H + i] + c.r[i] * c.gh[2 * H + i]);
    c.h_out[i] = (1.0 - c.z[i]) * c.n[i] + c.z[i] * c.h_in[i];
  }
}

void trunk_backward(ParamVector& pv, const TrunkLayout& L,
                    const TrunkCache& c, std::span<const double> dh_out,
                    std::span<double> dh_in) {
  const auto& k = kernels::ops();
  const int H = L.hidden;
  std::vector<double> dgi(3 * H), dgh(3 * H);
  std::vector<double> dh_local;
  if (dh_in.empty()) {
    dh_local.assign(H, 0.0);
    dh_in = dh_local;
  }

  for (int i = 0; i < H; ++i) {
    const double dho = dh_out[i];
    const double dz = dho * (c.h_in[i] - c.n[i]);
    const double dn = dho * (1.0 - c.z[i]);
    dh_in[i] += dho * c.z[i];
    const double da_n = dn * (1.0 - c.n[i] * c.n[i]);
    const double dr = da_n * c.gh[2 * H + i];
    const double da_r = dr * c.r[i] * (1.0 - c.r[i]);
    const double da_z = dz * c.z[i] * (1.0 - c.z[i]);
    dgi[i] = da_r;
    dgi[H + i] = da_z;
    dgi[2 * H + i] = da_n;
    dgh[i] = da_r;
    dgh[H + i] = da_z;
    dgh[2 * H + i] = da_n * c.r[i];
  }

  double* g = pv.grads.data();
  const double* vals = pv.values.data();
  k.ger_add(g + L.w_ih, dgi.data(), c.e.data(), 3 * H, H);
  k.ger_add(g + L.w_hh, dgh.data(), c.h_in.data(), 3 * H, H);
  k.axpy(1.0, dgi.data(), g + L.b_ih, 3 * H);
  k.axpy(1.0, dgh.data(), g + L.b_hh, 3 * H);

  std::vector<double> de(H, 0.0);
  k.matvec_t_add(vals + L.w_ih, dgi.data(), de.data(), 3 * H, H);
  k.matvec_t_add(vals + L.w_hh, dgh.data(), dh_in.data(), 3 * H, H);

  for (int i = 0; i < H; ++i) {
    if (c.e_pre[i] <= 0.0) de[i] = 0.0;
  }
  k.ger_add(g + L.w_embed, de.data(), c.x.data(), H, L.in_dim);
  k.axpy(1.0, de.data(), g + L.b_embed, H);
}

DenseLayout add_dense(ParamVector& pv, const std::string& prefix, int in,
                      int out) {
  DenseLayout L;
  L.in = in;
  L.out = out;
  L.w = pv.add(prefix + ".w", out, in);
  L.b = pv.add(prefix + ".b", out, 1);
  return L;
}

void dense_forward(const ParamVector& pv, const DenseLayout& L,
                   std::span<const double> x, std::span<double> y) {
  const double* vals = pv.values.data();
  kernels::ops().matvec(vals + L.w, x.data(), y.data(), L.out, L.in);
  for (int i = 0; i < L.out; ++i) y[i] += vals[L.b + i];
}

void dense_backward(ParamVector& pv, const DenseLayout& L,
                    std::span<const double> x, std::span<const double> dy,
                    std::span<double> dx) {
  const auto& k = kernels::ops();
  double* g = pv.grads.data();
  k.ger_add(g + L.w, dy.data(), x.data(), L.out, L.in);
  k.axpy(1.0, dy.data(), g + L.b, L.out);
  if (!dx.empty()) {
    k.matvec_t_add(pv.values.data() + L.w, dy.data(), dx.data(), L.out, L.in);
  }
}

void init_params(ParamVector& pv, Rng& rng) {
  for (const auto& s : pv.layout) {
    if (s.cols == 1) {
      // bias
      std::fill_n(pv.values.begin() + s.offset, s.count(), 0.0);
      continue;
    }
    const double bound =
        std::sqrt(6.0 / static_cast<double>(s.rows + s.cols));
    for (std::size_t i = 0; i < s.count(); ++i) {
      pv.values[s.offset + i] = rng.uniform(-bound, bound);
    }
  }
}

}  // namespace uavlora
