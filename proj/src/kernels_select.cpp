#include <cstdlib>
#include <stdexcept>
#include <string>

#include "uavlora/kernels.hpp"

namespace uavlora::kernels {

namespace {

Backend g_backend = []() {
  const char* env = std::getenv("UAVLORA_KERNELS");
  if (env != nullptr) {
    const std::string s(env);
    if (s == "scalar") return Backend::scalar;
    if (s == "avx2" && cpu_supports_avx2()) return Backend::avx2;
    if (s == "avx2") return Backend::scalar;  // requested but unavailable
  }
  return cpu_supports_avx2() ? Backend::avx2 : Backend::scalar;
}();

}  // namespace

bool cpu_supports_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void select_backend(Backend backend) {
  if (backend == Backend::avx2 && !cpu_supports_avx2()) {
    throw std::invalid_argument("avx2 kernels not supported on this cpu");
  }
  g_backend = backend;
}

void select_backend_auto() {
  g_backend = cpu_supports_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() { return g_backend; }

const char* backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

Backend parse_backend(const std::string& name) {
  if (name == "scalar") {
    select_backend(Backend::scalar);
  } else if (name == "avx2") {
    select_backend(Backend::avx2);
  } else if (name == "auto") {
    select_backend_auto();
  } else {
    throw std::invalid_argument("unknown kernel backend: " + name);
  }
  return g_backend;
}

const Ops& ops() {
  return g_backend == Backend::avx2 ? avx2_ops() : scalar_ops();
}

}  // namespace uavlora::kernels
