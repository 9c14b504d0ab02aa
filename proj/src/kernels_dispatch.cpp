#include <atomic>
#include <cstdlib>

#include "szego2d/kernels.hpp"

namespace szego2d::kernels {
namespace {

const backend* pick_initial() {
  if (const char* env = std::getenv("SZEGO2D_KERNELS")) {
    std::string_view want(env);
    if (want == "scalar") return &scalar_backend();
    if (want == "avx2" && avx2_backend_available()) return &avx2_backend();
  }
  return avx2_backend_available() ? &avx2_backend() : &scalar_backend();
}

std::atomic<const backend*>& slot() {
  static std::atomic<const backend*> b{pick_initial()};
  return b;
}

}  // namespace

const backend& active() { return *slot().load(std::memory_order_relaxed); }

bool set_backend(std::string_view name) {
  if (name == "scalar") {
    slot().store(&scalar_backend(), std::memory_order_relaxed);
    return true;
  }
  if (name == "avx2" && avx2_backend_available()) {
    slot().store(&avx2_backend(), std::memory_order_relaxed);
    return true;
  }
  return false;
}

std::string_view active_name() { return active().name; }

}  // namespace szego2d::kernels
