#include "senskit/memlog.hpp"

#include <atomic>

namespace senskit::memlog {

namespace {
std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};
std::atomic<std::size_t> g_stage_peak{0};

void bump_peaks(std::size_t now) {
  std::size_t p = g_peak.load();
  while (now > p && !g_peak.compare_exchange_weak(p, now)) {
  }
  p = g_stage_peak.load();
  while (now > p && !g_stage_peak.compare_exchange_weak(p, now)) {
  }
}
}  // namespace

void reset() {
  g_current.store(0);
  g_peak.store(0);
  g_stage_peak.store(0);
}

std::size_t current_bytes() { return g_current.load(); }
std::size_t peak_bytes() { return g_peak.load(); }

void stage_begin() { g_stage_peak.store(g_current.load()); }
std::size_t stage_peak() { return g_stage_peak.load(); }

Scoped::Scoped(std::size_t bytes) : bytes_(bytes) {
  bump_peaks(g_current.fetch_add(bytes) + bytes);
}

Scoped::Scoped(Scoped&& other) noexcept : bytes_(other.bytes_) { other.bytes_ = 0; }

Scoped& Scoped::operator=(Scoped&& other) noexcept {
  if (this != &other) {
    release();
    bytes_ = other.bytes_;
    other.bytes_ = 0;
  }
  return *this;
}

Scoped::~Scoped() { release(); }

void Scoped::release() {
  if (bytes_ != 0) {
    g_current.fetch_sub(bytes_);
    bytes_ = 0;
  }
}

}  // namespace senskit::memlog
