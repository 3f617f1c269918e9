#pragma once

#include <cstddef>

namespace senskit::memlog {

// Allocation accounting for the pipeline's large buffers. This is a
// deliberate lower bound on true process memory: only buffers wrapped in a
// Scoped handle are counted, which keeps the numbers deterministic across
// runs and platforms.

void reset();
std::size_t current_bytes();
std::size_t peak_bytes();

// Restart the running peak at the current level; stage_peak() then reports
// the high-water mark since the last stage_begin().
void stage_begin();
std::size_t stage_peak();

class Scoped {
 public:
  Scoped() = default;
  explicit Scoped(std::size_t bytes);
  Scoped(const Scoped&) = delete;
  Scoped& operator=(const Scoped&) = delete;
  Scoped(Scoped&& other) noexcept;
  Scoped& operator=(Scoped&& other) noexcept;
  ~Scoped();

  void release();

 private:
  std::size_t bytes_ = 0;
};

}  // namespace senskit::memlog
