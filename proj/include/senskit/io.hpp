#pragma once

#include <string>

#include "senskit/types.hpp"

namespace senskit::io {

// CStack v1: <base>.json sidecar {version:1, dims:[..], channels:Q,
// domain:"kspace"|"image"} next to <base>.craw holding channel-major,
// row-major interleaved little-endian float32 (re, im) pairs. Round trips
// are bit-exact at float32 precision.
//
// `path` may be the base name or either of the two file names.
ComplexImageStack load_stack(const std::string& path);
void save_stack(const ComplexImageStack& stack, const std::string& path);

// 16-bit binary PGM (P5), max-normalized; 2-D only.
void save_pgm16(const ArrayXd& values, const Dims& dims, const std::string& path);

// Snap every sample to float32 precision (what a save/load cycle preserves).
ComplexImageStack quantize_f32(ComplexImageStack stack);

}  // namespace senskit::io
