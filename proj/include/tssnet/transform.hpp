#pragma once

#include <cstddef>
#include <string>

#include "tssnet/tensor.hpp"

namespace tssnet {

enum class PaddingMode {
  zero,
  edge_replicate,  // repeat the first/last column
  local_mean,      // mean of the k columns nearest the boundary
};

// Slice budget rule. `standard` keeps a safety slack of dilation*(window-1)
// columns at the tail and is the default; `maximal` takes every slice whose
// last tap is still inside the padded series.
enum class SliceMode { standard, maximal };

struct TemporalTensorConfig {
  std::size_t window = 8;    // taps per slice
  std::size_t stride = 2;    // hop between slice starts
  std::size_t dilation = 1;  // spacing between taps inside a slice
  std::size_t padding = 0;   // columns added at both ends
  PaddingMode padding_mode = PaddingMode::edge_replicate;
  std::size_t local_mean_k = 3;  // neighborhood for PaddingMode::local_mean
  SliceMode slice_mode = SliceMode::standard;
};

// Number of slices a length-T series yields under cfg:
//   standard: floor((T + 2p - 2d(w-1) - 1) / s) + 1
//   maximal: floor((T + 2p -  d(w-1) - 1) / s) + 1
// Throws InvalidConfig when the result is below 1 or cfg is malformed
// (window/stride/dilation must be positive).
std::size_t slice_count(const TemporalTensorConfig& cfg, std::size_t length);

// m x T -> m x (T + 2p). With p = 0 this is a plain copy. local_mean
// requires local_mean_k in [1, T].
Tensor pad_series(const Tensor& series, const TemporalTensorConfig& cfg);

// Temporal slicing stack: m x T -> m x window x o where o = slice_count.
// Entry [f, w, i] is padded column i*stride + w*dilation of feature f, so
// slice i is the dilated window starting at offset i*stride. Every output
// element is a copy of an input element, nothing is synthesized beyond the
// configured padding.
Tensor slice_stack(const Tensor& series, const TemporalTensorConfig& cfg);

PaddingMode parse_padding_mode(const std::string& name);
const char* padding_mode_name(PaddingMode mode);
SliceMode parse_slice_mode(const std::string& name);
const char* slice_mode_name(SliceMode mode);

}  // namespace tssnet
