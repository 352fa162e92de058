#include "tssnet/transform.hpp"

#include <string>

#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

void check_fields(const TemporalTensorConfig& cfg) {
  if (cfg.window == 0) throw InvalidConfig("slice window must be positive");
  if (cfg.stride == 0) throw InvalidConfig("slice stride must be positive");
  if (cfg.dilation == 0) throw InvalidConfig("slice dilation must be positive");
}

// floor(a / b) for possibly negative a and positive b. Plain integer
// division truncates toward zero, which is wrong for the underfull case.
long long floor_div(long long a, long long b) {
  long long q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

}  // namespace

std::size_t slice_count(const TemporalTensorConfig& cfg, std::size_t length) {
  check_fields(cfg);
  const long long span =
      static_cast<long long>(cfg.dilation) * (static_cast<long long>(cfg.window) - 1);
  const long long slack = cfg.slice_mode == SliceMode::standard ? 2 * span : span;
  const long long numer = static_cast<long long>(length) +
                          2 * static_cast<long long>(cfg.padding) - slack - 1;
  const long long count = floor_div(numer, static_cast<long long>(cfg.stride)) + 1;
  if (count < 1) {
    throw InvalidConfig("series of length " + std::to_string(length) +
                        " is too short for window " + std::to_string(cfg.window) +
                        ", stride " + std::to_string(cfg.stride) + ", dilation " +
                        std::to_string(cfg.dilation) + ", padding " +
                        std::to_string(cfg.padding));
  }
  return static_cast<std::size_t>(count);
}

Tensor pad_series(const Tensor& series, const TemporalTensorConfig& cfg) {
  if (series.rank() != 2) {
    throw ShapeMismatch("pad_series expects a feature x time matrix");
  }
  const std::size_t m = series.dim(0), t = series.dim(1), p = cfg.padding;
  if (p == 0) return series;

  if (cfg.padding_mode == PaddingMode::local_mean &&
      (cfg.local_mean_k == 0 || cfg.local_mean_k > t)) {
    throw InvalidConfig("local-mean padding neighborhood " +
                        std::to_string(cfg.local_mean_k) +
                        " must lie in [1, " + std::to_string(t) + "]");
  }

  Tensor out({m, t + 2 * p});
  for (std::size_t f = 0; f < m; ++f) {
    double left = 0.0, right = 0.0;
    switch (cfg.padding_mode) {
      case PaddingMode::zero:
        break;
      case PaddingMode::edge_replicate:
        left = series(f, 0);
        right = series(f, t - 1);
        break;
      case PaddingMode::local_mean: {
        const std::size_t k = cfg.local_mean_k;
        for (std::size_t j = 0; j < k; ++j) {
          left += series(f, j);
          right += series(f, t - 1 - j);
        }
        left /= static_cast<double>(k);
        right /= static_cast<double>(k);
        break;
      }
    }
    for (std::size_t j = 0; j < p; ++j) {
      out(f, j) = left;
      out(f, t + p + j) = right;
    }
    for (std::size_t j = 0; j < t; ++j) {
      out(f, p + j) = series(f, j);
    }
  }
  return out;
}

Tensor slice_stack(const Tensor& series, const TemporalTensorConfig& cfg) {
  if (series.rank() != 2) {
    throw ShapeMismatch("slice_stack expects a feature x time matrix");
  }
  const std::size_t o = slice_count(cfg, series.dim(1));
  const Tensor padded = pad_series(series, cfg);
  const std::size_t m = padded.dim(0);

  Tensor out({m, cfg.window, o});
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t w = 0; w < cfg.window; ++w) {
      const std::size_t tap = w * cfg.dilation;
      for (std::size_t i = 0; i < o; ++i) {
        out(f, w, i) = padded(f, i * cfg.stride + tap);
      }
    }
  }
  return out;
}

}  // namespace tssnet

namespace tssnet {

PaddingMode parse_padding_mode(const std::string& name) {
  if (name == "zero") return PaddingMode::zero;
  if (name == "edge-replicate") return PaddingMode::edge_replicate;
  if (name == "local-mean") return PaddingMode::local_mean;
  throw InvalidConfig("unknown padding mode '" + name + "'");
}

const char* padding_mode_name(PaddingMode mode) {
  switch (mode) {
    case PaddingMode::zero: return "zero";
    case PaddingMode::edge_replicate: return "edge-replicate";
    case PaddingMode::local_mean: return "local-mean";
  }
  return "zero";
}

SliceMode parse_slice_mode(const std::string& name) {
  if (name == "standard") return SliceMode::standard;
  if (name == "maximal") return SliceMode::maximal;
  throw InvalidConfig("unknown slice mode '" + name + "'");
}

const char* slice_mode_name(SliceMode mode) {
  return mode == SliceMode::standard ? "standard" : "maximal";
}

}  // namespace tssnet
