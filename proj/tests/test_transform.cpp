#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "helpers.hpp"
#include "tssnet/errors.hpp"
#include "tssnet/transform.hpp"

using tssnet::PaddingMode;
using tssnet::SliceMode;
using tssnet::TemporalTensorConfig;
using tssnet::Tensor;

namespace {

// Independent reference slicer, written as literal loops over a padded
// std::vector so it shares no code or algebra with the library. The
// count is found by walking slice starts until the margin rule fails:
// standard mode keeps a full dilation span of margin after the last tap,
// maximal mode only needs the last tap inside the padded series.
struct OracleResult {
  std::size_t count = 0;
  std::vector<std::vector<std::vector<double>>> stack;  // [m][window][count]
};

bool oracle_fits(const TemporalTensorConfig& cfg, std::size_t padded_len,
                 std::size_t start) {
  const std::size_t span = cfg.dilation * (cfg.window - 1);
  const std::size_t last_tap = start + span;
  if (cfg.slice_mode == SliceMode::standard) {
    return last_tap + span < padded_len;
  }
  return last_tap < padded_len;
}

OracleResult oracle_slice(const std::vector<std::vector<double>>& series,
                          const TemporalTensorConfig& cfg) {
  const std::size_t m = series.size();
  const std::size_t t = series[0].size();

  std::vector<std::vector<double>> padded(m);
  for (std::size_t f = 0; f < m; ++f) {
    std::vector<double>& row = padded[f];
    double left = 0.0, right = 0.0;
    if (cfg.padding_mode == PaddingMode::edge_replicate) {
      left = series[f].front();
      right = series[f].back();
    } else if (cfg.padding_mode == PaddingMode::local_mean) {
      for (std::size_t j = 0; j < cfg.local_mean_k; ++j) {
        left += series[f][j];
        right += series[f][t - 1 - j];
      }
      left /= static_cast<double>(cfg.local_mean_k);
      right /= static_cast<double>(cfg.local_mean_k);
    }
    for (std::size_t j = 0; j < cfg.padding; ++j) row.push_back(left);
    for (std::size_t j = 0; j < t; ++j) row.push_back(series[f][j]);
    for (std::size_t j = 0; j < cfg.padding; ++j) row.push_back(right);
  }

  OracleResult result;
  while (oracle_fits(cfg, padded[0].size(), result.count * cfg.stride)) {
    ++result.count;
  }
  result.stack.assign(
      m, std::vector<std::vector<double>>(
             cfg.window, std::vector<double>(result.count, 0.0)));
  for (std::size_t f = 0; f < m; ++f) {
    for (std::size_t i = 0; i < result.count; ++i) {
      for (std::size_t w = 0; w < cfg.window; ++w) {
        result.stack[f][w][i] = padded[f][i * cfg.stride + w * cfg.dilation];
      }
    }
  }
  return result;
}

std::vector<std::vector<double>> to_rows(const Tensor& series) {
  std::vector<std::vector<double>> rows(series.dim(0),
                                        std::vector<double>(series.dim(1)));
  for (std::size_t f = 0; f < series.dim(0); ++f) {
    for (std::size_t t = 0; t < series.dim(1); ++t) rows[f][t] = series(f, t);
  }
  return rows;
}

}  // namespace

TEST_CASE("slice count matches pinned hand-worked cases") {
  TemporalTensorConfig cfg;
  cfg.window = 8;
  cfg.stride = 2;
  cfg.dilation = 1;
  cfg.padding = 0;
  CHECK(tssnet::slice_count(cfg, 168) == 77);

  cfg.window = 3;
  cfg.stride = 1;
  CHECK(tssnet::slice_count(cfg, 6) == 2);

  cfg.window = 4;
  CHECK_THROWS_AS(tssnet::slice_count(cfg, 4), tssnet::InvalidConfig);

  // Window 1 has no span, so every column is its own slice.
  cfg.window = 1;
  CHECK(tssnet::slice_count(cfg, 25) == 25);
}

TEST_CASE("maximal mode only needs the last tap inside the series") {
  TemporalTensorConfig cfg;
  cfg.window = 4;
  cfg.stride = 1;
  cfg.slice_mode = SliceMode::maximal;
  CHECK(tssnet::slice_count(cfg, 4) == 1);
  cfg.slice_mode = SliceMode::standard;
  CHECK_THROWS_AS(tssnet::slice_count(cfg, 4), tssnet::InvalidConfig);

  cfg.window = 3;
  cfg.stride = 1;
  cfg.slice_mode = SliceMode::maximal;
  CHECK(tssnet::slice_count(cfg, 6) == 4);
}

TEST_CASE("slice entries follow start + tap * dilation indexing") {
  // One feature, values equal to their index, so entries are readable.
  Tensor series({1, 10}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  TemporalTensorConfig cfg;
  cfg.window = 3;
  cfg.stride = 2;
  cfg.dilation = 2;
  Tensor stack = tssnet::slice_stack(series, cfg);
  // span = 4, standard slack 8: starts 0 and... 10 - 8 - 1 = 1 -> count 1.
  CHECK(stack.shape() == Tensor::Shape({1, 3, 1}));
  CHECK(stack(0, 0, 0) == 0.0);
  CHECK(stack(0, 1, 0) == 2.0);
  CHECK(stack(0, 2, 0) == 4.0);

  cfg.slice_mode = SliceMode::maximal;
  stack = tssnet::slice_stack(series, cfg);
  CHECK(stack.dim(2) == 3);
  CHECK(stack(0, 2, 2) == 8.0);  // start 4, tap 2: 4 + 2*2
}

TEST_CASE("padding modes fill both ends as documented") {
  Tensor series({1, 4}, {2, 4, 6, 8});
  TemporalTensorConfig cfg;
  cfg.padding = 2;

  cfg.padding_mode = PaddingMode::zero;
  Tensor padded = tssnet::pad_series(series, cfg);
  CHECK(padded.dim(1) == 8);
  CHECK(padded(0, 0) == 0.0);
  CHECK(padded(0, 2) == 2.0);
  CHECK(padded(0, 7) == 0.0);

  cfg.padding_mode = PaddingMode::edge_replicate;
  padded = tssnet::pad_series(series, cfg);
  CHECK(padded(0, 1) == 2.0);
  CHECK(padded(0, 6) == 8.0);

  cfg.padding_mode = PaddingMode::local_mean;
  cfg.local_mean_k = 2;
  padded = tssnet::pad_series(series, cfg);
  CHECK(padded(0, 0) == 3.0);  // mean of 2, 4
  CHECK(padded(0, 7) == 7.0);  // mean of 6, 8

  cfg.local_mean_k = 5;
  CHECK_THROWS_AS(tssnet::pad_series(series, cfg), tssnet::InvalidConfig);
  cfg.local_mean_k = 0;
  CHECK_THROWS_AS(tssnet::pad_series(series, cfg), tssnet::InvalidConfig);

  // No padding requested: the series passes through untouched.
  cfg.padding = 0;
  padded = tssnet::pad_series(series, cfg);
  CHECK(padded.dim(1) == 4);
  CHECK(padded(0, 3) == 8.0);
}

TEST_CASE("field validation rejects zero window, stride and dilation") {
  TemporalTensorConfig cfg;
  cfg.window = 0;
  CHECK_THROWS_AS(tssnet::slice_count(cfg, 100), tssnet::InvalidConfig);
  cfg.window = 4;
  cfg.stride = 0;
  CHECK_THROWS_AS(tssnet::slice_count(cfg, 100), tssnet::InvalidConfig);
  cfg.stride = 1;
  cfg.dilation = 0;
  CHECK_THROWS_AS(tssnet::slice_count(cfg, 100), tssnet::InvalidConfig);

  Tensor rank3({1, 2, 3});
  cfg.dilation = 1;
  CHECK_THROWS_AS(tssnet::slice_stack(rank3, cfg), tssnet::ShapeMismatch);
}

TEST_CASE("randomized configurations agree with the reference slicer") {
  std::mt19937_64 engine(20240817);
  std::uniform_int_distribution<std::size_t> m_dist(1, 4);
  std::uniform_int_distribution<std::size_t> t_dist(4, 60);
  std::uniform_int_distribution<std::size_t> window_dist(1, 9);
  std::uniform_int_distribution<std::size_t> stride_dist(1, 4);
  std::uniform_int_distribution<std::size_t> dilation_dist(1, 3);
  std::uniform_int_distribution<std::size_t> padding_dist(0, 5);
  std::uniform_int_distribution<int> mode_dist(0, 2);
  std::uniform_int_distribution<int> slice_mode_dist(0, 1);

  std::size_t compared = 0;
  for (int round = 0; round < 500; ++round) {
    const std::size_t m = m_dist(engine);
    const std::size_t t = t_dist(engine);
    TemporalTensorConfig cfg;
    cfg.window = window_dist(engine);
    cfg.stride = stride_dist(engine);
    cfg.dilation = dilation_dist(engine);
    cfg.padding = padding_dist(engine);
    cfg.padding_mode = static_cast<PaddingMode>(mode_dist(engine));
    cfg.slice_mode = static_cast<SliceMode>(slice_mode_dist(engine));
    cfg.local_mean_k =
        std::uniform_int_distribution<std::size_t>(1, t)(engine);

    Tensor series = testutil::random_tensor({m, t}, engine, -5.0, 5.0);
    const OracleResult expected = oracle_slice(to_rows(series), cfg);

    if (expected.count == 0) {
      CHECK_THROWS_AS(tssnet::slice_stack(series, cfg),
                      tssnet::InvalidConfig);
      continue;
    }

    Tensor stack = tssnet::slice_stack(series, cfg);
    REQUIRE(tssnet::slice_count(cfg, t) == expected.count);
    REQUIRE(stack.shape() ==
            Tensor::Shape({m, cfg.window, expected.count}));
    for (std::size_t f = 0; f < m; ++f) {
      for (std::size_t w = 0; w < cfg.window; ++w) {
        for (std::size_t i = 0; i < expected.count; ++i) {
          REQUIRE(stack(f, w, i) == expected.stack[f][w][i]);
        }
      }
    }
    ++compared;
  }
  // The sweep must actually exercise both outcomes.
  CHECK(compared > 100);
  CHECK(compared < 500);
}

TEST_CASE("every slice stays inside the padded series") {
  // The last slice's last tap index must be a valid padded column, in
  // both modes, across a grid of shapes.
  for (std::size_t t = 2; t <= 40; ++t) {
    for (std::size_t window = 1; window <= 6; ++window) {
      for (std::size_t stride = 1; stride <= 3; ++stride) {
        for (int mode = 0; mode < 2; ++mode) {
          TemporalTensorConfig cfg;
          cfg.window = window;
          cfg.stride = stride;
          cfg.dilation = 2;
          cfg.padding = 1;
          cfg.slice_mode = static_cast<SliceMode>(mode);
          std::size_t count = 0;
          try {
            count = tssnet::slice_count(cfg, t);
          } catch (const tssnet::InvalidConfig&) {
            continue;
          }
          const std::size_t last_tap =
              (count - 1) * stride + cfg.dilation * (window - 1);
          CHECK(last_tap < t + 2 * cfg.padding);
        }
      }
    }
  }
}

TEST_CASE("mode names round trip and reject unknowns") {
  CHECK(tssnet::parse_padding_mode("edge-replicate") ==
        PaddingMode::edge_replicate);
  CHECK(tssnet::parse_slice_mode("maximal") == SliceMode::maximal);
  CHECK(tssnet::padding_mode_name(PaddingMode::local_mean) ==
        std::string("local-mean"));
  CHECK(tssnet::slice_mode_name(SliceMode::standard) ==
        std::string("standard"));
  CHECK_THROWS_AS(tssnet::parse_padding_mode("mirror"),
                  tssnet::InvalidConfig);
  CHECK_THROWS_AS(tssnet::parse_slice_mode("loose"), tssnet::InvalidConfig);
}
