#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tssnet/data.hpp"
#include "tssnet/model.hpp"
#include "tssnet/tensor.hpp"

namespace tssnet {

// Root-square error averaged over samples: for each sample take the
// square root of the summed squared residuals over all features and
// steps, then take the plain mean of those roots. This is not the pooled
// RMSE over all cells; keeping the per-sample root first matches how the
// score is aggregated everywhere else in the toolkit.
double rmse(const std::vector<Tensor>& targets,
            const std::vector<Tensor>& predictions);

// Two correlation flavors:
//   pearson       - per-sample Pearson between the flattened m*h target
//                   and prediction blocks (per-sample scalar means),
//                   averaged over samples. Default.
//   joint_denom   - same numerator, but the denominator sums the
//                   products of squared deviations under one radical:
//                   sqrt(sum (y - ybar)^2 * (yhat - yhatbar)^2). Kept for
//                   comparability with published numbers that use this
//                   form; it is not a true Pearson coefficient and does
//                   not normalize to [-1, 1].
enum class CorrVariant { pearson, joint_denom };

CorrVariant parse_corr_variant(const std::string& name);
const char* corr_variant_name(CorrVariant variant);

// Samples where either block is constant have no defined correlation;
// they are skipped and counted. All samples degenerate raises
// AllDegenerate.
struct CorrResult {
  double value = 0.0;
  std::size_t skipped = 0;
};

CorrResult corr(const std::vector<Tensor>& targets,
                const std::vector<Tensor>& predictions, CorrVariant variant);

struct EvalReport {
  std::string dataset;
  std::string model;
  std::size_t input_length = 0;
  std::size_t horizon = 0;
  std::size_t window = 0;  // transform window; 0 when not applicable
  std::size_t stride = 0;  // transform stride; 0 when not applicable
  double rmse_value = 0.0;
  double corr_value = 0.0;  // NaN when every sample was degenerate
  CorrVariant corr_variant = CorrVariant::pearson;
  std::size_t degenerate_skipped = 0;
  std::uint64_t seed = 0;
  std::string config_fingerprint;
};

// Runs the model over every window and scores it. Label fields (dataset,
// seed, fingerprint) are left for the caller to fill. A fully degenerate
// correlation is recorded as NaN instead of propagating AllDegenerate,
// so parameter-free models on flat data still evaluate.
EvalReport evaluate_model(const Model& model, const WindowedDataset& dataset,
                          CorrVariant variant);

std::string eval_report_csv_header();
std::string eval_report_csv_row(const EvalReport& report);

}  // namespace tssnet
