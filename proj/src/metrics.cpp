#include "tssnet/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "format.hpp"
#include "tssnet/errors.hpp"

namespace tssnet {

namespace {

void check_stacks(const std::vector<Tensor>& targets,
                  const std::vector<Tensor>& predictions) {
  if (targets.empty()) throw EmptyInput("metric needs at least one sample");
  if (targets.size() != predictions.size()) {
    throw ShapeMismatch("metric got " + std::to_string(targets.size()) +
                        " targets and " + std::to_string(predictions.size()) +
                        " predictions");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!targets[i].same_shape(predictions[i])) {
      throw ShapeMismatch("metric sample " + std::to_string(i) +
                          ": target and prediction shapes differ");
    }
  }
}

double mean_of(const Tensor& t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += t[i];
  return acc / static_cast<double>(t.size());
}

}  // namespace

double rmse(const std::vector<Tensor>& targets,
            const std::vector<Tensor>& predictions) {
  check_stacks(targets, predictions);
  double acc = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < targets[i].size(); ++j) {
      const double r = targets[i][j] - predictions[i][j];
      sq += r * r;
    }
    acc += std::sqrt(sq);
  }
  return acc / static_cast<double>(targets.size());
}

CorrVariant parse_corr_variant(const std::string& name) {
  if (name == "pearson") return CorrVariant::pearson;
  if (name == "joint-denom") return CorrVariant::joint_denom;
  throw InvalidConfig("unknown corr variant '" + name + "'");
}

const char* corr_variant_name(CorrVariant variant) {
  return variant == CorrVariant::pearson ? "pearson" : "joint-denom";
}

CorrResult corr(const std::vector<Tensor>& targets,
                const std::vector<Tensor>& predictions, CorrVariant variant) {
  check_stacks(targets, predictions);
  CorrResult result;
  double acc = 0.0;
  std::size_t used = 0;

  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Tensor& y = targets[i];
    const Tensor& p = predictions[i];
    const double ybar = mean_of(y);
    const double pbar = mean_of(p);

    double num = 0.0, ysq = 0.0, psq = 0.0, joint = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double dy = y[j] - ybar;
      const double dp = p[j] - pbar;
      num += dy * dp;
      ysq += dy * dy;
      psq += dp * dp;
      joint += dy * dy * dp * dp;
    }
    if (ysq == 0.0 || psq == 0.0) {
      ++result.skipped;  // constant block, correlation undefined
      continue;
    }
    // One square root over the product, not a product of roots: that way
    // an exact affine relation between the blocks scores exactly one.
    const double denom = variant == CorrVariant::pearson
                             ? std::sqrt(ysq * psq)
                             : std::sqrt(joint);
    acc += num / denom;
    ++used;
  }

  if (used == 0) {
    throw AllDegenerate("every sample was constant, correlation undefined");
  }
  result.value = acc / static_cast<double>(used);
  return result;
}

EvalReport evaluate_model(const Model& model, const WindowedDataset& dataset,
                          CorrVariant variant) {
  if (dataset.size() == 0) throw EmptyInput("evaluation dataset is empty");

  std::vector<Tensor> predictions;
  predictions.reserve(dataset.size());
  for (const Tensor& input : dataset.inputs) {
    predictions.push_back(model.predict(input));
  }

  EvalReport report;
  const ModelDims d = model.dims();
  report.model = model.kind();
  report.input_length = d.input_length;
  report.horizon = d.horizon;
  report.corr_variant = variant;
  report.rmse_value = rmse(dataset.targets, predictions);
  try {
    const CorrResult c = corr(dataset.targets, predictions, variant);
    report.corr_value = c.value;
    report.degenerate_skipped = c.skipped;
  } catch (const AllDegenerate&) {
    report.corr_value = std::numeric_limits<double>::quiet_NaN();
    report.degenerate_skipped = dataset.size();
  }
  return report;
}

std::string eval_report_csv_header() {
  return "dataset,model,T,h,window,stride,rmse,corr,corr_variant,seed";
}

std::string eval_report_csv_row(const EvalReport& report) {
  std::ostringstream out;
  out << report.dataset << ',' << report.model << ',' << report.input_length
      << ',' << report.horizon << ',' << report.window << ',' << report.stride
      << ',' << detail::format_double(report.rmse_value) << ','
      << detail::format_double(report.corr_value) << ','
      << corr_variant_name(report.corr_variant) << ',' << report.seed;
  return out.str();
}

}  // namespace tssnet
