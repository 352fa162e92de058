#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "tssnet/tensor.hpp"

namespace testutil {

// Unique scratch directory under the system temp root, removed on
// destruction so test runs do not accumulate files.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 engine(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(engine()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline tssnet::Tensor random_tensor(tssnet::Tensor::Shape shape,
                                    std::mt19937_64& engine, double lo = -1.0,
                                    double hi = 1.0) {
  tssnet::Tensor out(std::move(shape));
  std::uniform_real_distribution<double> dist(lo, hi);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dist(engine);
  return out;
}

}  // namespace testutil
