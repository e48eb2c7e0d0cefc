#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "nirom/core_data.hpp"

namespace testutil {

inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto p = std::filesystem::temp_directory_path() /
                 ("nirom_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline nirom::Matrix random_matrix(nirom::Index r, nirom::Index c, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  nirom::Matrix m(r, c);
  for (nirom::Index j = 0; j < c; ++j)
    for (nirom::Index i = 0; i < r; ++i) m(i, j) = d(rng);
  return m;
}

inline nirom::Vector random_vector(nirom::Index n, unsigned seed) { return random_matrix(n, 1, seed).col(0); }

}  // namespace testutil
