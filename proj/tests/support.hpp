#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <cmath>
#include <fmt/core.h>
#include <unistd.h>

#include "roadhazard/random.hpp"

namespace rhtest {

namespace fs = std::filesystem;

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * roadhazard::uniform01(rng_); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(roadhazard::uniform_below(rng_, static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool coin(double p = 0.5) { return roadhazard::uniform01(rng_) < p; }
  double normal() {  // Box-Muller, portable
    const double u1 = 1.0 - roadhazard::uniform01(rng_);
    const double u2 = roadhazard::uniform01(rng_);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("roadhazard_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline fs::path fixtures() { return fs::path(ROADHAZARD_FIXTURES); }

}  // namespace rhtest
