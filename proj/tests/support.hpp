#pragma once

// Shared helpers for the test suite: a small deterministic RNG for generating
// random matrices (independent of the library's own generator), temp-directory
// management for CLI tests, and minimal CSV/file readers.

#include <algorithm>
#include <cmath>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cqsim/model.hpp"
#include "cqsim/qmat.hpp"

namespace testsup {

// xorshift64* — deliberately a different generator family from the library's,
// so randomized property tests do not share state or structure with the code
// under test.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next_u64() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::uint64_t state_;
};

inline cqsim::ComplexMat2 random_hermitian(TestRng& rng, double scale = 2.0) {
  const double d0 = rng.uniform(-scale, scale);
  const double d1 = rng.uniform(-scale, scale);
  const double re = rng.uniform(-scale, scale);
  const double im = rng.uniform(-scale, scale);
  cqsim::ComplexMat2 m;
  m.m00 = {d0, 0.0};
  m.m11 = {d1, 0.0};
  m.m01 = {re, im};
  m.m10 = {re, -im};
  return m;
}

// Random density matrix: normalized mixture of a random pure state and the
// maximally mixed state, so eigenvalues stay strictly positive.
inline cqsim::QubitDensity random_density(TestRng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 6.283185307179586);
  const double r = rng.uniform(0.0, 0.98);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return cqsim::QubitDensity::from_bloch(r * s * std::cos(phi), r * s * std::sin(phi), r * z);
}

// Largest entrywise deviation between two matrices.
inline double max_entry_diff(const cqsim::ComplexMat2& a, const cqsim::ComplexMat2& b) {
  double d = std::abs(a.m00 - b.m00);
  d = std::max(d, std::abs(a.m01 - b.m01));
  d = std::max(d, std::abs(a.m10 - b.m10));
  d = std::max(d, std::abs(a.m11 - b.m11));
  return d;
}

// Largest entrywise deviation between two fields on the same grid; infinity
// when the grids or sizes disagree (so any comparison against it fails).
inline double max_field_diff(const cqsim::WignerField& a, const cqsim::WignerField& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double d = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    d = std::max(d, max_entry_diff(a.values[j], b.values[j]));
  }
  return d;
}

// Unique scratch directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("cqsim_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the installed CLI binary (path injected by the build system) with the
// given argument string, capturing stdout/stderr.
inline CliResult run_cli(const std::string& args, const TempDir& scratch) {
  const std::string out_file = scratch.file("cli_stdout.txt");
  const std::string err_file = scratch.file("cli_stderr.txt");
  const std::string cmd =
      std::string(CQSIM_BIN) + " " + args + " >" + out_file + " 2>" + err_file;
  const int raw = std::system(cmd.c_str());
  CliResult r;
  if (raw == -1) {
    r.exit_code = -1;
  } else {
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -2;
  }
  r.out = read_text_file(out_file);
  r.err = read_text_file(err_file);
  return r;
}

// Parses a CSV file into rows of string cells, skipping '#' comment lines.
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline double cell_num(const std::vector<std::string>& row, std::size_t i) {
  return std::strtod(row.at(i).c_str(), nullptr);
}

// Column index for a named header cell; -1 if absent.
inline int column_of(const std::vector<std::vector<std::string>>& rows, const std::string& name) {
  if (rows.empty()) return -1;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    if (rows[0][i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace testsup
