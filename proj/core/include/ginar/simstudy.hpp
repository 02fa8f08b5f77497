#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ginar/estimation.hpp"

namespace ginar {

struct StudyConfig {
  FamilySpec family;
  int p = 1;
  std::vector<double> theta;  // generating parameters
  std::vector<int> sizes;
  int replicates = 200;
  std::vector<Method> methods;
  std::uint64_t seed = 1;
  int burnin = 200;
  int bootstrap = 200;  // resamples for standard errors of the summaries
  int threads = 1;
  std::optional<std::filesystem::path> cache_dir;
  FitOptions options;
};

// key = value per line; '#' starts a comment. Required keys: family, p,
// alpha, mu_eps (r for nb-inar), sizes, replicates, methods, seed. Optional:
// burnin, bootstrap, threads, cache_dir, transition, quad_nodes.
StudyConfig parse_study_config(std::istream& in);
StudyConfig parse_study_config_file(const std::filesystem::path& path);

struct StudyCell {
  int n = 0;
  Method method = Method::Cml;
  int replicates_ok = 0;
  int failures = 0;
  std::vector<std::string> params;
  std::vector<double> truth;
  std::vector<double> bias, sd, rmse;
  std::vector<double> bias_se, sd_se, rmse_se;
};

struct StudyResult {
  StudyConfig config;
  std::vector<StudyCell> cells;  // ordered by (size, method) as configured
};

// Replicate r at size n always simulates from the stream derived from
// (seed, n, r), independent of the method set, thread count, and cache state.
// Failed fits count as failures and are excluded from the summaries. With
// cache_dir set, per-(n, method) raw estimates are written once and reused.
StudyResult run_study(const StudyConfig& config);

std::string study_csv(const StudyResult& result);
std::vector<StudyCell> parse_study_csv(std::istream& in);
std::string study_markdown(const StudyResult& result);

}  // namespace ginar
