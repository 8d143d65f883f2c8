#ifndef CONTACTBENCH_CATALOG_HPP
#define CONTACTBENCH_CATALOG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contactbench/io.hpp"

namespace contactbench {

struct CatalogOptions {
  /// Zeroes wall-time fields so output files are byte-identical across runs.
  bool deterministic_timing = false;
  /// Upper bound on concurrent jobs inside a scenario; 0 means 1.
  unsigned threads = 1;
};

/// Catalog entries in the order `bench all` runs them.
const std::vector<std::string>& scenario_names();

bool is_scenario(const std::string& name);

/// Runs one entry and returns its summary. When `out_dir` is set, writes
/// <out_dir>/<name>/ with one v1 CSV per solver run and summary.json.
/// Throws std::invalid_argument for an unknown name.
Json run_catalog_entry(const std::string& name,
                       const std::optional<std::filesystem::path>& out_dir,
                       const CatalogOptions& options);

/// Number of jobs allowed by CONTACTBENCH_THREADS, else the hardware concurrency.
unsigned thread_budget();

}  // namespace contactbench

#endif
