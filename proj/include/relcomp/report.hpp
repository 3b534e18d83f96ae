#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace relcomp {

// One evaluation result row: task x embedding x operator with its metrics.
// Serialized deterministically (sorted keys) so identical runs produce
// byte-identical reports up to the timestamp field.
struct EvalReport {
  std::string task;
  std::string embedding;
  std::string op;
  std::map<std::string, double> metrics;       // accuracy / mean_rank / ...
  std::map<std::string, double> per_category;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string dataset_hash;
  std::string timestamp;

  std::string to_json() const;
  static EvalReport from_json(const std::string& text);
};

// FNV-1a 64-bit, hex encoded. Used for config and dataset fingerprints.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t state = 0xcbf29ce484222325ULL);
std::string hash_hex(std::uint64_t h);
std::string hash_string(const std::string& s);
// Hashes file bytes; for a directory, combines per-file hashes in sorted
// relative-path order.
std::string hash_path(const std::string& path);

// Table-shaped CSV: one row per (embedding, operator), one column per task
// holding that task's accuracy metric (hits_at_10 for ranking tasks).
// Refuses to merge two reports for the same task with different dataset
// hashes.
std::string build_report_table(const std::vector<EvalReport>& reports);

}  // namespace relcomp
