#include "relcomp/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "relcomp/errors.hpp"

namespace relcomp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string EvalReport::to_json() const {
  json j;
  j["task"] = task;
  j["embedding"] = embedding;
  j["operator"] = op;
  j["metrics"] = metrics;
  j["per_category"] = per_category;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  j["dataset_hash"] = dataset_hash;
  j["timestamp"] = timestamp;
  return j.dump();  // nlohmann object keys are sorted, output is stable
}

EvalReport EvalReport::from_json(const std::string& text) {
  json j = json::parse(text);
  EvalReport r;
  r.task = j.at("task").get<std::string>();
  r.embedding = j.at("embedding").get<std::string>();
  r.op = j.at("operator").get<std::string>();
  r.metrics = j.at("metrics").get<std::map<std::string, double>>();
  r.per_category = j.at("per_category").get<std::map<std::string, double>>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.dataset_hash = j.at("dataset_hash").get<std::string>();
  r.timestamp = j.value("timestamp", "");
  return r;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t state) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state ^= bytes[i];
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string hash_hex(std::uint64_t h) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string hash_string(const std::string& s) {
  return hash_hex(fnv1a(s.data(), s.size()));
}

namespace {

std::uint64_t hash_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file for hashing");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
    if (!in) break;
  }
  return h;
}

}  // namespace

std::string hash_path(const std::string& path) {
  const fs::path p(path);
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(p)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const fs::path& f : files) {
      const std::string rel = fs::relative(f, p).generic_string();
      h = fnv1a(rel.data(), rel.size(), h);
      const std::uint64_t fh = hash_file_bytes(f);
      h = fnv1a(&fh, sizeof(fh), h);
    }
    return hash_hex(h);
  }
  return hash_hex(hash_file_bytes(p));
}

std::string build_report_table(const std::vector<EvalReport>& reports) {
  // Task -> dataset hash consistency check.
  std::map<std::string, std::string> task_hash;
  for (const EvalReport& r : reports) {
    auto [it, inserted] = task_hash.emplace(r.task, r.dataset_hash);
    if (!inserted && it->second != r.dataset_hash) {
      throw DataError("report-table: dataset hash mismatch for task '" + r.task +
                      "' (" + it->second + " vs " + r.dataset_hash + ")");
    }
  }

  std::vector<std::string> tasks;
  for (const auto& [task, hash] : task_hash) tasks.push_back(task);

  std::set<std::pair<std::string, std::string>> rows;  // (embedding, operator)
  std::map<std::tuple<std::string, std::string, std::string>, double> cells;
  for (const EvalReport& r : reports) {
    rows.insert({r.embedding, r.op});
    double value = 0.0;
    if (auto it = r.metrics.find("accuracy"); it != r.metrics.end()) {
      value = it->second;
    } else if (auto h = r.metrics.find("hits_at_10"); h != r.metrics.end()) {
      value = h->second;
    } else if (!r.metrics.empty()) {
      value = r.metrics.begin()->second;
    }
    cells[{r.embedding, r.op, r.task}] = value;
  }

  std::ostringstream out;
  out << "embedding,operator";
  for (const std::string& t : tasks) out << ',' << t;
  out << '\n';
  out.setf(std::ios::fmtflags(0), std::ios::floatfield);
  out.precision(9);
  for (const auto& [embedding, op] : rows) {
    out << embedding << ',' << op;
    for (const std::string& t : tasks) {
      out << ',';
      auto it = cells.find({embedding, op, t});
      if (it != cells.end()) out << it->second;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace relcomp
