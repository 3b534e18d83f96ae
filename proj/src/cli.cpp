#include "relcomp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eval_internal.hpp"
#include "relcomp/analogy.hpp"
#include "relcomp/analysis.hpp"
#include "relcomp/cooccurrence.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/factorization.hpp"
#include "relcomp/kbc.hpp"
#include "relcomp/random.hpp"
#include "relcomp/relclass.hpp"
#include "relcomp/report.hpp"

namespace relcomp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct EmbeddingSpec {
  std::string label;
  std::string path;
  std::optional<bool> case_fold;  // unset -> command default
};

struct RunConfig {
  std::vector<EmbeddingSpec> embeddings;
  std::vector<std::string> operators = {"pairdiff", "concat", "add", "mult"};
  std::map<std::string, std::string> datasets;
  bool normalize_inputs = true;
  std::string oov_policy = "count-incorrect";
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::vector<double> epsilon_grid = default_epsilon_grid();
  std::string search_vocab;
  std::string output_dir = "reports";
  std::size_t sample_pairs = 140;
  std::size_t folds = 5;
  double cost = 1.0;
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");
  static const std::set<std::string> known = {
      "embeddings",  "operators",   "datasets", "normalize_inputs",
      "oov_policy",  "seed",        "workers",  "epsilon_grid",
      "search_vocab", "output_dir", "sample_pairs", "folds", "cost"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError(path + ": unknown config key '" + key + "'");
    }
  }
  try {
    if (j.contains("embeddings")) {
      cfg.embeddings.clear();
      for (const auto& e : j.at("embeddings")) {
        EmbeddingSpec spec;
        spec.label = e.at("label").get<std::string>();
        spec.path = e.at("path").get<std::string>();
        if (e.contains("case_fold")) spec.case_fold = e.at("case_fold").get<bool>();
        cfg.embeddings.push_back(std::move(spec));
      }
    }
    if (j.contains("operators")) {
      cfg.operators = j.at("operators").get<std::vector<std::string>>();
    }
    if (j.contains("datasets")) {
      cfg.datasets = j.at("datasets").get<std::map<std::string, std::string>>();
    }
    if (j.contains("normalize_inputs")) {
      cfg.normalize_inputs = j.at("normalize_inputs").get<bool>();
    }
    if (j.contains("oov_policy")) {
      cfg.oov_policy = j.at("oov_policy").get<std::string>();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<std::size_t>();
    if (j.contains("epsilon_grid")) {
      cfg.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
    }
    if (j.contains("search_vocab")) {
      cfg.search_vocab = j.at("search_vocab").get<std::string>();
    }
    if (j.contains("output_dir")) {
      cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("sample_pairs")) {
      cfg.sample_pairs = j.at("sample_pairs").get<std::size_t>();
    }
    if (j.contains("folds")) cfg.folds = j.at("folds").get<std::size_t>();
    if (j.contains("cost")) cfg.cost = j.at("cost").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(path + ": bad config value (" + std::string(e.what()) + ")");
  }
}

std::string canonical_config_json(const RunConfig& cfg) {
  json j;
  json embs = json::array();
  for (const EmbeddingSpec& e : cfg.embeddings) {
    json je;
    je["label"] = e.label;
    je["path"] = e.path;
    if (e.case_fold.has_value()) je["case_fold"] = *e.case_fold;
    embs.push_back(je);
  }
  j["embeddings"] = embs;
  j["operators"] = cfg.operators;
  j["datasets"] = cfg.datasets;
  j["normalize_inputs"] = cfg.normalize_inputs;
  j["oov_policy"] = cfg.oov_policy;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["epsilon_grid"] = cfg.epsilon_grid;
  j["search_vocab"] = cfg.search_vocab;
  j["output_dir"] = cfg.output_dir;
  j["sample_pairs"] = cfg.sample_pairs;
  j["folds"] = cfg.folds;
  j["cost"] = cfg.cost;
  return j.dump();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

EvalOptions eval_options(const RunConfig& cfg) {
  EvalOptions opt;
  opt.normalize_inputs = cfg.normalize_inputs;
  opt.oov_policy = parse_oov_policy(cfg.oov_policy);
  opt.workers = cfg.workers;
  return opt;
}

std::vector<RelationOperator> resolve_operators(const RunConfig& cfg) {
  if (cfg.operators.empty()) throw ConfigError("no operators configured");
  std::vector<RelationOperator> ops;
  for (const std::string& name : cfg.operators) ops.push_back(parse_operator(name));
  return ops;
}

EmbeddingStore load_store(const EmbeddingSpec& spec, bool default_case_fold,
                          const RunConfig& cfg) {
  const bool fold = spec.case_fold.value_or(default_case_fold);
  EmbeddingStore store = EmbeddingStore::load(spec.path, fold);
  if (cfg.normalize_inputs) {
    std::size_t zero_rows = 0;
    store = store.normalized(&zero_rows);
    if (zero_rows > 0) {
      std::cerr << "note: " << spec.label << ": " << zero_rows
                << " zero rows left unnormalized\n";
    }
  }
  return store;
}

void write_report(const RunConfig& cfg, EvalReport report,
                  const std::string& embedding_label,
                  const std::string& dataset_hash) {
  report.embedding = embedding_label;
  report.seed = cfg.seed;
  report.config_hash = hash_string(canonical_config_json(cfg));
  report.dataset_hash = dataset_hash;
  report.timestamp = utc_timestamp();
  fs::create_directories(cfg.output_dir);
  const fs::path file = fs::path(cfg.output_dir) /
                        (report.task + "_" + report.embedding + "_" + report.op +
                         ".json");
  std::ofstream out(file, std::ios::app);  // reports are append-only
  if (!out) throw DataError(file.string() + ": cannot open report file");
  out << report.to_json() << '\n';

  std::cout << "task=" << report.task << " embedding=" << report.embedding
            << " operator=" << report.op;
  for (const auto& [name, value] : report.metrics) {
    std::cout << ' ' << name << '=' << value;
  }
  std::cout << '\n';
}

const std::string& require_dataset(const RunConfig& cfg, std::string flag_value,
                                   const std::string& key, std::string& slot) {
  if (!flag_value.empty()) {
    slot = std::move(flag_value);
    return slot;
  }
  const auto it = cfg.datasets.find(key);
  if (it == cfg.datasets.end() || it->second.empty()) {
    throw ConfigError("no dataset configured for '" + key +
                      "' (use --dataset or config datasets." + key + ")");
  }
  slot = it->second;
  return slot;
}

void require_embeddings(const RunConfig& cfg) {
  if (cfg.embeddings.empty()) {
    throw ConfigError("no embeddings configured (use --embedding label=path)");
  }
}

// Pair source for the sparsity/norm analyses: first two fields per line,
// `: category` section headers skipped. A seeded sample of sample_pairs is
// drawn when the file holds more (0 keeps everything).
TokenPairList load_analysis_pairs(const std::string& path, std::size_t sample,
                                  std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  TokenPairList pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::strip_line_ending(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.empty() || fields[0] == ":") continue;
    if (fields.size() < 2) {
      throw DataError(path + ": expected a word pair at line " +
                      std::to_string(line_no));
    }
    pairs.emplace_back(fields[0], fields[1]);
  }
  if (pairs.empty()) throw DataError(path + ": no word pairs found");
  if (sample > 0 && pairs.size() > sample) {
    Rng rng(seed);
    seeded_shuffle(pairs, rng);
    pairs.resize(sample);
  }
  return pairs;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open file for writing");
  out << content;
  if (!out) throw DataError(path + ": write failed");
}

// --- command bodies --------------------------------------------------------

struct ConvertArgs {
  std::string input, output;
  bool normalize = false;
  std::optional<bool> case_fold;
};

void cmd_convert(const ConvertArgs& args) {
  LoadStats stats;
  EmbeddingStore store =
      EmbeddingStore::load(args.input, args.case_fold.value_or(true), &stats);
  if (stats.duplicate_tokens > 0) {
    std::cerr << "note: dropped " << stats.duplicate_tokens
              << " duplicate tokens (first occurrence kept)\n";
  }
  if (args.normalize) {
    std::size_t zero_rows = 0;
    store = store.normalized(&zero_rows);
    if (zero_rows > 0) {
      std::cerr << "note: " << zero_rows << " zero rows left unnormalized\n";
    }
  }
  store.save(args.output);
  std::cout << "wrote " << store.size() << " x " << store.dim() << " store to "
            << args.output << '\n';
}

struct CountsArgs {
  std::string corpus, output;
  int window = 5;
  std::string weighting = "inverse-distance";
  std::size_t vocab_size = 50000;
};

void cmd_build_counts(const CountsArgs& args, const RunConfig& cfg) {
  std::ifstream in(args.corpus);
  if (!in) throw DataError(args.corpus + ": cannot open corpus");
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(fold_case(tok));
  const CooccurrenceMatrix counts =
      build_cooccurrence(tokens, args.window, parse_weighting(args.weighting),
                         args.vocab_size, cfg.workers);
  counts.save(args.output);
  std::cout << "counted " << counts.nonzeros() << " cells over "
            << counts.size() << " words into " << args.output << '\n';
}

struct MatrixArgs {
  std::string input, output;
  std::size_t rank = 300;
  std::string singular_values;  // svd only
  std::size_t max_iter = 200;   // nmf only
  double tol = 1e-6;            // nmf only
};

void cmd_ppmi(const MatrixArgs& args) {
  const CooccurrenceMatrix counts = CooccurrenceMatrix::load(args.input);
  const CooccurrenceMatrix weighted = ppmi(counts);
  weighted.save(args.output);
  std::cout << "ppmi: " << weighted.nonzeros() << " positive cells into "
            << args.output << '\n';
}

void cmd_svd(const MatrixArgs& args, const RunConfig& cfg) {
  const CooccurrenceMatrix matrix = CooccurrenceMatrix::load(args.input);
  const FactorizationResult result = truncated_svd(matrix, args.rank, cfg.seed);
  svd_embedding_store(result, matrix.vocab()).save(args.output);
  if (!args.singular_values.empty()) {
    std::ostringstream ss;
    char buf[64];
    for (double s : result.singular_values) {
      std::snprintf(buf, sizeof(buf), "%.9g\n", s);
      ss << buf;
    }
    write_text_file(args.singular_values, ss.str());
  }
  std::cout << "svd: rank " << args.rank << " embeddings into " << args.output
            << '\n';
}

void cmd_nmf(const MatrixArgs& args, const RunConfig& cfg) {
  const CooccurrenceMatrix matrix = CooccurrenceMatrix::load(args.input);
  NmfOptions options;
  options.max_iter = args.max_iter;
  options.tol = args.tol;
  options.seed = cfg.seed;
  const FactorizationResult result = nmf(matrix, args.rank, options);
  nmf_embedding_store(result, matrix.vocab()).save(args.output);
  std::cout << "nmf: rank " << args.rank << " embeddings into " << args.output
            << " (objective " << result.objective_trace.back() << " after "
            << result.objective_trace.size() << " iterations)\n";
}

void run_per_embedding_eval(
    const RunConfig& cfg, const std::string& dataset_path,
    bool default_case_fold,
    const std::function<EvalReport(const EmbeddingStore&, RelationOperator)>& fn) {
  require_embeddings(cfg);
  const std::vector<RelationOperator> ops = resolve_operators(cfg);
  const std::string dataset_hash = hash_path(dataset_path);
  for (const EmbeddingSpec& spec : cfg.embeddings) {
    const EmbeddingStore store = load_store(spec, default_case_fold, cfg);
    for (const RelationOperator op : ops) {
      write_report(cfg, fn(store, op), spec.label, dataset_hash);
    }
  }
}

void cmd_eval_sat(RunConfig& cfg, std::string dataset_flag) {
  require_embeddings(cfg);
  std::string slot;
  const std::string& path = require_dataset(cfg, std::move(dataset_flag), "sat", slot);
  const auto dataset = load_sat_questions(path);
  const EvalOptions opt = eval_options(cfg);
  run_per_embedding_eval(cfg, path, true,
                         [&](const EmbeddingStore& store, RelationOperator op) {
                           return eval_sat(dataset, store, op, opt);
                         });
}

void cmd_eval_semeval(RunConfig& cfg, std::string dataset_flag) {
  require_embeddings(cfg);
  std::string slot;
  const std::string& path =
      require_dataset(cfg, std::move(dataset_flag), "semeval", slot);
  const auto dataset = load_semeval_dataset(path);
  const EvalOptions opt = eval_options(cfg);
  run_per_embedding_eval(cfg, path, true,
                         [&](const EmbeddingStore& store, RelationOperator op) {
                           return eval_semeval(dataset, store, op, opt);
                         });
}

void cmd_eval_analogy(RunConfig& cfg, std::string dataset_flag,
                      std::string search_vocab_flag) {
  require_embeddings(cfg);
  std::string slot;
  const std::string& path =
      require_dataset(cfg, std::move(dataset_flag), "analogy", slot);
  const auto dataset = load_completion_dataset(path);
  const EvalOptions opt = eval_options(cfg);
  const std::string vocab_path =
      !search_vocab_flag.empty() ? search_vocab_flag : cfg.search_vocab;
  std::vector<std::string> vocab_tokens;
  if (!vocab_path.empty()) {
    std::ifstream in(vocab_path);
    if (!in) throw DataError(vocab_path + ": cannot open search vocabulary");
    std::string tok;
    while (in >> tok) vocab_tokens.push_back(tok);
    if (vocab_tokens.empty()) {
      throw DataError(vocab_path + ": empty search vocabulary");
    }
  }
  run_per_embedding_eval(
      cfg, path, true, [&](const EmbeddingStore& store, RelationOperator op) {
        std::vector<std::uint32_t> search =
            vocab_tokens.empty() ? full_search_vocab(store)
                                 : resolve_search_vocab(store, vocab_tokens);
        return eval_analogy_completion(dataset, store, op, search, opt);
      });
}

void cmd_eval_diffvec(RunConfig& cfg, std::string dataset_flag, bool holdout,
                      double train_fraction) {
  require_embeddings(cfg);
  std::string slot;
  const std::string& path =
      require_dataset(cfg, std::move(dataset_flag), "diffvec", slot);
  const auto dataset = load_labeled_pairs(path);
  RelClassOptions options;
  options.eval = eval_options(cfg);
  options.holdout_split = holdout;
  options.train_fraction = train_fraction;
  options.seed = cfg.seed;
  run_per_embedding_eval(cfg, path, true,
                         [&](const EmbeddingStore& store, RelationOperator op) {
                           return eval_1nn(dataset, store, op, options);
                         });
}

void cmd_eval_kbc(RunConfig& cfg, std::string train_flag, std::string test_flag) {
  require_embeddings(cfg);
  std::string train_slot, test_slot;
  const std::string& train_path =
      require_dataset(cfg, std::move(train_flag), "kbc_train", train_slot);
  const std::string& test_path =
      require_dataset(cfg, std::move(test_flag), "kbc_test", test_slot);
  const auto train = load_triples(train_path);
  const auto test = load_triples(test_path);
  const EvalOptions opt = eval_options(cfg);
  // Entity identifiers are case-significant: folding defaults off here.
  run_per_embedding_eval(
      cfg, test_path, false, [&](const EmbeddingStore& store, RelationOperator op) {
        const RelationPrototypeTable prototypes =
            build_relation_prototypes(train, store, op, opt);
        EvalReport report = eval_kbc(test, prototypes, store, op, opt);
        report.metrics["skipped_train_triples"] =
            static_cast<double>(prototypes.skipped_triples);
        return report;
      });
}

void cmd_analyze_sparsity(RunConfig& cfg, std::string pairs_flag,
                          const std::string& output) {
  require_embeddings(cfg);
  std::string slot;
  const std::string& path =
      require_dataset(cfg, std::move(pairs_flag), "pairs", slot);
  const TokenPairList pairs =
      load_analysis_pairs(path, cfg.sample_pairs, cfg.seed);
  const EvalOptions opt = eval_options(cfg);
  const std::vector<RelationOperator> ops = resolve_operators(cfg);
  std::ostringstream all;
  for (const EmbeddingSpec& spec : cfg.embeddings) {
    const EmbeddingStore store = load_store(spec, true, cfg);
    std::map<RelationOperator, SparsityCurve> curves;
    for (const RelationOperator op : ops) {
      curves[op] = average_sparsity(pairs, store, op, cfg.epsilon_grid, opt);
    }
    all << sparsity_curves_csv(curves);
  }
  write_text_file(output, all.str());
  std::cout << "sparsity curves for " << pairs.size() << " pairs into "
            << output << '\n';
}

void cmd_analyze_norms(RunConfig& cfg, std::string pairs_flag,
                       const std::string& output) {
  require_embeddings(cfg);
  std::string slot;
  const std::string& path =
      require_dataset(cfg, std::move(pairs_flag), "pairs", slot);
  const TokenPairList pairs =
      load_analysis_pairs(path, cfg.sample_pairs, cfg.seed);
  const EvalOptions opt = eval_options(cfg);
  const std::vector<RelationOperator> ops = resolve_operators(cfg);
  std::ostringstream csv;
  csv << "embedding,operator,average_norm\n";
  char buf[64];
  for (const EmbeddingSpec& spec : cfg.embeddings) {
    const EmbeddingStore store = load_store(spec, true, cfg);
    for (const RelationOperator op : ops) {
      std::snprintf(buf, sizeof(buf), "%.9g",
                    average_norm(pairs, store, op, opt));
      csv << spec.label << ',' << operator_name(op) << ',' << buf << '\n';
    }
  }
  write_text_file(output, csv.str());
  std::cout << "average norms for " << pairs.size() << " pairs into " << output
            << '\n';
}

void cmd_analyze_asymmetry(RunConfig& cfg, std::vector<std::string> dataset_flags,
                           const std::string& output) {
  require_embeddings(cfg);
  if (dataset_flags.empty()) {
    std::string slot;
    dataset_flags.push_back(
        require_dataset(cfg, "", "direction", slot));
  }
  std::vector<DirectionDataset> groups;
  std::string combined_hash;
  for (const std::string& path : dataset_flags) {
    const std::string stem = fs::path(path).stem().string();
    combined_hash = hash_string(combined_hash + hash_path(path));
    for (DirectionDataset& group : load_direction_datasets(path, stem)) {
      groups.push_back(std::move(group));
    }
  }
  const EvalOptions opt = eval_options(cfg);
  const std::vector<RelationOperator> ops = resolve_operators(cfg);
  std::ostringstream csv;
  csv << "embedding,relation,operator,mean_accuracy\n";
  char buf[64];
  for (const EmbeddingSpec& spec : cfg.embeddings) {
    const EmbeddingStore store = load_store(spec, true, cfg);
    for (const RelationOperator op : ops) {
      EvalReport report;
      report.task = "asymmetry";
      report.op = operator_name(op);
      double accuracy_sum = 0.0;
      std::size_t usable = 0, total = 0;
      for (const DirectionDataset& group : groups) {
        const AsymmetryResult result =
            asymmetry_cv(group, store, op, cfg.folds, cfg.cost, cfg.seed, opt);
        std::snprintf(buf, sizeof(buf), "%.9g", result.mean_accuracy);
        csv << spec.label << ',' << group.relation << ','
            << operator_name(op) << ',' << buf << '\n';
        report.per_category[group.relation] = result.mean_accuracy;
        accuracy_sum += result.mean_accuracy;
        usable += result.usable_pairs;
        total += group.pairs.size();
      }
      report.metrics["accuracy"] =
          accuracy_sum / static_cast<double>(groups.size());
      report.metrics["coverage"] =
          total == 0 ? 0.0
                     : static_cast<double>(usable) / static_cast<double>(total);
      report.metrics["folds"] = static_cast<double>(cfg.folds);
      report.metrics["cost"] = cfg.cost;
      write_report(cfg, std::move(report), spec.label, combined_hash);
    }
  }
  write_text_file(output, csv.str());
  std::cout << "asymmetry accuracies into " << output << '\n';
}

void cmd_report_table(RunConfig& cfg, std::string reports_flag,
                      const std::string& output) {
  const std::string dir = reports_flag.empty() ? cfg.output_dir : reports_flag;
  if (!fs::is_directory(dir)) {
    throw DataError(dir + ": not a report directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<EvalReport> reports;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    if (!in) throw DataError(file.string() + ": cannot open report");
    std::string line, last;
    while (std::getline(in, line)) {
      if (!line.empty()) last = line;  // append-only: latest run wins
    }
    if (last.empty()) continue;
    try {
      reports.push_back(EvalReport::from_json(last));
    } catch (const json::exception& e) {
      throw DataError(file.string() + ": bad report JSON (" +
                      std::string(e.what()) + ")");
    }
  }
  if (reports.empty()) throw DataError(dir + ": no reports found");
  const std::string table = build_report_table(reports);
  if (output.empty()) {
    std::cout << table;
  } else {
    write_text_file(output, table);
    std::cout << "report table into " << output << '\n';
  }
}

void emit_error(const std::string& code, const std::string& message) {
  json j;
  j["code"] = code;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  static const std::set<std::string> commands = {
      "convert",        "build-counts",     "ppmi",
      "svd",            "nmf",              "eval-sat",
      "eval-semeval",   "eval-analogy",     "eval-diffvec",
      "eval-kbc",       "analyze-sparsity", "analyze-norms",
      "analyze-asymmetry", "report-table"};
  if (argc >= 2 && argv[1][0] != '-' && !commands.contains(argv[1])) {
    emit_error("UNKNOWN_COMMAND", std::string("unknown command '") + argv[1] + "'");
    return 2;
  }

  CLI::App app{"relcomp: compositional relation representation benchmarks"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::vector<std::string> embedding_flags;
  std::vector<std::string> operator_flags;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<bool> normalize;
  std::optional<std::string> oov_policy;
  std::optional<bool> case_fold;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--embedding", embedding_flags,
                 "embedding store as label=path (repeatable)");
  app.add_option("--operator", operator_flags,
                 "operator: pairdiff/concat/add/mult (repeatable)");
  app.add_option("--output-dir", output_dir, "report output directory");
  app.add_option("--seed", seed, "seed for all randomized steps");
  app.add_option("--workers", workers, "worker threads (1 = reproducibility mode)");
  app.add_flag("--normalize,!--no-normalize", normalize,
               "l2-normalize word vectors before composition");
  app.add_option("--oov-policy", oov_policy, "count-incorrect or skip");
  app.add_flag("--case-fold,!--no-case-fold", case_fold,
               "lowercase tokens on load (overrides per-command default)");

  // convert
  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert", "normalize/rewrite an embedding file");
  convert->add_option("--input", convert_args.input)->required();
  convert->add_option("--output", convert_args.output)->required();
  convert->add_flag("--unit-length", convert_args.normalize,
                    "scale rows to unit l2 norm");

  // build-counts
  CountsArgs counts_args;
  auto* counts = app.add_subcommand("build-counts",
                                    "co-occurrence counts from a text corpus");
  counts->add_option("--corpus", counts_args.corpus)->required();
  counts->add_option("--output", counts_args.output)->required();
  counts->add_option("--window", counts_args.window);
  counts->add_option("--weighting", counts_args.weighting);
  counts->add_option("--vocab-size", counts_args.vocab_size);

  // ppmi / svd / nmf
  MatrixArgs ppmi_args, svd_args, nmf_args;
  auto* ppmi_cmd = app.add_subcommand("ppmi", "PPMI-reweight a count matrix");
  ppmi_cmd->add_option("--input", ppmi_args.input)->required();
  ppmi_cmd->add_option("--output", ppmi_args.output)->required();
  auto* svd_cmd = app.add_subcommand("svd", "truncated SVD embeddings from a matrix");
  svd_cmd->add_option("--input", svd_args.input)->required();
  svd_cmd->add_option("--output", svd_args.output)->required();
  svd_cmd->add_option("--rank", svd_args.rank);
  svd_cmd->add_option("--singular-values", svd_args.singular_values);
  auto* nmf_cmd = app.add_subcommand("nmf", "NMF embeddings from a matrix");
  nmf_cmd->add_option("--input", nmf_args.input)->required();
  nmf_cmd->add_option("--output", nmf_args.output)->required();
  nmf_cmd->add_option("--rank", nmf_args.rank);
  nmf_cmd->add_option("--max-iter", nmf_args.max_iter);
  nmf_cmd->add_option("--tol", nmf_args.tol);

  // eval commands
  std::string sat_dataset, semeval_dataset, analogy_dataset, diffvec_dataset;
  std::string search_vocab_flag, kbc_train, kbc_test;
  bool diffvec_holdout = false;
  double diffvec_train_fraction = 0.8;
  auto* sat = app.add_subcommand("eval-sat", "SAT multiple-choice accuracy");
  sat->add_option("--dataset", sat_dataset);
  auto* semeval = app.add_subcommand("eval-semeval", "SemEval MaxDiff accuracy");
  semeval->add_option("--dataset", semeval_dataset);
  auto* analogy = app.add_subcommand("eval-analogy", "analogy completion accuracy");
  analogy->add_option("--dataset", analogy_dataset);
  analogy->add_option("--search-vocab", search_vocab_flag);
  auto* diffvec = app.add_subcommand("eval-diffvec", "1-NN relation classification");
  diffvec->add_option("--dataset", diffvec_dataset);
  diffvec->add_flag("--holdout", diffvec_holdout,
                    "seeded train/test split instead of leave-one-out");
  diffvec->add_option("--train-fraction", diffvec_train_fraction);
  auto* kbc = app.add_subcommand("eval-kbc", "knowledge base completion ranking");
  kbc->add_option("--train", kbc_train);
  kbc->add_option("--test", kbc_test);

  // analyses
  std::string pairs_flag, sparsity_output, norms_output, asymmetry_output;
  std::vector<std::string> direction_flags;
  std::optional<std::size_t> sample_flag, folds_flag;
  std::optional<double> cost_flag;
  auto* sparsity_cmd =
      app.add_subcommand("analyze-sparsity", "mean sparsity curves per operator");
  sparsity_cmd->add_option("--pairs", pairs_flag);
  sparsity_cmd->add_option("--output", sparsity_output)->required();
  sparsity_cmd->add_option("--sample", sample_flag);
  auto* norms_cmd =
      app.add_subcommand("analyze-norms", "mean relation-vector l2 norms");
  norms_cmd->add_option("--pairs", pairs_flag);
  norms_cmd->add_option("--output", norms_output)->required();
  norms_cmd->add_option("--sample", sample_flag);
  auto* asymmetry_cmd = app.add_subcommand(
      "analyze-asymmetry", "direction classification CV accuracy");
  asymmetry_cmd->add_option("--dataset", direction_flags);
  asymmetry_cmd->add_option("--output", asymmetry_output)->required();
  asymmetry_cmd->add_option("--folds", folds_flag);
  asymmetry_cmd->add_option("--cost", cost_flag);

  // report-table
  std::string reports_flag, table_output;
  auto* table =
      app.add_subcommand("report-table", "merge reports into a task table CSV");
  table->add_option("--reports", reports_flag);
  table->add_option("--output", table_output);

  // Global flags are accepted after the subcommand name too.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("CONFIG_ERROR", e.what());
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const std::string& flag : embedding_flags) {
      const auto eq = flag.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 >= flag.size()) {
        throw ConfigError("--embedding expects label=path, got '" + flag + "'");
      }
      EmbeddingSpec spec;
      spec.label = flag.substr(0, eq);
      spec.path = flag.substr(eq + 1);
      spec.case_fold = case_fold;
      cfg.embeddings.push_back(std::move(spec));
    }
    if (!operator_flags.empty()) cfg.operators = operator_flags;
    if (output_dir) cfg.output_dir = *output_dir;
    if (seed) cfg.seed = *seed;
    if (workers) cfg.workers = *workers;
    if (normalize) cfg.normalize_inputs = *normalize;
    if (oov_policy) cfg.oov_policy = *oov_policy;
    if (sample_flag) cfg.sample_pairs = *sample_flag;
    if (folds_flag) cfg.folds = *folds_flag;
    if (cost_flag) cfg.cost = *cost_flag;
    if (case_fold) {
      for (EmbeddingSpec& spec : cfg.embeddings) spec.case_fold = case_fold;
    }

    if (app.get_subcommands().empty()) {
      emit_error("CONFIG_ERROR", "no command given (see --help)");
      return 2;
    }
    if (convert->parsed()) {
      convert_args.case_fold = case_fold;
      cmd_convert(convert_args);
    } else if (counts->parsed()) {
      cmd_build_counts(counts_args, cfg);
    } else if (ppmi_cmd->parsed()) {
      cmd_ppmi(ppmi_args);
    } else if (svd_cmd->parsed()) {
      cmd_svd(svd_args, cfg);
    } else if (nmf_cmd->parsed()) {
      cmd_nmf(nmf_args, cfg);
    } else if (sat->parsed()) {
      cmd_eval_sat(cfg, sat_dataset);
    } else if (semeval->parsed()) {
      cmd_eval_semeval(cfg, semeval_dataset);
    } else if (analogy->parsed()) {
      cmd_eval_analogy(cfg, analogy_dataset, search_vocab_flag);
    } else if (diffvec->parsed()) {
      cmd_eval_diffvec(cfg, diffvec_dataset, diffvec_holdout,
                       diffvec_train_fraction);
    } else if (kbc->parsed()) {
      cmd_eval_kbc(cfg, kbc_train, kbc_test);
    } else if (sparsity_cmd->parsed()) {
      cmd_analyze_sparsity(cfg, pairs_flag, sparsity_output);
    } else if (norms_cmd->parsed()) {
      cmd_analyze_norms(cfg, pairs_flag, norms_output);
    } else if (asymmetry_cmd->parsed()) {
      cmd_analyze_asymmetry(cfg, direction_flags, asymmetry_output);
    } else if (table->parsed()) {
      cmd_report_table(cfg, reports_flag, table_output);
    }
    return 0;
  } catch (const ConfigError& e) {
    emit_error("CONFIG_ERROR", e.what());
    return 2;
  } catch (const DataError& e) {
    emit_error("DATA_ERROR", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("INTERNAL_ERROR", e.what());
    return 4;
  }
}

}  // namespace relcomp
