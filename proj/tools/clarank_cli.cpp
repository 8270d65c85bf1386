// clarank command-line driver. Talks to the library only through clarank.h.

#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "clarank/clarank.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_setting(CLI::App* app, const std::string& flag, const std::string& key, Overrides& overrides,
                 const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
}

void add_ranker_settings(CLI::App* app, Overrides& o) {
  add_setting(app, "--mu", "mu", o, "Dirichlet prior mass (default 2000)");
  add_setting(app, "--lambda", "lambda", o, "weight of the initial query component (default 0.5)");
  add_setting(app, "--depth", "depth", o, "ranking depth (default 1000)");
}

int exit_code_for(clarank_status status) {
  return clarank_status_is_config_error(status) ? kExitUsage : kExitData;
}

int report(clarank_status status) {
  if (status != CLARANK_OK) {
    std::cerr << "clarank: " << clarank_status_name(status) << ": " << clarank_last_error() << "\n";
    return exit_code_for(status);
  }
  std::cout << clarank_last_report();
  return 0;
}

struct ConfigHandle {
  clarank_config* ptr = nullptr;
  ~ConfigHandle() { clarank_config_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clarank: ranking and analysis for clarification-based conversational search"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides overrides;
  app.add_option("--config", config_path, "key=value config file (default: $CLARANK_CONFIG)");
  add_setting(&app, "--output-dir", "output_dir", overrides, "directory for outputs");
  add_setting(&app, "--stoplist", "stoplist", overrides, "stoplist file (default: bundled English list)");
  add_setting(&app, "--threads", "threads", overrides, "worker threads");

  auto* index_cmd = app.add_subcommand("index", "inverted index commands");
  index_cmd->require_subcommand(1);
  auto* build_cmd = index_cmd->add_subcommand("build", "index a JSON-lines corpus");
  add_setting(build_cmd, "--corpus", "corpus", overrides, "corpus file, {\"doc_id\",\"text\"} per line");
  add_setting(build_cmd, "--index", "index", overrides, "index file to write");

  auto* split_cmd = app.add_subcommand("split", "seeded train/test split of the conversation topics");
  add_setting(split_cmd, "--conversations", "conversations", overrides, "conversations file");
  add_setting(split_cmd, "--seed", "seed", overrides, "shuffle seed");
  add_setting(split_cmd, "--test-topics", "test_topics", overrides, "number of held-out topics (default 40)");

  auto* rank_cmd = app.add_subcommand("rank", "rank documents for every conversation");
  add_setting(rank_cmd, "--mode", "mode", overrides, "q0 | q0q | q0a | q0qa | heuristic");
  add_setting(rank_cmd, "--index", "index", overrides, "index file");
  add_setting(rank_cmd, "--conversations", "conversations", overrides, "conversations file");
  add_setting(rank_cmd, "--topics", "topics", overrides, "only rank these topics (one per line)");
  add_setting(rank_cmd, "--policy", "policy", overrides, "policy override JSON");
  add_setting(rank_cmd, "--output,-o", "run_output", overrides, "run file (default <output-dir>/run.<mode>.txt)");
  add_ranker_settings(rank_cmd, overrides);

  std::vector<std::string> run_files;
  auto* eval_cmd = app.add_subcommand("eval", "NDCG and paired t-tests for run files");
  eval_cmd->add_option("runs", run_files, "run files")->required();
  add_setting(eval_cmd, "--qrels", "qrels", overrides, "qrels file");
  add_setting(eval_cmd, "--k", "k", overrides, "NDCG cutoff (default 20)");
  add_setting(eval_cmd, "--reference", "reference", overrides, "run compared against the others");

  std::string which;
  auto* analyze_cmd = app.add_subcommand("analyze", "per-type tables, correlations, scatter, n-grams");
  analyze_cmd->add_option("which", which, "table1 | polarity-corr | length-corr | scatter | ngrams")->required();
  add_setting(analyze_cmd, "--conversations", "conversations", overrides, "conversations file");
  add_setting(analyze_cmd, "--qrels", "qrels", overrides, "qrels file");
  add_setting(analyze_cmd, "--run-dir", "run_dir", overrides, "directory holding run.<mode>.txt");
  add_setting(analyze_cmd, "--topics", "topics", overrides, "only analyze these topics");
  add_setting(analyze_cmd, "--k", "k", overrides, "NDCG cutoff (default 20)");
  add_setting(analyze_cmd, "--ngram-depth", "ngram_depth", overrides, "answer prefix length (default 4)");
  add_setting(analyze_cmd, "--min-count", "min_count", overrides, "prune n-gram nodes below this count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  ConfigHandle config;
  if (clarank_config_create(&config.ptr) != CLARANK_OK) return report(CLARANK_E_INTERNAL);
  if (config_path.empty()) {
    if (const char* env = std::getenv("CLARANK_CONFIG")) config_path = env;
  }
  if (!config_path.empty()) {
    if (auto s = clarank_config_load_file(config.ptr, config_path.c_str()); s != CLARANK_OK) return report(s);
  }
  for (const auto& [key, value] : overrides) {
    if (auto s = clarank_config_set(config.ptr, key.c_str(), value.c_str()); s != CLARANK_OK) return report(s);
  }

  if (*build_cmd) return report(clarank_cmd_index_build(config.ptr));
  if (*split_cmd) return report(clarank_cmd_split(config.ptr));
  if (*rank_cmd) return report(clarank_cmd_rank(config.ptr));
  if (*eval_cmd) {
    std::vector<const char*> paths;
    for (const auto& r : run_files) paths.push_back(r.c_str());
    return report(clarank_cmd_eval(config.ptr, paths.data(), paths.size()));
  }
  if (*analyze_cmd) return report(clarank_cmd_analyze(config.ptr, which.c_str()));
  return kExitUsage;
}
