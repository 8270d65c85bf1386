#include "clarank/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "clarank/analysis.hpp"
#include "clarank/error.hpp"
#include "clarank/evaluation.hpp"
#include "clarank/stats.hpp"
#include "util.hpp"

namespace clarank {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto text = trim(value);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::kConfig, "invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  const auto text = trim(value);
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig, "invalid value '" + std::string(value) + "' for " + std::string(key));
}

}  // namespace

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = trim(raw_value);

  if (key == "corpus") corpus = value;
  else if (key == "index") index = value;
  else if (key == "conversations") conversations = value;
  else if (key == "qrels") qrels = value;
  else if (key == "output_dir") output_dir = value;
  else if (key == "run_dir") run_dir = value;
  else if (key == "run_output" || key == "output") run_output = value;
  else if (key == "stoplist") stoplist = value;
  else if (key == "policy") policy = value;
  else if (key == "topics") topics = value;
  else if (key == "reference") reference = value;
  else if (key == "mode") mode = value;
  else if (key == "mu") mu = parse_real(key, value);
  else if (key == "lambda") lambda = parse_real(key, value);
  else if (key == "k") k = parse_number<std::size_t>(key, value);
  else if (key == "depth") depth = parse_number<std::size_t>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "test_topics") test_topics = parse_number<std::size_t>(key, value);
  else if (key == "threads") threads = parse_number<unsigned>(key, value);
  else if (key == "ngram_depth") ngram_depth = parse_number<std::size_t>(key, value);
  else if (key == "min_count") min_count = parse_number<std::size_t>(key, value);
  else throw Error(ErrorCode::kConfig, "unknown configuration key '" + std::string(raw_key) + "'");
}

void ExperimentConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read config file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig,
                  path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    set(text.substr(0, eq), text.substr(eq + 1));
  }
}

void ExperimentConfig::validate() const {
  ranker().validate();
  if (k == 0) throw Error(ErrorCode::kConfig, "k must be at least 1");
  if (ngram_depth == 0) throw Error(ErrorCode::kConfig, "ngram_depth must be at least 1");
  if (threads == 0) throw Error(ErrorCode::kConfig, "threads must be at least 1");
  RankMode::parse(mode);
}

// ---------------------------------------------------------------------------

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "bounded_draw needs a positive bound");
  // 2^64 mod bound values at the bottom of the range would bias the modulo
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

TopicSplit split_topics(std::vector<std::string> topics, std::uint64_t seed, std::size_t n_test) {
  std::sort(topics.begin(), topics.end());
  topics.erase(std::unique(topics.begin(), topics.end()), topics.end());
  if (n_test >= topics.size() && !(n_test == 0 && topics.empty())) {
    throw Error(ErrorCode::kConfig, "test topic count (" + std::to_string(n_test) +
                                        ") must be smaller than the number of topics (" +
                                        std::to_string(topics.size()) + ")");
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = topics.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded_draw(rng, i));
    std::swap(topics[i - 1], topics[j]);
  }
  TopicSplit split;
  split.test.assign(topics.begin(), topics.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.train.assign(topics.begin() + static_cast<std::ptrdiff_t>(n_test), topics.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

// ---------------------------------------------------------------------------

RankMode RankMode::parse(std::string_view name) {
  if (name == "heuristic") return {true, kQ0Only};
  if (auto spec = parse_mode(name)) return {false, *spec};
  throw Error(ErrorCode::kConfig,
              "unknown mode '" + std::string(name) + "' (expected q0, q0q, q0a, q0qa or heuristic)");
}

std::string RankMode::name() const { return heuristic ? "heuristic" : std::string(mode_name(fixed)); }

std::vector<ConversationRun> rank_conversations(const Index& index,
                                                const std::vector<ClarificationRound>& rounds,
                                                RankMode mode, const PolicyTable& policy,
                                                const RankerConfig& config, const Stoplist& stoplist,
                                                unsigned threads) {
  config.validate();
  std::vector<ConversationRun> runs(rounds.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    runs[i].id = conversation_id(rounds[i]);
    if (!ids.insert(runs[i].id).second) {
      throw Error(ErrorCode::kDuplicateId, "conversation id collision: " + runs[i].id);
    }
  }
  detail::parallel_for(rounds.size(), threads, [&](std::size_t i) {
    const auto& round = rounds[i];
    auto& run = runs[i];
    run.spec = mode.heuristic ? policy.select(classify(round.answer)) : mode.fixed;
    try {
      run.list = interpolated_rank(index, round, run.spec, config, stoplist);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyQuery) {
        throw Error(e.code(), "conversation " + run.id + ": " + e.what());
      }
      run.skip_reason = "initial query has no indexed terms";
    }
  });
  return runs;
}

std::string format_rank_log(const std::vector<ConversationRun>& runs) {
  std::string out;
  for (const auto& run : runs) {
    if (!run.list) {
      out += run.id + "\tskipped\t" + run.skip_reason + "\n";
      continue;
    }
    for (const auto& term : run.list->dropped_terms) out += run.id + "\tdropped\t" + term + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Stoplist resolve_stoplist(const ExperimentConfig& config) {
  return config.stoplist.empty() ? Stoplist::english() : Stoplist::load(config.stoplist);
}

void require(const std::filesystem::path& p, const char* key) {
  if (p.empty()) throw Error(ErrorCode::kConfig, std::string("missing required setting '") + key + "'");
}

std::vector<ClarificationRound> load_rounds(const ExperimentConfig& config) {
  require(config.conversations, "conversations");
  auto rounds = parse_conversations(config.conversations);
  if (config.topics.empty()) return rounds;
  std::ifstream in(config.topics);
  if (!in) throw Error(ErrorCode::kConfig, "cannot read topic list: " + config.topics.string());
  std::set<std::string> keep;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (!t.empty() && t[0] != '#') keep.insert(std::move(t));
  }
  std::erase_if(rounds, [&](const ClarificationRound& r) { return !keep.count(r.topic_id); });
  return rounds;
}

std::string lines_of(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += s + "\n";
  return out;
}

std::string run_name(const std::filesystem::path& path) {
  std::string stem = path.filename().string();
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".txt") stem.resize(stem.size() - 4);
  if (stem.rfind("run.", 0) == 0 && stem.size() > 4) stem.erase(0, 4);
  return stem;
}

}  // namespace

std::filesystem::path run_path_for(const ExperimentConfig& config, std::string_view mode) {
  return config.effective_run_dir() / ("run." + std::string(mode) + ".txt");
}

std::string cmd_index_build(const ExperimentConfig& config) {
  require(config.corpus, "corpus");
  require(config.index, "index");
  const auto stoplist = resolve_stoplist(config);
  const auto index = Index::build(Index::read_corpus(config.corpus), stoplist, std::max(1u, config.threads));
  index.save(config.index);
  return "indexed " + std::to_string(index.doc_count()) + " documents, " +
         std::to_string(index.term_count()) + " terms, " + std::to_string(index.collection_length()) +
         " tokens -> " + config.index.string() + "\n";
}

std::string cmd_split(const ExperimentConfig& config) {
  std::vector<std::string> topics;
  for (const auto& r : load_rounds(config)) topics.push_back(r.topic_id);
  const auto split = split_topics(std::move(topics), config.seed, config.test_topics);
  const auto train_path = config.output_dir / "train_topics.txt";
  const auto test_path = config.output_dir / "test_topics.txt";
  detail::write_file_atomic(train_path, lines_of(split.train));
  detail::write_file_atomic(test_path, lines_of(split.test));
  return std::to_string(split.train.size()) + " train topics -> " + train_path.string() + "\n" +
         std::to_string(split.test.size()) + " test topics -> " + test_path.string() + "\n";
}

std::string cmd_rank(const ExperimentConfig& config) {
  config.validate();
  require(config.index, "index");
  const auto mode = RankMode::parse(config.mode);
  const auto stoplist = resolve_stoplist(config);
  const auto policy = config.policy.empty() ? PolicyTable::heuristic() : PolicyTable::load(config.policy);
  const auto rounds = load_rounds(config);
  const auto index = Index::load(config.index);

  const auto runs =
      rank_conversations(index, rounds, mode, policy, config.ranker(), stoplist, config.threads);
  std::vector<RankedList> lists;
  std::size_t skipped = 0;
  for (const auto& run : runs) {
    if (run.list) lists.push_back(*run.list);
    else ++skipped;
  }
  const auto path = config.run_output.empty() ? run_path_for(config, mode.name()) : config.run_output;
  auto log_path = path;
  log_path += ".log";
  detail::write_file_atomic(path, format_run(lists, mode.name()));
  detail::write_file_atomic(log_path, format_rank_log(runs));
  return "ranked " + std::to_string(lists.size()) + " conversations (" + std::to_string(skipped) +
         " skipped, see " + log_path.string() + ") -> " + path.string() + "\n";
}

std::string cmd_eval(const ExperimentConfig& config, const std::vector<std::filesystem::path>& runs) {
  config.validate();
  require(config.qrels, "qrels");
  if (runs.empty()) throw Error(ErrorCode::kConfig, "eval needs at least one run file");
  const auto qrels = Qrels::load(config.qrels);

  struct Evaluated {
    std::string name;
    std::filesystem::path path;
    EvalResult result;
  };
  std::vector<Evaluated> evaluated;
  for (const auto& path : runs) {
    evaluated.push_back({run_name(path), path, evaluate(load_run(path), qrels, config.k)});
  }

  // every run must rank the same conversations
  std::set<std::string> all_keys;
  for (const auto& e : evaluated) {
    for (const auto& [key, v] : e.result.per_conversation) all_keys.insert(key);
  }
  std::string mismatch;
  for (const auto& e : evaluated) {
    std::vector<std::string> missing;
    for (const auto& key : all_keys) {
      if (!e.result.per_conversation.count(key)) missing.push_back(key);
    }
    if (missing.empty()) continue;
    mismatch += "\n  " + e.path.string() + " lacks " + std::to_string(missing.size()) + " key(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 20); ++i) mismatch += " " + missing[i];
    if (missing.size() > 20) mismatch += " ...";
  }
  if (!mismatch.empty()) throw Error(ErrorCode::kKeyMismatch, "runs do not cover the same conversations:" + mismatch);

  std::size_t ref = 0;
  bool found = false;
  for (std::size_t i = 0; i < evaluated.size() && !found; ++i) {
    const auto& e = evaluated[i];
    if (!config.reference.empty() ? (e.name == config.reference || e.path == config.reference)
                                  : e.name == "heuristic") {
      ref = i;
      found = true;
    }
  }
  if (!found && !config.reference.empty()) {
    throw Error(ErrorCode::kConfig, "reference run '" + config.reference + "' is not among the inputs");
  }

  auto values = [](const EvalResult& r) {
    std::vector<double> v;
    for (const auto& [key, x] : r.per_conversation) v.push_back(x);
    return v;
  };
  const auto ref_values = values(evaluated[ref].result);

  std::string summary = "run,conversations,mean_ndcg,t_vs_reference,p_vs_reference\n";
  std::string report = "NDCG@" + std::to_string(config.k) + " (reference: " + evaluated[ref].name + ")\n";
  if (qrels.clamped_count() > 0) {
    report += "qrels: " + std::to_string(qrels.clamped_count()) + " negative grade(s) clamped to 0\n";
  }
  for (std::size_t i = 0; i < evaluated.size(); ++i) {
    const auto& e = evaluated[i];
    detail::write_file_atomic(config.output_dir / ("eval." + e.name + ".csv"), eval_csv(e.result));
    std::string t_text;
    std::string p_text;
    std::string line = e.name;
    line.resize(std::max<std::size_t>(line.size() + 1, 12), ' ');
    line += detail::format_fixed(e.result.mean, 4) + "  n=" + std::to_string(e.result.per_conversation.size());
    if (i != ref) {
      try {
        const auto t = paired_t_test(ref_values, values(e.result));
        t_text = detail::format_fixed(t.t, 4);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", t.p);
        p_text = buf;
        line += "  t=" + t_text + "  p=" + p_text + (t.p < 0.05 ? "  *" : "");
      } catch (const Error& err) {
        line += std::string("  ") + error_code_name(err.code());
      }
    }
    if (!e.result.unjudgeable.empty()) {
      line += "  (" + std::to_string(e.result.unjudgeable.size()) + " unjudgeable)";
    }
    report += line + "\n";
    summary += e.name + "," + std::to_string(e.result.per_conversation.size()) + "," +
               detail::format_fixed(e.result.mean, 6) + "," + t_text + "," + p_text + "\n";
  }
  detail::write_file_atomic(config.output_dir / "eval_summary.csv", summary);
  detail::write_file_atomic(config.output_dir / "eval_report.txt", report);
  return report;
}

std::string cmd_analyze(const ExperimentConfig& config, std::string_view which) {
  config.validate();
  static const std::set<std::string_view> kKinds = {"table1", "polarity-corr", "length-corr", "scatter",
                                                    "ngrams"};
  if (!kKinds.count(which)) {
    throw Error(ErrorCode::kConfig, "unknown analysis '" + std::string(which) +
                                        "' (expected table1, polarity-corr, length-corr, scatter or ngrams)");
  }
  const auto rounds = load_rounds(config);
  const auto& out_dir = config.output_dir;

  if (which == "ngrams") {
    std::vector<std::string> answers;
    for (const auto& r : rounds) answers.push_back(r.answer);
    const auto tree = answer_ngram_tree(answers, config.ngram_depth);
    const auto path = out_dir / "ngrams.json";
    detail::write_file_atomic(path, ngram_tree_json(tree, config.min_count));
    return "answer prefix tree over " + std::to_string(tree.count) + " answers -> " + path.string() + "\n";
  }

  const std::array<const char*, 4> modes = {"q0", "q0q", "q0a", "q0qa"};
  for (const char* m : modes) {
    const auto path = run_path_for(config, m);
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kMissingRun, "missing run for composition mode '" + std::string(m) +
                                              "' (expected " + path.string() + ")");
    }
  }
  require(config.qrels, "qrels");
  const auto qrels = Qrels::load(config.qrels);
  std::array<EvalResult, 4> evals;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    evals[i] = evaluate(load_run(run_path_for(config, modes[i])), qrels, config.k);
  }
  const auto stoplist = resolve_stoplist(config);
  const auto set = make_delta_records(rounds, {&evals[0], &evals[1], &evals[2], &evals[3]}, stoplist);
  const auto& records = set.records;

  if (which == "table1") {
    const auto rows = per_type_table(records);
    detail::write_file_atomic(out_dir / "table1.csv", per_type_table_csv(rows));
    const auto text = per_type_table_text(rows);
    detail::write_file_atomic(out_dir / "table1.txt", text);
    return text;
  }
  if (which == "polarity-corr" || which == "length-corr") {
    const bool polarity = which == "polarity-corr";
    const auto rows = polarity ? facet_polarity_correlation(records) : length_delta_correlation(records);
    const std::string stem = polarity ? "polarity_corr" : "length_corr";
    detail::write_file_atomic(out_dir / (stem + ".csv"), correlation_csv(rows));
    const auto text = correlation_text(rows);
    detail::write_file_atomic(out_dir / (stem + ".txt"), text);
    return text;
  }
  // scatter
  const auto data = delta_scatter(filter_by_type(records, {Polarity::kPositive, AnswerLength::kMulti}));
  detail::write_file_atomic(out_dir / "scatter.csv", scatter_csv(data));
  std::string counts = "quadrant,count\n";
  std::string text = "delta scatter over " + std::to_string(data.points.size()) + " positive multi-word answers\n";
  for (auto q : {Quadrant::kBothImprove, Quadrant::kQuestionHarmsAnswerImproves, Quadrant::kBothHarm,
                 Quadrant::kQuestionImprovesAnswerHarms, Quadrant::kAxis}) {
    counts += std::string(to_string(q)) + "," + std::to_string(data.count(q)) + "\n";
    text += "  " + std::string(to_string(q)) + ": " + std::to_string(data.count(q)) + "\n";
  }
  detail::write_file_atomic(out_dir / "scatter_quadrants.csv", counts);
  return text;
}

}  // namespace clarank
