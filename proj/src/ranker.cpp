#include "clarank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "clarank/error.hpp"
#include "util.hpp"

namespace clarank {

std::string_view mode_name(CompositionSpec spec) {
  if (spec.use_question && spec.use_answer) return "q0qa";
  if (spec.use_question) return "q0q";
  if (spec.use_answer) return "q0a";
  return "q0";
}

std::optional<CompositionSpec> parse_mode(std::string_view name) {
  for (auto spec : {kQ0Only, kQ0Q, kQ0A, kQ0QA}) {
    if (mode_name(spec) == name) return spec;
  }
  return std::nullopt;
}

void RankerConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kConfig, "mu must be a positive finite number");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::kConfig, "lambda must lie in [0, 1]");
  if (depth == 0) throw Error(ErrorCode::kConfig, "ranking depth must be at least 1");
}

ComposedQuery compose_query(const ClarificationRound& round, CompositionSpec spec,
                            const Stoplist& stoplist) {
  ComposedQuery q;
  q.q0 = analyze_text(round.initial_query, stoplist);
  if (spec.use_question) q.round = analyze_text(round.question, stoplist);
  if (spec.use_answer) {
    auto answer = analyze_text(round.answer, stoplist);
    q.round.insert(q.round.end(), answer.begin(), answer.end());
  }
  return q;
}

namespace {

// A query reduced to its in-collection terms, each weighted by
// count / |Q'| so that scores are mean log-likelihoods.
struct QueryModel {
  struct Term {
    TermId id;
    double weight;
    double smoothing_mass;  // mu * cf / |C|
  };
  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }
};

QueryModel build_model(const Index& index, const TokenList& query, double mu,
                       std::vector<std::string>* dropped) {
  std::map<TermId, std::size_t> counts;
  std::size_t kept = 0;
  for (const auto& token : query) {
    if (auto id = index.term_id(token)) {
      ++counts[*id];
      ++kept;
    } else if (dropped && std::find(dropped->begin(), dropped->end(), token) == dropped->end()) {
      dropped->push_back(token);
    }
  }
  QueryModel model;
  const double total = static_cast<double>(index.collection_length());
  for (const auto& [id, count] : counts) {
    model.terms.push_back({id, static_cast<double>(count) / static_cast<double>(kept),
                           mu * static_cast<double>(index.collection_frequency(id)) / total});
  }
  return model;
}

double log_prob(double tf, double smoothing_mass, double doc_length, double mu) {
  return std::log((tf + smoothing_mass) / (doc_length + mu));
}

double score_doc(const Index& index, const QueryModel& model, DocNo doc, double mu) {
  const auto length = static_cast<double>(index.doc_length(doc));
  double sum = 0.0;
  for (const auto& t : model.terms) {
    sum += t.weight * log_prob(index.term_frequency(t.id, doc), t.smoothing_mass, length, mu);
  }
  return sum;
}

DocNo require_doc(const Index& index, std::string_view doc_id) {
  auto doc = index.doc_no(doc_id);
  if (!doc) throw Error(ErrorCode::kInvalidArgument, "unknown doc_id '" + std::string(doc_id) + "'");
  return *doc;
}

void require_mu(double mu) {
  if (!(mu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "mu must be positive");
}

struct Scored {
  DocNo doc;
  double score;
};

}  // namespace

std::optional<double> smoothed_log_prob(const Index& index, std::string_view term,
                                        std::string_view doc_id, double mu) {
  require_mu(mu);
  const DocNo doc = require_doc(index, doc_id);
  const auto id = index.term_id(term);
  if (!id) return std::nullopt;
  const double mass = mu * static_cast<double>(index.collection_frequency(*id)) /
                      static_cast<double>(index.collection_length());
  return log_prob(index.term_frequency(*id, doc), mass, static_cast<double>(index.doc_length(doc)), mu);
}

double ql_score(const Index& index, const TokenList& query, std::string_view doc_id, double mu) {
  require_mu(mu);
  const DocNo doc = require_doc(index, doc_id);
  const auto model = build_model(index, query, mu, nullptr);
  if (model.empty()) throw Error(ErrorCode::kEmptyQuery, "query has no terms present in the collection");
  return score_doc(index, model, doc, mu);
}

RankedList rank_query(const Index& index, const TokenList& q0, const TokenList& round,
                      const RankerConfig& config) {
  config.validate();
  RankedList result;
  const double mu = config.mu;
  const auto q0_model = build_model(index, q0, mu, &result.dropped_terms);
  const auto round_model = build_model(index, round, mu, &result.dropped_terms);
  if (q0_model.empty()) {
    throw Error(ErrorCode::kEmptyQuery, "initial query has no terms present in the collection");
  }

  auto final_score = [&](DocNo doc) {
    const double s0 = score_doc(index, q0_model, doc, mu);
    if (round_model.empty()) return s0;
    return config.lambda * s0 + (1.0 - config.lambda) * score_doc(index, round_model, doc, mu);
  };

  std::vector<DocNo> candidates;
  for (const auto* model : {&q0_model, &round_model}) {
    for (const auto& t : model->terms) {
      for (const auto& p : index.postings(t.id)) candidates.push_back(p.doc);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<Scored> scored;
  scored.reserve(candidates.size() + config.depth);
  for (DocNo doc : candidates) scored.push_back({doc, final_score(doc)});

  // Documents matching no query term score const - log(|D| + mu), so the best
  // of them are the shortest; walk them by length until the cutoff is filled
  // and any tie at the cutoff score is exhausted.
  std::size_t taken = 0;
  double cutoff_score = 0.0;
  for (DocNo doc : index.docs_by_length()) {
    if (std::binary_search(candidates.begin(), candidates.end(), doc)) continue;
    const double s = final_score(doc);
    if (taken >= config.depth && s < cutoff_score) break;
    scored.push_back({doc, s});
    cutoff_score = s;
    ++taken;
  }

  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc < b.doc;
  });
  if (scored.size() > config.depth) scored.resize(config.depth);

  result.entries.reserve(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    result.entries.push_back({index.doc_name(scored[i].doc), scored[i].score, i + 1});
  }
  return result;
}

RankedList interpolated_rank(const Index& index, const ClarificationRound& round,
                             CompositionSpec spec, const RankerConfig& config,
                             const Stoplist& stoplist) {
  const auto query = compose_query(round, spec, stoplist);
  auto list = rank_query(index, query.q0, query.round, config);
  list.id = conversation_id(round);
  return list;
}

std::string format_run(const std::vector<RankedList>& lists, std::string_view tag) {
  std::string out;
  for (const auto& list : lists) {
    for (const auto& e : list.entries) {
      out += list.id;
      out += " Q0 ";
      out += e.doc_id;
      out += ' ';
      out += std::to_string(e.rank);
      out += ' ';
      out += detail::format_fixed(e.score, 6);
      out += ' ';
      out += tag;
      out += '\n';
    }
  }
  return out;
}

}  // namespace clarank
