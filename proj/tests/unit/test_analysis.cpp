#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "clarank/analysis.hpp"
#include "oracle.hpp"

using namespace clarank;

namespace {

DeltaRecord rec(std::string id, AnswerType type, double q0, double q, double a, double qa) {
  DeltaRecord r;
  r.id = id;
  r.facet = id.substr(0, id.find('#'));
  r.type = type;
  r.ndcg_q0 = q0;
  r.ndcg_q = q;
  r.ndcg_a = a;
  r.ndcg_qa = qa;
  return r;
}

std::vector<DeltaRecord> forty_records() {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DeltaRecord> out;
  for (int i = 0; i < 40; ++i) {
    const auto p = kAllPolarities[static_cast<std::size_t>(i % 3 == 0 ? 0 : i % 4)];
    const auto l = kAllLengths[static_cast<std::size_t>(i % 5 == 0)];
    out.push_back(rec("f" + std::to_string(i % 10) + "#" + std::to_string(i), {p, l}, u(rng), u(rng), u(rng), u(rng)));
  }
  return out;
}

void check_tree(const NgramNode& node) {
  std::size_t sum = node.ending;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    sum += node.children[i].count;
    if (i > 0) CHECK(node.children[i - 1].token < node.children[i].token);
    check_tree(node.children[i]);
  }
  CHECK(sum == node.count);
}

}  // namespace

TEST_CASE("per-type table agrees with independent aggregation") {
  const auto records = forty_records();
  const auto rows = per_type_table(records);
  REQUIRE(rows.size() == 8);

  // spreadsheet-style: bucket by label, sum in long double
  std::map<std::string, std::array<long double, 5>> sums;
  for (const auto& r : records) {
    auto& s = sums[to_string(r.type)];
    s[0] += 1;
    s[1] += r.ndcg_q0;
    s[2] += r.ndcg_q;
    s[3] += r.ndcg_a;
    s[4] += r.ndcg_qa;
  }
  std::size_t total = 0;
  const std::vector<std::string> order{"P,single", "P,multi", "N,single", "N,multi",
                                       "O,single", "O,multi", "idk,single", "idk,multi"};
  for (std::size_t i = 0; i < 8; ++i) {
    const auto& row = rows[i];
    CHECK(to_string(row.type) == order[i]);
    total += row.count;
    auto it = sums.find(order[i]);
    if (it == sums.end()) {
      CHECK(row.count == 0);
      continue;
    }
    const auto& s = it->second;
    CHECK(row.count == static_cast<std::size_t>(s[0]));
    CHECK(std::fabs(row.mean_q0 - static_cast<double>(s[1] / s[0])) <= 1e-12);
    CHECK(std::fabs(row.mean_q - static_cast<double>(s[2] / s[0])) <= 1e-12);
    CHECK(std::fabs(row.mean_a - static_cast<double>(s[3] / s[0])) <= 1e-12);
    CHECK(std::fabs(row.mean_qa - static_cast<double>(s[4] / s[0])) <= 1e-12);
    const double dq = static_cast<double>((s[2] - s[1]) / s[1] * 100);
    CHECK(row.vs_q0[0].delta_percent == doctest::Approx(dq).epsilon(1e-10));
  }
  CHECK(total == records.size());
  CHECK(per_type_table(records).size() == rows.size());  // recomputation is pure
  CHECK(per_type_table_csv(per_type_table(records)) == per_type_table_csv(rows));
}

TEST_CASE("per-type table edge cases") {
  const AnswerType ps{Polarity::kPositive, AnswerLength::kSingle};
  std::vector<DeltaRecord> same;
  for (int i = 0; i < 4; ++i) same.push_back(rec("f#" + std::to_string(i), ps, 0.2 + 0.1 * i, 0.2 + 0.1 * i, 0.2 + 0.1 * i, 0.2 + 0.1 * i));
  const auto rows = per_type_table(same);
  for (const auto& c : rows[0].vs_q0) {
    CHECK(c.delta_percent == 0.0);
    CHECK_FALSE(c.significant);
    CHECK(c.p_value.value() == 1.0);
  }
  CHECK(rows[1].count == 0);
  CHECK(per_type_table_text(rows).find('*') == per_type_table_text(rows).rfind('*'));  // only the legend

  std::vector<DeltaRecord> shifted;
  for (int i = 0; i < 4; ++i) shifted.push_back(rec("f#" + std::to_string(i), ps, 0.2 + 0.1 * i, 0.2 + 0.1 * i, 0.2 + 0.1 * i, 0.25 + 0.1 * i));
  const auto c = per_type_table(shifted)[0].vs_q0[2];
  CHECK(c.delta_percent > 0);
  CHECK_FALSE(c.p_value.has_value());
  CHECK(c.note == "degenerate-variance");
  CHECK_FALSE(c.significant);

  CHECK_THROWS_AS((void)per_type_table({}), Error);
}

TEST_CASE("facet polarity correlation") {
  // ten facets; the share of positive answers follows the facet's Q0 quality
  std::vector<DeltaRecord> records;
  std::vector<double> ndcg, pct_p, pct_n, pct_rest;
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int f = 0; f < 10; ++f) {
    const int n = 4 + f % 3;
    const int positives = f * n / 10;
    const int negatives = (f % 4 == 0) ? 0 : (n - positives) / 2;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
      const Polarity p = i < positives ? Polarity::kPositive
                         : i < positives + negatives ? Polarity::kNegative
                                                     : (i % 2 ? Polarity::kIdk : Polarity::kOther);
      const double v = 0.05 * f + 0.1 * u(rng);
      sum += v;
      records.push_back(rec("F" + std::to_string(f) + "#" + std::to_string(i), {p, AnswerLength::kMulti}, v, 0, 0, 0));
    }
    ndcg.push_back(sum / n);
    pct_p.push_back(static_cast<double>(positives) / n);
    pct_n.push_back(static_cast<double>(negatives) / n);
    pct_rest.push_back(static_cast<double>(n - positives - negatives) / n);
  }
  const auto rows = facet_polarity_correlation(records);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].x == "pct_P");
  CHECK(std::fabs(rows[0].value->r - static_cast<double>(oracle::pearson_r(pct_p, ndcg))) <= 1e-10);
  CHECK(std::fabs(rows[1].value->r - static_cast<double>(oracle::pearson_r(pct_n, ndcg))) <= 1e-10);
  CHECK(std::fabs(rows[2].value->r - static_cast<double>(oracle::pearson_r(pct_rest, ndcg))) <= 1e-10);
  CHECK(rows[0].value->r > 0);
  CHECK(rows[0].value->n == 10);
}

TEST_CASE("facet polarity correlation sign and degenerate rows") {
  std::vector<DeltaRecord> records;
  for (int f = 0; f < 4; ++f) {
    const bool good = f % 2 == 0;
    for (int i = 0; i < 3; ++i) {
      records.push_back(rec("F" + std::to_string(f) + "#" + std::to_string(i),
                            {good ? Polarity::kPositive : Polarity::kNegative, AnswerLength::kSingle},
                            good ? 0.8 : 0.1, 0, 0, 0));
    }
  }
  const auto rows = facet_polarity_correlation(records);
  CHECK(rows[0].value->r > 0);
  CHECK(rows[1].value->r < 0);
  CHECK(rows[2].error == ErrorCode::kUndefinedCorrelation);  // nobody answered anything else
  CHECK(correlation_csv(rows).find("undefined-correlation") != std::string::npos);

  records.resize(6);
  CHECK_THROWS_AS((void)facet_polarity_correlation(records), Error);
}

TEST_CASE("length and delta correlations") {
  std::vector<DeltaRecord> records;
  std::vector<double> q, a, qa, dq, da, dqa;
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int i = 0; i < 20; ++i) {
    auto r = rec("F#" + std::to_string(i), {Polarity::kOther, AnswerLength::kMulti}, 0.4, 0.4 + u(rng), 0.4 + u(rng), 0.4 + u(rng));
    r.question_tokens = len(rng);
    r.answer_tokens = len(rng);
    records.push_back(r);
    q.push_back(static_cast<double>(r.question_tokens));
    a.push_back(static_cast<double>(r.answer_tokens));
    qa.push_back(static_cast<double>(r.question_tokens + r.answer_tokens));
    dq.push_back(r.ndcg_q - r.ndcg_q0);
    da.push_back(r.ndcg_a - r.ndcg_q0);
    dqa.push_back(r.ndcg_qa - r.ndcg_q0);
  }
  const auto rows = length_delta_correlation(records);
  REQUIRE(rows.size() == 5);
  const std::array<long double, 5> want = {oracle::pearson_r(q, dq), oracle::pearson_r(q, dqa),
                                           oracle::pearson_r(a, da), oracle::pearson_r(a, dqa),
                                           oracle::pearson_r(qa, dqa)};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::fabs(rows[i].value->r - static_cast<double>(want[i])) <= 1e-10);

  // linear growth with answer length gives r = 1
  for (auto& r : records) r.ndcg_a = r.ndcg_q0 + 0.01 * static_cast<double>(r.answer_tokens);
  CHECK(length_delta_correlation(records)[2].value->r == doctest::Approx(1.0).epsilon(1e-12));

  for (auto& r : records) r.ndcg_q = r.ndcg_a = r.ndcg_qa = r.ndcg_q0;
  for (const auto& row : length_delta_correlation(records)) CHECK(row.error == ErrorCode::kUndefinedCorrelation);

  records.resize(2);
  CHECK_THROWS_AS((void)length_delta_correlation(records), Error);
}

TEST_CASE("quadrant assignment") {
  CHECK(quadrant_of(0.1, 0.2) == Quadrant::kBothImprove);
  CHECK(quadrant_of(0.0, 0.2) == Quadrant::kAxis);
  CHECK(quadrant_of(0.1, 0.0) == Quadrant::kAxis);
  CHECK(quadrant_of(-0.1, 0.2) == Quadrant::kQuestionHarmsAnswerImproves);
  CHECK(quadrant_of(-0.1, -0.2) == Quadrant::kBothHarm);
  CHECK(quadrant_of(0.1, -0.2) == Quadrant::kQuestionImprovesAnswerHarms);

  const AnswerType pm{Polarity::kPositive, AnswerLength::kMulti};
  // signs of (dq, da): ++, ++, +-, -+, --, --, 0+, +0
  const std::vector<std::pair<double, double>> deltas{{0.1, 0.2}, {0.3, 0.05}, {0.2, -0.1}, {-0.2, 0.1},
                                                      {-0.1, -0.1}, {-0.4, -0.3}, {0.0, 0.1}, {0.2, 0.0}};
  std::vector<DeltaRecord> records;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    records.push_back(rec("x#" + std::to_string(i), pm, 0.5, 0.5 + deltas[i].first, 0.5 + deltas[i].second, 0.5));
  }
  records.push_back(rec("y#0", {Polarity::kNegative, AnswerLength::kMulti}, 0.5, 0.9, 0.9, 0.9));
  const auto data = delta_scatter(filter_by_type(records, pm));
  CHECK(data.points.size() == 8);
  CHECK(data.count(Quadrant::kBothImprove) == 2);
  CHECK(data.count(Quadrant::kQuestionImprovesAnswerHarms) == 1);
  CHECK(data.count(Quadrant::kQuestionHarmsAnswerImproves) == 1);
  CHECK(data.count(Quadrant::kBothHarm) == 2);
  CHECK(data.count(Quadrant::kAxis) == 2);
  std::size_t sum = 0;
  for (auto c : data.counts) sum += c;
  CHECK(sum == 8);
  CHECK(scatter_csv(data).rfind("key,dq,da,dqa,quadrant\nx#0,", 0) == 0);
}

TEST_CASE("answer n-gram tree examples") {
  const auto tree = answer_ngram_tree({"no i am looking", "no i want this"});
  CHECK(tree.token == "START");
  CHECK(tree.count == 2);
  const auto* no = tree.child("no");
  REQUIRE(no);
  CHECK(no->count == 2);
  const auto* i = no->child("i");
  REQUIRE(i);
  CHECK(i->count == 2);
  CHECK(i->children.size() == 2);
  CHECK(i->child("am")->count == 1);
  check_tree(tree);

  const auto short_tree = answer_ngram_tree({"yes please", "", "  "}, 4);
  CHECK(short_tree.count == 1);
  CHECK(short_tree.child("yes")->child("please")->children.empty());
  CHECK(short_tree.child("yes")->child("please")->ending == 1);

  CHECK_THROWS_AS((void)answer_ngram_tree({"a"}, 0), Error);
}

TEST_CASE("n-gram tree agrees with a hash-map prefix counter") {
  std::mt19937_64 rng(67);
  const std::vector<std::string> words{"no", "yes", "i", "am", "looking", "for", "want", "to", "know", "the", "dont"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> len(0, 7);
  std::vector<std::string> answers;
  for (int k = 0; k < 100; ++k) {
    std::string a;
    for (int j = len(rng); j > 0; --j) a += words[pick(rng)] + (j % 3 ? " " : ", ");
    answers.push_back(a);
  }
  std::unordered_map<std::string, std::size_t> prefix;
  std::size_t non_empty = 0;
  for (const auto& a : answers) {
    const auto t = tokenize(a);
    if (!t.empty()) ++non_empty;
    std::string key;
    for (std::size_t j = 0; j < t.size() && j < 4; ++j) {
      key += "/" + t[j];
      ++prefix[key];
    }
  }
  const auto tree = answer_ngram_tree(answers, 4);
  CHECK(tree.count == non_empty);
  check_tree(tree);
  std::size_t visited = 0;
  std::function<void(const NgramNode&, const std::string&, std::size_t)> walk =
      [&](const NgramNode& n, const std::string& key, std::size_t depth) {
        CHECK(depth <= 4);
        for (const auto& c : n.children) {
          const auto k = key + "/" + c.token;
          CHECK(prefix.at(k) == c.count);
          ++visited;
          walk(c, k, depth + 1);
        }
      };
  walk(tree, "", 0);
  CHECK(visited == prefix.size());
}

TEST_CASE("n-gram tree export") {
  const auto tree = answer_ngram_tree({"no i am", "no i want", "yes", "no thanks"});
  const auto doc = nlohmann::json::parse(ngram_tree_json(tree, 1));
  CHECK(doc["token"] == "START");
  CHECK(doc["count"] == 4);
  CHECK(doc["children"][0]["token"] == "no");
  CHECK(doc["children"][0]["count"] == 3);
  CHECK(doc["children"][1]["token"] == "yes");

  const auto pruned = nlohmann::json::parse(ngram_tree_json(tree, 2));
  REQUIRE(pruned["children"].size() == 1);
  CHECK(pruned["children"][0]["children"].size() == 1);
  CHECK(pruned["children"][0]["children"][0]["token"] == "i");
  CHECK(pruned["children"][0]["children"][0]["children"].empty());
}

TEST_CASE("joining conversations with evaluations") {
  std::vector<ClarificationRound> rounds{
      {"1", "1", "q", "would you like maps", "no i want photos", 0},
      {"1", "2", "q", "are you a student", "yes", 0},
      {"2", "1", "q", "do you need prices", "maybe", 0},
  };
  EvalResult q0, q, a, qa;
  for (auto* e : {&q0, &q, &a, &qa}) {
    e->per_conversation[conversation_id(rounds[0])] = 0.5;
    e->per_conversation[conversation_id(rounds[1])] = 0.25;
  }
  a.per_conversation[conversation_id(rounds[0])] = 0.75;
  const auto set = make_delta_records(rounds, {&q0, &q, &a, &qa}, Stoplist::english());
  REQUIRE(set.records.size() == 2);
  CHECK(set.unranked == 1);
  CHECK(set.records[0].delta_a() == 0.75 - 0.5);
  CHECK(set.records[0].type == AnswerType{Polarity::kNegative, AnswerLength::kMulti});
  CHECK(set.records[0].facet == "1-1");
  CHECK(set.records[0].answer_tokens == analyze_text("no i want photos", Stoplist::english()).size());

  qa.per_conversation.erase(conversation_id(rounds[1]));
  try {
    (void)make_delta_records(rounds, {&q0, &q, &a, &qa}, Stoplist::english());
    FAIL("expected mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kKeyMismatch);
    CHECK(std::string(e.what()).find("q0qa") != std::string::npos);
  }
  try {
    (void)make_delta_records(rounds, {&q0, nullptr, &a, &qa}, Stoplist::english());
    FAIL("expected missing run");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingRun);
  }
}
