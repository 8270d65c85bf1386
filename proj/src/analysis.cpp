#include "clarank/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "util.hpp"

namespace clarank {

DeltaRecordSet make_delta_records(const std::vector<ClarificationRound>& rounds,
                                  const CompositionResults& results, const Stoplist& stoplist) {
  const std::array<const EvalResult*, 4> evals = {results.q0, results.q, results.a, results.qa};
  const std::array<const char*, 4> names = {"q0", "q0q", "q0a", "q0qa"};
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (!evals[i]) throw Error(ErrorCode::kMissingRun, std::string("missing evaluation for ") + names[i]);
  }

  DeltaRecordSet set;
  for (const auto& round : rounds) {
    const auto id = conversation_id(round);
    std::array<std::optional<double>, 4> values;
    std::size_t present = 0;
    for (std::size_t i = 0; i < evals.size(); ++i) {
      auto it = evals[i]->per_conversation.find(id);
      if (it != evals[i]->per_conversation.end()) {
        values[i] = it->second;
        ++present;
      }
    }
    if (present == 0) {
      ++set.unranked;
      continue;
    }
    if (present != evals.size()) {
      std::string msg = "conversation " + id + " is missing from run(s):";
      for (std::size_t i = 0; i < evals.size(); ++i) {
        if (!values[i]) msg += std::string(" ") + names[i];
      }
      throw Error(ErrorCode::kKeyMismatch, msg);
    }
    DeltaRecord r;
    r.id = id;
    r.facet = facet_key(round);
    r.type = classify(round.answer);
    r.ndcg_q0 = *values[0];
    r.ndcg_q = *values[1];
    r.ndcg_a = *values[2];
    r.ndcg_qa = *values[3];
    r.question_tokens = analyze_text(round.question, stoplist).size();
    r.answer_tokens = analyze_text(round.answer, stoplist).size();
    set.records.push_back(std::move(r));
  }
  return set;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<Polarity, 4> kTableOrder = {Polarity::kPositive, Polarity::kNegative,
                                                 Polarity::kOther, Polarity::kIdk};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

CompositionComparison compare(const std::vector<double>& variant, const std::vector<double>& base) {
  CompositionComparison c;
  const double mb = mean_of(base);
  c.delta_percent = mb == 0.0 ? std::nan("") : (mean_of(variant) - mb) / mb * 100.0;
  try {
    const auto t = paired_t_test(variant, base);
    c.p_value = t.p;
    c.significant = t.p < 0.05;
  } catch (const Error& e) {
    c.note = error_code_name(e.code());
  }
  return c;
}

std::string fmt(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  return detail::format_fixed(v, decimals);
}

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::vector<TypeRow> per_type_table(const std::vector<DeltaRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::kInsufficientData, "no records to tabulate");
  std::vector<TypeRow> rows;
  for (auto polarity : kTableOrder) {
    for (auto length : kAllLengths) {
      const AnswerType type{polarity, length};
      std::vector<double> q0, q, a, qa;
      for (const auto& r : records) {
        if (r.type != type) continue;
        q0.push_back(r.ndcg_q0);
        q.push_back(r.ndcg_q);
        a.push_back(r.ndcg_a);
        qa.push_back(r.ndcg_qa);
      }
      TypeRow row;
      row.type = type;
      row.count = q0.size();
      if (row.count > 0) {
        row.mean_q0 = mean_of(q0);
        row.mean_q = mean_of(q);
        row.mean_a = mean_of(a);
        row.mean_qa = mean_of(qa);
        row.vs_q0 = {compare(q, q0), compare(a, q0), compare(qa, q0)};
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string per_type_table_csv(const std::vector<TypeRow>& rows) {
  std::string out =
      "polarity,length,samples,q0,q0q,delta_q_pct,p_q,q0a,delta_a_pct,p_a,q0qa,delta_qa_pct,p_qa\n";
  for (const auto& row : rows) {
    out += std::string(to_string(row.type.polarity)) + "," + std::string(to_string(row.type.length)) +
           "," + std::to_string(row.count);
    if (row.count == 0) {
      out += ",,,,,,,,,,\n";
      continue;
    }
    const std::array<double, 3> means = {row.mean_q, row.mean_a, row.mean_qa};
    out += "," + fmt(row.mean_q0, 6);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& c = row.vs_q0[i];
      out += "," + fmt(means[i], 6) + "," + fmt(c.delta_percent, 2) + "," +
             (c.p_value ? fmt_sci(*c.p_value) : c.note);
    }
    out += "\n";
  }
  return out;
}

std::string per_type_table_text(const std::vector<TypeRow>& rows) {
  std::string out = "polarity  length  samples     Q0   Q0+Q    d(%)   Q0+A    d(%)  Q0+Q+A    d(%)\n";
  for (const auto& row : rows) {
    std::string line = std::string(to_string(row.type.polarity));
    line.resize(10, ' ');
    std::string length(to_string(row.type.length));
    length.resize(6, ' ');
    line += length + pad(std::to_string(row.count), 9);
    if (row.count > 0) {
      line += pad(fmt(row.mean_q0, 3), 7);
      const std::array<double, 3> means = {row.mean_q, row.mean_a, row.mean_qa};
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& c = row.vs_q0[i];
        std::string delta = fmt(c.delta_percent, 1);
        if (c.delta_percent > 0) delta = "+" + delta;
        if (c.significant) delta += "*";
        line += pad(fmt(means[i], 3), i == 2 ? 8 : 7) + pad(delta, 8);
      }
    }
    out += line + "\n";
  }
  out += "* paired two-sided t-test vs Q0, p < 0.05\n";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

CorrelationRow correlate(std::string x, std::string y, const std::vector<double>& xs,
                         const std::vector<double>& ys) {
  CorrelationRow row;
  row.x = std::move(x);
  row.y = std::move(y);
  try {
    row.value = pearson(xs, ys);
  } catch (const Error& e) {
    row.error = e.code();
    row.message = e.what();
  }
  return row;
}

}  // namespace

std::vector<CorrelationRow> facet_polarity_correlation(const std::vector<DeltaRecord>& records) {
  struct FacetTally {
    double ndcg_sum = 0.0;
    std::size_t total = 0;
    std::size_t positive = 0;
    std::size_t negative = 0;
  };
  std::map<std::string, FacetTally> facets;
  for (const auto& r : records) {
    auto& f = facets[r.facet];
    f.ndcg_sum += r.ndcg_q0;
    ++f.total;
    if (r.type.polarity == Polarity::kPositive) ++f.positive;
    if (r.type.polarity == Polarity::kNegative) ++f.negative;
  }
  if (facets.size() < 3) {
    throw Error(ErrorCode::kInsufficientData, "polarity correlation needs at least three facets");
  }
  std::vector<double> ndcg, pos, neg, rest;
  for (const auto& [facet, f] : facets) {
    const double n = static_cast<double>(f.total);
    ndcg.push_back(f.ndcg_sum / n);
    pos.push_back(100.0 * static_cast<double>(f.positive) / n);
    neg.push_back(100.0 * static_cast<double>(f.negative) / n);
    rest.push_back(100.0 * static_cast<double>(f.total - f.positive - f.negative) / n);
  }
  return {correlate("pct_P", "ndcg_q0", pos, ndcg), correlate("pct_N", "ndcg_q0", neg, ndcg),
          correlate("pct_rest", "ndcg_q0", rest, ndcg)};
}

std::vector<CorrelationRow> length_delta_correlation(const std::vector<DeltaRecord>& records) {
  if (records.size() < 3) {
    throw Error(ErrorCode::kInsufficientData, "length correlation needs at least three records");
  }
  std::vector<double> q_len, a_len, qa_len, dq, da, dqa;
  for (const auto& r : records) {
    q_len.push_back(static_cast<double>(r.question_tokens));
    a_len.push_back(static_cast<double>(r.answer_tokens));
    qa_len.push_back(static_cast<double>(r.question_tokens + r.answer_tokens));
    dq.push_back(r.delta_q());
    da.push_back(r.delta_a());
    dqa.push_back(r.delta_qa());
  }
  return {correlate("tokens_Q", "delta_Q", q_len, dq), correlate("tokens_Q", "delta_QA", q_len, dqa),
          correlate("tokens_A", "delta_A", a_len, da), correlate("tokens_A", "delta_QA", a_len, dqa),
          correlate("tokens_QA", "delta_QA", qa_len, dqa)};
}

std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
  std::string out = "x,y,n,r,p,error\n";
  for (const auto& row : rows) {
    out += row.x + "," + row.y + ",";
    if (row.value) {
      out += std::to_string(row.value->n) + "," + fmt(row.value->r, 6) + "," + fmt_sci(row.value->p) + ",";
    } else {
      out += ",,," + std::string(error_code_name(row.error));
    }
    out += "\n";
  }
  return out;
}

std::string correlation_text(const std::vector<CorrelationRow>& rows) {
  std::string out = "X          Y              n   pearson_r    p-value\n";
  for (const auto& row : rows) {
    std::string x = row.x;
    x.resize(11, ' ');
    std::string y = row.y;
    y.resize(12, ' ');
    std::string line = x + y;
    if (row.value) {
      line += pad(std::to_string(row.value->n), 5) + pad(fmt(row.value->r, 3), 12) +
              pad(fmt_sci(row.value->p), 11);
    } else {
      line += "  " + std::string(error_code_name(row.error));
    }
    out += line + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::kBothImprove: return "both-improve";
    case Quadrant::kQuestionHarmsAnswerImproves: return "q-harms-a-improves";
    case Quadrant::kBothHarm: return "both-harm";
    case Quadrant::kQuestionImprovesAnswerHarms: return "q-improves-a-harms";
    case Quadrant::kAxis: return "axis";
  }
  return "?";
}

Quadrant quadrant_of(double dq, double da) {
  if (dq == 0.0 || da == 0.0) return Quadrant::kAxis;
  if (dq > 0.0) return da > 0.0 ? Quadrant::kBothImprove : Quadrant::kQuestionImprovesAnswerHarms;
  return da > 0.0 ? Quadrant::kQuestionHarmsAnswerImproves : Quadrant::kBothHarm;
}

std::vector<DeltaRecord> filter_by_type(const std::vector<DeltaRecord>& records, AnswerType type) {
  std::vector<DeltaRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const DeltaRecord& r) { return r.type == type; });
  return out;
}

ScatterData delta_scatter(const std::vector<DeltaRecord>& records) {
  ScatterData data;
  for (const auto& r : records) {
    ScatterPoint p{r.id, r.delta_q(), r.delta_a(), r.delta_qa(), Quadrant::kAxis};
    p.quadrant = quadrant_of(p.dq, p.da);
    ++data.counts[static_cast<std::size_t>(p.quadrant)];
    data.points.push_back(std::move(p));
  }
  return data;
}

std::string scatter_csv(const ScatterData& data) {
  std::string out = "key,dq,da,dqa,quadrant\n";
  for (const auto& p : data.points) {
    out += p.id + "," + fmt(p.dq, 6) + "," + fmt(p.da, 6) + "," + fmt(p.dqa, 6) + "," +
           std::string(to_string(p.quadrant)) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

const NgramNode* NgramNode::child(std::string_view t) const {
  auto it = std::lower_bound(children.begin(), children.end(), t,
                             [](const NgramNode& n, std::string_view k) { return n.token < k; });
  return (it != children.end() && it->token == t) ? &*it : nullptr;
}

NgramNode answer_ngram_tree(const std::vector<std::string>& answers, std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::kInvalidArgument, "n-gram depth must be at least 1");
  NgramNode root;
  root.token = "START";
  for (const auto& answer : answers) {
    const auto tokens = tokenize(answer);
    if (tokens.empty()) continue;
    ++root.count;
    NgramNode* node = &root;
    const std::size_t n = std::min(depth, tokens.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto& kids = node->children;
      auto it = std::lower_bound(kids.begin(), kids.end(), tokens[i],
                                 [](const NgramNode& c, const std::string& k) { return c.token < k; });
      if (it == kids.end() || it->token != tokens[i]) it = kids.insert(it, NgramNode{tokens[i], 0, 0, {}});
      node = &*it;
      ++node->count;
    }
    ++node->ending;
  }
  return root;
}

namespace {

nlohmann::ordered_json node_json(const NgramNode& node, std::size_t min_count) {
  nlohmann::ordered_json j;
  j["token"] = node.token;
  j["count"] = node.count;
  std::vector<const NgramNode*> kids;
  for (const auto& c : node.children) {
    if (c.count >= min_count) kids.push_back(&c);
  }
  std::stable_sort(kids.begin(), kids.end(),
                   [](const NgramNode* a, const NgramNode* b) { return a->count > b->count; });
  j["children"] = nlohmann::ordered_json::array();
  for (const auto* c : kids) j["children"].push_back(node_json(*c, min_count));
  return j;
}

}  // namespace

std::string ngram_tree_json(const NgramNode& root, std::size_t min_count) {
  return node_json(root, min_count).dump(2) + "\n";
}

}  // namespace clarank
