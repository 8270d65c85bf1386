#include "clarank/index.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "clarank/error.hpp"
#include "util.hpp"

namespace clarank {

namespace {

bool valid_doc_id(const std::string& id) {
  return !id.empty() && std::none_of(id.begin(), id.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

using TermCounts = std::vector<std::pair<std::string, std::uint32_t>>;

TermCounts count_terms(const std::string& text, const Stoplist& stoplist) {
  std::map<std::string, std::uint32_t> counts;
  for (auto& token : analyze_text(text, stoplist)) ++counts[std::move(token)];
  return {counts.begin(), counts.end()};
}

}  // namespace

Index Index::build(std::vector<Document> documents, const Stoplist& stoplist, unsigned threads) {
  std::sort(documents.begin(), documents.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (!valid_doc_id(documents[i].doc_id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid doc_id '" + documents[i].doc_id + "' (empty or contains whitespace)");
    }
    if (i > 0 && documents[i].doc_id == documents[i - 1].doc_id) {
      throw Error(ErrorCode::kDuplicateId, "duplicate doc_id: " + documents[i].doc_id);
    }
  }

  std::vector<TermCounts> per_doc(documents.size());
  detail::parallel_for(documents.size(), threads, [&](std::size_t i) {
    per_doc[i] = count_terms(documents[i].text, stoplist);
  });

  Index index;
  index.doc_names_.reserve(documents.size());
  index.doc_lengths_.reserve(documents.size());
  std::map<std::string, std::vector<Posting>> postings;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    const auto doc = static_cast<DocNo>(i);
    std::uint64_t length = 0;
    for (const auto& [term, tf] : per_doc[i]) {
      postings[term].push_back({doc, tf});
      length += tf;
    }
    index.doc_names_.push_back(std::move(documents[i].doc_id));
    index.doc_lengths_.push_back(length);
  }

  index.terms_.reserve(postings.size());
  index.postings_.reserve(postings.size());
  for (auto& [term, list] : postings) {
    index.terms_.push_back(term);
    index.postings_.push_back(std::move(list));
  }
  index.finalize();
  return index;
}

void Index::finalize() {
  term_ids_.clear();
  for (std::size_t i = 0; i < terms_.size(); ++i) term_ids_.emplace(terms_[i], static_cast<TermId>(i));
  doc_nos_.clear();
  for (std::size_t i = 0; i < doc_names_.size(); ++i) doc_nos_.emplace(doc_names_[i], static_cast<DocNo>(i));

  collection_frequency_.assign(terms_.size(), 0);
  collection_length_ = 0;
  for (std::size_t t = 0; t < postings_.size(); ++t) {
    for (const auto& p : postings_[t]) collection_frequency_[t] += p.tf;
    collection_length_ += collection_frequency_[t];
  }

  docs_by_length_.resize(doc_names_.size());
  for (std::size_t i = 0; i < docs_by_length_.size(); ++i) docs_by_length_[i] = static_cast<DocNo>(i);
  // doc numbers already follow doc_id order, so a stable sort keeps that as the tie rule
  std::stable_sort(docs_by_length_.begin(), docs_by_length_.end(),
                   [&](DocNo a, DocNo b) { return doc_lengths_[a] < doc_lengths_[b]; });
}

std::vector<Document> Index::read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read corpus file: " + path.string());
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorCode::kParse, where + ": expected a JSON object");
    Document doc;
    for (const char* field : {"doc_id", "text"}) {
      auto it = obj.find(field);
      if (it == obj.end()) {
        throw Error(ErrorCode::kMissingField, where + ": missing field '" + field + "'");
      }
      if (!it->is_string()) {
        throw Error(ErrorCode::kParse, where + ": field '" + field + "' must be a string");
      }
    }
    doc.doc_id = obj["doc_id"].get<std::string>();
    doc.text = obj["text"].get<std::string>();
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::optional<TermId> Index::term_id(std::string_view term) const {
  auto it = term_ids_.find(std::string(term));
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<DocNo> Index::doc_no(std::string_view doc_id) const {
  auto it = doc_nos_.find(std::string(doc_id));
  if (it == doc_nos_.end()) return std::nullopt;
  return it->second;
}

TermStats Index::term_stats(std::string_view term) const {
  const auto id = term_id(term);
  if (!id) return {};
  return {postings_[*id].size(), collection_frequency_[*id]};
}

std::uint32_t Index::term_frequency(TermId id, DocNo doc) const {
  const auto& list = postings_[id];
  auto it = std::lower_bound(list.begin(), list.end(), doc,
                             [](const Posting& p, DocNo d) { return p.doc < d; });
  return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

// Layout:
//   clarank-index-v1
//   counts <docs> <terms> <collection_length>
//   docs
//   <doc_id> <length>                      one line per document, doc_id order
//   terms
//   <term> <cf> <df> <doc_no>:<tf> ...     one line per term, term order
//   end
void Index::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << kIndexFormatVersion << '\n';
  out << "counts " << doc_names_.size() << ' ' << terms_.size() << ' ' << collection_length_ << '\n';
  out << "docs\n";
  for (std::size_t i = 0; i < doc_names_.size(); ++i) {
    out << doc_names_[i] << ' ' << doc_lengths_[i] << '\n';
  }
  out << "terms\n";
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    out << terms_[t] << ' ' << collection_frequency_[t] << ' ' << postings_[t].size();
    for (const auto& p : postings_[t]) out << ' ' << p.doc << ':' << p.tf;
    out << '\n';
  }
  out << "end\n";
  detail::write_file_atomic(path, out.str());
}

namespace {

class IndexReader {
 public:
  IndexReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  std::string next(const char* what) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw Error(ErrorCode::kTruncated,
                  name_ + ": truncated index file (expected " + what + " at line " +
                      std::to_string(line_no_ + 1) + ")");
    }
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  [[noreturn]] void corrupt(const std::string& detail) const {
    throw Error(ErrorCode::kFormat,
                name_ + ":" + std::to_string(line_no_) + ": corrupt index file: " + detail);
  }

  void expect(const char* keyword) {
    if (next(keyword) != keyword) corrupt(std::string("expected '") + keyword + "'");
  }

 private:
  std::istream& in_;
  std::string name_;
  std::size_t line_no_ = 0;
};

std::uint64_t parse_u64(const std::string& s, IndexReader& reader) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    reader.corrupt("expected an unsigned integer, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    reader.corrupt("integer out of range: '" + s + "'");
  }
}

}  // namespace

Index Index::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read index file: " + path.string());
  IndexReader reader(in, path.string());

  const std::string magic = reader.next("format header");
  if (magic != kIndexFormatVersion) {
    if (magic.rfind("clarank-index-v", 0) == 0) {
      throw Error(ErrorCode::kVersionMismatch,
                  path.string() + ": index format '" + magic + "' is not supported (expected '" +
                      std::string(kIndexFormatVersion) + "')");
    }
    throw Error(ErrorCode::kFormat, path.string() + ": not a clarank index (bad magic header)");
  }

  const auto counts = detail::split_ws(reader.next("counts"));
  if (counts.size() != 4 || counts[0] != "counts") reader.corrupt("malformed counts line");
  const auto n_docs = parse_u64(counts[1], reader);
  const auto n_terms = parse_u64(counts[2], reader);
  const auto stated_length = parse_u64(counts[3], reader);

  Index index;
  reader.expect("docs");
  for (std::uint64_t i = 0; i < n_docs; ++i) {
    const auto fields = detail::split_ws(reader.next("document entry"));
    if (fields.size() != 2) reader.corrupt("malformed document entry");
    if (!index.doc_names_.empty() && !(index.doc_names_.back() < fields[0])) {
      reader.corrupt("documents not in ascending doc_id order");
    }
    index.doc_names_.push_back(fields[0]);
    index.doc_lengths_.push_back(parse_u64(fields[1], reader));
  }

  reader.expect("terms");
  std::vector<std::uint64_t> recount(n_docs, 0);
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    const auto fields = detail::split_ws(reader.next("term entry"));
    if (fields.size() < 3) reader.corrupt("malformed term entry");
    if (!index.terms_.empty() && !(index.terms_.back() < fields[0])) {
      reader.corrupt("terms not in ascending order");
    }
    const auto cf = parse_u64(fields[1], reader);
    const auto df = parse_u64(fields[2], reader);
    if (fields.size() != 3 + df) reader.corrupt("posting count does not match df for " + fields[0]);
    std::vector<Posting> list;
    list.reserve(df);
    std::uint64_t sum = 0;
    for (std::size_t k = 3; k < fields.size(); ++k) {
      const auto colon = fields[k].find(':');
      if (colon == std::string::npos) reader.corrupt("malformed posting '" + fields[k] + "'");
      const auto doc = parse_u64(fields[k].substr(0, colon), reader);
      const auto tf = parse_u64(fields[k].substr(colon + 1), reader);
      if (doc >= n_docs || tf == 0) reader.corrupt("posting out of range '" + fields[k] + "'");
      if (!list.empty() && list.back().doc >= doc) reader.corrupt("postings not ascending for " + fields[0]);
      list.push_back({static_cast<DocNo>(doc), static_cast<std::uint32_t>(tf)});
      sum += tf;
      recount[doc] += tf;
    }
    if (sum != cf) reader.corrupt("collection frequency mismatch for " + fields[0]);
    index.terms_.push_back(fields[0]);
    index.postings_.push_back(std::move(list));
  }
  reader.expect("end");

  for (std::uint64_t d = 0; d < n_docs; ++d) {
    if (recount[d] != index.doc_lengths_[d]) {
      reader.corrupt("document length mismatch for " + index.doc_names_[d]);
    }
  }
  index.finalize();
  if (index.collection_length_ != stated_length) reader.corrupt("collection length mismatch");
  return index;
}

}  // namespace clarank
