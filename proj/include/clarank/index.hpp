#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clarank/textproc.hpp"

namespace clarank {

struct Document {
  std::string doc_id;
  std::string text;
};

using DocNo = std::uint32_t;
using TermId = std::uint32_t;

struct Posting {
  DocNo doc;
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct TermStats {
  std::uint64_t document_frequency = 0;
  std::uint64_t collection_frequency = 0;

  friend bool operator==(const TermStats&, const TermStats&) = default;
};

inline constexpr std::string_view kIndexFormatVersion = "clarank-index-v1";

/// Immutable inverted index with the collection statistics needed for
/// Dirichlet-smoothed query likelihood.
///
/// Documents are numbered by ascending doc_id and terms by ascending term
/// string, so two indexes over the same document set are identical no matter
/// the order documents arrived in. Document lengths count tokens left after
/// stopword removal.
class Index {
 public:
  Index() = default;

  /// Throws Error(kDuplicateId) on a repeated doc_id and
  /// Error(kInvalidArgument) on an empty doc_id or one containing whitespace.
  static Index build(std::vector<Document> documents, const Stoplist& stoplist,
                     unsigned threads = 1);

  /// Reads a JSON-lines corpus (`{"doc_id": ..., "text": ...}` per line).
  static std::vector<Document> read_corpus(const std::filesystem::path& path);

  void save(const std::filesystem::path& path) const;
  static Index load(const std::filesystem::path& path);

  std::size_t doc_count() const { return doc_names_.size(); }
  std::size_t term_count() const { return terms_.size(); }
  std::uint64_t collection_length() const { return collection_length_; }

  std::optional<TermId> term_id(std::string_view term) const;
  std::optional<DocNo> doc_no(std::string_view doc_id) const;

  const std::string& term(TermId id) const { return terms_[id]; }
  const std::string& doc_name(DocNo doc) const { return doc_names_[doc]; }
  std::uint64_t doc_length(DocNo doc) const { return doc_lengths_[doc]; }
  std::uint64_t collection_frequency(TermId id) const { return collection_frequency_[id]; }
  const std::vector<Posting>& postings(TermId id) const { return postings_[id]; }

  TermStats term_stats(std::string_view term) const;

  /// tf of a term in a document, by binary search over the postings.
  std::uint32_t term_frequency(TermId id, DocNo doc) const;

  /// Document numbers ordered by (length, doc_id) ascending.
  const std::vector<DocNo>& docs_by_length() const { return docs_by_length_; }

  const std::vector<std::string>& vocabulary() const { return terms_; }

 private:
  void finalize();

  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> term_ids_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::uint64_t> collection_frequency_;

  std::vector<std::string> doc_names_;
  std::unordered_map<std::string, DocNo> doc_nos_;
  std::vector<std::uint64_t> doc_lengths_;
  std::uint64_t collection_length_ = 0;

  std::vector<DocNo> docs_by_length_;
};

}  // namespace clarank
