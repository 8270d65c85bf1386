#include "clarank/policy.hpp"

#include <json.hpp>

#include "clarank/error.hpp"
#include "util.hpp"

namespace clarank {

PolicyTable::PolicyTable() {
  for (auto p : kAllPolarities) {
    for (auto l : kAllLengths) cells_[slot({p, l})] = kQ0Only;
  }
  set({Polarity::kNegative, AnswerLength::kMulti}, kQ0A);
  set({Polarity::kPositive, AnswerLength::kSingle}, kQ0QA);
  set({Polarity::kPositive, AnswerLength::kMulti}, kQ0QA);
  set({Polarity::kOther, AnswerLength::kMulti}, kQ0QA);
}

const PolicyTable& PolicyTable::heuristic() {
  static const PolicyTable table;
  return table;
}

PolicyTable PolicyTable::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("policy file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, "policy file must hold a JSON object");

  PolicyTable table;
  for (const auto& [key, value] : doc.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kConfig, "policy key '" + key + "' is not of the form polarity,length");
    }
    AnswerType type;
    try {
      type = {parse_polarity(key.substr(0, comma)), parse_answer_length(key.substr(comma + 1))};
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, "policy key '" + key + "': " + e.what());
    }
    const auto spec = value.is_string() ? parse_mode(value.get<std::string>()) : std::nullopt;
    if (!spec) {
      throw Error(ErrorCode::kConfig,
                  "policy value for '" + key + "' must be one of q0, q0q, q0a, q0qa");
    }
    table.set(type, *spec);
  }
  return table;
}

PolicyTable PolicyTable::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::kConfig, "cannot read policy file: " + path.string());
  }
  return parse(text);
}

}  // namespace clarank
