#include <fstream>

#include "informality/csv.hpp"
#include "informality/detail/text.hpp"
#include "informality/ingest.hpp"

namespace informality {

RecodeMap::RecodeMap(std::string name, const std::vector<std::pair<std::string, std::string>>& entries,
                     RecodeDefault fallback, std::optional<std::string> fallback_label)
    : name_(std::move(name)), fallback_(fallback), fallback_label_(std::move(fallback_label)) {
  if (name_.empty()) throw RecodeError("recode map needs a name");
  if (fallback_ == RecodeDefault::FixedLabel && !fallback_label_)
    throw RecodeError("recode map '" + name_ + "': fixed-label default needs a label");
  if (fallback_ != RecodeDefault::FixedLabel) fallback_label_.reset();
  for (const auto& [code, label] : entries) {
    if (!entries_.emplace(code, label).second)
      throw RecodeError("recode map '" + name_ + "': duplicate source code '" + code + "'");
  }
}

std::optional<std::string> RecodeMap::apply(std::string_view code) const {
  if (auto it = entries_.find(code); it != entries_.end()) return it->second;
  switch (fallback_) {
    case RecodeDefault::Reject:
      return std::nullopt;
    case RecodeDefault::PassThrough:
      return std::string(code);
    case RecodeDefault::FixedLabel:
      return fallback_label_;
  }
  return std::nullopt;
}

std::optional<std::string> RecodeMap::source_for(std::string_view label) const {
  for (const auto& [code, target] : entries_)
    if (target == label) return code;
  if (fallback_ == RecodeDefault::PassThrough && !entries_.contains(label)) return std::string(label);
  return std::nullopt;
}

RecodeMap RecodeMap::parse(std::istream& in, std::string default_name) {
  std::string name = std::move(default_name);
  RecodeDefault fallback = RecodeDefault::Reject;
  std::optional<std::string> label;
  std::vector<std::pair<std::string, std::string>> entries;
  bool have_header = false;

  CsvReader reader(in);
  CsvRecord rec;
  while (reader.next(rec)) {
    const std::string where = "recode map '" + name + "' line " + std::to_string(rec.line) + ": ";
    const auto first = detail::trim(rec.fields[0]);
    if (!have_header && first.starts_with("#!")) {
      // Directives live on one line; rejoin in case the value held a comma.
      std::string directive = csv_join(rec.fields).substr(2);
      const auto eq = directive.find('=');
      if (eq == std::string::npos) throw RecodeError(where + "directive needs '='");
      const std::string key(detail::trim(directive.substr(0, eq)));
      const std::string value(detail::trim(directive.substr(eq + 1)));
      if (key == "name") {
        if (value.empty()) throw RecodeError(where + "empty name");
        name = value;
      } else if (key == "default") {
        if (value == "reject") {
          fallback = RecodeDefault::Reject;
        } else if (value == "pass-through") {
          fallback = RecodeDefault::PassThrough;
        } else if (value.starts_with("label:")) {
          fallback = RecodeDefault::FixedLabel;
          label = std::string(detail::trim(value.substr(6)));
        } else {
          throw RecodeError(where + "default must be reject, pass-through or label:<text>");
        }
      } else {
        throw RecodeError(where + "unknown directive '" + key + "'");
      }
      continue;
    }
    if (first.starts_with("#")) continue;
    if (rec.fields.size() == 1 && first.empty()) continue;
    if (rec.fields.size() != 2) throw RecodeError(where + "expected 2 columns");
    const std::string code(detail::trim(rec.fields[0]));
    const std::string target(detail::trim(rec.fields[1]));
    if (!have_header) {
      if (code != "source_code" || target != "target_label")
        throw RecodeError(where + "header must be source_code,target_label");
      have_header = true;
      continue;
    }
    entries.emplace_back(code, target);
  }
  if (!have_header) throw RecodeError("recode map '" + name + "': missing header row");
  return RecodeMap(std::move(name), entries, fallback, std::move(label));
}

RecodeMap RecodeMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RecodeError("cannot open recode map " + path.string());
  return parse(in, path.stem().string());
}

RecodeSet make_recode_set(std::vector<RecodeMap> maps) {
  RecodeSet set;
  for (auto& m : maps) {
    const std::string name = m.name();
    if (!set.emplace(name, std::move(m)).second) throw RecodeError("recode map '" + name + "' given twice");
  }
  return set;
}

}  // namespace informality
