#include "snapsearch/corpus/corpus_io.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "snapsearch/common/error.h"

namespace snapsearch {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail_parse(std::uint64_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what, line);
}

}  // namespace

Document parse_corpus_line(std::string_view line, std::uint64_t line_number) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    fail_parse(line_number, std::string("malformed JSON: ") + e.what());
  }
  if (!record.is_object()) fail_parse(line_number, "record is not a JSON object");
  if (record.size() != 4) fail_parse(line_number, "record must have exactly doc_id, uri, modified_date, text");

  const auto field = [&](const char* name) -> const json& {
    auto it = record.find(name);
    if (it == record.end()) fail_parse(line_number, std::string("missing field '") + name + "'");
    return *it;
  };
  const json& id = field("doc_id");
  const json& uri = field("uri");
  const json& date = field("modified_date");
  const json& text = field("text");
  if (!id.is_number_unsigned()) fail_parse(line_number, "doc_id must be a non-negative integer");
  if (!uri.is_string()) fail_parse(line_number, "uri must be a string");
  if (!date.is_string()) fail_parse(line_number, "modified_date must be a string");
  if (!text.is_string()) fail_parse(line_number, "text must be a string");

  Document doc;
  doc.doc_id = id.get<std::uint64_t>();
  doc.uri = uri.get<std::string>();
  doc.text = text.get<std::string>();
  try {
    doc.modified_date = Date::parse(date.get_ref<const std::string&>());
  } catch (const ParseError& e) {
    fail_parse(line_number, e.what());
  }
  if (!doc.modified_date.in_corpus_range()) {
    throw IntegrityError("line " + std::to_string(line_number) + ": modified_date " +
                             doc.modified_date.to_string() + " outside 1990-01-01..2100-12-31",
                         line_number);
  }
  return doc;
}

std::string format_corpus_line(const Document& doc) {
  ordered_json record;
  record["doc_id"] = doc.doc_id;
  record["uri"] = doc.uri;
  record["modified_date"] = doc.modified_date.to_string();
  record["text"] = doc.text;
  return record.dump();
}

std::vector<Document> read_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<DocId> seen;
  std::string line;
  std::uint64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    Document doc = parse_corpus_line(line, line_number);
    if (!seen.insert(doc.doc_id).second) {
      throw IntegrityError("line " + std::to_string(line_number) + ": duplicate doc_id " +
                               std::to_string(doc.doc_id),
                           line_number);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  return read_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const Document> docs) {
  for (const Document& doc : docs) out << format_corpus_line(doc) << '\n';
}

void save_corpus(const std::filesystem::path& path, std::span<const Document> docs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  write_corpus(out, docs);
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

std::uint64_t corpus_text_bytes(std::span<const Document> docs) {
  std::uint64_t total = 0;
  for (const Document& doc : docs) total += doc.text.size();
  return total;
}

}  // namespace snapsearch
