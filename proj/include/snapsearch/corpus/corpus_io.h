#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snapsearch/corpus/document.h"

namespace snapsearch {

// Corpus files hold one JSON object per line with exactly the fields
// {"doc_id", "uri", "modified_date", "text"}; UTF-8, LF line endings.
//
// Errors carry the 1-based line number as their position:
//   ParseError      malformed JSON, wrong/missing/extra fields, bad date syntax
//   IntegrityError  duplicate doc_id, date outside 1990-01-01..2100-12-31
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::vector<Document> read_corpus(std::istream& in);

// Parses a single record; `line_number` is only used in diagnostics.
Document parse_corpus_line(std::string_view line, std::uint64_t line_number);
std::string format_corpus_line(const Document& doc);

void write_corpus(std::ostream& out, std::span<const Document> docs);
void save_corpus(const std::filesystem::path& path, std::span<const Document> docs);

// Sum of text sizes in bytes.
std::uint64_t corpus_text_bytes(std::span<const Document> docs);

}  // namespace snapsearch
