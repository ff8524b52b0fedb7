#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "snapsearch/index/index.h"

namespace snapsearch {

// Index file layout, every integer vbyte-coded:
//
//   "CHS1"
//   N, total_terms, term_count
//   doc table, N entries by increasing id: id gap (first id absolute), length, date as days since 1990-01-01
//   dictionary, term_count entries in byte order: term length, term bytes,
//     offset of the term's postings block from the start of the postings area
//   postings area: the blocks back to back, each as PostingsList::bytes()
//
// Two builds of the same corpus produce identical bytes.
std::vector<std::uint8_t> serialize_index(const Index& index);

// Throws CodecError (position = byte offset) on malformed input and
// IntegrityError if the decoded index breaks an invariant.
Index deserialize_index(std::span<const std::uint8_t> bytes);

void save_index(const std::filesystem::path& path, const Index& index);
Index load_index(const std::filesystem::path& path);

// Persisted index size over corpus text size. Throws UndefinedRatioError for
// an empty index or a corpus with no text.
double index_ratio(const Index& index, std::uint64_t corpus_text_bytes);

}  // namespace snapsearch
