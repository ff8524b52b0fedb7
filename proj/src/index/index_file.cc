#include "snapsearch/index/index_file.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "snapsearch/common/error.h"
#include "snapsearch/index/vbyte.h"

namespace snapsearch {
namespace {

constexpr char kMagic[4] = {'C', 'H', 'S', '1'};

// Wraps VByteReader so every error carries an absolute file offset.
class FileReader {
 public:
  explicit FileReader(std::span<const std::uint8_t> bytes) : reader_(bytes) {}

  std::uint64_t next(const char* what) {
    try {
      return reader_.next();
    } catch (const CodecError&) {
      fail(std::string("truncated or malformed ") + what);
    }
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    try {
      return reader_.take(n);
    } catch (const CodecError&) {
      fail(std::string("truncated ") + what);
    }
  }

  std::size_t position() const { return reader_.position() + 4; }
  bool done() const { return reader_.done(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw CodecError("index file: " + what + " at byte " + std::to_string(position()), position());
  }

 private:
  VByteReader reader_;
};

}  // namespace

std::vector<std::uint8_t> serialize_index(const Index& index) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  const CollectionStats& stats = index.stats();
  encode_vbyte(stats.N, out);
  encode_vbyte(stats.total_terms, out);
  encode_vbyte(index.dictionary().size(), out);

  DocId prev = 0;
  bool first = true;
  for (const DocEntry& e : index.doc_table()) {
    encode_vbyte(first ? e.doc_id : e.doc_id - prev, out);
    encode_vbyte(e.info.length, out);
    encode_vbyte(static_cast<std::uint64_t>(e.info.modified_date.days()), out);
    prev = e.doc_id;
    first = false;
  }

  std::uint64_t offset = 0;
  for (const auto& [term, list] : index.dictionary()) {
    encode_vbyte(term.size(), out);
    out.insert(out.end(), term.begin(), term.end());
    encode_vbyte(offset, out);
    offset += list.bytes().size();
  }
  for (const auto& [term, list] : index.dictionary()) {
    out.insert(out.end(), list.bytes().begin(), list.bytes().end());
  }
  return out;
}

Index deserialize_index(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CodecError("index file: bad magic (expected CHS1)", 0);
  }
  FileReader in(bytes.subspan(4));
  const std::uint64_t n = in.next("document count");
  const std::uint64_t total_terms = in.next("term total");
  const std::uint64_t term_count = in.next("dictionary size");
  // Every entry takes at least three bytes; reject absurd counts before allocating.
  if (n > bytes.size() || term_count > bytes.size()) in.fail("count larger than the file");

  std::vector<DocEntry> docs;
  docs.reserve(n);
  DocId prev = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t gap = in.next("doc id");
    if (i > 0 && gap == 0) in.fail("zero doc id gap");
    if (i > 0 && gap > UINT64_MAX - prev) in.fail("doc id overflow");
    const DocId id = i == 0 ? gap : prev + gap;
    const std::uint64_t length = in.next("doc length");
    const std::uint64_t days = in.next("doc date");
    if (length > UINT32_MAX) in.fail("doc length out of range");
    if (days > static_cast<std::uint64_t>(max_corpus_date().days())) in.fail("doc date out of range");
    docs.push_back({id, {static_cast<std::uint32_t>(length), Date::from_days(static_cast<std::int32_t>(days))}});
    prev = id;
  }

  struct Entry {
    std::string term;
    std::uint64_t offset;
  };
  std::vector<Entry> entries;
  entries.reserve(term_count);
  for (std::uint64_t i = 0; i < term_count; ++i) {
    const std::uint64_t len = in.next("term length");
    if (len > bytes.size()) in.fail("term length larger than the file");
    auto raw = in.take(len, "term");
    std::string term(raw.begin(), raw.end());
    if (i > 0 && term <= entries.back().term) in.fail("dictionary not in strictly increasing order");
    const std::uint64_t offset = in.next("postings offset");
    entries.push_back({std::move(term), offset});
  }

  const std::size_t area_start = in.position();
  const std::size_t area_size = bytes.size() - area_start;
  Index::Dictionary dictionary;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::uint64_t begin = entries[i].offset;
    const std::uint64_t end = i + 1 < entries.size() ? entries[i + 1].offset : area_size;
    if ((i == 0 && begin != 0) || begin >= end || end > area_size) {
      throw CodecError("index file: bad postings offset for term '" + entries[i].term + "'", area_start + begin);
    }
    try {
      dictionary.emplace(std::move(entries[i].term),
                         PostingsList::from_bytes(bytes.subspan(area_start + begin, end - begin)));
    } catch (const Error& e) {
      throw CodecError(std::string("index file: postings block at byte ") + std::to_string(area_start + begin) +
                           ": " + e.what(),
                       area_start + begin);
    }
  }
  if (entries.empty() && area_size != 0) in.fail("trailing bytes");

  Index index = assemble_index(std::move(docs), std::move(dictionary));
  if (index.stats().total_terms != total_terms) throw IntegrityError("index file: term total disagrees with doc table");
  return index;
}

void save_index(const std::filesystem::path& path, const Index& index) {
  const auto bytes = serialize_index(index);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

Index load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_index(bytes);
}

double index_ratio(const Index& index, std::uint64_t corpus_text_bytes) {
  if (index.stats().N == 0) throw UndefinedRatioError("index ratio undefined for an empty index");
  if (corpus_text_bytes == 0) throw UndefinedRatioError("index ratio undefined for a corpus without text");
  return static_cast<double>(serialize_index(index).size()) / static_cast<double>(corpus_text_bytes);
}

}  // namespace snapsearch
