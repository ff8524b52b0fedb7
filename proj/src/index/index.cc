#include "snapsearch/index/index.h"

#include <algorithm>
#include <unordered_set>

#include "snapsearch/common/error.h"
#include "snapsearch/corpus/tokenizer.h"
#include "snapsearch/index/vbyte.h"

namespace snapsearch {

PostingsList PostingsList::from_groups(std::span<const ImpactGroup> groups) {
  PostingsList list;
  encode_vbyte(groups.size(), list.bytes_);
  std::unordered_set<DocId> seen;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const ImpactGroup& group = groups[g];
    if (group.tf == 0) throw IntegrityError("postings group with tf 0");
    if (g > 0 && group.tf >= groups[g - 1].tf) throw IntegrityError("postings groups not in decreasing tf order");
    if (group.doc_ids.empty()) throw IntegrityError("empty postings group");
    encode_vbyte(group.tf, list.bytes_);
    encode_vbyte(group.doc_ids.size(), list.bytes_);
    for (std::size_t i = 0; i < group.doc_ids.size(); ++i) {
      const DocId id = group.doc_ids[i];
      if (i > 0 && id <= group.doc_ids[i - 1]) throw IntegrityError("postings group ids not increasing");
      if (!seen.insert(id).second) throw IntegrityError("doc " + std::to_string(id) + " in two postings groups");
      encode_vbyte(i == 0 ? id : id - group.doc_ids[i - 1], list.bytes_);
    }
    list.df_ += group.doc_ids.size();
  }
  return list;
}

PostingsList PostingsList::from_postings(std::vector<Posting> postings) {
  std::sort(postings.begin(), postings.end(), [](const Posting& a, const Posting& b) {
    return a.tf != b.tf ? a.tf > b.tf : a.doc_id < b.doc_id;
  });
  std::vector<ImpactGroup> groups;
  for (const Posting& p : postings) {
    if (groups.empty() || groups.back().tf != p.tf) groups.push_back({p.tf, {}});
    groups.back().doc_ids.push_back(p.doc_id);
  }
  return from_groups(groups);
}

PostingsList PostingsList::from_bytes(std::span<const std::uint8_t> bytes) {
  VByteReader reader(bytes);
  const std::uint64_t group_count = reader.next();
  if (group_count > bytes.size()) throw CodecError("postings group count exceeds block size");
  std::vector<ImpactGroup> groups(group_count);
  for (auto& group : groups) {
    const std::uint64_t tf = reader.next();
    if (tf > UINT32_MAX) throw CodecError("postings tf out of range");
    group.tf = static_cast<std::uint32_t>(tf);
    const std::uint64_t count = reader.next();
    if (count > bytes.size()) throw CodecError("postings count exceeds block size");
    group.doc_ids.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint64_t v = reader.next();
      if (i == 0) {
        group.doc_ids.push_back(v);
      } else {
        if (v == 0) throw IntegrityError("zero doc-id gap in postings");
        if (v > UINT64_MAX - group.doc_ids.back()) throw CodecError("doc id overflows 64 bits");
        group.doc_ids.push_back(group.doc_ids.back() + v);
      }
    }
  }
  if (!reader.done()) throw CodecError("trailing bytes after postings block");
  PostingsList list = from_groups(groups);
  // Re-encoding must reproduce the input exactly; rejects overlong vbytes.
  if (!std::equal(list.bytes_.begin(), list.bytes_.end(), bytes.begin(), bytes.end())) {
    throw CodecError("postings block is not in canonical form");
  }
  return list;
}

std::vector<ImpactGroup> PostingsList::groups() const {
  std::vector<ImpactGroup> out;
  for_each([&](std::uint32_t tf, DocId id) {
    if (out.empty() || out.back().tf != tf) out.push_back({tf, {}});
    out.back().doc_ids.push_back(id);
  });
  return out;
}

std::vector<Posting> PostingsList::postings() const {
  std::vector<Posting> out;
  out.reserve(df_);
  for_each([&](std::uint32_t tf, DocId id) { out.push_back({id, tf}); });
  return out;
}

std::uint64_t CollectionStats::df_of(std::string_view term) const {
  auto it = df.find(term);
  return it == df.end() ? 0 : it->second;
}

CollectionStats& CollectionStats::operator+=(const CollectionStats& other) {
  N += other.N;
  total_terms += other.total_terms;
  for (const auto& [term, n] : other.df) df[term] += n;
  return *this;
}

TermCounts count_terms(std::string_view text) {
  TermCounts counts;
  for (auto& term : tokenize(text)) ++counts[std::move(term)];
  return counts;
}

const PostingsList* Index::find(std::string_view term) const {
  auto it = dictionary_.find(term);
  return it == dictionary_.end() ? nullptr : &it->second;
}

const DocInfo* Index::doc(DocId id) const {
  auto it = position_.find(id);
  return it == position_.end() ? nullptr : &doc_table_[it->second].info;
}

Index assemble_index(std::vector<DocEntry> docs, Index::Dictionary dictionary) {
  Index index;
  index.position_.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i > 0 && docs[i].doc_id <= docs[i - 1].doc_id) {
      throw IntegrityError("doc table not strictly increasing at entry " + std::to_string(i), i);
    }
    if (!docs[i].info.modified_date.in_corpus_range()) {
      throw IntegrityError("doc " + std::to_string(docs[i].doc_id) + " has a date outside the corpus range");
    }
    index.position_.emplace(docs[i].doc_id, static_cast<std::uint32_t>(i));
    index.stats_.total_terms += docs[i].info.length;
  }
  index.stats_.N = docs.size();

  std::uint64_t posted_terms = 0;
  std::vector<std::uint64_t> per_doc(docs.size(), 0);
  for (const auto& [term, list] : dictionary) {
    if (!is_normalized_term(term)) throw IntegrityError("dictionary holds a non-normalized term '" + term + "'");
    if (list.df() == 0) throw IntegrityError("term '" + term + "' has no postings");
    list.for_each([&](std::uint32_t tf, DocId id) {
      auto it = index.position_.find(id);
      if (it == index.position_.end()) {
        throw IntegrityError("posting for term '" + term + "' names unknown doc " + std::to_string(id));
      }
      per_doc[it->second] += tf;
      posted_terms += tf;
    });
    index.stats_.df.emplace(term, list.df());
  }
  if (posted_terms != index.stats_.total_terms) throw IntegrityError("postings do not account for every term");
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (per_doc[i] != docs[i].info.length) {
      throw IntegrityError("length of doc " + std::to_string(docs[i].doc_id) + " disagrees with its postings");
    }
  }
  index.doc_table_ = std::move(docs);
  index.dictionary_ = std::move(dictionary);
  return index;
}

void IndexBuilder::add(const Document& doc) { add(doc.doc_id, doc.modified_date, count_terms(doc.text)); }

void IndexBuilder::add(DocId id, Date modified_date, const TermCounts& counts) {
  if (!modified_date.in_corpus_range()) {
    throw IntegrityError("doc " + std::to_string(id) + " date " + modified_date.to_string() + " out of range");
  }
  std::uint64_t length = 0;
  for (const auto& [term, tf] : counts) length += tf;
  if (length > UINT32_MAX) throw IntegrityError("doc " + std::to_string(id) + " is too long");
  if (!docs_.emplace(id, DocInfo{static_cast<std::uint32_t>(length), modified_date}).second) {
    throw IntegrityError("duplicate doc_id " + std::to_string(id));
  }
  for (const auto& [term, tf] : counts) {
    if (tf == 0) continue;
    auto it = postings_.find(term);
    if (it == postings_.end()) it = postings_.emplace(term, std::vector<Posting>{}).first;
    it->second.push_back({id, tf});
  }
}

Index IndexBuilder::build() && {
  Index index;
  index.doc_table_.reserve(docs_.size());
  for (const auto& [id, info] : docs_) {
    index.position_.emplace(id, static_cast<std::uint32_t>(index.doc_table_.size()));
    index.doc_table_.push_back({id, info});
    index.stats_.total_terms += info.length;
  }
  index.stats_.N = docs_.size();
  for (auto& [term, postings] : postings_) {
    PostingsList list = PostingsList::from_postings(std::move(postings));
    index.stats_.df.emplace(term, list.df());
    index.dictionary_.emplace(term, std::move(list));
  }
  docs_.clear();
  postings_.clear();
  return index;
}

Index build_index(std::span<const Document> docs) {
  IndexBuilder builder;
  for (const Document& doc : docs) builder.add(doc);
  return std::move(builder).build();
}

}  // namespace snapsearch
