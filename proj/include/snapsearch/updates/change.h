#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "snapsearch/common/date.h"
#include "snapsearch/corpus/document.h"

namespace snapsearch {

enum class ChangeKind { Add, Modify, Delete };

std::string_view to_string(ChangeKind kind);
// Accepts "add", "modify", "delete". Throws ParseError.
ChangeKind parse_change_kind(std::string_view text);

struct Change {
  std::uint64_t seq = 0;  // assigned by the log; 0 before append
  ChangeKind kind = ChangeKind::Add;
  Date date;
  DocId doc_id = 0;
  std::optional<Document> payload;  // present for Add and Modify only

  bool operator==(const Change&) const = default;
};

Change make_add(const Document& doc);
Change make_modify(const Document& doc);
Change make_delete(DocId id, Date date);

// Throws ParameterError unless the payload matches the kind, carries the same
// doc_id and is dated on the change date, and the date is in corpus range.
void validate_change_shape(const Change& change);

// Canonical JSON: keys in the order seq, kind, date, doc_id, payload; the
// payload (omitted for Delete) lists doc_id, uri, modified_date, text.
std::string to_canonical_json(const Change& change);
// Inverse of to_canonical_json. Throws ParseError.
Change parse_change_json(std::string_view text);

}  // namespace snapsearch
