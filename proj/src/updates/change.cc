#include "snapsearch/updates/change.h"

#include <json.hpp>

#include "snapsearch/common/error.h"

namespace snapsearch {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::Add:
      return "add";
    case ChangeKind::Modify:
      return "modify";
    case ChangeKind::Delete:
      return "delete";
  }
  return "?";
}

ChangeKind parse_change_kind(std::string_view text) {
  if (text == "add") return ChangeKind::Add;
  if (text == "modify") return ChangeKind::Modify;
  if (text == "delete") return ChangeKind::Delete;
  throw ParseError("unknown change kind '" + std::string(text) + "'");
}

Change make_add(const Document& doc) { return {0, ChangeKind::Add, doc.modified_date, doc.doc_id, doc}; }
Change make_modify(const Document& doc) { return {0, ChangeKind::Modify, doc.modified_date, doc.doc_id, doc}; }
Change make_delete(DocId id, Date date) { return {0, ChangeKind::Delete, date, id, std::nullopt}; }

void validate_change_shape(const Change& change) {
  if (!change.date.in_corpus_range()) throw ParameterError("change date " + change.date.to_string() + " out of range");
  if (change.kind == ChangeKind::Delete) {
    if (change.payload) throw ParameterError("delete change must not carry a document");
    return;
  }
  if (!change.payload) throw ParameterError(std::string(to_string(change.kind)) + " change needs a document");
  if (change.payload->doc_id != change.doc_id) throw ParameterError("change doc_id differs from its document");
  if (change.payload->modified_date != change.date) {
    throw ParameterError("document modified_date differs from the change date");
  }
}

std::string to_canonical_json(const Change& change) {
  ordered_json j;
  j["seq"] = change.seq;
  j["kind"] = to_string(change.kind);
  j["date"] = change.date.to_string();
  j["doc_id"] = change.doc_id;
  if (change.payload) {
    ordered_json p;
    p["doc_id"] = change.payload->doc_id;
    p["uri"] = change.payload->uri;
    p["modified_date"] = change.payload->modified_date.to_string();
    p["text"] = change.payload->text;
    j["payload"] = std::move(p);
  }
  return j.dump();
}

Change parse_change_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Change c;
    c.seq = j.at("seq").get<std::uint64_t>();
    c.kind = parse_change_kind(j.at("kind").get<std::string>());
    c.date = Date::parse(j.at("date").get<std::string>());
    c.doc_id = j.at("doc_id").get<std::uint64_t>();
    if (auto it = j.find("payload"); it != j.end()) {
      Document d;
      d.doc_id = it->at("doc_id").get<std::uint64_t>();
      d.uri = it->at("uri").get<std::string>();
      d.modified_date = Date::parse(it->at("modified_date").get<std::string>());
      d.text = it->at("text").get<std::string>();
      c.payload = std::move(d);
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed change record: ") + e.what());
  }
}

}  // namespace snapsearch
