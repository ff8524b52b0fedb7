#include "snapsearch/updates/history.h"

#include <cmath>
#include <map>
#include <unordered_map>

#include "snapsearch/common/error.h"
#include "snapsearch/corpus/synthetic.h"

namespace snapsearch {
namespace {

// Ids with O(1) uniform pick and removal.
class IdPool {
 public:
  bool empty() const { return ids_.empty(); }
  void insert(DocId id) {
    where_[id] = ids_.size();
    ids_.push_back(id);
  }
  DocId pick(Rng& rng) const { return ids_[uniform_index(rng, ids_.size())]; }
  void erase(DocId id) {
    const std::size_t at = where_.at(id);
    where_[ids_.back()] = at;
    ids_[at] = ids_.back();
    ids_.pop_back();
    where_.erase(id);
  }

 private:
  std::vector<DocId> ids_;
  std::unordered_map<DocId, std::size_t> where_;
};

}  // namespace

std::vector<Change> generate_history(const HistoryShape& shape, Rng& rng) {
  if (shape.last_date < shape.first_date) throw ParameterError("history ends before it starts");
  if (!shape.first_date.in_corpus_range() || !shape.last_date.in_corpus_range()) {
    throw ParameterError("history dates outside the corpus range");
  }
  if (!(shape.events_per_day >= 0.0)) throw ParameterError("events_per_day must be non-negative");
  if (shape.modify_fraction < 0 || shape.delete_fraction < 0 || shape.modify_fraction + shape.delete_fraction > 1) {
    throw ParameterError("modify and delete fractions must be non-negative and sum to at most 1");
  }
  if (shape.min_length > shape.max_length) throw ParameterError("min_length exceeds max_length");

  const ZipfText text(shape.vocabulary, shape.zipf_s);
  const double whole = std::floor(shape.events_per_day);
  const double part = shape.events_per_day - whole;
  std::vector<Change> changes;
  IdPool live;
  IdPool dead;
  DocId next_id = uniform_index(rng, 10);

  auto make_doc = [&](DocId id, Date date) {
    const std::size_t len = shape.min_length + uniform_index(rng, shape.max_length - shape.min_length + 1);
    return Document{id, "http://example.org/d/" + std::to_string(id), date, text(rng, len)};
  };

  for (Date day = shape.first_date; day <= shape.last_date; day = day.plus_days(1)) {
    const auto events = static_cast<std::uint64_t>(whole) + (bernoulli(rng, part) ? 1 : 0);
    for (std::uint64_t e = 0; e < events; ++e) {
      const double r = uniform_unit(rng);
      if (!live.empty() && r < shape.modify_fraction) {
        changes.push_back(make_modify(make_doc(live.pick(rng), day)));
      } else if (!live.empty() && r < shape.modify_fraction + shape.delete_fraction) {
        const DocId id = live.pick(rng);
        live.erase(id);
        dead.insert(id);
        changes.push_back(make_delete(id, day));
      } else {
        DocId id;
        if (!dead.empty() && bernoulli(rng, shape.readd_fraction)) {
          id = dead.pick(rng);
          dead.erase(id);
        } else {
          id = next_id;
          next_id += 1 + uniform_index(rng, 3);
        }
        live.insert(id);
        changes.push_back(make_add(make_doc(id, day)));
      }
    }
  }
  return changes;
}

std::vector<Document> corpus_after(std::span<const Change> changes, std::span<const Document> initial) {
  std::map<DocId, Document> docs;
  for (const Document& d : initial) docs[d.doc_id] = d;
  for (const Change& c : changes) {
    const bool exists = docs.count(c.doc_id) != 0;
    if (c.kind == ChangeKind::Add ? exists : !exists) {
      throw LogIntegrityError("change on doc " + std::to_string(c.doc_id) + " does not fit the corpus", c.seq);
    }
    if (c.kind == ChangeKind::Delete) {
      docs.erase(c.doc_id);
    } else {
      docs[c.doc_id] = *c.payload;
    }
  }
  std::vector<Document> out;
  out.reserve(docs.size());
  for (auto& [id, d] : docs) out.push_back(std::move(d));
  return out;
}

void assign_sequence(std::vector<Change>& changes, std::uint64_t first_seq) {
  for (Change& c : changes) c.seq = first_seq++;
}

}  // namespace snapsearch
