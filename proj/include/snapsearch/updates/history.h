#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "snapsearch/common/date.h"
#include "snapsearch/common/random.h"
#include "snapsearch/corpus/document.h"
#include "snapsearch/updates/change.h"

namespace snapsearch {

// Shape of a synthetic document history: documents appear at a steady daily
// rate between two dates, and some events modify or delete a live document.
struct HistoryShape {
  Date first_date = Date::from_ymd(2000, 1, 1);
  Date last_date = Date::from_ymd(2000, 12, 31);
  double events_per_day = 5.0;
  double modify_fraction = 0.1;
  double delete_fraction = 0.05;
  // Share of additions that revive a previously deleted id.
  double readd_fraction = 0.05;
  std::size_t vocabulary = 2000;
  double zipf_s = 1.0;
  std::size_t min_length = 0;
  std::size_t max_length = 40;
};

// Changes in date order (seq left at 0). Every Modify and Delete targets a
// document that is live at that point, so the list applies cleanly to an
// empty corpus. Ids are sparse. Throws ParameterError for an invalid shape.
std::vector<Change> generate_history(const HistoryShape& shape, Rng& rng);

// Corpus after applying `changes` in order to `initial`, sorted by id.
// Throws LogIntegrityError on an inconsistent change.
std::vector<Document> corpus_after(std::span<const Change> changes, std::span<const Document> initial = {});

// Numbers changes 1, 2, ... in place (the numbering an empty log would assign).
void assign_sequence(std::vector<Change>& changes, std::uint64_t first_seq = 1);

}  // namespace snapsearch
