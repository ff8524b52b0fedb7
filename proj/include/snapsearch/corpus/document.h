#pragma once

#include <cstdint>
#include <string>

#include "snapsearch/common/date.h"

namespace snapsearch {

using DocId = std::uint64_t;

// A dated page. Its identity is `doc_id`; `uri` is only a label.
struct Document {
  DocId doc_id = 0;
  std::string uri;
  Date modified_date;
  std::string text;

  bool operator==(const Document&) const = default;
};

}  // namespace snapsearch
