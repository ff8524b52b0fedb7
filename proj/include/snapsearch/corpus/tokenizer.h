#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace snapsearch {

// Splits UTF-8 text on maximal runs of non-alphanumeric code points and
// lowercases what remains. No stopwords, stemming, or pruning. Bytes that are
// not valid UTF-8 act as separators.
std::vector<std::string> tokenize(std::string_view text);

// True if `term` could have come out of tokenize(): non-empty, alphanumeric,
// already lowercase.
bool is_normalized_term(std::string_view term);

}  // namespace snapsearch
