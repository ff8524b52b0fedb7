#include "snapsearch/corpus/synthetic.h"

namespace snapsearch {

std::vector<std::string> synthetic_vocabulary(std::size_t size) {
  std::vector<std::string> words;
  words.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::string w;
    std::size_t n = i + 1;
    while (n > 0) {
      --n;
      w.push_back(static_cast<char>('a' + n % 26));
      n /= 26;
    }
    if (i % 7 == 3) w += "\xC3\xA9";  // é
    if (i % 11 == 5) w += std::to_string(i % 10);
    words.push_back(std::move(w));
  }
  return words;
}

ZipfText::ZipfText(std::size_t vocabulary, double zipf_s)
    : vocabulary_(synthetic_vocabulary(vocabulary)), zipf_(vocabulary, zipf_s) {}

std::string ZipfText::operator()(Rng& rng, std::size_t length) const {
  std::string text;
  for (std::size_t i = 0; i < length; ++i) {
    if (i > 0) text += ' ';
    text += vocabulary_[zipf_(rng)];
  }
  return text;
}

}  // namespace snapsearch
