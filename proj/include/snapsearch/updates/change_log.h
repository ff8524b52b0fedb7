#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "snapsearch/updates/change.h"

namespace snapsearch {

enum class Durability {
  kNone,   // in-process buffer only
  kWrite,  // write(2) before append returns
  kSync,   // write(2) then fsync(2)
};

struct LogOptions {
  Durability durability = Durability::kSync;
  // Appends that would grow the file past this size fail with AppendError.
  std::optional<std::uint64_t> max_file_bytes;
};

// Append-only, single-writer change log. On disk:
//   "CHL1", then records [length: u32 LE][payload: canonical JSON][crc32c of payload: u32 LE]
// Records are also kept in memory, framed exactly as on disk, so replay never
// re-reads the file.
class ChangeLog {
 public:
  // In-memory log.
  ChangeLog() = default;
  ChangeLog(ChangeLog&&) noexcept;
  ChangeLog& operator=(ChangeLog&&) noexcept;
  ~ChangeLog();

  // Opens or creates a log file. An incomplete final record (torn write) is
  // cut off; a final record failing its checksum is treated the same way.
  // Earlier records that fail their checksum are kept and reported by replay.
  // Throws IoError, CodecError on a bad header, LogIntegrityError if intact
  // records are out of sequence or out of date order.
  static ChangeLog open(const std::filesystem::path& path, LogOptions options = {});

  // Assigns seq = head + 1. Throws OrderingError if the date precedes the last
  // record, ParameterError for a malformed change, AppendError when storage
  // fails (the log is left unchanged).
  std::uint64_t append(Change change);

  // Records from..to inclusive. Throws RangeError outside [1, head] or when
  // from > to, ChecksumError naming the first corrupt seq.
  std::vector<Change> replay(std::uint64_t from_seq, std::uint64_t to_seq) const;
  std::vector<Change> replay_all() const;

  std::uint64_t head_seq() const { return offsets_.size(); }
  std::optional<Date> last_date() const { return last_date_; }

  // Size of records from..to as framed on disk (length, payload, checksum).
  std::uint64_t framed_bytes(std::uint64_t from_seq, std::uint64_t to_seq) const;
  std::uint64_t framed_bytes() const { return records_.size(); }

  // Bytes dropped from a torn tail when the file was opened.
  std::uint64_t truncated_bytes() const { return truncated_bytes_; }

 private:
  void check_range(std::uint64_t from_seq, std::uint64_t to_seq) const;

  std::vector<std::uint8_t> records_;  // framed records, header excluded
  std::vector<std::uint64_t> offsets_; // start of record seq (index seq - 1)
  std::optional<Date> last_date_;
  std::uint64_t truncated_bytes_ = 0;
  LogOptions options_{Durability::kNone, std::nullopt};
  int fd_ = -1;
};

}  // namespace snapsearch
