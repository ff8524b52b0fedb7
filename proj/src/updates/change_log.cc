#include "snapsearch/updates/change_log.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <utility>

#include "snapsearch/common/error.h"
#include "snapsearch/updates/crc32c.h"

namespace snapsearch {
namespace {

constexpr std::uint8_t kMagic[4] = {'C', 'H', 'L', '1'};
constexpr std::uint64_t kHeaderBytes = 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::string errno_text() { return std::strerror(errno); }

bool write_all(int fd, const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::write(fd, data, size);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

ChangeLog::ChangeLog(ChangeLog&& other) noexcept
    : records_(std::move(other.records_)),
      offsets_(std::move(other.offsets_)),
      last_date_(other.last_date_),
      truncated_bytes_(other.truncated_bytes_),
      options_(other.options_),
      fd_(std::exchange(other.fd_, -1)) {}

ChangeLog& ChangeLog::operator=(ChangeLog&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    records_ = std::move(other.records_);
    offsets_ = std::move(other.offsets_);
    last_date_ = other.last_date_;
    truncated_bytes_ = other.truncated_bytes_;
    options_ = other.options_;
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

ChangeLog::~ChangeLog() {
  if (fd_ >= 0) ::close(fd_);
}

ChangeLog ChangeLog::open(const std::filesystem::path& path, LogOptions options) {
  ChangeLog log;
  log.options_ = options;
  log.fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (log.fd_ < 0) throw IoError("cannot open log " + path.string() + ": " + errno_text());

  std::vector<std::uint8_t> file;
  std::uint8_t buf[1 << 16];
  for (;;) {
    const ssize_t n = ::read(log.fd_, buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("cannot read log " + path.string() + ": " + errno_text());
    }
    if (n == 0) break;
    file.insert(file.end(), buf, buf + n);
  }

  if (file.empty()) {
    if (!write_all(log.fd_, kMagic, sizeof(kMagic)) ||
        (options.durability == Durability::kSync && ::fsync(log.fd_) != 0)) {
      throw IoError("cannot initialise log " + path.string() + ": " + errno_text());
    }
    return log;
  }
  if (file.size() < kHeaderBytes || std::memcmp(file.data(), kMagic, 4) != 0) {
    throw CodecError("log " + path.string() + ": bad magic (expected CHL1)", 0);
  }

  std::uint64_t pos = kHeaderBytes;
  std::optional<Date> last;
  while (pos < file.size()) {
    const std::uint64_t remaining = file.size() - pos;
    bool complete = remaining >= 4;
    std::uint32_t len = 0;
    if (complete) {
      len = get_u32(file.data() + pos);
      complete = remaining >= 8 + std::uint64_t{len};
    }
    if (!complete) break;
    const std::uint8_t* payload = file.data() + pos + 4;
    const bool intact = crc32c({payload, len}) == get_u32(payload + len);
    const std::uint64_t end = pos + 8 + len;
    if (!intact && end == file.size()) break;  // torn final record
    const std::uint64_t seq = log.offsets_.size() + 1;
    if (intact) {
      Change c;
      try {
        c = parse_change_json({reinterpret_cast<const char*>(payload), len});
      } catch (const ParseError& e) {
        throw LogIntegrityError("log record " + std::to_string(seq) + ": " + e.what(), seq);
      }
      if (c.seq != seq) {
        throw LogIntegrityError("log record " + std::to_string(seq) + " carries seq " + std::to_string(c.seq), seq);
      }
      if (last && c.date < *last) throw LogIntegrityError("log record " + std::to_string(seq) + " goes back in time", seq);
      last = c.date;
    }
    log.offsets_.push_back(log.records_.size());
    log.records_.insert(log.records_.end(), file.begin() + static_cast<std::ptrdiff_t>(pos),
                        file.begin() + static_cast<std::ptrdiff_t>(end));
    pos = end;
  }
  log.last_date_ = last;

  if (pos < file.size()) {
    log.truncated_bytes_ = file.size() - pos;
    if (::ftruncate(log.fd_, static_cast<off_t>(pos)) != 0 ||
        (options.durability == Durability::kSync && ::fsync(log.fd_) != 0)) {
      throw IoError("cannot truncate torn record in " + path.string() + ": " + errno_text());
    }
  }
  if (::lseek(log.fd_, 0, SEEK_END) < 0) throw IoError("cannot seek in " + path.string() + ": " + errno_text());
  return log;
}

std::uint64_t ChangeLog::append(Change change) {
  validate_change_shape(change);
  if (last_date_ && change.date < *last_date_) {
    throw OrderingError("change dated " + change.date.to_string() + " precedes the last record (" +
                        last_date_->to_string() + ")");
  }
  change.seq = head_seq() + 1;
  const std::string json = to_canonical_json(change);
  if (json.size() > UINT32_MAX) throw AppendError("change record too large");

  std::vector<std::uint8_t> frame;
  frame.reserve(json.size() + 8);
  put_u32(frame, static_cast<std::uint32_t>(json.size()));
  frame.insert(frame.end(), json.begin(), json.end());
  put_u32(frame, crc32c({frame.data() + 4, json.size()}));

  if (options_.max_file_bytes && kHeaderBytes + records_.size() + frame.size() > *options_.max_file_bytes) {
    throw AppendError("log size limit reached");
  }
  if (fd_ >= 0 && options_.durability != Durability::kNone) {
    const auto size = static_cast<off_t>(kHeaderBytes + records_.size());
    if (!write_all(fd_, frame.data(), frame.size()) ||
        (options_.durability == Durability::kSync && ::fsync(fd_) != 0)) {
      const std::string why = errno_text();
      // Best effort: drop whatever part of the frame reached the file.
      if (::ftruncate(fd_, size) == 0) ::lseek(fd_, size, SEEK_SET);
      throw AppendError("log write failed: " + why);
    }
  }
  offsets_.push_back(records_.size());
  records_.insert(records_.end(), frame.begin(), frame.end());
  last_date_ = change.date;
  return change.seq;
}

void ChangeLog::check_range(std::uint64_t from_seq, std::uint64_t to_seq) const {
  if (from_seq < 1 || from_seq > to_seq || to_seq > head_seq()) {
    throw RangeError("log range [" + std::to_string(from_seq) + ", " + std::to_string(to_seq) +
                     "] outside [1, " + std::to_string(head_seq()) + "]");
  }
}

std::vector<Change> ChangeLog::replay(std::uint64_t from_seq, std::uint64_t to_seq) const {
  check_range(from_seq, to_seq);
  std::vector<Change> out;
  out.reserve(to_seq - from_seq + 1);
  for (std::uint64_t seq = from_seq; seq <= to_seq; ++seq) {
    const std::uint8_t* frame = records_.data() + offsets_[seq - 1];
    const std::uint32_t len = get_u32(frame);
    if (crc32c({frame + 4, len}) != get_u32(frame + 4 + len)) {
      throw ChecksumError("checksum mismatch in log record " + std::to_string(seq), seq);
    }
    out.push_back(parse_change_json({reinterpret_cast<const char*>(frame + 4), len}));
  }
  return out;
}

std::vector<Change> ChangeLog::replay_all() const {
  if (head_seq() == 0) return {};
  return replay(1, head_seq());
}

std::uint64_t ChangeLog::framed_bytes(std::uint64_t from_seq, std::uint64_t to_seq) const {
  check_range(from_seq, to_seq);
  const std::uint64_t end = to_seq == head_seq() ? records_.size() : offsets_[to_seq];
  return end - offsets_[from_seq - 1];
}

}  // namespace snapsearch
