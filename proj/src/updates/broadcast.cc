#include "snapsearch/updates/broadcast.h"

#include <algorithm>
#include <map>

#include "snapsearch/common/error.h"
#include "snapsearch/common/random.h"

namespace snapsearch {
namespace {

// Applies buffered records that directly follow the client's position.
void drain(ClientState& client, std::map<std::uint64_t, Change>& buffer) {
  std::vector<Change> run;
  auto it = buffer.begin();
  while (it != buffer.end() && it->first <= client.applied_seq()) it = buffer.erase(it);
  for (std::uint64_t next = client.applied_seq() + 1; it != buffer.end() && it->first == next; ++next) {
    run.push_back(std::move(it->second));
    it = buffer.erase(it);
  }
  if (!run.empty()) client.apply(run);
}

}  // namespace

BroadcastReport broadcast_round(const ChangeLog& archive, std::vector<ClientState>& clients, std::uint64_t first_seq,
                                const BroadcastOptions& options) {
  const double p = options.loss.loss_probability;
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("loss probability must lie in [0, 1]");
  if (first_seq == 0) throw ParameterError("first_seq must be at least 1");

  BroadcastReport report;
  report.head_seq = archive.head_seq();
  std::vector<Change> round;
  if (first_seq <= archive.head_seq()) {
    round = archive.replay(first_seq, archive.head_seq());
    report.bytes_broadcast = archive.framed_bytes(first_seq, archive.head_seq()) * clients.size();
  }
  report.records_broadcast = round.size();

  for (std::size_t i = 0; i < clients.size(); ++i) {
    ClientState& client = clients[i];
    Rng rng = make_rng(options.loss.seed, i);
    std::vector<const Change*> arrivals;
    for (const Change& c : round) {
      if (bernoulli(rng, p)) {
        ++report.lost;
      } else {
        arrivals.push_back(&c);
        ++report.delivered;
      }
    }
    std::shuffle(arrivals.begin(), arrivals.end(), rng);

    std::map<std::uint64_t, Change> buffer;
    for (const Change* c : arrivals) {
      if (c->seq <= client.applied_seq()) continue;
      buffer.emplace(c->seq, *c);
      if (c->seq == client.applied_seq() + 1) drain(client, buffer);
    }

    // Round end: fetch every remaining gap from the archive.
    while (client.applied_seq() < archive.head_seq()) {
      if (!options.archive_reachable) {
        report.stale_clients.push_back(i);
        break;
      }
      const std::uint64_t gap_end = buffer.empty() ? archive.head_seq() : buffer.begin()->first - 1;
      const auto fetched = archive.replay(client.applied_seq() + 1, gap_end);
      ++report.catch_up_calls;
      report.records_fetched += fetched.size();
      client.apply(fetched);
      drain(client, buffer);
    }
  }
  return report;
}

}  // namespace snapsearch
