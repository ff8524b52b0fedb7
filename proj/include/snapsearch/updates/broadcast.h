#pragma once

#include <cstdint>
#include <vector>

#include "snapsearch/updates/change_log.h"
#include "snapsearch/updates/client_state.h"

namespace snapsearch {

struct LossModel {
  std::uint64_t seed = 0;
  double loss_probability = 0.0;  // independent per (client, record)
};

struct BroadcastOptions {
  LossModel loss;
  bool archive_reachable = true;
};

struct BroadcastReport {
  std::uint64_t head_seq = 0;
  std::uint64_t records_broadcast = 0;  // per client
  std::uint64_t delivered = 0;          // summed over clients
  std::uint64_t lost = 0;
  std::uint64_t catch_up_calls = 0;     // one per contiguous gap fetched from the archive
  std::uint64_t records_fetched = 0;
  std::uint64_t bytes_broadcast = 0;    // framed record bytes times client count
  std::vector<std::size_t> stale_clients;  // indexes of clients left behind head
};

// Broadcasts records first_seq..head to every client. Each record reaches a
// client unless lost; survivors arrive in a random order and are buffered
// until they can be applied in sequence. At the end of the round each client
// fetches its remaining gaps from the archive. If the archive is unreachable a
// client with gaps keeps what it could apply and is reported stale; later
// rounds catch it up.
BroadcastReport broadcast_round(const ChangeLog& archive, std::vector<ClientState>& clients, std::uint64_t first_seq,
                                const BroadcastOptions& options);

}  // namespace snapsearch
