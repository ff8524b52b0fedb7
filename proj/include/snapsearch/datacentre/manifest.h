#pragma once

#include <filesystem>
#include <iosfwd>

#include "snapsearch/datacentre/fleet.h"
#include "snapsearch/datacentre/topology.h"

namespace snapsearch {

// Writes into `dir`:
//   manifest.json             mode, granularity, shard ranges and file names
//   shard-<id>.idx            each shard's index file
//   shard-<id>.docids         ids of the documents in the shard, one per line
//   retired-stats.json        statistics kept for retired shards (if any)
// Returns the manifest path.
std::filesystem::path write_manifest(const ShardTopology& topology, const std::filesystem::path& dir);

// Throws IoError, ParseError, CodecError or IntegrityError.
ShardTopology read_manifest(const std::filesystem::path& manifest_path);

// CSV with header shard_id,range_start,range_end,expected_load,replicas; one
// row per shard in service.
void write_routing_csv(std::ostream& out, const ShardTopology& topology, const ShardLoads& loads,
                       const ReplicaAllocation& replicas);

}  // namespace snapsearch
