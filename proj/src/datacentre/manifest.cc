#include "snapsearch/datacentre/manifest.h"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "snapsearch/common/error.h"
#include "snapsearch/common/text_format.h"
#include "snapsearch/index/index_file.h"

namespace snapsearch {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

ordered_json stats_json(const CollectionStats& s) {
  ordered_json j;
  j["N"] = s.N;
  j["total_terms"] = s.total_terms;
  ordered_json df = ordered_json::object();
  for (const auto& [term, n] : s.df) df[term] = n;
  j["df"] = std::move(df);
  return j;
}

CollectionStats stats_from_json(const json& j) {
  CollectionStats s;
  s.N = j.at("N").get<std::uint64_t>();
  s.total_terms = j.at("total_terms").get<std::uint64_t>();
  for (const auto& [term, n] : j.at("df").items()) s.df.emplace(term, n.get<std::uint64_t>());
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

fs::path write_manifest(const ShardTopology& topology, const fs::path& dir) {
  fs::create_directories(dir);
  ordered_json m;
  m["format"] = "snapsearch-topology-1";
  m["mode"] = topology.mode() == ShardingMode::kDateSharded ? "date" : "random";
  m["granularity_days"] = topology.granularity_days();
  ordered_json shards = ordered_json::array();
  for (const auto& [id, shard] : topology.shards()) {
    const std::string stem = "shard-" + std::to_string(id);
    save_index(dir / (stem + ".idx"), shard.index);
    std::string ids;
    for (DocId d : shard.doc_ids()) ids += std::to_string(d) + "\n";
    write_text(dir / (stem + ".docids"), ids);
    ordered_json s;
    s["shard_id"] = id;
    s["range_start"] = shard.range.start.to_string();
    s["range_end"] = shard.range.end.to_string();
    s["index"] = stem + ".idx";
    s["modified_docids"] = stem + ".docids";
    shards.push_back(std::move(s));
  }
  m["shards"] = std::move(shards);
  ordered_json retired = ordered_json::array();
  for (const auto& [id, range] : topology.retired()) {
    retired.push_back({{"shard_id", id}, {"range_start", range.start.to_string()}, {"range_end", range.end.to_string()}});
  }
  m["retired"] = std::move(retired);
  if (!topology.retired().empty()) {
    write_text(dir / "retired-stats.json", stats_json(topology.retired_stats()).dump() + "\n");
    m["retired_stats"] = "retired-stats.json";
  }
  const fs::path path = dir / "manifest.json";
  write_text(path, m.dump(2) + "\n");
  return path;
}

ShardTopology read_manifest(const fs::path& manifest_path) {
  const fs::path dir = manifest_path.parent_path();
  try {
    const json m = json::parse(read_text(manifest_path));
    const std::string mode = m.at("mode").get<std::string>();
    if (mode != "date" && mode != "random") throw ParseError("unknown sharding mode '" + mode + "'");
    std::map<ShardId, Shard> shards;
    for (const auto& s : m.at("shards")) {
      Shard shard;
      shard.id = s.at("shard_id").get<ShardId>();
      shard.range = {Date::parse(s.at("range_start").get<std::string>()),
                     Date::parse(s.at("range_end").get<std::string>())};
      shard.index = load_index(dir / s.at("index").get<std::string>());
      std::istringstream ids(read_text(dir / s.at("modified_docids").get<std::string>()));
      std::vector<DocId> listed;
      for (DocId d; ids >> d;) listed.push_back(d);
      if (!ids.eof() || listed != shard.doc_ids()) {
        throw IntegrityError("doc id list of shard " + std::to_string(shard.id) + " disagrees with its index");
      }
      if (!shards.emplace(shard.id, std::move(shard)).second) throw IntegrityError("shard listed twice in manifest");
    }
    std::map<ShardId, DateRange> retired;
    for (const auto& r : m.at("retired")) {
      retired.emplace(r.at("shard_id").get<ShardId>(), DateRange{Date::parse(r.at("range_start").get<std::string>()),
                                                                 Date::parse(r.at("range_end").get<std::string>())});
    }
    CollectionStats retired_stats;
    if (auto it = m.find("retired_stats"); it != m.end()) {
      retired_stats = stats_from_json(json::parse(read_text(dir / it->get<std::string>())));
    }
    return ShardTopology::from_parts(mode == "date" ? ShardingMode::kDateSharded : ShardingMode::kRandomSharded,
                                     m.at("granularity_days").get<std::uint32_t>(), std::move(shards),
                                     std::move(retired), retired_stats);
  } catch (const json::exception& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  }
}

void write_routing_csv(std::ostream& out, const ShardTopology& topology, const ShardLoads& loads,
                       const ReplicaAllocation& replicas) {
  out << "shard_id,range_start,range_end,expected_load,replicas\n";
  for (const auto& [id, shard] : topology.shards()) {
    const auto load = loads.find(id);
    const auto reps = replicas.find(id);
    out << id << ',' << shard.range.start.to_string() << ',' << shard.range.end.to_string() << ','
        << format_number(load == loads.end() ? 0.0 : load->second) << ','
        << (reps == replicas.end() ? 0 : reps->second) << '\n';
  }
}

}  // namespace snapsearch
