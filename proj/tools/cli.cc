#include "cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "snapsearch/common/error.h"
#include "snapsearch/common/text_format.h"
#include "snapsearch/corpus/corpus_io.h"
#include "snapsearch/corpus/tokenizer.h"
#include "snapsearch/datacentre/fleet.h"
#include "snapsearch/datacentre/manifest.h"
#include "snapsearch/datacentre/routing.h"
#include "snapsearch/datacentre/topology.h"
#include "snapsearch/index/index_file.h"
#include "snapsearch/index/search.h"
#include "snapsearch/projections/crossover.h"
#include "snapsearch/projections/estimator.h"
#include "snapsearch/projections/web_model.h"
#include "snapsearch/simulate/simulation.h"
#include "snapsearch/updates/broadcast.h"
#include "snapsearch/updates/change_log.h"
#include "snapsearch/updates/client_state.h"

namespace snapsearch {
namespace {

// A library error raised while reading or writing a named file.
class FileFailure : public std::runtime_error {
 public:
  FileFailure(std::string file, const Error& e)
      : std::runtime_error(e.what()), file_(std::move(file)), position_(e.position()) {}

  std::string diagnostic() const {
    std::string out = file_;
    if (position_) out += ":" + std::to_string(*position_);
    return out + ": " + what();
  }

 private:
  std::string file_;
  std::optional<std::uint64_t> position_;
};

template <class F>
auto with_file(const std::string& file, F&& f) {
  try {
    return f();
  } catch (const FileFailure&) {
    throw;
  } catch (const Error& e) {
    throw FileFailure(file, e);
  }
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

// Flat JSON object of flag name -> value, applied to whichever subcommand the
// command line selected. Flags given on the command line win.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConfigError("config must be a JSON object");

    std::vector<std::string> path;
    const CLI::App* app = root_;
    while (true) {
      const auto subs = app->get_subcommands();
      if (subs.empty()) break;
      app = subs.front();
      path.push_back(app->get_name());
    }

    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (key == "config") continue;
      CLI::ConfigItem item;
      item.parents = path;
      item.name = key;
      const auto text = [&key](const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConfigError("config key '" + key + "' must be a string, number, boolean or array of those");
      };
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(text(v));
      } else {
        item.inputs.push_back(text(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* root_;
};

const CLI::Validator kDateValidator(
    [](std::string& s) -> std::string {
      try {
        Date::parse(s);
        return {};
      } catch (const Error& e) {
        return e.what();
      }
    },
    "YYYY-MM-DD", "date");

// Writes to --out when given, otherwise to the command's output stream.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw FileFailure(path, IoError("cannot open for writing"));
      stream_ = &file_;
    }
  }

  std::ostream& operator*() { return *stream_; }

  void close() {
    stream_->flush();
    if (!*stream_) throw FileFailure(path_.empty() ? "<stdout>" : path_, IoError("write failed"));
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<Document> read_corpus_file(const std::string& path) {
  return with_file(path, [&] { return load_corpus(path); });
}

ShardTopology read_manifest_file(const std::string& path) {
  std::filesystem::path p(path);
  if (std::filesystem::is_directory(p)) p /= "manifest.json";
  return with_file(p.string(), [&] { return read_manifest(p); });
}

FleetDistribution read_fleet(const std::string& path) {
  return with_file(path, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open fleet file");
    std::string line;
    std::uint64_t line_number = 0;
    std::vector<std::pair<Date, double>> entries;
    while (std::getline(in, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line_number == 1) {
        if (line != "snapshot_date,weight") throw ParseError("expected header snapshot_date,weight", 1);
        continue;
      }
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ParseError("expected snapshot_date,weight", line_number);
      Date date;
      try {
        date = Date::parse(line.substr(0, comma));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_number);
      }
      double weight = 0;
      std::istringstream w(line.substr(comma + 1));
      if (!(w >> weight) || !(w >> std::ws).eof()) throw ParseError("bad weight", line_number);
      entries.emplace_back(date, weight);
    }
    return FleetDistribution(std::move(entries));
  });
}

std::vector<Change> read_change_file(const std::string& path) {
  return with_file(path, [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open change file");
    std::vector<Change> changes;
    std::string line;
    std::uint64_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.empty()) continue;
      try {
        changes.push_back(parse_change_json(line));
      } catch (const Error& e) {
        throw ParseError(e.what(), line_number);
      }
    }
    return changes;
  });
}

std::vector<std::string> query_terms(const std::string& query) {
  auto terms = tokenize(query);
  if (terms.empty()) throw ParameterError("query has no terms");
  return terms;
}

void write_hits(std::ostream& out, const SearchResult& hits) {
  out << "rank,doc_id,score\n";
  std::size_t rank = 1;
  for (const SearchHit& h : hits) out << rank++ << ',' << h.doc_id << ',' << format_number(h.score) << '\n';
}

Durability parse_durability(const std::string& s) {
  if (s == "write") return Durability::kWrite;
  return Durability::kSync;
}

SnapshotPolicy parse_policy(const std::string& s) {
  if (s == "epoch") return SnapshotPolicy::kEpoch;
  if (s == "current") return SnapshotPolicy::kCurrent;
  return SnapshotPolicy::kUniformAge;
}

void write_topology(std::ostream& out, const ShardTopology& topology) {
  out << "shard_id,range_start,range_end,documents\n";
  for (const auto& [id, shard] : topology.shards()) {
    out << id << ',' << shard.range.start.to_string() << ',' << shard.range.end.to_string() << ','
        << shard.index.stats().N << '\n';
  }
}

struct SimFlags {
  SimConfig config;
  std::string mode = "date-sharded";
  std::string policy = "uniform";
  std::string start_date = "2015-01-01";
};

void add_sim_flags(CLI::App* sub, SimFlags& f) {
  SimConfig& c = f.config;
  sub->add_option("--seed", c.seed, "random seed (default 0)");
  sub->add_option("--clients", c.n_clients, "number of client devices")->check(CLI::PositiveNumber);
  sub->add_option("--lifetime-days", c.device_lifetime_days, "device replacement period")->check(CLI::PositiveNumber);
  sub->add_option("--queries-per-month", c.queries_per_client_per_month, "queries per client per month")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--horizon-days", c.horizon_days, "simulated days of corpus history")->check(CLI::PositiveNumber);
  sub->add_option("--start-date", f.start_date, "first simulated day")->check(kDateValidator);
  sub->add_option("--docs-per-day", c.docs_per_day, "corpus changes per day")->check(CLI::NonNegativeNumber);
  sub->add_option("--vocabulary", c.vocabulary, "corpus vocabulary size")->check(CLI::PositiveNumber);
  sub->add_option("--zipf-s", c.zipf_s, "corpus Zipf exponent")->check(CLI::NonNegativeNumber);
  sub->add_option("--modify-fraction", c.modify_fraction)->check(CLI::Range(0.0, 1.0));
  sub->add_option("--delete-fraction", c.delete_fraction)->check(CLI::Range(0.0, 1.0));
  sub->add_option("--max-doc-length", c.max_doc_length)->check(CLI::PositiveNumber);
  sub->add_option("--snapshot-policy", f.policy)->check(CLI::IsMember({"uniform", "epoch", "current"}));
  sub->add_option("--granularity-days", c.granularity_days, "shard width in days")->check(CLI::PositiveNumber);
  sub->add_option("--k", c.k, "results per query")->check(CLI::PositiveNumber);
  sub->add_option("--query-months", c.query_months, "months of queries replayed")->check(CLI::PositiveNumber);
}

SimConfig finish_sim_flags(const SimFlags& f) {
  SimConfig c = f.config;
  c.mode = parse_sim_mode(f.mode);
  c.snapshot_policy = parse_policy(f.policy);
  c.start_date = Date::parse(f.start_date);
  validate(c);
  return c;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Snapshot-and-delta search toolkit", "snapsearch"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file of default flag values");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::ignore);

  std::string out_path;
  std::function<void()> action;
  const auto leaf = [&](CLI::App* parent, const char* name, const char* help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };
  const auto group = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->require_subcommand(1);
    sub->fallthrough();
    return sub;
  };

  // index
  CLI::App* index_cmd = group("index", "build and search a single index");
  std::string corpus_path, index_path, query;
  std::size_t k = 10;
  {
    CLI::App* build = leaf(index_cmd, "build", "index a JSONL corpus");
    build->add_option("--corpus", corpus_path, "JSONL corpus")->required();
    build->add_option("--out", out_path, "index file to write")->required();
    build->callback([&] {
      action = [&] {
        const auto docs = read_corpus_file(corpus_path);
        const Index index = with_file(corpus_path, [&] { return build_index(docs); });
        with_file(out_path, [&] { save_index(out_path, index); });
        const std::uint64_t text_bytes = corpus_text_bytes(docs);
        const auto index_bytes = serialize_index(index).size();
        out << "documents,terms,index_bytes,text_bytes,index_ratio\n"
            << index.stats().N << ',' << index.dictionary().size() << ',' << index_bytes << ',' << text_bytes << ',';
        if (index.stats().N > 0 && text_bytes > 0) out << format_number(index_ratio(index, text_bytes));
        out << '\n';
      };
    });

    CLI::App* search_cmd = leaf(index_cmd, "search", "top-k BM25 search");
    search_cmd->add_option("--index", index_path, "index file")->required();
    search_cmd->add_option("--query", query, "query text")->required();
    search_cmd->add_option("--k", k, "results to return")->check(CLI::PositiveNumber);
    search_cmd->add_option("--out", out_path, "CSV output (default stdout)");
    search_cmd->callback([&] {
      action = [&] {
        const Index index = with_file(index_path, [&] { return load_index(index_path); });
        Output o(out_path, out);
        write_hits(*o, search(index, query_terms(query), k));
        o.close();
      };
    });
  }

  // shard
  CLI::App* shard_cmd = group("shard", "date-sharded topology");
  std::string shard_mode = "date", manifest_path, snapshot_date, client_index_path, log_path;
  std::uint32_t granularity = kDefaultGranularityDays;
  std::size_t shard_count = 8;
  std::uint64_t seed = 0;
  {
    CLI::App* plan = leaf(shard_cmd, "plan", "partition a corpus into shards and write a manifest");
    plan->add_option("--corpus", corpus_path, "JSONL corpus")->required();
    plan->add_option("--out", out_path, "manifest directory")->required();
    plan->add_option("--mode", shard_mode, "date or random")->check(CLI::IsMember({"date", "random"}));
    plan->add_option("--granularity-days", granularity, "shard width in days")->check(CLI::PositiveNumber);
    plan->add_option("--shards", shard_count, "shard count for random mode")->check(CLI::PositiveNumber);
    plan->add_option("--seed", seed, "random seed (default 0)");
    plan->callback([&] {
      action = [&] {
        const auto docs = read_corpus_file(corpus_path);
        const ShardTopology topology = with_file(corpus_path, [&] {
          return shard_mode == "date" ? ShardTopology::date_sharded(docs, granularity)
                                      : ShardTopology::random_sharded(docs, shard_count, seed);
        });
        with_file(out_path, [&] { return write_manifest(topology, out_path); });
        write_topology(out, topology);
      };
    });

    CLI::App* route = leaf(shard_cmd, "route", "shards a client must query, or run a query");
    route->add_option("--manifest", manifest_path, "manifest.json or its directory")->required();
    route->add_option("--snapshot-date", snapshot_date, "client snapshot date")->required()->check(kDateValidator);
    route->add_option("--query", query, "query text; runs the query instead of listing shards");
    route->add_option("--client-index", client_index_path, "client snapshot index (with --query)");
    route->add_option("--log", log_path, "change log used to suppress superseded client hits");
    route->add_option("--k", k, "results to return")->check(CLI::PositiveNumber);
    route->add_option("--out", out_path, "CSV output (default stdout)");
    route->callback([&] {
      action = [&] {
        const ShardTopology topology = read_manifest_file(manifest_path);
        const Date snapshot = Date::parse(snapshot_date);
        Output o(out_path, out);
        if (query.empty()) {
          const auto selected = shards_after(snapshot, topology);
          *o << "shard_id,range_start,range_end,selected\n";
          for (const auto& [id, shard] : topology.shards()) {
            *o << id << ',' << shard.range.start.to_string() << ',' << shard.range.end.to_string() << ','
               << (selected.count(id) ? 1 : 0) << '\n';
          }
        } else {
          const Index client = client_index_path.empty()
                                   ? Index()
                                   : with_file(client_index_path, [&] { return load_index(client_index_path); });
          std::vector<Change> changes;
          if (!log_path.empty()) {
            changes = with_file(log_path, [&] {
              LogOptions opts;
              opts.durability = Durability::kNone;
              return ChangeLog::open(log_path, opts).replay_all();
            });
          }
          const QueryRouter router(topology, changes);
          write_hits(*o, router.execute(query_terms(query), k, client, snapshot));
        }
        o.close();
      };
    });
  }

  // replicate
  CLI::App* replicate_cmd = group("replicate", "replica planning");
  std::string fleet_path;
  std::uint64_t budget = 0;
  double query_rate = 1.0;
  {
    CLI::App* plan = leaf(replicate_cmd, "plan", "replicas per shard from fleet snapshot dates");
    plan->add_option("--manifest", manifest_path, "manifest.json or its directory")->required();
    plan->add_option("--fleet", fleet_path, "CSV snapshot_date,weight")->required();
    plan->add_option("--budget", budget, "total replicas")->required();
    plan->add_option("--query-rate", query_rate, "fleet query rate")->check(CLI::PositiveNumber);
    plan->add_option("--out", out_path, "CSV output (default stdout)");
    plan->callback([&] {
      action = [&] {
        const ShardTopology topology = read_manifest_file(manifest_path);
        const FleetDistribution fleet = read_fleet(fleet_path);
        const ShardLoads loads = expected_shard_load(fleet, topology, query_rate);
        const ReplicaAllocation replicas = plan_replicas(loads, budget);
        Output o(out_path, out);
        write_routing_csv(*o, topology, loads, replicas);
        o.close();
      };
    });
  }

  // log
  CLI::App* log_cmd = group("log", "change log");
  std::string changes_path, durability = "sync";
  std::uint64_t from_seq = 1, to_seq = 0, first_seq = 1;
  std::size_t clients = 50;
  double loss = 0.0;
  bool archive_unreachable = false;
  {
    CLI::App* append = leaf(log_cmd, "append", "append JSONL changes to a log file");
    append->add_option("--log", log_path, "log file (created if missing)")->required();
    append->add_option("--changes", changes_path, "JSONL changes")->required();
    append->add_option("--durability", durability, "write or sync (default sync)")
        ->check(CLI::IsMember({"write", "sync"}));
    append->callback([&] {
      action = [&] {
        const auto changes = read_change_file(changes_path);
        with_file(log_path, [&] {
          LogOptions opts;
          opts.durability = parse_durability(durability);
          ChangeLog log = ChangeLog::open(log_path, opts);
          for (const Change& c : changes) log.append(c);
          out << "appended,head_seq\n" << changes.size() << ',' << log.head_seq() << '\n';
          return 0;
        });
      };
    });

    CLI::App* replay = leaf(log_cmd, "replay", "list log records");
    replay->add_option("--log", log_path, "log file")->required();
    replay->add_option("--from", from_seq, "first sequence number (default 1)");
    replay->add_option("--to", to_seq, "last sequence number (default head)");
    replay->add_option("--out", out_path, "CSV output (default stdout)");
    replay->callback([&] {
      action = [&] {
        const auto changes = with_file(log_path, [&] {
          LogOptions opts;
          opts.durability = Durability::kNone;
          const ChangeLog log = ChangeLog::open(log_path, opts);
          if (log.head_seq() == 0) return std::vector<Change>{};
          return log.replay(from_seq, to_seq == 0 ? log.head_seq() : to_seq);
        });
        Output o(out_path, out);
        *o << "seq,kind,date,doc_id\n";
        for (const Change& c : changes) {
          *o << c.seq << ',' << to_string(c.kind) << ',' << c.date.to_string() << ',' << c.doc_id << '\n';
        }
        o.close();
      };
    });

    CLI::App* bsim = leaf(log_cmd, "broadcast-sim", "broadcast a log to fresh clients with message loss");
    bsim->add_option("--log", log_path, "log file")->required();
    bsim->add_option("--corpus", corpus_path, "JSONL snapshot every client starts from (default empty)");
    bsim->add_option("--clients", clients, "client count")->check(CLI::PositiveNumber);
    bsim->add_option("--loss", loss, "per-record loss probability")->check(CLI::Range(0.0, 1.0));
    bsim->add_option("--first-seq", first_seq, "first record broadcast")->check(CLI::PositiveNumber);
    bsim->add_option("--seed", seed, "random seed (default 0)");
    bsim->add_flag("--archive-unreachable", archive_unreachable, "clients cannot fetch gaps");
    bsim->add_option("--out", out_path, "CSV output (default stdout)");
    bsim->callback([&] {
      action = [&] {
        BroadcastReport r;
        std::vector<ClientState> fleet(clients);
        if (!corpus_path.empty()) {
          const auto docs = read_corpus_file(corpus_path);
          Date newest = kEpoch;
          for (const Document& d : docs) newest = std::max(newest, d.modified_date);
          const ClientState start = with_file(corpus_path, [&] { return ClientState(docs, newest, 0); });
          fleet.assign(clients, start);
        }
        with_file(log_path, [&] {
          LogOptions opts;
          opts.durability = Durability::kNone;
          const ChangeLog log = ChangeLog::open(log_path, opts);
          if (first_seq > 1) {
            const auto prefix = log.replay(1, std::min(first_seq - 1, log.head_seq()));
            for (ClientState& c : fleet) c.apply(prefix);
          }
          BroadcastOptions options;
          options.loss = {seed, loss};
          options.archive_reachable = !archive_unreachable;
          r = broadcast_round(log, fleet, first_seq, options);
          return 0;
        });
        Output o(out_path, out);
        *o << "head_seq,records_broadcast,delivered,lost,catch_up_calls,records_fetched,bytes_broadcast,"
              "stale_clients\n"
           << r.head_seq << ',' << r.records_broadcast << ',' << r.delivered << ',' << r.lost << ','
           << r.catch_up_calls << ',' << r.records_fetched << ',' << r.bytes_broadcast << ','
           << r.stale_clients.size() << '\n';
        o.close();
      };
    });
  }

  // simulate
  CLI::App* sim_cmd = group("simulate", "architecture cost simulation");
  SimFlags sim;
  std::vector<std::string> modes = {"centralized", "date-sharded", "broadcast"};
  {
    CLI::App* run_cmd = leaf(sim_cmd, "run", "simulate one architecture");
    add_sim_flags(run_cmd, sim);
    run_cmd->add_option("--mode", sim.mode, "centralized, date-sharded or broadcast")
        ->check(CLI::IsMember({"centralized", "date-sharded", "broadcast"}));
    run_cmd->add_option("--out", out_path, "CSV output (default stdout)");
    run_cmd->callback([&] {
      action = [&] {
        const SimConfig c = finish_sim_flags(sim);
        const SimMetrics m = run(c);
        Output o(out_path, out);
        *o << "mode,seed,n_clients,horizon_days,queries,postings_dc,postings_client,bytes,broadcast_bytes\n"
           << to_string(c.mode) << ',' << c.seed << ',' << c.n_clients << ',' << c.horizon_days << ',' << m.queries
           << ',' << m.postings_scored_datacentre << ',' << m.postings_scored_clients << ',' << m.bytes_transferred
           << ',' << m.broadcast_bytes << '\n';
        o.close();
      };
    });

    CLI::App* compare_cmd = leaf(sim_cmd, "compare", "simulate several architectures on one workload");
    add_sim_flags(compare_cmd, sim);
    compare_cmd->add_option("--modes", modes, "modes to compare")
        ->check(CLI::IsMember({"centralized", "date-sharded", "broadcast"}))
        ->delimiter(',');
    compare_cmd->add_option("--out", out_path, "CSV output (default stdout)");
    compare_cmd->callback([&] {
      action = [&] {
        const SimConfig base = finish_sim_flags(sim);
        std::vector<SimConfig> configs;
        for (const auto& m : modes) {
          SimConfig c = base;
          c.mode = parse_sim_mode(m);
          configs.push_back(c);
        }
        const auto rows = compare(configs);
        Output o(out_path, out);
        write_compare_csv(*o, rows);
        o.close();
      };
    });
  }

  // project
  CLI::App* project_cmd = group("project", "growth projections");
  std::string series, capacity = "disk", demand = "index@0.11", reference_path;
  std::optional<double> from_year, to_year;
  double step = 1.0, year = 2050, modification_factor = 1.0, creation_rate = kDefaultCreationRate;
  std::vector<double> scales = {1.0, 10.0};
  std::vector<std::string> engine_paths;
  std::size_t probes = kDefaultProbes;
  // Shared by crossover and sensitivity; must outlive the parse.
  const auto crossover_flags = [&](CLI::App* sub) {
    sub->add_option("--capacity", capacity, "capacity series (disk, disk-fit, sd, sd-retail)");
    sub->add_option("--demand", demand, "demand series (index@R, text, text+index, full)");
    sub->add_option("--from", from_year, "first year searched");
    sub->add_option("--to", to_year, "last year searched");
    sub->add_option("--out", out_path, "CSV output (default stdout)");
  };
  const auto solve = [&](const std::vector<double>& list) {
    const GrowthModel cap = named_series(capacity);
    const GrowthModel dem = named_series(demand);
    std::optional<YearRange> range;
    if (from_year || to_year) range = YearRange{from_year.value_or(-INFINITY), to_year.value_or(INFINITY)};
    Output o(out_path, out);
    write_crossover_header(*o);
    for (double s : list) write_crossover_row(*o, capacity, demand, s, sensitivity(s, cap, dem, range));
    o.close();
  };
  {
    CLI::App* curve = leaf(project_cmd, "curve", "tabulate a series");
    curve->add_option("--series", series, "series name")->required();
    curve->add_option("--from", from_year, "first year");
    curve->add_option("--to", to_year, "last year");
    curve->add_option("--step", step, "year step")->check(CLI::PositiveNumber);
    curve->add_option("--out", out_path, "CSV output (default stdout)");
    curve->callback([&] {
      action = [&] {
        const GrowthModel m = named_series(series);
        const double first = from_year.value_or(m.range().first);
        const double last = to_year.value_or(m.range().last);
        if (!std::isfinite(first) || !std::isfinite(last)) {
          throw ParameterError("series '" + series + "' is unbounded; give --from and --to");
        }
        Output o(out_path, out);
        *o << "year,value\n";
        for (long i = 0;; ++i) {
          const double y = first + static_cast<double>(i) * step;
          if (y > last + 1e-9) break;
          *o << format_number(y) << ',' << format_number(m(y)) << '\n';
        }
        o.close();
      };
    });

    CLI::App* cross = leaf(project_cmd, "crossover", "year capacity first covers demand");
    crossover_flags(cross);
    cross->callback([&] { action = [&] { solve({1.0}); }; });

    CLI::App* sens = leaf(project_cmd, "sensitivity", "crossover with demand scaled");
    crossover_flags(sens);
    sens->add_option("--scale", scales, "demand multipliers (default 1,10)")
        ->check(CLI::PositiveNumber)
        ->delimiter(',');
    sens->callback([&] { action = [&] { solve(scales); }; });

    CLI::App* est = leaf(project_cmd, "estimate-size", "Zipf-probe size estimate of engines");
    est->add_option("--reference", reference_path, "JSONL reference corpus")->required();
    est->add_option("--engine", engine_paths, "JSONL corpus per engine, in combination order")->required();
    est->add_option("--probes", probes, "probe terms")->check(CLI::PositiveNumber);
    est->add_option("--k", k, "sampled results per probe")->check(CLI::PositiveNumber);
    est->add_option("--out", out_path, "CSV output (default stdout)");
    est->callback([&] {
      action = [&] {
        const auto ref_docs = read_corpus_file(reference_path);
        const Index reference = with_file(reference_path, [&] { return build_index(ref_docs); });
        const auto probe_set = zipf_probes(reference, probes);
        std::vector<Index> indexes;
        for (const auto& p : engine_paths) {
          const auto docs = read_corpus_file(p);
          indexes.push_back(with_file(p, [&] { return build_index(docs); }));
        }
        std::vector<SearchEngine> engines;
        for (std::size_t i = 0; i < indexes.size(); ++i) {
          engines.push_back(engine_from_index(engine_paths[i], indexes[i], k));
        }
        const WebSizeEstimate e = estimate_web_size(engines, probe_set);
        Output o(out_path, out);
        *o << "engine,size,uniqueness,cumulative\n";
        for (const auto& c : e.engines) {
          *o << csv_field(c.name) << ',' << format_number(c.size) << ',' << format_number(c.uniqueness) << ','
             << format_number(c.cumulative) << '\n';
        }
        o.close();
      };
    });

    CLI::App* feas = leaf(project_cmd, "broadcast-feasible", "daily change bytes against bandwidth");
    feas->add_option("--year", year, "year");
    feas->add_option("--modification-factor", modification_factor, "modified pages per created page")
        ->check(CLI::NonNegativeNumber);
    feas->add_option("--creation-rate", creation_rate, "pages per person per year")->check(CLI::NonNegativeNumber);
    feas->add_option("--out", out_path, "CSV output (default stdout)");
    feas->callback([&] {
      action = [&] {
        const BroadcastFeasibility f = broadcast_feasible(year, modification_factor, creation_rate);
        Output o(out_path, out);
        *o << "year,creation_bytes,modification_bytes,daily_bytes,ieee_daily_capacity,nielsen_daily_capacity,"
              "feasible_ieee,feasible_nielsen\n"
           << format_number(f.year) << ',' << format_number(f.creation_bytes) << ','
           << format_number(f.modification_bytes) << ',' << format_number(f.daily_bytes) << ','
           << format_number(f.ieee_daily_capacity) << ',' << format_number(f.nielsen_daily_capacity) << ','
           << (f.feasible_ieee ? 1 : 0) << ',' << (f.feasible_nielsen ? 1 : 0) << '\n';
        o.close();
      };
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "snapsearch: " << one_line(e.what()) << "\n" << app.help();
    return 2;
  } catch (const Error& e) {
    err << "snapsearch: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const FileFailure& e) {
    err << "snapsearch: " << one_line(e.diagnostic()) << "\n";
    return 1;
  } catch (const ParameterError& e) {
    err << "snapsearch: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const Error& e) {
    err << "snapsearch: " << one_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace snapsearch
