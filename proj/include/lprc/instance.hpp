#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lprc/rational.hpp"

namespace lprc {

struct Arc {
  std::string id;
  int tail = 0;
  int head = 0;
  bool operator==(const Arc&) const = default;
};

struct Network {
  std::vector<std::string> nodes;
  std::vector<Arc> arcs;
  bool operator==(const Network&) const = default;
};

/// A directed walk through the network. An empty arc sequence is the dummy
/// line: a bus assigned to it is unused.
struct Line {
  std::string id;
  std::vector<int> arcs;
  /// Visited nodes, `arcs.size() + 1` entries for a non-dummy line.
  std::vector<int> nodes;

  bool is_dummy() const { return arcs.empty(); }
  bool operator==(const Line&) const = default;
};

struct Bus {
  std::string id;
  int capacity = 1;
  std::vector<int> candidate_lines;
  bool operator==(const Bus&) const = default;
};

struct OdPair {
  int origin = 0;
  int destination = 0;
  int demand = 1;
  bool operator==(const OdPair&) const = default;
};

struct RewardKey {
  int bus = 0, line = 0, od = 0;
  auto operator<=>(const RewardKey&) const = default;
};

/// `k` is zero-based internally; the file format numbers resources from 1.
struct CostKey {
  int bus = 0, line = 0, k = 0;
  auto operator<=>(const CostKey&) const = default;
};

/// A Line Planning with Resource Constraints problem. Entries missing from
/// `rewards` and `costs` are zero; zeros are never stored.
struct Instance {
  int K = 1;
  Network network;
  std::vector<Line> lines;
  std::vector<Bus> buses;
  std::vector<OdPair> od_pairs;
  std::map<RewardKey, Rational> rewards;
  std::map<CostKey, Rational> costs;

  Rational reward(int bus, int line, int od) const;
  Rational cost(int bus, int line, int k) const;
  void set_reward(int bus, int line, int od, const Rational& value);
  void set_cost(int bus, int line, int k, const Rational& value);

  int num_buses() const { return static_cast<int>(buses.size()); }
  int num_ods() const { return static_cast<int>(od_pairs.size()); }

  /// Node sequence for an arc sequence (tail of the first arc, then heads).
  std::vector<int> walk_nodes(std::span<const int> arcs) const;

  bool operator==(const Instance&) const = default;
};

struct Violation {
  std::string code;
  std::string message;
};

std::vector<Violation> validate(const Instance& instance);

/// Inclusive range of arc positions along a line's arc sequence.
struct ArcRange {
  int first = 0;
  int last = 0;
  bool contains(int position) const { return first <= position && position <= last; }
  bool operator==(const ArcRange&) const = default;
};

/// Subpath of the line's walk from the first visit of `origin` to the first
/// later visit of `destination`; nullopt when the line cannot serve the pair.
std::optional<ArcRange> find_subpath(std::span<const int> node_sequence, int origin,
                                     int destination);

class SubpathIndex {
 public:
  SubpathIndex() = default;
  SubpathIndex(int num_lines, int num_ods);

  const std::optional<ArcRange>& at(int od, int line) const {
    return ranges_[static_cast<size_t>(line) * num_ods_ + od];
  }
  void set(int od, int line, std::optional<ArcRange> range) {
    ranges_[static_cast<size_t>(line) * num_ods_ + od] = range;
  }

 private:
  int num_ods_ = 0;
  std::vector<std::optional<ArcRange>> ranges_;
};

SubpathIndex build_subpath_index(const Instance& instance);

/// An OD pair that a particular (bus, line) can carry.
struct ServedOd {
  int od = 0;
  ArcRange range;
  Rational reward;
  double reward_value = 0.0;
};

/// One entry of a bus's candidate set with everything the solvers need.
struct Candidate {
  int bus = 0;
  int line = 0;
  bool dummy = false;
  std::vector<ServedOd> served;  // ascending od index
  std::vector<Rational> cost;    // size K
  Rational max_cost;

  /// Per-unit reward for `od`, zero when not served.
  const ServedOd* find_served(int od) const;
};

/// An instance together with its subpath index and per-candidate tables.
/// Immutable after construction.
class IndexedInstance {
 public:
  explicit IndexedInstance(Instance instance);

  const Instance& instance() const { return instance_; }
  const SubpathIndex& subpaths() const { return subpaths_; }
  int K() const { return instance_.K; }
  int num_buses() const { return instance_.num_buses(); }
  int num_ods() const { return instance_.num_ods(); }

  std::span<const Candidate> candidates(int bus) const { return candidates_[bus]; }
  /// Nullptr when `line` is not a candidate of `bus`.
  const Candidate* find(int bus, int line) const;
  const Candidate& candidate(int bus, int line) const;
  /// The first dummy line among the bus's candidates, or -1.
  int dummy_line(int bus) const { return dummy_line_[bus]; }

  int line_index(std::string_view id) const;
  int bus_index(std::string_view id) const;
  int node_index(std::string_view id) const;
  int od_index(int origin, int destination) const;

 private:
  Instance instance_;
  SubpathIndex subpaths_;
  std::vector<std::vector<Candidate>> candidates_;
  std::vector<int> dummy_line_;
  std::unordered_map<std::string, int> line_ids_, bus_ids_, node_ids_;
};

/// Instance JSON document (see schemas/instance.schema.json).
Instance load_instance(std::string_view json_text);
std::string save_instance(const Instance& instance);

/// OD demand CSV with header `origin,destination,demand`. Duplicate rows
/// are aggregated by summing demand.
std::vector<OdPair> load_od_csv(std::string_view csv_text, const Network& network);

/// Stable textual key for an OD pair, "origin->destination".
std::string od_key(const Instance& instance, int od);

}  // namespace lprc
