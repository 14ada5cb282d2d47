#include "lprc/instance.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lprc/errors.hpp"

namespace lprc {

using nlohmann::json;

Rational Instance::reward(int bus, int line, int od) const {
  auto it = rewards.find({bus, line, od});
  return it == rewards.end() ? Rational(0) : it->second;
}

Rational Instance::cost(int bus, int line, int k) const {
  auto it = costs.find({bus, line, k});
  return it == costs.end() ? Rational(0) : it->second;
}

void Instance::set_reward(int bus, int line, int od, const Rational& value) {
  if (value == 0)
    rewards.erase({bus, line, od});
  else
    rewards[{bus, line, od}] = value;
}

void Instance::set_cost(int bus, int line, int k, const Rational& value) {
  if (value == 0)
    costs.erase({bus, line, k});
  else
    costs[{bus, line, k}] = value;
}

std::vector<int> Instance::walk_nodes(std::span<const int> arcs) const {
  std::vector<int> nodes;
  if (arcs.empty()) return nodes;
  nodes.reserve(arcs.size() + 1);
  nodes.push_back(network.arcs.at(arcs.front()).tail);
  for (int a : arcs) nodes.push_back(network.arcs.at(a).head);
  return nodes;
}

std::optional<ArcRange> find_subpath(std::span<const int> node_sequence, int origin,
                                     int destination) {
  auto first = std::find(node_sequence.begin(), node_sequence.end(), origin);
  if (first == node_sequence.end()) return std::nullopt;
  auto second = std::find(first + 1, node_sequence.end(), destination);
  if (second == node_sequence.end()) return std::nullopt;
  int p = static_cast<int>(first - node_sequence.begin());
  int r = static_cast<int>(second - node_sequence.begin());
  return ArcRange{p, r - 1};
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Reporter {
 public:
  void add(std::string code, std::string message) {
    out_.push_back({std::move(code), std::move(message)});
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

template <class T, class F>
void check_unique(const std::vector<T>& items, F id_of, const char* what, Reporter& r) {
  std::set<std::string> seen;
  for (const auto& item : items)
    if (!seen.insert(id_of(item)).second)
      r.add("duplicate_id", std::string("duplicate ") + what + " id '" + id_of(item) + "'");
}

}  // namespace

std::vector<Violation> validate(const Instance& in) {
  Reporter r;
  const int num_nodes = static_cast<int>(in.network.nodes.size());
  const int num_arcs = static_cast<int>(in.network.arcs.size());
  const int num_lines = static_cast<int>(in.lines.size());
  const int num_buses = in.num_buses();
  const int num_ods = in.num_ods();

  if (in.K < 1) r.add("bad_k", "K must be at least 1");

  check_unique(in.network.nodes, [](const std::string& s) { return s; }, "node", r);
  check_unique(in.network.arcs, [](const Arc& a) { return a.id; }, "arc", r);
  check_unique(in.lines, [](const Line& l) { return l.id; }, "line", r);
  check_unique(in.buses, [](const Bus& b) { return b.id; }, "bus", r);

  auto node_ok = [&](int n) { return n >= 0 && n < num_nodes; };
  for (const auto& a : in.network.arcs) {
    if (!node_ok(a.tail) || !node_ok(a.head))
      r.add("unknown_node", "arc '" + a.id + "' references an unknown node");
    else if (a.tail == a.head)
      r.add("self_loop", "arc '" + a.id + "' has tail equal to head");
  }

  std::vector<bool> line_ok(num_lines, true);
  for (int l = 0; l < num_lines; ++l) {
    const Line& line = in.lines[l];
    for (int a : line.arcs)
      if (a < 0 || a >= num_arcs) {
        r.add("unknown_arc", "line '" + line.id + "' references an unknown arc");
        line_ok[l] = false;
      }
    if (!line_ok[l]) continue;
    for (size_t i = 0; i + 1 < line.arcs.size(); ++i) {
      if (in.network.arcs[line.arcs[i]].head != in.network.arcs[line.arcs[i + 1]].tail) {
        r.add("bad_chaining", "line '" + line.id + "' arcs do not chain head-to-tail at position " +
                                  std::to_string(i));
        line_ok[l] = false;
        break;
      }
    }
    if (line_ok[l] && line.nodes != in.walk_nodes(line.arcs))
      r.add("bad_node_sequence", "line '" + line.id + "' node sequence does not match its arcs");
  }

  for (const auto& bus : in.buses) {
    if (bus.capacity < 1) r.add("bad_capacity", "bus '" + bus.id + "' capacity must be >= 1");
    bool has_dummy = false;
    std::set<int> seen;
    for (int l : bus.candidate_lines) {
      if (l < 0 || l >= num_lines) {
        r.add("unknown_line", "bus '" + bus.id + "' lists an unknown candidate line");
        continue;
      }
      if (!seen.insert(l).second)
        r.add("duplicate_candidate", "bus '" + bus.id + "' lists line '" + in.lines[l].id + "' twice");
      has_dummy |= in.lines[l].is_dummy();
    }
    if (!has_dummy) r.add("missing_dummy", "bus '" + bus.id + "' has no dummy line among its candidates");
  }

  std::set<std::pair<int, int>> od_seen;
  for (int o = 0; o < num_ods; ++o) {
    const OdPair& od = in.od_pairs[o];
    std::string name = "od #" + std::to_string(o);
    if (!node_ok(od.origin) || !node_ok(od.destination)) {
      r.add("unknown_node", name + " references an unknown node");
      continue;
    }
    if (od.origin == od.destination) r.add("od_self", name + ": origin equals destination");
    if (od.demand < 1) r.add("bad_demand", name + ": demand must be >= 1");
    if (!od_seen.insert({od.origin, od.destination}).second)
      r.add("duplicate_od", name + " duplicates an earlier OD pair");
  }

  auto is_candidate = [&](int b, int l) {
    const auto& c = in.buses[b].candidate_lines;
    return std::find(c.begin(), c.end(), l) != c.end();
  };
  auto bus_line_ok = [&](int b, int l) { return b >= 0 && b < num_buses && l >= 0 && l < num_lines; };

  for (const auto& [key, value] : in.rewards) {
    if (!bus_line_ok(key.bus, key.line) || key.od < 0 || key.od >= num_ods) {
      r.add("bad_reference", "reward entry references an unknown bus, line or OD");
      continue;
    }
    const Line& line = in.lines[key.line];
    std::string where = "reward (bus '" + in.buses[key.bus].id + "', line '" + line.id + "', " +
                        od_key(in, key.od) + ")";
    if (value < 0) r.add("negative_reward", where + " is negative");
    if (line.is_dummy() && value != 0) {
      r.add("dummy_reward", where + ": dummy line must have zero reward");
      continue;
    }
    if (!is_candidate(key.bus, key.line))
      r.add("reward_not_candidate", where + " is for a line that is not a candidate of the bus");
    if (line_ok[key.line] && value != 0 &&
        !find_subpath(line.nodes, in.od_pairs[key.od].origin, in.od_pairs[key.od].destination))
      r.add("reward_unservable", where + " is nonzero but the line cannot serve the OD pair");
  }

  for (const auto& [key, value] : in.costs) {
    if (!bus_line_ok(key.bus, key.line) || key.k < 0 || key.k >= in.K) {
      r.add("bad_reference", "cost entry references an unknown bus, line or resource");
      continue;
    }
    std::string where = "cost (bus '" + in.buses[key.bus].id + "', line '" + in.lines[key.line].id +
                        "', k=" + std::to_string(key.k + 1) + ")";
    if (value < 0 || value > 1) r.add("cost_range", where + ": cost out of [0,1]");
    if (in.lines[key.line].is_dummy() && value != 0)
      r.add("dummy_cost", where + ": dummy line must have zero cost");
    if (!is_candidate(key.bus, key.line))
      r.add("cost_not_candidate", where + " is for a line that is not a candidate of the bus");
  }
  return r.take();
}

// ---------------------------------------------------------------------------
// Indexing

SubpathIndex::SubpathIndex(int num_lines, int num_ods)
    : num_ods_(num_ods), ranges_(static_cast<size_t>(num_lines) * num_ods) {}

SubpathIndex build_subpath_index(const Instance& in) {
  SubpathIndex index(static_cast<int>(in.lines.size()), in.num_ods());
  for (int l = 0; l < static_cast<int>(in.lines.size()); ++l) {
    const Line& line = in.lines[l];
    if (line.is_dummy()) continue;
    for (int o = 0; o < in.num_ods(); ++o)
      index.set(o, l, find_subpath(line.nodes, in.od_pairs[o].origin, in.od_pairs[o].destination));
  }
  return index;
}

const ServedOd* Candidate::find_served(int od) const {
  auto it = std::lower_bound(served.begin(), served.end(), od,
                             [](const ServedOd& s, int o) { return s.od < o; });
  return it != served.end() && it->od == od ? &*it : nullptr;
}

IndexedInstance::IndexedInstance(Instance instance) : instance_(std::move(instance)) {
  const Instance& in = instance_;
  subpaths_ = build_subpath_index(in);
  candidates_.resize(in.buses.size());
  dummy_line_.assign(in.buses.size(), -1);
  for (int b = 0; b < in.num_buses(); ++b) {
    std::vector<int> lines = in.buses[b].candidate_lines;
    std::sort(lines.begin(), lines.end());
    for (int l : lines) {
      Candidate c;
      c.bus = b;
      c.line = l;
      c.dummy = in.lines[l].is_dummy();
      if (c.dummy && dummy_line_[b] < 0) dummy_line_[b] = l;
      for (int o = 0; o < in.num_ods(); ++o) {
        const auto& range = subpaths_.at(o, l);
        if (!range) continue;
        Rational v = in.reward(b, l, o);
        c.served.push_back({o, *range, v, to_double(v)});
      }
      c.cost.resize(in.K);
      for (int k = 0; k < in.K; ++k) {
        c.cost[k] = in.cost(b, l, k);
        if (c.cost[k] > c.max_cost) c.max_cost = c.cost[k];
      }
      candidates_[b].push_back(std::move(c));
    }
  }
  for (int i = 0; i < static_cast<int>(in.lines.size()); ++i) line_ids_[in.lines[i].id] = i;
  for (int i = 0; i < in.num_buses(); ++i) bus_ids_[in.buses[i].id] = i;
  for (int i = 0; i < static_cast<int>(in.network.nodes.size()); ++i)
    node_ids_[in.network.nodes[i]] = i;
}

const Candidate* IndexedInstance::find(int bus, int line) const {
  const auto& cs = candidates_.at(bus);
  auto it = std::lower_bound(cs.begin(), cs.end(), line,
                             [](const Candidate& c, int l) { return c.line < l; });
  return it != cs.end() && it->line == line ? &*it : nullptr;
}

const Candidate& IndexedInstance::candidate(int bus, int line) const {
  if (const Candidate* c = find(bus, line)) return *c;
  if (line < 0 || line >= static_cast<int>(instance_.lines.size()))
    throw PreconditionError("unknown line index " + std::to_string(line));
  throw PreconditionError("line '" + instance_.lines[line].id + "' is not a candidate of bus '" +
                          instance_.buses.at(bus).id + "'");
}

namespace {
int lookup(const std::unordered_map<std::string, int>& ids, std::string_view id, const char* what) {
  auto it = ids.find(std::string(id));
  if (it == ids.end()) throw PreconditionError(std::string("unknown ") + what + " '" + std::string(id) + "'");
  return it->second;
}
}  // namespace

int IndexedInstance::line_index(std::string_view id) const { return lookup(line_ids_, id, "line"); }
int IndexedInstance::bus_index(std::string_view id) const { return lookup(bus_ids_, id, "bus"); }
int IndexedInstance::node_index(std::string_view id) const { return lookup(node_ids_, id, "node"); }

int IndexedInstance::od_index(int origin, int destination) const {
  for (int o = 0; o < num_ods(); ++o)
    if (instance_.od_pairs[o].origin == origin && instance_.od_pairs[o].destination == destination)
      return o;
  return -1;
}

std::string od_key(const Instance& in, int od) {
  const OdPair& p = in.od_pairs.at(od);
  auto name = [&](int n) {
    return n >= 0 && n < static_cast<int>(in.network.nodes.size()) ? in.network.nodes[n]
                                                                   : std::string("?");
  };
  return name(p.origin) + "->" + name(p.destination);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

class DocReader {
 public:
  const json& field(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(where.empty() ? name : where + "." + name, "missing required field \"" + std::string(name) + "\"");
    return *it;
  }
  const json& array(const json& obj, const char* name, const std::string& where) {
    const json& v = field(obj, name, where);
    if (!v.is_array()) throw ParseError(join(where, name), "expected an array");
    return v;
  }
  std::string string(const json& obj, const char* name, const std::string& where) {
    const json& v = field(obj, name, where);
    if (!v.is_string()) throw ParseError(join(where, name), "expected a string");
    return v.get<std::string>();
  }
  long long integer(const json& obj, const char* name, const std::string& where) {
    const json& v = field(obj, name, where);
    if (!v.is_number_integer()) throw ParseError(join(where, name), "expected an integer");
    return v.get<long long>();
  }
  Rational rational(const json& obj, const char* name, const std::string& where) {
    const json& v = field(obj, name, where);
    std::string loc = join(where, name);
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>());
      } catch (const ParseError& e) {
        throw ParseError(loc, e.what());
      }
    }
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
      if (v[1].get<long long>() == 0) throw ParseError(loc, "zero denominator");
      return make_rational(v[0].get<long long>(), v[1].get<long long>());
    }
    throw ParseError(loc, "expected a decimal string or [num, den]");
  }
  static std::string join(const std::string& where, const char* name) {
    return where.empty() ? std::string(name) : where + "." + name;
  }
};

int resolve(const std::unordered_map<std::string, int>& ids, const std::string& id,
            const std::string& where, const char* what) {
  auto it = ids.find(id);
  if (it == ids.end()) throw ParseError(where, std::string("unknown ") + what + " '" + id + "'");
  return it->second;
}

std::string at(const char* arr, size_t i) { return std::string(arr) + "[" + std::to_string(i) + "]"; }

json rational_to_json(const Rational& r) {
  if (has_finite_decimal(r)) return format_rational(r);
  Integer num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  constexpr long long kMax = std::numeric_limits<long long>::max();
  if (boost::multiprecision::abs(num) <= kMax && den <= kMax)
    return json::array({num.convert_to<long long>(), den.convert_to<long long>()});
  return format_rational(r);
}

}  // namespace

Instance load_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    size_t byte = std::min<size_t>(e.byte, text.size());
    size_t line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte ? byte - 1 : 0), '\n');
    throw ParseError("line " + std::to_string(line), std::string("invalid JSON: ") + e.what());
  }
  DocReader rd;
  Instance in;
  in.K = static_cast<int>(rd.integer(doc, "K", ""));

  std::unordered_map<std::string, int> node_ids, arc_ids, line_ids, bus_ids;
  const json& nodes = rd.array(doc, "nodes", "");
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_string()) throw ParseError(at("nodes", i), "expected a string");
    in.network.nodes.push_back(nodes[i].get<std::string>());
    node_ids.emplace(in.network.nodes.back(), static_cast<int>(i));
  }
  const json& arcs = rd.array(doc, "arcs", "");
  for (size_t i = 0; i < arcs.size(); ++i) {
    std::string w = at("arcs", i);
    Arc a;
    a.id = rd.string(arcs[i], "id", w);
    a.tail = resolve(node_ids, rd.string(arcs[i], "tail", w), w + ".tail", "node");
    a.head = resolve(node_ids, rd.string(arcs[i], "head", w), w + ".head", "node");
    arc_ids.emplace(a.id, static_cast<int>(i));
    in.network.arcs.push_back(std::move(a));
  }
  const json& lines = rd.array(doc, "lines", "");
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string w = at("lines", i);
    Line line;
    line.id = rd.string(lines[i], "id", w);
    const json& seq = rd.array(lines[i], "arcs", w);
    for (size_t j = 0; j < seq.size(); ++j) {
      if (!seq[j].is_string()) throw ParseError(w + ".arcs[" + std::to_string(j) + "]", "expected an arc id");
      line.arcs.push_back(resolve(arc_ids, seq[j].get<std::string>(), w + ".arcs", "arc"));
    }
    line.nodes = in.walk_nodes(line.arcs);
    line_ids.emplace(line.id, static_cast<int>(i));
    in.lines.push_back(std::move(line));
  }
  const json& buses = rd.array(doc, "buses", "");
  for (size_t i = 0; i < buses.size(); ++i) {
    std::string w = at("buses", i);
    Bus bus;
    bus.id = rd.string(buses[i], "id", w);
    bus.capacity = static_cast<int>(rd.integer(buses[i], "capacity", w));
    const json& cands = rd.array(buses[i], "candidate_lines", w);
    for (const auto& c : cands) {
      if (!c.is_string()) throw ParseError(w + ".candidate_lines", "expected line ids");
      bus.candidate_lines.push_back(resolve(line_ids, c.get<std::string>(), w + ".candidate_lines", "line"));
    }
    bus_ids.emplace(bus.id, static_cast<int>(i));
    in.buses.push_back(std::move(bus));
  }
  const json& ods = rd.array(doc, "od_pairs", "");
  std::map<std::pair<int, int>, int> od_ids;
  for (size_t i = 0; i < ods.size(); ++i) {
    std::string w = at("od_pairs", i);
    OdPair od;
    od.origin = resolve(node_ids, rd.string(ods[i], "origin", w), w + ".origin", "node");
    od.destination = resolve(node_ids, rd.string(ods[i], "destination", w), w + ".destination", "node");
    od.demand = static_cast<int>(rd.integer(ods[i], "demand", w));
    od_ids.emplace(std::pair{od.origin, od.destination}, static_cast<int>(i));
    in.od_pairs.push_back(od);
  }

  auto find_od = [&](const json& entry, const std::string& w) {
    int o = resolve(node_ids, rd.string(entry, "origin", w), w + ".origin", "node");
    int d = resolve(node_ids, rd.string(entry, "destination", w), w + ".destination", "node");
    auto it = od_ids.find({o, d});
    if (it == od_ids.end()) throw ParseError(w, "no such OD pair");
    return it->second;
  };

  if (doc.contains("rewards")) {
    const json& rewards = rd.array(doc, "rewards", "");
    for (size_t i = 0; i < rewards.size(); ++i) {
      std::string w = at("rewards", i);
      RewardKey key{resolve(bus_ids, rd.string(rewards[i], "bus", w), w + ".bus", "bus"),
                    resolve(line_ids, rd.string(rewards[i], "line", w), w + ".line", "line"),
                    find_od(rewards[i], w)};
      if (in.rewards.count(key)) throw ParseError(w, "duplicate reward entry");
      in.set_reward(key.bus, key.line, key.od, rd.rational(rewards[i], "value", w));
    }
  }
  if (doc.contains("costs")) {
    const json& costs = rd.array(doc, "costs", "");
    for (size_t i = 0; i < costs.size(); ++i) {
      std::string w = at("costs", i);
      long long k = rd.integer(costs[i], "k", w);
      if (k < 1 || k > in.K) throw ParseError(w + ".k", "resource index out of range 1..K");
      CostKey key{resolve(bus_ids, rd.string(costs[i], "bus", w), w + ".bus", "bus"),
                  resolve(line_ids, rd.string(costs[i], "line", w), w + ".line", "line"),
                  static_cast<int>(k - 1)};
      if (in.costs.count(key)) throw ParseError(w, "duplicate cost entry");
      in.set_cost(key.bus, key.line, key.k, rd.rational(costs[i], "value", w));
    }
  }
  return in;
}

std::string save_instance(const Instance& in) {
  json doc;
  doc["K"] = in.K;
  doc["nodes"] = in.network.nodes;
  json arcs = json::array();
  for (const auto& a : in.network.arcs)
    arcs.push_back({{"id", a.id}, {"tail", in.network.nodes.at(a.tail)}, {"head", in.network.nodes.at(a.head)}});
  doc["arcs"] = std::move(arcs);
  json lines = json::array();
  for (const auto& l : in.lines) {
    json ids = json::array();
    for (int a : l.arcs) ids.push_back(in.network.arcs.at(a).id);
    lines.push_back({{"id", l.id}, {"arcs", std::move(ids)}});
  }
  doc["lines"] = std::move(lines);
  json buses = json::array();
  for (const auto& b : in.buses) {
    json cands = json::array();
    for (int l : b.candidate_lines) cands.push_back(in.lines.at(l).id);
    buses.push_back({{"id", b.id}, {"capacity", b.capacity}, {"candidate_lines", std::move(cands)}});
  }
  doc["buses"] = std::move(buses);
  json ods = json::array();
  for (const auto& od : in.od_pairs)
    ods.push_back({{"origin", in.network.nodes.at(od.origin)},
                   {"destination", in.network.nodes.at(od.destination)},
                   {"demand", od.demand}});
  doc["od_pairs"] = std::move(ods);
  json rewards = json::array();
  for (const auto& [key, value] : in.rewards) {
    const OdPair& od = in.od_pairs.at(key.od);
    rewards.push_back({{"bus", in.buses.at(key.bus).id},
                       {"line", in.lines.at(key.line).id},
                       {"origin", in.network.nodes.at(od.origin)},
                       {"destination", in.network.nodes.at(od.destination)},
                       {"value", rational_to_json(value)}});
  }
  doc["rewards"] = std::move(rewards);
  json costs = json::array();
  for (const auto& [key, value] : in.costs)
    costs.push_back({{"bus", in.buses.at(key.bus).id},
                     {"line", in.lines.at(key.line).id},
                     {"k", key.k + 1},
                     {"value", rational_to_json(value)}});
  doc["costs"] = std::move(costs);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// OD CSV

namespace {

std::vector<std::string> split_csv_row(std::string_view row) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : row) {
    if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  for (auto& s : cells) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return cells;
}

}  // namespace

std::vector<OdPair> load_od_csv(std::string_view text, const Network& network) {
  std::unordered_map<std::string, int> node_ids;
  for (int i = 0; i < static_cast<int>(network.nodes.size()); ++i) node_ids.emplace(network.nodes[i], i);

  std::vector<OdPair> out;
  std::map<std::pair<int, int>, size_t> slot;
  std::istringstream lines{std::string(text)};
  std::string row;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(lines, row)) {
    ++line_no;
    std::string loc = "line " + std::to_string(line_no);
    if (row.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_row(row);
    if (!header_seen) {
      if (cells != std::vector<std::string>{"origin", "destination", "demand"})
        throw ParseError(loc, "expected header 'origin,destination,demand'");
      header_seen = true;
      continue;
    }
    if (cells.size() != 3) throw ParseError(loc, "expected 3 columns");
    auto node = [&](const std::string& id) {
      auto it = node_ids.find(id);
      if (it == node_ids.end()) throw ParseError(loc, "unknown node id '" + id + "'");
      return it->second;
    };
    int o = node(cells[0]), d = node(cells[1]);
    if (o == d) throw ParseError(loc, "origin equals destination");
    long long demand = 0;
    size_t used = 0;
    try {
      demand = std::stoll(cells[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cells[2].size()) throw ParseError(loc, "demand '" + cells[2] + "' is not an integer");
    if (demand < 1) throw ParseError(loc, "demand must be positive");
    auto [it, fresh] = slot.emplace(std::pair{o, d}, out.size());
    if (fresh)
      out.push_back({o, d, static_cast<int>(demand)});
    else
      out[it->second].demand += static_cast<int>(demand);
  }
  if (!header_seen) throw ParseError("line 1", "missing header 'origin,destination,demand'");
  return out;
}

}  // namespace lprc
