#include "fairsub/io.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "fairsub/error.hpp"

namespace fairsub::io {

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  fail(ErrorKind::Input, "expected a rational as \"p/q\" string or integer, got " + j.dump());
}

Json rational_to_json(const Rational& r) { return r.str(); }

namespace {

std::string subset_key(std::size_t mask, std::size_t m) {
  std::string key;
  for (std::size_t e = 0; e < m; ++e)
    if (mask & (std::size_t{1} << e)) {
      if (!key.empty()) key += ',';
      key += std::to_string(e);
    }
  return key;
}

std::size_t parse_subset_key(const std::string& key, std::size_t m) {
  std::size_t mask = 0;
  if (key.empty()) return 0;
  std::size_t pos = 0;
  long prev = -1;
  while (pos <= key.size()) {
    const auto comma = key.find(',', pos);
    const std::string part = key.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorKind::Input, "malformed subset key \"" + key + "\"");
    const long e = std::stol(part);
    if (e <= prev || static_cast<std::size_t>(e) >= m)
      fail(ErrorKind::Input, "subset key \"" + key + "\" is not a sorted list of valid items");
    mask |= std::size_t{1} << e;
    prev = e;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return mask;
}

std::size_t require_size(const Json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_number_integer() || doc[field].get<long>() < 0)
    fail(ErrorKind::Input, std::string("field \"") + field + "\" must be a non-negative integer");
  return doc[field].get<std::size_t>();
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n"] = inst.agents();
  doc["m"] = inst.items();
  doc["valuation_kind"] = inst.is_additive() ? "additive" : "table";
  Json values = Json::array();
  for (Agent i = 0; i < inst.agents(); ++i) {
    if (const auto* add = std::get_if<AdditiveValuation>(&inst.valuation(i))) {
      Json row = Json::array();
      for (const auto& v : add->values) row.push_back(rational_to_json(v));
      values.push_back(std::move(row));
    } else {
      const auto& t = std::get<TableValuation>(inst.valuation(i)).values;
      Json row = Json::object();
      for (std::size_t mask = 0; mask < t.size(); ++mask)
        row[subset_key(mask, inst.items())] = rational_to_json(t[mask]);
      values.push_back(std::move(row));
    }
  }
  doc["values"] = std::move(values);
  return doc;
}

Instance instance_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorKind::Input, "instance document must be a JSON object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_string())
    fail(ErrorKind::Input, "missing string field \"schema_version\"");
  if (doc["schema_version"].get<std::string>() != kSchemaVersion)
    fail(ErrorKind::Input, "unsupported schema_version \"" +
                               doc["schema_version"].get<std::string>() + "\"");
  const std::size_t n = require_size(doc, "n");
  const std::size_t m = require_size(doc, "m");
  if (n == 0) fail(ErrorKind::Input, "n must be at least 1");
  if (!doc.contains("valuation_kind") || !doc["valuation_kind"].is_string())
    fail(ErrorKind::Input, "missing string field \"valuation_kind\"");
  const std::string kind = doc["valuation_kind"].get<std::string>();
  if (!doc.contains("values") || !doc["values"].is_array() || doc["values"].size() != n)
    fail(ErrorKind::Input, "\"values\" must be an array with one entry per agent");
  const Json& values = doc["values"];

  if (kind == "additive") {
    std::vector<std::vector<Rational>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!values[i].is_array() || values[i].size() != m)
        fail(ErrorKind::Input, "agent " + std::to_string(i) + " needs " + std::to_string(m) +
                                   " item values");
      for (const auto& v : values[i]) rows[i].push_back(rational_from_json(v));
    }
    return Instance::additive(std::move(rows));
  }
  if (kind == "table") {
    if (m > kMaxTableItems)
      fail(ErrorKind::Input, "table valuations support at most 16 items");
    const std::size_t size = std::size_t{1} << m;
    std::vector<std::vector<Rational>> tables(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!values[i].is_object() || values[i].size() != size)
        fail(ErrorKind::Input, "agent " + std::to_string(i) + " table must list all " +
                                   std::to_string(size) + " subsets");
      std::vector<Rational> t(size);
      std::vector<char> seen(size, 0);
      for (const auto& [key, v] : values[i].items()) {
        const std::size_t mask = parse_subset_key(key, m);
        if (seen[mask]) fail(ErrorKind::Input, "duplicate subset key \"" + key + "\"");
        seen[mask] = 1;
        t[mask] = rational_from_json(v);
      }
      tables[i] = std::move(t);
    }
    return Instance::table(m, std::move(tables));
  }
  fail(ErrorKind::Input, "valuation_kind must be \"additive\" or \"table\", got \"" + kind + "\"");
}

Json allocation_to_json(const Allocation& alloc, const SubsidyVector* subsidy) {
  Json doc;
  Json bundles = Json::array();
  for (const auto& b : alloc.bundles()) bundles.push_back(b);
  doc["allocation"] = std::move(bundles);
  if (subsidy) {
    Json p = Json::array();
    for (const auto& v : *subsidy) p.push_back(rational_to_json(v));
    doc["subsidy"] = std::move(p);
  }
  return doc;
}

AllocationFile allocation_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("allocation") || !doc["allocation"].is_array())
    fail(ErrorKind::Input, "allocation document needs an \"allocation\" array of bundles");
  std::vector<Bundle> bundles;
  for (const auto& b : doc["allocation"]) {
    if (!b.is_array()) fail(ErrorKind::Input, "each bundle must be an array of item indices");
    Bundle bundle;
    for (const auto& e : b) {
      if (!e.is_number_integer() || e.get<long>() < 0)
        fail(ErrorKind::Input, "item indices must be non-negative integers");
      bundle.push_back(e.get<Item>());
    }
    bundles.push_back(std::move(bundle));
  }
  AllocationFile out{Allocation(std::move(bundles)), std::nullopt};
  if (doc.contains("subsidy")) {
    if (!doc["subsidy"].is_array()) fail(ErrorKind::Input, "\"subsidy\" must be an array");
    SubsidyVector p;
    for (const auto& v : doc["subsidy"]) p.push_back(rational_from_json(v));
    out.subsidy = std::move(p);
  }
  return out;
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    fail(ErrorKind::Input, std::string("invalid JSON: ") + err.what());
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Generators

Instance example1(std::size_t n) {
  if (n < 2) fail(ErrorKind::Input, "example1 needs n >= 2");
  const std::size_t m = n * (n + 1);
  const Rational own(static_cast<long>(n), static_cast<long>(n + 1));
  std::vector<std::vector<Rational>> values(n, std::vector<Rational>(m));
  for (std::size_t agent = 0; agent < n; ++agent)
    for (std::size_t group = 0; group < n; ++group)
      for (std::size_t j = 0; j <= n; ++j) {
        const std::size_t e = group * (n + 1) + j;
        if (group == agent)
          values[agent][e] = own;
        else if (group + 1 == agent)
          values[agent][e] = Rational(1);
      }
  return Instance::additive(std::move(values));
}

Allocation example1_allocation(std::size_t n) {
  std::vector<Bundle> bundles(n);
  for (std::size_t group = 0; group < n; ++group)
    for (std::size_t j = 0; j <= n; ++j) bundles[group].push_back(group * (n + 1) + j);
  return Allocation(std::move(bundles));
}

Instance single_item(std::size_t n) {
  if (n < 1) fail(ErrorKind::Input, "single-item needs n >= 1");
  return Instance::additive(std::vector<std::vector<Rational>>(n, {Rational(1)}));
}

namespace {

constexpr long kGrid = 10;

// Deterministic across platforms: mt19937_64 is fully specified, and the
// reduction below avoids implementation-defined distributions.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  long below(long bound) { return static_cast<long>(rng_() % static_cast<std::uint64_t>(bound)); }
  bool coin() { return (rng_() >> 63) != 0; }

 private:
  std::mt19937_64 rng_;
};

void require_agents(std::size_t n) {
  if (n < 1) fail(ErrorKind::Input, "random families need n >= 1");
}

}  // namespace

Instance random_additive_goods(std::size_t n, std::size_t m, std::uint64_t seed) {
  require_agents(n);
  Draw draw(seed);
  std::vector<std::vector<Rational>> values(n, std::vector<Rational>(m));
  for (auto& row : values)
    for (auto& v : row) v = Rational(draw.below(kGrid + 1), kGrid);
  return Instance::additive(std::move(values));
}

Instance random_mixed(std::size_t n, std::size_t m, std::uint64_t seed) {
  require_agents(n);
  Draw draw(seed);
  std::vector<std::vector<Rational>> values(n, std::vector<Rational>(m));
  for (auto& row : values)
    for (auto& v : row) {
      const long k = draw.below(kGrid + 1);
      v = Rational(draw.coin() ? -k : k, kGrid);
    }
  return Instance::additive(std::move(values));
}

Instance random_monotone_table(std::size_t n, std::size_t m, std::uint64_t seed) {
  require_agents(n);
  if (m > kMaxTableItems) fail(ErrorKind::Input, "random-table supports m <= 16");
  Draw draw(seed);
  const std::size_t size = std::size_t{1} << m;
  std::vector<std::vector<Rational>> tables(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long clauses = 1 + draw.below(3);
    std::vector<std::vector<long>> weights(static_cast<std::size_t>(clauses), std::vector<long>(m));
    for (auto& clause : weights)
      for (auto& a : clause) a = draw.below(kGrid + 1);
    const bool capped = draw.coin();
    const long cap = draw.below(static_cast<long>(m) * kGrid + 1);
    std::vector<Rational> t(size);
    for (std::size_t mask = 0; mask < size; ++mask) {
      long best = 0;
      for (const auto& clause : weights) {
        long total = 0;
        for (std::size_t e = 0; e < m; ++e)
          if (mask & (std::size_t{1} << e)) total += clause[e];
        best = std::max(best, total);
      }
      if (capped) best = std::min(best, cap);
      t[mask] = Rational(best, kGrid);
    }
    tables[i] = std::move(t);
  }
  return Instance::table(m, std::move(tables));
}

Instance random_general_table(std::size_t n, std::size_t m, std::uint64_t seed) {
  require_agents(n);
  if (m > kMaxTableItems) fail(ErrorKind::Input, "random general table supports m <= 16");
  Draw draw(seed);
  const std::size_t size = std::size_t{1} << m;
  std::vector<std::vector<Rational>> tables(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Twentieths keep |a_e| <= 1/2 and |parity weight| <= 1/2.
    std::vector<long> a(m);
    for (auto& x : a) x = draw.below(21) - 10;
    const long parity = draw.below(21) - 10;
    std::vector<Rational> t(size);
    for (std::size_t mask = 0; mask < size; ++mask) {
      long total = 0;
      for (std::size_t e = 0; e < m; ++e)
        if (mask & (std::size_t{1} << e)) total += a[e];
      if (std::popcount(mask) % 2 == 1) total += parity;
      t[mask] = Rational(total, 2 * kGrid);
    }
    tables[i] = std::move(t);
  }
  return Instance::table(m, std::move(tables));
}

Generated generate(std::string_view family, std::size_t n, std::size_t m, std::uint64_t seed) {
  if (family == "example1") return {example1(n), example1_allocation(n)};
  if (family == "single-item") return {single_item(n), std::nullopt};
  if (family == "random-additive-goods") return {random_additive_goods(n, m, seed), std::nullopt};
  if (family == "random-mixed") return {random_mixed(n, m, seed), std::nullopt};
  if (family == "random-table") return {random_monotone_table(n, m, seed), std::nullopt};
  fail(ErrorKind::Input, "unknown instance family \"" + std::string(family) + "\"");
}

}  // namespace fairsub::io
