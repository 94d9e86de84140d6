#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mmfair/topology_io.hpp"
#include "support/fixtures.hpp"

using namespace mmfair;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "nodes": [{"id": 0, "gateway": true}, {"id": 1, "x": 80}],
    "links": [{"src": 0, "dst": 1, "capacity_mbps": 1000, "bidirectional": true}],
    "flows": [{"id": 7, "demand_mbps": 250, "path": [0, 1]}]
  })");
}

std::string load_error(const json& doc) {
  try {
    parse_topology(doc, ".");
  } catch (const LoadError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal topology parses") {
  const Topology t = parse_topology(minimal(), ".");
  REQUIRE(t.nodes.size() == 2);
  CHECK(t.nodes[0].is_gateway);
  CHECK(t.links.size() == 2);
  CHECK(t.capacity({1, 0}) == 1000.0);
  CHECK(t.flows[0].demand_mbps == 250.0);
}

TEST_CASE("backlogged demand and uplink direction") {
  json doc = minimal();
  doc["flows"][0]["demand_mbps"] = "backlogged";
  doc["flows"].push_back({{"id", 8}, {"demand_mbps", 10}, {"path", {1, 0}}, {"direction", "uplink"}});
  const Topology t = parse_topology(doc, ".");
  CHECK(t.flows[0].backlogged());
  CHECK(t.flows[1].direction == Direction::uplink);
}

TEST_CASE("auto capacity comes from the link budget") {
  json doc = minimal();
  doc["nodes"][1]["x"] = 97;
  doc["links"][0]["capacity_mbps"] = "auto";
  const Topology t = parse_topology(doc, ".");
  CHECK(t.capacity({0, 1}) == 4982.0);
  CHECK(t.find_link({0, 1})->auto_rate);
}

TEST_CASE("loader rejects bad documents with a located message") {
  SUBCASE("unknown field") {
    json doc = minimal();
    doc["links"][0]["colour"] = "red";
    CHECK(load_error(doc).find("links[0]: unknown field 'colour'") != std::string::npos);
  }
  SUBCASE("missing capacity") {
    json doc = minimal();
    doc["links"][0].erase("capacity_mbps");
    CHECK(load_error(doc).find("missing field 'capacity_mbps'") != std::string::npos);
  }
  SUBCASE("wrong type") {
    json doc = minimal();
    doc["nodes"][0]["id"] = "zero";
    CHECK(load_error(doc).find("nodes[0]") != std::string::npos);
  }
  SUBCASE("bad direction") {
    json doc = minimal();
    doc["flows"][0]["direction"] = "sideways";
    CHECK(load_error(doc).find("direction") != std::string::npos);
  }
  SUBCASE("validation failure") {
    json doc = minimal();
    doc["flows"][0]["path"] = {1, 0, 1};
    CHECK_FALSE(load_error(doc).empty());
    CHECK_NOTHROW(parse_topology(doc, ".", false));
  }
}

TEST_CASE("malformed JSON file reports the position") {
  const auto file = std::filesystem::temp_directory_path() / "mmfair_bad.json";
  {
    std::ofstream out(file);
    out << "{\n  \"nodes\": [\n    {\"id\": 0,,}\n  ]\n}\n";
  }
  try {
    load_topology(file);
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::filesystem::remove(file);
  CHECK_THROWS_AS(load_topology(file), LoadError);
}

TEST_CASE("round trip through JSON keeps the model") {
  const Topology a = mmfair::testing::lamppost();
  const Topology b = parse_topology(topology_to_json(a), mmfair::testing::data_path("topologies"));
  REQUIRE(a.links.size() == b.links.size());
  for (const auto& l : a.links) CHECK(b.capacity(l.key()) == l.capacity_mbps);
  REQUIRE(a.flows.size() == b.flows.size());
  for (std::size_t i = 0; i < a.flows.size(); ++i) {
    CHECK(a.flows[i].path == b.flows[i].path);
    CHECK(a.flows[i].demand_mbps == b.flows[i].demand_mbps);
  }
  CHECK(a.segments() == b.segments());
}

TEST_CASE("shipped MCS file matches the built-in table") {
  const McsTable file = load_mcs_table(mmfair::testing::data_path("mcs_default.json"));
  const McsTable builtin = McsTable::default_table();
  REQUIRE(file.rows().size() == builtin.rows().size());
  for (std::size_t i = 0; i < file.rows().size(); ++i) {
    CHECK(file.rows()[i].min_snr_db == builtin.rows()[i].min_snr_db);
    CHECK(file.rows()[i].bitrate_mbps == builtin.rows()[i].bitrate_mbps);
  }
}
