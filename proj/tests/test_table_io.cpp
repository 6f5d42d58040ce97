#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gl2reps/driver.hpp"
#include "gl2reps/table_io.hpp"

using namespace gl2reps;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gl2reps-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("table round trip") {
  const RingSpec spec{Flavor::laurent, 2, 2};
  const ClassifyResult res = classify(spec);
  const auto j = to_json(res.table, res.certificate.ok());
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("certified") == true);

  const fs::path dir = scratch_dir("roundtrip");
  write_json_atomic(dir / "t.json", j);
  const TableFile f = parse_table_file(read_json(dir / "t.json"));
  CHECK(f.spec == spec);
  CHECK(f.group_order == 96);

  // Rebuild against a fresh enumeration; values must be bit-identical.
  const CharacterTable back = materialize(f, MatrixGroup::enumerate_serial(spec));
  REQUIRE(back.irreps.size() == res.table.irreps.size());
  for (std::size_t i = 0; i < back.irreps.size(); ++i) {
    CHECK(back.irreps[i].label == res.table.irreps[i].label);
    CHECK(back.irreps[i].dim == res.table.irreps[i].dim);
    CHECK(back.irreps[i].chi.values == res.table.irreps[i].chi.values);
  }
  CHECK(to_json(back, true) == j);
  CHECK(certify(back).ok());

  CHECK_THROWS_AS(materialize(f, MatrixGroup::enumerate({Flavor::padic, 2, 2})), TableFormatError);
}

TEST_CASE("malformed files") {
  const ClassifyResult res = classify({Flavor::padic, 2, 1});
  auto j = to_json(res.table, true);

  auto bad_version = j;
  bad_version["schema_version"] = 2;
  CHECK_THROWS_AS(parse_table_file(bad_version), TableFormatError);

  auto short_row = j;
  short_row["irreps"][0]["values"].erase(0);
  CHECK_THROWS_AS(parse_table_file(short_row), TableFormatError);

  auto missing = j;
  missing.erase("classes");
  CHECK_THROWS_AS(parse_table_file(missing), TableFormatError);

  auto singular = j;
  singular["classes"][0]["rep"] = std::array<std::string, 4>{"0", "0", "0", "0"};
  CHECK_THROWS_AS(materialize(parse_table_file(singular), MatrixGroup::enumerate({Flavor::padic, 2, 1})),
                  TableFormatError);

  const fs::path dir = scratch_dir("malformed");
  std::ofstream(dir / "junk.json") << "{ not json";
  CHECK_THROWS_AS(read_json(dir / "junk.json"), TableFormatError);
  CHECK_THROWS_AS(read_json(dir / "absent.json"), TableFormatError);
}

TEST_CASE("classes round trip") {
  const auto whole = Subgroup::whole(MatrixGroup::enumerate({Flavor::padic, 3, 2}));
  const auto cc = conjugacy_classes(whole);
  const auto back = classes_from_json(classes_to_json(*cc), whole);
  CHECK(back->reps == cc->reps);
  CHECK(back->sizes == cc->sizes);
  CHECK(back->class_of_pos == cc->class_of_pos);

  auto j = classes_to_json(*cc);
  j["sizes"][0] = 2;
  CHECK_THROWS_AS(classes_from_json(j, whole), TableFormatError);
}

TEST_CASE("cache") {
  const fs::path dir = scratch_dir("cache");
  const Cache cache(dir);
  const RingSpec spec{Flavor::padic, 2, 3};
  CHECK(cache.path_for("table", spec).filename() == "table-padic-p2-r3-v1.json");
  CHECK_FALSE(cache.load("table", spec).has_value());

  nlohmann::json j{{"schema_version", kSchemaVersion}, {"payload", 42}};
  cache.store("table", spec, j);
  REQUIRE(cache.load("table", spec).has_value());
  CHECK(cache.load("table", spec)->at("payload") == 42);

  // Stale schema and unreadable entries read as misses.
  cache.store("table", spec, nlohmann::json{{"schema_version", kSchemaVersion + 1}});
  CHECK_FALSE(cache.load("table", spec).has_value());
  std::ofstream(cache.path_for("table", spec)) << "garbage";
  CHECK_FALSE(cache.load("table", spec).has_value());

  // Atomic writes leave no temporary files behind.
  cache.store("classes", spec, j);
  for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() == ".json");
}
