#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gl2reps/table.hpp"

namespace gl2reps {

inline constexpr int kSchemaVersion = 1;

class TableFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// TableFileV1 as stored on disk, before it is tied to an enumerated group.
struct TableFile {
  RingSpec spec;
  std::uint64_t group_order = 0;
  bool certified = false;
  std::vector<std::array<std::string, 4>> class_reps;
  std::vector<std::size_t> class_sizes;

  struct Row {
    std::string label;
    int dim = 0;
    std::vector<Complex> values;
  };
  std::vector<Row> irreps;
};

nlohmann::json to_json(const CharacterTable& table, bool certified);
/// Throws TableFormatError on schema violations.
TableFile parse_table_file(const nlohmann::json& j);
/// Rebuild the classes from the stored representatives and attach the rows.
/// Throws TableFormatError if the file does not describe this group.
CharacterTable materialize(const TableFile& file, const GroupPtr& group);

nlohmann::json read_json(const std::filesystem::path& path);
/// Write to a temporary file in the same directory, then rename over `path`.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json classes_to_json(const ConjClasses& classes);
ClassesPtr classes_from_json(const nlohmann::json& j, const SubgroupPtr& whole);

/// On-disk cache keyed by (kind, flavor, p, r, schema version).
class Cache {
 public:
  explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  /// GL2REPS_CACHE, or ./.gl2reps-cache when unset.
  static Cache from_env();

  std::filesystem::path path_for(const std::string& kind, const RingSpec& spec) const;
  /// Missing, unreadable and stale-schema entries all read as empty.
  std::optional<nlohmann::json> load(const std::string& kind, const RingSpec& spec) const;
  void store(const std::string& kind, const RingSpec& spec, const nlohmann::json& j) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace gl2reps
