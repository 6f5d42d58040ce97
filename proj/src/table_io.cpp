#include "gl2reps/table_io.hpp"

#include <cstdlib>
#include <fstream>
#include <random>

namespace gl2reps {

using nlohmann::json;

namespace {

json spec_to_json(const RingSpec& spec) { return json{{"flavor", to_string(spec.flavor)}, {"p", spec.p}, {"r", spec.r}}; }

RingSpec spec_from_json(const json& j) {
  RingSpec spec{parse_flavor(j.at("flavor").get<std::string>()), j.at("p").get<int>(), j.at("r").get<int>()};
  if (!is_prime(spec.p) || spec.r < 1) throw TableFormatError("invalid ring spec in table file");
  return spec;
}

std::array<std::string, 4> format_rep(const MatrixGroup& G, Elem g) {
  const Mat2& m = G.matrix(g);
  const Ring& R = G.ring();
  return {R.format(m.e[0]), R.format(m.e[1]), R.format(m.e[2]), R.format(m.e[3])};
}

Elem parse_rep(const MatrixGroup& G, const std::array<std::string, 4>& rep) {
  Mat2 m;
  for (int i = 0; i < 4; ++i) m.e[i] = G.ring().parse(rep[i]);
  if (!G.contains(m)) throw TableFormatError("class representative is not invertible");
  return G.index_of(m);
}

}  // namespace

json to_json(const CharacterTable& table, bool certified) {
  const ConjClasses& cc = *table.classes;
  const MatrixGroup& G = cc.group->group();
  json classes = json::array();
  for (std::size_t c = 0; c < cc.count(); ++c) classes.push_back({{"rep", format_rep(G, cc.reps[c])}, {"size", cc.sizes[c]}});
  json irreps = json::array();
  for (const auto& row : table.irreps) {
    json values = json::array();
    for (const Complex& v : row.chi.values) values.push_back({v.real(), v.imag()});
    irreps.push_back({{"label", row.label}, {"dim", row.dim}, {"values", std::move(values)}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"spec", spec_to_json(table.spec)},
              {"group_order", table.group_order()},
              {"certified", certified},
              {"classes", std::move(classes)},
              {"irreps", std::move(irreps)}};
}

TableFile parse_table_file(const json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw TableFormatError("unsupported schema_version");
    TableFile f;
    f.spec = spec_from_json(j.at("spec"));
    f.group_order = j.at("group_order").get<std::uint64_t>();
    f.certified = j.value("certified", false);
    for (const auto& c : j.at("classes")) {
      f.class_reps.push_back(c.at("rep").get<std::array<std::string, 4>>());
      f.class_sizes.push_back(c.at("size").get<std::size_t>());
    }
    for (const auto& r : j.at("irreps")) {
      TableFile::Row row;
      row.label = r.at("label").get<std::string>();
      row.dim = r.at("dim").get<int>();
      for (const auto& v : r.at("values")) {
        if (v.size() != 2) throw TableFormatError("character value must be [re, im]");
        row.values.emplace_back(v[0].get<double>(), v[1].get<double>());
      }
      if (row.values.size() != f.class_reps.size()) throw TableFormatError("row length differs from class count");
      f.irreps.push_back(std::move(row));
    }
    return f;
  } catch (const json::exception& e) {
    throw TableFormatError(std::string("malformed table file: ") + e.what());
  }
}

CharacterTable materialize(const TableFile& file, const GroupPtr& group) {
  if (group->spec() != file.spec) throw TableFormatError("table file is for a different ring");
  if (group->order() != file.group_order) throw TableFormatError("group order in table file does not match");
  std::vector<Elem> reps;
  reps.reserve(file.class_reps.size());
  try {
    for (const auto& rep : file.class_reps) reps.push_back(parse_rep(*group, rep));
  } catch (const std::invalid_argument& e) {
    throw TableFormatError(e.what());
  }
  CharacterTable table;
  table.spec = file.spec;
  try {
    table.classes = classes_from_reps(Subgroup::whole(group), reps, file.class_sizes);
  } catch (const std::invalid_argument& e) {
    throw TableFormatError(e.what());
  }
  for (const auto& row : file.irreps) {
    IrrepRecord rec;
    rec.label = row.label;
    rec.dim = row.dim;
    rec.chi = ClassFunction{table.classes, row.values};
    table.irreps.push_back(std::move(rec));
  }
  return table;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TableFormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw TableFormatError(path.string() + ": " + e.what());
  }
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  std::random_device rd;
  const auto tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << j.dump(1) << '\n';
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json classes_to_json(const ConjClasses& classes) {
  const MatrixGroup& G = classes.group->group();
  json reps = json::array();
  for (Elem g : classes.reps) reps.push_back(format_rep(G, g));
  return json{{"schema_version", kSchemaVersion},
              {"spec", spec_to_json(G.spec())},
              {"reps", std::move(reps)},
              {"sizes", classes.sizes}};
}

ClassesPtr classes_from_json(const json& j, const SubgroupPtr& whole) {
  const MatrixGroup& G = whole->group();
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw TableFormatError("unsupported schema_version");
    if (spec_from_json(j.at("spec")) != G.spec()) throw TableFormatError("classes file is for a different ring");
    std::vector<Elem> reps;
    for (const auto& rep : j.at("reps")) reps.push_back(parse_rep(G, rep.get<std::array<std::string, 4>>()));
    const auto sizes = j.at("sizes").get<std::vector<std::size_t>>();
    return classes_from_reps(whole, reps, sizes);
  } catch (const json::exception& e) {
    throw TableFormatError(std::string("malformed classes file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw TableFormatError(e.what());
  }
}

Cache Cache::from_env() {
  const char* dir = std::getenv("GL2REPS_CACHE");
  return Cache(dir && *dir ? std::filesystem::path(dir) : std::filesystem::path(".gl2reps-cache"));
}

std::filesystem::path Cache::path_for(const std::string& kind, const RingSpec& spec) const {
  return dir_ / (kind + "-" + to_string(spec.flavor) + "-p" + std::to_string(spec.p) + "-r" + std::to_string(spec.r) +
                 "-v" + std::to_string(kSchemaVersion) + ".json");
}

std::optional<json> Cache::load(const std::string& kind, const RingSpec& spec) const {
  const auto path = path_for(kind, spec);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    json j = read_json(path);
    if (!j.is_object() || j.value("schema_version", -1) != kSchemaVersion) return std::nullopt;
    return j;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void Cache::store(const std::string& kind, const RingSpec& spec, const json& j) const {
  write_json_atomic(path_for(kind, spec), j);
}

}  // namespace gl2reps
