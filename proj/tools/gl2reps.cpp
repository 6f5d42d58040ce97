// gl2reps: character tables of GL_2(O/p^r).
//
//   gl2reps classify --flavor padic --p 2 --r 3 --out table.json
//   gl2reps oracle   --flavor padic --p 2 --r 3 --out oracle.json
//   gl2reps verify   --a table.json --b oracle.json

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gl2reps/driver.hpp"
#include "gl2reps/oracle.hpp"
#include "gl2reps/table_io.hpp"

namespace {

using namespace gl2reps;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct SpecArgs {
  std::string flavor = "padic";
  int p = 2;
  int r = 1;
  std::size_t cap = kDefaultCap;

  RingSpec spec() const {
    if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
    return RingSpec{parse_flavor(flavor), p, r};
  }
};

void add_spec_options(CLI::App* cmd, SpecArgs& args) {
  cmd->add_option("--flavor", args.flavor, "padic (Z/p^r) or laurent (F_p[t]/t^r)")
      ->check(CLI::IsMember({"padic", "laurent"}))
      ->capture_default_str();
  cmd->add_option("--p", args.p, "residue characteristic")->required()->check(CLI::Range(2, 1 << 15));
  cmd->add_option("--r", args.r, "level")->required()->check(CLI::Range(1, 64));
  cmd->add_option("--cap", args.cap, "largest group order to enumerate")->capture_default_str();
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << j.dump(1) << '\n';
  else
    write_json_atomic(out, j);
}

void check_cap(const RingSpec& spec, std::size_t cap) {
  if (gl2_order(spec) > cap)
    throw GroupTooLarge("GL_2 of order " + std::to_string(gl2_order(spec)) + " is too large; raise cap");
}

std::function<ClassesPtr(const SubgroupPtr&)> cached_classes(const std::optional<Cache>& cache) {
  return [cache](const SubgroupPtr& whole) {
    const RingSpec& spec = whole->group().spec();
    if (cache) {
      if (auto j = cache->load("classes", spec)) {
        try {
          return classes_from_json(*j, whole);
        } catch (const TableFormatError&) {
          // fall through and rebuild a corrupt entry
        }
      }
    }
    ClassesPtr cc = conjugacy_classes(whole);
    if (cache) cache->store("classes", spec, classes_to_json(*cc));
    return cc;
  };
}

void report(const Certificate& c) {
  std::cerr << "irreducibles: " << c.irreps << ", classes: " << c.classes << ", sum of squared degrees: "
            << c.sum_dim_sq << " (|G| = " << c.group_order << "), orthonormality residual: " << c.orthonormality
            << '\n';
  if (!c.ok()) std::cerr << "certificate FAILED: " << c.deficit() << '\n';
}

int run_classify(const SpecArgs& args, const std::string& out, bool use_cache) {
  const RingSpec spec = args.spec();
  check_cap(spec, args.cap);
  std::optional<Cache> cache;
  if (use_cache) cache = Cache::from_env();
  if (cache)
    if (auto hit = cache->load("table", spec); hit && hit->value("certified", false)) {
      std::cerr << "cache hit: " << cache->path_for("table", spec).string() << '\n';
      emit(*hit, out);
      return kExitOk;
    }

  ClassifyOptions options;
  options.cap = args.cap;
  options.classes_provider = cached_classes(cache);
  const ClassifyResult result = classify(spec, options);
  report(result.certificate);
  const bool certified = result.certificate.ok();
  const json j = to_json(result.table, certified);
  emit(j, out);
  if (cache && certified) cache->store("table", spec, j);
  return certified ? kExitOk : kExitFailed;
}

int run_oracle(const SpecArgs& args, std::uint64_t seed, const std::string& out, bool use_cache) {
  const RingSpec spec = args.spec();
  check_cap(spec, args.cap);
  std::optional<Cache> cache;
  if (use_cache) cache = Cache::from_env();
  const GroupPtr group = MatrixGroup::enumerate(spec, args.cap);
  const ClassesPtr classes = cached_classes(cache)(Subgroup::whole(group));
  OracleOptions options;
  options.seed = seed;
  const CharacterTable table = oracle_table(classes, options);
  const Certificate c = certify(table);
  report(c);
  emit(to_json(table, c.ok()), out);
  return c.ok() ? kExitOk : kExitFailed;
}

int run_verify(const std::string& a_path, const std::string& b_path, double tol, std::size_t cap) {
  TableFile a, b;
  try {
    a = parse_table_file(read_json(a_path));
    b = parse_table_file(read_json(b_path));
  } catch (const TableFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  if (a.spec != b.spec) {
    std::cerr << "error: spec mismatch (" << to_string(a.spec.flavor) << ", " << a.spec.p << ", " << a.spec.r
              << ") vs (" << to_string(b.spec.flavor) << ", " << b.spec.p << ", " << b.spec.r << ")\n";
    return kExitData;
  }
  check_cap(a.spec, cap);
  const GroupPtr group = MatrixGroup::enumerate(a.spec, cap);
  CharacterTable ta, tb;
  try {
    ta = materialize(a, group);
    tb = materialize(b, group);
  } catch (const TableFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  std::cerr << "a: ";
  report(certify(ta));
  std::cerr << "b: ";
  report(certify(tb));
  const OracleMatch m = match_tables(ta, tb);
  if (!m.bijective) {
    std::cout << "rows: " << ta.irreps.size() << " vs " << tb.irreps.size() << ", no bijection\n";
    return kExitFailed;
  }
  std::cout << "rows: " << ta.irreps.size() << ", max residual: " << m.residual << '\n';
  return m.residual < tol ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Irreducible characters of GL_2(O/p^r)"};
  app.require_subcommand(1);

  SpecArgs classify_args;
  std::string classify_out;
  bool no_cache = false;
  auto* classify_cmd = app.add_subcommand("classify", "construct the character table from orbits");
  add_spec_options(classify_cmd, classify_args);
  classify_cmd->add_option("--out", classify_out, "output file (default stdout)");
  classify_cmd->add_flag("--no-cache", no_cache, "ignore and do not update the cache");

  SpecArgs oracle_args;
  std::string oracle_out;
  std::uint64_t seed = OracleOptions{}.seed;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force character table from class sums");
  add_spec_options(oracle_cmd, oracle_args);
  oracle_cmd->add_option("--seed", seed, "seed for the random class-sum combination")->capture_default_str();
  oracle_cmd->add_option("--out", oracle_out, "output file (default stdout)");
  oracle_cmd->add_flag("--no-cache", no_cache, "ignore and do not update the cache");

  std::string a_path, b_path;
  double tol = 1e-6;
  std::size_t verify_cap = kDefaultCap;
  auto* verify_cmd = app.add_subcommand("verify", "match the rows of two tables");
  verify_cmd->add_option("--a", a_path, "first table")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--b", b_path, "second table")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--tol", tol, "largest accepted residual")->capture_default_str();
  verify_cmd->add_option("--cap", verify_cap, "largest group order to enumerate")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*classify_cmd) return run_classify(classify_args, classify_out, !no_cache);
    if (*oracle_cmd) return run_oracle(oracle_args, seed, oracle_out, !no_cache);
    return run_verify(a_path, b_path, tol, verify_cap);
  } catch (const GroupTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
