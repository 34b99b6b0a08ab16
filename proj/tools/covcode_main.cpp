// covcode: constructions, verification, and tables for binary covering codes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "covcode/construct.hpp"
#include "covcode/density.hpp"
#include "covcode/registry.hpp"
#include "covcode/search.hpp"
#include "covcode/seeds.hpp"
#include "covcode/tables.hpp"

namespace fs = std::filesystem;
using namespace covcode;

namespace {

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct Cli {
  Workspace ws;
  std::optional<Registry> registry;
  std::string registry_path;
  std::string config_path;
  int threads = 0;
  bool heavy = false;

  void open_registry(bool writer = true) {
    if (registry) return;
    std::string root = registry_path;
    if (root.empty()) {
      const char* env = std::getenv("COVCODE_REGISTRY");
      root = env ? env : "registry";
    }
    registry.emplace(fs::path(root), writer);
  }

  void load_config() {
    ws.config.budget.threads = threads;
    ws.config.budget.heavy = heavy;
    if (config_path.empty()) return;
    Json j = Json::parse(read_file(config_path));
    for (auto& [key, val] : j.items()) {
      if (key.rfind("gf2m.poly.", 0) == 0) {
        int m = std::stoi(key.substr(10));
        uint32_t poly = val.is_string()
                            ? uint32_t(std::stoul(val.get<std::string>(), nullptr, 0))
                            : val.get<uint32_t>();
        ws.config.field_poly[m] = poly;
      } else if (key == "verifier.budget.combinations") {
        ws.config.budget.max_combinations = val.get<double>();
      } else if (key == "verifier.budget.bitmap_mb") {
        ws.config.budget.max_bitmap_bytes = val.get<uint64_t>() << 20;
      } else if (key == "registry.store_matrix_max_cols") {
        ws.config.store_matrix_max_cols = val.get<uint64_t>();
      } else {
        throw std::runtime_error("unknown config key: " + key);
      }
    }
  }

  // registry name, seed name, or path to a hex matrix file
  std::shared_ptr<CodeRecord> resolve(const std::string& in) {
    if (ws.has(in)) return ws.get(in);
    if (fs::exists(in) && !fs::is_directory(in)) {
      auto rec = std::make_shared<CodeRecord>();
      rec->name = fs::path(in).stem().string();
      rec->H = parse_hex_matrix(read_file(in));
      rec->claimed_R = -1;
      ws.put(rec);
      return rec;
    }
    if (registry_has(in)) {
      open_registry(false);
      return registry->load(ws, in);
    }
    return ws.get(in);  // seeds; throws otherwise
  }

  bool registry_has(const std::string& name) {
    std::string root = registry_path;
    if (root.empty()) {
      const char* env = std::getenv("COVCODE_REGISTRY");
      root = env ? env : "registry";
    }
    return fs::exists(fs::path(root) / name / "claims.json");
  }

  void persist(const CodeRecord& rec) {
    open_registry();
    registry->save(rec, ws.config.store_matrix_max_cols);
  }
};

void print_coverage(const CoverageReport& rep, int R_claimed) {
  if (rep.refused) {
    std::cout << "REFUSED: " << rep.refusal << "\n";
    return;
  }
  if (rep.verified_R >= 0)
    std::cout << "covering radius = " << rep.verified_R << " (exhaustive)\n";
  else
    std::cout << "NOT covered within bound; first uncovered syndrome = "
              << rep.uncovered_witness << "\n";
  std::cout << "layer counts:";
  for (size_t i = 0; i < rep.layer_counts.size(); ++i)
    std::cout << " " << i << ":" << rep.layer_counts[i];
  std::cout << "\nelapsed " << rep.seconds << " s\n";
  if (R_claimed >= 0 && rep.verified_R >= 0)
    std::cout << (rep.verified_R == R_claimed ? "matches claim\n"
                                              : "CLAIM MISMATCH\n");
}

int verify_seed(Cli& cli, const std::string& name) {
  auto rec = cli.resolve(name);
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "  PASS " : "  FAIL ") << what << "\n";
    if (!ok) ++failures;
  };
  VerifyBudget b = cli.ws.config.budget;
  auto cov = covering_radius_exhaustive(*rec->H, rec->claimed_R, b);
  check(!cov.refused && cov.verified_R == rec->claimed_R,
        "covering radius = " + std::to_string(rec->claimed_R));
  if (!cov.refused && cov.verified_R == rec->claimed_R)
    rec->radius_status = VerifyStatus::Exhaustive;
  if (rec->claimed_d >= 0) {
    auto d = min_distance_upto(*rec->H, rec->claimed_d, b);
    check(d.d == rec->claimed_d, "minimum distance = " +
                                     std::to_string(rec->claimed_d));
    if (d.d == rec->claimed_d) rec->d_status = VerifyStatus::Exhaustive;
  }
  if (!rec->d_witness.empty() && rec->r() <= 64) {
    uint64_t x = 0;
    for (uint32_t c : rec->d_witness) x ^= rec->H->column_u64(c);
    check(x == 0, "dependent witness sums to zero");
  }
  for (auto& pc : rec->partitions) {
    auto map = pc.subset_map(rec->n());
    auto pr = verify_partition(*rec->H, map, pc.R, pc.ell, b);
    check(!pr.refused && pr.valid,
          "(" + std::to_string(pc.R) + "," + std::to_string(pc.ell) +
              ")-partition '" + pc.name + "' with " +
              std::to_string(pc.subsets) + " subsets");
    if (!pr.refused)
      pc.status = pr.valid ? VerifyStatus::Exhaustive : VerifyStatus::Failed;
  }
  if (name == "kr") {
    auto s3 = sum3_cover_check(*rec->H, b);
    check(s3.valid, "every syndrome is a sum of exactly 3 columns");
  }
  rec->log.push_back("seed verify: " + std::string(failures ? "FAIL" : "PASS"));
  std::cout << (failures ? "FAIL\n" : "PASS\n");
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructions and verification for binary covering codes"};
  app.require_subcommand(1);
  Cli cli;

  app.add_option("--registry", cli.registry_path,
                 "registry directory (default $COVCODE_REGISTRY or ./registry)");
  app.add_option("--config", cli.config_path, "JSON config file");
  app.add_option("--threads", cli.threads, "worker threads (0 = auto)");
  app.add_flag("--heavy", cli.heavy,
               "acknowledge heavy runs: lifts work/memory budgets");

  // ---- seed ----
  auto* seed = app.add_subcommand("seed", "built-in seed codes");
  auto* seed_list = seed->add_subcommand("list", "list seeds");
  auto* seed_show = seed->add_subcommand("show", "print a seed record");
  std::string seed_name;
  bool seed_emit = false;
  seed_show->add_option("name", seed_name)->required();
  seed_show->add_flag("--emit", seed_emit, "print the matrix in hex format");
  auto* seed_verify = seed->add_subcommand("verify", "verify bundled claims");
  std::string seed_vname;
  seed_verify->add_option("name", seed_vname)->required();
  auto* seed_import = seed->add_subcommand("import", "register an external matrix");
  std::string imp_name, imp_matrix, imp_partition;
  int imp_R = -1, imp_d = -1, imp_ell = 0, imp_pR = 0, imp_pell = 0;
  seed_import->add_option("name", imp_name)->required();
  seed_import->add_option("--matrix", imp_matrix, "hex matrix file")->required();
  seed_import->add_option("--R", imp_R, "claimed covering radius")->required();
  seed_import->add_option("--d", imp_d, "claimed minimum distance");
  seed_import->add_option("--ell", imp_ell, "claimed ell");
  seed_import->add_option("--partition", imp_partition, "partition file");
  seed_import->add_option("--pR", imp_pR, "partition R");
  seed_import->add_option("--pell", imp_pell, "partition ell");

  // ---- construct ----
  auto* con = app.add_subcommand("construct", "run a QM construction");
  std::string c_variant, c_start, c_partition, c_inner, c_inner_part, c_out;
  int c_m = 0;
  con->add_option("--variant", c_variant, "QM tag, e.g. QM4^2 or qm4-2")->required();
  con->add_option("--start", c_start, "starting record")->required();
  con->add_option("--m", c_m, "extension degree")->required();
  con->add_option("--partition", c_partition, "starting partition claim");
  con->add_option("--inner", c_inner, "inner R=2 record (D4/D5)");
  con->add_option("--inner-partition", c_inner_part, "inner partition claim");
  con->add_option("--out", c_out, "output record name");

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "ground-truth verification");
  std::string v_what, v_in, v_partition, v_mode = "exhaustive";
  uint64_t v_trials = 1000000, v_seed = 1;
  int v_rmax = -1, v_limit = 3;
  ver->add_option("what", v_what, "radius | distance | partition | sum3")
      ->required();
  ver->add_option("--in", v_in, "record name or matrix file")->required();
  ver->add_option("--partition", v_partition, "claim name or partition file");
  ver->add_option("--mode", v_mode, "exhaustive | sample");
  ver->add_option("--trials", v_trials, "sampling trials");
  ver->add_option("--seed", v_seed, "sampling seed");
  ver->add_option("--rmax", v_rmax, "radius bound (default: claimed R)");
  ver->add_option("--limit", v_limit, "distance search limit");

  // ---- search-partition ----
  auto* sp = app.add_subcommand("search-partition", "look for small (R,l)-partitions");
  std::string sp_in, sp_strategy = "greedy", sp_out;
  int sp_R = 2, sp_ell = 0;
  uint32_t sp_max = 0;
  double sp_budget = 60;
  uint64_t sp_seed = 1;
  sp->add_option("--in", sp_in)->required();
  sp->add_option("--R", sp_R)->required();
  sp->add_option("--ell", sp_ell);
  sp->add_option("--max-subsets", sp_max);
  sp->add_option("--budget", sp_budget, "seconds");
  sp->add_option("--seed", sp_seed);
  sp->add_option("--strategy", sp_strategy, "greedy | anneal");
  sp->add_option("--out", sp_out, "write the partition to a file");

  // ---- tables ----
  auto* tab = app.add_subcommand("tables", "length-function bound tables");
  int t_R = 2, t_rmax = 64;
  std::string t_format = "text";
  tab->add_option("--R", t_R)->required();
  tab->add_option("--rmax", t_rmax);
  tab->add_option("--format", t_format, "text | csv | json");

  // ---- family ----
  auto* fam = app.add_subcommand("family", "iterated construction chains");
  int f_R = 2, f_rmax = 64, f_verify_upto = -1;
  bool f_construct = false;
  uint64_t f_trials = 1000000, f_seed = 1;
  fam->add_option("--R", f_R)->required();
  fam->add_option("--rmax", f_rmax);
  fam->add_flag("--construct", f_construct, "build the records");
  fam->add_option("--verify-upto", f_verify_upto,
                  "exhaustive verification frontier (default 28/26/21)");
  fam->add_option("--trials", f_trials, "sampling trials beyond the frontier");
  fam->add_option("--seed", f_seed);

  // ---- export ----
  auto* exp = app.add_subcommand("export", "emit a record");
  std::string e_name, e_format = "hex", e_out;
  exp->add_option("name", e_name)->required();
  exp->add_option("--format", e_format, "hex | tokens");
  exp->add_option("--out", e_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    cli.load_config();

    if (seed_list->parsed()) {
      for (const auto& s : seed_names()) {
        auto rec = cli.ws.get(s);
        std::cout << s << ": [" << rec->n() << "," << rec->n() - rec->r();
        if (rec->claimed_d >= 0) std::cout << "," << rec->claimed_d;
        std::cout << "]_2 R=" << rec->claimed_R << "\n";
      }
      return 0;
    }
    if (seed_show->parsed()) {
      auto rec = cli.resolve(seed_name);
      std::cout << rec->claims_json().dump(2) << "\n";
      if (seed_emit) std::cout << emit_hex_matrix(*rec->H);
      return 0;
    }
    if (seed_verify->parsed()) {
      int rcode = verify_seed(cli, seed_vname);
      auto rec = cli.ws.get(seed_vname);
      cli.persist(*rec);
      return rcode;
    }
    if (seed_import->parsed()) {
      std::string ptext =
          imp_partition.empty() ? "" : read_file(imp_partition);
      auto rec = import_external(imp_name, read_file(imp_matrix), imp_R, imp_d,
                                 imp_ell, ptext, imp_pR, imp_pell);
      cli.ws.put(rec);
      cli.persist(*rec);
      std::cout << "imported " << imp_name << ": [" << rec->n() << ","
                << rec->n() - rec->r() << "]_2, claims R=" << imp_R
                << " (unverified)\n";
      return 0;
    }
    if (con->parsed()) {
      ConstructionSpec spec;
      auto v = parse_variant(c_variant);
      if (!v) throw std::runtime_error("unknown variant tag " + c_variant);
      spec.variant = *v;
      spec.start = c_start;
      spec.m = c_m;
      spec.inner = c_inner;
      spec.inner_partition = c_inner_part.empty() && !c_inner.empty()
                                 ? cli.resolve(c_inner)->partitions.front().name
                                 : c_inner_part;
      spec.out = c_out;
      cli.resolve(c_start);
      spec.start_partition = c_partition.empty()
                                 ? cli.ws.get(c_start)->partitions.front().name
                                 : c_partition;
      auto rec = construct(cli.ws, spec);
      cli.persist(*rec);
      std::cout << rec->name << ": [" << rec->n() << ","
                << rec->n() - rec->r() << ",3]_2 claimed R=" << rec->claimed_R
                << " l=" << rec->claimed_ell << "\n";
      for (const auto& pc : rec->partitions)
        std::cout << "  partition " << pc.name << ": (" << pc.R << ","
                  << pc.ell << "), " << pc.subsets << " subsets\n";
      return 0;
    }
    if (ver->parsed()) {
      auto rec = cli.resolve(v_in);
      VerifyBudget b = cli.ws.config.budget;
      if (v_what == "radius") {
        int rmax = v_rmax > 0 ? v_rmax : std::max(rec->claimed_R, 1);
        if (v_mode == "sample") {
          auto rep = decoder_sample_verify(cli.ws, rec->name, v_trials, v_seed,
                                           "", cli.threads);
          std::cout << (rep.pass ? "PASS" : "FAIL") << " " << rep.trials
                    << " trials, " << rep.seconds << " s\n";
          if (!rep.pass) std::cout << rep.failure << "\n";
          if (rep.pass && rec->radius_status == VerifyStatus::Unverified) {
            rec->radius_status = VerifyStatus::Sampled;
            rec->radius_trials = rep.trials;
          }
          return rep.pass ? 0 : 1;
        }
        auto rep = covering_radius_exhaustive(*rec->H, rmax, b);
        print_coverage(rep, rec->claimed_R);
        if (!rep.refused && rep.verified_R == rec->claimed_R)
          rec->radius_status = VerifyStatus::Exhaustive;
        return rep.refused || rep.verified_R < 0 ? 1 : 0;
      }
      if (v_what == "distance") {
        auto rep = min_distance_upto(*rec->H, v_limit, b);
        if (rep.refused) {
          std::cout << "REFUSED: " << rep.refusal << "\n";
          return 1;
        }
        if (rep.d < 0) {
          std::cout << "d > " << v_limit << "\n";
        } else {
          std::cout << "d = " << rep.d << ", witness columns";
          for (uint32_t c : rep.witness) std::cout << " " << c + 1;
          std::cout << "\n";
        }
        return 0;
      }
      if (v_what == "partition") {
        const PartitionClaim* pc = rec->find_partition(v_partition);
        PartitionClaim file_claim;
        if (!pc) {
          if (!fs::exists(v_partition))
            throw std::runtime_error("no partition claim or file: " + v_partition);
          Partition p = Partition::parse(read_file(v_partition));
          p.validate(rec->n());
          file_claim.name = v_partition;
          file_claim.R = rec->claimed_R;
          file_claim.ell = rec->claimed_ell;
          file_claim.subsets = uint32_t(p.size());
          file_claim.explicit_partition = std::move(p);
          pc = &file_claim;
        }
        if (v_mode == "sample") {
          auto rep = decoder_sample_verify(cli.ws, rec->name, v_trials, v_seed,
                                           pc->name, cli.threads);
          std::cout << (rep.pass ? "PASS" : "FAIL") << " " << rep.trials
                    << " trials, " << rep.seconds << " s\n";
          return rep.pass ? 0 : 1;
        }
        auto map = pc->subset_map(rec->n());
        auto rep = verify_partition(*rec->H, map, pc->R, pc->ell, b);
        if (rep.refused) {
          std::cout << "REFUSED: " << rep.refusal << "\n";
          return 1;
        }
        std::cout << (rep.valid ? "valid (" : "INVALID (witness syndrome ")
                  << (rep.valid ? std::to_string(pc->subsets) + " subsets)"
                                : std::to_string(rep.witness) + ")")
                  << ", " << rep.seconds << " s\n";
        return rep.valid ? 0 : 1;
      }
      if (v_what == "sum3") {
        auto rep = sum3_cover_check(*rec->H, b);
        if (rep.refused) {
          std::cout << "REFUSED: " << rep.refusal << "\n";
          return 1;
        }
        std::cout << (rep.valid ? "valid: every syndrome is a sum of exactly "
                                  "3 distinct columns\n"
                                : "INVALID: witness syndrome " +
                                      std::to_string(rep.witness) + "\n");
        return rep.valid ? 0 : 1;
      }
      throw std::runtime_error("unknown verify target " + v_what);
    }
    if (sp->parsed()) {
      auto rec = cli.resolve(sp_in);
      SearchConfig cfg;
      cfg.target_R = sp_R;
      cfg.target_ell = sp_ell;
      cfg.max_subsets = sp_max;
      cfg.budget_seconds = sp_budget;
      cfg.rng_seed = sp_seed;
      cfg.strategy = sp_strategy == "anneal" ? SearchConfig::Strategy::Annealing
                                             : SearchConfig::Strategy::GreedyMerge;
      auto res = search_partition(*rec->H, cfg);
      std::cout << (res.found ? "found" : "budget exhausted; best") << " ("
                << sp_R << "," << sp_ell << ")-partition with "
                << res.best_subsets << " subsets after " << res.evaluations
                << " evaluations, " << res.seconds << " s\n";
      if (!sp_out.empty()) {
        std::ofstream out(sp_out);
        out << res.best.emit();
      } else {
        std::cout << res.best.emit();
      }
      return res.found || sp_max == 0 ? 0 : 1;
    }
    if (tab->parsed()) {
      auto rows = render_table(t_R, t_rmax);
      std::cout << format_table(rows, t_R, t_format);
      return 0;
    }
    if (fam->parsed()) {
      int upto = f_verify_upto;
      if (upto < 0) upto = f_R == 2 ? 28 : f_R == 3 ? 26 : 21;
      if (f_R == 4 && f_construct && !cli.ws.has("ext9070") &&
          cli.registry_has("ext9070")) {
        cli.open_registry(false);
        cli.registry->load(cli.ws, "ext9070");
      }
      auto rep = run_family(cli.ws, f_R, f_rmax, f_construct, upto, f_trials,
                            f_seed);
      for (const auto& s : rep.steps) {
        std::cout << (s.pass ? "PASS " : "FAIL ") << "r=" << s.step.r << " "
                  << variant_name(s.step.spec.variant) << "(" << s.step.spec.start
                  << ", m=" << s.step.spec.m << ") n=" << s.step.expected_n
                  << " p=" << s.step.expected_p;
        if (!s.radius_check.empty()) std::cout << " | " << s.radius_check;
        if (!s.note.empty()) std::cout << " | " << s.note;
        std::cout << "\n";
        if (s.constructed) {
          auto rec = cli.ws.get(s.step.record_name);
          cli.persist(*rec);
        }
      }
      std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
      return rep.pass ? 0 : 1;
    }
    if (exp->parsed()) {
      auto rec = cli.resolve(e_name);
      if (rec->n() > (uint64_t(1) << 24))
        throw std::runtime_error(
            "record too long to emit; it is reconstructable from provenance");
      std::string text = e_format == "tokens"
                             ? emit_hex_tokens(*rec->H, rec->r()) + "\n"
                             : emit_hex_matrix(*rec->H);
      if (e_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(e_out, std::ios::binary);
        out << text;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
