#include "covcode/registry.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace covcode {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

Registry::Registry(fs::path root, bool take_lock) : root_(std::move(root)) {
  fs::create_directories(root_);
  if (take_lock) {
    fs::path lock = root_ / "lock";
    std::ifstream probe(lock);
    if (probe.good())
      throw std::runtime_error("registry at " + root_.string() +
                               " is locked by another writer");
    write_file(lock, "covcode\n");
    locked_ = true;
  }
}

Registry::~Registry() {
  if (locked_) {
    std::error_code ec;
    fs::remove(root_ / "lock", ec);
  }
}

fs::path Registry::dir(const std::string& name) const { return root_ / name; }

std::vector<std::string> Registry::list() const {
  std::vector<std::string> out;
  if (!fs::exists(root_)) return out;
  for (const auto& e : fs::directory_iterator(root_))
    if (e.is_directory() && fs::exists(e.path() / "claims.json"))
      out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

bool Registry::contains(const std::string& name) const {
  return fs::exists(dir(name) / "claims.json");
}

void Registry::save(const CodeRecord& rec, uint64_t store_matrix_max_cols) {
  fs::path d = dir(rec.name);
  fs::create_directories(d / "partitions");
  write_file(d / "claims.json", rec.claims_json().dump(2) + "\n");
  if (rec.n() <= store_matrix_max_cols)
    write_file(d / "matrix.hex", emit_hex_matrix(*rec.H));
  for (const auto& pc : rec.partitions) {
    if (!pc.explicit_partition) continue;
    write_file(d / "partitions" / (pc.name + ".txt"),
               pc.explicit_partition->emit());
  }
  if (!rec.log.empty()) {
    std::ofstream out(d / "verify.log", std::ios::app);
    for (const auto& line : rec.log) out << line << "\n";
  }
}

void Registry::append_log(const std::string& name, const std::string& line) {
  std::ofstream out(dir(name) / "verify.log", std::ios::app);
  out << line << "\n";
}

std::shared_ptr<CodeRecord> Registry::load(Workspace& ws,
                                           const std::string& name) {
  if (ws.has(name)) return ws.get(name);
  fs::path d = dir(name);
  if (!fs::exists(d / "claims.json")) {
    // seeds are always available
    auto seeded = ws.find(name);
    if (seeded) return seeded;
    throw std::runtime_error("registry: no record '" + name + "'");
  }
  Json j = Json::parse(read_file(d / "claims.json"));

  std::shared_ptr<CodeRecord> rec;
  if (j.contains("provenance") && j["provenance"].contains("construction")) {
    ConstructionSpec spec =
        ConstructionSpec::from_json(j["provenance"]["construction"]);
    load(ws, spec.start);
    if (!spec.inner.empty()) load(ws, spec.inner);
    rec = construct(ws, spec);
  } else {
    rec = std::make_shared<CodeRecord>();
    rec->name = name;
    rec->H = parse_hex_matrix(read_file(d / "matrix.hex"));
    rec->provenance = j.value("provenance", Json::object());
    for (const auto& pj : j.value("partitions", Json::array())) {
      PartitionClaim pc;
      pc.name = pj.at("name").get<std::string>();
      pc.R = pj.at("R").get<int>();
      pc.ell = pj.at("ell").get<int>();
      pc.subsets = pj.at("subsets").get<uint32_t>();
      fs::path pf = d / "partitions" / (pc.name + ".txt");
      if (fs::exists(pf)) {
        Partition p = Partition::parse(read_file(pf));
        p.validate(rec->n());
        pc.explicit_partition = std::move(p);
      }
      rec->partitions.push_back(std::move(pc));
    }
  }
  rec->claimed_R = j.at("R").get<int>();
  rec->claimed_d = j.value("d", -1);
  rec->claimed_ell = j.value("ell", 0);
  if (j.contains("d_witness")) {
    rec->d_witness.clear();
    for (uint64_t c : j["d_witness"]) rec->d_witness.push_back(uint32_t(c - 1));
  }
  if (j.contains("zero_triple")) {
    rec->zero_triple.clear();
    for (uint64_t c : j["zero_triple"])
      rec->zero_triple.push_back(uint32_t(c - 1));
    rec->star_eligible = j.value("star_eligible", false);
  }
  rec->radius_status =
      verify_status_from_string(j.value("radius_status", "unverified"));
  rec->radius_trials = j.value("radius_trials", uint64_t(0));
  rec->d_status = verify_status_from_string(j.value("d_status", "unverified"));
  for (const auto& pj : j.value("partitions", Json::array())) {
    PartitionClaim* pc = rec->find_partition(pj.at("name").get<std::string>());
    if (pc) {
      pc->status = verify_status_from_string(pj.value("status", "unverified"));
      pc->sample_trials = pj.value("sample_trials", uint64_t(0));
    }
  }
  rec->check_invariants();
  ws.put(rec);
  return rec;
}

}  // namespace covcode
