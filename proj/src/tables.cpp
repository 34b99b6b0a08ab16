#include "covcode/tables.hpp"

#include <sstream>
#include <stdexcept>

#include "covcode/density.hpp"

namespace covcode {

namespace {

int64_t pow2(int e) {
  if (e < 0 || e > 62) throw std::domain_error("bound exponent out of range");
  return int64_t(1) << e;
}

[[noreturn]] void domain_err(Bound b, int r) {
  throw std::domain_error(bound_name(b) + " undefined at r = " +
                          std::to_string(r));
}

}  // namespace

std::string bound_name(Bound b) {
  static const char* names[] = {"phi",     "f",          "Phi",
                                "PhiHat",  "varphi",     "gamma",
                                "psi",     "Upsilon",    "UpsilonHat",
                                "fam4_known", "fam4_new", "fam4_sporadic"};
  return names[size_t(b)];
}

std::optional<Bound> parse_bound(const std::string& name) {
  for (int i = 0; i <= int(Bound::fam4_sporadic); ++i)
    if (bound_name(Bound(i)) == name) return Bound(i);
  return std::nullopt;
}

int64_t eval_bound(Bound b, int r) {
  switch (b) {
    case Bound::phi:
      if (r % 2 || r < 8) domain_err(b, r);
      return 27 * pow2(r / 2 - 4) - 1;
    case Bound::f:
      if (r % 2 == 0 || r < 3) domain_err(b, r);
      return 5 * pow2((r - 3) / 2) - 1;
    case Bound::Phi:
      if (r % 2 || !(r == 10 || r == 18 || r == 20 || r >= 28)) domain_err(b, r);
      return 26 * pow2(r / 2 - 4) - 1;
    case Bound::PhiHat:
      if (r != 22 && r != 24 && r != 26) domain_err(b, r);
      return 53 * pow2(r / 2 - 5) - 3;
    case Bound::varphi:
      if (r % 3 != 1 || r < 4) domain_err(b, r);
      return 3 * pow2((r - 1) / 3) - 1;
    case Bound::gamma:
      if (r % 3 != 2 || r < 41) domain_err(b, r);
      return 821 * pow2((r - 26) / 3) - 1;
    case Bound::psi:
      if (r % 3 || !(r == 15 || r >= 30)) domain_err(b, r);
      return 144 * pow2((r - 18) / 3) - 1;
    case Bound::Upsilon:
      if (!(r == 26 || (r % 3 == 2 && r >= 44))) domain_err(b, r);
      return 819 * pow2((r - 26) / 3) - 1;
    case Bound::UpsilonHat:
      if (r != 38 && r != 41) domain_err(b, r);
      return 820 * pow2((r - 26) / 3) - 2;
    case Bound::fam4_known:
      if (r % 4 || !(r == 20 || r >= 40)) domain_err(b, r);
      return 2944 * pow2(r / 4 - 10) - 2;
    case Bound::fam4_new:
      if (r % 4 || !(r == 40 || r >= 68)) domain_err(b, r);
      return 2943 * pow2(r / 4 - 10) - 1;
    case Bound::fam4_sporadic:
      if (r % 4 || r < 48) domain_err(b, r);
      return 2944 * pow2(r / 4 - 10) - 3;
  }
  domain_err(b, r);
}

int64_t delta(int r, int R) {
  switch (R) {
    case 2:
      if (r == 18 || r == 20 || (r >= 28 && r % 2 == 0))
        return pow2(r / 2 - 4);
      if (r == 22 || r == 24 || r == 26) return pow2(r / 2 - 5) + 2;
      break;
    case 3:
      if (r == 21) return 5;
      if (r == 26) return 2;
      if (r == 38) return 32;
      if (r == 41) return 33;
      if (r % 3 == 2 && r >= 44) return pow2((r - 23) / 3);
      break;
    case 4:
      if (r == 31) return 11;
      if (r % 4 == 0 && (r == 40 || r >= 68)) return pow2(r / 4 - 10) - 1;
      if (r % 4 == 0 && r >= 48 && r <= 64) return 1;
      break;
  }
  throw std::domain_error("no new bound at (r, R) = (" + std::to_string(r) +
                          ", " + std::to_string(R) + ")");
}

namespace {

struct RawRow {
  int r;
  const char* label;  // bound name or "" (cited constant)
  int64_t n;          // -1: compute from label
  bool exact;
  bool is_new;
  const char* p0;
  const char* p1;
  const char* p2;
  const char* delta;
  const char* n0;
  const char* m;
};

// Best-known lengths for R = 2 (known rows are cited constants; densities
// are never stored, always recomputed).
const RawRow kRows2[] = {
    {2, "", 2, true, false, "", "", "", "", "", ""},
    {3, "f", -1, true, false, "", "", "", "", "", ""},
    {4, "", 5, true, false, "", "", "", "", "", ""},
    {5, "f", -1, true, false, "", "", "", "", "", ""},
    {6, "", 13, true, false, "", "", "", "", "", ""},
    {7, "f", -1, true, false, "", "", "", "", "", ""},
    {8, "phi", -1, false, false, "", "", "", "", "", ""},
    {9, "f", -1, false, false, "", "", "", "", "", ""},
    {10, "Phi", -1, false, false, "11", "", "", "", "", ""},
    {11, "f", -1, false, false, "", "", "", "", "", ""},
    {12, "phi", -1, false, false, "", "", "", "", "", ""},
    {13, "f", -1, false, false, "", "", "", "", "", ""},
    {14, "phi", -1, false, false, "", "", "", "", "", ""},
    {15, "f", -1, false, false, "", "", "", "", "", ""},
    {16, "phi", -1, false, false, "", "", "", "", "", ""},
    {17, "f", -1, false, false, "", "", "", "", "", ""},
    {18, "Phi", -1, false, true, "2^5+1", "", "", "2^5", "51", "4"},
    {19, "f", -1, false, false, "", "", "", "", "", ""},
    {20, "Phi", -1, false, true, "2^6+1", "", "", "2^6", "51", "5"},
    {21, "f", -1, false, false, "", "", "", "", "", ""},
    {22, "PhiHat", -1, false, true, "", "", "", "66", "51", "6"},
    {23, "f", -1, false, false, "", "", "", "", "", ""},
    {24, "PhiHat", -1, false, true, "", "", "", "130", "51", "7"},
    {25, "f", -1, false, false, "", "", "", "", "", ""},
    {26, "PhiHat", -1, false, true, "", "", "", "258", "51", "8"},
    {27, "f", -1, false, false, "", "", "", "", "", ""},
    {28, "Phi", -1, false, true, "2^6+2", "", "", "2^10", "Phi(18)", "5"},
    {29, "f", -1, false, false, "", "", "", "", "", ""},
    {30, "Phi", -1, false, true, "2^7+1", "", "", "2^11", "Phi(18)", "6"},
    {31, "f", -1, false, false, "", "", "", "", "", ""},
    {32, "Phi", -1, false, true, "2^8+1", "", "", "2^12", "Phi(18)", "7"},
    {33, "f", -1, false, false, "", "", "", "", "", ""},
    {34, "Phi", -1, false, true, "2^8+1", "", "", "2^13", "Phi(20)", "7"},
    {35, "f", -1, false, false, "", "", "", "", "", ""},
    {36, "Phi", -1, false, true, "2^9+1", "", "", "2^14", "Phi(20)", "8"},
    {37, "f", -1, false, false, "", "", "", "", "", ""},
    {38, "Phi", -1, false, true, "2^10+1", "", "", "2^15", "Phi(20)", "9"},
    {39, "f", -1, false, false, "", "", "", "", "", ""},
    {40, "Phi", -1, false, true, "2^11+1", "", "", "2^16", "Phi(20)", "10"},
    {41, "f", -1, false, false, "", "", "", "", "", ""},
    {42, "Phi", -1, false, true, "2^8+1", "", "", "2^17", "Phi(28)", "7"},
    {43, "f", -1, false, false, "", "", "", "", "", ""},
    {44, "Phi", -1, false, true, "2^9+1", "", "", "2^18", "Phi(28)", "8"},
    {45, "f", -1, false, false, "", "", "", "", "", ""},
    {46, "Phi", -1, false, true, "2^9+1", "", "", "2^19", "Phi(30)", "8"},
    {47, "f", -1, false, false, "", "", "", "", "", ""},
    {48, "Phi", -1, false, true, "2^10+1", "", "", "2^20", "Phi(30)", "9"},
    {49, "f", -1, false, false, "", "", "", "", "", ""},
    {50, "Phi", -1, false, true, "2^10+1", "", "", "2^21", "Phi(32)", "9"},
    {51, "f", -1, false, false, "", "", "", "", "", ""},
    {52, "Phi", -1, false, true, "2^11+1", "", "", "2^22", "Phi(32)", "10"},
    {53, "f", -1, false, false, "", "", "", "", "", ""},
    {54, "Phi", -1, false, true, "2^11+1", "", "", "2^23", "Phi(34)", "10"},
    {55, "f", -1, false, false, "", "", "", "", "", ""},
    {56, "Phi", -1, false, true, "2^12+1", "", "", "2^24", "Phi(34)", "11"},
    {57, "f", -1, false, false, "", "", "", "", "", ""},
    {58, "Phi", -1, false, true, "2^12+1", "", "", "2^25", "Phi(36)", "11"},
    {59, "f", -1, false, false, "", "", "", "", "", ""},
    {60, "Phi", -1, false, true, "2^13+1", "", "", "2^26", "Phi(36)", "12"},
    {61, "f", -1, false, false, "", "", "", "", "", ""},
    {62, "Phi", -1, false, true, "2^13+1", "", "", "2^27", "Phi(38)", "12"},
    {63, "f", -1, false, false, "", "", "", "", "", ""},
    {64, "Phi", -1, false, true, "2^14+1", "", "", "2^28", "Phi(38)", "13"},
};

const RawRow kRows3[] = {
    {3, "", 3, true, false, "", "", "", "", "", ""},
    {4, "varphi", -1, true, false, "3", "5", "", "", "", ""},
    {5, "", 6, true, false, "", "", "", "", "", ""},
    {6, "", 7, true, false, "7", "", "", "", "", ""},
    {7, "varphi", -1, true, false, "7", "8", "", "", "", ""},
    {8, "", 14, true, false, "10", "", "", "", "", ""},
    {9, "", 18, true, false, "", "11", "", "", "", ""},
    {10, "", 22, false, false, "", "", "", "", "", ""},
    {11, "", 23, true, false, "23", "", "", "", "", ""},
    {12, "", 37, false, false, "", "", "", "", "", ""},
    {13, "", 52, false, false, "", "", "", "", "", ""},
    {14, "", 63, false, false, "", "", "", "", "", ""},
    {15, "psi", -1, false, false, "", "", "32", "", "", ""},
    {16, "varphi", -1, false, false, "", "", "", "", "", ""},
    {17, "", 126, false, false, "", "", "", "", "", ""},
    {18, "", 153, false, false, "", "", "", "", "", ""},
    {19, "", 205, false, false, "", "", "", "", "", ""},
    {20, "", 254, false, false, "", "", "", "", "", ""},
    {21, "", 303, false, true, "", "35", "", "5", "18", "4"},
    {22, "varphi", -1, false, false, "", "", "", "", "", ""},
    {23, "", 511, false, false, "", "", "", "", "", ""},
    {24, "", 618, false, false, "", "", "", "", "", ""},
    {25, "varphi", -1, false, false, "", "", "", "", "", ""},
    {26, "Upsilon", -1, false, true, "35", "35", "818", "2", "23", "5"},
    {27, "", 1215, false, false, "", "", "", "", "", ""},
    {28, "varphi", -1, false, false, "", "", "", "", "", ""},
    {29, "", 1642, false, false, "", "", "", "", "", ""},
    {30, "psi", -1, false, false, "", "", "", "", "", ""},
    {31, "varphi", -1, false, false, "", "", "", "", "", ""},
    {32, "", 3286, false, false, "", "", "", "", "", ""},
    {33, "psi", -1, false, false, "", "", "", "", "", ""},
    {34, "varphi", -1, false, false, "", "", "", "", "", ""},
    {35, "", 6574, false, false, "", "", "", "", "", ""},
    {36, "psi", -1, false, false, "", "", "", "", "", ""},
    {37, "varphi", -1, false, false, "", "", "", "", "", ""},
    {38, "UpsilonHat", -1, false, true, "57", "59", "", "2^5", "23", "9"},
    {39, "psi", -1, false, false, "", "", "", "", "", ""},
    {40, "varphi", -1, false, false, "", "", "", "", "", ""},
    {41, "UpsilonHat", -1, false, true, "89", "91", "", "33", "23", "10"},
    {42, "psi", -1, false, false, "", "", "", "", "", ""},
    {43, "varphi", -1, false, false, "", "", "", "", "", ""},
    {44, "Upsilon", -1, false, true, "", "2^7+3", "", "2^7", "818", "6"},
    {45, "psi", -1, false, false, "", "", "", "", "", ""},
    {46, "varphi", -1, false, false, "", "", "", "", "", ""},
    {47, "Upsilon", -1, false, true, "", "2^8+3", "", "2^8", "818", "7"},
    {48, "psi", -1, false, false, "", "", "", "", "", ""},
    {49, "varphi", -1, false, false, "", "", "", "", "", ""},
    {50, "Upsilon", -1, false, true, "", "2^9+3", "", "2^9", "818", "8"},
    {51, "psi", -1, false, false, "", "", "", "", "", ""},
    {52, "varphi", -1, false, false, "", "", "", "", "", ""},
    {53, "Upsilon", -1, false, true, "", "2^10+3", "", "2^10", "818", "9"},
    {54, "psi", -1, false, false, "", "", "", "", "", ""},
    {55, "varphi", -1, false, false, "", "", "", "", "", ""},
    {56, "Upsilon", -1, false, true, "", "", "819", "2^11", "818", "10"},
    {57, "psi", -1, false, false, "", "", "", "", "", ""},
    {58, "varphi", -1, false, false, "", "", "", "", "", ""},
    {59, "Upsilon", -1, false, true, "", "", "819", "2^12", "818", "11"},
    {60, "psi", -1, false, false, "", "", "", "", "", ""},
    {61, "varphi", -1, false, false, "", "", "", "", "", ""},
    {62, "Upsilon", -1, false, true, "", "", "819", "2^13", "818", "12"},
    {63, "psi", -1, false, false, "", "", "", "", "", ""},
    {64, "varphi", -1, false, false, "", "", "", "", "", ""},
};

}  // namespace

std::vector<TableRow> render_table(int R, int rmax) {
  std::vector<TableRow> rows;
  auto fill = [&](const RawRow* raw, size_t count) {
    for (size_t i = 0; i < count; ++i) {
      const RawRow& rr = raw[i];
      if (rr.r > rmax) break;
      TableRow t;
      t.r = rr.r;
      t.label = rr.label;
      t.n = rr.n >= 0 ? rr.n : eval_bound(*parse_bound(rr.label), rr.r);
      t.exact = rr.exact;
      t.is_new = rr.is_new;
      t.density = density(uint64_t(t.n), uint32_t(rr.r), uint32_t(R)).rendered;
      t.p0 = rr.p0;
      t.p1 = rr.p1;
      t.p2 = rr.p2;
      t.delta_s = rr.delta;
      t.n0 = rr.n0;
      t.m = rr.m;
      rows.push_back(std::move(t));
    }
  };
  switch (R) {
    case 2: fill(kRows2, std::size(kRows2)); break;
    case 3: fill(kRows3, std::size(kRows3)); break;
    case 4: {
      // no published table: the family arithmetic rows
      auto add = [&](int r, Bound b, bool isnew, const std::string& p3,
                     const std::string& n0, const std::string& m) {
        if (r > rmax) return;
        TableRow t;
        t.r = r;
        t.label = bound_name(b);
        t.n = eval_bound(b, r);
        t.is_new = isnew;
        t.density = density(uint64_t(t.n), uint32_t(r), 4).rendered;
        t.p2 = p3;  // reported in the p-column slot
        try {
          t.delta_s = std::to_string(delta(r, 4));
        } catch (const std::domain_error&) {
        }
        t.n0 = n0;
        t.m = m;
        rows.push_back(std::move(t));
      };
      if (31 <= rmax) {
        TableRow t;
        t.r = 31;
        t.n = 690;
        t.is_new = true;
        t.density = density(690, 31, 4).rendered;
        t.delta_s = "11";
        t.n0 = "19";
        t.m = "5";
        rows.push_back(std::move(t));
      }
      add(40, Bound::fam4_new, true, "77", "90", "5");
      if (44 <= rmax) add(44, Bound::fam4_known, false, "", "", "");
      for (int r = 48; r <= rmax && r <= 64; r += 4)
        add(r, Bound::fam4_sporadic, true, "", "90", std::to_string((r - 40) / 4));
      for (int r = 68; r <= rmax; r += 4)
        add(r, Bound::fam4_new, true, "78", "2942", std::to_string((r - 40) / 4));
      break;
    }
    default:
      throw std::invalid_argument("tables: R must be 2, 3, or 4");
  }
  return rows;
}

std::string format_table(const std::vector<TableRow>& rows, int R,
                         const std::string& format) {
  std::ostringstream out;
  if (format == "csv" || format == "json") {
    bool json = format == "json";
    if (json) out << "[\n";
    else out << "r,n,for,exact,new,density,p0,p1,p2,delta,n0,m\n";
    for (size_t i = 0; i < rows.size(); ++i) {
      const TableRow& t = rows[i];
      if (json) {
        Json j;
        j["r"] = t.r;
        j["n"] = t.n;
        if (!t.label.empty()) j["for"] = t.label;
        j["exact"] = t.exact;
        j["new"] = t.is_new;
        j["density"] = t.density;
        if (!t.p0.empty()) j["p0"] = t.p0;
        if (!t.p1.empty()) j["p1"] = t.p1;
        if (!t.p2.empty()) j["p2"] = t.p2;
        if (!t.delta_s.empty()) j["delta"] = t.delta_s;
        if (!t.n0.empty()) j["n0"] = t.n0;
        if (!t.m.empty()) j["m"] = t.m;
        out << "  " << j.dump() << (i + 1 < rows.size() ? "," : "") << "\n";
      } else {
        out << t.r << ',' << t.n << ',' << t.label << ',' << t.exact << ','
            << t.is_new << ',' << t.density << ',' << t.p0 << ',' << t.p1
            << ',' << t.p2 << ',' << t.delta_s << ',' << t.n0 << ',' << t.m
            << "\n";
      }
    }
    if (json) out << "]\n";
    return out.str();
  }
  // aligned text
  out << "covering codes, R = " << R << " (new rows marked *)\n";
  char buf[160];
  if (R == 2) {
    snprintf(buf, sizeof buf, "%4s %10s  %-7s %-9s %-8s %-8s %-8s %s\n", "r",
             "n", "for", "density", "p(H)", "Delta", "n0", "m");
    out << buf;
    for (const auto& t : rows) {
      snprintf(buf, sizeof buf, "%3d%c %10lld  %-7s %-9s %-8s %-8s %-8s %s\n",
               t.r, t.is_new ? '*' : ' ', (long long)t.n, t.label.c_str(),
               t.density.c_str(), t.p0.c_str(), t.delta_s.c_str(),
               t.n0.c_str(), t.m.c_str());
      out << buf;
    }
  } else {
    snprintf(buf, sizeof buf, "%4s %10s  %-10s %-9s %-7s %-7s %-6s %-7s %-6s %s\n",
             "r", "n", "for", "density", "p(0)", "p(1)", "p(2)", "Delta", "n0",
             "m");
    out << buf;
    for (const auto& t : rows) {
      snprintf(buf, sizeof buf,
               "%3d%c %10lld  %-10s %-9s %-7s %-7s %-6s %-7s %-6s %s\n", t.r,
               t.is_new ? '*' : ' ', (long long)t.n, t.label.c_str(),
               t.density.c_str(), t.p0.c_str(), t.p1.c_str(), t.p2.c_str(),
               t.delta_s.c_str(), t.n0.c_str(), t.m.c_str());
      out << buf;
    }
  }
  return out.str();
}

namespace {

ChainStep make_step(Workspace& ws, int r, Variant v, const std::string& start,
                    const std::string& start_partition, int m,
                    const std::string& inner, const std::string& inner_part,
                    int64_t n, uint32_t subsets, const std::string& pstr,
                    const std::string& chained) {
  ChainStep s;
  s.r = r;
  s.spec.variant = v;
  s.spec.start = start;
  s.spec.start_partition = start_partition;
  s.spec.m = m;
  s.spec.inner = inner;
  s.spec.inner_partition = inner_part;
  s.record_name = "r" + std::to_string(variant_radius(v)) + "-" + std::to_string(r);
  s.spec.out = s.record_name;
  s.expected_n = n;
  s.expected_subsets = subsets;
  s.expected_p = pstr;
  s.chained_partition = chained;
  s.parameter_only = !ws.find(start) || (!inner.empty() && !ws.find(inner));
  return s;
}

}  // namespace

std::vector<ChainStep> generate_family(Workspace& ws, int R, int rmax) {
  std::vector<ChainStep> steps;
  auto p2 = [](int e) { return uint32_t(1) << e; };
  switch (R) {
    case 2: {
      if (rmax >= 18)
        steps.push_back(make_step(ws, 18, Variant::QM4_2, "kr", "pkr-star", 4,
                                  "", "", eval_bound(Bound::Phi, 18),
                                  p2(5) + 1, "2^5+1", "derived"));
      if (rmax >= 20)
        steps.push_back(make_step(ws, 20, Variant::QM6_2, "kr", "pkr", 5, "",
                                  "", eval_bound(Bound::Phi, 20), p2(6) + 1,
                                  "2^6+1", "derived"));
      if (rmax >= 28)
        steps.push_back(make_step(ws, 28, Variant::QM5_2, "r2-18", "derived",
                                  5, "", "", eval_bound(Bound::Phi, 28),
                                  p2(6) + 2, "2^6+2", "derived"));
      // r = 30 onward: iterated QM6^2 with the starting codes and m the
      // tables list
      for (int r = 30; r <= rmax; r += 2) {
        int r0, m;
        if (r == 30) { r0 = 18; m = 6; }
        else if (r == 32) { r0 = 18; m = 7; }
        else if (r == 34) { r0 = 20; m = 7; }
        else if (r == 36) { r0 = 20; m = 8; }
        else if (r == 38) { r0 = 20; m = 9; }
        else if (r == 40) { r0 = 20; m = 10; }
        else {
          int k = r - 42;
          r0 = 28 + 2 * (k / 4);
          m = (r - r0) / 2;
        }
        steps.push_back(make_step(
            ws, r, Variant::QM6_2, "r2-" + std::to_string(r0), "derived", m,
            "", "", eval_bound(Bound::Phi, r), p2(m + 1) + 1,
            "2^" + std::to_string(m + 1) + "+1", "derived"));
      }
      break;
    }
    case 3: {
      if (rmax >= 26)
        steps.push_back(make_step(ws, 26, Variant::QM5_3, "golay", "trivial",
                                  5, "kr", "pkr", eval_bound(Bound::Upsilon, 26),
                                  35, "35", "derived-l1"));
      for (int m = 6; m <= 9; ++m) {
        int r = 26 + 3 * m;
        if (r > rmax) break;
        steps.push_back(make_step(
            ws, r, Variant::QM4_3, "r3-26", "derived-l1", m, "", "",
            eval_bound(Bound::Upsilon, r), p2(m + 1) + 3,
            "2^" + std::to_string(m + 1) + "+3", "derived-l1"));
      }
      for (int m = 10;; ++m) {
        int r = 26 + 3 * m;
        if (r > rmax) break;
        steps.push_back(make_step(ws, r, Variant::QM3_3, "r3-26", "trivial", m,
                                  "", "", eval_bound(Bound::Upsilon, r), 819,
                                  "819", "derived-l2"));
      }
      break;
    }
    case 4: {
      if (rmax >= 40)
        steps.push_back(make_step(ws, 40, Variant::QM1_4, "ext9070",
                                  "imported", 5, "", "",
                                  eval_bound(Bound::fam4_new, 40), 77, "77",
                                  "derived-l3"));
      for (int m = 7;; ++m) {
        int r = 40 + 4 * m;
        if (r > rmax) break;
        steps.push_back(make_step(ws, r, Variant::QM3_4, "r4-40", "derived-l3",
                                  m, "", "", eval_bound(Bound::fam4_new, r),
                                  78, "78", "derived-l3"));
      }
      break;
    }
    default:
      throw std::invalid_argument("family: R must be 2, 3, or 4");
  }
  return steps;
}

FamilyReport run_family(Workspace& ws, int R, int rmax, bool construct_records,
                        int verify_upto, uint64_t trials, uint64_t seed) {
  FamilyReport rep;
  auto steps = generate_family(ws, R, rmax);
  for (auto& step : steps) {
    FamilyStepReport sr;
    sr.step = step;
    if (step.parameter_only) {
      sr.note = "seed missing; parameter-only row";
      sr.pass = true;  // the arithmetic row itself stands
      rep.steps.push_back(std::move(sr));
      continue;
    }
    auto bad = admissibility_check(ws, step.spec);
    if (!bad.empty()) {
      sr.note = "inadmissible: " + bad.front();
      sr.pass = false;
      rep.pass = false;
      rep.steps.push_back(std::move(sr));
      continue;
    }
    if (!construct_records) {
      sr.pass = true;
      sr.note = "admissible (not constructed)";
      rep.steps.push_back(std::move(sr));
      continue;
    }
    std::shared_ptr<CodeRecord> rec = ws.find(step.record_name);
    if (!rec) rec = construct(ws, step.spec);
    sr.constructed = true;
    sr.n_ok = int64_t(rec->n()) == step.expected_n;
    const PartitionClaim* pc = rec->find_partition(step.chained_partition);
    sr.p_ok = pc && pc->subsets == step.expected_subsets;

    double work = combination_work(rec->n(), 0, R);
    bool exhaustible = rec->r() <= 32 && step.r <= verify_upto &&
                       work <= ws.config.budget.combination_limit();
    if (exhaustible) {
      auto cov = covering_radius_exhaustive(*rec->H, R, ws.config.budget);
      if (cov.refused) {
        sr.radius_check = "refused: " + cov.refusal;
        exhaustible = false;
      } else {
        bool ok = cov.verified_R == R;
        rec->radius_status = ok ? VerifyStatus::Exhaustive : VerifyStatus::Failed;
        sr.radius_check = ok ? "exhaustive R=" + std::to_string(cov.verified_R)
                             : "exhaustive FAILED";
        if (!ok) rep.pass = false;
        PartitionClaim* mpc = rec->find_partition(step.chained_partition);
        if (mpc && mpc->materializable(rec->n())) {
          auto map = mpc->subset_map(rec->n());
          auto pr = verify_partition(*rec->H, map, mpc->R, mpc->ell,
                                     ws.config.budget);
          if (!pr.refused) {
            mpc->status = pr.valid ? VerifyStatus::Exhaustive
                                   : VerifyStatus::Failed;
            sr.partition_check = pr.valid ? "exhaustive valid"
                                          : "exhaustive INVALID";
            if (!pr.valid) rep.pass = false;
          } else {
            sr.partition_check = "refused: " + pr.refusal;
          }
        }
      }
    }
    if (!exhaustible) {
      auto samp = decoder_sample_verify(ws, step.record_name, trials, seed,
                                        step.chained_partition);
      rec->radius_status = samp.pass ? VerifyStatus::Sampled : VerifyStatus::Failed;
      rec->radius_trials = trials;
      PartitionClaim* mpc = rec->find_partition(step.chained_partition);
      if (mpc) {
        mpc->status = samp.pass ? VerifyStatus::Sampled : VerifyStatus::Failed;
        mpc->sample_trials = trials;
      }
      sr.radius_check = samp.pass
                            ? "sampled " + std::to_string(trials) + " ok"
                            : "sampled FAILED at trial " +
                                  std::to_string(samp.failed_trial) + ": " +
                                  samp.failure;
      sr.partition_check = sr.radius_check;
      if (!samp.pass) rep.pass = false;
    }
    sr.pass = sr.n_ok && sr.p_ok &&
              rec->radius_status != VerifyStatus::Failed;
    if (!sr.n_ok) sr.note += "length mismatch;";
    if (!sr.p_ok) sr.note += "subset-count mismatch;";
    if (!sr.pass) rep.pass = false;
    rep.steps.push_back(std::move(sr));
  }
  return rep;
}

}  // namespace covcode
