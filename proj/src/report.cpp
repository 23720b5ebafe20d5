#include "pav/report.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "pav/version.hpp"

namespace pav {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{})
    throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json meta_json(uint64_t seed) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["rng"] = kRngName;
  j["seed"] = seed;
  return j;
}

nlohmann::ordered_json counts_json(const CountsReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["what"] = row.what;
    o["n"] = row.n;
    o["count"] = row.count;
    o["expected"] = row.expected;
    o["ok"] = row.ok;
    rows.push_back(std::move(o));
  }
  nlohmann::ordered_json j;
  j["rows"] = std::move(rows);
  j["pass"] = r.pass;
  return j;
}

std::string counts_csv(const CountsReport& r) {
  std::ostringstream os;
  os << "what,n,count,expected,ok\n";
  for (const auto& row : r.rows)
    os << row.what << ',' << row.n << ',' << row.count << ',' << row.expected
       << ',' << (row.ok ? 1 : 0) << '\n';
  return os.str();
}

nlohmann::ordered_json uniformity_json(
    const std::vector<UniformityResult>& rs) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rs) {
    nlohmann::ordered_json o;
    o["pattern"] = to_string(r.pat);
    o["n"] = r.n;
    o["draws"] = r.draws;
    o["cells"] = r.cells;
    o["chi2"] = r.chi2;
    o["critical"] = r.critical;
    o["all_avoid"] = r.all_avoid;
    o["pass"] = r.pass;
    rows.push_back(std::move(o));
  }
  nlohmann::ordered_json j;
  j["rows"] = std::move(rows);
  return j;
}

std::string uniformity_csv(const std::vector<UniformityResult>& rs) {
  std::ostringstream os;
  os << "pattern,n,draws,cells,chi2,critical,all_avoid,pass\n";
  for (const auto& r : rs)
    os << to_string(r.pat) << ',' << r.n << ',' << r.draws << ',' << r.cells
       << ',' << format_double(r.chi2) << ',' << format_double(r.critical)
       << ',' << (r.all_avoid ? 1 : 0) << ',' << (r.pass ? 1 : 0) << '\n';
  return os.str();
}

nlohmann::ordered_json positional_json(const PositionalCheck& r) {
  nlohmann::ordered_json j;
  j["pattern"] = to_string(r.pat);
  j["n"] = r.n;
  j["mode"] = r.exact ? "exact" : "monte-carlo";
  if (!r.exact) j["trials"] = r.trials;
  j["observed"] = r.observed;
  j["expected"] = r.expected;
  j["max_abs_error"] = r.max_abs_error;
  return j;
}

std::string positional_csv(const PositionalCheck& r) {
  std::ostringstream os;
  os << "position,observed,expected\n";
  for (size_t j = 0; j < r.observed.size(); ++j)
    os << (j + 1) << ',' << format_double(r.observed[j]) << ','
       << format_double(r.expected[j]) << '\n';
  return os.str();
}

nlohmann::ordered_json escape_json(Pattern pat, uint64_t j, uint64_t L,
                                   const std::vector<EscapeRow>& rows) {
  nlohmann::ordered_json out;
  out["pattern"] = to_string(pat);
  out["coordinate"] = j;
  out["level"] = L;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json o;
    o["n"] = row.n;
    o["hits"] = row.hits;
    o["trials"] = row.trials;
    o["p"] = row.p;
    arr.push_back(std::move(o));
  }
  out["rows"] = std::move(arr);
  return out;
}

std::string escape_csv(const std::vector<EscapeRow>& rows) {
  std::ostringstream os;
  os << "n,hits,trials,p\n";
  for (const auto& row : rows)
    os << row.n << ',' << row.hits << ',' << row.trials << ','
       << format_double(row.p) << '\n';
  return os.str();
}

nlohmann::ordered_json cf_json(uint64_t n, uint64_t trials, XMechanism mech,
                               const std::vector<CFPoint>& pts) {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["trials"] = trials;
  j["x_mech"] = mech == XMechanism::Walk ? "walk" : "inversion";
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : pts) {
    nlohmann::ordered_json o;
    o["t"] = p.t;
    o["empirical_re"] = p.empirical.real();
    o["empirical_im"] = p.empirical.imag();
    o["reference_re"] = p.reference.real();
    o["reference_im"] = p.reference.imag();
    o["abs_error"] = p.abs_error;
    arr.push_back(std::move(o));
  }
  j["points"] = std::move(arr);
  return j;
}

std::string cf_csv(const std::vector<CFPoint>& pts) {
  std::ostringstream os;
  os << "t,empirical_re,empirical_im,reference_re,reference_im,abs_error\n";
  for (const auto& p : pts)
    os << format_double(p.t) << ',' << format_double(p.empirical.real()) << ','
       << format_double(p.empirical.imag()) << ','
       << format_double(p.reference.real()) << ','
       << format_double(p.reference.imag()) << ','
       << format_double(p.abs_error) << '\n';
  return os.str();
}

nlohmann::ordered_json convergence_json(const ConvergenceReport& r) {
  nlohmann::ordered_json j;
  j["pattern"] = to_string(r.pat);
  j["cap"] = r.cap;
  j["trials"] = r.trials;
  j["coordinates"] = r.i_list;
  j["n_grid"] = r.n_grid;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json o;
    o["i"] = c.i;
    o["n"] = c.n;
    o["tv"] = c.tv;
    arr.push_back(std::move(o));
  }
  j["cells"] = std::move(arr);
  return j;
}

std::string convergence_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "i,n,tv\n";
  for (const auto& c : r.cells)
    os << c.i << ',' << c.n << ',' << format_double(c.tv) << '\n';
  return os.str();
}

}  // namespace pav
