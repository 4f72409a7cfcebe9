#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "chernoff/cli.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/hash.hpp"

namespace chernoff::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Layout { Table, Ecdf, Gaps, OracleGaps, Probe, Localization, Fit };

const std::map<std::string, Layout>& layouts() {
  static const std::map<std::string, Layout> m = {
      {"t,prob,n_reps,seed,spec_hash", Layout::Table},
      {"n,t,prob", Layout::Ecdf},
      {"n,E_n", Layout::Gaps},
      {"n,ks,gap", Layout::OracleGaps},
      {"eps,level,envelope,ratio,n_samples,b", Layout::Probe},
      {"n,K_t,K_tau,t_n,tau_n,freq_stat_exceeds,freq_touch_exceeds,n_reps", Layout::Localization},
      {"n,E_n,fitted,residual", Layout::Fit},
  };
  return m;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Checker {
 public:
  explicit Checker(VerifyReport& r) : r_(r) {}

  void fail(const fs::path& file, std::size_t line, const std::string& msg) {
    r_.ok = false;
    r_.problems.push_back(file.string() + (line ? ":" + std::to_string(line) : "") + ": " + msg);
  }

  // Returns the spec hash from the provenance line, empty on failure.
  std::string csv(const fs::path& file) {
    r_.checked.push_back(file.string());
    std::istringstream in(read_file(file));
    std::string line;
    std::size_t no = 0;
    if (!std::getline(in, line)) {
      fail(file, 0, "empty file");
      return {};
    }
    ++no;
    std::string hash;
    std::istringstream head(line);
    std::string hash_tok, tool, version;
    head >> hash_tok >> tool >> version;
    if (hash_tok != "#" || tool != kToolName) {
      fail(file, no, "missing provenance line");
      return {};
    }
    for (std::string tok; head >> tok;) {
      if (tok.rfind("spec_hash=", 0) == 0) hash = tok.substr(10);
    }
    if (hash.empty()) fail(file, no, "provenance line has no spec_hash");
    while (std::getline(in, line)) {
      ++no;
      if (line.empty() || line[0] != '#') break;
    }
    const auto it = layouts().find(line);
    if (it == layouts().end()) {
      fail(file, no, "unknown header '" + line + "'");
      return hash;
    }
    const Layout layout = it->second;
    const std::size_t width = split(line).size();
    std::vector<double> prev;
    std::string first_id;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      ++no;
      if (line.empty()) continue;
      ++rows;
      const auto f = split(line);
      if (f.size() != width) {
        fail(file, no, "expected " + std::to_string(width) + " fields");
        continue;
      }
      std::vector<double> v;
      bool bad = false;
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (layout == Layout::Table && k == 4) continue;
        try {
          std::size_t used = 0;
          const double x = std::stod(f[k], &used);
          if (used != f[k].size() || !std::isfinite(x)) throw std::invalid_argument("");
          v.push_back(x);
        } catch (const std::exception&) {
          fail(file, no, "field " + std::to_string(k + 1) + " is not a finite number");
          bad = true;
          break;
        }
      }
      if (bad) continue;
      row(file, no, layout, f, v, prev, hash, first_id);
      prev = v;
    }
    if (rows == 0) fail(file, no, "no data rows");
    return hash;
  }

 private:
  void in_unit(const fs::path& file, std::size_t no, double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) fail(file, no, std::string(what) + " outside [0, 1]");
  }

  void row(const fs::path& file, std::size_t no, Layout layout, const std::vector<std::string>& f,
           const std::vector<double>& v, const std::vector<double>& prev, const std::string& hash,
           std::string& first_id) {
    switch (layout) {
      case Layout::Table:
        in_unit(file, no, v[1], "prob");
        if (!prev.empty() && !(v[0] > prev[0])) fail(file, no, "t not increasing");
        if (!prev.empty() && v[1] < prev[1]) fail(file, no, "prob decreasing");
        if (f[4] != hash) fail(file, no, "spec_hash column differs from the provenance line");
        if (first_id.empty()) first_id = f[2] + "," + f[3];
        if (f[2] + "," + f[3] != first_id) fail(file, no, "n_reps/seed change within the table");
        break;
      case Layout::Ecdf:
        in_unit(file, no, v[2], "prob");
        if (!prev.empty() && v[0] != prev[0]) fail(file, no, "n changes within the file");
        if (!prev.empty() && !(v[1] > prev[1])) fail(file, no, "t not increasing");
        if (!prev.empty() && v[2] < prev[2]) fail(file, no, "prob decreasing");
        break;
      case Layout::Gaps:
        in_unit(file, no, v[1], "E_n");
        if (!prev.empty() && !(v[0] > prev[0])) fail(file, no, "n not increasing");
        break;
      case Layout::OracleGaps:
        in_unit(file, no, v[1], "ks");
        in_unit(file, no, v[2], "gap");
        if (!prev.empty() && !(v[0] > prev[0])) fail(file, no, "n not increasing");
        break;
      case Layout::Probe:
        in_unit(file, no, v[1], "level");
        if (!(v[0] > 0.0)) fail(file, no, "eps must be positive");
        if (!(v[2] > 0.0)) fail(file, no, "envelope must be positive");
        if (std::fabs(v[3] - v[1] / v[2]) > 1e-12 * std::max(1.0, std::fabs(v[3]))) {
          fail(file, no, "ratio is not level / envelope");
        }
        if (!prev.empty() && !(v[0] > prev[0])) fail(file, no, "eps not increasing");
        if (!prev.empty() && v[1] < prev[1]) fail(file, no, "level decreasing in eps");
        break;
      case Layout::Localization:
        in_unit(file, no, v[5], "freq_stat_exceeds");
        in_unit(file, no, v[6], "freq_touch_exceeds");
        if (!prev.empty() && v[0] == prev[0] && v[1] > prev[1] &&
            (v[5] > prev[5] || v[6] > prev[6])) {
          fail(file, no, "frequency increases with K");
        }
        break;
      case Layout::Fit:
        if (!(v[0] > 0.0) || !(v[1] > 0.0)) fail(file, no, "n and E_n must be positive");
        break;
    }
  }

  VerifyReport& r_;
};

std::string config_hash(const fs::path& config) {
  try {
    return hex64(fnv1a64(json::parse(read_file(config)).dump()));
  } catch (const json::parse_error&) {
    return {};
  }
}

}  // namespace

VerifyReport verify(const std::string& path, const std::string& against) {
  VerifyReport r;
  Checker c(r);
  const fs::path p(path);
  if (!fs::exists(p)) throw IoError("no such artifact: " + path);
  std::vector<fs::path> csvs;
  fs::path dir = p.parent_path();
  if (fs::is_directory(p)) {
    dir = p;
    for (const auto& e : fs::directory_iterator(p)) {
      if (e.path().extension() == ".csv") csvs.push_back(e.path());
    }
    std::sort(csvs.begin(), csvs.end());
    if (csvs.empty()) c.fail(p, 0, "no CSV artifacts");
  } else {
    csvs.push_back(p);
  }
  const fs::path config = dir / "config.json";
  const std::string expected = fs::exists(config) ? config_hash(config) : std::string();
  if (fs::exists(config) && expected.empty()) c.fail(config, 0, "config.json is not valid JSON");
  for (const auto& f : csvs) {
    const std::string h = c.csv(f);
    if (!expected.empty() && !h.empty() && h != expected) {
      c.fail(f, 1, "spec_hash " + h + " does not match config.json (" + expected + ")");
    }
  }
  const fs::path summary = dir / "summary.json";
  if (fs::is_directory(p) && fs::exists(summary)) {
    r.checked.push_back(summary.string());
    try {
      const json s = json::parse(read_file(summary));
      if (!expected.empty() && s.value("spec_hash", std::string()) != expected) {
        c.fail(summary, 0, "spec_hash does not match config.json");
      }
    } catch (const json::parse_error&) {
      c.fail(summary, 0, "not valid JSON");
    }
  }
  if (!against.empty()) {
    const fs::path other(against);
    for (const auto& f : csvs) {
      const fs::path twin = fs::is_directory(other) ? other / f.filename() : other;
      if (!fs::exists(twin)) {
        c.fail(twin, 0, "missing counterpart of " + f.string());
      } else if (read_file(f) != read_file(twin)) {
        c.fail(f, 0, "differs from " + twin.string());
      }
    }
  }
  return r;
}

}  // namespace chernoff::cli
