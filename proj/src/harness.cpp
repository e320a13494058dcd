#include "wkbsplit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>

#include "wkbsplit/diagnostics.hpp"
#include "wkbsplit/errors.hpp"

namespace wkbsplit {

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------- config parsing

// Real values accept constant expressions such as 2^-10 or pi/4.
double parse_real(const std::string& text, int line) {
  if (text.empty()) throw ConfigError("empty value", line);
  try {
    const Expression e = Expression::parse(text);
    const double a = e(0.0);
    const double b = e(1.0);
    if (a != b && !(std::isnan(a) && std::isnan(b))) {
      throw ConfigError("value '" + text + "' must not depend on x", line);
    }
    if (!std::isfinite(a)) throw ConfigError("value '" + text + "' is not finite", line);
    return a;
  } catch (const InvalidInput& e) {
    throw ConfigError("malformed number '" + text + "'", line);
  }
}

std::size_t parse_count(const std::string& text, int line) {
  const double v = parse_real(text, line);
  if (v < 1.0 || v != std::floor(v) || v > 1e15) {
    throw ConfigError("expected a positive integer, got '" + text + "'", line);
  }
  return static_cast<std::size_t>(v);
}

std::size_t parse_power_of_two(const std::string& text, int line) {
  const std::size_t n = parse_count(text, line);
  if (!is_power_of_two(n)) throw ConfigError("'" + text + "' is not a power of two", line);
  return n;
}

bool parse_bool(const std::string& text, int line) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("expected a boolean, got '" + text + "'", line);
}

template <class F>
auto parse_list(const std::string& text, int line, F parse_one) {
  std::vector<decltype(parse_one(std::string{}, 0))> out;
  if (text.empty()) throw ConfigError("empty list", line);
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty list entry", line);
    out.push_back(parse_one(item, line));
  }
  return out;
}

// ---------------------------------------------------------------- references

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string reference_key(std::string_view kind, std::string_view scheme, double eps,
                          std::size_t nx, std::size_t nt) {
  return std::string(kind) + "-" + std::string(scheme) + "-eps" +
         hex64(std::bit_cast<std::uint64_t>(eps)) + "-nx" + std::to_string(nx) + "-nt" +
         std::to_string(nt);
}

std::string reference_id(std::string_view kind, std::string_view scheme, std::size_t nx,
                         std::size_t nt) {
  return std::string(kind) + ":" + std::string(scheme) + ":nx" + std::to_string(nx) + ":nt" +
         std::to_string(nt);
}

template <class T, class Make>
std::shared_ptr<const T> get_or_create(
    std::mutex& mutex, std::map<std::string, std::shared_future<std::shared_ptr<const T>>>& slots,
    const std::string& key, Make make) {
  std::promise<std::shared_ptr<const T>> promise;
  std::shared_future<std::shared_ptr<const T>> slot;
  bool owner = false;
  {
    std::lock_guard lock(mutex);
    auto it = slots.find(key);
    if (it == slots.end()) {
      slot = promise.get_future().share();
      slots.emplace(key, slot);
      owner = true;
    } else {
      slot = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(make());
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return slot.get();
}

std::string cache_header(std::string_view kind, std::string_view scheme, double eps,
                         std::size_t nx, std::size_t nt, const std::string& hash) {
  return "# wkbsplit-reference kind=" + std::string(kind) + " scheme=" + std::string(scheme) +
         " eps=" + format17(eps) + " nx=" + std::to_string(nx) + " nt=" + std::to_string(nt) +
         " data=" + hash;
}

// Reads the rows of a cache file, each holding `columns` reals. Returns false
// when the file does not exist.
bool read_cache_rows(const std::filesystem::path& path, const std::string& header, std::size_t n,
                     std::size_t columns, const PeriodicGrid& grid,
                     std::vector<std::vector<double>>& rows) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw CacheError("cache file " + path.string() + ": header does not match the request");
  }
  rows.assign(n, std::vector<double>(columns));
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::getline(in, line)) {
      throw CacheError("cache file " + path.string() + ": truncated at row " + std::to_string(j));
    }
    std::istringstream row(line);
    for (std::size_t c = 0; c < columns; ++c) {
      std::string token;
      if (!(row >> token)) {
        throw CacheError("cache file " + path.string() + ": short row " + std::to_string(j));
      }
      char* end = nullptr;
      rows[j][c] = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size() || !std::isfinite(rows[j][c])) {
        throw CacheError("cache file " + path.string() + ": bad number '" + token + "'");
      }
    }
    std::string extra;
    if (row >> extra) {
      throw CacheError("cache file " + path.string() + ": long row " + std::to_string(j));
    }
    if (std::abs(rows[j][0] - grid.node(j)) > 1e-12) {
      throw CacheError("cache file " + path.string() + ": node mismatch at row " +
                       std::to_string(j));
    }
  }
  if (std::getline(in, line) && !trim(line).empty()) {
    throw CacheError("cache file " + path.string() + ": trailing data");
  }
  return true;
}

void write_cache_rows(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<double>>& rows) {
  if (path.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create cache directory " + path.parent_path().string());
  // Write to a private temporary, then rename, so readers never see partial files.
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache file " + tmp.string());
    out << header << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ' ';
        out << format17(row[c]);
      }
      out << '\n';
    }
    if (!out.flush()) throw IoError("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move cache file into place: " + path.string());
}

double relative_difference(const WkbState& a, const WkbState& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.grid().size(); ++j) {
    num += std::pow(a.phase()[j] - b.phase()[j], 2) + std::norm(a.amplitude()[j] - b.amplitude()[j]);
    den += std::pow(b.phase()[j], 2) + std::norm(b.amplitude()[j]);
  }
  return std::sqrt(num / den);
}

double relative_difference(const WaveState& a, const WaveState& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.grid().size(); ++j) {
    num += std::norm(a.psi()[j] - b.psi()[j]);
    den += std::norm(b.psi()[j]);
  }
  return std::sqrt(num / den);
}

template <class Ref, class Fetch>
std::shared_ptr<const Ref> refine(std::size_t nt_ref, const ReferenceSettings& settings,
                                  Fetch fetch) {
  auto current = fetch(nt_ref);
  if (!settings.refine) return current;
  for (std::size_t nt = nt_ref; 2 * nt <= settings.nt_ref_max; nt *= 2) {
    auto finer = fetch(2 * nt);
    if (relative_difference(current->state, finer->state) < settings.refine_tol) return finer;
    current = finer;
  }
  auto last = std::make_shared<Ref>(*current);
  last->id += ":unconverged";
  return last;
}

double mass(const ComplexField& a) {
  double m = 0.0;
  for (const Complex& z : a.values()) m += std::norm(z);
  return a.grid().dx() * m;
}

}  // namespace

// ---------------------------------------------------------------- config

InitialData SweepConfig::initial_data() const {
  if (data == "paper41") return InitialData::caustic_benchmark();
  return InitialData::from_expressions(s0_expr, a0_expr, a0_im_expr, v_expr);
}

void SweepConfig::validate() const {
  if (schemes.empty() || eps.empty() || nx.empty() || nt.empty()) {
    throw ConfigError("schemes, eps, nx and nt must be nonempty", 0);
  }
  for (SchemeKind k : schemes) {
    if (!is_wkb_scheme(k)) {
      throw ConfigError("sweeps run WKB schemes only, got " + std::string(to_string(k)), 0);
    }
  }
  for (double e : eps) {
    if (!(e > 0.0) || e > 1.0) throw ConfigError("eps values must lie in (0, 1]", 0);
  }
  for (std::size_t n : nx) {
    if (!is_power_of_two(n) || n < 4) throw ConfigError("nx values must be powers of two >= 4", 0);
  }
  for (std::size_t n : nt) {
    if (!is_power_of_two(n)) throw ConfigError("nt values must be powers of two", 0);
    if (reference.nt_ref % n != 0) {
      throw ConfigError("nt = " + std::to_string(n) + " does not divide nt_ref", 0);
    }
  }
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be > 0", 0);
  if (data != "paper41" && data != "expr") {
    throw ConfigError("data must be 'paper41' or 'expr'", 0);
  }
  const ReferenceSettings& r = reference;
  if (!is_power_of_two(r.nx_ref) || r.nx_ref < 4 || !is_power_of_two(r.nx_ref_wave) ||
      r.nx_ref_wave < 4 || !is_power_of_two(r.nt_ref) || !is_power_of_two(r.nt_ref_max)) {
    throw ConfigError("reference sizes must be powers of two", 0);
  }
  if (r.nt_ref_max < r.nt_ref) throw ConfigError("nt_ref_max must be >= nt_ref", 0);
  if (!(r.refine_tol > 0.0)) throw ConfigError("refine_tol must be > 0", 0);
  if (!(s > 1.5) || !std::isfinite(s)) throw ConfigError("s must exceed 3/2", 0);
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? end : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const int ln = line_no;

    if (key == "schemes" || key == "scheme") {
      cfg.schemes = parse_list(value, ln, [](const std::string& s, int l) {
        try {
          return parse_scheme_kind(s);
        } catch (const InvalidInput&) {
          throw ConfigError("unknown scheme '" + s + "'", l);
        }
      });
    } else if (key == "eps") {
      cfg.eps = parse_list(value, ln, parse_real);
    } else if (key == "nx") {
      cfg.nx = parse_list(value, ln, parse_power_of_two);
    } else if (key == "nt") {
      cfg.nt = parse_list(value, ln, parse_power_of_two);
    } else if (key == "t_final") {
      cfg.t_final = parse_real(value, ln);
    } else if (key == "data") {
      if (value != "paper41" && value != "expr") {
        throw ConfigError("data must be 'paper41' or 'expr'", ln);
      }
      cfg.data = value;
    } else if (key == "s0" || key == "a0" || key == "a0_im" || key == "v") {
      try {
        Expression::parse(value);
      } catch (const InvalidInput& e) {
        throw ConfigError(e.what(), ln);
      }
      (key == "s0"   ? cfg.s0_expr
       : key == "a0" ? cfg.a0_expr
       : key == "v"  ? cfg.v_expr
                     : cfg.a0_im_expr) = value;
    } else if (key == "nx_ref") {
      cfg.reference.nx_ref = parse_power_of_two(value, ln);
    } else if (key == "nt_ref") {
      cfg.reference.nt_ref = parse_power_of_two(value, ln);
    } else if (key == "nx_ref_wave") {
      cfg.reference.nx_ref_wave = parse_power_of_two(value, ln);
    } else if (key == "nt_ref_max") {
      cfg.reference.nt_ref_max = parse_power_of_two(value, ln);
    } else if (key == "refine_reference") {
      cfg.reference.refine = parse_bool(value, ln);
    } else if (key == "refine_tol") {
      cfg.reference.refine_tol = parse_real(value, ln);
    } else if (key == "reference_time") {
      if (value == "fixed") {
        cfg.reference.time = ReferenceTime::fixed;
      } else if (value == "matched") {
        cfg.reference.time = ReferenceTime::matched;
      } else {
        throw ConfigError("reference_time must be 'fixed' or 'matched'", ln);
      }
    } else if (key == "s") {
      cfg.s = parse_real(value, ln);
    } else if (key == "dealias") {
      cfg.dealias = parse_bool(value, ln);
    } else if (key == "output") {
      if (value.empty()) throw ConfigError("empty output path", ln);
      cfg.output = value;
    } else if (key == "cache_dir") {
      cfg.cache_dir = value;
    } else if (key == "workers") {
      cfg.workers = value == "0" ? 0 : parse_count(value, ln);
    } else {
      throw ConfigError("unknown key '" + key + "'", ln);
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string_view to_string(RecordStatus status) {
  return status == RecordStatus::ok ? "ok" : "diverged";
}

// ---------------------------------------------------------------- reference store

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ReferenceStore::ReferenceStore(InitialData data, double t_final, bool dealias,
                               std::filesystem::path cache_dir)
    : data_(std::move(data)), t_final_(t_final), dealias_(dealias), cache_dir_(std::move(cache_dir)) {
  data_hash_ = hex64(fnv1a(data_.canonical + ";t_final=" + format17(t_final_) +
                           ";dealias=" + (dealias_ ? "1" : "0")));
}

std::filesystem::path ReferenceStore::cache_file(std::string_view kind, std::string_view scheme,
                                                 double eps, std::size_t nx,
                                                 std::size_t nt) const {
  if (cache_dir_.empty()) return {};
  return cache_dir_ / (reference_key(kind, scheme, eps, nx, nt) + "-" + data_hash_ + ".txt");
}

std::shared_ptr<const ReferenceStore::Wkb> ReferenceStore::wkb(SchemeKind scheme, double eps,
                                                               std::size_t nx, std::size_t nt) {
  if (!is_wkb_scheme(scheme)) throw InvalidInput("ReferenceStore::wkb needs a WKB scheme");
  const std::string_view name = to_string(scheme);
  return get_or_create<Wkb>(mutex_, wkb_, reference_key("wkb", name, eps, nx, nt), [&] {
    const PeriodicGrid grid(nx);
    const std::string header = cache_header("wkb", name, eps, nx, nt, data_hash_);
    const std::filesystem::path file = cache_file("wkb", name, eps, nx, nt);
    const std::string id = reference_id("wkb", name, nx, nt);
    std::vector<std::vector<double>> rows;
    if (!file.empty() && read_cache_rows(file, header, nx, 4, grid, rows)) {
      std::vector<double> s(nx);
      std::vector<Complex> a(nx);
      for (std::size_t j = 0; j < nx; ++j) {
        a[j] = {rows[j][1], rows[j][2]};
        s[j] = rows[j][3];
      }
      return std::make_shared<const Wkb>(
          Wkb{WkbState(RealField(grid, std::move(s)), ComplexField(grid, std::move(a))), id});
    }
    SchemeSpec spec{scheme, eps, data_.sampled_potential(grid)};
    spec.dealias = dealias_;
    WkbState u = evolve(data_.wkb_state(grid), spec, TimeMarch::to_final_time(t_final_, nt)).state;
    rows.assign(nx, std::vector<double>(4));
    for (std::size_t j = 0; j < nx; ++j) {
      rows[j] = {grid.node(j), u.amplitude()[j].real(), u.amplitude()[j].imag(), u.phase()[j]};
    }
    write_cache_rows(file, header, rows);
    return std::make_shared<const Wkb>(Wkb{std::move(u), id});
  });
}

std::shared_ptr<const ReferenceStore::Wave> ReferenceStore::wave(double eps, std::size_t nx,
                                                                 std::size_t nt) {
  const std::string_view name = to_string(SchemeKind::tssp_yoshida4);
  return get_or_create<Wave>(mutex_, wave_, reference_key("wave", name, eps, nx, nt), [&] {
    const PeriodicGrid grid(nx);
    const std::string header = cache_header("wave", name, eps, nx, nt, data_hash_);
    const std::filesystem::path file = cache_file("wave", name, eps, nx, nt);
    const std::string id = reference_id("wave", name, nx, nt);
    std::vector<std::vector<double>> rows;
    if (!file.empty() && read_cache_rows(file, header, nx, 3, grid, rows)) {
      std::vector<Complex> psi(nx);
      for (std::size_t j = 0; j < nx; ++j) psi[j] = {rows[j][1], rows[j][2]};
      return std::make_shared<const Wave>(Wave{WaveState(ComplexField(grid, std::move(psi)), eps), id});
    }
    SchemeSpec spec{SchemeKind::tssp_yoshida4, eps, data_.sampled_potential(grid)};
    spec.dealias = dealias_;
    WaveState w =
        evolve(data_.wave_state(grid, eps), spec, TimeMarch::to_final_time(t_final_, nt)).state;
    rows.assign(nx, std::vector<double>(3));
    for (std::size_t j = 0; j < nx; ++j) {
      rows[j] = {grid.node(j), w.psi()[j].real(), w.psi()[j].imag()};
    }
    write_cache_rows(file, header, rows);
    return std::make_shared<const Wave>(Wave{std::move(w), id});
  });
}

std::shared_ptr<const ReferenceStore::Wkb> ReferenceStore::refined_wkb(
    double eps, const ReferenceSettings& settings) {
  return refine<Wkb>(settings.nt_ref, settings, [&](std::size_t nt) {
    return wkb(SchemeKind::strang_palindromic, eps, settings.nx_ref, nt);
  });
}

std::shared_ptr<const ReferenceStore::Wave> ReferenceStore::refined_wave(
    double eps, const ReferenceSettings& settings) {
  return refine<Wave>(settings.nt_ref, settings,
                      [&](std::size_t nt) { return wave(eps, settings.nx_ref_wave, nt); });
}

// ---------------------------------------------------------------- sweep

namespace {

struct Cell {
  SchemeKind scheme;
  double eps;
  std::size_t nx;
  std::size_t nt;
};

ErrorRecord run_cell(const SweepConfig& cfg, const InitialData& data, ReferenceStore& store,
                     const Cell& cell) {
  const PeriodicGrid grid(cell.nx);
  ErrorRecord rec;
  rec.scheme = std::string(to_string(cell.scheme));
  rec.eps = cell.eps;
  rec.nx = cell.nx;
  rec.nt = cell.nt;
  rec.t_final = cfg.t_final;
  const TimeMarch march = TimeMarch::to_final_time(cfg.t_final, cell.nt);
  rec.h = march.h;
  rec.dx = grid.dx();

  const auto wkb_ref = cfg.reference.time == ReferenceTime::fixed
                           ? store.refined_wkb(cell.eps, cfg.reference)
                           : store.wkb(cell.scheme, cell.eps, cfg.reference.nx_ref, cell.nt);
  const auto wave_ref = store.refined_wave(cell.eps, cfg.reference);
  rec.reference_id = wkb_ref->id + ";" + wave_ref->id + ";data=" + store.data_hash();

  SchemeSpec spec{cell.scheme, cell.eps, data.sampled_potential(grid)};
  spec.dealias = cfg.dealias;
  const WkbState u0 = data.wkb_state(grid);
  const auto start = std::chrono::steady_clock::now();
  try {
    const WkbState u = evolve(u0, spec, march).state;
    rec.wallclock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const WkbState ref_sa(resample(wkb_ref->state.phase(), grid),
                          resample(wkb_ref->state.amplitude(), grid));
    const WaveState ref_psi(resample(wave_ref->state.psi(), grid), cell.eps);
    const ErrorTriple e = error_metrics(ref_psi, ref_sa, u, cell.eps);
    rec.err_rho = e.err_rho;
    rec.err_psi = e.err_psi;
    rec.err_sa = e.err_sa;
    const double m0 = mass(u0.amplitude());
    rec.mass_drift_rel = std::abs(mass(u.amplitude()) - m0) / m0;
  } catch (const CharacteristicsDiverged&) {
    rec.wallclock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.err_rho = rec.err_psi = rec.err_sa = rec.mass_drift_rel = nan;
    rec.status = RecordStatus::diverged;
  }
  return rec;
}

}  // namespace

std::vector<ErrorRecord> run_convergence_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const InitialData data = cfg.initial_data();
  ReferenceStore store(data, cfg.t_final, cfg.dealias, cfg.cache_dir);

  std::vector<Cell> cells;
  for (SchemeKind scheme : cfg.schemes) {
    for (double eps : cfg.eps) {
      for (std::size_t nx : cfg.nx) {
        for (std::size_t nt : cfg.nt) cells.push_back({scheme, eps, nx, nt});
      }
    }
  }

  std::vector<ErrorRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        records[i] = run_cell(cfg, data, store, cells[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };

  std::size_t n_workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  n_workers = std::clamp<std::size_t>(n_workers, 1, std::max<std::size_t>(cells.size(), 1));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(records.begin(), records.end(), [](const ErrorRecord& a, const ErrorRecord& b) {
    return std::tie(a.scheme, a.eps, a.nx, a.nt) < std::tie(b.scheme, b.eps, b.nx, b.nt);
  });
  return records;
}

// ---------------------------------------------------------------- CSV

const char* const kCsvHeader =
    "scheme,eps,nx,nt,h,dx,t_final,err_rho,err_psi,err_sa,mass_drift_rel,wallclock_seconds,"
    "status,reference_id";

std::string format_records(const std::vector<ErrorRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const ErrorRecord& r : records) {
    out += r.scheme + ',' + format17(r.eps) + ',' + std::to_string(r.nx) + ',' +
           std::to_string(r.nt) + ',' + format17(r.h) + ',' + format17(r.dx) + ',' +
           format17(r.t_final) + ',' + format17(r.err_rho) + ',' + format17(r.err_psi) + ',' +
           format17(r.err_sa) + ',' + format17(r.mass_drift_rel) + ',' +
           format17(r.wallclock_seconds) + ',' + std::string(to_string(r.status)) + ',' +
           r.reference_id + '\n';
  }
  return out;
}

void write_records(const std::vector<ErrorRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_records(records);
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

std::vector<ErrorRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError(path.string() + ": missing or unexpected CSV header");
  }
  auto real = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw IoError(path.string() + ": bad number '" + s + "'");
    return v;
  };
  auto count = [&](const std::string& s) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw IoError(path.string() + ": bad integer '" + s + "'");
    }
    return v;
  };
  std::vector<ErrorRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 14) throw IoError(path.string() + ": expected 14 fields in '" + line + "'");
    ErrorRecord r;
    r.scheme = f[0];
    r.eps = real(f[1]);
    r.nx = count(f[2]);
    r.nt = count(f[3]);
    r.h = real(f[4]);
    r.dx = real(f[5]);
    r.t_final = real(f[6]);
    r.err_rho = real(f[7]);
    r.err_psi = real(f[8]);
    r.err_sa = real(f[9]);
    r.mass_drift_rel = real(f[10]);
    r.wallclock_seconds = real(f[11]);
    if (f[12] == "ok") {
      r.status = RecordStatus::ok;
    } else if (f[12] == "diverged") {
      r.status = RecordStatus::diverged;
    } else {
      throw IoError(path.string() + ": unknown status '" + f[12] + "'");
    }
    r.reference_id = f[13];
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace wkbsplit
